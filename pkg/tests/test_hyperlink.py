import re

from mathwiki.frames import new_document
from mathwiki.hyperlink import (
    LinkerConfig,
    build_index,
    export_index,
    import_index,
    link_text,
    parse_config,
)
from mathwiki.parser import split_commands


def make_corpus(files):
    return [(path, new_document(path, split_commands(text))) for path, text in files]


FAN = "let FAN = new_definition `FAN x = x`;;\n"
LEMMA = "let FAN_LEMMA = prove (`FAN a = a`, REWRITE_TAC [FAN]);;\n"


def test_build_index_definition():
    index = build_index(make_corpus([("src/fan.hl", FAN)]))
    entry = index.get("FAN")
    assert entry is not None
    assert (entry.kind, entry.file, entry.anchor) == ("definition", "src/fan.hl", "FAN")


def test_empty_corpus():
    assert len(build_index([])) == 0


def test_ambiguous_first_definition_wins():
    corpus = make_corpus([("src/a.hl", FAN), ("src/b.hl", FAN)])
    index = build_index(corpus)
    entry = index.get("FAN")
    assert entry.file == "src/a.hl"
    assert entry.ambiguous


def test_deny_list_suppresses():
    config = LinkerConfig(deny_list=["FAN"])
    index = build_index(make_corpus([("src/fan.hl", FAN + LEMMA)]), config)
    assert index.get("FAN") is None
    assert index.get("FAN_LEMMA") is not None


def test_allow_list_adds():
    config = LinkerConfig(allow_list=["REWRITE_TAC"])
    index = build_index(make_corpus([("src/fan.hl", FAN + LEMMA)]), config)
    entry = index.get("REWRITE_TAC")
    assert entry is not None
    assert entry.kind == "other"


def test_export_format():
    index = build_index(make_corpus([("fan.hl", FAN)]))
    out = export_index(index)
    assert "FAN\tdefinition\tfan.hl\tfan.html#FAN\n" in out


def test_export_empty():
    assert export_index(build_index([])) == ""


def test_export_import_round_trip():
    index = build_index(make_corpus([("src/fan.hl", FAN + LEMMA), ("src/b.hl", FAN)]))
    exported = export_index(index)
    assert export_index(import_index(exported)) == exported


def test_export_sorted_and_stable():
    corpus = make_corpus([("src/fan.hl", FAN + LEMMA)])
    a = export_index(build_index(corpus))
    b = export_index(build_index(make_corpus([("src/fan.hl", FAN + LEMMA)])))
    assert a == b
    names = [line.split("\t")[0] for line in a.splitlines()]
    assert names == sorted(names)


def test_link_text_links_indexed_identifier():
    corpus = make_corpus([("src/fan.hl", FAN + LEMMA), ("src/use.hl", "e (MATCH_MP_TAC FAN_LEMMA);;\n")])
    index = build_index(corpus)
    use = dict(corpus)["src/use.hl"]
    link_text(use, index)
    assert 'href="src/fan.html#FAN_LEMMA"' in use.frames[0].markup


def test_unindexed_text_has_no_links():
    corpus = make_corpus([("src/use.hl", "e (SOME_OTHER_TAC thing);;\n")])
    doc = dict(corpus)["src/use.hl"]
    link_text(doc, build_index([]))
    assert "<a " not in doc.frames[0].markup


def test_definition_site_is_anchor_not_self_link():
    corpus = make_corpus([("src/fan.hl", FAN)])
    index = build_index(corpus)
    doc = dict(corpus)["src/fan.hl"]
    link_text(doc, index)
    markup = doc.frames[0].markup
    assert 'id="FAN"' in markup
    first = re.search(r'<span class="def" id="FAN">FAN</span>', markup)
    assert first is not None


def test_strings_not_linked():
    corpus = make_corpus([("src/fan.hl", FAN + 'let s = "FAN inside";;\n')])
    index = build_index(corpus)
    doc = dict(corpus)["src/fan.hl"]
    link_text(doc, index)
    string_frame = doc.frames[1].markup
    assert "<a " not in string_frame


def test_comments_linked_and_styled():
    corpus = make_corpus([("src/fan.hl", FAN + "(* see FAN *)\n")])
    index = build_index(corpus)
    doc = dict(corpus)["src/fan.hl"]
    link_text(doc, index)
    comment_markup = doc.frames[1].markup
    assert '<span class="comment">' in comment_markup
    assert 'href="#FAN"' in comment_markup


def test_text_preservation():
    import html as html_mod

    corpus = make_corpus([("src/fan.hl", FAN + LEMMA)])
    index = build_index(corpus)
    doc = dict(corpus)["src/fan.hl"]
    link_text(doc, index)
    for frame in doc.frames:
        stripped = re.sub(r"<[^>]+>", "", frame.markup)
        assert html_mod.unescape(stripped) == frame.command_text


def test_parse_config_sections():
    config = parse_config(
        "[patterns]\nlet <NAME> = prove\n[allow]\nGOOD\n[deny]\nBAD\n"
    )
    assert config.patterns == [("let <NAME> = prove", "theorem")]
    assert config.allow_list == ["GOOD"]
    assert config.deny_list == ["BAD"]


def test_deny_never_anchors_or_links():
    config = LinkerConfig(deny_list=["FAN"])
    corpus = make_corpus([("src/fan.hl", FAN + LEMMA)])
    index = build_index(corpus, config)
    for _, doc in corpus:
        link_text(doc, index)
        for frame in doc.frames:
            assert 'id="FAN"' not in frame.markup
            assert "#FAN\"" not in frame.markup
