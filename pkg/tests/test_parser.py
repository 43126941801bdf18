import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mathwiki.frames import COMMAND, STANDALONE_COMMENT, new_document, reconstruct_source
from mathwiki.parser import ParseError, first_token, split_commands

from conftest import EXAMPLE_SCRIPT


def texts(frames):
    return [f.command_text for f in frames]


def test_golden_example_four_frames():
    frames = split_commands(EXAMPLE_SCRIPT)
    assert texts(frames) == [
        "(* Example code fragment. *)",
        "g `x=x`;;",
        "e REFL_TAC;;",
        "let t = (* Use top_thm to verify the proof. *)\n  top_thm();;",
    ]
    assert [f.kind for f in frames] == [STANDALONE_COMMENT, COMMAND, COMMAND, COMMAND]


def test_golden_example_round_trip():
    doc = new_document("src/ex.hl", split_commands(EXAMPLE_SCRIPT))
    assert reconstruct_source(doc) == EXAMPLE_SCRIPT


def test_empty_input():
    assert split_commands("") == []


def test_terminator_inside_comment_is_opaque():
    frames = split_commands("(* end;; *)\nlet a = 1;;\n")
    assert texts(frames)[:2] == ["(* end;; *)", "let a = 1;;"]
    assert frames[0].kind == STANDALONE_COMMENT
    assert frames[1].kind == COMMAND


def test_terminator_inside_string_is_opaque():
    frames = split_commands('let s = "x;;\ny";;\n')
    command_frames = [f for f in frames if f.kind == COMMAND]
    assert len(command_frames) == 1
    assert command_frames[0].command_text == 'let s = "x;;\ny";;'


def test_terminator_inside_term_quote_is_opaque():
    frames = split_commands("g `x;;\ny`;;\n")
    assert [f.command_text for f in frames if f.kind == COMMAND] == ["g `x;;\ny`;;"]


def test_nested_comments():
    src = "(* outer (* inner;; *) still outer *)\nlet a = 1;;"
    frames = split_commands(src)
    assert texts(frames) == ["(* outer (* inner;; *) still outer *)", "let a = 1;;"]


def test_unterminated_comment_reports_opening_offset():
    with pytest.raises(ParseError) as err:
        split_commands("let a = 1;;\n(* oops")
    assert err.value.offset == 12


def test_unterminated_string():
    with pytest.raises(ParseError):
        split_commands('let s = "oops;;\n')


def test_trailing_text_flagged_unterminated():
    frames = split_commands("let a = 1;;\nlet b = 2")
    assert frames[-1].command_text == "let b = 2"
    assert frames[-1].unterminated


def test_trailing_comment_is_standalone():
    frames = split_commands("let a = 1;;\n(* done *)\n")
    assert frames[1].kind == STANDALONE_COMMENT
    assert frames[1].command_text == "(* done *)"


def test_inline_comment_before_command_attaches_to_command():
    frames = split_commands("(* same line *) let a = 1;;\n")
    assert len([f for f in frames if f.kind == COMMAND]) == 1
    assert frames[0].command_text.startswith("(* same line *) let")


def test_comment_chain_on_own_lines():
    frames = split_commands("(* one *) (* two *)\nlet a = 1;;")
    assert [f.kind for f in frames] == [STANDALONE_COMMENT, STANDALONE_COMMENT, COMMAND]


def test_terminator_at_eof_without_newline():
    frames = split_commands("let a = 1;;")
    assert texts(frames) == ["let a = 1;;"]


def test_no_internal_toplevel_terminator():
    for f in split_commands("let a = 1;;\nlet b = 2;;\ng `x`;;\n"):
        if f.kind == COMMAND:
            body = f.command_text[:-2]
            assert ";;\n" not in body


PIECES = st.sampled_from(
    [
        "let a = 1;;\n",
        "g `x = x`;;\n",
        "e REFL_TAC;;\n",
        "(* a comment *)\n",
        "(* nested (* c;; *) *)\n",
        'let s = "str;; lit";;\n',
        "\n",
        "  \n",
        "let m =\n  2;;\n",
        "module Fan = struct;;\n",
        "end;;\n",
    ]
)


@given(st.lists(PIECES, max_size=12))
@settings(max_examples=200)
def test_round_trip_random_scripts(pieces):
    src = "".join(pieces)
    doc = new_document("src/r.hl", split_commands(src))
    assert reconstruct_source(doc) == src


@given(st.text(alphabet="ab;`\"()* \n", max_size=40))
@settings(max_examples=300)
def test_round_trip_arbitrary_text(src):
    try:
        frames = split_commands(src)
    except ParseError:
        return
    doc = new_document("src/r.hl", frames, flavor="formal_script")
    assert reconstruct_source(doc) == src


@given(st.lists(PIECES, max_size=8))
def test_determinism(pieces):
    src = "".join(pieces)
    assert split_commands(src) == split_commands(src)


def test_first_token_skips_comments():
    assert first_token("(* c *) module X;;") == "module"
    assert first_token("  end;;") == "end"
    assert first_token("(* only comment *)") is None
