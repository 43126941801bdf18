"""Heuristic two-pass hyperlinker for formal sources.

Pass one scans the corpus for the common definition-introducing patterns and
builds a symbol index (name -> kind, file, frame, anchor).  Pass two renders
each frame as HTML with every indexed identifier linked to its definition.
The index exports as TSV for external consumers.
"""

from __future__ import annotations

import html
import re
from dataclasses import dataclass, field
from pathlib import PurePosixPath
from typing import Iterable, Optional

from .frames import Document

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")

DEFAULT_PATTERNS = [
    ("let <NAME> = prove", "theorem"),
    ("let <NAME> = new_definition", "definition"),
    ("let <NAME> = define", "definition"),
    ("let <NAME> = new_axiom", "definition"),
    ("let <NAME> = new_basic_definition", "definition"),
    ("let <NAME> = REWRITE_RULE", "theorem"),
]


@dataclass
class SymbolIndexEntry:
    name: str
    kind: str
    file: str
    frame: int
    anchor: str
    ambiguous: bool = False


@dataclass
class LinkerConfig:
    patterns: list = field(default_factory=lambda: list(DEFAULT_PATTERNS))
    allow_list: list[str] = field(default_factory=list)
    deny_list: list[str] = field(default_factory=list)


def _guess_kind(template: str) -> str:
    lowered = template.lower()
    if "prove" in lowered or "rule" in lowered or "tac" in lowered:
        return "theorem"
    if "def" in lowered or "axiom" in lowered:
        return "definition"
    return "other"


def parse_config(text: str) -> LinkerConfig:
    """Config file: one item per line under [patterns] / [allow] / [deny]."""
    config = LinkerConfig(patterns=[])
    section = "patterns"
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line in ("[patterns]", "[allow]", "[deny]"):
            section = line[1:-1]
            continue
        if section == "patterns":
            config.patterns.append((line, _guess_kind(line)))
        elif section == "allow":
            config.allow_list.append(line)
        else:
            config.deny_list.append(line)
    if not config.patterns:
        config.patterns = list(DEFAULT_PATTERNS)
    return config


def _compile_pattern(template: str) -> re.Pattern:
    parts = []
    for piece in template.split():
        if piece == "<NAME>":
            parts.append(r"([A-Za-z_][A-Za-z0-9_']*)")
        else:
            parts.append(re.escape(piece))
    return re.compile(r"\b" + r"\s+".join(parts))


class SymbolIndex:
    def __init__(self):
        self.entries: dict[str, SymbolIndexEntry] = {}

    def get(self, name: str) -> Optional[SymbolIndexEntry]:
        return self.entries.get(name)

    def __contains__(self, name):
        return name in self.entries

    def __len__(self):
        return len(self.entries)

    def add(self, entry: SymbolIndexEntry):
        existing = self.entries.get(entry.name)
        if existing is None:
            self.entries[entry.name] = entry
        else:
            existing.ambiguous = True


def html_path(source_path: str) -> str:
    return str(PurePosixPath(source_path).with_suffix(".html"))


def link_url(entry: SymbolIndexEntry, from_file: Optional[str] = None) -> str:
    if from_file is not None and from_file == entry.file:
        return f"#{entry.anchor}"
    return f"{html_path(entry.file)}#{entry.anchor}"


def build_index(corpus: Iterable[tuple[str, Document]], config: Optional[LinkerConfig] = None) -> SymbolIndex:
    config = config or LinkerConfig()
    compiled = [(_compile_pattern(t), kind) for t, kind in config.patterns]
    deny = set(config.deny_list)
    index = SymbolIndex()
    pending_allow = [n for n in config.allow_list if n not in deny]
    corpus = list(corpus)
    for path, doc in corpus:
        for frame in doc.frames:
            for pattern, kind in compiled:
                for m in pattern.finditer(frame.command_text):
                    name = m.group(1)
                    if name in deny:
                        continue
                    index.add(SymbolIndexEntry(name, kind, path, frame.id, name))
    # allow-listed names anchor at the start of the first file mentioning them
    for name in pending_allow:
        if name in index:
            continue
        token = re.compile(rf"\b{re.escape(name)}\b")
        for path, doc in corpus:
            if any(token.search(f.command_text) for f in doc.frames):
                index.add(SymbolIndexEntry(name, "other", path, 0, name))
                break
    return index


def export_index(index: SymbolIndex) -> str:
    lines = []
    for name in sorted(index.entries):
        e = index.entries[name]
        lines.append(f"{e.name}\t{e.kind}\t{e.file}\t{html_path(e.file)}#{e.anchor}\n")
    return "".join(lines)


def import_index(text: str) -> SymbolIndex:
    index = SymbolIndex()
    for line in text.splitlines():
        if not line.strip():
            continue
        name, kind, file, url = line.split("\t")
        anchor = url.rsplit("#", 1)[1] if "#" in url else name
        index.add(SymbolIndexEntry(name, kind, file, 0, anchor))
    return index


def _regions(text: str):
    """Split command text into (kind, span) regions: code, comment, string,
    quote.  Comments nest; strings honor backslash escapes."""
    regions = []
    i, n = 0, len(text)
    start = 0

    def flush(end, kind="code"):
        nonlocal start
        if end > start:
            regions.append((kind, start, end))
        start = end

    while i < n:
        if text.startswith("(*", i):
            flush(i)
            depth = 1
            j = i + 2
            while j < n and depth:
                if text.startswith("(*", j):
                    depth += 1
                    j += 2
                elif text.startswith("*)", j):
                    depth -= 1
                    j += 2
                else:
                    j += 1
            regions.append(("comment", i, j))
            start = i = j
        elif text[i] == '"':
            flush(i)
            j = i + 1
            while j < n:
                if text[j] == "\\":
                    j += 2
                elif text[j] == '"':
                    j += 1
                    break
                else:
                    j += 1
            regions.append(("string", i, j))
            start = i = j
        elif text[i] == "`":
            flush(i)
            j = text.find("`", i + 1)
            j = n if j < 0 else j + 1
            regions.append(("quote", i, j))
            start = i = j
        else:
            i += 1
    flush(n)
    return regions


def link_text(doc: Document, index: SymbolIndex) -> None:
    """Render each frame's command text as hyperlinked HTML into frame.markup.

    Indexed identifiers become links; the defining occurrence becomes the
    anchor element instead of a self-link; strings are never linked.
    """
    for frame in doc.frames:
        text = frame.command_text
        out = []
        anchored: set[str] = set()
        for kind, a, b in _regions(text):
            segment = text[a:b]
            if kind == "string":
                out.append(f'<span class="string">{html.escape(segment)}</span>')
                continue
            linked = _link_segment(segment, index, doc.uri, frame.id, anchored)
            if kind == "comment":
                out.append(f'<span class="comment">{linked}</span>')
            elif kind == "quote":
                out.append(f'<span class="term">{linked}</span>')
            else:
                out.append(linked)
        frame.markup = "".join(out)


def _link_segment(segment: str, index: SymbolIndex, uri: str, frame_id: int, anchored: set[str]) -> str:
    out = []
    pos = 0
    for m in IDENT.finditer(segment):
        name = m.group(0)
        entry = index.get(name)
        if entry is None:
            continue
        out.append(html.escape(segment[pos : m.start()]))
        if entry.file == uri and entry.frame == frame_id and name not in anchored:
            anchored.add(name)
            out.append(f'<span class="def" id="{html.escape(name, quote=True)}">{html.escape(name)}</span>')
        else:
            out.append(f'<a href="{html.escape(link_url(entry, uri), quote=True)}">{html.escape(name)}</a>')
        pos = m.end()
    out.append(html.escape(segment[pos:]))
    return "".join(out)
