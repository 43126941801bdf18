"""Creole-like wiki markup: parser and HTML renderer.

The grammar extends ordinary wiki markup with transclusion references
``{{doc-uri#anchor|label}}`` that pull hyperlinked formal text into informal
pages as collapsed islands.  Parsing is total: malformed constructs fall back
to literal text.
"""

from __future__ import annotations

import html
import re
from dataclasses import dataclass, field
from typing import Optional

from .frames import BROKEN_LINK, Registry, frame_markup, render_island
from .hyperlink import SymbolIndex


# --- AST -------------------------------------------------------------------

@dataclass
class Heading:
    level: int
    text: str


@dataclass
class Paragraph:
    inline: list


@dataclass
class CodeBlock:
    language: str
    body: str


@dataclass
class Text:
    text: str


@dataclass
class Emphasis:
    inline: list


@dataclass
class Strong:
    inline: list


@dataclass
class Link:
    target: str
    label: str


@dataclass
class Anchor:
    name: str


@dataclass
class Math:
    text: str


@dataclass
class CodeSpan:
    text: str


@dataclass
class Transclusion:
    uri: str
    anchor: str
    label: str


@dataclass
class WikiAst:
    blocks: list = field(default_factory=list)


# --- parser ----------------------------------------------------------------

HEADING_RE = re.compile(r"^(={1,4})\s*(.*?)\s*=*\s*$")
FENCE_OPEN_RE = re.compile(r"^\{\{\{(\w*)\s*$")

INLINE_RE = re.compile(
    r"(?P<math>\$[^$\n]+\$)"
    r"|(?P<codespan>\{\{\{(?P<codebody>[^\n}]*)\}\}\})"
    r"|(?P<trans>\{\{(?P<turi>[^#|{}\n]+)#(?P<tanchor>[^|{}\n]+?)(?:\|(?P<tlabel>[^{}\n]*))?\}\})"
    r"|(?P<anchor>\[\[#(?P<aname>[^|\]\n]+)\]\])"
    r"|(?P<link>\[\[(?P<ltarget>[^|\]\n]+?)(?:\|(?P<llabel>[^\]\n]*))?\]\])"
    r"|(?P<strong>\*\*)"
    r"|(?P<emph>//)"
)


def _parse_inline(text: str, pos: int = 0, stop: Optional[str] = None):
    nodes: list = []
    buf: list[str] = []

    def flush():
        if buf:
            nodes.append(Text("".join(buf)))
            buf.clear()

    while pos < len(text):
        if stop and text.startswith(stop, pos):
            flush()
            return nodes, pos + len(stop), True
        m = INLINE_RE.match(text, pos)
        if m is None:
            buf.append(text[pos])
            pos += 1
            continue
        if m.group("math"):
            flush()
            nodes.append(Math(m.group("math")))
            pos = m.end()
        elif m.group("codespan"):
            flush()
            nodes.append(CodeSpan(m.group("codebody")))
            pos = m.end()
        elif m.group("trans"):
            flush()
            label = m.group("tlabel")
            anchor = m.group("tanchor")
            nodes.append(Transclusion(m.group("turi"), anchor, label if label is not None else anchor))
            pos = m.end()
        elif m.group("anchor"):
            flush()
            nodes.append(Anchor(m.group("aname")))
            pos = m.end()
        elif m.group("link"):
            target = m.group("ltarget")
            label = m.group("llabel")
            if not target:
                buf.append(m.group(0))
            else:
                flush()
                nodes.append(Link(target, label if label is not None else target))
            pos = m.end()
        elif m.group("strong"):
            inner, newpos, closed = _parse_inline(text, m.end(), "**")
            if closed:
                flush()
                nodes.append(Strong(inner))
                pos = newpos
            else:
                buf.append("**")
                pos = m.end()
        elif m.group("emph"):
            inner, newpos, closed = _parse_inline(text, m.end(), "//")
            if closed:
                flush()
                nodes.append(Emphasis(inner))
                pos = newpos
            else:
                buf.append("//")
                pos = m.end()
        else:
            buf.append(text[pos])
            pos += 1
    flush()
    return nodes, pos, stop is None


def parse_wiki(text: str) -> WikiAst:
    ast = WikiAst()
    lines = text.splitlines()
    i = 0
    para: list[str] = []

    def flush_para():
        if para:
            inline, _, _ = _parse_inline("\n".join(para))
            ast.blocks.append(Paragraph(inline))
            para.clear()

    while i < len(lines):
        line = lines[i]
        fence = FENCE_OPEN_RE.match(line)
        if fence:
            flush_para()
            body = []
            i += 1
            while i < len(lines) and lines[i].strip() != "}}}":
                body.append(lines[i])
                i += 1
            if i < len(lines):
                ast.blocks.append(CodeBlock(fence.group(1), "\n".join(body)))
                i += 1
            else:
                # unclosed fence: degrade to literal text
                para.append(line)
                para.extend(body)
            continue
        if not line.strip():
            flush_para()
            i += 1
            continue
        m = HEADING_RE.match(line)
        if m and line.lstrip().startswith("="):
            flush_para()
            ast.blocks.append(Heading(len(m.group(1)), m.group(2)))
            i += 1
            continue
        para.append(line)
        i += 1
    flush_para()
    return ast


# --- renderer --------------------------------------------------------------

def _render_inline(nodes, registry: Optional[Registry], index: Optional[SymbolIndex]) -> str:
    out = []
    for node in nodes:
        if isinstance(node, Text):
            out.append(html.escape(node.text))
        elif isinstance(node, Math):
            out.append(f'<span class="math">{html.escape(node.text)}</span>')
        elif isinstance(node, CodeSpan):
            out.append(f"<code>{html.escape(node.text)}</code>")
        elif isinstance(node, Emphasis):
            out.append(f"<em>{_render_inline(node.inline, registry, index)}</em>")
        elif isinstance(node, Strong):
            out.append(f"<strong>{_render_inline(node.inline, registry, index)}</strong>")
        elif isinstance(node, Anchor):
            out.append(f'<span class="anchor" id="{html.escape(node.name, quote=True)}"></span>')
        elif isinstance(node, Link):
            out.append(
                f'<a href="{html.escape(node.target, quote=True)}">{html.escape(node.label)}</a>'
            )
        elif isinstance(node, Transclusion):
            out.append(_render_transclusion(node, registry, index))
        else:
            out.append(html.escape(str(node)))
    return "".join(out)


def _render_transclusion(node: Transclusion, registry: Optional[Registry], index: Optional[SymbolIndex]) -> str:
    if registry is not None:
        frame = registry.resolve_anchor(node.uri, node.anchor)
        if frame is not None:
            doc = registry.lookup(node.uri)
            return render_island(node.label, frame_markup(doc, frame))
    return render_island(node.label, BROKEN_LINK)


def render_body(ast: WikiAst, registry: Optional[Registry] = None, index: Optional[SymbolIndex] = None) -> str:
    parts = []
    for block in ast.blocks:
        if isinstance(block, Heading):
            inline, _, _ = _parse_inline(block.text)
            parts.append(f"<h{block.level}>{_render_inline(inline, registry, index)}</h{block.level}>")
        elif isinstance(block, Paragraph):
            parts.append(f"<p>{_render_inline(block.inline, registry, index)}</p>")
        elif isinstance(block, CodeBlock):
            lang = html.escape(block.language, quote=True)
            parts.append(
                f'<div class="scene-code" data-language="{lang}">'
                f'<button class="edit-scene">edit</button>'
                f"<pre>{html.escape(block.body)}</pre></div>"
            )
    return "\n".join(parts)


PAGE_TEMPLATE = """<!DOCTYPE html>
<html>
<head>
<meta charset="utf-8">
<title>{title}</title>
<link rel="stylesheet" href="/static/style.css">
</head>
<body>
{body}
</body>
</html>
"""


def render_page(
    ast: WikiAst,
    registry: Optional[Registry] = None,
    index: Optional[SymbolIndex] = None,
    title: str = "page",
) -> str:
    return PAGE_TEMPLATE.format(title=html.escape(title), body=render_body(ast, registry, index))
