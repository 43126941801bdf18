"""Proof-script splitter.

Splits an OCaml-style proof script into frames.  A command ends at a `;;`
that sits outside comments, string literals and backtick term quotations and
is immediately followed by a newline (or end of input).  Comment blocks that
are not inside any command become standalone comment frames of their own.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .frames import COMMAND, STANDALONE_COMMENT, Frame


class ParseError(Exception):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (opened at offset {offset})")
        self.offset = offset


@dataclass
class ScanState:
    position: int = 0
    comment_depth: int = 0
    in_string: bool = False
    in_term_quote: bool = False


def _scan(source: str):
    """One pass over the source.

    Returns (comment_spans, terminator_ends): the [start, end) extents of all
    top-level comment blocks, and the offsets just past each command
    terminator.  Raises ParseError on unterminated comment/string/quotation.
    """
    comments: list[tuple[int, int]] = []
    terminators: list[int] = []
    st = ScanState()
    n = len(source)
    comment_open = string_open = quote_open = -1
    i = 0
    while i < n:
        c = source[i]
        if st.comment_depth > 0:
            if source.startswith("(*", i):
                st.comment_depth += 1
                i += 2
            elif source.startswith("*)", i):
                st.comment_depth -= 1
                i += 2
                if st.comment_depth == 0:
                    comments.append((comment_open, i))
            else:
                i += 1
        elif st.in_string:
            if c == "\\":
                i += 2
            elif c == '"':
                st.in_string = False
                i += 1
            else:
                i += 1
        elif st.in_term_quote:
            if c == "`":
                st.in_term_quote = False
            i += 1
        else:
            if source.startswith("(*", i):
                st.comment_depth = 1
                comment_open = i
                i += 2
            elif c == '"':
                st.in_string = True
                string_open = i
                i += 1
            elif c == "`":
                st.in_term_quote = True
                quote_open = i
                i += 1
            elif source.startswith(";;", i) and (i + 2 >= n or source[i + 2] in "\r\n"):
                terminators.append(i + 2)
                i += 2
            else:
                i += 1
    if st.comment_depth > 0:
        raise ParseError("unterminated comment", comment_open)
    if st.in_string:
        raise ParseError("unterminated string literal", string_open)
    if st.in_term_quote:
        raise ParseError("unterminated term quotation", quote_open)
    return comments, terminators


def _is_standalone(source: str, close: int, boundary: int, comment_starts: set[int]) -> bool:
    """A leading comment is standalone when, after its close and skipping
    same-line whitespace, the next thing is a newline, another comment, the
    segment boundary, or end of input."""
    j = close
    while j < boundary and source[j] in " \t":
        j += 1
    if j >= boundary:
        return True
    return source[j] in "\r\n" or j in comment_starts


def split_commands(source: str) -> list[Frame]:
    comments, terminators = _scan(source)
    comment_by_start = {a: b for a, b in comments}
    comment_starts = set(comment_by_start)

    frames: list[Frame] = []

    def emit(start: int, text_start: int, end: int, kind: str, unterminated=False):
        frames.append(
            Frame(
                id=len(frames),
                command_text=source[text_start:end],
                leading_sep=source[start:text_start],
                kind=kind,
                unterminated=unterminated,
            )
        )

    segment_bounds = []
    prev = 0
    for t in terminators:
        segment_bounds.append((prev, t, True))
        prev = t
    if prev < len(source):
        segment_bounds.append((prev, len(source), False))

    for seg_start, seg_end, has_terminator in segment_bounds:
        cur = seg_start
        # peel off leading standalone comments
        while True:
            w = cur
            while w < seg_end and source[w].isspace():
                w += 1
            if w in comment_starts and (not has_terminator or comment_by_start[w] <= seg_end):
                close = comment_by_start[w]
                if _is_standalone(source, close, seg_end, comment_starts):
                    emit(cur, w, close, STANDALONE_COMMENT)
                    cur = close
                    continue
            break
        w = cur
        while w < seg_end and source[w].isspace():
            w += 1
        if has_terminator:
            emit(cur, w, seg_end, COMMAND)
        elif w < seg_end:
            # text after the last terminator with no terminator of its own
            emit(cur, w, seg_end, COMMAND, unterminated=True)
        elif cur < seg_end:
            # pure-whitespace tail; kept as a trailing comment-kind frame so
            # reconstruction stays byte-exact
            emit(cur, cur, seg_end, STANDALONE_COMMENT)
    return frames


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


def first_token(command_text: str) -> str | None:
    """First identifier token of a command, skipping comments and whitespace."""
    try:
        comments, _ = _scan(command_text)
    except ParseError:
        comments = []
    i = 0
    n = len(command_text)
    spans = iter(sorted(comments))
    span = next(spans, None)
    while i < n:
        if span and i == span[0]:
            i = span[1]
            span = next(spans, None)
            continue
        if command_text[i].isspace():
            i += 1
            continue
        m = _IDENT.match(command_text, i)
        return m.group(0) if m else None
    return None
