"""LaTeX-to-wiki translation for annotated informal sources.

Rule-driven: a list of transform rules in three phases (cleanup, sectioning,
linking).  Math segments are lifted out before any rule runs and restored
byte-exact afterwards.  The annotation macros (label/ref/newterm/guid/
formaldef) turn into wiki anchors and links resolved against the formal
symbol index.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Optional

from .hyperlink import SymbolIndex, html_path, link_url


class CreolifyError(Exception):
    pass


@dataclass
class TransformRule:
    name: str
    match: str
    replace: str  # template, or handled by `func` when set
    phase: str = "cleanup"
    func: Optional[Callable] = None

    def apply(self, text: str, ctx: "Context") -> str:
        if self.func is not None:
            return self.func(text, ctx)
        return re.sub(self.match, self.replace, text, flags=re.MULTILINE)


@dataclass
class Context:
    index: SymbolIndex
    warnings: list[str] = field(default_factory=list)


MATH_TOKEN = "\x00MATH{}\x00"

_MATH_PATTERNS = [
    re.compile(r"\\\[.*?\\\]", re.DOTALL),
    re.compile(r"\\begin\{(equation\*?|align\*?|eqnarray\*?|gather\*?)\}.*?\\end\{\1\}", re.DOTALL),
    re.compile(r"\$\$.*?\$\$", re.DOTALL),
    re.compile(r"\$[^$]+\$"),
]


def _protect_math(text: str):
    segments: list[str] = []

    def stash(m):
        segments.append(m.group(0))
        return MATH_TOKEN.format(len(segments) - 1)

    for pattern in _MATH_PATTERNS:
        text = pattern.sub(stash, text)
    return text, segments


def _restore_math(text: str, segments: list[str]) -> str:
    for i, seg in enumerate(segments):
        text = text.replace(MATH_TOKEN.format(i), seg)
    return text


SECTION_ENVS = ["definition", "lemma", "theorem", "remark", "corollary", "proof"]


def _check_environments(text: str):
    for env in SECTION_ENVS:
        opens = [m.start() for m in re.finditer(rf"\\begin\{{{env}\}}", text)]
        closes = [m.start() for m in re.finditer(rf"\\end\{{{env}\}}", text)]
        if len(opens) != len(closes):
            pos = (opens + closes)[-1] if opens or closes else 0
            line = text.count("\n", 0, pos) + 1
            raise CreolifyError(f"unbalanced environment {env!r} near line {line}")


def _env_open(m) -> str:
    kind = m.group(1).capitalize()
    title = m.group(2)
    heading = f"{kind} ({title})" if title else kind
    return f"\n=== {heading} ===\n"


def _sectioning(text: str, ctx: Context) -> str:
    envs = "|".join(SECTION_ENVS)
    text = re.sub(rf"\\begin\{{({envs})\}}(?:\[([^\]]*)\])?", _env_open, text)
    text = re.sub(rf"\\end\{{(?:{envs})\}}", "\n", text)
    return text


def _unescape_name(name: str) -> str:
    return name.replace(r"\_", "_").strip()


def _link_formal(name: str, ctx: Context) -> str:
    entry = ctx.index.get(_unescape_name(name))
    if entry is None:
        ctx.warnings.append(f"unresolved formal name: {_unescape_name(name)}")
        return _unescape_name(name)
    return f"[[{html_path(entry.file)}#{entry.anchor}|{_unescape_name(name)}]]"


def _guid(text: str, ctx: Context) -> str:
    return re.sub(r"\\guid\{([^}]*)\}", lambda m: _link_formal(m.group(1), ctx), text)


def _formaldef(text: str, ctx: Context) -> str:
    def repl(m):
        informal = m.group(1)
        names = [n for n in m.group(2).split(",") if n.strip()]
        links = ", ".join(_link_formal(n, ctx) for n in names)
        return f"{informal} ({links})" if links else informal

    return re.sub(r"\\formaldef\{([^}]*)\}\{([^}]*)\}", repl, text)


def _warn_unknown_macros(text: str, ctx: Context) -> str:
    for m in re.finditer(r"\\[A-Za-z]+", text):
        ctx.warnings.append(f"unknown macro passed through: {m.group(0)}")
    return text


DEFAULT_RULES = [
    TransformRule("strip-comments", r"(?<!\\)%.*$", "", "cleanup"),
    TransformRule("emph", r"\\emph\{([^}]*)\}", r"//\1//", "cleanup"),
    TransformRule("textit", r"\\textit\{([^}]*)\}", r"//\1//", "cleanup"),
    TransformRule("textbf", r"\\textbf\{([^}]*)\}", r"**\1**", "cleanup"),
    TransformRule("texttt", r"\\texttt\{([^}]*)\}", r"{{{\1}}}", "cleanup"),
    TransformRule("section", r"\\section\*?\{([^}]*)\}", r"== \1 ==", "cleanup"),
    TransformRule("subsection", r"\\subsection\*?\{([^}]*)\}", r"=== \1 ===", "cleanup"),
    TransformRule("subsubsection", r"\\subsubsection\*?\{([^}]*)\}", r"==== \1 ====", "cleanup"),
    TransformRule("environments", "", "", "sectioning", func=_sectioning),
    TransformRule("label", r"\\label\{([^}]*)\}", r"[[#\1]]", "linking"),
    TransformRule("ref", r"\\ref\{([^}]*)\}", r"[[#\1|\1]]", "linking"),
    TransformRule("newterm", r"\\newterm\{([^}]*)\}", r"[[#\1]]//\1//", "linking"),
    TransformRule("guid", "", "", "linking", func=_guid),
    TransformRule("formaldef", "", "", "linking", func=_formaldef),
    TransformRule("unknown-macros", "", "", "linking", func=_warn_unknown_macros),
]

PHASES = ["cleanup", "sectioning", "linking"]


def creolify(
    latex: str,
    index: Optional[SymbolIndex] = None,
    rules: Optional[list[TransformRule]] = None,
) -> tuple[str, list[str]]:
    """Translate annotated LaTeX to wiki text.

    Returns (wiki text, warnings).  Math segments pass through byte-exact.
    """
    ctx = Context(index=index or SymbolIndex())
    rules = rules if rules is not None else DEFAULT_RULES
    text, math = _protect_math(latex)
    _check_environments(text)
    for phase in PHASES:
        for rule in rules:
            if rule.phase == phase:
                text = rule.apply(text, ctx)
    text = _restore_math(text, math)
    return text, ctx.warnings
