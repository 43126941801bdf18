"""On-disk repository layout and the static build pipeline.

A repository root contains:
  src/       formal proof scripts
  doc/       wiki pages
  index/     symbols.tsv, regenerable from src/ alone
  cache/     prover-state cache entries; always safe to delete
  rendered/  optional static HTML output
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from . import hyperlink, wiki
from .frames import FORMAL_SCRIPT, INFORMAL_PAGE, Document, Registry, new_document
from .parser import split_commands

INDEX_FILE = "index/symbols.tsv"
LINKER_CONFIG_FILE = "index/linker.conf"


class RepositoryStore:
    def __init__(self, root: Path):
        self.root = Path(root)

    @property
    def src_dir(self) -> Path:
        return self.root / "src"

    @property
    def doc_dir(self) -> Path:
        return self.root / "doc"

    @property
    def cache_dir(self) -> Path:
        return self.root / "cache"

    @property
    def rendered_dir(self) -> Path:
        return self.root / "rendered"

    @property
    def index_path(self) -> Path:
        return self.root / INDEX_FILE

    def init_layout(self):
        for d in (self.src_dir, self.doc_dir, self.root / "index", self.cache_dir):
            d.mkdir(parents=True, exist_ok=True)

    def source_uris(self) -> list[str]:
        if not self.src_dir.is_dir():
            return []
        return sorted(
            str(p.relative_to(self.root)) for p in self.src_dir.rglob("*") if p.is_file()
        )

    def page_uris(self) -> list[str]:
        if not self.doc_dir.is_dir():
            return []
        return sorted(
            str(p.relative_to(self.root)) for p in self.doc_dir.rglob("*") if p.is_file()
        )

    def read(self, uri: str) -> str:
        path = (self.root / uri).resolve()
        if self.root.resolve() not in path.parents:
            raise FileNotFoundError(uri)
        return path.read_text()

    def write(self, uri: str, text: str):
        path = self.root / uri
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)

    def exists(self, uri: str) -> bool:
        return (self.root / uri).is_file()

    def load_document(self, uri: str) -> Document:
        text = self.read(uri)
        if uri.startswith("src/"):
            return new_document(uri, split_commands(text), FORMAL_SCRIPT)
        return new_document(uri, [], INFORMAL_PAGE)

    def linker_config(self) -> hyperlink.LinkerConfig:
        conf = self.root / LINKER_CONFIG_FILE
        if conf.is_file():
            return hyperlink.parse_config(conf.read_text())
        return hyperlink.LinkerConfig()

    def build_corpus(self) -> list[tuple[str, Document]]:
        return [(uri, self.load_document(uri)) for uri in self.source_uris()]

    def build_index(self) -> hyperlink.SymbolIndex:
        corpus = self.build_corpus()
        index = hyperlink.build_index(corpus, self.linker_config())
        self.index_path.parent.mkdir(parents=True, exist_ok=True)
        self.index_path.write_text(hyperlink.export_index(index))
        return index

    def load_index(self) -> hyperlink.SymbolIndex:
        if self.index_path.is_file():
            return hyperlink.import_index(self.index_path.read_text())
        return self.build_index()

    def registry(self, index: Optional[hyperlink.SymbolIndex] = None) -> Registry:
        """Registry over all formal sources, with frame markup pre-rendered."""
        index = index if index is not None else self.load_index()
        registry = Registry(index=index)
        for uri, doc in self.build_corpus():
            hyperlink.link_text(doc, index)
            registry.add(doc)
        return registry

    def build(self) -> list[str]:
        """Index + render every page statically.  Deterministic: the same
        repository contents produce byte-identical output."""
        self.init_layout()
        index = self.build_index()
        registry = Registry(index=index)
        corpus = self.build_corpus()
        for uri, doc in corpus:
            hyperlink.link_text(doc, index)
            registry.add(doc)
        written = []
        for uri, doc in corpus:
            body = "\n".join(
                f'<div class="frame-line">{_frame_html(doc, f)}</div>' for f in doc.frames
            )
            page = wiki.PAGE_TEMPLATE.format(title=uri, body=body)
            out = self.rendered_dir / hyperlink.html_path(uri)
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(page)
            written.append(str(out.relative_to(self.root)))
        for uri in self.page_uris():
            ast = wiki.parse_wiki(self.read(uri))
            page = wiki.render_page(ast, registry, index, title=uri)
            out = self.rendered_dir / hyperlink.html_path(uri)
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(page)
            written.append(str(out.relative_to(self.root)))
        return sorted(written)


def _frame_html(doc: Document, frame) -> str:
    from .frames import frame_markup

    return frame_markup(doc, frame)
