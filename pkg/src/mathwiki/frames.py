"""Document model: frames grouped into scene trees.

A frame is one prover command together with its memoized response, its
goalstack state number and a cached HTML markup fragment.  A scene is an
ordered grouping of frame references, nested scenes and remote references;
documents render by walking the scene tree.
"""

from __future__ import annotations

import html
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Union

COMMAND = "command"
STANDALONE_COMMENT = "standalone_comment"

FORMAL_SCRIPT = "formal_script"
INFORMAL_PAGE = "informal_page"


class StructureError(Exception):
    """Raised when a document or scene violates a structural invariant."""


@dataclass
class Frame:
    id: int
    command_text: str
    leading_sep: str = ""
    response: Optional[str] = None
    state_number: Optional[int] = None
    markup: Optional[str] = None
    kind: str = COMMAND
    unterminated: bool = False

    def __post_init__(self):
        if self.state_number is not None and self.state_number < 0:
            raise StructureError("state_number must be >= 0")


@dataclass
class FrameRef:
    frame_id: int


@dataclass
class RemoteRef:
    """Reference to an entity in another document: URI + '#' + anchor."""

    uri: str
    anchor: str
    label: str = ""


@dataclass
class SceneNode:
    id: str
    language: Optional[str] = None
    children: list = field(default_factory=list)


SceneChild = Union[FrameRef, RemoteRef, SceneNode]


def check_acyclic(scene: SceneNode) -> None:
    """Reject scene trees that transitively contain themselves."""
    on_stack: set[int] = set()

    def walk(node: SceneNode) -> None:
        if id(node) in on_stack:
            raise StructureError(f"scene {node.id!r} contains itself")
        on_stack.add(id(node))
        for child in node.children:
            if isinstance(child, SceneNode):
                walk(child)
        on_stack.discard(id(node))

    walk(scene)


@dataclass
class Document:
    uri: str
    frames: list[Frame]
    root: SceneNode
    flavor: str = FORMAL_SCRIPT

    def frame(self, frame_id: int) -> Frame:
        if 0 <= frame_id < len(self.frames):
            return self.frames[frame_id]
        raise StructureError(f"no frame {frame_id} in {self.uri}")


def new_document(uri: str, frames: Iterable[Frame], flavor: str = FORMAL_SCRIPT) -> Document:
    """Build a document with contiguous frame ids and a flat root scene."""
    frames = list(frames)
    seen = set()
    for f in frames:
        if f.id in seen:
            raise StructureError(f"duplicate frame id {f.id}")
        seen.add(f.id)
    renumbered = [replace(f, id=i) for i, f in enumerate(frames)]
    root = SceneNode(id=f"{uri}#root", children=[FrameRef(f.id) for f in renumbered])
    return Document(uri=uri, frames=renumbered, root=root, flavor=flavor)


def reconstruct_source(doc: Document) -> str:
    """Rebuild the proof script, byte-identical to what was parsed."""
    return "".join(f.leading_sep + f.command_text for f in doc.frames)


BROKEN_LINK = '<span class="broken-link">broken reference</span>'


class Registry:
    """Resolves document URIs (and URI#anchor pairs) for scene rendering."""

    def __init__(self, documents: Optional[dict[str, Document]] = None, index=None):
        self.documents = dict(documents or {})
        self.index = index  # symbol index; maps anchors to (file, frame)

    def add(self, doc: Document) -> None:
        self.documents[doc.uri] = doc

    def lookup(self, uri: str) -> Optional[Document]:
        return self.documents.get(uri)

    def resolve_anchor(self, uri: str, anchor: str) -> Optional[Frame]:
        doc = self.lookup(uri)
        if doc is None:
            return None
        if self.index is not None:
            entry = self.index.get(anchor)
            if entry is not None and entry.file == uri and entry.frame < len(doc.frames):
                return doc.frames[entry.frame]
        return None


def frame_markup(doc: Document, frame: Frame) -> str:
    """Markup for one frame, wrapped with the data attributes the UI reads."""
    body = frame.markup if frame.markup is not None else html.escape(frame.command_text)
    return (
        f'<span class="frame" data-doc="{html.escape(doc.uri, quote=True)}"'
        f' data-frame="{frame.id}">{body}</span>'
    )


def render_island(label: str, inner: str) -> str:
    """Collapsed, server-rendered container for transcluded formal text."""
    return (
        f'<details class="island"><summary>{html.escape(label)}</summary>'
        f"{inner}</details>"
    )


def render_scene(scene: SceneNode, registry: Registry, doc: Optional[Document] = None) -> str:
    """Depth-first rendering of a scene tree.

    Frame references resolve against the owning document; dangling references
    render as inline broken-link markers so the page still comes out.
    """
    check_acyclic(scene)
    parts = []
    for child in scene.children:
        if isinstance(child, FrameRef):
            if doc is not None and 0 <= child.frame_id < len(doc.frames):
                parts.append(frame_markup(doc, doc.frames[child.frame_id]))
            else:
                parts.append(BROKEN_LINK)
        elif isinstance(child, SceneNode):
            parts.append(f'<div class="scene">{render_scene(child, registry, doc)}</div>')
        elif isinstance(child, RemoteRef):
            frame = registry.resolve_anchor(child.uri, child.anchor)
            label = child.label or child.anchor
            if frame is None:
                parts.append(render_island(label, BROKEN_LINK))
            else:
                remote_doc = registry.lookup(child.uri)
                parts.append(render_island(label, frame_markup(remote_doc, frame)))
        else:
            raise StructureError(f"unknown scene child {child!r}")
    return "".join(parts)
