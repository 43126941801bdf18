"""HTTP service tying the engine together.

Endpoints:
  GET  /page/{uri}            rendered page (wiki page or formal listing)
  GET  /state/{doc}/{frame}   memoized prover state for one frame
  POST /edit/{doc}            re-verify an edited scene, prefix-preserving
  POST /advice                proxy one goal line to the advice service
  POST /commit/{doc}          write an edit session's text back to the store
"""

from __future__ import annotations

import os
import re
import threading
from typing import Optional

from fastapi import FastAPI, Request, Response
from fastapi.responses import HTMLResponse, JSONResponse

from . import advice as advice_mod
from . import hyperlink, wiki
from .frames import FORMAL_SCRIPT, Registry, new_document, reconstruct_source
from .parser import ParseError, split_commands
from .prover import (
    ProverFailure,
    Session,
    SessionDead,
    SessionManager,
    StateCache,
    StubProverAdapter,
    response_ok,
)
from .store import RepositoryStore

GOAL_LINE = re.compile(r"^goal: (.*)$", re.MULTILINE)


class EditSession:
    """Per-document working copy with its own prover session."""

    _counter = 0

    def __init__(self, uri: str, adapter_factory):
        EditSession._counter += 1
        self.id = EditSession._counter
        self.uri = uri
        self.session = Session(adapter_factory())
        self.frames = []  # working frame list, diverged from the store
        self.text = ""
        self.lock = threading.Lock()


def _advisor_address(advisor) -> Optional[tuple[str, int]]:
    if advisor is not None:
        return advisor
    env = os.environ.get("MATHWIKI_ADVISOR", "")
    if ":" in env:
        host, port = env.rsplit(":", 1)
        return host, int(port)
    return None


def create_app(
    store: RepositoryStore,
    adapter_factory=None,
    advisor: Optional[tuple[str, int]] = None,
) -> FastAPI:
    adapter_factory = adapter_factory or StubProverAdapter
    store.init_layout()
    cache = StateCache(store.cache_dir)
    manager = SessionManager(adapter_factory, cache=cache)

    app = FastAPI(title="mathwiki")
    app.state.store = store
    app.state.manager = manager
    app.state.cache = cache
    app.state.edit_sessions = {}
    app.state.advisor = _advisor_address(advisor)
    app.state.index = None
    app.state.registry = None
    state_lock = threading.Lock()

    def registry_and_index() -> tuple[Registry, hyperlink.SymbolIndex]:
        with state_lock:
            if app.state.registry is None:
                index = store.build_index()
                app.state.index = index
                app.state.registry = store.registry(index)
            return app.state.registry, app.state.index

    def invalidate_rendering():
        with state_lock:
            app.state.registry = None
            app.state.index = None

    def ask_advisor(line: str) -> tuple[list[str], bool]:
        address = app.state.advisor
        if address is None:
            return [], True
        try:
            return advice_mod.request_advice(address[0], address[1], line), False
        except OSError:
            return [], True

    @app.get("/page/{uri:path}")
    def page(uri: str):
        if not (uri.startswith("doc/") or uri.startswith("src/")) or not store.exists(uri):
            return JSONResponse({"error": f"unknown page {uri}"}, status_code=404)
        registry, index = registry_and_index()
        if uri.startswith("doc/"):
            ast = wiki.parse_wiki(store.read(uri))
            return HTMLResponse(wiki.render_page(ast, registry, index, title=uri))
        doc = registry.lookup(uri)
        from .frames import frame_markup

        body = "\n".join(
            f'<div class="frame-line">{frame_markup(doc, f)}</div>' for f in doc.frames
        )
        return HTMLResponse(wiki.PAGE_TEMPLATE.format(title=uri, body=body))

    @app.get("/state/{spec:path}")
    def state(spec: str):
        uri, _, frame_part = spec.rpartition("/")
        if not frame_part.isdigit() or not store.exists(uri):
            return JSONResponse({"error": f"unknown frame {spec}"}, status_code=404)
        frame_index = int(frame_part)
        doc = store.load_document(uri)
        if not 0 <= frame_index < len(doc.frames):
            return JSONResponse({"error": f"no frame {frame_index}"}, status_code=404)
        try:
            response, state_number = manager.state_for(doc, frame_index)
        except ProverFailure as exc:
            return JSONResponse(
                {"error": "prover failure", "frame": exc.frame_index, "response": exc.response},
                status_code=502,
            )
        except SessionDead as exc:
            manager.drop(doc.uri)
            return JSONResponse({"error": str(exc)}, status_code=502)
        return {"response": response, "state": state_number}

    @app.post("/edit/{uri:path}")
    async def edit(uri: str, request: Request):
        body = (await request.body()).decode()
        sessions = app.state.edit_sessions
        edit_session = sessions.get(uri)
        if edit_session is None:
            edit_session = sessions[uri] = EditSession(uri, adapter_factory)
        with edit_session.lock:
            try:
                return _apply_edit(app, edit_session, body, ask_advisor, registry_and_index)
            except ParseError as exc:
                return JSONResponse(
                    {"error": str(exc), "offset": exc.offset}, status_code=400
                )
            except SessionDead:
                # restore a fresh session from the snapshot contract
                sessions.pop(uri, None)
                return JSONResponse(
                    {"error": "prover session died; session restored, resubmit the edit"},
                    status_code=502,
                )

    @app.post("/advice")
    async def advice_endpoint(request: Request):
        line = (await request.body()).decode().rstrip("\r\n")
        advice, warning = ask_advisor(line)
        return {"advice": advice, "warning": warning}

    @app.post("/commit/{uri:path}")
    def commit(uri: str):
        edit_session = app.state.edit_sessions.get(uri)
        if edit_session is None:
            return JSONResponse({"error": f"no edit session for {uri}"}, status_code=404)
        store.write(uri, edit_session.text)
        invalidate_rendering()
        return {"committed": uri}

    @app.on_event("shutdown")
    def shutdown():
        manager.close()
        for s in app.state.edit_sessions.values():
            s.session.close()

    return app


def _apply_edit(app, edit_session: EditSession, body: str, ask_advisor, registry_and_index):
    new_frames = split_commands(body)
    doc = new_document(edit_session.uri, new_frames, FORMAL_SCRIPT)
    new_frames = doc.frames
    session = edit_session.session
    old = edit_session.frames

    lcp = 0
    while (
        lcp < len(old)
        and lcp < len(new_frames)
        and old[lcp].command_text == new_frames[lcp].command_text
    ):
        lcp += 1
    undos = 0
    if session.cursor > lcp - 1:
        undos = session.sync_to(lcp - 1)
    # carry forward memoized results for the unchanged prefix
    for i in range(lcp):
        new_frames[i].response = old[i].response
        new_frames[i].state_number = old[i].state_number
    sends_before = getattr(session.adapter, "send_count", 0)
    _, index = registry_and_index()
    hyperlink.link_text(doc, index)

    results = []
    warning = False
    for frame in new_frames:
        if frame.id < lcp:
            results.append(_frame_result(frame, []))
            continue
        response, state_number = session.send_frame(frame)
        frame_advice: list[str] = []
        ok = response_ok(response)
        if ok:
            m = GOAL_LINE.search(response)
            if m and (frame.state_number or 0) > 0:
                frame_advice, missed = ask_advisor(m.group(1))
                warning = warning or missed
        results.append(_frame_result(frame, frame_advice))
    edit_session.frames = new_frames
    edit_session.text = reconstruct_source(doc)
    sends = getattr(session.adapter, "send_count", 0) - sends_before
    return {
        "frames": results,
        "undos": undos,
        "sends": sends,
        "warning": warning,
        "text": edit_session.text,
    }


def _frame_result(frame, frame_advice):
    return {
        "id": frame.id,
        "markup": frame.markup,
        "state": frame.state_number,
        "ok": response_ok(frame.response or "") and not frame.unterminated,
        "advice": frame_advice,
        "response": frame.response,
    }
