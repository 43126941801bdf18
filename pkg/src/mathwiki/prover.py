"""Prover session management.

Talks to a prover through a small adapter contract (send / probe_depth /
snapshot / restore), records a goalstack state number per frame, undoes with
``b ();;`` to resynchronize after edits, skips module/end sentinels, and
memoizes responses keyed by the full command prefix.
"""

from __future__ import annotations

import hashlib
import json
import subprocess
import sys
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .frames import COMMAND, Document, Frame
from .parser import first_token
from .stubprover import PROBE, READY

UNDO_COMMAND = "b ();;"
MODULE_KEYWORDS = {"module", "end"}


class SessionError(Exception):
    pass


class SessionDead(SessionError):
    pass


class ProverFailure(SessionError):
    """A frame failed during replay; carries the failing frame and response."""

    def __init__(self, frame_index: int, response: str):
        super().__init__(f"prover failed at frame {frame_index}: {response}")
        self.frame_index = frame_index
        self.response = response


def filter_special(command_text: str) -> str:
    """'skip' for module open/close sentinels, 'send' otherwise."""
    token = first_token(command_text)
    return "skip" if token in MODULE_KEYWORDS else "send"


def response_ok(response: str) -> bool:
    return not response.lstrip().startswith("Exception")


class StubProverAdapter:
    """Adapter over the stub prover child process.

    Instruments ``send_count`` (probes excluded) so tests can assert how much
    prover work an operation did.  snapshot() captures the executed command
    list; restore() forks a fresh child and replays it.
    """

    def __init__(self, command: Optional[list[str]] = None):
        self.command = command or [sys.executable, "-m", "mathwiki.stubprover"]
        self.send_count = 0
        self.history: list[str] = []
        self._start()

    def _start(self):
        self.proc = subprocess.Popen(
            self.command,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            bufsize=1,
        )

    def _write(self, text: str):
        try:
            self.proc.stdin.write(text)
            self.proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise SessionDead(str(exc)) from exc

    def _read_line(self) -> str:
        line = self.proc.stdout.readline()
        if line == "":
            raise SessionDead("prover closed its output")
        return line.rstrip("\n")

    def send(self, command_text: str) -> str:
        self.send_count += 1
        self.history.append(command_text)
        self._write(command_text.rstrip("\n") + "\n")
        lines = []
        while True:
            line = self._read_line()
            if line == READY:
                break
            lines.append(line)
        return "\n".join(lines)

    def probe_depth(self) -> int:
        self._write(PROBE + ";;\n")
        return int(self._read_line())

    def snapshot(self):
        return tuple(self.history)

    def restore(self, token) -> "StubProverAdapter":
        fresh = StubProverAdapter(self.command)
        for command in token:
            fresh.send(command)
        fresh.send_count = 0
        return fresh

    def close(self):
        if self.proc.poll() is None:
            self.proc.stdin.close()
            self.proc.wait(timeout=5)


@dataclass
class SessionState:
    cursor: int = -1
    depth: int = 0
    executed: list = field(default_factory=list)  # (frame id, state_number)


class Session:
    """One live prover session executing a document's frames in order."""

    def __init__(self, adapter, cache: Optional["StateCache"] = None):
        self.adapter = adapter
        self.cache = cache
        self.cursor = -1
        self.depth = 0
        self.executed: list[tuple[int, str, str, int]] = []  # (id, text, response, state)
        self.dead = False
        self._prefix = hashlib.sha256()
        self._prefix_keys: list[str] = []

    def _record(self, frame: Frame, response: str, state: int):
        frame.response = response
        frame.state_number = state
        self.cursor = frame.id
        self.depth = state
        self.executed.append((frame.id, frame.command_text, response, state))
        self._prefix.update(frame.command_text.encode())
        key = self._prefix.hexdigest()
        self._prefix_keys.append(key)
        if self.cache is not None:
            self.cache.put(key, response, state)

    def send_frame(self, frame: Frame) -> tuple[str, int]:
        if self.dead:
            raise SessionDead("session is dead; restore from snapshot")
        if frame.id != self.cursor + 1:
            raise SessionError(
                f"frames must execute in order (cursor {self.cursor}, got {frame.id})"
            )
        if frame.kind != COMMAND or filter_special(frame.command_text) == "skip":
            self._record(frame, "", self.depth)
            return "", self.depth
        try:
            response = self.adapter.send(frame.command_text)
            depth = self.adapter.probe_depth()
        except SessionDead:
            self.dead = True
            raise
        self._record(frame, response, depth)
        return response, depth

    def state_at(self, index: int) -> int:
        if index < 0:
            return 0
        if index >= len(self.executed):
            raise SessionError(f"frame {index} not executed yet")
        return self.executed[index][3]

    def sync_to(self, target_frame_index: int) -> int:
        """Undo back to the state recorded at target_frame_index.

        Returns the number of ``b ();;`` commands issued.  target -1 means
        'before any frame'.
        """
        if target_frame_index > self.cursor:
            raise SessionError("sync_to target is ahead of the cursor")
        target_state = self.state_at(target_frame_index)
        undos = self.depth - target_state
        if undos < 0:
            raise SessionError("recorded state is above current depth")
        for _ in range(undos):
            self.adapter.send(UNDO_COMMAND)
        self.depth = self.adapter.probe_depth() if undos else self.depth
        if self.depth != target_state:
            raise SessionError(
                f"undo overshoot: depth {self.depth}, wanted {target_state}"
            )
        del self.executed[target_frame_index + 1 :]
        del self._prefix_keys[target_frame_index + 1 :]
        self._prefix = hashlib.sha256()
        for _, text, _, _ in self.executed:
            self._prefix.update(text.encode())
        self.cursor = target_frame_index
        return undos

    def close(self):
        close = getattr(self.adapter, "close", None)
        if close:
            close()


def prefix_keys(frames: list[Frame]) -> list[str]:
    """Cache key per frame: hash of all command texts up to and including it."""
    h = hashlib.sha256()
    keys = []
    for f in frames:
        h.update(f.command_text.encode())
        keys.append(h.hexdigest())
    return keys


class StateCache:
    """Memoized (response, state_number) keyed by command-prefix hash.

    Backed by a directory when given one, else memory-only.  Safe for
    concurrent readers; writes are serialized.
    """

    def __init__(self, directory: Optional[Path] = None):
        self.directory = Path(directory) if directory else None
        self._mem: dict[str, tuple[str, int]] = {}
        self._lock = threading.Lock()

    def get(self, key: str) -> Optional[tuple[str, int]]:
        with self._lock:
            if key in self._mem:
                return self._mem[key]
        if self.directory is not None:
            path = self.directory / key
            if path.exists():
                data = json.loads(path.read_text())
                value = (data["response"], data["state"])
                with self._lock:
                    self._mem[key] = value
                return value
        return None

    def put(self, key: str, response: str, state: int):
        with self._lock:
            self._mem[key] = (response, state)
        if self.directory is not None:
            self.directory.mkdir(parents=True, exist_ok=True)
            tmp = self.directory / (key + ".tmp")
            tmp.write_text(json.dumps({"response": response, "state": state}))
            tmp.replace(self.directory / key)

    def clear_memory(self):
        with self._lock:
            self._mem.clear()


class SessionManager:
    """Keeps one live session per document and serves memoized states.

    ``state_for`` checks the cache first (a hit costs zero prover sends);
    misses reuse the live session's longest matching prefix, undoing and
    replaying as needed.
    """

    def __init__(self, adapter_factory, cache: Optional[StateCache] = None):
        self.adapter_factory = adapter_factory
        self.cache = cache if cache is not None else StateCache()
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def session_for(self, uri: str) -> Session:
        with self._lock:
            session = self._sessions.get(uri)
            if session is None or session.dead:
                session = Session(self.adapter_factory(), cache=self.cache)
                self._sessions[uri] = session
            return session

    def drop(self, uri: str):
        with self._lock:
            session = self._sessions.pop(uri, None)
        if session:
            session.close()

    def state_for(self, doc: Document, frame_index: int) -> tuple[str, int]:
        frames = doc.frames
        if not 0 <= frame_index < len(frames):
            raise SessionError(f"no frame {frame_index} in {doc.uri}")
        keys = prefix_keys(frames[: frame_index + 1])
        cached = self.cache.get(keys[frame_index])
        if cached is not None:
            return cached
        session = self.session_for(doc.uri)
        # longest common prefix between the session's executed list and frames
        lcp = 0
        while (
            lcp < len(session.executed)
            and lcp <= frame_index
            and session.executed[lcp][1] == frames[lcp].command_text
        ):
            lcp += 1
        lcp = min(lcp, frame_index)
        if session.cursor > lcp - 1:
            session.sync_to(lcp - 1)
        response, state = "", 0
        for i in range(lcp, frame_index + 1):
            frame = frames[i]
            response, state = session.send_frame(frame)
            if i < frame_index and not response_ok(response):
                raise ProverFailure(i, response)
        return response, state

    def close(self):
        with self._lock:
            sessions = list(self._sessions.values())
            self._sessions.clear()
        for s in sessions:
            s.close()
