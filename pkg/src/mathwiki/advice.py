"""Proof-advice service.

Line protocol: a goal is one line, assumptions and conclusion separated by
backticks (conclusion last).  Strategies race in parallel; the first success
cancels the rest.  The server answers each connection with zero or more
advice lines, caches outcomes (including empty ones), and always closes.

Ships one real strategy: a truth-table tautology decider over a small
propositional term grammar.
"""

from __future__ import annotations

import itertools
import logging
import re
import socket
import socketserver
import threading
import time
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import dataclass
from typing import Optional

log = logging.getLogger(__name__)

SEPARATOR = "`"
TAUT_ADVICE = "e (TAUT_PROVE);;"


class ProtocolError(Exception):
    pass


@dataclass(frozen=True)
class AdviceRequest:
    assumptions: tuple[str, ...]
    conclusion: str


def encode_goal(req: AdviceRequest) -> str:
    for part in (*req.assumptions, req.conclusion):
        if SEPARATOR in part:
            raise ProtocolError("goal fields must not contain the backtick separator")
    return SEPARATOR.join((*req.assumptions, req.conclusion))


def decode_goal(line: str) -> AdviceRequest:
    if line == "":
        raise ProtocolError("empty request line")
    parts = line.split(SEPARATOR)
    return AdviceRequest(assumptions=tuple(parts[:-1]), conclusion=parts[-1])


# --- mini propositional terms ---------------------------------------------

@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Not:
    arg: "Term"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of /\ \/ ==> <=>
    left: "Term"
    right: "Term"


Term = object

TOKEN_RE = re.compile(r"\s*(<=>|==>|/\\|\\/|~|\(|\)|[A-Za-z_][A-Za-z0-9_']*)")


class TermParseError(Exception):
    pass


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise TermParseError(f"bad token at {pos}: {text[pos:]!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


class _Parser:
    """Precedence: ~  >  /\\  >  \\/  >  ==> (right)  >  <=> (right)."""

    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise TermParseError("unexpected end of term")
        self.pos += 1
        return tok

    def parse(self) -> Term:
        t = self.iff()
        if self.peek() is not None:
            raise TermParseError(f"trailing tokens: {self.tokens[self.pos:]}")
        return t

    def iff(self) -> Term:
        left = self.imp()
        if self.peek() == "<=>":
            self.take()
            return BinOp("<=>", left, self.iff())
        return left

    def imp(self) -> Term:
        left = self.disj()
        if self.peek() == "==>":
            self.take()
            return BinOp("==>", left, self.imp())
        return left

    def disj(self) -> Term:
        left = self.conj()
        while self.peek() == "\\/":
            self.take()
            left = BinOp("\\/", left, self.conj())
        return left

    def conj(self) -> Term:
        left = self.atom()
        while self.peek() == "/\\":
            self.take()
            left = BinOp("/\\", left, self.atom())
        return left

    def atom(self) -> Term:
        tok = self.take()
        if tok == "~":
            return Not(self.atom())
        if tok == "(":
            t = self.iff()
            if self.take() != ")":
                raise TermParseError("missing closing paren")
            return t
        if tok == "T":
            return Const(True)
        if tok == "F":
            return Const(False)
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok):
            return Atom(tok)
        raise TermParseError(f"unexpected token {tok!r}")


def parse_term(text: str) -> Term:
    tokens = _tokenize(text)
    if not tokens:
        raise TermParseError("empty term")
    return _Parser(tokens).parse()


def print_term(t: Term, prec: int = 0) -> str:
    # precedence levels: <=> 1, ==> 2, \/ 3, /\ 4, ~ 5
    levels = {"<=>": 1, "==>": 2, "\\/": 3, "/\\": 4}
    if isinstance(t, Atom):
        return t.name
    if isinstance(t, Const):
        return "T" if t.value else "F"
    if isinstance(t, Not):
        inner = print_term(t.arg, 5)
        return f"~{inner}"
    level = levels[t.op]
    right_assoc = t.op in ("==>", "<=>")
    left = print_term(t.left, level + (1 if right_assoc else 0))
    right = print_term(t.right, level + (0 if right_assoc else 1))
    s = f"{left} {t.op} {right}"
    return f"({s})" if level < prec else s


def atoms_of(t: Term) -> set[str]:
    if isinstance(t, Atom):
        return {t.name}
    if isinstance(t, Const):
        return set()
    if isinstance(t, Not):
        return atoms_of(t.arg)
    return atoms_of(t.left) | atoms_of(t.right)


def evaluate(t: Term, env: dict[str, bool]) -> bool:
    if isinstance(t, Atom):
        return env[t.name]
    if isinstance(t, Const):
        return t.value
    if isinstance(t, Not):
        return not evaluate(t.arg, env)
    a, b = evaluate(t.left, env), evaluate(t.right, env)
    if t.op == "/\\":
        return a and b
    if t.op == "\\/":
        return a or b
    if t.op == "==>":
        return (not a) or b
    return a == b


def is_tautology(t: Term) -> bool:
    names = sorted(atoms_of(t))
    for values in itertools.product([False, True], repeat=len(names)):
        if not evaluate(t, dict(zip(names, values))):
            return False
    return True


# --- strategies ------------------------------------------------------------

class TautologyStrategy:
    """Decides boolean goals by truth table; declines anything unparseable."""

    name = "tautology"
    cancellable = True

    def run(self, request: AdviceRequest, cancelled: Optional[threading.Event] = None) -> Optional[str]:
        try:
            terms = [parse_term(a) for a in request.assumptions]
            goal = parse_term(request.conclusion)
        except TermParseError:
            return None
        for assumption in terms:
            goal = BinOp("==>", assumption, goal)
        return TAUT_ADVICE if is_tautology(goal) else None


class StubStrategy:
    """Test helper: returns a fixed answer after an optional delay, raising
    ``observed_cancel`` when the race cancels it mid-wait."""

    cancellable = True

    def __init__(self, name, result=None, delay=0.0, crash=False):
        self.name = name
        self.result = result
        self.delay = delay
        self.crash = crash
        self.observed_cancel = False
        self.ran = False

    def run(self, request, cancelled: Optional[threading.Event] = None):
        self.ran = True
        if self.crash:
            raise RuntimeError(f"strategy {self.name} crashed")
        deadline = self.delay
        step = 0.005
        waited = 0.0
        while waited < deadline:
            if cancelled is not None and cancelled.wait(step):
                self.observed_cancel = True
                return None
            waited += step
        if cancelled is not None and cancelled.is_set():
            self.observed_cancel = True
            return None
        return self.result


def dispatch(request: AdviceRequest, strategies, timeout: float = 10.0):
    """Race strategies; first advice wins, the rest get cancelled.

    Returns (strategy name, advice text) or None when everything fails or the
    timeout elapses.  Crashing strategies count as failures.
    """
    if not strategies:
        raise ValueError("dispatch needs at least one strategy")
    cancelled = threading.Event()
    winner = None
    deadline = time.monotonic() + timeout
    with ThreadPoolExecutor(max_workers=len(strategies)) as pool:
        futures = {pool.submit(s.run, request, cancelled): s for s in strategies}
        pending = set(futures)
        while pending and winner is None:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                break
            done, pending = wait(pending, timeout=remaining, return_when=FIRST_COMPLETED)
            if not done:
                break
            for fut in done:
                strategy = futures[fut]
                try:
                    result = fut.result()
                except Exception:
                    log.exception("strategy %s crashed", strategy.name)
                    continue
                if result is not None and winner is None:
                    winner = (strategy.name, result)
        cancelled.set()
        wait(set(futures), timeout=timeout)
    return winner


# --- TCP server and client -------------------------------------------------

class AdviceCache:
    def __init__(self):
        self._data: dict[str, list[str]] = {}
        self._lock = threading.Lock()

    def get(self, line: str):
        with self._lock:
            value = self._data.get(line)
            return None if value is None else list(value)

    def put(self, line: str, advice: list[str]):
        with self._lock:
            self._data[line] = list(advice)


def compute_advice(line: str, strategies, cache: AdviceCache, timeout: float = 10.0) -> list[str]:
    """Advice lines for one request line, consulting the cache first."""
    cached = cache.get(line)
    if cached is not None:
        return cached
    request = decode_goal(line)
    result = dispatch(request, strategies, timeout=timeout)
    advice = [result[1]] if result else []
    cache.put(line, advice)
    return advice


class AdviceServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, address, strategies=None, cache=None, timeout: float = 10.0):
        self.strategies = strategies if strategies is not None else [TautologyStrategy()]
        self.cache = cache if cache is not None else AdviceCache()
        self.advice_timeout = timeout
        super().__init__(address, _AdviceHandler)


class _AdviceHandler(socketserver.StreamRequestHandler):
    def handle(self):
        server: AdviceServer = self.server
        raw = self.rfile.readline()
        line = raw.decode("utf-8", errors="replace").rstrip("\r\n")
        try:
            if line == "":
                raise ProtocolError("empty request line")
            advice = compute_advice(line, server.strategies, server.cache, server.advice_timeout)
            for item in advice:
                self.wfile.write((item + "\n").encode())
        except ProtocolError as exc:
            self.wfile.write(f"error: {exc}\n".encode())
        # connection closes when the handler returns: no more advice available


def serve(host: str = "127.0.0.1", port: int = 9876, strategies=None) -> AdviceServer:
    server = AdviceServer((host, port), strategies=strategies)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server


def request_advice(host: str, port: int, line: str, timeout: float = 30.0) -> list[str]:
    """Client side: send one goal line, collect advice lines until close."""
    with socket.create_connection((host, port), timeout=timeout) as conn:
        conn.sendall((line + "\n").encode())
        chunks = []
        while True:
            data = conn.recv(4096)
            if not data:
                break
            chunks.append(data)
    text = b"".join(chunks).decode()
    return [l for l in text.split("\n") if l != ""]
