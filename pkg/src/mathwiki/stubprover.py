"""Deterministic stub prover speaking the adapter line protocol.

Run as ``python -m mathwiki.stubprover``.  Commands arrive on stdin,
terminated by ``;;`` at end of line.  Every response ends with a sentinel
line ``<<ready>>``; the depth probe ``#depth;;`` is answered by a single
decimal line instead.

Goalstack semantics: ``g`` sets depth to 1, each successful ``e`` adds 1,
``b ();;`` subtracts 1 (clamped at 0); everything else leaves depth alone.
Tactics whose text contains ``FAIL`` raise a deterministic exception and do
not move the stack, so tests can inject failures.
"""

from __future__ import annotations

import sys

PROBE = "#depth"
READY = "<<ready>>"


def _first_token(text: str) -> str:
    for word in text.replace("(", " ").split():
        return word
    return ""


class StubProver:
    def __init__(self):
        self.depth = 0
        self.goal = ""

    def respond(self, command: str) -> str:
        """Response text for one command (without the sentinel)."""
        body = command.strip()
        if body.endswith(";;"):
            body = body[:-2].strip()
        head = _first_token(body)
        if head == "g":
            self.depth = 1
            self.goal = body[1:].strip().strip("`").strip()
            return f"goal: {self.goal}\nval it : goalstack = 1 subgoal"
        if head == "e":
            tactic = body[1:].strip()
            if "FAIL" in tactic:
                return f"Exception: Failure {tactic!r}"
            self.depth += 1
            return f"goal: {self.goal}\nval it : goalstack = depth {self.depth}"
        if head == "b":
            if self.depth > 0:
                self.depth -= 1
            return f"val it : goalstack = depth {self.depth}"
        return f"val {head or '_'} : accepted"


def main(argv=None) -> int:
    prover = StubProver()
    stdin = sys.stdin
    stdout = sys.stdout
    buffer: list[str] = []
    for line in stdin:
        stripped = line.rstrip("\r\n")
        buffer.append(stripped)
        if not stripped.rstrip().endswith(";;"):
            continue
        command = "\n".join(buffer)
        buffer = []
        if command.strip() == PROBE + ";;":
            stdout.write(f"{prover.depth}\n")
        else:
            stdout.write(prover.respond(command) + "\n")
            stdout.write(READY + "\n")
        stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
