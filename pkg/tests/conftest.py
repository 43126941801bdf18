import pytest

from mathwiki.prover import StubProverAdapter
from mathwiki.store import RepositoryStore

EXAMPLE_SCRIPT = (
    "(* Example code fragment. *)\n"
    "g `x=x`;;\n"
    "e REFL_TAC;;\n"
    "let t = (* Use top_thm to verify the proof. *)\n"
    "  top_thm();;"
)

FAN_SOURCE = """\
(* Fan definitions. *)
let FAN = new_definition `FAN x = x`;;
let FAN_LEMMA = prove (`FAN a = a`, REWRITE_TAC [FAN]);;
g `FAN y = y`;;
e (MATCH_MP_TAC FAN_LEMMA);;
"""

FAN_WIKI = """\
= Fan =

See [[#local|the fan]] and the formal definition below.

{{src/fan.hl#FAN|FAN}}

[[#local]]
Some math: $P\\subset\\ring{R}^n$.
"""


@pytest.fixture
def adapter():
    a = StubProverAdapter()
    yield a
    a.close()


@pytest.fixture
def repo(tmp_path):
    store = RepositoryStore(tmp_path)
    store.init_layout()
    store.write("src/fan.hl", FAN_SOURCE)
    store.write("doc/fan.wiki", FAN_WIKI)
    return store
