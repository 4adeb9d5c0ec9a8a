import json
from pathlib import Path

import pytest

from dgweight.problemio import ProblemError, canonical_dumps, load_schema, parse, serialize

ROOT = Path(__file__).parent.parent
FIXTURES = Path(__file__).parent / "fixtures"


@pytest.mark.parametrize("path", sorted(FIXTURES.glob("*.json")), ids=lambda p: p.name)
def test_round_trip(path):
    text = path.read_text()
    assert canonical_dumps(serialize(parse(json.loads(text)))) == text


def test_docs_schema_matches_package():
    assert json.loads((ROOT / "docs" / "problem.schema.json").read_text()) == load_schema()


def load(name):
    return json.loads((FIXTURES / name).read_text())


def test_schema_errors_are_collected():
    with pytest.raises(ProblemError) as e:
        parse({"version": "2", "kind": "snc", "coefficient": {"type": "Z"}, "payload": {}})
    assert any("version" in d or "'2'" in d for d in e.value.diagnostics)


def test_block_grid_checked():
    doc = load("twisted_two_slot.json")
    doc["payload"]["q"][0]["blocks"] = [[[1]]]
    with pytest.raises(ProblemError, match="grid of blocks"):
        parse(doc)


def test_coordinate_count_checked():
    doc = load("twisted_two_slot.json")
    doc["payload"]["q"][0]["blocks"][0][0] = [1, 1]
    with pytest.raises(ProblemError, match="coordinates"):
        parse(doc)


def test_h0_needs_dgchain():
    doc = load("twisted_presented.json")
    doc["payload"]["functor"] = "H0"
    with pytest.raises(ProblemError, match="dgchain"):
        parse(doc)


def test_indexing_preserved():
    pr = parse(load("complex_rp2.json"))
    assert pr.complex.indexing == "homological"
    # homological degree 2 is stored at cohomological -2
    assert pr.complex.complex.rank(-2) == 1
