"""CLI surface: exit codes, JSON schemas, and document round trips."""

import json

import pytest

from topmonads import cli
from topmonads import spaces as sp

SIERPINSKI = {
    "schema": 1,
    "points": ["0", "1"],
    "opens": [[], ["1"], ["0", "1"]],
}


@pytest.fixture
def sierpinski_file(tmp_path):
    path = tmp_path / "sierpinski.json"
    path.write_text(json.dumps(SIERPINSKI))
    return str(path)


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_json(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def test_space_info(capsys, sierpinski_file):
    code, out, _ = run_cli(capsys, "space", "info", sierpinski_file)
    assert code == 0
    doc = json.loads(out)
    assert doc["T0"] is True
    assert doc["T1"] is False
    assert doc["sober"] is True
    assert doc["opens"] == 3


def test_space_hyper_is_a_three_chain(capsys, sierpinski_file):
    code, out, _ = run_cli(capsys, "space", "hyper", sierpinski_file)
    assert code == 0
    doc = json.loads(out)
    assert len(doc["points"]) == 3
    assert len(doc["opens"]) == 4
    assert doc["closed_sets"] == [[], ["0"], ["0", "1"]]
    # the emitted document re-parses to a valid space (JSON round trip)
    space = cli.parse_space(doc)
    assert space.n == 3


def test_space_validate_bad_family(capsys, tmp_path):
    path = write_json(
        tmp_path, "bad.json", {"points": ["a", "b"], "opens": [[], ["a"], ["b"]]}
    )
    code, _, err = run_cli(capsys, "space", "validate", path)
    assert code == 2
    assert json.loads(err)["error"] == "axiom"


def test_malformed_json_exits_1(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{nope")
    code, _, err = run_cli(capsys, "space", "validate", str(path))
    assert code == 1
    assert json.loads(err)["error"] == "malformed"


def test_space_product(capsys, sierpinski_file):
    code, out, _ = run_cli(
        capsys, "space", "product", sierpinski_file, sierpinski_file
    )
    assert code == 0
    doc = json.loads(out)
    assert len(doc["points"]) == 4
    assert cli.parse_space(doc).n == 4


def test_val_supp(capsys, tmp_path, sierpinski_file):
    path = write_json(
        tmp_path,
        "delta1.json",
        {"space": SIERPINSKI, "weights": {"1": "1"}},
    )
    code, out, _ = run_cli(capsys, "val", "supp", path)
    assert code == 0
    assert json.loads(out) == ["0", "1"]


def test_val_integrate(capsys, tmp_path):
    val = write_json(
        tmp_path,
        "nu.json",
        {"space": SIERPINSKI, "weights": {"0": "1/2", "1": "1/2"}},
    )
    fn = write_json(tmp_path, "g.json", {"values": {"0": "1", "1": "2"}})
    code, out, _ = run_cli(capsys, "val", "integrate", val, "--function", fn)
    assert code == 0
    assert json.loads(out) == "3/2"


def test_val_extend(capsys, tmp_path):
    val = write_json(
        tmp_path,
        "nu.json",
        {"space": SIERPINSKI, "weights": {"0": "2/3", "1": "1/3"}},
    )
    code, out, _ = run_cli(capsys, "val", "extend", val)
    assert code == 0
    assert json.loads(out) == {"0": "2/3", "1": "1/3"}


def test_val_extend_infinite_mass_exits_3(capsys, tmp_path):
    val = write_json(
        tmp_path,
        "nu.json",
        {"space": SIERPINSKI, "weights": {"0": "inf"}},
    )
    code, _, err = run_cli(capsys, "val", "extend", val)
    assert code == 3
    assert json.loads(err)["error"] == "precondition"


def test_val_product_and_push(capsys, tmp_path):
    nu = write_json(
        tmp_path,
        "nu.json",
        {"space": SIERPINSKI, "weights": {"0": "1/2", "1": "1/2"}},
    )
    rho = write_json(
        tmp_path,
        "rho.json",
        {"space": SIERPINSKI, "weights": {"0": "1/3", "1": "2/3"}},
    )
    code, out, _ = run_cli(capsys, "val", "product", nu, "--other", rho)
    assert code == 0
    doc = json.loads(out)
    assert len(doc["weights"]) == 4
    mapdoc = write_json(
        tmp_path,
        "map.json",
        {
            "source": SIERPINSKI,
            "target": SIERPINSKI,
            "assignment": {"0": "1", "1": "1"},
        },
    )
    code, out, _ = run_cli(capsys, "val", "push", nu, "--map", mapdoc)
    assert code == 0
    pushed = json.loads(out)
    assert pushed["weights"]["1"] == "1"


def test_val_E(capsys, tmp_path):
    doc = write_json(
        tmp_path,
        "xi.json",
        {
            "space": SIERPINSKI,
            "atoms": [
                ["1/2", {"weights": {"0": "1"}}],
                ["1/2", {"weights": {"1": "1"}}],
            ],
        },
    )
    code, out, _ = run_cli(capsys, "val", "E", doc)
    assert code == 0
    result = json.loads(out)
    assert result["weights"] == {"0": "1/2", "1": "1/2"}


def test_valuation_table_document_with_checksum(capsys, tmp_path):
    space = cli.parse_space(SIERPINSKI)
    checksum = cli._opens_checksum(space)
    val = write_json(
        tmp_path,
        "nu.json",
        {
            "space": SIERPINSKI,
            "table": {"0": "0", "1": "1/2", "2": "1"},
            "opens_checksum": checksum,
        },
    )
    code, out, _ = run_cli(capsys, "val", "validate", val)
    assert code == 0
    assert json.loads(out)["mass"] == "1"
    bad = write_json(
        tmp_path,
        "bad.json",
        {
            "space": SIERPINSKI,
            "table": {"0": "0", "1": "1/2", "2": "1"},
            "opens_checksum": "deadbeef0000",
        },
    )
    code, _, err = run_cli(capsys, "val", "validate", bad)
    assert code == 1


def test_rationals_never_parse_floats(capsys, tmp_path):
    val = write_json(
        tmp_path,
        "nu.json",
        {"space": SIERPINSKI, "weights": {"0": 0.5}},
    )
    code, _, err = run_cli(capsys, "val", "validate", val)
    assert code == 1


def test_laws_unknown_suite_exits_5(capsys):
    code, _, err = run_cli(capsys, "laws", "bogus")
    assert code == 5
    assert json.loads(err)["error"] == "unknown-suite"


def test_laws_suite_json_report(capsys):
    code, out, _ = run_cli(
        capsys,
        "laws",
        "supp-unit",
        "--seed",
        "42",
        "--max-points",
        "2",
        "--count",
        "10",
        "--json",
    )
    assert code == 0
    report = json.loads(out)
    assert report[0]["suite"] == "supp-unit"
    assert report[0]["failures"] == []
    assert report[0]["instances"] > 0


def test_document_round_trip():
    for space in (sp.sierpinski(), sp.w_lattice(), sp.discrete(3)):
        doc = cli.space_document(space)
        assert cli.parse_space(doc) == space


def test_valuation_document_round_trip(tmp_path):
    from topmonads import valuations as va
    from topmonads.extrat import ext

    s = sp.sierpinski()
    nu = va.valuation_from_weights(s, (ext("1/2"), ext("1/3")))
    doc = cli.valuation_document(nu)
    assert cli.parse_valuation(doc) == nu
