import json

import pytest

from cli import run
from config import VERSION


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def _error(capsys):
    # log records share stderr with the diagnostic
    err = capsys.readouterr().err
    return json.loads(err[err.index("{\n"):])


def test_table_show_sidon_rows(capsys):
    assert run(["table", "show", "--constant", "beta", "--group-family", "Z2", "--json"]) == 0
    payload = _json(capsys)
    assert payload["schema"] == 1
    assert [(row["d"], row["value"], row["provenance"]) for row in payload["rows"]] == [
        (1, 2, "published"),
        (2, 3, "published"),
        (3, 4, "published"),
        (4, 6, "published"),
    ]


def test_solve_beta_json(capsys, tmp_path):
    witness = tmp_path / "beta.json"
    code = run(["solve", "beta", "--group", "Z2^3", "--r", "4", "--emit-witness", str(witness), "--json"])
    assert code == 0
    payload = _json(capsys)
    assert payload["value"] == 4
    assert payload["exhaustive"] is True
    assert payload["witness_file"] == str(witness)
    assert run(["verify", "certificate", "--file", str(witness)]) == 0


def test_solve_defaults_r_to_the_exponent(capsys):
    assert run(["solve", "sr", "--group", "Z3", "--json"]) == 0
    payload = _json(capsys)
    assert (payload["r"], payload["value"]) == (3, 5)


def test_solve_with_a_tiny_budget_is_not_exhaustive(capsys):
    assert run(["solve", "sr", "--group", "Z2^3", "--r", "4", "--budget-nodes", "1"]) == 1
    assert "lower bound" in capsys.readouterr().out


def test_solve_cap_and_g(capsys):
    assert run(["solve", "cap", "--d", "2", "--json"]) == 0
    assert _json(capsys)["value"] == 4
    assert run(["solve", "g", "--group", "Z3^2", "--json"]) == 0
    assert _json(capsys)["value"] == 5


def test_usage_errors_exit_with_two(capsys):
    assert run(["solve", "beta", "--group", "Z2^2", "--r", "3"]) == 2
    err = _error(capsys)
    assert err["error"] == "ParameterError"
    assert err["schema"] == 1

    assert run(["solve", "beta", "--group", "Q8", "--r", "4"]) == 2
    assert _error(capsys)["error"] == "GroupSpecError"

    assert run(["frobnicate"]) == 2
    assert _error(capsys)["error"] == "UsageError"

    assert run(["solve", "beta", "--r", "4"]) == 2


def test_element_cap_flag_exits_with_one(capsys):
    assert run(["--element-cap", "8", "solve", "beta", "--group", "Z2^4", "--r", "4"]) == 1
    err = _error(capsys)
    assert err["error"] == "CapExceededError"
    assert err["details"]["limit"] == 8


def test_version(capsys):
    assert run(["--version"]) == 0
    assert VERSION in capsys.readouterr().out


def test_construct_and_verify_moment_curve(capsys, tmp_path, write_file):
    curve = tmp_path / "curve.set"
    assert run(["construct", "moment-curve", "--m", "2", "--k", "2", "--emit", str(curve), "--json"]) == 0
    payload = _json(capsys)
    assert payload["valid"] is True
    assert payload["size"] == 4
    assert run(["verify", "zerofree", "--file", str(curve), "--r", "4"]) == 0
    assert run(["verify", "zerofree", "--file", str(curve), "--r", "2"]) == 0
    capsys.readouterr()

    tampered = write_file("tampered.set", "# group: Z2^4\n0,0,0,0\n0,0,0,1\n0,0,1,0\n0,0,1,1\n")
    assert run(["verify", "zerofree", "--file", tampered, "--r", "4", "--json"]) == 1
    payload = _json(capsys)
    assert payload["zero_free"] is False
    assert len(payload["violating"]) == 4


def test_construct_sidon_sets(capsys):
    assert run(["construct", "sidon", "--d", "4", "--json"]) == 0
    assert _json(capsys)["size"] == 6
    assert run(["construct", "sidon", "--d", "4", "--basis", "--json"]) == 0
    assert _json(capsys)["size"] == 5
    assert run(["construct", "s4-lower", "--d", "3", "--json"]) == 0
    assert _json(capsys)["size"] == 6
    assert run(["construct", "egz-lower", "--m", "2", "--k", "2", "--json"]) == 0
    assert _json(capsys)["size"] == 6


def test_verify_sidon_and_zerosum(capsys, write_file):
    sidon = write_file("sidon.set", "# group: Z2^3\n0,0,0\n0,0,1\n0,1,0\n1,0,0\n")
    assert run(["verify", "sidon", "--file", sidon]) == 0
    not_sidon = write_file("bad.set", "# group: Z2^3\n0,0,0\n0,0,1\n0,1,0\n0,1,1\n")
    assert run(["verify", "sidon", "--file", not_sidon]) == 1
    seq = write_file("seq.txt", "0 × 2\n1 × 2\n")
    assert run(["verify", "zerosum", "--file", seq, "--group", "Z3", "--r", "3"]) == 0
    seq = write_file("seq2.txt", "0 × 2\n1 × 2\n2\n")
    assert run(["verify", "zerosum", "--file", seq, "--group", "Z3", "--r", "3", "--json"]) == 1
    capsys.readouterr()
    assert run(["verify", "zerosum", "--file", seq, "--r", "3"]) == 2


def test_verify_hypergraph(capsys, write_file):
    fano = write_file("fano.txt", "7 3\n0 1 2\n0 3 4\n0 5 6\n1 3 5\n1 4 6\n2 3 6\n2 4 5\n")
    assert run(["verify", "hypergraph", "--file", fano, "--json"]) == 0
    payload = _json(capsys)
    assert payload["chain_holds"] is True
    assert payload["ekr_holds"] is True
    assert payload["chain"] == ["1/5", "1/5", "1/5"]


def test_bound_calculators(capsys):
    assert run(["bound", "cm", "--m", "4", "--json"]) == 0
    payload = _json(capsys)
    assert payload["power"] == 3288
    assert payload["lambda_check"] is True
    assert run(["bound", "bd", "--d", "4", "--json"]) == 0
    assert _json(capsys)["b_d"] == 5
    assert run(["bound", "s4-upper", "--d", "4", "--json"]) == 0
    assert _json(capsys)["s4_upper"] == 9
    assert run(["bound", "sidon-upper", "--d", "4", "--json"]) == 0
    assert _json(capsys)["floor"] == 6
    assert run(["bound", "z3-egz", "--d", "2", "--json"]) == 0
    assert _json(capsys)["eta_exponent"] > 1.084
    assert run(["bound", "gao", "--k", "2", "--m", "2", "--d", "2", "--json"]) == 0
    assert _json(capsys)["value"] == 6


def test_witness_build_with_auto_s(capsys):
    code = run(["witness", "build", "--group", "Z2^2", "--r", "4", "--n", "12", "--certify", "--s", "auto", "--json"])
    assert code == 0
    payload = _json(capsys)
    assert payload["s"] == 6
    assert payload["alpha"] == 5
    assert payload["max_codegree"] == 3
    assert payload["verdict"] is True


def test_bounds_derive(capsys, tmp_path):
    csv = tmp_path / "table.csv"
    assert run(["bounds", "derive", "--max-shift", "8", "--emit", str(csv), "--json"]) == 0
    first = capsys.readouterr().out
    facts = {(f["k"], f["r"]): (f["bound_num"], f["bound_den"]) for f in json.loads(first)["facts"]}
    assert facts[(9, 3)] == (1, 9)
    assert facts[(9, 4)] == (1, 16)
    assert facts[(5, 4)] == (1, 2)
    assert csv.read_text(encoding="utf-8").startswith("k,r,bound_num,bound_den,provenance\n")
    assert run(["bounds", "derive", "--max-shift", "8", "--json"]) == 0
    assert capsys.readouterr().out == first


def test_bounds_derive_from_a_facts_file(capsys, write_file):
    facts = write_file("facts.json", json.dumps([{"group": "Z2^2", "r": 4, "s": 6, "source": "solved"}]))
    assert run(["bounds", "derive", "--base-file", facts, "--max-shift", "1", "--no-classical", "--json"]) == 0
    payload = _json(capsys)
    assert [(f["k"], f["r"]) for f in payload["facts"]] == [(6, 4), (7, 5)]
    assert run(["bounds", "reference", "--json"]) == 0
    assert _json(capsys)["annotations"]



def test_bounds_derive_from_solver_runs(capsys):
    assert run(["bounds", "derive", "--from-solved", "--no-classical", "--max-shift", "8", "--json"]) == 0
    payload = _json(capsys)
    facts = {(f["k"], f["r"]): f for f in payload["facts"]}
    assert (facts[(9, 3)]["bound_num"], facts[(9, 3)]["bound_den"]) == (1, 9)
    for r in range(4, 11):
        for k, den in ((r + 1, 2), (r + 2, 4), (r + 3, 8), (r + 5, 16)):
            assert (facts[(k, r)]["bound_num"], facts[(k, r)]["bound_den"]) == (1, den)
    assert all(f["provenance"][0]["source"] == "solved" for f in payload["facts"])


def test_from_solved_and_base_file_are_exclusive(write_file):
    facts = write_file("facts.json", "[]")
    assert run(["bounds", "derive", "--from-solved", "--base-file", facts]) == 2


@pytest.mark.slow
def test_table_build_and_verify(capsys):
    assert run(["table", "build"]) == 0
    assert run(["table", "verify", "--all"]) == 0
    capsys.readouterr()
    assert run(["table", "show", "--constant", "cap", "--from-db", "--json"]) == 0
    rows = _json(capsys)["rows"]
    assert any(row["provenance"] == "solved" for row in rows)


def test_table_verify_needs_all():
    assert run(["table", "verify"]) == 2
