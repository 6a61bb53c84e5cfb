import io
import json
from pathlib import Path

import pytest

from wlpa import Algebra, Generator, parse_weighted_graph
from wlpa.cli import run
from wlpa.exprs import ExpressionError, parse_element

FIXTURES = Path(__file__).parent / "fixtures"

E = Generator.edge
S = Generator.star


def invoke(*argv, stdin_text=""):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdin=io.StringIO(stdin_text), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def fx(name):
    return str(FIXTURES / name)


# -- expression parsing ----------------------------------------------------


def algebra_for(name):
    return Algebra(parse_weighted_graph((FIXTURES / name).read_text()))


def test_expr_single_generator():
    algebra = algebra_for("e2loops.wg")
    assert parse_element(algebra, "b.2") == algebra.edge("b", 2)
    assert parse_element(algebra, "b.2*") == algebra.star("b", 2)
    assert parse_element(algebra, "v") == algebra.vertex("v")


def test_expr_products_and_sums():
    algebra = algebra_for("e2loops.wg")
    p = parse_element(algebra, "b.2 a.1 b.2*")
    assert p == algebra.word((E("b", 2), E("a", 1), S("b", 2)))
    combo = parse_element(algebra, "3/2 * v - b.2 a.1")
    expected = algebra.vertex("v").scaled("3/2") - algebra.word((E("b", 2), E("a", 1)))
    assert combo == expected


def test_expr_parentheses():
    algebra = algebra_for("e2loops.wg")
    value = parse_element(algebra, "b.2 (a.1 + v) b.2*")
    direct = parse_element(algebra, "b.2 a.1 b.2* + b.2 b.2*")
    assert value == direct


def test_expr_superscripted_identifiers():
    g6 = parse_weighted_graph((FIXTURES / "g6_stage2.wg").read_text())
    algebra = Algebra(g6)
    word = parse_element(algebra, "(h^(1))^(2).1")
    assert word == algebra.edge("(h^(1))^(2)", 1)
    assert parse_element(algebra, "x^(1)") == algebra.vertex("x^(1)")


def test_expr_errors():
    algebra = algebra_for("loop1.wg")
    for bad in ("", "a.1 +", "3 v", "a.2", "b.1", "unknown", "(a.1", "3/2"):
        with pytest.raises(ExpressionError):
            parse_element(algebra, bad)


# -- CLI exit codes and text output -----------------------------------------


def test_cli_check_lpa_satisfied():
    code, out, err = invoke("check-lpa", "--input", fx("g6.wg"))
    assert code == 0 and out.strip() == "satisfied" and err == ""


def test_cli_check_lpa_violated():
    code, out, _ = invoke("check-lpa", "--input", fx("e2loops.wg"))
    assert code == 3
    assert "LPA2" in out and "LPA4" in out


def test_cli_validate():
    code, out, _ = invoke("validate", "--input", fx("g6.wg"))
    assert code == 0 and out.strip() == "ok: 6 vertices, 9 edges"


def test_cli_input_errors():
    code, _, err = invoke("validate", "--input", fx("missing.wg"))
    assert code == 1 and "cannot read" in err
    code, _, err = invoke(
        "validate", "--input", "-", stdin_text="edge a v v 1"
    )
    assert code == 1 and "unknown source" in err


def test_cli_eval():
    code, out, _ = invoke("eval", "--input", fx("loop1.wg"), "a.1* a.1")
    assert code == 0 and out.strip() == "v"
    code, _, err = invoke("eval", "--input", fx("loop1.wg"), "a.3")
    assert code == 1 and "error" in err


def test_cli_eval_mod_field():
    code, out, _ = invoke(
        "eval", "--input", fx("loop1.wg"), "--field", "mod:2", "v + v"
    )
    assert code == 0 and out.strip() == "0"
    code, _, err = invoke(
        "eval", "--input", fx("loop1.wg"), "--field", "mod:4", "v"
    )
    assert code == 1 and "prime" in err


def test_cli_growth_table():
    code, out, _ = invoke("growth", "--input", fx("e2loops.wg"), "12")
    assert code == 0
    table = [line.split("\t") for line in out.strip().splitlines()]
    values = {int(n): int(c) for n, c in table}
    assert values[0] == 1 and values[12] >= 2 ** 4
    assert all(values[n] <= values[n + 1] for n in range(12))


def test_cli_zero_dim_table():
    code, out, _ = invoke("zero-dim", "--input", fx("loop1.wg"), "4")
    assert code == 0
    assert out.strip().splitlines()[-1] == "4\t1"


def test_cli_witness():
    code, out, _ = invoke("witness", "--input", fx("e2loops.wg"))
    assert code == 0 and out.strip() == "b.2 a.1 b.2*"
    code, out, _ = invoke("witness", "--input", fx("g6.wg"))
    assert code == 3 and "no witness" in out


def test_cli_basis():
    code, out, _ = invoke("basis", "--input", fx("loop1.wg"), "2")
    assert code == 0
    assert out.strip().splitlines() == ["v", "a.1", "a.1*", "a.1 a.1", "a.1* a.1*"]


def test_cli_basis_budget():
    code, _, err = invoke(
        "basis", "--input", fx("e2loops.wg"), "12", "--budget", "1000"
    )
    assert code == 1 and "budget" in err


def test_cli_transform_violated():
    code, out, _ = invoke("transform", "--input", fx("e2loops.wg"))
    assert code == 3 and "LPA2" in out


def test_cli_transform_verify_exit():
    code, out, _ = invoke("transform", "--input", fx("fork.wg"), "--verify")
    assert code == 0 and "# verify: ok" in out


def test_cli_special_override():
    code, out, _ = invoke(
        "basis", "--input", fx("l23.wg"), "1", "--special", "v=e2"
    )
    assert code == 0
    code, _, err = invoke(
        "basis", "--input", fx("e2loops.wg"), "1", "--special", "v=a"
    )
    assert code == 1 and "maximal" in err
    code, _, err = invoke(
        "basis", "--input", fx("e2loops.wg"), "1", "--special", "w=a"
    )
    assert code == 1


def test_cli_special_changes_normal_form():
    _, default_out, _ = invoke("eval", "--input", fx("l23.wg"), "e1.1 e1.2*")
    _, other_out, _ = invoke(
        "eval", "--input", fx("l23.wg"), "--special", "v=e2", "e1.1 e1.2*"
    )
    assert default_out != other_out


def test_cli_usage_errors():
    code, _, err = invoke("frobnicate", "--input", fx("g6.wg"))
    assert code == 1
    code, _, err = invoke("check-lpa")
    assert code == 1


# -- machine format golden files ---------------------------------------------


@pytest.mark.parametrize(
    "golden, argv, expected_code",
    [
        ("checklpa_e2loops.json",
         ["check-lpa", "--input", fx("e2loops.wg"), "--format", "machine"], 3),
        ("transform_g6.json",
         ["transform", "--input", fx("g6.wg"), "--verify", "--format", "machine"], 0),
        ("eval_loop1.json",
         ["eval", "--input", fx("loop1.wg"), "--format", "machine", "a.1* a.1"], 0),
        ("witness_e2loops.json",
         ["witness", "--input", fx("e2loops.wg"), "--format", "machine"], 0),
    ],
)
def test_cli_machine_golden(golden, argv, expected_code):
    code, out, _ = invoke(*argv)
    assert code == expected_code
    assert out == (FIXTURES / golden).read_text()
    json.loads(out)  # well-formed


def test_cli_transform_machine_payload():
    code, out, _ = invoke(
        "transform", "--input", fx("fork.wg"), "--format", "machine"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["trace"] == {"Z": ["v3"], "gv": {"v3": "b"}}
    assert [e["id"] for e in payload["stage2"]["edges"]] == ["a", "b^(1)", "b^(2)"]
