import json

import pytest

from app import CommandApp, create_app
from src.models.series import HSeries, exp_h
from src.routes import CommandGroup


def parse(out):
    return json.loads(out)


def only_coeffs(payload):
    (term,) = payload["result"]["terms"]
    return HSeries(term["coeffs"])


def test_star_on_the_plane_q_commutes(run_cli):
    code, out, _ = run_cli("star", "x", "y", "--space", "plane", "--order", "6")
    assert code == 0
    xy = parse(out)
    assert xy["space"] == "plane"
    assert xy["product"] == "star"
    code, out, _ = run_cli("star", "y", "x", "--space", "plane", "--order", "6")
    assert code == 0
    yx = parse(out)
    assert only_coeffs(xy).allclose(only_coeffs(yx) * exp_h(1, 6), 1e-9)


def test_star_in_the_monomial_basis(run_cli):
    code, out, _ = run_cli("star", "x", "x", "--space", "plane", "--order", "4", "--monomial")
    assert code == 0
    result = parse(out)["result"]
    assert result["type"] == "monomial"
    (term,) = result["terms"]
    assert (term["k"], term["l"]) == (2, 0)
    assert HSeries(term["coeffs"]).allclose(1.0, 1e-9)


def test_star_with_json_factors(run_cli):
    factor = json.dumps({"type": "mq2", "terms": [{"two_j": 1, "two_m": -1, "two_mp": -1, "det_pow": 0, "coeffs": [2.0]}]})
    code, out, _ = run_cli("star", factor, "1", "--space", "mq2", "--order", "3", "--product", "classical")
    assert code == 0
    (term,) = parse(out)["result"]["terms"]
    assert (term["two_j"], term["two_m"], term["two_mp"]) == (1, -1, -1)
    assert term["coeffs"][0] == pytest.approx(2.0)


def test_star_rejects_bad_json(run_cli):
    code, out, err = run_cli("star", "{not json", "x", "--space", "plane")
    assert code == 2
    assert out == ""
    assert "Usage Error" in err


def test_star_needs_a_single_space(run_cli):
    code, _, err = run_cli("star", "a", "b", "--space", "all")
    assert code == 2
    assert "pick one space" in err


def test_cg_csv(run_cli):
    code, out, _ = run_cli("cg", "--j1", "1/2", "--j2", "1/2", "--format", "csv", "--order", "3")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "twoJ,twoM,twoM1,twoM2,c0,c1,c2"
    assert len(lines) == 7


def test_cg_json(run_cli):
    code, out, _ = run_cli("cg", "--j1", "1", "--j2", "1/2", "--classical", "--order", "2")
    assert code == 0
    table = parse(out)
    assert table["deformed"] is False
    assert (table["j1"], table["j2"]) == ("1", "1/2")


def test_invalid_spin_is_a_usage_error(run_cli):
    code, _, err = run_cli("cg", "--j1", "1/3", "--j2", "1/2")
    assert code == 2
    assert "half-integer" in err


def test_repr_reports_the_casimir(run_cli):
    code, out, _ = run_cli("repr", "--j", "1", "--word", "EF", "--order", "4")
    assert code == 0
    payload = parse(out)
    assert payload["word"] == "EF"
    assert payload["casimir"]["order"] == 4
    assert payload["casimir"]["coeffs"][0] == pytest.approx(1.0)
    matrix = payload["matrix"]
    assert matrix["order"] == 4
    assert len(matrix["entries"]) == len(matrix["rows"]) == 3
    assert all(len(row) == 3 for row in matrix["entries"])


def test_repr_rejects_unknown_generators(run_cli):
    code, _, err = run_cli("repr", "--j", "1", "--word", "EX")
    assert code == 2
    assert "unknown generator" in err


def test_twist_kinds(run_cli):
    code, out, _ = run_cli("twist", "--j1", "1/2", "--j2", "1/2", "--kind", "rmatrix", "--order", "3")
    assert code == 0
    assert parse(out)["matrix"]["order"] == 3
    code, out, _ = run_cli("twist", "--j1", "1/2", "--j2", "1/2", "--kind", "inverse", "--order", "3")
    assert parse(out)["inverse"] is True
    code, _, err = run_cli("twist", "--j1", "1/2", "--j2", "1/2", "--kind", "coassociator")
    assert code == 2
    assert "--j3" in err
    code, out, _ = run_cli("twist", "--j1", "1/2", "--j2", "1/2", "--j3", "1/2", "--kind", "coassociator", "--order", "3")
    assert code == 0
    assert parse(out)["spins"] == ["1/2", "1/2", "1/2"]


def test_relations(run_cli):
    code, out, _ = run_cli("relations", "--space", "plane", "--order", "4")
    assert code == 0
    report = parse(out)
    assert report["relations"][0]["lhs"] == "y*x"


def test_verify_refuses_order_one(run_cli):
    code, out, err = run_cli("verify", "--order", "1")
    assert code == 2
    assert out == ""
    assert "vacuous" in err


def test_verify_list(run_cli, tmp_path):
    report_path = tmp_path / "checks.json"
    code, out, _ = run_cli("verify", "--list", "--space", "mq2", "--json-out", str(report_path))
    assert code == 0
    assert "quadratic_ideal" in out
    listing = json.loads(report_path.read_text())
    assert listing["suites"] == ["core", "mq2"]
    assert {c["suite"] for c in listing["checks"]} == {"core", "mq2"}


def test_small_plane_verification(run_cli, tmp_path):
    report_path = tmp_path / "nested" / "report.json"
    code, out, _ = run_cli(
        "verify", "--space", "plane", "--max-spin", "1/2", "--order", "4", "--json-out", str(report_path)
    )
    assert "All" in out and "checks passed" in out
    assert code == 0
    report = json.loads(report_path.read_text())
    assert report["status"] == "passed"
    assert report["config"]["order"] == 4
    names = {r["name"] for r in report["results"]}
    assert {"plane_commutation", "twist_unitarity", "rf_relation"} <= names


def test_missing_command_prints_usage(run_cli):
    code, _, err = run_cli()
    assert code == 2
    assert "usage" in err.lower()


def test_duplicate_commands_are_rejected():
    app = create_app("testing")
    group = CommandGroup("again")

    @group.command("star")
    def handler(args, session):
        return None

    with pytest.raises(ValueError):
        app.register_group(group)
    assert isinstance(app, CommandApp)


@pytest.mark.parametrize(
    "argv",
    [
        ("cg", "--j1", "10", "--j2", "10"),
        ("cg", "--j1", "1", "--j2", "1", "--max-spin", "1/2"),
        ("repr", "--j", "7/2"),
        ("twist", "--j1", "1/2", "--j2", "4"),
    ],
    ids=["cg-huge", "cg-max-spin", "repr", "twist"],
)
def test_spins_past_the_session_bound_are_usage_errors(run_cli, argv):
    code, out, err = run_cli(*argv)
    assert code == 2
    assert out == ""
    assert "exceeds the session bound" in err


def test_coupled_spins_past_the_degree_cap_are_usage_errors(run_cli):
    code, out, err = run_cli("twist", "--j1", "3", "--j2", "3", "--j3", "1/2", "--kind", "coassociator")
    assert code == 2
    assert out == ""
    assert "past the cap 12" in err
