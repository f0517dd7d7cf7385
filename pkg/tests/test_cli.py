import json

import numpy as np
import pytest
from click.testing import CliRunner

from hypercauchy.admissibility import save_conditions
from hypercauchy.cli import main
from hypercauchy.families import (
    random_invertible_single_condition,
    sample_dim3_table,
)

ALPHA = 1.0 / (2.0 * np.pi**2)


@pytest.fixture()
def runner():
    return CliRunner()


def _json_payload(result):
    return json.loads(result.output)


def test_inspect_tessarine(runner):
    result = runner.invoke(main, ["inspect", "tessarine"])
    assert result.exit_code == 0
    payload = _json_payload(result)
    assert payload["schema_version"] == "1"
    report = payload["report"]
    assert report["dim"] == 4
    assert report["unit_ok"] and report["associative"] and report["commutative"]
    assert report["sum_basis_squares_zero"]


def test_inspect_octonion_not_associative(runner):
    result = runner.invoke(main, ["inspect", "octonion"])
    assert result.exit_code == 0
    report = _json_payload(result)["report"]
    assert not report["associative"]
    assert report["associativity_violation"] > 0.5
    assert not report["commutative"]


def test_inspect_complex_squares_vanish(runner):
    result = runner.invoke(main, ["inspect", "complex", "--format", "text"])
    assert result.exit_code == 0
    assert "zero: True" in result.output


def test_inspect_unknown_algebra_fails(runner):
    result = runner.invoke(main, ["inspect", "no_such_algebra"])
    assert result.exit_code == 1


def test_cr_solve_fueter_feasible(runner):
    result = runner.invoke(main, ["cr-solve", "fueter"])
    assert result.exit_code == 0
    report = _json_payload(result)["report"]
    assert set(report) == {"feasible", "residual", "free_dim", "b", "c"}
    assert report["feasible"] is True
    b = np.array(report["b"])
    expected = np.zeros((1, 4, 4))
    expected[0, 0, 0] = ALPHA
    for l in (1, 2, 3):
        expected[0, l, l] = -ALPHA
    np.testing.assert_allclose(b, expected, atol=1e-12)


def test_cr_solve_conditions_file_and_infeasible_exit(runner, tmp_path):
    rng = np.random.default_rng(5)
    table = sample_dim3_table(rng, commutative=True)
    C = random_invertible_single_condition(table, 3, rng)
    path = tmp_path / "dim3.json"
    save_conditions(C, path)
    result = runner.invoke(main, ["cr-solve", str(path)])
    assert result.exit_code == 2
    report = _json_payload(result)["report"]
    assert report["feasible"] is False
    assert report["residual"] > 1e-2


def test_cr_solve_malformed_json_is_operational_error(runner, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    result = runner.invoke(main, ["cr-solve", str(bad)])
    assert result.exit_code == 1


def test_cr_solve_unknown_spec_fails(runner):
    result = runner.invoke(main, ["cr-solve", "no_such_case.json"])
    assert result.exit_code == 1


def test_gallery_name_wins_over_file_with_warning(runner):
    with runner.isolated_filesystem():
        with open("fueter", "w") as fh:
            fh.write("{}")
        result = runner.invoke(main, ["cr-solve", "fueter"])
        assert result.exit_code == 0
        assert "warning" in result.stderr


def test_reproduce_cubic(runner):
    result = runner.invoke(
        main,
        ["reproduce", "dbar", "-f", "z3_plus_2z", "--point", "0.3,0.1",
         "--nodes", "256"],
    )
    assert result.exit_code == 0
    report = _json_payload(result)["report"]
    assert report["rel_error"] < 1e-10
    w = 0.3 + 0.1j
    np.testing.assert_allclose(
        report["computed"], [(w**3 + 2 * w).real, (w**3 + 2 * w).imag],
        atol=1e-12,
    )


def test_reproduce_zeta1(runner):
    result = runner.invoke(
        main,
        ["reproduce", "fueter", "-f", "zeta1", "--point", "0.1,0.2,0,0",
         "--nodes", "24"],
    )
    assert result.exit_code == 0
    assert _json_payload(result)["report"]["rel_error"] < 1e-6


def test_reproduce_polynomial_file(runner, tmp_path):
    poly = tmp_path / "poly.json"
    # first coordinate times e_0 plus second times e_1: this is z, holomorphic
    poly.write_text(json.dumps({
        "exponents": [[1, 0], [0, 1]],
        "coeffs": [[1.0, 0.0], [0.0, 1.0]],
    }))
    result = runner.invoke(
        main,
        ["reproduce", "dbar", "-f", str(poly), "--point", "0.2,-0.3",
         "--nodes", "64"],
    )
    assert result.exit_code == 0
    report = _json_payload(result)["report"]
    np.testing.assert_allclose(report["computed"], [0.2, -0.3], atol=1e-12)


def test_reproduce_point_outside_fails(runner):
    result = runner.invoke(
        main, ["reproduce", "dbar", "-f", "z2", "--point", "1.5,0.0"]
    )
    assert result.exit_code == 1


def test_reproduce_under_resolved_fails(runner):
    result = runner.invoke(
        main,
        ["reproduce", "dbar", "-f", "z3_plus_2z", "--point", "0.93,0.0",
         "--nodes", "8", "--tol", "1e-12"],
    )
    assert result.exit_code == 1


def test_reproduce_non_solution_rejected(runner):
    result = runner.invoke(
        main, ["reproduce", "dbar", "-f", "y1sq", "--point", "0.2,0.0"]
    )
    assert result.exit_code == 1


def test_suite_m2r_passes(runner):
    result = runner.invoke(main, ["suite", "m2r"])
    assert result.exit_code == 0
    payload = _json_payload(result)["report"]
    assert payload["passed"] is True
    assert all(line.startswith("PASS") for line in payload["lines"])


def test_suite_unknown_name_rejected(runner):
    result = runner.invoke(main, ["suite", "everything"])
    assert result.exit_code != 0


def test_json_output_deterministic(runner, tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    args = ["reproduce", "dbar", "-f", "z2", "--point", "0.1,0.2",
            "--scheme", "monte_carlo", "--nodes", "500", "--seed", "9"]
    r1 = runner.invoke(main, args + ["--out", str(out1)])
    r2 = runner.invoke(main, args + ["--out", str(out2)])
    assert r1.exit_code == 0 and r2.exit_code == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_cr_solve_tol_validation(runner):
    result = runner.invoke(main, ["cr-solve", "fueter", "--tol", "-1"])
    assert result.exit_code == 1
