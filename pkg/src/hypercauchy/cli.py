"""Command-line front end: inspect algebras, solve admissibility, run
reproduction experiments, and execute the batch suites.

Exit codes: 0 success (and feasible for cr-solve), 2 infeasible conditions
or failed suite checks, 1 operational errors (bad input, point outside the
ball, parse failures).  Reports are JSON by default (--format text for a
summary); every JSON payload carries a schema_version field.
"""
from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click
import numpy as np

from .admissibility import load_conditions, solve_admissibility
from .algebra import (
    BUILTIN_NAMES,
    check_associative,
    check_commutative,
    load_algebra,
    sum_of_basis_squares,
    validate_unit,
)
from .families import gallery
from .kernel import CauchyKernel
from .solutions import NAMED_SOLUTIONS, AlgPolynomial, named_solution
from .suites import SUITE_NAMES, run_suite
from .verify import (
    BallDomain,
    PointOutsideDomain,
    QuadratureSpec,
    QuadratureUnderResolved,
    boundary_reproduce,
)

SCHEMA_VERSION = "1"


def _emit(command: str, report: dict, config: dict, out: str | None,
          fmt: str, text_lines: list[str]) -> None:
    if fmt == "json":
        payload = {
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "config": config,
            "report": report,
        }
        rendered = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        rendered = "\n".join(text_lines) + "\n"
    if out:
        Path(out).write_text(rendered)
    else:
        click.echo(rendered, nl=False)


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _parse_vector(text: str, n: int | None = None) -> np.ndarray:
    try:
        vec = np.array([float(p) for p in text.split(",")], dtype=float)
    except ValueError:
        _fail(f"could not parse {text!r} as comma-separated reals")
    if n is not None and vec.shape[0] != n:
        _fail(f"expected {n} components, got {vec.shape[0]} in {text!r}")
    return vec


def _gallery_case(name: str):
    for case in gallery():
        if case.name == name:
            return case
    return None


def _resolve_conditions(spec: str):
    """Gallery case names win over file paths; collisions warn."""
    case = _gallery_case(spec)
    if case is not None:
        if os.path.exists(spec):
            click.echo(
                f"warning: {spec!r} is both a gallery name and a file; "
                "using the gallery case",
                err=True,
            )
        return case.build()
    try:
        return load_conditions(spec)
    except FileNotFoundError:
        names = ", ".join(c.name for c in gallery())
        _fail(f"{spec!r} is neither a gallery case ({names}) nor a readable file")
    except (json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
        _fail(f"could not load conditions from {spec!r}: {exc}")


def _resolve_function(spec: str, table, n: int) -> AlgPolynomial:
    if spec in NAMED_SOLUTIONS:
        if os.path.exists(spec):
            click.echo(
                f"warning: {spec!r} is both a builtin function and a file; "
                "using the builtin",
                err=True,
            )
        return named_solution(spec, table, n)
    try:
        data = json.loads(Path(spec).read_text())
        return AlgPolynomial(table, data["exponents"], data["coeffs"])
    except FileNotFoundError:
        _fail(f"{spec!r} is neither a builtin function "
              f"({', '.join(NAMED_SOLUTIONS)}) nor a readable file")
    except (json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
        _fail(f"could not load polynomial from {spec!r}: {exc}")


@click.group()
@click.version_option(package_name="hypercauchy", prog_name="hypercauchy")
def main() -> None:
    """Decide admissibility of Cauchy-type conditions on finite-dimensional
    real algebras, build the associated kernels, and verify reproduction."""


@main.command()
@click.argument("algebra")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write the report to a file instead of stdout.")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]),
              default="json", show_default=True)
def inspect(algebra: str, out: str | None, fmt: str) -> None:
    """Structural report for a builtin algebra name or a JSON table file."""
    try:
        table = load_algebra(algebra)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        _fail(f"could not load algebra {algebra!r}: {exc}")
    squares = sum_of_basis_squares(table)
    assoc_viol = check_associative(table)
    report = {
        "algebra": algebra,
        "dim": table.dim,
        "unit_ok": bool(validate_unit(table)),
        "associativity_violation": assoc_viol,
        "associative": bool(table.associative),
        "commutative": bool(check_commutative(table)),
        "sum_basis_squares": squares.coeffs.tolist(),
        "sum_basis_squares_zero": bool(squares.is_zero()),
    }
    text = [
        f"algebra: {algebra}",
        f"dim: {table.dim}",
        f"unit_ok: {report['unit_ok']}",
        f"associativity_violation: {assoc_viol:.3e}",
        f"associative: {report['associative']}",
        f"commutative: {report['commutative']}",
        f"sum of squared basis elements: {squares.coeffs.tolist()}"
        f" (zero: {report['sum_basis_squares_zero']})",
    ]
    _emit("inspect", report, {"algebra": algebra}, out, fmt, text)


@main.command(name="cr-solve")
@click.argument("conditions")
@click.option("--tol", type=float, default=1e-9, show_default=True,
              help="Feasibility threshold on the normalized residual.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]),
              default="json", show_default=True)
def cr_solve(conditions: str, tol: float, out: str | None, fmt: str) -> None:
    """Solve the admissibility system for a gallery case or conditions file.

    Exit code 0 when feasible, 2 when infeasible, 1 on errors.
    """
    if tol <= 0:
        _fail("--tol must be positive")
    C = _resolve_conditions(conditions)
    try:
        report = solve_admissibility(C, tol=tol)
    except Exception as exc:
        _fail(f"admissibility solve failed: {exc}")
    payload = report.to_dict()
    text = [
        f"conditions: {conditions} (n={C.n}, q={C.q}, dim={C.table.dim})",
        f"feasible: {report.feasible}",
        f"residual: {report.residual:.6e}",
        f"free_dim: {report.free_dim}",
    ]
    if report.feasible:
        text.append(f"b: {payload['b']}")
        text.append(f"c: {payload['c']}")
    _emit("cr-solve", payload, {"conditions": conditions, "tol": tol},
          out, fmt, text)
    sys.exit(0 if report.feasible else 2)


@main.command()
@click.argument("conditions")
@click.option("--function", "-f", "function_spec", required=True,
              help="Builtin function name or polynomial JSON file.")
@click.option("--point", required=True,
              help="Comma-separated evaluation point inside the ball.")
@click.option("--center", default=None,
              help="Ball center (comma-separated); default origin.")
@click.option("--radius", type=float, default=1.0, show_default=True)
@click.option("--nodes", type=int, default=32, show_default=True,
              help="Per-angle node count (product_gauss) or total (monte_carlo).")
@click.option("--scheme", type=click.Choice(["product_gauss", "monte_carlo"]),
              default="product_gauss", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--tol", type=float, default=None,
              help="Target error; raises an error when the half-resolution "
                   "estimate exceeds it.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]),
              default="json", show_default=True)
def reproduce(conditions: str, function_spec: str, point: str,
              center: str | None, radius: float, nodes: int, scheme: str,
              seed: int, tol: float | None, out: str | None, fmt: str) -> None:
    """Reproduce a solution from its boundary values through the kernel."""
    C = _resolve_conditions(conditions)
    try:
        kernel = CauchyKernel.from_conditions(C)
    except ValueError as exc:
        _fail(str(exc))
    x = _parse_vector(point, C.n)
    c = (np.zeros(C.n) if center is None else _parse_vector(center, C.n))
    try:
        f = _resolve_function(function_spec, C.table, C.n)
        domain = BallDomain(c, radius)
        spec = QuadratureSpec(scheme=scheme, nodes=nodes, seed=seed)
        report = boundary_reproduce(f, x, domain, kernel, spec,
                                    target_error=tol)
    except (PointOutsideDomain, QuadratureUnderResolved, ValueError) as exc:
        _fail(str(exc))
    payload = report.to_dict()
    config = {
        "conditions": conditions,
        "function": function_spec,
        "point": x.tolist(),
        "center": c.tolist(),
        "radius": radius,
        "nodes": nodes,
        "scheme": scheme,
        "seed": seed,
    }
    text = [
        f"reproduce {function_spec} through {conditions} kernel",
        f"computed: {payload['computed']}",
        f"expected: {payload['expected']}",
        f"abs_error: {report.abs_error:.6e}",
        f"rel_error: {report.rel_error:.6e}",
        f"nodes: {report.nodes}",
    ]
    _emit("reproduce", payload, config, out, fmt, text)


@main.command()
@click.argument("name", type=click.Choice(SUITE_NAMES))
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]),
              default="json", show_default=True)
def suite(name: str, seed: int, out: str | None, fmt: str) -> None:
    """Run a batch suite; exit code 2 when any check fails."""
    result = run_suite(name, seed=seed)
    text = list(result.lines)
    text.append(f"suite {name}: {'PASS' if result.passed else 'FAIL'}")
    _emit("suite", result.to_dict(), {"suite": name, "seed": seed},
          out, fmt, text)
    sys.exit(0 if result.passed else 2)


if __name__ == "__main__":
    main()
