"""Pointwise admissibility for variable-coefficient Cauchy conditions.

At leading order the variable-coefficient problem reduces to the constant
bilinear system at each point x with coefficients a[m, j](x), so feasibility
is decided pointwise.  Affine coefficient families a(x) = a0 + d . x carry
structural constraints on d that validate_affine checks exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .admissibility import (
    DEFAULT_TOL,
    AdmissibilityReport,
    CRConditionSet,
    solve_admissibility,
)
from .algebra import AlgebraTable


class NoAffineData(Exception):
    """The condition set was built from a bare callable; no affine tensor."""


@dataclass(frozen=True)
class AffineValidation:
    valid: bool
    violations: list[str]


@dataclass(frozen=True)
class VarCRConditionSet:
    """Cauchy conditions whose coefficients vary with the base point.

    a_fn(x) returns the (q, n, dim) coefficient array at x.  When the family
    is affine, base (q, n, dim) and slope (q, n, n, dim) store
    a[m, j](x) = base[m, j] + sum_i slope[m, j, i] * x_i.
    """

    table: AlgebraTable
    n: int
    q: int
    a_fn: Callable[[np.ndarray], np.ndarray]
    base: np.ndarray | None = None
    slope: np.ndarray | None = None

    def __post_init__(self):
        if self.n < 1 or self.q < 1:
            raise ValueError("need n >= 1 and q >= 1")
        for name, shape in (("base", (self.q, self.n, self.table.dim)),
                            ("slope", (self.q, self.n, self.n, self.table.dim))):
            arr = getattr(self, name)
            if arr is None:
                continue
            arr = np.asarray(arr, dtype=float)
            if arr.shape != shape:
                raise ValueError(f"{name} must have shape {shape}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_affine(cls, table: AlgebraTable, n: int, q: int,
                    base, slope) -> VarCRConditionSet:
        base = np.asarray(base, dtype=float)
        slope = np.asarray(slope, dtype=float)

        def a_fn(x: np.ndarray) -> np.ndarray:
            x = np.asarray(x, dtype=float)
            return base + np.einsum("mjid,i->mjd", slope, x)

        return cls(table, n, q, a_fn, base=base, slope=slope)

    def at(self, x) -> CRConditionSet:
        """The constant-coefficient condition set frozen at x."""
        a = np.asarray(self.a_fn(np.asarray(x, dtype=float)), dtype=float)
        if a.shape != (self.q, self.n, self.table.dim):
            raise ValueError(
                f"a_fn must return shape {(self.q, self.n, self.table.dim)}, "
                f"got {a.shape}"
            )
        return CRConditionSet(self.table, self.n, self.q, a)


def pointwise_admissibility(
    varset: VarCRConditionSet,
    points: Sequence[np.ndarray],
    tol: float = DEFAULT_TOL,
) -> list[AdmissibilityReport]:
    """Solve the constant bilinear system at each point; one report per point."""
    return [solve_admissibility(varset.at(x), tol=tol) for x in points]


def validate_affine(varset: VarCRConditionSet) -> AffineValidation:
    """Check the structural constraints of an affine coefficient family.

    Off-diagonal slopes must cancel in symmetric pairs,
    slope[m, j, i] + slope[m, i, j] = 0 for i != j, and the diagonal slope
    slope[m, j, j] must not depend on j.
    """
    if varset.base is None or varset.slope is None:
        raise NoAffineData("condition set carries no affine tensor")
    d = varset.slope
    violations: list[str] = []
    for m in range(varset.q):
        for j in range(varset.n):
            for i in range(j + 1, varset.n):
                gap = float(np.max(np.abs(d[m, j, i] + d[m, i, j])))
                if gap > 0.0:
                    violations.append(
                        f"slope[{m},{j},{i}] + slope[{m},{i},{j}] != 0 "
                        f"(max abs {gap:.3e})"
                    )
        for j in range(1, varset.n):
            gap = float(np.max(np.abs(d[m, j, j] - d[m, 0, 0])))
            if gap > 0.0:
                violations.append(
                    f"slope[{m},{j},{j}] differs from slope[{m},0,0] "
                    f"(max abs {gap:.3e})"
                )
    return AffineValidation(valid=not violations, violations=violations)
