"""Cauchy kernel evaluation and the off-diagonal closedness identity.

The kernel attached to a feasible condition set is the n-vector field

    Flux^j(y; x) = sum_m a[m, j] * phi_m(x, y) / ||y - x||^n

with phi_m(x, y) = sum_i b[m, i] (y_i - x_i); contracting it with the
outward normal of a domain boundary and integrating reproduces solutions.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .admissibility import CRConditionSet, KernelSolution, solve_admissibility
from .algebra import AlgElem


class OnDiagonal(Exception):
    """Kernel evaluated at y = x, where it is singular."""


KERNEL_RESIDUAL_CEILING = 1e-6


@dataclass(frozen=True)
class CauchyKernel:
    """A condition set together with kernel weights that solve it."""

    conditions: CRConditionSet
    solution: KernelSolution

    def __post_init__(self):
        if self.solution.n != self.conditions.n or self.solution.q != self.conditions.q:
            raise ValueError("solution shape does not match the condition set")

    @property
    def n(self) -> int:
        return self.conditions.n

    @property
    def table(self):
        return self.conditions.table

    @classmethod
    def from_conditions(cls, conditions: CRConditionSet, tol: float = 1e-9) -> CauchyKernel:
        """Solve the admissibility system and wrap the kernel; error if infeasible."""
        report = solve_admissibility(conditions, tol=tol)
        if not report.feasible:
            raise ValueError(
                f"conditions are not admissible (residual {report.residual:.3e}); "
                "no reproducing kernel exists"
            )
        return cls(conditions, report.kernel)

    @classmethod
    def from_solution(cls, solution: KernelSolution,
                      validate: bool = True) -> CauchyKernel:
        kernel = cls(solution.conditions(), solution)
        if validate:
            viol = solution.condition_violation()
            if viol > KERNEL_RESIDUAL_CEILING:
                raise ValueError(
                    f"kernel weights violate the bilinear constraints by {viol:.3e}"
                )
        return kernel


def _check_off_diagonal(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    diff = y - x
    r = float(np.linalg.norm(diff))
    floor = 1e-15 * (1.0 + float(np.linalg.norm(x)) + float(np.linalg.norm(y)))
    if r <= floor:
        raise OnDiagonal(f"kernel is singular at y = x (separation {r:.3e})")
    return diff


def phi(kernel: CauchyKernel, m: int, x, y) -> AlgElem:
    """The linear form phi_m(x, y) = sum_i b[m, i] (y_i - x_i); zero at y = x."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    coeffs = np.einsum("i,id->d", y - x, kernel.solution.b[m])
    return AlgElem(kernel.table, coeffs)


def kernel_field(kernel: CauchyKernel, x, y) -> list[AlgElem]:
    """The n flux components Flux^j(y; x); raises OnDiagonal at y = x."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    diff = _check_off_diagonal(x, y)
    rn = float(np.linalg.norm(diff)) ** kernel.n
    table = kernel.table
    a = kernel.conditions.a
    b = kernel.solution.b
    phis = np.einsum("i,mid->md", diff, b)
    out = []
    for j in range(kernel.n):
        acc = np.zeros(table.dim)
        for m in range(kernel.conditions.q):
            acc += table.mul_coeffs(a[m, j], phis[m])
        out.append(AlgElem(table, acc / rn))
    return out


def kernel_field_batch(kernel: CauchyKernel, x, Y) -> np.ndarray:
    """Flux components at many points: returns (N, n, dim)."""
    x = np.asarray(x, dtype=float)
    Y = np.asarray(Y, dtype=float)
    diff = Y - x[None, :]
    r2 = np.sum(diff * diff, axis=1)
    if np.any(r2 == 0.0):
        raise OnDiagonal("a batch point coincides with the pole x")
    table = kernel.table
    phis = np.einsum("ti,mid->tmd", diff, kernel.solution.b)
    flux = np.einsum("mjs,tmd,sde->tje", kernel.conditions.a, phis, table.gamma)
    return flux / r2[:, None, None] ** (kernel.n / 2.0)


def closedness_residual(kernel: CauchyKernel, x, y,
                        finite_difference: bool = False,
                        h: float = 1e-5) -> float:
    """Residual of the closedness identity at (x, y), normalized to O(1).

    The identity states

        ||y-x||^2 sum_{m,j} a[m,j] * b[m,j]
            = n sum_m P_m(y-x) * phi_m(x,y)

    with P_m(X) = sum_j X_j a[m,j]; it holds exactly iff the weights solve
    the bilinear constraints.  finite_difference=True replaces the stored
    b[m,j] by central differences of phi_m in x (debugging mode, step h).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    diff = _check_off_diagonal(x, y)
    table = kernel.table
    n, q, dim = kernel.n, kernel.conditions.q, table.dim
    a = kernel.conditions.a
    r2 = float(diff @ diff)

    if finite_difference:
        b_eff = np.zeros((q, n, dim))
        for j in range(n):
            step = np.zeros(n)
            step[j] = h
            plus = np.einsum("i,mid->md", y - (x + step), kernel.solution.b)
            minus = np.einsum("i,mid->md", y - (x - step), kernel.solution.b)
            b_eff[:, j, :] = -(plus - minus) / (2.0 * h)
    else:
        b_eff = kernel.solution.b

    lhs = np.zeros(dim)
    for m in range(q):
        for j in range(n):
            lhs += table.mul_coeffs(a[m, j], b_eff[m, j])
    lhs *= r2

    phis = np.einsum("i,mid->md", diff, kernel.solution.b)
    symbols = np.einsum("j,mjd->md", diff, a)
    rhs = np.zeros(dim)
    for m in range(q):
        rhs += table.mul_coeffs(symbols[m], phis[m])
    rhs *= n

    scale = n * kernel.conditions.normalization * r2
    return float(np.max(np.abs(lhs - rhs))) / scale
