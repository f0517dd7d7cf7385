"""Polynomial solutions of the Cauchy-type conditions.

A condition set picks out the functions f with sum_j (df/dx_j) * a[m, j] = 0
for every m.  This module represents algebra-valued polynomials, applies the
condition operator (exactly on polynomials, by central differences on
callables), and computes an orthonormal basis of polynomial solutions up to a
requested degree as the nullspace of the exact coefficient map.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as _iterproduct
from typing import Callable, Sequence

import numpy as np

from .admissibility import CRConditionSet
from .algebra import AlgebraTable, AlgElem

NULLSPACE_REL_SV = 1e-10
DEFAULT_FD_STEP = 1e-5


def monomial_exponents(n: int, degree: int) -> list[tuple[int, ...]]:
    """All exponent tuples with total degree <= degree, graded lex order."""
    out: list[tuple[int, ...]] = []
    for total in range(degree + 1):
        level = [e for e in _iterproduct(range(total + 1), repeat=n)
                 if sum(e) == total]
        level.sort()
        out.extend(level)
    return out


@dataclass(frozen=True)
class AlgPolynomial:
    """Algebra-valued polynomial sum_k coeffs[k] * x^exponents[k].

    exponents: (M, n) non-negative integers, one row per monomial;
    coeffs: (M, dim) algebra coefficients.  Rows with duplicate exponents
    are merged on construction.
    """

    table: AlgebraTable
    exponents: np.ndarray = field(repr=False)
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        exps = np.atleast_2d(np.asarray(self.exponents, dtype=int))
        cfs = np.atleast_2d(np.asarray(self.coeffs, dtype=float))
        if exps.shape[0] != cfs.shape[0]:
            raise ValueError("one coefficient row per monomial required")
        if cfs.shape[1] != self.table.dim:
            raise ValueError("coefficient width must equal the algebra dimension")
        if np.any(exps < 0):
            raise ValueError("exponents must be non-negative")
        # merge duplicate monomials so the representation is canonical
        order: dict[tuple[int, ...], int] = {}
        merged: list[np.ndarray] = []
        kept: list[tuple[int, ...]] = []
        for row, cf in zip(map(tuple, exps), cfs):
            if row in order:
                merged[order[row]] = merged[order[row]] + cf
            else:
                order[row] = len(merged)
                merged.append(cf.copy())
                kept.append(row)
        exps = np.array(kept, dtype=int).reshape(len(kept), exps.shape[1])
        cfs = np.array(merged, dtype=float)
        exps.setflags(write=False)
        cfs.setflags(write=False)
        object.__setattr__(self, "exponents", exps)
        object.__setattr__(self, "coeffs", cfs)

    @classmethod
    def constant(cls, table: AlgebraTable, n: int, value) -> AlgPolynomial:
        value = value.coeffs if isinstance(value, AlgElem) else np.asarray(value, float)
        return cls(table, np.zeros((1, n), dtype=int), value.reshape(1, -1))

    @classmethod
    def coordinate(cls, table: AlgebraTable, n: int, j: int) -> AlgPolynomial:
        """The scalar coordinate function x_j * e_0."""
        exps = np.zeros((1, n), dtype=int)
        exps[0, j] = 1
        cf = np.zeros((1, table.dim))
        cf[0, 0] = 1.0
        return cls(table, exps, cf)

    @property
    def n(self) -> int:
        return self.exponents.shape[1]

    @property
    def degree(self) -> int:
        mask = np.any(self.coeffs != 0.0, axis=1)
        if not mask.any():
            return 0
        return int(self.exponents[mask].sum(axis=1).max())

    def evaluate(self, x) -> AlgElem:
        return AlgElem(self.table, self.eval_batch(np.atleast_2d(x))[0])

    def eval_batch(self, X) -> np.ndarray:
        """Values at many points: X (N, n) -> (N, dim)."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        mono = np.prod(X[:, None, :] ** self.exponents[None, :, :], axis=2)
        return mono @ self.coeffs

    def partial_derivative(self, j: int) -> AlgPolynomial:
        mask = self.exponents[:, j] > 0
        if not mask.any():
            return AlgPolynomial.constant(self.table, self.n,
                                          np.zeros(self.table.dim))
        exps = self.exponents[mask].copy()
        cfs = self.coeffs[mask] * exps[:, j : j + 1]
        exps[:, j] -= 1
        return AlgPolynomial(self.table, exps, cfs)

    def __add__(self, other: AlgPolynomial) -> AlgPolynomial:
        self._check_compatible(other)
        return AlgPolynomial(
            self.table,
            np.vstack([self.exponents, other.exponents]),
            np.vstack([self.coeffs, other.coeffs]),
        )

    def __sub__(self, other: AlgPolynomial) -> AlgPolynomial:
        return self + (-1.0) * other

    def __rmul__(self, scalar: float) -> AlgPolynomial:
        return AlgPolynomial(self.table, self.exponents, float(scalar) * self.coeffs)

    def __mul__(self, other: AlgPolynomial) -> AlgPolynomial:
        """Pointwise algebra product; coefficient order self * other."""
        self._check_compatible(other)
        exps = (self.exponents[:, None, :] + other.exponents[None, :, :]).reshape(
            -1, self.n
        )
        cfs = np.einsum(
            "as,bd,sde->abe", self.coeffs, other.coeffs, self.table.gamma
        ).reshape(-1, self.table.dim)
        return AlgPolynomial(self.table, exps, cfs)

    def _check_compatible(self, other: AlgPolynomial) -> None:
        if other.table != self.table or other.n != self.n:
            raise ValueError("polynomials live over different algebras or variables")

    def coefficient_vector(self, layout: Sequence[tuple[int, ...]]) -> np.ndarray:
        """Flattened coefficients in the given monomial layout."""
        index = {e: k for k, e in enumerate(layout)}
        out = np.zeros((len(layout), self.table.dim))
        for row, cf in zip(map(tuple, self.exponents), self.coeffs):
            if np.any(cf != 0.0) and row not in index:
                raise ValueError(f"monomial {row} not representable in layout")
            if row in index:
                out[index[row]] = cf
        return out.ravel()


def apply_cr_operator(
    conditions: CRConditionSet,
    f: AlgPolynomial | Callable[[np.ndarray], np.ndarray],
    x,
    h: float = DEFAULT_FD_STEP,
) -> list[AlgElem]:
    """The q condition values sum_j (df/dx_j) * a[m, j] at x.

    Exact derivatives for AlgPolynomial; central differences of step h
    (order h^2) for callables returning coefficient vectors.
    """
    x = np.asarray(x, dtype=float)
    table, n, q = conditions.table, conditions.n, conditions.q
    derivs = np.zeros((n, table.dim))
    if isinstance(f, AlgPolynomial):
        for j in range(n):
            derivs[j] = f.partial_derivative(j).evaluate(x).coeffs
    else:
        for j in range(n):
            step = np.zeros(n)
            step[j] = h
            fp = np.asarray(f(x + step), dtype=float)
            fm = np.asarray(f(x - step), dtype=float)
            derivs[j] = (fp - fm) / (2.0 * h)
    out = []
    for m in range(q):
        acc = np.zeros(table.dim)
        for j in range(n):
            acc += table.mul_coeffs(derivs[j], conditions.a[m, j])
        out.append(AlgElem(table, acc))
    return out


@dataclass(frozen=True)
class PolySolutionBasis:
    """Orthonormal basis of polynomial solutions up to the stated degree."""

    conditions: CRConditionSet
    degree: int
    basis: list[AlgPolynomial]

    def __len__(self) -> int:
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def __getitem__(self, k: int) -> AlgPolynomial:
        return self.basis[k]

    def max_violation(self, samples: int = 50, seed: int = 0) -> float:
        """Largest |condition value| over basis elements at random points."""
        rng = np.random.default_rng(seed)
        pts = rng.normal(size=(samples, self.conditions.n))
        worst = 0.0
        for f in self.basis:
            for x in pts:
                for t in apply_cr_operator(self.conditions, f, x):
                    worst = max(worst, t.norm())
        return worst

    def contains(self, f: AlgPolynomial, tol: float = 1e-10) -> bool:
        """Whether f lies in the span of the basis (coefficient projection)."""
        layout = monomial_exponents(self.conditions.n, self.degree)
        v = f.coefficient_vector(layout)
        scale = np.linalg.norm(v)
        if scale == 0.0:
            return True
        B = np.stack([g.coefficient_vector(layout) for g in self.basis])
        resid = v - B.T @ (B @ v)
        return float(np.linalg.norm(resid)) <= tol * scale


def _z_polynomial(table: AlgebraTable, power: int) -> AlgPolynomial:
    z = AlgPolynomial.coordinate(table, 2, 0)
    e1 = np.zeros(table.dim)
    e1[1] = 1.0
    z = z + AlgPolynomial.coordinate(table, 2, 1) * AlgPolynomial.constant(
        table, 2, e1
    )
    out = AlgPolynomial.constant(table, 2, np.eye(table.dim)[0])
    for _ in range(power):
        out = out * z
    return out


def _zeta_polynomial(table: AlgebraTable, n: int, l: int) -> AlgPolynomial:
    e = np.eye(table.dim)
    return AlgPolynomial.coordinate(table, n, l) * AlgPolynomial.constant(
        table, n, e[0]
    ) - AlgPolynomial.coordinate(table, n, 0) * AlgPolynomial.constant(table, n, e[l])


NAMED_SOLUTIONS = ("const", "z", "z2", "z3", "z3_plus_2z",
                   "zeta1", "zeta2", "zeta3", "y1sq")


def named_solution(name: str, table: AlgebraTable, n: int) -> AlgPolynomial:
    """Builtin test functions addressable by name from the CLI.

    z-powers need n = 2; zeta_l needs l < min(n, dim).  y1sq is the scalar
    square of the first coordinate (not a solution; representation tests).
    """
    if name == "const":
        return AlgPolynomial.constant(table, n, np.eye(table.dim)[0])
    if name in ("z", "z2", "z3", "z3_plus_2z"):
        if n != 2:
            raise ValueError(f"{name} requires two variables, got n={n}")
        if name == "z":
            return _z_polynomial(table, 1)
        if name == "z2":
            return _z_polynomial(table, 2)
        if name == "z3":
            return _z_polynomial(table, 3)
        return _z_polynomial(table, 3) + 2.0 * _z_polynomial(table, 1)
    if name in ("zeta1", "zeta2", "zeta3"):
        l = int(name[-1])
        if l >= min(n, table.dim):
            raise ValueError(f"{name} needs at least {l + 1} variables and "
                             f"basis elements")
        return _zeta_polynomial(table, n, l)
    if name == "y1sq":
        c = AlgPolynomial.coordinate(table, n, 0)
        return c * c
    raise ValueError(f"unknown solution name {name!r}; "
                     f"builtins: {', '.join(NAMED_SOLUTIONS)}")


def polynomial_solution_basis(
    conditions: CRConditionSet, degree: int
) -> PolySolutionBasis:
    """Nullspace of the exact map (polynomial coeffs) -> (condition coeffs).

    The unknown is the stacked coefficient tensor over all monomials of total
    degree <= degree (graded lex).  Differentiating x^alpha in x_j sends the
    coefficient c to alpha_j * c * a[m, j] on the monomial alpha - e_j, so the
    map is assembled from right-multiplication matrices.  Basis rows come from
    the trailing singular vectors (sigma <= 1e-10 * sigma_max), orthonormal.
    """
    if degree < 0:
        raise ValueError("degree must be non-negative")
    if degree > 6:
        raise ValueError("degree > 6 not supported (coefficient map gets large)")
    table, n, q = conditions.table, conditions.n, conditions.q
    dim = table.dim
    layout = monomial_exponents(n, degree)
    M = len(layout)
    col_of = {e: k for k, e in enumerate(layout)}
    if degree == 0:
        targets: list[tuple[int, ...]] = []
    else:
        targets = monomial_exponents(n, degree - 1)
    row_of = {e: k for k, e in enumerate(targets)}

    rows = q * len(targets) * dim
    A = np.zeros((rows, M * dim))
    rmuls = [
        [table.right_mult_matrix(conditions.a[m, j]) for j in range(n)]
        for m in range(q)
    ]
    for k, alpha in enumerate(layout):
        for j in range(n):
            if alpha[j] == 0:
                continue
            beta = list(alpha)
            beta[j] -= 1
            beta_row = row_of[tuple(beta)]
            for m in range(q):
                r0 = (m * len(targets) + beta_row) * dim
                A[r0 : r0 + dim, k * dim : (k + 1) * dim] += alpha[j] * rmuls[m][j]

    if rows == 0:
        null = np.eye(M * dim)
    else:
        _, s, vh = np.linalg.svd(A, full_matrices=True)
        rank = int(np.sum(s > NULLSPACE_REL_SV * s[0])) if s.size else 0
        null = vh[rank:]
    basis = []
    exps = np.array(layout, dtype=int)
    for vec in null:
        basis.append(AlgPolynomial(table, exps, vec.reshape(M, dim)))
    return PolySolutionBasis(conditions, degree, basis)
