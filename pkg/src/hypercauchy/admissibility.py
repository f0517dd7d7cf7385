"""Cauchy-type condition sets and the existence problem for reproducing kernels.

A condition set over an algebra imposes, on functions f of n real variables
with algebra values, the q first-order relations

    sum_j (df/dx_j) * a[m, j] = 0            (m = 0..q-1)

with the coefficient multiplying the derivative on the right.  A reproducing
kernel exists iff the bilinear constraints on kernel weights b[m, i],

    sum_m a[m, i] * b[m, i] = kappa e_0                     (each i)
    sum_m (a[m, j] * b[m, i] + a[m, i] * b[m, j]) = 0       (i != j)

with kappa = 1/(n * Vol(B_n)), admit a solution; they are linear in b, so
feasibility is decided by one least-squares solve.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .algebra import (
    AlgebraTable,
    AlgElem,
    Singular,
    algebra_to_dict,
    ball_volume,
    load_algebra,
    try_invert,
)

DEFAULT_TOL = 1e-9
ILL_CONDITIONED_CEILING = 1e-6
RANK_REL_SV = 1e-10


class AdmissibilityError(Exception):
    """Base class for condition-set failures."""


class IllConditioned(AdmissibilityError):
    """Least-squares residual falls in the ambiguous band between tolerances."""

    def __init__(self, residual: float, tol: float, ceiling: float):
        self.residual = residual
        self.tol = tol
        self.ceiling = ceiling
        super().__init__(
            f"residual {residual:.3e} sits between the feasibility tolerance "
            f"{tol:.1e} and the rejection ceiling {ceiling:.1e} "
            f"(gap factors: {residual / tol:.2e} above tol, "
            f"{ceiling / residual:.2e} below ceiling); "
            "the rank decision is ambiguous at this precision"
        )


class NotCommutative(AdmissibilityError):
    """Determinant criterion requires a commutative associative algebra."""


class SingularPrincipalMinor(AdmissibilityError):
    """No invertible q-by-q minor of the coefficient matrix is available."""


class BasisNotAnticommuting(AdmissibilityError):
    """Basis fails e_i^2 = -e_0 or e_i e_j = -e_j e_i."""


@dataclass(frozen=True)
class CRConditionSet:
    """q first-order conditions on functions of n variables over one algebra.

    ``a[m, j]`` holds the coefficient (length-dim vector) multiplying
    df/dx_j in condition m.
    """

    table: AlgebraTable
    n: int
    q: int
    a: np.ndarray = field(repr=False)
    name: str = ""
    algebra_source: str = ""

    def __post_init__(self):
        arr = np.asarray(self.a, dtype=float)
        if arr.shape != (self.q, self.n, self.table.dim):
            raise ValueError(
                f"coefficients must have shape (q={self.q}, n={self.n}, "
                f"dim={self.table.dim}), got {arr.shape}"
            )
        if self.n < 1 or self.q < 1:
            raise ValueError("need n >= 1 and q >= 1")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "a", arr)

    def coefficient(self, m: int, j: int) -> AlgElem:
        return AlgElem(self.table, self.a[m, j].copy())

    @property
    def normalization(self) -> float:
        """kappa = 1/(n * Vol(B_n))."""
        return 1.0 / (self.n * ball_volume(self.n))

    def unknown_count(self) -> int:
        return self.q * self.n * self.table.dim

    def equation_count(self) -> int:
        return self.n * (self.n + 1) // 2 * self.table.dim


@dataclass(frozen=True)
class KernelSolution:
    """Kernel weights b[m, i] plus the antisymmetric coupling c[j, i].

    c[j, i] = Vol(B_n) * sum_m a[m, j] * b[m, i]; its diagonal equals e_0/n
    and off-diagonal entries are antisymmetric when the weights solve the
    bilinear constraints.
    """

    table: AlgebraTable
    n: int
    q: int
    a: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)
    c: np.ndarray = field(repr=False)
    normalization: float
    residual: float
    nullity: int

    @classmethod
    def from_b(
        cls,
        conditions: CRConditionSet,
        b: np.ndarray,
        residual: float = 0.0,
        nullity: int = 0,
    ) -> KernelSolution:
        table = conditions.table
        n, q, dim = conditions.n, conditions.q, table.dim
        b = np.asarray(b, dtype=float).reshape(q, n, dim)
        vol = ball_volume(n)
        c = np.zeros((n, n, dim))
        for j in range(n):
            for i in range(n):
                acc = np.zeros(dim)
                for m in range(q):
                    acc += table.mul_coeffs(conditions.a[m, j], b[m, i])
                c[j, i] = vol * acc
        return cls(
            table=table, n=n, q=q, a=conditions.a, b=b, c=c,
            normalization=conditions.normalization,
            residual=residual, nullity=nullity,
        )

    def b_elem(self, m: int, i: int) -> AlgElem:
        return AlgElem(self.table, self.b[m, i].copy())

    def c_elem(self, j: int, i: int) -> AlgElem:
        return AlgElem(self.table, self.c[j, i].copy())

    def conditions(self) -> CRConditionSet:
        return CRConditionSet(self.table, self.n, self.q, self.a)

    def condition_violation(self) -> float:
        """Max bilinear-constraint residual of these weights."""
        table, n, q = self.table, self.n, self.q
        kappa = self.normalization
        e0 = np.zeros(table.dim)
        e0[0] = kappa
        worst = 0.0
        for i in range(n):
            for j in range(i, n):
                acc = np.zeros(table.dim)
                for m in range(q):
                    acc += table.mul_coeffs(self.a[m, j], self.b[m, i])
                    if i != j:
                        acc += table.mul_coeffs(self.a[m, i], self.b[m, j])
                target = e0 if i == j else 0.0
                worst = max(worst, float(np.max(np.abs(acc - target))))
        return worst


@dataclass(frozen=True)
class AdmissibilityReport:
    feasible: bool
    residual: float
    free_dim: int
    kernel: KernelSolution | None

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "residual": self.residual,
            "free_dim": self.free_dim,
            "b": None if self.kernel is None else self.kernel.b.tolist(),
            "c": None if self.kernel is None else self.kernel.c.tolist(),
        }


def assemble_system(conditions: CRConditionSet) -> tuple[np.ndarray, np.ndarray]:
    """Real linear system A x = r for the flattened kernel weights.

    Unknown layout: x[(m*n + i)*dim + s] is component s of b[m, i].
    Rows come in blocks of dim, one block per unordered variable pair
    (i, j) with i <= j in lexicographic order.
    """
    table = conditions.table
    n, q, dim = conditions.n, conditions.q, table.dim
    kappa = conditions.normalization
    rows = conditions.equation_count()
    cols = conditions.unknown_count()
    A = np.zeros((rows, cols))
    r = np.zeros(rows)

    def col_slice(m: int, i: int) -> slice:
        start = (m * n + i) * dim
        return slice(start, start + dim)

    block = 0
    for i in range(n):
        for j in range(i, n):
            rs = slice(block * dim, (block + 1) * dim)
            for m in range(q):
                A[rs, col_slice(m, i)] += table.left_mult_matrix(conditions.a[m, j])
                if i != j:
                    A[rs, col_slice(m, j)] += table.left_mult_matrix(conditions.a[m, i])
            if i == j:
                r[block * dim] = kappa
            block += 1
    return A, r


def solve_admissibility(
    conditions: CRConditionSet,
    tol: float = DEFAULT_TOL,
    ill_ceiling: float = ILL_CONDITIONED_CEILING,
) -> AdmissibilityReport:
    """Decide kernel existence by min-norm least squares on the assembled system.

    Feasible iff the relative residual of the row-normalized system is <= tol.
    Residuals between tol and ill_ceiling raise IllConditioned rather than
    returning a verdict.
    """
    A, r = assemble_system(conditions)
    row_norms = np.linalg.norm(A, axis=1)
    scale = np.where(row_norms > 1e-12, row_norms, 1.0)
    An = A / scale[:, None]
    rn = r / scale
    rhs_norm = float(np.linalg.norm(rn))
    if rhs_norm == 0.0:
        raise AdmissibilityError("normalized right-hand side vanished; conditions degenerate")

    x, _, _, sv = np.linalg.lstsq(An, rn, rcond=None)
    rank = int(np.sum(sv > RANK_REL_SV * sv[0])) if sv.size else 0
    free_dim = conditions.unknown_count() - rank
    residual = float(np.linalg.norm(An @ x - rn) / rhs_norm)

    if tol < residual < ill_ceiling:
        raise IllConditioned(residual, tol, ill_ceiling)

    feasible = residual <= tol
    kernel = None
    if feasible:
        b = x.reshape(conditions.q, conditions.n, conditions.table.dim)
        kernel = KernelSolution.from_b(conditions, b, residual=residual, nullity=free_dim)
    return AdmissibilityReport(feasible=feasible, residual=residual,
                               free_dim=free_dim, kernel=kernel)


# -- condition-set constructors ----------------------------------------------


def a_differentiable_conditions(table: AlgebraTable) -> CRConditionSet:
    """Conditions df/dx_m = (df/dx_0) * e_m for m = 1..dim-1 (n = dim, q = dim-1)."""
    dim = table.dim
    if dim < 2:
        raise ValueError("need dim >= 2 for differentiability conditions")
    a = np.zeros((dim - 1, dim, dim))
    for m in range(1, dim):
        a[m - 1, 0, m] = -1.0
        a[m - 1, m, 0] = 1.0
    return CRConditionSet(table, n=dim, q=dim - 1, a=a,
                          name="a_differentiable")


def anticommuting_single_condition(table: AlgebraTable) -> CRConditionSet:
    """The single condition sum_j (df/dx_j) * e_j = 0 (q = 1, n = dim).

    Demands e_i^2 = -e_0 and e_i e_j = -e_j e_i on non-unit basis vectors;
    associativity is not required.
    """
    dim = table.dim
    g = table.gamma
    e0 = np.eye(dim)[0]
    for i in range(1, dim):
        if np.max(np.abs(g[i, i] + e0)) > 1e-12:
            raise BasisNotAnticommuting(f"e_{i}^2 != -e_0 (got {g[i, i]})")
        for j in range(i + 1, dim):
            if np.max(np.abs(g[i, j] + g[j, i])) > 1e-12:
                raise BasisNotAnticommuting(f"e_{i} e_{j} != -e_{j} e_{i}")
    a = np.zeros((1, dim, dim))
    for j in range(dim):
        a[0, j, j] = 1.0
    return CRConditionSet(table, n=dim, q=1, a=a, name="anticommuting_single")


def induced_conditions(conditions: CRConditionSet, copies: int) -> CRConditionSet:
    """Repeat the conditions on `copies` independent variable blocks.

    Block l applies the original coefficients to variables
    [l*n, l*n + n); the kernel normalization rescales to the total
    dimension n*copies automatically.
    """
    if copies < 1:
        raise ValueError("copies must be >= 1")
    n, q, dim = conditions.n, conditions.q, conditions.table.dim
    a = np.zeros((q * copies, n * copies, dim))
    for l in range(copies):
        a[l * q:(l + 1) * q, l * n:(l + 1) * n] = conditions.a
    label = conditions.name or "conditions"
    return CRConditionSet(conditions.table, n=n * copies, q=q * copies, a=a,
                          name=f"induced({label}, copies={copies})")


# -- ellipticity ---------------------------------------------------------------


@dataclass(frozen=True)
class EllipticityReport:
    elliptic: bool
    worst_coeff: float
    min_symbol_sq: float


def check_ellipticity(
    conditions: CRConditionSet,
    kernel: KernelSolution,
    samples: int = 128,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
) -> EllipticityReport:
    """Verify sum_m P_m(X) Q_m(X) = kappa ||X||^2 e_0 coefficientwise.

    P_m(X) = sum_j X_j a[m, j] and Q_m(X) = sum_i X_i b[m, i]; the identity
    is the quadratic-form restatement of the bilinear constraints.  Also
    reports the minimum of sum_m |P_m(X)|^2 over sampled unit vectors X,
    which must stay positive for elliptic conditions.
    """
    table = conditions.table
    n, q, dim = conditions.n, conditions.q, table.dim
    kappa = conditions.normalization
    target = np.zeros(dim)
    target[0] = kappa
    worst = 0.0
    for i in range(n):
        for j in range(i, n):
            acc = np.zeros(dim)
            for m in range(q):
                acc += table.mul_coeffs(conditions.a[m, j], kernel.b[m, i])
                if i != j:
                    acc += table.mul_coeffs(conditions.a[m, i], kernel.b[m, j])
            diff = acc - target if i == j else acc
            worst = max(worst, float(np.max(np.abs(diff))))

    rng = np.random.default_rng(seed)
    X = rng.standard_normal((samples, n))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    # P_m(X) components: sum_j X_j a[m, j, s]
    symbols = np.einsum("kj,mjs->kms", X, conditions.a)
    sym_sq = np.sum(symbols**2, axis=(1, 2))
    min_symbol = float(np.min(sym_sq))
    return EllipticityReport(
        elliptic=(worst <= tol and min_symbol > 1e-10),
        worst_coeff=worst,
        min_symbol_sq=min_symbol,
    )


# -- commutative determinant criterion ----------------------------------------


def algebra_determinant(table: AlgebraTable, M: np.ndarray) -> np.ndarray:
    """Determinant of a square matrix with algebra entries, by Laplace expansion.

    Well-defined for commutative associative algebras.  M has shape
    (k, k, dim); the result is a coefficient vector.
    """
    k = M.shape[0]
    if k == 1:
        return M[0, 0].copy()
    total = np.zeros(table.dim)
    for j in range(k):
        entry = M[0, j]
        if not np.any(entry):
            continue
        minor = np.delete(M[1:], j, axis=1)
        sub = algebra_determinant(table, minor)
        term = table.mul_coeffs(entry, sub)
        total += term if j % 2 == 0 else -term
    return total


@dataclass(frozen=True)
class CommutativeAReport:
    feasible: bool
    residual: float
    principal_rows: tuple[int, ...]
    kernel: KernelSolution | None
    c_consistency: float | None


def _coefficient_rows(conditions: CRConditionSet) -> np.ndarray:
    # rows indexed by variable, columns by condition: R[i, m] = a[m, i]
    return np.transpose(conditions.a, (1, 0, 2))


def _select_principal(table: AlgebraTable, R: np.ndarray, q: int,
                      principal_rows) -> tuple[tuple[int, ...], np.ndarray, AlgElem]:
    n = R.shape[0]
    if principal_rows is not None:
        rows = tuple(int(i) for i in principal_rows)
        if len(rows) != q or len(set(rows)) != q or not all(0 <= i < n for i in rows):
            raise ValueError(f"principal_rows must be {q} distinct indices in [0, {n})")
        P = R[list(rows)]
        det = algebra_determinant(table, P)
        try:
            inv = try_invert(AlgElem(table, det))
        except Singular as exc:
            raise SingularPrincipalMinor(
                f"principal minor at rows {rows} is singular") from exc
        return rows, P, inv
    for combo in itertools.combinations(range(n), q):
        P = R[list(combo)]
        det = algebra_determinant(table, P)
        try:
            inv = try_invert(AlgElem(table, det))
        except Singular:
            continue
        return combo, P, inv
    raise SingularPrincipalMinor("no invertible principal minor exists")


def commutative_condition_A(
    conditions: CRConditionSet,
    principal_rows=None,
    tol: float = DEFAULT_TOL,
) -> CommutativeAReport:
    """Decide admissibility for commutative associative algebras by determinants.

    With principal variable rows r_0..r_{q-1} of the coefficient matrix and
    D_0 their determinant, feasibility requires

        sum_p D[l][p] * D[k][p] + delta_{lk} D_0^2 = 0

    for every pair of non-principal rows, where D[k][p] is the determinant of
    the principal block with row p dropped and non-principal row k appended.
    On success the coupling c and kernel weights b are reconstructed by
    Cramer's rule and cross-checked against the bilinear constraints.
    """
    table = conditions.table
    if not (table.commutative and table.associative):
        raise NotCommutative(
            "determinant criterion needs a commutative associative table "
            f"(commutative={table.commutative}, associative={table.associative})"
        )
    n, q, dim = conditions.n, conditions.q, table.dim
    if q >= n:
        raise ValueError("criterion applies when q < n (some rows non-principal)")
    R = _coefficient_rows(conditions)
    rows, P, D0_inv = _select_principal(table, R, q, principal_rows)
    D0 = algebra_determinant(table, P)
    nonprincipal = [i for i in range(n) if i not in rows]
    nq = len(nonprincipal)

    # D[k][p]: drop principal row p, append non-principal row k at the bottom
    D = np.zeros((nq, q, dim))
    for k, v in enumerate(nonprincipal):
        for p in range(q):
            M = np.concatenate([np.delete(P, p, axis=0), R[v][None]], axis=0)
            D[k, p] = algebra_determinant(table, M)

    D0_sq = table.mul_coeffs(D0, D0)
    worst = 0.0
    for k in range(nq):
        for l in range(k, nq):
            acc = np.zeros(dim)
            for p in range(q):
                acc += table.mul_coeffs(D[l, p], D[k, p])
            if k == l:
                acc += D0_sq
            worst = max(worst, float(np.linalg.norm(acc)))
    norm_scale = max(1.0, float(np.linalg.norm(D0)) ** 2,
                     float(np.max(np.sum(D**2, axis=2))) if D.size else 1.0)
    residual = worst / norm_scale
    feasible = residual <= tol
    if not feasible:
        return CommutativeAReport(False, residual, rows, None, None)

    # coupling matrix: principal block is (e_0/n) * identity
    e0_over_n = np.zeros(dim)
    e0_over_n[0] = 1.0 / n
    c = np.zeros((n, n, dim))
    for rp in rows:
        c[rp, rp] = e0_over_n

    def derived_row(k: int, target: int) -> np.ndarray:
        acc = np.zeros(dim)
        for p in range(q):
            sign = -1.0 if (q + p + 1) % 2 else 1.0
            acc += sign * table.mul_coeffs(D[k, p], c[rows[p], target])
        return table.mul_coeffs(D0_inv.coeffs, acc)

    for k, v in enumerate(nonprincipal):
        for rp in rows:
            c[v, rp] = derived_row(k, rp)
            c[rp, v] = -c[v, rp]
    for k, v in enumerate(nonprincipal):
        for w in nonprincipal:
            c[v, w] = derived_row(k, w)

    consistency = 0.0
    for k, v in enumerate(nonprincipal):
        consistency = max(consistency, float(np.linalg.norm(c[v, v] - e0_over_n)))
        for w in nonprincipal:
            if w != v:
                consistency = max(consistency, float(np.linalg.norm(c[v, w] + c[w, v])))

    # kernel weights by Cramer: for each target variable i solve
    #   sum_m P[p, m] * b[m, i] = c[r_p, i] / Vol
    vol = ball_volume(n)
    b = np.zeros((q, n, dim))
    for i in range(n):
        cvec = np.stack([c[rp, i] for rp in rows])
        for m in range(q):
            M = P.copy()
            M[:, m] = cvec
            det = algebra_determinant(table, M)
            b[m, i] = table.mul_coeffs(D0_inv.coeffs, det) / vol

    kernel = KernelSolution.from_b(conditions, b, residual=residual, nullity=0)
    consistency = max(consistency, float(np.max(np.abs(kernel.c - c))))
    return CommutativeAReport(True, residual, rows, kernel, consistency)


# -- JSON io -------------------------------------------------------------------


def conditions_to_dict(conditions: CRConditionSet) -> dict:
    algebra = conditions.algebra_source or algebra_to_dict(conditions.table)
    return {
        "algebra": algebra,
        "n": conditions.n,
        "q": conditions.q,
        "a": conditions.a.tolist(),
    }


def conditions_from_dict(data: dict, name: str = "") -> CRConditionSet:
    table = load_algebra(data["algebra"])
    source = data["algebra"] if isinstance(data["algebra"], str) else ""
    return CRConditionSet(
        table=table,
        n=int(data["n"]),
        q=int(data["q"]),
        a=np.asarray(data["a"], dtype=float),
        name=name,
        algebra_source=source,
    )


def save_conditions(conditions: CRConditionSet, path: str | Path) -> None:
    Path(path).write_text(json.dumps(conditions_to_dict(conditions), indent=2) + "\n")


def load_conditions(source: str | Path | dict) -> CRConditionSet:
    if isinstance(source, dict):
        return conditions_from_dict(source)
    path = Path(source)
    return conditions_from_dict(json.loads(path.read_text()), name=path.stem)
