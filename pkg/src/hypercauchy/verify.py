"""Numerical verification of the reproduction and representation formulas.

boundary_reproduce integrates f(y) * sum_j Flux^j(y; x) nu_j over a sphere
and compares against f(x); verify_representation subtracts the volume term
that carries the condition defect of a general C^1 function; and
derivative_via_kernel differentiates the kernel in the pole to recover
first derivatives together with an empirical Cauchy-type bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _accel
from .algebra import AlgElem, ball_volume
from .kernel import CauchyKernel
from .solutions import AlgPolynomial, apply_cr_operator

MIN_NODES = 8


class PointOutsideDomain(Exception):
    """Evaluation point is not strictly inside the ball."""


class QuadratureUnderResolved(Exception):
    """The half-resolution error estimate exceeds the requested bound."""


@dataclass(frozen=True)
class BallDomain:
    """Ball { y : ||y - center|| < radius }."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        center = np.asarray(self.center, dtype=float).reshape(-1)
        center.setflags(write=False)
        object.__setattr__(self, "center", center)
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    @property
    def n(self) -> int:
        return self.center.shape[0]

    def contains(self, x, margin: float = 0.0) -> bool:
        x = np.asarray(x, dtype=float)
        return float(np.linalg.norm(x - self.center)) < self.radius - margin


@dataclass(frozen=True)
class QuadratureSpec:
    """Boundary rule: product Gauss-Legendre in hyperspherical angles for
    n <= 4 (nodes = per-angle count), antithetic Monte Carlo otherwise
    (nodes = total).  radial_nodes sizes the shell rule of volume terms
    (defaults to nodes)."""

    scheme: str = "product_gauss"
    nodes: int = 32
    seed: int = 0
    radial_nodes: int | None = None

    def __post_init__(self):
        if self.scheme not in ("product_gauss", "monte_carlo"):
            raise ValueError(f"unknown quadrature scheme {self.scheme!r}")
        if self.nodes < MIN_NODES:
            raise ValueError(f"nodes must be >= {MIN_NODES}")

    def halved(self) -> QuadratureSpec:
        return QuadratureSpec(
            scheme=self.scheme,
            nodes=max(MIN_NODES, self.nodes // 2),
            seed=self.seed + 1,
            radial_nodes=None
            if self.radial_nodes is None
            else max(MIN_NODES, self.radial_nodes // 2),
        )


def _partner_spec(spec: QuadratureSpec) -> QuadratureSpec:
    """Companion rule for the error estimate: half resolution, or double
    when the rule is already at the minimum (halving would be a no-op)."""
    if spec.nodes // 2 >= MIN_NODES:
        return spec.halved()
    return QuadratureSpec(
        scheme=spec.scheme,
        nodes=spec.nodes * 2,
        seed=spec.seed + 1,
        radial_nodes=None if spec.radial_nodes is None else spec.radial_nodes * 2,
    )


@dataclass(frozen=True)
class ReproductionReport:
    computed: AlgElem
    expected: AlgElem
    abs_error: float
    rel_error: float
    nodes: int

    def to_dict(self) -> dict:
        return {
            "computed": self.computed.coeffs.tolist(),
            "expected": self.expected.coeffs.tolist(),
            "abs_error": self.abs_error,
            "rel_error": self.rel_error,
            "nodes": self.nodes,
        }


@dataclass(frozen=True)
class DerivativeReport:
    value: AlgElem
    estimate_check: bool
    bound_constant: float
    sup_boundary: float
    nodes: int


def sphere_area(n: int, radius: float = 1.0) -> float:
    """Surface measure of the (n-1)-sphere of the given radius in R^n."""
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0) * radius ** (n - 1)


def _gauss_on(a: float, b: float, k: int):
    t, w = np.polynomial.legendre.leggauss(k)
    return 0.5 * (b - a) * t + 0.5 * (a + b), 0.5 * (b - a) * w


def _sphere_directions_gauss(n: int, k: int):
    """Unit directions and weights with sum(w) = area of the unit sphere."""
    if n == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    polar = [_gauss_on(0.0, math.pi, k) for _ in range(n - 2)]
    azim = _gauss_on(0.0, 2.0 * math.pi, k)
    grids = np.meshgrid(
        *[p[0] for p in polar], azim[0], indexing="ij"
    )
    wgrids = np.meshgrid(
        *[p[1] for p in polar], azim[1], indexing="ij"
    )
    angles = np.stack([g.ravel() for g in grids], axis=1)
    w = np.ones(angles.shape[0])
    for g in wgrids:
        w = w * g.ravel()
    N = angles.shape[0]
    omega = np.empty((N, n))
    sin_prod = np.ones(N)
    for axis in range(n - 1):
        omega[:, axis] = sin_prod * np.cos(angles[:, axis])
        sin_prod = sin_prod * np.sin(angles[:, axis])
        # surface density: sin^{n-1-axis-1}(theta_axis) extra powers
        if axis < n - 2:
            w = w * np.sin(angles[:, axis]) ** (n - 2 - axis)
    omega[:, n - 1] = sin_prod
    return omega, w


def _sphere_directions_mc(n: int, total: int, seed: int):
    rng = np.random.default_rng(seed)
    half = max(1, total // 2)
    g = rng.standard_normal((half, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    omega = np.concatenate([g, -g], axis=0)
    w = np.full(omega.shape[0], sphere_area(n) / omega.shape[0])
    return omega, w


def sphere_quadrature(domain: BallDomain, spec: QuadratureSpec):
    """Nodes y, outward unit normals nu, and weights w with sum(w) = area."""
    n = domain.n
    if spec.scheme == "product_gauss" and n > 4:
        raise ValueError("product_gauss supports n <= 4; use monte_carlo")
    if spec.scheme == "product_gauss":
        omega, w = _sphere_directions_gauss(n, spec.nodes)
    else:
        omega, w = _sphere_directions_mc(n, spec.nodes, spec.seed)
    Y = domain.center[None, :] + domain.radius * omega
    return Y, omega, w * domain.radius ** (n - 1)


def _eval_function(f, Y: np.ndarray, dim: int) -> np.ndarray:
    if isinstance(f, AlgPolynomial) or hasattr(f, "eval_batch"):
        return np.asarray(f.eval_batch(Y), dtype=float)
    out = np.empty((Y.shape[0], dim))
    for t in range(Y.shape[0]):
        v = f(Y[t])
        out[t] = v.coeffs if isinstance(v, AlgElem) else np.asarray(v, dtype=float)
    return out


def _eval_derivatives(f, Y: np.ndarray, n: int, dim: int,
                      h: float = 1e-5) -> np.ndarray:
    """df/dy_j at each node: (N, n, dim); exact on polynomials."""
    out = np.empty((Y.shape[0], n, dim))
    if isinstance(f, AlgPolynomial):
        for j in range(n):
            out[:, j, :] = f.partial_derivative(j).eval_batch(Y)
        return out
    for j in range(n):
        step = np.zeros(n)
        step[j] = h
        fp = _eval_function(f, Y + step, dim)
        fm = _eval_function(f, Y - step, dim)
        out[:, j, :] = (fp - fm) / (2.0 * h)
    return out


def _require_inside(x: np.ndarray, domain: BallDomain) -> None:
    dist = float(np.linalg.norm(x - domain.center))
    if dist >= domain.radius:
        raise PointOutsideDomain(
            f"point at distance {dist:.6g} from center; radius {domain.radius:.6g}"
        )


def _check_is_solution(f, kernel: CauchyKernel, x: np.ndarray,
                       domain: BallDomain) -> None:
    gap = domain.radius - float(np.linalg.norm(x - domain.center))
    delta = 0.25 * gap
    C = kernel.conditions
    pts = [x]
    for j in range(C.n):
        step = np.zeros(C.n)
        step[j] = delta
        pts.extend([x + step, x - step])
    scale = 1.0
    worst = 0.0
    for p in pts:
        fv = _eval_function(f, p[None, :], kernel.table.dim)[0]
        scale = max(scale, float(np.max(np.abs(fv))))
        for t in apply_cr_operator(C, f, p):
            worst = max(worst, t.norm())
    if worst > 1e-4 * scale:
        raise ValueError(
            f"f violates the Cauchy conditions near x (defect {worst:.3e}); "
            "use verify_representation for general C^1 functions"
        )


def _boundary_term(f, x, domain, kernel, spec) -> tuple[np.ndarray, int]:
    Y, nu, w = sphere_quadrature(domain, spec)
    fv = _eval_function(f, Y, kernel.table.dim)
    acc = _accel.boundary_accumulate(
        fv, Y - x[None, :], nu, w, kernel.conditions.a, kernel.solution.b,
        kernel.table.gamma, kernel.n,
    )
    return acc, Y.shape[0]


def boundary_reproduce(
    f,
    x,
    domain: BallDomain,
    kernel: CauchyKernel,
    spec: QuadratureSpec,
    check_solution: bool = True,
    target_error: float | None = None,
) -> ReproductionReport:
    """Reproduce f(x) from boundary values of a condition-set solution.

    Computes the flux integral of f against the kernel over the sphere and
    reports it next to the direct evaluation f(x).  target_error requests a
    half-resolution error estimate and raises QuadratureUnderResolved when
    the estimate exceeds it.
    """
    x = np.asarray(x, dtype=float)
    if domain.n != kernel.n:
        raise ValueError("domain dimension does not match the kernel")
    _require_inside(x, domain)
    if check_solution:
        _check_is_solution(f, kernel, x, domain)
    acc, used = _boundary_term(f, x, domain, kernel, spec)
    if target_error is not None:
        coarse, _ = _boundary_term(f, x, domain, kernel, _partner_spec(spec))
        estimate = float(np.linalg.norm(acc - coarse))
        if estimate > target_error:
            raise QuadratureUnderResolved(
                f"error estimate {estimate:.3e} exceeds target {target_error:.3e}"
            )
    expected = _eval_function(f, x[None, :], kernel.table.dim)[0]
    abs_err = float(np.linalg.norm(acc - expected))
    rel_err = abs_err / max(float(np.linalg.norm(expected)), 1e-300)
    return ReproductionReport(
        computed=AlgElem(kernel.table, acc),
        expected=AlgElem(kernel.table, expected),
        abs_error=abs_err,
        rel_error=rel_err,
        nodes=used,
    )


def _volume_term(f, x, domain, kernel, spec) -> tuple[np.ndarray, int]:
    """Integral of sum_m t_m(y) phi_m(x,y)/r^n over the ball, shell rule.

    Radial substitution y = x + r*omega: the r^{n-1} Jacobian cancels the
    kernel singularity, leaving a smooth integrand on [0, t(omega)].
    """
    n = domain.n
    if spec.scheme == "product_gauss":
        omega, w_ang = _sphere_directions_gauss(n, spec.nodes)
    else:
        omega, w_ang = _sphere_directions_mc(n, spec.nodes, spec.seed)
    k_rad = spec.radial_nodes if spec.radial_nodes is not None else spec.nodes
    k_rad = max(MIN_NODES, k_rad)
    t_ref, t_w = np.polynomial.legendre.leggauss(k_rad)
    t_ref = 0.5 * (t_ref + 1.0)  # reference [0, 1]
    t_w = 0.5 * t_w

    d = x - domain.center
    proj = omega @ d
    reach = -proj + np.sqrt(proj**2 + domain.radius**2 - float(d @ d))

    # nodes: for each direction, k_rad radial points r = reach * t_ref
    R_nodes = reach[:, None] * t_ref[None, :]
    Ynodes = x[None, None, :] + R_nodes[:, :, None] * omega[:, None, :]
    W = (w_ang[:, None] * t_w[None, :] * reach[:, None]) * R_nodes ** (n - 1)

    Yflat = Ynodes.reshape(-1, n)
    Wflat = W.ravel()
    Xflat = Yflat - x[None, :]

    dim = kernel.table.dim
    derivs = _eval_derivatives(f, Yflat, n, dim)
    q = kernel.conditions.q
    tv = np.empty((Yflat.shape[0], q, dim))
    gamma = kernel.table.gamma
    for m in range(q):
        tv[:, m, :] = np.einsum(
            "tjs,jd,sdk->tk", derivs, kernel.conditions.a[m], gamma
        )
    acc = _accel.volume_accumulate(
        tv, Xflat, Wflat, kernel.solution.b, gamma, kernel.n
    )
    return acc, Yflat.shape[0]


def verify_representation(
    f,
    x,
    domain: BallDomain,
    kernel: CauchyKernel,
    spec: QuadratureSpec,
    target_error: float | None = None,
) -> ReproductionReport:
    """Boundary term minus volume term for a general C^1 function.

    The volume integrand carries the condition defect t_m of f, so the
    difference reproduces f(x) without f being a solution.
    """
    x = np.asarray(x, dtype=float)
    if domain.n != kernel.n:
        raise ValueError("domain dimension does not match the kernel")
    _require_inside(x, domain)
    bnd, used_b = _boundary_term(f, x, domain, kernel, spec)
    vol, used_v = _volume_term(f, x, domain, kernel, spec)
    acc = bnd - vol
    if target_error is not None:
        half = _partner_spec(spec)
        bnd2, _ = _boundary_term(f, x, domain, kernel, half)
        vol2, _ = _volume_term(f, x, domain, kernel, half)
        estimate = float(np.linalg.norm(acc - (bnd2 - vol2)))
        if estimate > target_error:
            raise QuadratureUnderResolved(
                f"error estimate {estimate:.3e} exceeds target {target_error:.3e}"
            )
    expected = _eval_function(f, x[None, :], kernel.table.dim)[0]
    abs_err = float(np.linalg.norm(acc - expected))
    rel_err = abs_err / max(float(np.linalg.norm(expected)), 1e-300)
    return ReproductionReport(
        computed=AlgElem(kernel.table, acc),
        expected=AlgElem(kernel.table, expected),
        abs_error=abs_err,
        rel_error=rel_err,
        nodes=used_b + used_v,
    )


def derivative_via_kernel(
    f,
    x,
    i: int,
    domain: BallDomain,
    kernel: CauchyKernel,
    spec: QuadratureSpec,
    check_solution: bool = True,
) -> DerivativeReport:
    """d f / d x_i from boundary values, via the pole derivative of the kernel.

    d/dx_i [phi_m / r^n] = (-b[m,i] r^2 + n X_i phi_m) / r^{n+2} with
    X = y - x; the integral of f against the differentiated flux returns the
    i-th partial derivative of f at x.  Also reports the empirical constant
    M = R * integral of the spectral norm of right-multiplication by the
    contracted flux, which bounds |df| by M sup|f| / R.
    """
    x = np.asarray(x, dtype=float)
    if domain.n != kernel.n:
        raise ValueError("domain dimension does not match the kernel")
    if not 0 <= i < kernel.n:
        raise ValueError("derivative direction out of range")
    _require_inside(x, domain)
    if check_solution:
        _check_is_solution(f, kernel, x, domain)

    Y, nu, w = sphere_quadrature(domain, spec)
    X = Y - x[None, :]
    r2 = np.sum(X * X, axis=1)
    table = kernel.table
    n, q, dim = kernel.n, kernel.conditions.q, table.dim
    a, b = kernel.conditions.a, kernel.solution.b
    gamma = table.gamma

    phi = np.einsum("ti,mid->tmd", X, b)
    dphi = (
        -b[None, :, i, :] * r2[:, None, None]
        + n * X[:, i, None, None] * phi
    ) / r2[:, None, None] ** ((n + 2) / 2.0)
    anu = np.einsum("tj,mjd->tmd", nu, a)
    flux = np.einsum("tms,tmd,sde->te", anu, dphi, gamma)
    fv = _eval_function(f, Y, dim)
    value = np.einsum("t,ts,te,sek->k", w, fv, flux, gamma)

    # empirical Cauchy-estimate constant
    norms = np.empty(Y.shape[0])
    for t in range(Y.shape[0]):
        norms[t] = np.linalg.norm(table.right_mult_matrix(flux[t]), 2)
    M = domain.radius * float(np.sum(w * norms))
    sup_f = float(np.max(np.linalg.norm(fv, axis=1)))
    bound = M * sup_f / domain.radius
    holds = float(np.linalg.norm(value)) <= bound * (1.0 + 1e-8) + 1e-12
    return DerivativeReport(
        value=AlgElem(table, value),
        estimate_check=holds,
        bound_constant=M,
        sup_boundary=sup_f,
        nodes=Y.shape[0],
    )
