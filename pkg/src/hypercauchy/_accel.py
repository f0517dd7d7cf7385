"""Batched quadrature accumulation: numba-jitted hot path with numpy fallback.

Backend is chosen by the HYPERCAUCHY_BACKEND env var ("numba" or "numpy");
default is numba when importable.  HYPERCAUCHY_THREADS caps the numba thread
count.  Both backends chunk the node stream into fixed blocks and combine
block partials in index order, so results are deterministic for a given
backend regardless of thread count.
"""
from __future__ import annotations

import os
import warnings

import numpy as np

try:
    import numba
    from numba import njit, prange

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised via HYPERCAUCHY_BACKEND=numpy
    HAS_NUMBA = False

CHUNK = 4096


def backend() -> str:
    """Active backend name: "numba" or "numpy"."""
    env = os.environ.get("HYPERCAUCHY_BACKEND", "").strip().lower()
    if env == "numpy":
        return "numpy"
    if env == "numba":
        if not HAS_NUMBA:
            warnings.warn("HYPERCAUCHY_BACKEND=numba but numba is not importable; "
                          "falling back to numpy")
            return "numpy"
        return "numba"
    if env:
        warnings.warn(f"unknown HYPERCAUCHY_BACKEND={env!r}; using default")
    return "numba" if HAS_NUMBA else "numpy"


def _apply_thread_cap() -> None:
    cap = os.environ.get("HYPERCAUCHY_THREADS")
    if HAS_NUMBA and cap:
        try:
            limit = max(1, int(cap))
        except ValueError:
            return
        numba.set_num_threads(min(limit, numba.config.NUMBA_NUM_THREADS))


if HAS_NUMBA:

    @njit(cache=True, parallel=True)
    def _boundary_blocks_numba(fv, X, nu, w, a, b, gamma, npow, partials):
        N, dim = fv.shape
        n = X.shape[1]
        q = a.shape[0]
        nblocks = partials.shape[0]
        for blk in prange(nblocks):
            lo = blk * CHUNK
            hi = min(lo + CHUNK, N)
            acc = np.zeros(dim)
            phi = np.zeros(dim)
            anu = np.zeros(dim)
            flux = np.zeros(dim)
            for t in range(lo, hi):
                r2 = 0.0
                for j in range(n):
                    r2 += X[t, j] * X[t, j]
                scale = w[t] / r2 ** (npow / 2.0)
                for d in range(dim):
                    flux[d] = 0.0
                for m in range(q):
                    for d in range(dim):
                        phi[d] = 0.0
                        anu[d] = 0.0
                    for i in range(n):
                        xi = X[t, i]
                        ni = nu[t, i]
                        for d in range(dim):
                            phi[d] += xi * b[m, i, d]
                            anu[d] += ni * a[m, i, d]
                    # flux += anu * phi (algebra product)
                    for s in range(dim):
                        av = anu[s]
                        if av == 0.0:
                            continue
                        for d in range(dim):
                            pv = phi[d]
                            if pv == 0.0:
                                continue
                            for e in range(dim):
                                flux[e] += av * pv * gamma[s, d, e]
                # acc += scale * (f * flux)
                for s in range(dim):
                    fs = fv[t, s]
                    if fs == 0.0:
                        continue
                    for e in range(dim):
                        fl = flux[e]
                        if fl == 0.0:
                            continue
                        for k in range(dim):
                            acc[k] += scale * fs * fl * gamma[s, e, k]
            partials[blk] = acc


def _boundary_blocks_numpy(fv, X, nu, w, a, b, gamma, npow, partials):
    N = fv.shape[0]
    nblocks = partials.shape[0]
    for blk in range(nblocks):
        lo = blk * CHUNK
        hi = min(lo + CHUNK, N)
        Xc, nc, fc, wc = X[lo:hi], nu[lo:hi], fv[lo:hi], w[lo:hi]
        r2 = np.sum(Xc * Xc, axis=1)
        scale = wc / r2 ** (npow / 2.0)
        phi = np.einsum("ti,mid->tmd", Xc, b)
        anu = np.einsum("ti,mid->tmd", nc, a)
        flux = np.einsum("tms,tmd,sde->te", anu, phi, gamma)
        partials[blk] = np.einsum("t,ts,te,sek->k", scale, fc, flux, gamma)


def boundary_accumulate(fv, X, nu, w, a, b, gamma, npow: int) -> np.ndarray:
    """Sum of w * f(y) * (sum_j nu_j sum_m a[m,j] * phi_m) / r^npow over nodes.

    fv: (N, dim) function values; X: (N, n) displacements y - x; nu: (N, n)
    outward normals; w: (N,) weights; a, b: (q, n, dim); gamma: structure
    constants.  Returns the accumulated coefficient vector (dim,).
    """
    fv = np.ascontiguousarray(fv, dtype=np.float64)
    X = np.ascontiguousarray(X, dtype=np.float64)
    nu = np.ascontiguousarray(nu, dtype=np.float64)
    w = np.ascontiguousarray(w, dtype=np.float64)
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    gamma = np.ascontiguousarray(gamma, dtype=np.float64)
    N, dim = fv.shape
    nblocks = max(1, (N + CHUNK - 1) // CHUNK)
    partials = np.zeros((nblocks, dim))
    if backend() == "numba":
        _apply_thread_cap()
        _boundary_blocks_numba(fv, X, nu, w, a, b, gamma, npow, partials)
    else:
        _boundary_blocks_numpy(fv, X, nu, w, a, b, gamma, npow, partials)
    return np.sum(partials, axis=0)


def volume_accumulate(tv, X, w, b, gamma, npow: int) -> np.ndarray:
    """Sum of w * sum_m t_m(y) * phi_m(x,y) / r^npow over nodes (numpy path).

    tv: (N, q, dim) are the per-node condition residuals
    t_m = sum_j (df/dy_j) * a[m, j]; X: (N, n); w: (N,).
    """
    tv = np.asarray(tv, dtype=np.float64)
    X = np.asarray(X, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    N = tv.shape[0]
    dim = gamma.shape[0]
    nblocks = max(1, (N + CHUNK - 1) // CHUNK)
    partials = np.zeros((nblocks, dim))
    for blk in range(nblocks):
        lo = blk * CHUNK
        hi = min(lo + CHUNK, N)
        Xc, tc, wc = X[lo:hi], tv[lo:hi], w[lo:hi]
        r2 = np.sum(Xc * Xc, axis=1)
        scale = wc / r2 ** (npow / 2.0)
        phi = np.einsum("ti,mid->tmd", Xc, b)
        partials[blk] = np.einsum("t,tms,tmd,sdk->k", scale, tc, phi, gamma)
    return np.sum(partials, axis=0)
