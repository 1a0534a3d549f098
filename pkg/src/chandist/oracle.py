"""Brute-force verifiers for desk-scale cross-checks.

These optimizers attack the defining variational problems head-on, with no
Choi-rank shortcut and no fidelity reformulation, so their values corroborate
the main solvers through an independent route.  Dimensions are capped: the
point is statistical confirmation at desk scale, not certified optimization.
"""

from __future__ import annotations

import numpy as np

from .channels import SuperOp
from .linalg import fidelity, hermitian_part, trace_norm

BRUTE_DNORM_DIM_CAP = 4
BRUTE_FMAX_DIM_CAP = 3


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _random_unit(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def _tangent(u: np.ndarray, g: np.ndarray) -> np.ndarray:
    return g - np.real(np.vdot(u, g)) * u


def brute_dnorm(phi: SuperOp, restarts: int = 64, seed=0, *,
                max_iters: int = 400) -> float:
    """Diamond norm by direct ascent of ``||(Phi (x) 1)(u v†)||_1``.

    Maximizes over unit vectors ``u, v`` on input (x) input with projected
    gradient steps on the product of spheres (tangent step, renormalize,
    backtracking line search).  Deterministic for a fixed seed.
    """
    if phi.dim_in > BRUTE_DNORM_DIM_CAP:
        raise ValueError(
            f"brute_dnorm is capped at dim_in <= {BRUTE_DNORM_DIM_CAP}")
    rng = _rng(seed)
    ext = phi.extend(phi.dim_in)
    ext_adj = ext.adjoint()
    dim = ext.dim_in
    best = 0.0
    for _ in range(restarts):
        u = _random_unit(dim, rng)
        v = _random_unit(dim, rng)
        val = trace_norm(ext(np.outer(u, v.conj())))
        alpha = 0.5
        stall = 0
        for _ in range(max_iters):
            m = ext(np.outer(u, v.conj()))
            mu_, _, mvh = np.linalg.svd(m)
            z = mu_ @ mvh
            k = ext_adj(z)
            gu = _tangent(u, k @ v)
            gv = _tangent(v, k.conj().T @ u)
            gsq = float(np.vdot(gu, gu).real + np.vdot(gv, gv).real)
            if gsq <= 1e-18:
                break
            accepted = False
            while alpha > 1e-13:
                cu = u + alpha * gu
                cu /= np.linalg.norm(cu)
                cv = v + alpha * gv
                cv /= np.linalg.norm(cv)
                cval = trace_norm(ext(np.outer(cu, cv.conj())))
                if cval >= val + 1e-4 * alpha * gsq:
                    accepted = True
                    break
                alpha *= 0.5
            if not accepted:
                break
            stall = stall + 1 if cval - val <= 1e-12 * max(1.0, val) else 0
            u, v, val = cu, cv, cval
            if stall >= 5:
                break
            alpha = min(alpha * 2.0, 1e3)
        best = max(best, val)
    return best


def brute_fmax(psi_a: SuperOp, psi_b: SuperOp, restarts: int = 64, seed=0, *,
               max_iters: int = 400, smoothing: float = 1e-10) -> float:
    """Maximum output fidelity by ascent over purified density pairs.

    Each density is ``W W†`` for a full-width Frobenius-unit factor ``W``;
    the ascent runs on the smoothed fidelity (regularizer ``smoothing``)
    and the reported value is the exact fidelity at the best iterate.
    """
    if psi_a.dim_in > BRUTE_FMAX_DIM_CAP:
        raise ValueError(
            f"brute_fmax is capped at dim_in <= {BRUTE_FMAX_DIM_CAP}")
    if psi_a.dim_in != psi_b.dim_in:
        raise ValueError("maps must share an input dimension")
    if not psi_a.is_cp() or not psi_b.is_cp():
        raise ValueError("maximum output fidelity needs completely positive maps")
    rng = _rng(seed)
    n = psi_a.dim_in
    adj_a = psi_a.adjoint()
    adj_b = psi_b.adjoint()
    eye = np.eye(psi_a.dim_out, dtype=complex)

    def smoothed(w1, w2):
        p = psi_a(w1 @ w1.conj().T) + smoothing * eye
        q = psi_b(w2 @ w2.conj().T) + smoothing * eye
        return fidelity(p, q)

    def grad_factor(adj, p_self, q_other, w):
        sq = _sqrt(q_other)
        m = sq @ p_self @ sq
        wv, vv = np.linalg.eigh(hermitian_part(m))
        wv = np.maximum(wv, smoothing * smoothing * 1e-3)
        inv_root = (vv / np.sqrt(wv)) @ vv.conj().T
        grad_p = hermitian_part(0.5 * sq @ inv_root @ sq)
        return 2.0 * adj(grad_p) @ w

    def _sqrt(h):
        wv, vv = np.linalg.eigh(hermitian_part(h))
        return (vv * np.sqrt(np.clip(wv, 0.0, None))) @ vv.conj().T

    best = 0.0
    for _ in range(restarts):
        w1 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        w1 /= np.linalg.norm(w1)
        w2 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        w2 /= np.linalg.norm(w2)
        val = smoothed(w1, w2)
        alpha = 0.5
        stall = 0
        for _ in range(max_iters):
            p = psi_a(w1 @ w1.conj().T) + smoothing * eye
            q = psi_b(w2 @ w2.conj().T) + smoothing * eye
            g1 = _tangent(w1.reshape(-1),
                          grad_factor(adj_a, p, q, w1).reshape(-1)).reshape(n, n)
            g2 = _tangent(w2.reshape(-1),
                          grad_factor(adj_b, q, p, w2).reshape(-1)).reshape(n, n)
            gsq = float(np.vdot(g1, g1).real + np.vdot(g2, g2).real)
            if gsq <= 1e-18:
                break
            accepted = False
            while alpha > 1e-13:
                c1 = w1 + alpha * g1
                c1 /= np.linalg.norm(c1)
                c2 = w2 + alpha * g2
                c2 /= np.linalg.norm(c2)
                cval = smoothed(c1, c2)
                if cval >= val + 1e-4 * alpha * gsq:
                    accepted = True
                    break
                alpha *= 0.5
            if not accepted:
                break
            stall = stall + 1 if cval - val <= 1e-12 * max(1.0, val) else 0
            w1, w2, val = c1, c2, cval
            if stall >= 5:
                break
            alpha = min(alpha * 2.0, 1e3)
        exact = fidelity(psi_a(w1 @ w1.conj().T), psi_b(w2 @ w2.conj().T))
        best = max(best, exact)
    return best


def unitary_pair_reference(u, v, *, tol: float = 1e-9,
                           iters: int = 20000) -> float:
    """Closed-form distinguishability of two unitary channels.

    Equals ``2 sqrt(1 - nu**2)`` where ``nu`` is the distance from the
    origin to the convex hull of the eigenvalues of ``U†V`` (computed by
    minimizing ``|sum_i p_i lambda_i|`` over the probability simplex with
    projected gradient descent).  Validated against :func:`brute_dnorm`
    before use as a reference; achievable without any ancilla.
    """
    um = np.asarray(u, dtype=complex)
    vm = np.asarray(v, dtype=complex)
    for name, mat in (("U", um), ("V", vm)):
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"{name} must be square")
        if np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])).max() > tol:
            raise ValueError(f"{name} is not unitary within {tol}")
    if um.shape != vm.shape:
        raise ValueError("U and V must share a dimension")
    lam = np.linalg.eigvals(um.conj().T @ vm)
    pts = np.stack([lam.real, lam.imag])  # 2 x m
    m = pts.shape[1]
    p = np.full(m, 1.0 / m)
    lip = 2.0 * float(np.linalg.norm(pts, 2)) ** 2
    step = 1.0 / max(lip, 1e-12)
    for _ in range(iters):
        r = pts @ p
        grad = 2.0 * (pts.T @ r)
        p_new = _project_simplex_vec(p - step * grad)
        if np.abs(p_new - p).max() < 1e-15:
            p = p_new
            break
        p = p_new
    nu = float(np.linalg.norm(pts @ p))
    return 2.0 * float(np.sqrt(max(0.0, 1.0 - nu * nu)))


def _project_simplex_vec(y: np.ndarray) -> np.ndarray:
    u = np.sort(y)[::-1]
    css = np.cumsum(u)
    ks = np.arange(1, y.size + 1)
    cond = u + (1.0 - css) / ks > 0
    k = int(ks[cond][-1])
    tau = (css[k - 1] - 1.0) / k
    return np.maximum(y - tau, 0.0)
