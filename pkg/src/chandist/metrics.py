"""Distinguishability functionals for channels and channel differences.

The diamond norm of a map with Choi rank ``k`` equals the trace norm of its
extension by a ``k``-dimensional identity, and both equal the maximum output
fidelity of the complementary pair of any Stinespring representation.  The
solvers here follow that fidelity route:

* :func:`fmax` maximizes ``F(Psi_A(rho_1), Psi_B(rho_2))`` over pairs of
  density matrices.  The objective is jointly concave (fidelity composed
  with linear completely positive maps), so projected gradient ascent with a
  duality-gap certificate finds the global maximum.
* :func:`fmax_k` restricts to inputs of rank at most ``k`` through a
  purified parametrization; nonconvex, handled by seeded multistart.
* :func:`dnorm`, :func:`tnorm_ext`, :func:`ancilla_value`,
  :func:`channel_success` are the operational quantities built on top.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import SuperOp, complementary_pair, difference, kraus_from_choi
from .linalg import (
    DEFAULT_RANK_TOL,
    as_density,
    as_matrix,
    eigh,
    fidelity,
    hermitian_part,
    rank_eps,
    trace_norm,
)


@dataclass(frozen=True)
class SolverOptions:
    """Knobs shared by every optimizer in this module.

    ``tol`` bounds the duality gap accepted by the convex solver (and the
    stall threshold of the nonconvex ones); ``restarts`` counts random
    starts for the multistart solvers; ``smoothing_schedule`` lists the
    regularizers used to round off the fidelity where outputs lose rank.
    """

    tol: float = 1e-6
    max_iters: int = 2000
    restarts: int = 16
    seed: int = 0
    smoothing_schedule: tuple[float, ...] = (1e-4, 1e-6, 1e-8)


DEFAULT_OPTS = SolverOptions()


@dataclass
class FMaxResult:
    value: float
    rho_a: np.ndarray
    rho_b: np.ndarray
    iterations: int
    converged: bool


@dataclass
class HelstromResult:
    projector: np.ndarray
    success_probability: float


def helstrom(rho0, rho1) -> HelstromResult:
    """Optimal two-outcome measurement for a pair of states.

    The projector onto the nonnegative eigenspace of ``rho0 - rho1``
    achieves guessing probability ``1/2 + ||rho0 - rho1||_1 / 4``.
    """
    r0 = as_density(rho0)
    r1 = as_density(rho1)
    if r0.shape != r1.shape:
        raise ValueError("states must share a dimension")
    delta = hermitian_part(r0 - r1)
    w, v = eigh(delta)
    pos = v[:, w >= 0]
    projector = pos @ pos.conj().T
    success = 0.5 + float(np.abs(w).sum()) / 4.0
    return HelstromResult(projector=hermitian_part(projector),
                          success_probability=success)


# -- convex machinery --------------------------------------------------------


def _project_simplex(y: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex."""
    u = np.sort(y)[::-1]
    css = np.cumsum(u)
    ks = np.arange(1, y.size + 1)
    cond = u + (1.0 - css) / ks > 0
    k = int(ks[cond][-1])
    tau = (css[k - 1] - 1.0) / k
    return np.maximum(y - tau, 0.0)


def _project_density(h: np.ndarray) -> np.ndarray:
    """Nearest density matrix in Frobenius norm."""
    w, v = np.linalg.eigh(hermitian_part(h))
    p = _project_simplex(w)
    return hermitian_part((v * p) @ v.conj().T)


def _sqrt_psd_fast(h: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(h)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def _smoothed_fidelity(p: np.ndarray, q: np.ndarray) -> float:
    m = _sqrt_psd_fast(p) @ _sqrt_psd_fast(q)
    return float(np.linalg.svd(m, compute_uv=False).sum())


def _fidelity_grads(p: np.ndarray, q: np.ndarray, mu: float):
    """Value and gradients of F at strictly positive P, Q.

    ``grad_P F = (1/2) sqrt(Q) (sqrt(Q) P sqrt(Q))^{-1/2} sqrt(Q)`` and
    symmetrically for Q.
    """
    floor = max(mu * mu * 1e-3, 1e-300)
    sp = _sqrt_psd_fast(p)
    sq = _sqrt_psd_fast(q)

    def half_grad(sq_fixed, other):
        m = sq_fixed @ other @ sq_fixed
        w, v = np.linalg.eigh(hermitian_part(m))
        w = np.maximum(w, floor)
        inv_root = (v / np.sqrt(w)) @ v.conj().T
        val = float(np.sqrt(w).sum())
        return val, hermitian_part(0.5 * sq_fixed @ inv_root @ sq_fixed)

    val, gp = half_grad(sq, p)
    _, gq = half_grad(sp, q)
    return val, gp, gq


def _hs(a: np.ndarray, b: np.ndarray) -> float:
    """Real Hilbert-Schmidt inner product of Hermitian matrices."""
    return float(np.real(np.vdot(a, b)))


def _fmax_ascent(psi_a: SuperOp, psi_b: SuperOp, adj_a: SuperOp,
                 adj_b: SuperOp, rho1, rho2, opts: SolverOptions):
    """Projected gradient ascent over a pair of density matrices.

    Runs the smoothing schedule coarse to fine, warm-starting each level.
    Returns the iterates, total iteration count, convergence flag, and the
    final duality gap (an upper bound on the remaining suboptimality of the
    smoothed objective, by concavity).
    """
    eye = np.eye(psi_a.dim_out, dtype=complex)
    schedule = sorted(opts.smoothing_schedule, reverse=True) or (0.0,)
    total_iters = 0
    converged = False
    gap = np.inf
    for level, mu in enumerate(schedule):
        final = level == len(schedule) - 1
        gtol = opts.tol * 0.5 if final else max(opts.tol, mu * 10.0)
        alpha = 1.0
        for _ in range(opts.max_iters):
            total_iters += 1
            p = psi_a(rho1) + mu * eye
            q = psi_b(rho2) + mu * eye
            f0, gp, gq = _fidelity_grads(p, q, mu)
            g1 = hermitian_part(adj_a(gp))
            g2 = hermitian_part(adj_b(gq))
            gap = (float(np.linalg.eigvalsh(g1).max()) - _hs(g1, rho1)
                   + float(np.linalg.eigvalsh(g2).max()) - _hs(g2, rho2))
            if gap <= gtol:
                converged = final
                break
            accepted = False
            while alpha > 1e-14:
                c1 = _project_density(rho1 + alpha * g1)
                c2 = _project_density(rho2 + alpha * g2)
                f1 = _smoothed_fidelity(psi_a(c1) + mu * eye,
                                        psi_b(c2) + mu * eye)
                lin = _hs(g1, c1 - rho1) + _hs(g2, c2 - rho2)
                if f1 >= f0 + 1e-4 * lin - 1e-15:
                    accepted = True
                    break
                alpha *= 0.5
            if not accepted:
                break
            rho1, rho2 = c1, c2
            alpha = min(alpha * 2.0, 1e6)
    return rho1, rho2, total_iters, converged, gap


def _require_cp_pair(psi_a: SuperOp, psi_b: SuperOp) -> None:
    if psi_a.dim_in != psi_b.dim_in:
        raise ValueError("maps must share an input dimension")
    if not psi_a.is_cp() or not psi_b.is_cp():
        raise ValueError("maximum output fidelity needs completely positive maps")


def fmax(psi_a: SuperOp, psi_b: SuperOp,
         opts: SolverOptions | None = None) -> FMaxResult:
    """Maximum output fidelity over all density-matrix input pairs.

    Jointly concave, so one projected-gradient run plus one random-restart
    confirmation suffices; ``converged`` records whether the duality-gap
    certificate reached ``opts.tol`` at the finest smoothing level.  The
    reported value is the exact (unsmoothed) fidelity at the optimizer.
    """
    opts = opts or DEFAULT_OPTS
    _require_cp_pair(psi_a, psi_b)
    n = psi_a.dim_in
    adj_a = psi_a.adjoint()
    adj_b = psi_b.adjoint()
    rng = np.random.default_rng(opts.seed)

    def random_density():
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        p = g @ g.conj().T
        return hermitian_part(p / np.trace(p).real)

    mixed = np.eye(n, dtype=complex) / n
    starts = [(mixed, mixed), (random_density(), random_density())]
    best = None
    total = 0
    for r1, r2 in starts:
        r1, r2, iters, conv, _ = _fmax_ascent(psi_a, psi_b, adj_a, adj_b,
                                              r1, r2, opts)
        total += iters
        val = fidelity(psi_a(r1), psi_b(r2))
        if best is None or val > best[0]:
            best = (val, r1, r2, conv)
    val, r1, r2, conv = best
    return FMaxResult(value=val, rho_a=as_density(r1), rho_b=as_density(r2),
                      iterations=total, converged=conv)


# -- rank-constrained maximization -------------------------------------------


def _sphere_tangent(w: np.ndarray, g: np.ndarray) -> np.ndarray:
    return g - np.real(np.vdot(w, g)) * w


def _fmax_rank_ascent(psi_a, psi_b, adj_a, adj_b, w1, w2, opts):
    """Gradient ascent over Frobenius-unit factors W with rho = W W†."""
    eye = np.eye(psi_a.dim_out, dtype=complex)
    schedule = sorted(opts.smoothing_schedule, reverse=True) or (0.0,)
    iters = 0
    tight = False
    for level, mu in enumerate(schedule):
        final = level == len(schedule) - 1
        alpha = 0.5
        stall = 0
        for _ in range(opts.max_iters):
            iters += 1
            p = psi_a(w1 @ w1.conj().T) + mu * eye
            q = psi_b(w2 @ w2.conj().T) + mu * eye
            f0, gp, gq = _fidelity_grads(p, q, mu)
            g1 = _sphere_tangent(w1, 2.0 * adj_a(gp) @ w1)
            g2 = _sphere_tangent(w2, 2.0 * adj_b(gq) @ w2)
            gsq = float(np.vdot(g1, g1).real + np.vdot(g2, g2).real)
            if gsq <= (opts.tol * max(1.0, f0)) ** 2:
                tight = final
                break
            accepted = False
            while alpha > 1e-14:
                c1 = w1 + alpha * g1
                c1 /= np.linalg.norm(c1)
                c2 = w2 + alpha * g2
                c2 /= np.linalg.norm(c2)
                f1 = _smoothed_fidelity(psi_a(c1 @ c1.conj().T) + mu * eye,
                                        psi_b(c2 @ c2.conj().T) + mu * eye)
                if f1 >= f0 + 1e-4 * alpha * gsq:
                    accepted = True
                    break
                alpha *= 0.5
            if not accepted:
                stall += 1
                if stall >= 3:
                    break
                alpha = 0.5
                continue
            w1, w2 = c1, c2
            alpha = min(alpha * 2.0, 1e3)
    return w1, w2, iters, tight


def fmax_k(psi_a: SuperOp, psi_b: SuperOp, k: int,
           opts: SolverOptions | None = None) -> FMaxResult:
    """Maximum output fidelity over input pairs of rank at most ``k``.

    Inputs are parametrized as ``rho = W W†`` with ``W`` an input-by-k
    factor of unit Frobenius norm, which sweeps exactly the rank-<=k
    densities.  Nonconvex; solved by seeded multistart ascent, best value
    reported.
    """
    opts = opts or DEFAULT_OPTS
    _require_cp_pair(psi_a, psi_b)
    n = psi_a.dim_in
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}]")
    adj_a = psi_a.adjoint()
    adj_b = psi_b.adjoint()
    rng = np.random.default_rng(opts.seed)

    det = np.zeros((n, k), dtype=complex)
    det[:k, :k] = np.eye(k) / np.sqrt(k)
    starts = [(det, det.copy())]
    for _ in range(max(opts.restarts - 1, 0)):
        g1 = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
        g2 = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
        starts.append((g1 / np.linalg.norm(g1), g2 / np.linalg.norm(g2)))

    best = None
    total = 0
    for w1, w2 in starts:
        w1, w2, iters, tight = _fmax_rank_ascent(psi_a, psi_b, adj_a, adj_b,
                                                 w1, w2, opts)
        total += iters
        val = fidelity(psi_a(w1 @ w1.conj().T), psi_b(w2 @ w2.conj().T))
        if best is None or val > best[0]:
            best = (val, w1, w2, tight)
    val, w1, w2, tight = best
    return FMaxResult(value=val, rho_a=as_density(w1 @ w1.conj().T),
                      rho_b=as_density(w2 @ w2.conj().T),
                      iterations=total, converged=tight)


# -- trace-norm quantities ----------------------------------------------------


def _minimal_complementary_pair(phi: SuperOp, tau: float):
    """Complementary pair of a minimal-environment Stinespring of ``phi``."""
    ka, kb = kraus_from_choi(phi.choi, phi.dim_in, phi.dim_out, tau)
    if ka.shape[0] == 0:
        return None
    minimal = SuperOp(ka, kb, phi.dim_in, phi.dim_out)
    return complementary_pair(minimal)


def tnorm_ext(phi: SuperOp, k: int, opts: SolverOptions | None = None,
              tau: float = DEFAULT_RANK_TOL) -> float:
    """Trace norm of ``phi`` tensored with a k-dimensional identity.

    Equals the rank-k maximum output fidelity of the complementary pair of
    any Stinespring representation; a minimal environment is used.
    """
    opts = opts or DEFAULT_OPTS
    pair = _minimal_complementary_pair(phi, tau)
    if pair is None:
        return 0.0
    return fmax_k(pair[0], pair[1], k, opts).value


def dnorm(phi: SuperOp, opts: SolverOptions | None = None,
          tau: float = DEFAULT_RANK_TOL) -> float:
    """Diamond norm via maximum output fidelity.

    Builds a Stinespring pair whose environment dimension is the Choi rank
    of ``phi`` and solves the (convex) unrestricted fidelity maximization of
    the complementary pair.
    """
    opts = opts or DEFAULT_OPTS
    pair = _minimal_complementary_pair(phi, tau)
    if pair is None:
        return 0.0
    return fmax(pair[0], pair[1], opts).value


def _sign_operator(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(hermitian_part(m))
    scale = max(float(np.abs(w).max()), 1e-300)
    s = np.where(np.abs(w) <= 1e-14 * scale, 0.0, np.sign(w))
    return (v * s) @ v.conj().T


def _pure_input_ascent(ext: SuperOp, ext_adj: SuperOp, starts,
                       max_iters: int) -> tuple[np.ndarray, float]:
    """Maximize ``||T(u u†)||_1`` over unit vectors by monotone ascent.

    Each step linearizes the trace norm at the current point (through its
    sign operator) and jumps to the leading eigenvector of the linearized
    objective; the value never decreases, so every iterate is a certified
    lower bound.
    """
    best_u, best_val = None, -np.inf
    for u in starts:
        val = trace_norm(ext(np.outer(u, u.conj())))
        for _ in range(max_iters):
            s = _sign_operator(ext(np.outer(u, u.conj())))
            h = hermitian_part(ext_adj(s))
            w, v = np.linalg.eigh(h)
            cand = v[:, -1]
            cand_val = trace_norm(ext(np.outer(cand, cand.conj())))
            if cand_val <= val + 1e-13 * max(1.0, val):
                break
            u, val = cand, cand_val
        if val > best_val:
            best_u, best_val = u, val
    return best_u, best_val


def ancilla_value(phi0: SuperOp, phi1: SuperOp, k: int,
                  opts: SolverOptions | None = None) -> float:
    """Best trace distance achievable with a k-dimensional auxiliary system.

    Maximizes ``||((Phi_0 - Phi_1) (x) 1_k)(u u†)||_1`` over unit vectors on
    input (x) ancilla.  Levels 1..k are solved in order, each warm-started
    from the zero-padded optimizer of the previous level, which makes the
    returned values nondecreasing in ``k``.
    """
    opts = opts or DEFAULT_OPTS
    if not phi0.is_admissible() or not phi1.is_admissible():
        raise ValueError("both maps must be completely positive and trace-preserving")
    if k < 1:
        raise ValueError("k must be at least 1")
    delta = difference(phi0, phi1)
    n = delta.dim_in
    rng = np.random.default_rng(opts.seed)
    # Ancillas beyond the input dimension cannot help (the Schmidt rank of a
    # pure input is at most n), so intermediate warm-start levels stop at n
    # and the requested k is evaluated directly afterwards.
    levels = list(range(1, min(k, n) + 1))
    if k > n:
        levels.append(k)
    value = 0.0
    u_prev = None
    prev_k = 0
    for kk in levels:
        ext = delta.extend(kk)
        ext_adj = ext.adjoint()
        starts = []
        if u_prev is not None:
            pad = np.zeros((n, kk), dtype=complex)
            pad[:, :prev_k] = u_prev.reshape(n, prev_k)
            starts.append(pad.reshape(-1))
        for _ in range(opts.restarts):
            g = rng.standard_normal(n * kk) + 1j * rng.standard_normal(n * kk)
            starts.append(g / np.linalg.norm(g))
        u_prev, value = _pure_input_ascent(ext, ext_adj, starts,
                                           max_iters=max(opts.max_iters, 50))
        prev_k = kk
    return value


def channel_success(phi0: SuperOp, phi1: SuperOp,
                    opts: SolverOptions | None = None) -> float:
    """Optimal probability of identifying which of two channels was applied."""
    if not phi0.is_admissible() or not phi1.is_admissible():
        raise ValueError("both maps must be completely positive and trace-preserving")
    return 0.5 + dnorm(difference(phi0, phi1), opts) / 4.0
