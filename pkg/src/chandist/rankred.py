"""Constructive rank reduction of channel preimages.

Given a positive map ``Phi`` and an achievable output ``P = Phi(rho0)``,
the preimage set ``{rho density : Phi(rho) = P}`` is compact and convex and
its extreme points have rank at most ``rank(P)``.  The walk implemented
here makes that constructive: it repeatedly finds a traceless Hermitian
direction, supported inside the current state and invisible to the output
constraints, and steps along it to the boundary of the positive cone, which
strictly drops the rank.

The constraints are encoded as a real-linear map on Hermitian matrices,
``Psi(X) = (Pi_U Phi(X) Pi_U, tr[(1 - Pi_U) Phi(X)])`` with ``U`` the range
of ``P``: a density rho satisfies ``Phi(rho) = P`` iff ``Psi(rho) = (P, 0)``.
Its codomain has real dimension ``rank(P)**2 + 1``, so a counting argument
guarantees a usable direction whenever the current rank exceeds ``rank(P)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channels import SuperOp
from .linalg import (
    DEFAULT_RANK_TOL,
    PSD_CLIP,
    as_density,
    eigh,
    hermitian_part,
    rank_eps,
)


class DegenerateDirectionError(ValueError):
    """Raised when a boundary step cannot pick a finite step size."""


@dataclass
class RealLinearMap:
    """Real-linear map from Hermitian matrices to Hermitian-on-U plus a scalar.

    ``matrix`` is expressed in the standard Hermitian bases (diagonal units,
    then symmetric, then antisymmetric pair combinations); ``u_basis`` holds
    the orthonormal columns spanning ``U``.
    """

    domain_dim: int
    codomain_dim: int
    matrix: np.ndarray
    u_basis: np.ndarray

    def apply(self, x) -> tuple[np.ndarray, float]:
        """Evaluate on a Hermitian matrix, returning (Y on U, scalar)."""
        coords = self.matrix @ herm_coords(hermitian_part(x))
        k = self.u_basis.shape[1]
        return herm_from_coords(coords[:-1], k), float(coords[-1])


@dataclass
class ReductionTrace:
    """Per-step diagnostics: (rank before, step size, output residual)."""

    steps: list[tuple[int, float, float]] = field(default_factory=list)


def hermitian_basis(n: int) -> list[np.ndarray]:
    """Orthonormal basis of the Hermitian n x n matrices (n**2 elements).

    Order: ``E_aa`` diagonals, then ``(E_ab + E_ba)/sqrt(2)`` and
    ``i(E_ab - E_ba)/sqrt(2)`` over pairs ``a < b``.
    """
    basis = []
    for a in range(n):
        m = np.zeros((n, n), dtype=complex)
        m[a, a] = 1.0
        basis.append(m)
    for a in range(n):
        for b in range(a + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[a, b] = m[b, a] = 1.0 / np.sqrt(2.0)
            basis.append(m)
    for a in range(n):
        for b in range(a + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[a, b] = 1j / np.sqrt(2.0)
            m[b, a] = -1j / np.sqrt(2.0)
            basis.append(m)
    return basis


def traceless_hermitian_basis(r: int) -> list[np.ndarray]:
    """Orthonormal basis of traceless Hermitian r x r matrices (r**2 - 1)."""
    basis = []
    for l in range(1, r):
        m = np.zeros((r, r), dtype=complex)
        m[np.arange(l), np.arange(l)] = 1.0
        m[l, l] = -float(l)
        basis.append(m / np.sqrt(l * (l + 1)))
    for a in range(r):
        for b in range(a + 1, r):
            m = np.zeros((r, r), dtype=complex)
            m[a, b] = m[b, a] = 1.0 / np.sqrt(2.0)
            basis.append(m)
            m = np.zeros((r, r), dtype=complex)
            m[a, b] = 1j / np.sqrt(2.0)
            m[b, a] = -1j / np.sqrt(2.0)
            basis.append(m)
    return basis


def herm_coords(x: np.ndarray) -> np.ndarray:
    """Coordinates of a Hermitian matrix in :func:`hermitian_basis` order."""
    n = x.shape[0]
    coords = [x[a, a].real for a in range(n)]
    root2 = np.sqrt(2.0)
    coords += [root2 * x[a, b].real for a in range(n) for b in range(a + 1, n)]
    coords += [root2 * x[a, b].imag for a in range(n) for b in range(a + 1, n)]
    return np.asarray(coords, dtype=float)


def herm_from_coords(coords: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros((n, n), dtype=complex)
    idx = 0
    for a in range(n):
        out[a, a] = coords[idx]
        idx += 1
    root2 = np.sqrt(2.0)
    for a in range(n):
        for b in range(a + 1, n):
            out[a, b] += coords[idx] / root2
            out[b, a] += coords[idx] / root2
            idx += 1
    for a in range(n):
        for b in range(a + 1, n):
            out[a, b] += 1j * coords[idx] / root2
            out[b, a] += -1j * coords[idx] / root2
            idx += 1
    return out


def build_psi(phi: SuperOp, p, *, tau: float = DEFAULT_RANK_TOL) -> RealLinearMap:
    """Constraint map for the preimage set of a nonzero achievable output."""
    ph = hermitian_part(p)
    w, v = eigh(ph)
    if w.size == 0 or np.abs(w).max() <= 0.0:
        raise ValueError("P must be nonzero")
    k = int(np.count_nonzero(w > tau * np.abs(w).max()))
    if k == 0:
        raise ValueError("P must be nonzero (its numerical rank is 0)")
    u_basis = v[:, :k]
    n = phi.dim_in
    cols = []
    for f in hermitian_basis(n):
        img = phi(f)
        y = u_basis.conj().T @ img @ u_basis
        lam = float(np.trace(img).real - np.trace(y).real)
        cols.append(np.concatenate([herm_coords(hermitian_part(y)), [lam]]))
    matrix = np.column_stack(cols)
    return RealLinearMap(domain_dim=n * n, codomain_dim=k * k + 1,
                         matrix=matrix, u_basis=u_basis)


def _kernel_directions(psi: RealLinearMap, rho: np.ndarray,
                       tau: float, svd_tol: float) -> list[np.ndarray]:
    """Traceless Hermitian kernel directions supported inside ``rho``.

    Returns unit-Frobenius candidates ordered by ascending constraint
    residual; empty when the intersection is numerically trivial.
    """
    w, v = eigh(rho)
    top = max(float(np.abs(w).max()), 1e-300)
    r = int(np.count_nonzero(w > tau * top))
    if r <= 1:
        return []
    vb = v[:, :r]
    basis = traceless_hermitian_basis(r)
    cols = [psi.matrix @ herm_coords(hermitian_part(vb @ g @ vb.conj().T))
            for g in basis]
    c = np.column_stack(cols)
    _, s, vh = np.linalg.svd(c, full_matrices=True)
    threshold = svd_tol * max(float(s[0]) if s.size else 0.0, 1.0)
    out = []
    for i in range(vh.shape[0] - 1, -1, -1):
        residual = float(s[i]) if i < s.size else 0.0
        if residual > threshold:
            break
        theta = vh[i]
        g = sum(t * b for t, b in zip(theta, basis))
        x = hermitian_part(vb @ g @ vb.conj().T)
        nrm = float(np.linalg.norm(x))
        if nrm > 0:
            out.append(x / nrm)
    return out


def kernel_intersection(psi: RealLinearMap, rho, *,
                        tau: float = DEFAULT_RANK_TOL,
                        svd_tol: float = 1e-8) -> np.ndarray | None:
    """Best traceless kernel direction supported inside ``rho``, or ``None``.

    The returned matrix has unit Frobenius norm, zero trace, range inside
    the range of ``rho``, and constraint residual at most ``svd_tol``.
    """
    dirs = _kernel_directions(psi, as_density(rho), tau, svd_tol)
    return dirs[0] if dirs else None


def _boundary_step_full(rho: np.ndarray, x: np.ndarray, *,
                        tau: float = DEFAULT_RANK_TOL,
                        degenerate_tol: float = 1e-10):
    """Step to the boundary of the positive cone; returns (rho', t, x_used)."""
    w, v = eigh(rho)
    top = max(float(np.abs(w).max()), 1e-300)
    r = int(np.count_nonzero(w > tau * top))
    vb = v[:, :r]
    p = w[:r]
    xh = hermitian_part(x)
    nrm = float(np.linalg.norm(xh))
    if nrm == 0.0:
        raise ValueError("X must be nonzero")
    if abs(float(np.trace(xh).real)) > 1e-9 * max(nrm, 1.0):
        raise ValueError("X must be traceless")
    xr = vb.conj().T @ xh @ vb
    embedded = vb @ xr @ vb.conj().T
    if float(np.linalg.norm(xh - embedded)) > 1e-8 * nrm:
        raise ValueError("X must be supported inside the range of rho")
    inv_root = 1.0 / np.sqrt(p)
    s = xr * np.outer(inv_root, inv_root)
    lam = np.linalg.eigvalsh(hermitian_part(s))
    lam_min = float(lam[0])
    sign = 1.0
    if lam_min >= 0.0:
        # step along -X instead; a traceless nonzero X always has a negative
        # direction in exact arithmetic
        sign = -1.0
        lam_min = float(-lam[-1])
    if lam_min > -degenerate_tol:
        raise DegenerateDirectionError(
            "both step directions are degenerate below tolerance")
    t = 1.0 / abs(lam_min)
    stepped = hermitian_part(rho + t * sign * xh)
    w2, v2 = eigh(stepped)
    w2 = np.where(w2 < PSD_CLIP, 0.0, w2)
    total = float(w2.sum())
    if total <= 0.0:
        raise DegenerateDirectionError("step annihilated the state")
    rho2 = hermitian_part((v2 * (w2 / total)) @ v2.conj().T)
    return rho2, t, sign * xh


def boundary_step(rho, x, *, tau: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Walk ``rho + t X`` to the positive-cone boundary, dropping the rank.

    ``t = 1/|lambda_min(S)|`` with ``S = rho^{-1/2} X rho^{-1/2}`` on the
    support of ``rho`` (the sign of ``X`` is flipped when the smallest
    eigenvalue is nonnegative).  The result is renormalized to unit trace
    with eigenvalues below the clip threshold truncated.
    """
    rho2, _, _ = _boundary_step_full(as_density(rho), x, tau=tau)
    return rho2


def _check_positive(phi: SuperOp, samples: int = 5, seed: int = 0) -> None:
    rng = np.random.default_rng(seed)
    n = phi.dim_in
    for _ in range(samples):
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        sigma = g @ g.conj().T
        sigma /= np.trace(sigma).real
        out = hermitian_part(phi(sigma))
        w = np.linalg.eigvalsh(out)
        if w.min() < -1e-9 * max(float(np.abs(w).max()), 1.0):
            raise ValueError("map is not positive on density inputs")


def reduce_preimage(phi: SuperOp, rho0, *, tau: float = DEFAULT_RANK_TOL,
                    residual_tol: float = 1e-7,
                    validate: bool = True) -> tuple[np.ndarray, ReductionTrace]:
    """Low-rank preimage with the same output: ``Phi(rho) = Phi(rho0)``.

    The result has rank at most ``rank(Phi(rho0))`` (a pure state when the
    output is zero) and reproduces the output within ``residual_tol``.
    Terminates in at most ``dim_in`` boundary steps since every step
    strictly drops the rank.
    """
    if validate:
        _check_positive(phi)
    rho = as_density(rho0)
    p = hermitian_part(phi(rho))
    k = rank_eps(p, tau)
    trace = ReductionTrace()
    if k == 0:
        _, v = eigh(rho)
        pure = np.outer(v[:, 0], v[:, 0].conj())
        return hermitian_part(pure), trace
    psi = build_psi(phi, p, tau=tau)
    for _ in range(phi.dim_in + 1):
        r = rank_eps(rho, tau)
        if r <= k:
            break
        candidates = _kernel_directions(psi, rho, tau, svd_tol=1e-8)
        advanced = False
        for x in candidates:
            try:
                rho_new, t, _ = _boundary_step_full(rho, x, tau=tau)
            except (DegenerateDirectionError, ValueError):
                continue
            residual = float(np.linalg.norm(phi(rho_new) - p))
            if residual <= residual_tol and rank_eps(rho_new, tau) < r:
                trace.steps.append((r, t, residual))
                rho = rho_new
                advanced = True
                break
        if not advanced:
            break
    return rho, trace
