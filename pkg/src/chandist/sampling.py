"""Seeded random matrices, states, and channels for tests and experiments."""

from __future__ import annotations

import numpy as np

from .channels import SuperOp, difference
from .linalg import as_density, hermitian_part, rank_eps


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_complex(shape, rng) -> np.ndarray:
    rng = _rng(rng)
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unit_vector(dim: int, rng) -> np.ndarray:
    v = random_complex(dim, _rng(rng))
    return v / np.linalg.norm(v)


def random_unitary(n: int, rng) -> np.ndarray:
    """Haar-distributed unitary via QR with phase correction."""
    q, r = np.linalg.qr(random_complex((n, n), _rng(rng)))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_hermitian(n: int, rng) -> np.ndarray:
    return hermitian_part(random_complex((n, n), _rng(rng)))


def random_psd(n: int, rng, rank: int | None = None) -> np.ndarray:
    rng = _rng(rng)
    r = n if rank is None else rank
    g = random_complex((n, r), rng)
    return g @ g.conj().T


def random_density(n: int, rng, rank: int | None = None) -> np.ndarray:
    p = random_psd(n, rng, rank)
    return as_density(p / np.trace(p).real)


def random_kraus_stack(dim_in: int, dim_out: int, count: int, rng) -> np.ndarray:
    """Kraus operators of a random channel: slices of a Haar isometry."""
    rng = _rng(rng)
    g = random_complex((dim_out * count, dim_in), rng)
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    iso = q * (d / np.abs(d))
    return iso.reshape(dim_out, count, dim_in).transpose(1, 0, 2)


def random_channel(dim_in: int, dim_out: int, kraus_count: int, rng) -> SuperOp:
    """Random admissible channel with the given number of Kraus operators."""
    if kraus_count < 1 or kraus_count > dim_in * dim_out:
        raise ValueError("kraus_count must be in [1, dim_in*dim_out]")
    return SuperOp.from_kraus(random_kraus_stack(dim_in, dim_out, kraus_count, rng))


def random_cp_map(dim_in: int, dim_out: int, kraus_count: int, rng) -> SuperOp:
    """Random completely positive (not trace-preserving) map of planted rank."""
    rng = _rng(rng)
    ops = [random_complex((dim_out, dim_in), rng) / np.sqrt(dim_in * dim_out)
           for _ in range(kraus_count)]
    return SuperOp.from_kraus(ops)


def random_admissible_pair(dim: int, delta_rank: int, rng,
                           strength: float = 0.4) -> tuple[SuperOp, SuperOp]:
    """Two admissible channels whose difference has a planted Choi rank.

    The difference of trace-preserving maps always has a traceless Choi
    matrix with mixed signature, so ``delta_rank`` must be at least 2 (a
    rank-1 Hermitian Choi block cannot have a vanishing partial trace).

    Construction: take a full-Kraus-rank channel ``Phi_1``, then add a
    Hermitian perturbation ``sum_i c_i w_i w_i†`` built from vectors with a
    common input-side marginal and coefficients summing to zero, scaled to
    keep ``Phi_0`` completely positive.
    """
    if delta_rank < 2 or delta_rank > dim * dim:
        raise ValueError("delta_rank must be in [2, dim**2]")
    rng = _rng(rng)
    base = random_channel(dim, dim, dim * dim, rng)
    # Blending toward the completely depolarizing channel keeps the Choi
    # spectrum bounded away from zero, leaving room for a sizeable
    # perturbation while Phi_0 stays completely positive.
    j1 = 0.6 * base.choi + 0.4 * np.eye(dim * dim) / dim
    phi1 = SuperOp.from_choi(j1, dim, dim)
    # Vectors w_i = vec(Q_i S) share the input marginal of S for unitary Q_i.
    s = random_complex((dim, dim), rng)
    s = s / np.linalg.norm(s)
    ws = [(random_unitary(dim, rng) @ s).reshape(-1) for _ in range(delta_rank)]
    coeffs = rng.standard_normal(delta_rank)
    coeffs -= coeffs.mean()
    j_delta = sum(c * np.outer(w, w.conj()) for c, w in zip(coeffs, ws))
    w_min = float(np.linalg.eigvalsh(hermitian_part(phi1.choi)).min())
    if w_min <= 0:
        raise RuntimeError("base channel Choi is numerically singular")
    scale = strength * w_min / max(float(np.abs(np.linalg.eigvalsh(j_delta)).max()), 1e-300)
    j0 = phi1.choi + scale * j_delta
    phi0 = SuperOp.from_choi(j0, dim, dim)
    planted = rank_eps(difference(phi0, phi1).choi)
    if planted != delta_rank:
        raise RuntimeError(
            f"planted rank {delta_rank} came out as {planted}; use another seed"
        )
    return phi0, phi1


def random_unitary_pair(dim: int, rng) -> tuple[SuperOp, SuperOp]:
    rng = _rng(rng)
    u = random_unitary(dim, rng)
    v = random_unitary(dim, rng)
    return SuperOp.from_kraus([u]), SuperOp.from_kraus([v])
