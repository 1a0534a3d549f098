"""Dense complex linear algebra primitives shared by the whole package.

Conventions:

* Matrices are dense complex ``numpy`` arrays; vectors are 1-D arrays.
* Composite indices are row-major with the FIRST tensor factor as the
  high-order index: the basis vector ``e_i (x) e_j`` of a bipartite space
  sits at position ``i * dim_second + j``.  ``numpy.kron`` and row-major
  ``reshape`` already agree with this convention, so ``vec`` of a matrix is
  simply ``reshape(-1)``.
"""

from __future__ import annotations

import numpy as np

# Numerical rank threshold, relative to the largest singular value.  Shared
# by every rank decision in the package so "rank" means one thing.
DEFAULT_RANK_TOL = 1e-9

# Eigenvalues in [-PSD_CLIP, 0) count as roundoff and are clipped to zero;
# anything below -PSD_REJECT is treated as genuinely not positive
# semidefinite.
PSD_CLIP = 1e-10
PSD_REJECT = 1e-8


def as_matrix(a) -> np.ndarray:
    """Coerce to a 2-D complex array with finite entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains non-finite entries")
    return m


def as_square(a) -> np.ndarray:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def hermitian_part(a) -> np.ndarray:
    """Project onto the Hermitian matrices: (A + A†)/2."""
    m = as_square(a)
    return (m + m.conj().T) / 2


def as_density(a, *, clip: float = PSD_CLIP) -> np.ndarray:
    """Validate and repair a density matrix.

    Eigenvalues in ``[-clip, 0)`` are treated as roundoff and clipped to
    zero (with trace renormalization); anything more negative is an error,
    as is a trace further than ``clip`` from one.
    """
    h = hermitian_part(a)
    tr = float(np.trace(h).real)
    if abs(tr - 1.0) > clip:
        raise ValueError(f"trace {tr!r} is not 1 within {clip}")
    w, v = np.linalg.eigh(h)
    if w.min() < -clip:
        raise ValueError(
            f"matrix is not positive semidefinite (min eigenvalue {w.min():.3e})"
        )
    w = np.clip(w, 0.0, None)
    rho = (v * w) @ v.conj().T
    return hermitian_part(rho / np.trace(rho).real)


def as_unit_vector(v, *, tol: float = 1e-12) -> np.ndarray:
    u = np.asarray(v, dtype=complex).reshape(-1)
    nrm = float(np.linalg.norm(u))
    if abs(nrm - 1.0) > tol:
        raise ValueError(f"vector norm {nrm!r} is not 1 within {tol}")
    return u / nrm


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product with the first factor as the high-order index."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace(m, dim_a: int, dim_b: int, which: str = "B") -> np.ndarray:
    """Trace out one factor of a matrix on a bipartite space.

    ``which`` names the factor that is traced out: ``"A"`` (first,
    high-order) or ``"B"`` (second).  Satisfies
    ``partial_trace(kron(P, Q), dA, dB, "B") == trace(Q) * P``.
    """
    mat = as_matrix(m)
    d = dim_a * dim_b
    if mat.shape != (d, d):
        raise ValueError(
            f"matrix shape {mat.shape} does not match dims {dim_a}x{dim_b}"
        )
    t = mat.reshape(dim_a, dim_b, dim_a, dim_b)
    if which == "B":
        return np.einsum("abcb->ac", t)
    if which == "A":
        return np.einsum("abad->bd", t)
    raise ValueError("which must be 'A' or 'B'")


def eigh(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Returns ``(w, v)`` with orthonormal eigenvector columns such that
    ``H = v @ diag(w) @ v†``.
    """
    w, v = np.linalg.eigh(hermitian_part(h))
    return w[::-1].copy(), v[:, ::-1].copy()


def svd(a) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin singular value decomposition ``A = U @ diag(s) @ Vh``."""
    return np.linalg.svd(as_matrix(a), full_matrices=False)


def singular_values(a) -> np.ndarray:
    return np.linalg.svd(as_matrix(a), compute_uv=False)


def trace_norm(a) -> float:
    """Sum of singular values."""
    return float(singular_values(a).sum())


def spectral_norm(a) -> float:
    """Largest singular value."""
    s = singular_values(a)
    return float(s[0]) if s.size else 0.0


def rank_eps(a, tau: float = DEFAULT_RANK_TOL) -> int:
    """Numerical rank: singular values above ``tau`` times the largest."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    s = singular_values(a)
    if s.size == 0 or s[0] <= 0.0:
        return 0
    return int(np.count_nonzero(s > tau * s[0]))


def sqrtm_psd(p) -> np.ndarray:
    """Principal square root of a positive semidefinite matrix.

    Eigenvalues in ``[-PSD_REJECT, 0)`` are clipped; more negative ones are
    rejected.
    """
    w, v = np.linalg.eigh(hermitian_part(p))
    if w.min() < -PSD_REJECT:
        raise ValueError(
            f"matrix is not positive semidefinite (min eigenvalue {w.min():.3e})"
        )
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def fidelity(p, q) -> float:
    """Fidelity ``F(P, Q) = || sqrt(P) sqrt(Q) ||_1`` of PSD operators.

    Symmetric in its arguments and equal to ``tr sqrt(sqrt(Q) P sqrt(Q))``.
    """
    return trace_norm(sqrtm_psd(p) @ sqrtm_psd(q))


def purify(rho, ancilla_dim: int, *, tau: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Unit vector on system (x) ancilla whose first marginal is ``rho``.

    Built from the eigendecomposition: ``u = sum_i sqrt(p_i) x_i (x) e_i``
    with standard-basis ancilla vectors, so the output is deterministic.
    Requires ``ancilla_dim`` at least the numerical rank of ``rho``.
    """
    if ancilla_dim < 1:
        raise ValueError("ancilla_dim must be at least 1")
    rho = as_density(rho)
    n = rho.shape[0]
    w, v = eigh(rho)
    w = np.clip(w, 0.0, None)
    rank = int(np.count_nonzero(w > tau * max(w[0], 1e-300)))
    if ancilla_dim < rank:
        raise ValueError(
            f"ancilla dimension {ancilla_dim} is below the state rank {rank}"
        )
    cols = min(ancilla_dim, n)
    mat = np.zeros((n, ancilla_dim), dtype=complex)
    mat[:, :cols] = v[:, :cols] * np.sqrt(w[:cols])
    u = mat.reshape(-1)
    return u / np.linalg.norm(u)


def swap_and_projectors(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """SWAP operator and symmetric/antisymmetric projectors on n (x) n.

    ``SWAP (a (x) b) = b (x) a``; the projectors are ``(I ± SWAP) / 2``
    with traces ``n(n+1)/2`` and ``n(n-1)/2``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    swap = np.eye(n * n, dtype=complex).reshape(n, n, n, n)
    swap = swap.transpose(0, 1, 3, 2).reshape(n * n, n * n)
    eye = np.eye(n * n, dtype=complex)
    return swap, (eye + swap) / 2, (eye - swap) / 2
