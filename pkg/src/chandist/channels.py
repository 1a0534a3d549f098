"""Super-operator representations with lossless interconversion.

A super-operator maps matrices on an input space (dimension ``dim_in``) to
matrices on an output space (``dim_out``).  Three interchangeable
representations are kept on every :class:`SuperOp`:

* Kraus: pairs ``(A_j, B_j)`` with ``Phi(X) = sum_j A_j X B_j†``; the map is
  completely positive exactly when one may take ``B_j = A_j``.
* Choi: the block matrix ``J = sum_{a,b} Phi(|a><b|) (x) |a><b|`` on
  output (x) input, output factor high-order.  ``Phi`` is completely
  positive iff ``J`` is positive semidefinite, and the minimal number of
  Kraus pairs equals ``rank(J)``.
* Stinespring: operators ``A, B`` from the input space into
  output (x) environment with ``Phi(X) = Tr_env(A X B†)``; an environment
  of dimension ``rank(J)`` always suffices.

The ``vec`` convention is forced by the Choi ordering:
``vec(A) = sum_a (A e_a) (x) e_a`` stacks ``A`` row-major, and then
``J = sum_j vec(A_j) vec(B_j)†``.  Worked 2x2 example::

    A = [[a, b],    vec(A) = (a, b, c, d)
         [c, d]]
"""

from __future__ import annotations

import numpy as np

from .linalg import (
    DEFAULT_RANK_TOL,
    as_matrix,
    as_square,
    hermitian_part,
    rank_eps,
)


def vec(a) -> np.ndarray:
    """Row-major vectorization, output index high-order."""
    return as_matrix(a).reshape(-1)


def unvec(v, rows: int, cols: int) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape(rows, cols)


def _as_stack(ops) -> np.ndarray:
    """Stack a sequence of equally shaped matrices into an (r, m, n) array."""
    arr = np.asarray(ops, dtype=complex)
    if arr.ndim == 2:
        arr = arr[None, :, :]
    if arr.ndim != 3:
        raise ValueError(f"expected a list of matrices, got shape {arr.shape}")
    return arr


def choi_from_kraus(a_ops, b_ops=None) -> np.ndarray:
    """Choi matrix ``sum_j vec(A_j) vec(B_j)†`` of a Kraus pair list."""
    ka = _as_stack(a_ops)
    kb = ka if b_ops is None else _as_stack(b_ops)
    if ka.shape != kb.shape:
        raise ValueError("A and B Kraus lists must have matching shapes")
    r, m, n = ka.shape
    fa = ka.reshape(r, m * n)
    fb = kb.reshape(r, m * n)
    return fa.T @ fb.conj()


def kraus_from_choi(
    j, dim_in: int, dim_out: int, tau: float = DEFAULT_RANK_TOL
) -> tuple[np.ndarray, np.ndarray]:
    """Minimal Kraus pairs of a Choi matrix.

    The number of pairs equals the numerical rank of ``J``.  A positive
    semidefinite ``J`` yields ``B_j = A_j``; a Hermitian ``J`` yields the
    signed eigendecomposition ``B_j = sign(lambda_j) A_j`` (so differences
    of completely positive maps keep a real-signed form); anything else is
    factored through the singular value decomposition.

    Returns two stacked arrays of shape ``(r, dim_out, dim_in)``.
    """
    jm = as_square(j)
    d = dim_out * dim_in
    if jm.shape != (d, d):
        raise ValueError(
            f"Choi matrix shape {jm.shape} does not match dims "
            f"{dim_out}*{dim_in}"
        )
    scale = max(float(np.abs(jm).max()), 1e-300)
    herm_dev = float(np.abs(jm - jm.conj().T).max())
    if herm_dev <= 1e-12 * max(scale, 1.0):
        w, v = np.linalg.eigh(hermitian_part(jm))
        order = np.argsort(-np.abs(w))
        w, v = w[order], v[:, order]
        keep = np.abs(w) > tau * max(np.abs(w[0]), 1e-300) if w.size else np.array([], bool)
        w, v = w[keep], v[:, keep]
        a = np.sqrt(np.abs(w))[:, None, None] * v.T.reshape(-1, dim_out, dim_in)
        b = np.sign(w)[:, None, None] * a
        return a, b
    u, s, vh = np.linalg.svd(jm)
    keep = s > tau * max(s[0], 1e-300) if s.size else np.array([], bool)
    u, s, vh = u[:, keep], s[keep], vh[keep]
    root = np.sqrt(s)[:, None, None]
    a = root * u.T.reshape(-1, dim_out, dim_in)
    b = root * vh.conj().reshape(-1, dim_out, dim_in)
    return a, b


def stinespring_from_kraus(a_ops, b_ops=None) -> tuple[np.ndarray, np.ndarray]:
    """Stack Kraus pairs into Stinespring operators ``A = sum_j A_j (x) |j>``.

    The environment dimension equals the number of pairs, and
    ``Tr_env(A X B†) = sum_j A_j X B_j†``.
    """
    ka = _as_stack(a_ops)
    kb = ka if b_ops is None else _as_stack(b_ops)
    r, m, n = ka.shape
    a = ka.transpose(1, 0, 2).reshape(m * r, n)
    b = kb.transpose(1, 0, 2).reshape(m * r, n)
    return a, b


def kraus_from_stinespring(a, b, dim_out: int) -> tuple[np.ndarray, np.ndarray]:
    """Slice Stinespring operators back into Kraus pairs (one per env index)."""
    am = as_matrix(a)
    bm = as_matrix(b)
    if am.shape != bm.shape:
        raise ValueError("A and B must have matching shapes")
    rows, n = am.shape
    if rows % dim_out:
        raise ValueError(f"row count {rows} is not a multiple of dim_out {dim_out}")
    e = rows // dim_out
    ka = am.reshape(dim_out, e, n).transpose(1, 0, 2)
    kb = bm.reshape(dim_out, e, n).transpose(1, 0, 2)
    return ka.copy(), kb.copy()


class SuperOp:
    """A super-operator with eagerly cached Kraus, Choi, and Stinespring forms.

    Instances are immutable after construction; all conversions happen
    eagerly so concurrent reads never race.
    """

    def __init__(self, kraus_a: np.ndarray, kraus_b: np.ndarray | None,
                 dim_in: int, dim_out: int, choi: np.ndarray | None = None):
        ka = _as_stack(kraus_a)
        kb = ka if kraus_b is None else _as_stack(kraus_b)
        if ka.shape != kb.shape:
            raise ValueError("Kraus A/B stacks must have matching shapes")
        if ka.shape[1:] != (dim_out, dim_in):
            raise ValueError(
                f"Kraus operators of shape {ka.shape[1:]} do not match "
                f"dims {dim_out}x{dim_in}"
            )
        self.dim_in = int(dim_in)
        self.dim_out = int(dim_out)
        self.kraus_a = ka
        self.kraus_b = kb
        self.cp_symmetric = kraus_b is None or bool(
            ka.shape == kb.shape and np.array_equal(ka, kb)
        )
        self.choi = choi_from_kraus(ka, kb) if choi is None else as_square(choi)
        self.stine_a, self.stine_b = stinespring_from_kraus(ka, kb)
        self.dim_env = ka.shape[0]

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_kraus(cls, a_ops, b_ops=None) -> "SuperOp":
        ka = _as_stack(a_ops)
        kb = None if b_ops is None else _as_stack(b_ops)
        _, m, n = ka.shape
        return cls(ka, kb, dim_in=n, dim_out=m)

    @classmethod
    def from_choi(cls, j, dim_in: int, dim_out: int,
                  tau: float = DEFAULT_RANK_TOL) -> "SuperOp":
        a, b = kraus_from_choi(j, dim_in, dim_out, tau)
        if a.shape[0] == 0:
            a = np.zeros((1, dim_out, dim_in), dtype=complex)
            b = np.zeros((1, dim_out, dim_in), dtype=complex)
        return cls(a, b, dim_in=dim_in, dim_out=dim_out, choi=as_square(j))

    @classmethod
    def from_stinespring(cls, a, b=None, *, dim_out: int) -> "SuperOp":
        am = as_matrix(a)
        bm = am if b is None else as_matrix(b)
        ka, kb = kraus_from_stinespring(am, bm, dim_out)
        return cls(ka, None if b is None else kb, dim_in=am.shape[1],
                   dim_out=dim_out)

    @classmethod
    def identity(cls, n: int) -> "SuperOp":
        return cls.from_kraus([np.eye(n, dtype=complex)])

    @classmethod
    def zero(cls, dim_in: int, dim_out: int) -> "SuperOp":
        z = np.zeros((1, dim_out, dim_in), dtype=complex)
        return cls(z, z, dim_in=dim_in, dim_out=dim_out)

    # -- behaviour ---------------------------------------------------------

    def apply(self, x) -> np.ndarray:
        """Evaluate ``Phi(X) = sum_j A_j X B_j†``."""
        xm = as_matrix(x)
        if xm.shape != (self.dim_in, self.dim_in):
            raise ValueError(
                f"input shape {xm.shape} does not match dim_in {self.dim_in}"
            )
        return np.einsum("jmx,xy,jny->mn", self.kraus_a, xm,
                         self.kraus_b.conj(), optimize=True)

    __call__ = apply

    def apply_via_choi(self, x) -> np.ndarray:
        """Evaluate through the Choi matrix (consistency cross-check)."""
        xm = as_matrix(x)
        j4 = self.choi.reshape(self.dim_out, self.dim_in,
                               self.dim_out, self.dim_in)
        return np.einsum("iajb,ab->ij", j4, xm, optimize=True)

    def apply_via_stinespring(self, x) -> np.ndarray:
        """Evaluate as ``Tr_env(A X B†)`` (consistency cross-check)."""
        xm = as_matrix(x)
        big = self.stine_a @ xm @ self.stine_b.conj().T
        t = big.reshape(self.dim_out, self.dim_env,
                        self.dim_out, self.dim_env)
        return np.einsum("aebe->ab", t)

    def adjoint(self) -> "SuperOp":
        """Adjoint with respect to the Hilbert-Schmidt inner product."""
        ka = self.kraus_a.conj().transpose(0, 2, 1)
        kb = self.kraus_b.conj().transpose(0, 2, 1)
        return SuperOp(ka, None if self.cp_symmetric else kb,
                       dim_in=self.dim_out, dim_out=self.dim_in)

    def extend(self, k: int) -> "SuperOp":
        """Tensor with the identity on a k-dimensional ancilla (second factor)."""
        if k < 1:
            raise ValueError("ancilla dimension must be at least 1")
        eye = np.eye(k, dtype=complex)
        ka = np.einsum("jmn,kl->jmknl", self.kraus_a, eye).reshape(
            -1, self.dim_out * k, self.dim_in * k)
        kb = np.einsum("jmn,kl->jmknl", self.kraus_b, eye).reshape(
            -1, self.dim_out * k, self.dim_in * k)
        return SuperOp(ka, None if self.cp_symmetric else kb,
                       dim_in=self.dim_in * k, dim_out=self.dim_out * k)

    def choi_rank(self, tau: float = DEFAULT_RANK_TOL) -> int:
        return rank_eps(self.choi, tau)

    def is_cp(self, tol: float = 1e-9) -> bool:
        """Completely positive iff the Choi matrix is PSD (and Hermitian)."""
        scale = max(float(np.abs(self.choi).max()), 1.0)
        if float(np.abs(self.choi - self.choi.conj().T).max()) > tol * scale:
            return False
        w = np.linalg.eigvalsh(hermitian_part(self.choi))
        return bool(w.min() >= -tol)

    def is_trace_preserving(self, tol: float = 1e-9) -> bool:
        s = np.einsum("jmx,jmy->xy", self.kraus_a.conj(), self.kraus_b)
        return bool(np.abs(s - np.eye(self.dim_in)).max() <= tol)

    def is_admissible(self, tol: float = 1e-9) -> bool:
        return self.is_cp(tol) and self.is_trace_preserving(tol)

    def kraus_pairs(self) -> list[tuple[np.ndarray, np.ndarray]]:
        return [(self.kraus_a[j].copy(), self.kraus_b[j].copy())
                for j in range(self.kraus_a.shape[0])]

    def __repr__(self) -> str:  # pragma: no cover
        return (f"SuperOp(dim_in={self.dim_in}, dim_out={self.dim_out}, "
                f"kraus={self.kraus_a.shape[0]}, env={self.dim_env})")


def difference(phi0: SuperOp, phi1: SuperOp,
               tau: float = DEFAULT_RANK_TOL) -> SuperOp:
    """The map ``Phi_0 - Phi_1``, rebuilt from the Choi difference.

    For differences of completely positive maps the Choi matrix is
    Hermitian, so the Kraus form comes out with ``B_j = ±A_j``.
    """
    if (phi0.dim_in, phi0.dim_out) != (phi1.dim_in, phi1.dim_out):
        raise ValueError("super-operators must share input/output dimensions")
    return SuperOp.from_choi(phi0.choi - phi1.choi, phi0.dim_in,
                             phi0.dim_out, tau)


def complementary_pair(phi: SuperOp) -> tuple[SuperOp, SuperOp]:
    """Complementary maps of a Stinespring pair, tracing out the OUTPUT space.

    With ``Phi(X) = Tr_env(A X B†)``, returns the completely positive maps
    ``Psi_A(X) = Tr_out(A X A†)`` and ``Psi_B(X) = Tr_out(B X B†)`` from the
    input space into the environment.
    """
    if phi.dim_env < 1:
        raise ValueError("map has an empty environment")
    m, e, n = phi.dim_out, phi.dim_env, phi.dim_in
    slices_a = phi.stine_a.reshape(m, e, n)
    slices_b = phi.stine_b.reshape(m, e, n)
    return SuperOp.from_kraus(slices_a), SuperOp.from_kraus(slices_b)
