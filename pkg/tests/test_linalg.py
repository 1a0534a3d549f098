import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chandist import linalg

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)


def rng_for(seed):
    return np.random.default_rng(seed)


def random_matrix(n, m, rng):
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


def random_hermitian(n, rng):
    return linalg.hermitian_part(random_matrix(n, n, rng))


def random_psd(n, rng, rank=None):
    g = random_matrix(n, rank or n, rng)
    return g @ g.conj().T


def random_density(n, rng, rank=None):
    p = random_psd(n, rng, rank)
    return linalg.as_density(p / np.trace(p).real)


class TestTensorProduct:
    def test_identity_case(self):
        out = linalg.tensor_product(np.eye(2), np.eye(2))
        assert np.array_equal(out, np.eye(4))

    def test_diagonal_case(self):
        out = linalg.tensor_product(np.diag([1.0, 2.0]), np.diag([3.0, 4.0]))
        assert np.allclose(out, np.diag([3.0, 4.0, 6.0, 8.0]))

    def test_basis_vector_routing(self):
        # sigma_x (x) sigma_x sends index 0 (|00>) to index 3 (|11>)
        xx = linalg.tensor_product(SIGMA_X, SIGMA_X)
        e00 = np.zeros(4)
        e00[0] = 1.0
        out = xx @ e00
        expected = np.zeros(4)
        expected[3] = 1.0
        assert np.allclose(out, expected)

    @given(st.integers(0, 1000))
    @settings(max_examples=20, deadline=None)
    def test_index_convention(self, seed):
        rng = rng_for(seed)
        a = random_matrix(2, 3, rng)
        b = random_matrix(3, 2, rng)
        out = linalg.tensor_product(a, b)
        for i in range(2):
            for j in range(3):
                for k in range(3):
                    for l in range(2):
                        assert out[i * 3 + k, j * 2 + l] == pytest.approx(
                            a[i, j] * b[k, l], abs=1e-14)


class TestPartialTrace:
    def test_product_case(self):
        rng = rng_for(1)
        p = random_matrix(2, 2, rng)
        q = random_matrix(2, 2, rng)
        out = linalg.partial_trace(np.kron(p, q), 2, 2, "B")
        assert np.allclose(out, np.trace(q) * p)
        out_a = linalg.partial_trace(np.kron(p, q), 2, 2, "A")
        assert np.allclose(out_a, np.trace(p) * q)

    def test_identity(self):
        assert np.allclose(linalg.partial_trace(np.eye(4), 2, 2, "A"),
                           2 * np.eye(2))

    def test_bell_state_marginal(self):
        # expansion in the computational basis: marginal of |00>+|11> is I/2
        phi = np.zeros(4, dtype=complex)
        phi[0] = phi[3] = 1 / np.sqrt(2)
        rho = np.outer(phi, phi.conj())
        assert np.allclose(linalg.partial_trace(rho, 2, 2, "B"), np.eye(2) / 2)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            linalg.partial_trace(np.eye(5), 2, 2, "B")

    def test_linear(self):
        rng = rng_for(2)
        m1 = random_matrix(6, 6, rng)
        m2 = random_matrix(6, 6, rng)
        lhs = linalg.partial_trace(2 * m1 - 3 * m2, 2, 3, "B")
        rhs = (2 * linalg.partial_trace(m1, 2, 3, "B")
               - 3 * linalg.partial_trace(m2, 2, 3, "B"))
        assert np.allclose(lhs, rhs)


class TestEigh:
    def test_descending(self):
        w, _ = linalg.eigh(np.diag([3.0, 1.0, 2.0]))
        assert np.allclose(w, [3.0, 2.0, 1.0])

    def test_sigma_x(self):
        w, v = linalg.eigh(SIGMA_X)
        assert np.allclose(w, [1.0, -1.0])
        # eigenvectors are (|0> ± |1>)/sqrt(2) up to phase
        assert np.allclose(np.abs(v), np.full((2, 2), 1 / np.sqrt(2)))

    @given(st.integers(0, 1000))
    @settings(max_examples=25, deadline=None)
    def test_reconstruction(self, seed):
        h = random_hermitian(5, rng_for(seed))
        w, v = linalg.eigh(h)
        rebuilt = (v * w) @ v.conj().T
        assert np.linalg.norm(rebuilt - h) <= 1e-10 * max(np.linalg.norm(h), 1)
        assert np.allclose(v.conj().T @ v, np.eye(5), atol=1e-12)


class TestSvdAndNorms:
    def test_singular_values_diag(self):
        _, s, _ = linalg.svd(np.diag([1.0, -2.0]))
        assert np.allclose(s, [2.0, 1.0])
        assert linalg.trace_norm(np.diag([1.0, -2.0])) == pytest.approx(3.0)
        assert linalg.spectral_norm(np.diag([1.0, -2.0])) == pytest.approx(2.0)

    def test_unitary_singular_values(self):
        rng = rng_for(3)
        q, _ = np.linalg.qr(random_matrix(4, 4, rng))
        assert np.allclose(linalg.singular_values(q), np.ones(4))
        assert linalg.trace_norm(q) == pytest.approx(4.0)

    def test_rank_one(self):
        rng = rng_for(4)
        u = random_matrix(3, 1, rng).reshape(-1)
        v = random_matrix(3, 1, rng).reshape(-1)
        m = np.outer(u, v.conj())
        s = linalg.singular_values(m)
        assert s[0] == pytest.approx(np.linalg.norm(u) * np.linalg.norm(v))
        assert np.all(s[1:] < 1e-12)
        # trace and spectral norms agree on rank one
        assert linalg.trace_norm(m) == pytest.approx(linalg.spectral_norm(m))

    def test_reconstruction(self):
        a = random_matrix(4, 3, rng_for(5))
        u, s, vh = linalg.svd(a)
        assert np.linalg.norm((u * s) @ vh - a) <= 1e-10 * np.linalg.norm(a)

    def test_projector_spectral_norm(self):
        proj = np.diag([1.0, 1.0, 0.0])
        assert linalg.spectral_norm(proj) == pytest.approx(1.0)

    def test_orthogonal_pure_states(self):
        r0 = np.diag([1.0, 0.0])
        r1 = np.diag([0.0, 1.0])
        assert linalg.trace_norm(r0 - r1) == pytest.approx(2.0)

    @given(st.integers(0, 1000))
    @settings(max_examples=25, deadline=None)
    def test_norm_ordering(self, seed):
        a = random_matrix(4, 4, rng_for(seed))
        assert linalg.trace_norm(a) >= linalg.spectral_norm(a) >= 0.0

    @given(st.integers(0, 1000))
    @settings(max_examples=10, deadline=None)
    def test_unitary_invariance(self, seed):
        rng = rng_for(seed)
        a = random_matrix(4, 4, rng)
        u, _ = np.linalg.qr(random_matrix(4, 4, rng))
        v, _ = np.linalg.qr(random_matrix(4, 4, rng))
        assert linalg.trace_norm(u @ a @ v) == pytest.approx(
            linalg.trace_norm(a), abs=1e-9)


class TestSqrtmPsd:
    def test_diag(self):
        assert np.allclose(linalg.sqrtm_psd(np.diag([4.0, 9.0])),
                           np.diag([2.0, 3.0]))

    def test_projector(self):
        proj = np.diag([1.0, 1.0, 0.0])
        assert np.allclose(linalg.sqrtm_psd(proj), proj)

    @given(st.integers(0, 1000))
    @settings(max_examples=25, deadline=None)
    def test_square_residual(self, seed):
        p = random_psd(4, rng_for(seed))
        root = linalg.sqrtm_psd(p)
        assert np.linalg.norm(root @ root - p) <= 1e-9 * np.linalg.norm(p)

    def test_rejects_indefinite(self):
        with pytest.raises(ValueError):
            linalg.sqrtm_psd(np.diag([1.0, -0.5]))


class TestFidelity:
    def test_self_fidelity_is_trace(self):
        rho = random_density(3, rng_for(6))
        assert linalg.fidelity(rho, rho) == pytest.approx(1.0, abs=1e-10)

    def test_pure_states_overlap(self):
        rng = rng_for(7)
        u = random_matrix(3, 1, rng).reshape(-1)
        u /= np.linalg.norm(u)
        v = random_matrix(3, 1, rng).reshape(-1)
        v /= np.linalg.norm(v)
        f = linalg.fidelity(np.outer(u, u.conj()), np.outer(v, v.conj()))
        assert f == pytest.approx(abs(np.vdot(u, v)), abs=1e-10)

    @given(st.integers(0, 1000))
    @settings(max_examples=10, deadline=None)
    def test_two_formulas_agree(self, seed):
        rng = rng_for(seed)
        p = random_psd(3, rng)
        q = random_psd(3, rng)
        direct = linalg.fidelity(p, q)
        sq = linalg.sqrtm_psd(q)
        alt = float(np.trace(linalg.sqrtm_psd(sq @ p @ sq)).real)
        assert direct == pytest.approx(alt, abs=1e-9)

    @given(st.integers(0, 1000))
    @settings(max_examples=10, deadline=None)
    def test_symmetric_and_bounded(self, seed):
        rng = rng_for(seed)
        p = random_density(3, rng)
        q = random_density(3, rng)
        assert linalg.fidelity(p, q) == pytest.approx(linalg.fidelity(q, p),
                                                      abs=1e-10)
        assert -1e-12 <= linalg.fidelity(p, q) <= 1.0 + 1e-12

    def test_rejects_non_psd(self):
        with pytest.raises(ValueError):
            linalg.fidelity(np.diag([1.0, -1.0]), np.eye(2))


class TestPurify:
    def test_pure_state(self):
        u = linalg.purify(np.diag([1.0, 0.0]), 1)
        expected = np.zeros(2, dtype=complex)
        expected[0] = 1.0
        assert np.allclose(np.abs(u), np.abs(expected))

    def test_maximally_mixed(self):
        u = linalg.purify(np.eye(2) / 2, 2)
        rho = linalg.partial_trace(np.outer(u, u.conj()), 2, 2, "B")
        assert np.allclose(rho, np.eye(2) / 2, atol=1e-12)

    def test_rank_two_on_dim_three(self):
        rho = random_density(3, rng_for(8), rank=2)
        u = linalg.purify(rho, 2)
        back = linalg.partial_trace(np.outer(u, u.conj()), 3, 2, "B")
        assert np.linalg.norm(back - rho) <= 1e-9

    def test_ancilla_too_small(self):
        with pytest.raises(ValueError):
            linalg.purify(np.eye(3) / 3, 2)

    @given(st.integers(0, 1000), st.integers(2, 4))
    @settings(max_examples=20, deadline=None)
    def test_roundtrip(self, seed, n):
        rho = random_density(n, rng_for(seed))
        u = linalg.purify(rho, n)
        back = linalg.partial_trace(np.outer(u, u.conj()), n, n, "B")
        assert np.linalg.norm(back - rho) <= 1e-9


class TestRankEps:
    def test_zero_matrix(self):
        assert linalg.rank_eps(np.zeros((3, 3))) == 0

    def test_projector(self):
        assert linalg.rank_eps(np.diag([1.0, 1.0, 1.0, 0.0])) == 3

    def test_threshold(self):
        assert linalg.rank_eps(np.diag([1.0, 1e-15]), tau=1e-9) == 1


class TestSwapAndProjectors:
    def test_traces_n2(self):
        _, sym, anti = linalg.swap_and_projectors(2)
        assert np.trace(sym).real == pytest.approx(3.0)
        assert np.trace(anti).real == pytest.approx(1.0)

    def test_orthogonal_idempotent(self):
        swap, sym, anti = linalg.swap_and_projectors(3)
        assert np.allclose(sym @ anti, 0)
        assert np.allclose(sym @ sym, sym)
        assert np.allclose(anti @ anti, anti)
        assert np.allclose(sym + anti, np.eye(9))
        assert np.allclose(swap, swap.conj().T)

    def test_swap_action(self):
        swap, _, _ = linalg.swap_and_projectors(3)
        rng = rng_for(9)
        a = random_matrix(3, 1, rng).reshape(-1)
        b = random_matrix(3, 1, rng).reshape(-1)
        assert np.allclose(swap @ np.kron(a, b), np.kron(b, a))


class TestValidators:
    def test_as_density_clips_roundoff(self):
        rho = np.diag([1.0 + 5e-11, -5e-11])
        out = linalg.as_density(rho)
        assert np.trace(out).real == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.eigvalsh(out).min() >= 0

    def test_as_density_rejects_negative(self):
        with pytest.raises(ValueError):
            linalg.as_density(np.diag([1.1, -0.1]))

    def test_as_density_rejects_bad_trace(self):
        with pytest.raises(ValueError):
            linalg.as_density(np.eye(2))

    def test_as_unit_vector(self):
        with pytest.raises(ValueError):
            linalg.as_unit_vector(np.array([1.0, 1.0]))

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            linalg.as_matrix(np.array([[np.nan, 0], [0, 1]]))
