import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chandist import linalg
from chandist.channels import (
    SuperOp,
    choi_from_kraus,
    complementary_pair,
    difference,
    kraus_from_choi,
    kraus_from_stinespring,
    stinespring_from_kraus,
    vec,
)
from chandist.families import pauli_pair, werner_holevo_pair
from chandist.sampling import random_channel, random_cp_map, random_density


def random_matrix(n, m, rng):
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


def transpose_map(n):
    swap, _, _ = linalg.swap_and_projectors(n)
    return SuperOp.from_choi(swap, n, n)


class TestVecConvention:
    def test_vec_is_row_major(self):
        a = np.array([[1, 2], [3, 4]], dtype=complex)
        assert np.array_equal(vec(a), np.array([1, 2, 3, 4], dtype=complex))

    def test_choi_matches_definition(self):
        # J = sum_ab Phi(E_ab) (x) E_ab with the output factor high-order
        rng = np.random.default_rng(0)
        phi = random_cp_map(2, 3, 2, rng)
        n, m = phi.dim_in, phi.dim_out
        j = np.zeros((m * n, m * n), dtype=complex)
        for a in range(n):
            for b in range(n):
                e_ab = np.zeros((n, n), dtype=complex)
                e_ab[a, b] = 1.0
                out = phi(e_ab)
                block = np.zeros((n, n), dtype=complex)
                block[a, b] = 1.0
                j += np.kron(out, block)
        assert np.allclose(j, phi.choi, atol=1e-12)


class TestChoiFromKraus:
    def test_identity_channel(self):
        n = 3
        j = choi_from_kraus([np.eye(n)])
        # sum_ab |aa><bb|: rank one with trace n
        assert linalg.rank_eps(j) == 1
        assert np.trace(j).real == pytest.approx(n)

    def test_transpose_is_swap(self):
        # evaluate Phi(E_ab) = E_ba and sum: the result is the SWAP operator
        n = 3
        swap, _, _ = linalg.swap_and_projectors(n)
        j = np.zeros((n * n, n * n), dtype=complex)
        for a in range(n):
            for b in range(n):
                e_ab = np.zeros((n, n), dtype=complex)
                e_ab[a, b] = 1.0
                j += np.kron(e_ab.T, e_ab)
        assert np.allclose(j, swap)
        assert np.allclose(transpose_map(n).choi, swap, atol=1e-12)

    def test_werner_holevo_choi_is_projector(self):
        for n in (2, 3):
            phi0, phi1 = werner_holevo_pair(n)
            _, sym, anti = linalg.swap_and_projectors(n)
            assert np.allclose(phi0.choi, 2.0 / (n + 1) * sym, atol=1e-10)
            assert np.allclose(phi1.choi, 2.0 / (n - 1) * anti, atol=1e-10)


class TestKrausFromChoi:
    def test_identity_channel_roundtrip(self):
        n = 3
        ident = SuperOp.identity(n)
        a, b = kraus_from_choi(ident.choi, n, n)
        assert a.shape[0] == 1
        # single pair proportional to the identity (up to phase)
        assert np.allclose(np.abs(a[0]), np.eye(n), atol=1e-10)
        assert np.allclose(choi_from_kraus(a, b), ident.choi, atol=1e-9)

    def test_antisymmetric_rank_one(self):
        # 2 Pi_anti at n=2 factors into a single antisymmetric Kraus operator
        _, _, anti = linalg.swap_and_projectors(2)
        a, b = kraus_from_choi(2.0 * anti, 2, 2)
        assert a.shape[0] == 1
        target = np.array([[0, 1], [-1, 0]], dtype=complex)
        overlap = abs(np.vdot(a[0], target)) / (
            np.linalg.norm(a[0]) * np.linalg.norm(target))
        assert overlap == pytest.approx(1.0, abs=1e-10)

    def test_random_cp_roundtrip(self):
        phi = random_cp_map(2, 2, 2, np.random.default_rng(1))
        a, b = kraus_from_choi(phi.choi, 2, 2)
        assert a.shape[0] == 2
        assert np.allclose(a, b)  # PSD Choi gives a CP factorization
        assert np.allclose(choi_from_kraus(a, b), phi.choi, atol=1e-9)

    def test_hermitian_signed_form(self):
        phi0, phi1 = pauli_pair()
        delta = difference(phi0, phi1)
        for a, b in delta.kraus_pairs():
            # signed eigendecomposition: B_j = ±A_j
            assert (np.allclose(a, b, atol=1e-10)
                    or np.allclose(a, -b, atol=1e-10))

    def test_general_svd_branch(self):
        rng = np.random.default_rng(2)
        j = random_matrix(4, 4, rng)  # no symmetry at all
        a, b = kraus_from_choi(j, 2, 2)
        assert np.allclose(choi_from_kraus(a, b), j, atol=1e-9)


class TestStinespring:
    def test_single_pair(self):
        a = np.array([[1.0, 0], [0, 1.0]], dtype=complex)
        sa, sb = stinespring_from_kraus([a])
        assert sa.shape == (2, 2)
        assert np.allclose(sa, a)

    def test_identity_reconstruction(self):
        ident = SuperOp.identity(2)
        x = random_matrix(2, 2, np.random.default_rng(3))
        assert np.allclose(ident.apply_via_stinespring(x), x, atol=1e-12)

    def test_three_pair_reconstruction(self):
        phi = random_cp_map(3, 2, 3, np.random.default_rng(4))
        x = random_matrix(3, 3, np.random.default_rng(5))
        assert np.linalg.norm(phi.apply_via_stinespring(x) - phi(x)) <= 1e-9

    def test_slicing_roundtrip(self):
        phi = random_cp_map(2, 3, 2, np.random.default_rng(6))
        ka, kb = kraus_from_stinespring(phi.stine_a, phi.stine_b, phi.dim_out)
        assert np.allclose(ka, phi.kraus_a)
        assert np.allclose(kb, phi.kraus_b)


class TestComplementaryPair:
    def test_identity_channel_traces(self):
        ident = SuperOp.identity(3)
        psi_a, psi_b = complementary_pair(ident)
        x = random_matrix(3, 3, np.random.default_rng(7))
        # environment is one-dimensional: the complementary output is tr(X)
        assert psi_a(x).shape == (1, 1)
        assert psi_a(x)[0, 0] == pytest.approx(np.trace(x))

    def test_unitary_channel_traces(self):
        rng = np.random.default_rng(8)
        q, _ = np.linalg.qr(random_matrix(3, 3, rng))
        phi = SuperOp.from_kraus([q])
        psi_a, _ = complementary_pair(phi)
        x = random_matrix(3, 3, rng)
        assert psi_a(x)[0, 0] == pytest.approx(np.trace(x))

    def test_complementary_is_cp(self):
        phi = random_cp_map(3, 2, 2, np.random.default_rng(9))
        psi_a, psi_b = complementary_pair(phi)
        for psi in (psi_a, psi_b):
            w = np.linalg.eigvalsh(linalg.hermitian_part(psi.choi))
            assert w.min() >= -1e-10

    def test_defining_identity(self):
        # Psi_A(X) = Tr_out(A X A†)
        phi = random_cp_map(2, 3, 2, np.random.default_rng(10))
        psi_a, _ = complementary_pair(phi)
        x = random_matrix(2, 2, np.random.default_rng(11))
        big = phi.stine_a @ x @ phi.stine_a.conj().T
        expected = linalg.partial_trace(big, phi.dim_out, phi.dim_env, "A")
        assert np.allclose(psi_a(x), expected, atol=1e-12)


class TestDifference:
    def test_zero_difference(self):
        phi = random_channel(2, 2, 2, np.random.default_rng(12))
        delta = difference(phi, phi)
        assert delta.choi_rank() == 0
        assert np.allclose(delta.choi, 0)

    def test_pauli_difference_rank_four(self):
        # vec(I), vec(sx), vec(sy), vec(sz) are orthogonal, so the rank is 4
        phi0, phi1 = pauli_pair()
        delta = difference(phi0, phi1)
        assert delta.choi_rank() == 4
        w = np.linalg.eigvalsh(linalg.hermitian_part(delta.choi))
        assert np.allclose(sorted(w), [-2 / 3, -2 / 3, -2 / 3, 2], atol=1e-12)

    def test_werner_holevo_difference(self):
        for n in (2, 3):
            phi0, phi1 = werner_holevo_pair(n)
            delta = difference(phi0, phi1)
            _, sym, anti = linalg.swap_and_projectors(n)
            expected = 2.0 / (n + 1) * sym - 2.0 / (n - 1) * anti
            assert np.allclose(delta.choi, expected, atol=1e-10)
            assert delta.choi_rank() == n * n

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            difference(SuperOp.identity(2), SuperOp.identity(3))


class TestAdjoint:
    def test_identity(self):
        ident = SuperOp.identity(2)
        x = random_matrix(2, 2, np.random.default_rng(13))
        assert np.allclose(ident.adjoint()(x), x)

    def test_tp_adjoint_is_unital(self):
        phi = random_channel(3, 2, 3, np.random.default_rng(14))
        assert np.allclose(phi.adjoint()(np.eye(2)), np.eye(3), atol=1e-10)

    def test_inner_product_identity(self):
        rng = np.random.default_rng(15)
        phi = random_cp_map(2, 3, 2, rng)
        adj = phi.adjoint()
        for _ in range(10):
            x = random_matrix(2, 2, rng)
            y = random_matrix(3, 3, rng)
            lhs = np.vdot(phi(x), y)
            rhs = np.vdot(x, adj(y))
            assert lhs == pytest.approx(rhs, abs=1e-9)


class TestCpAndTp:
    def test_werner_holevo_admissible(self):
        for n in (2, 3):
            phi0, phi1 = werner_holevo_pair(n)
            assert phi0.is_cp() and phi0.is_trace_preserving()
            assert phi1.is_cp() and phi1.is_trace_preserving()

    def test_transpose_not_cp(self):
        # the Choi matrix is SWAP, which has eigenvalue -1
        t = transpose_map(2)
        assert not t.is_cp()
        assert np.linalg.eigvalsh(linalg.hermitian_part(t.choi)).min() == (
            pytest.approx(-1.0))

    def test_difference_not_tp_but_trace_annihilating(self):
        rng = np.random.default_rng(16)
        phi0 = random_channel(2, 2, 2, rng)
        phi1 = random_channel(2, 2, 2, rng)
        delta = difference(phi0, phi1)
        assert not delta.is_trace_preserving()
        rho = random_density(2, rng)
        assert np.trace(delta(rho)) == pytest.approx(0.0, abs=1e-10)


class TestApply:
    def test_identity(self):
        x = random_matrix(2, 2, np.random.default_rng(17))
        assert np.allclose(SuperOp.identity(2)(x), x)

    def test_transpose(self):
        t = transpose_map(2)
        e01 = np.array([[0, 1], [0, 0]], dtype=complex)
        assert np.allclose(t(e01), e01.T, atol=1e-12)

    def test_pauli_twirl_is_unital(self):
        # direct sum over the three conjugations fixes the maximally mixed state
        _, phi1 = pauli_pair()
        assert np.allclose(phi1(np.eye(2) / 2), np.eye(2) / 2, atol=1e-12)

    def test_representations_agree(self):
        rng = np.random.default_rng(18)
        phi = random_cp_map(3, 2, 4, rng)
        x = random_matrix(3, 3, rng)
        via_kraus = phi(x)
        assert np.linalg.norm(via_kraus - phi.apply_via_choi(x)) <= 1e-9
        assert np.linalg.norm(via_kraus - phi.apply_via_stinespring(x)) <= 1e-9

    def test_dimension_check(self):
        with pytest.raises(ValueError):
            SuperOp.identity(2)(np.eye(3))


class TestRoundtripCorpus:
    @given(st.integers(0, 10 ** 6))
    @settings(max_examples=20, deadline=None)
    def test_kraus_choi_kraus_roundtrip(self, seed):
        rng = np.random.default_rng(seed)
        dim_in = int(rng.integers(2, 4))
        dim_out = int(rng.integers(2, 4))
        rank = int(rng.integers(1, 5))
        phi = random_cp_map(dim_in, dim_out, rank, rng)
        a, b = kraus_from_choi(phi.choi, dim_in, dim_out)
        j2 = choi_from_kraus(a, b)
        assert np.linalg.norm(j2 - phi.choi) <= 1e-9 * max(
            np.linalg.norm(phi.choi), 1)
        a2, b2 = kraus_from_choi(j2, dim_in, dim_out)
        assert np.linalg.norm(choi_from_kraus(a2, b2) - phi.choi) <= 1e-9 * max(
            np.linalg.norm(phi.choi), 1)

    @given(st.integers(0, 10 ** 6))
    @settings(max_examples=20, deadline=None)
    def test_minimal_kraus_count_is_planted_rank(self, seed):
        rng = np.random.default_rng(seed)
        rank = int(rng.integers(1, 5))
        phi = random_cp_map(2, 2, rank, rng)
        a, _ = kraus_from_choi(phi.choi, 2, 2)
        assert a.shape[0] == rank == phi.choi_rank()

    def test_admissible_choi_form(self):
        # trace preservation shows up as an identity partial trace of Choi
        phi = random_channel(3, 2, 3, np.random.default_rng(19))
        reduced = linalg.partial_trace(phi.choi, 2, 3, "A")
        assert np.allclose(reduced, np.eye(3), atol=1e-10)
        assert np.linalg.eigvalsh(linalg.hermitian_part(phi.choi)).min() >= -1e-10
