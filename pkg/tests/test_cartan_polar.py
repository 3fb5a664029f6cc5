import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sopq.cartan_polar import (
    AlgebraElement,
    assemble_k,
    bracket,
    bracket_relation_check,
    cartan_split,
    in_algebra,
    in_max_compact,
    k_block_iso,
    matrix_exp,
    matrix_log_spd,
    matrix_sqrt_spd,
    polar_decompose,
    random_algebra_element,
    random_compact,
    random_group_element,
    random_p_element,
    theta,
)
from sopq.errors import ComponentError, MalformedInputError, SpectralError
from sopq.indefinite_group import GroupElement, is_identity_component, is_member

from conftest import assert_close

SIGS = [(1, 1), (2, 1), (2, 2), (3, 1), (1, 3)]


def taylor_exp(X, terms=80):
    """Independent oracle: scaling and squaring over a plain Taylor series."""
    X = np.asarray(X, dtype=float)
    s = max(0, int(math.ceil(math.log2(max(np.linalg.norm(X), 1.0)))) + 1)
    Y = X / 2 ** s
    out = np.eye(len(X))
    term = np.eye(len(X))
    for k in range(1, terms):
        term = term @ Y / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


class TestAlgebra:
    def test_definition(self):
        X = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert in_algebra((1, 1), X)[0]
        assert not in_algebra((2, 0), X)[0]
        assert in_algebra((2, 0), np.array([[0.0, 1.0], [-1.0, 0.0]]))[0]

    def test_from_matrix_rejects(self):
        with pytest.raises(MalformedInputError):
            AlgebraElement.from_matrix((1, 1), np.eye(2))

    @pytest.mark.parametrize("sig", SIGS)
    def test_dimension(self, sig, rng):
        n = sum(sig)
        samples = np.array([random_algebra_element(sig, rng).entries.ravel() for _ in range(3 * n * n)])
        assert np.linalg.matrix_rank(samples) == n * (n - 1) // 2

    @pytest.mark.parametrize("sig", SIGS)
    def test_exp_lands_in_group(self, sig, rng):
        for _ in range(30):
            X = random_algebra_element(sig, rng, 0.5)
            A = matrix_exp(X.entries)
            assert is_member(sig, A, 1e-9).in_SO
            assert is_identity_component(sig, A)

    @pytest.mark.parametrize("sig", [(1, 1), (2, 1), (2, 2)])
    def test_exp_matches_oracle(self, sig, rng):
        for _ in range(20):
            X = random_algebra_element(sig, rng, 0.7).entries
            E = taylor_exp(X)
            assert np.max(np.abs(matrix_exp(X) - E)) <= 1e-10 * max(1.0, np.max(np.abs(E)))

    def test_linear_combinations(self, rng):
        X = random_algebra_element((2, 1), rng)
        Y = random_algebra_element((2, 1), rng)
        Z = X + 2.5 * Y
        assert Z.algebra_residual < 1e-12

    def test_theta_involution(self, rng):
        X = random_algebra_element((2, 2), rng)
        assert_close(theta(theta(X)).entries, X.entries, 0)


class TestCartanSplit:
    @pytest.mark.parametrize("sig", SIGS)
    def test_split(self, sig, rng):
        for _ in range(50):
            X = random_algebra_element(sig, rng)
            s = cartan_split(X)
            assert_close(s.k_part.entries + s.p_part.entries, X.entries, 1e-15)
            assert_close(theta(s.k_part).entries, s.k_part.entries, 0)
            assert_close(theta(s.p_part).entries, -s.p_part.entries, 0)
            assert s.k_part.algebra_residual < 1e-14 and s.p_part.algebra_residual < 1e-14

    def test_k_is_so_p_times_so_q(self, rng):
        X = random_algebra_element((2, 3), rng)
        k = cartan_split(X).k_part
        a, d = k_block_iso(k)
        assert a.shape == (2, 2) and d.shape == (3, 3)
        assert_close(assemble_k(a, d).entries, k.entries, 0)

    def test_k_block_rejects_p(self, rng):
        p = cartan_split(random_algebra_element((2, 1), rng)).p_part
        with pytest.raises(MalformedInputError):
            k_block_iso(p)

    def test_p_is_off_diagonal(self, rng):
        X = random_p_element((2, 3), rng).entries
        assert_close(X[:2, :2], np.zeros((2, 2)), 0)
        assert_close(X[2:, 2:], np.zeros((3, 3)), 0)
        assert_close(X, X.T, 0)


class TestBrackets:
    @pytest.mark.parametrize("sig", [(2, 1), (2, 2), (3, 2)])
    def test_relations(self, sig):
        r = bracket_relation_check(sig, samples=200, seed=1)
        assert r.ok
        assert r.witness is not None
        Z = bracket(*r.witness).entries
        assert np.max(np.abs(Z - Z.T)) > 1e-6

    @pytest.mark.parametrize("sig", [(3, 0), (1, 1)])
    def test_no_witness_when_p_is_abelian(self, sig):
        # p = 0 for definite forms; for (1,1) p is a line
        r = bracket_relation_check(sig, samples=20)
        assert r.ok and r.witness is None

    @pytest.mark.parametrize("sig", [(2, 1), (2, 2)])
    def test_bracket_stays_in_algebra(self, sig, rng):
        for _ in range(50):
            Z = bracket(random_algebra_element(sig, rng), random_algebra_element(sig, rng))
            assert Z.algebra_residual < 1e-12

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_jacobi(self, seed):
        rng = np.random.default_rng(seed)
        X, Y, Z = (random_algebra_element((2, 2), rng) for _ in range(3))
        total = bracket(X, bracket(Y, Z)) + bracket(Y, bracket(Z, X)) + bracket(Z, bracket(X, Y))
        assert np.max(np.abs(total.entries)) < 1e-10


class TestSpdFunctions:
    def test_sqrt_and_log(self, rng):
        for _ in range(30):
            G = rng.standard_normal((4, 4))
            S = G @ G.T + 0.1 * np.eye(4)
            R = matrix_sqrt_spd(S)
            assert_close(R @ R, S, 1e-10 * np.max(np.abs(S)))
            assert_close(taylor_exp(matrix_log_spd(S)), S, 1e-9 * np.max(np.abs(S)))

    def test_rejects_indefinite(self):
        with pytest.raises(SpectralError) as info:
            matrix_log_spd(np.diag([1.0, -1.0]))
        assert info.value.eigenvalue == pytest.approx(-1.0)

    def test_rejects_non_symmetric(self):
        with pytest.raises(SpectralError):
            matrix_sqrt_spd(np.array([[1.0, 1.0], [0.0, 1.0]]))


class TestPolar:
    @pytest.mark.parametrize("sig", [(1, 1), (2, 1), (2, 2), (3, 1)])
    def test_round_trip(self, sig, rng):
        for _ in range(100):
            K = random_compact(sig, rng)
            P = random_p_element(sig, rng, 2.0)
            A = GroupElement.from_matrix(sig, K @ matrix_exp(P.entries))
            res = polar_decompose(A)
            assert res.reconstruction_residual <= 1e-8
            assert in_max_compact(sig, res.compact_factor, 1e-8)
            assert res.log_symmetric.algebra_residual <= 1e-8
            # uniqueness of the decomposition
            assert_close(res.compact_factor.entries, K, 1e-8)
            assert_close(res.log_symmetric.entries, P.entries, 1e-8)

    def test_identity(self):
        res = polar_decompose(GroupElement.identity((2, 1)))
        assert_close(res.compact_factor.entries, np.eye(3), 1e-15)
        assert_close(res.log_symmetric.entries, np.zeros((3, 3)), 1e-15)

    def test_other_component_rejected(self):
        M = -np.eye(2) @ matrix_exp(np.array([[0.0, 0.4], [0.4, 0.0]]))
        A = GroupElement.from_matrix((1, 1), M)
        assert not is_identity_component((1, 1), A)
        with pytest.raises(ComponentError):
            polar_decompose(A)

    def test_compact_membership(self, rng):
        assert in_max_compact((2, 2), random_compact((2, 2), rng))
        assert not in_max_compact((1, 1), matrix_exp(np.array([[0.0, 1.0], [1.0, 0.0]])))
        # det -1 block fails
        assert not in_max_compact((2, 1), np.diag([1.0, -1.0, -1.0]))

    def test_random_group_element_in_identity_component(self, rng):
        for sig in SIGS:
            A = random_group_element(sig, rng)
            assert is_identity_component(sig, A)

    def test_rejects_raw_matrix(self):
        with pytest.raises(MalformedInputError):
            polar_decompose(np.eye(2))
