import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sopq.cartan_polar import random_group_element
from sopq.errors import InvalidSignatureError, MalformedInputError, MembershipError
from sopq.indefinite_group import (
    GroupElement,
    Signature,
    boost,
    column_orthogonality_report,
    embed_first,
    embed_last,
    form_matrix,
    inner,
    is_identity_component,
    is_member,
    rotation,
)

from conftest import assert_close

SMALL_SIGS = [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1), (3, 2)]


def boost_matrix(t):
    return np.array([[math.cosh(t), math.sinh(t)], [math.sinh(t), math.cosh(t)]])


class TestSignature:
    def test_swap_is_involutive(self):
        s = Signature(3, 1)
        assert s.swap() == Signature(1, 3)
        assert s.swap().swap() == s
        assert s.n == 4

    @pytest.mark.parametrize("bad", [(-1, 0), (0, -2), (1.5, 1), (True, 1)])
    def test_rejects_invalid(self, bad):
        with pytest.raises(InvalidSignatureError):
            Signature(*bad)

    def test_parse(self):
        assert Signature.parse("2,1") == Signature(2, 1)
        with pytest.raises(MalformedInputError):
            Signature.parse("2;1")


class TestFormMatrix:
    def test_definite_is_identity(self):
        assert_close(form_matrix((2, 0)), np.eye(2), 0)

    def test_lorentzian(self):
        assert_close(form_matrix((1, 1)), np.diag([1.0, -1.0]), 0)

    def test_empty(self):
        assert form_matrix((0, 0)).shape == (0, 0)

    @pytest.mark.parametrize("sig", SMALL_SIGS)
    def test_symmetric_involution(self, sig):
        I = form_matrix(sig)
        assert np.array_equal(I, I.T)
        assert np.array_equal(I @ I, np.eye(sum(sig)))


class TestInner:
    def test_examples(self):
        assert inner((1, 1), (1, 0), (0, 1)) == 0
        assert inner((1, 1), (0, 1), (0, 1)) == -1
        # 9 + 16 - 25
        assert inner((2, 1), (3, 4, 5), (3, 4, 5)) == 0

    def test_length_mismatch(self):
        with pytest.raises(MalformedInputError):
            inner((2, 1), (1, 2), (1, 2, 3))

    @settings(max_examples=200, deadline=None)
    @given(
        st.lists(st.integers(-50, 50), min_size=4, max_size=4),
        st.lists(st.integers(-50, 50), min_size=4, max_size=4),
        st.lists(st.integers(-50, 50), min_size=4, max_size=4),
        st.integers(-5, 5),
    )
    def test_symmetric_bilinear(self, x, y, z, c):
        sig = (2, 2)
        assert inner(sig, x, y) == inner(sig, y, x)
        lhs = inner(sig, np.add(x, np.multiply(c, z)), y)
        assert lhs == inner(sig, x, y) + c * inner(sig, z, y)


class TestIsMember:
    def test_identity(self):
        assert is_member((2, 1), np.eye(3)).in_SO

    def test_reflection_in_O_not_SO(self):
        r = is_member((2, 1), np.diag([1.0, 1.0, -1.0]))
        assert r.in_O and not r.in_SO
        assert r.det_residual == pytest.approx(-2.0)

    def test_boost(self):
        assert is_member((1, 1), boost_matrix(0.7)).in_SO

    def test_rotation_not_in_lorentz(self):
        assert not is_member((1, 1), rotation(0.3, 2)).in_O

    @pytest.mark.parametrize("M", [np.eye(2), np.zeros((3, 2)), np.zeros(3)])
    def test_wrong_shape(self, M):
        with pytest.raises(MalformedInputError):
            is_member((2, 1), M)

    def test_group_element_rejects_non_member(self):
        with pytest.raises(MembershipError) as info:
            GroupElement.from_matrix((1, 1), rotation(0.3, 2))
        assert info.value.residual > 0

    def test_entries_read_only(self):
        A = GroupElement.identity((2, 1))
        with pytest.raises(ValueError):
            A.entries[0, 0] = 2.0

    @pytest.mark.parametrize("sig", SMALL_SIGS)
    def test_closure(self, sig, rng):
        for _ in range(50):
            A = random_group_element(sig, rng)
            B = random_group_element(sig, rng)
            C = A @ B
            bound = 3 * max(A.membership_residual, B.membership_residual, 1e-15)
            scale = max(1.0, np.max(np.abs(A.entries)) * np.max(np.abs(B.entries)))
            assert C.membership_residual <= bound * scale ** 2 * sum(sig)

    @pytest.mark.parametrize("sig", SMALL_SIGS)
    def test_inverse_formula(self, sig, rng):
        for _ in range(50):
            A = random_group_element(sig, rng)
            assert_close(A.inverse().entries, np.linalg.inv(A.entries), 1e-9)
            assert_close((A.inverse() @ A).entries, np.eye(sum(sig)), 1e-9)

    def test_json_round_trip(self):
        A = boost(0.4, (2, 1))
        B = GroupElement.from_dict(A.to_dict())
        assert_close(A.entries, B.entries, 0)
        assert B.sig == Signature(2, 1)


class TestIdentityComponent:
    def test_identity(self):
        assert is_identity_component((2, 1), np.eye(3))

    def test_boost(self):
        assert is_identity_component((1, 1), boost(0.7).entries)

    def test_other_component(self):
        t = 0.7
        M = np.array([[-math.cosh(t), math.sinh(t)], [math.sinh(t), -math.cosh(t)]])
        # det = cosh^2 - sinh^2 = 1; columns have Q = +1 and -1 and are orthogonal
        assert np.linalg.det(M) == pytest.approx(1.0)
        assert is_member((1, 1), M).in_SO
        assert not is_identity_component((1, 1), M)

    def test_definite_always_true(self):
        assert is_identity_component((3, 0), rotation(2.0, 3))

    def test_flag_constant_along_path(self, rng):
        # t -> exp(t X) stays in the identity component
        from sopq.cartan_polar import matrix_exp, random_algebra_element

        for sig in [(1, 1), (2, 2), (3, 1)]:
            X = random_algebra_element(sig, rng).entries
            for t in np.linspace(0, 1, 21):
                assert is_identity_component(sig, matrix_exp(t * X))


class TestEmbeddings:
    def test_identity_to_identity(self):
        assert_close(embed_first((2, 1), np.eye(2)).entries, np.eye(3), 0)
        assert_close(embed_last((1, 2), np.eye(2)).entries, np.eye(3), 0)

    def test_embed_first_boost(self):
        A = embed_first((2, 1), boost(0.5))
        assert_close(A.entries[1:, 1:], boost(0.5).entries, 0)
        assert is_member((2, 1), A.entries).in_SO

    def test_embed_last_keeps_det_one(self):
        A = embed_last((1, 2), boost(0.5))
        r = is_member((1, 2), A.entries)
        assert r.in_SO and abs(r.det_residual) < 1e-12
        # the sign-flipped corner leaves SO(p,q)
        M = A.entries.copy()
        M[-1, -1] = -1
        assert not is_member((1, 2), M).in_SO

    @pytest.mark.parametrize("embed,outer,inner_sig", [
        (embed_first, (2, 2), (1, 2)),
        (embed_first, (3, 1), (2, 1)),
        (embed_last, (2, 2), (2, 1)),
        (embed_last, (1, 3), (1, 2)),
    ])
    def test_homomorphism_into_identity_component(self, embed, outer, inner_sig, rng):
        for _ in range(50):
            A = random_group_element(inner_sig, rng)
            B = random_group_element(inner_sig, rng)
            assert_close(embed(outer, A @ B).entries, (embed(outer, A) @ embed(outer, B)).entries, 1e-9)
            assert is_identity_component(outer, embed(outer, A))
            assert is_member(outer, embed(outer, A).entries).in_SO

    def test_injective(self, rng):
        A = random_group_element((1, 2), rng)
        B = random_group_element((1, 2), rng)
        assert not np.allclose(embed_first((2, 2), A).entries, embed_first((2, 2), B).entries)

    def test_bad_signatures(self):
        with pytest.raises(InvalidSignatureError):
            embed_first((0, 2), np.eye(1))
        with pytest.raises(InvalidSignatureError):
            embed_last((2, 0), np.eye(1))


class TestColumnReport:
    def test_identity(self):
        r = column_orthogonality_report((2, 1), np.eye(3))
        assert (r.orthogonal_pairs_ok, r.plus_count, r.minus_count) == (True, 2, 1)

    def test_boost(self):
        r = column_orthogonality_report((1, 1), boost(1.3).entries)
        assert (r.orthogonal_pairs_ok, r.plus_count, r.minus_count) == (True, 1, 1)

    def test_swapped_columns_have_right_counts_but_fail(self):
        M = np.array([[0.0, 1.0], [1.0, 0.0]])
        r = column_orthogonality_report((1, 1), M)
        assert (r.orthogonal_pairs_ok, r.plus_count, r.minus_count) == (True, 1, 1)
        assert not r.ordered_ok
        assert not is_member((1, 1), M).in_O

    @pytest.mark.parametrize("sig", [(1, 1), (2, 1), (2, 2), (3, 2)])
    def test_equivalence_with_membership(self, sig, rng):
        n = sum(sig)
        for _ in range(300):
            A = random_group_element(sig, rng).entries
            assert column_orthogonality_report(sig, A).matches(sig)
            assert is_member(sig, A).in_O
            # generic perturbation leaves the group
            B = A + 1e-3 * rng.standard_normal((n, n))
            assert not column_orthogonality_report(sig, B).matches(sig)
            assert not is_member(sig, B).in_O
            # random matrix, almost surely not in the group
            C = rng.standard_normal((n, n))
            assert column_orthogonality_report(sig, C).matches(sig) == is_member(sig, C).in_O
