"""Representation data: dimensions, lengths, fusion, growth."""

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgharm import groups
from qgharm.errors import LabelMismatchError, NotPolynomialGrowthError
from qgharm.groups import (
    GroupDescriptor,
    dual_free_group,
    dual_zd,
    free_orthogonal,
    free_permutation,
    so3,
    su2,
)


def brute_reduced_words(n, k):
    """Oracle: enumerate reduced words of length exactly k by filtering."""
    letters = [i for j in range(1, n + 1) for i in (j, -j)]
    out = []
    for word in itertools.product(letters, repeat=k):
        if all(word[i] != -word[i + 1] for i in range(k - 1)):
            out.append(word)
    return out


class TestDescriptors:
    def test_parameter_bounds(self):
        with pytest.raises(ValueError):
            free_orthogonal(1)
        with pytest.raises(ValueError):
            free_permutation(3)
        with pytest.raises(ValueError):
            dual_free_group(1)
        with pytest.raises(ValueError):
            dual_zd(0)
        with pytest.raises(ValueError):
            GroupDescriptor("su2", 5)

    def test_selector_roundtrip(self):
        for text in ("oplus:3", "splus:5", "fdual:2", "zd:2", "su2", "so3"):
            assert str(groups.parse_group(text)) == text
        with pytest.raises(ValueError):
            groups.parse_group("bogus:3")


class TestDimension:
    def test_oplus3_sequence(self):
        g = free_orthogonal(3)
        assert [groups.dimension(g, k) for k in range(5)] == [1, 3, 8, 21, 55]

    def test_oplus2_matches_su2(self):
        g = free_orthogonal(2)
        for k in range(51):
            assert groups.dimension(g, k) == k + 1 == groups.dimension(su2(), k)

    def test_splus4_matches_so3(self):
        g = free_permutation(4)
        assert [groups.dimension(g, k) for k in range(4)] == [1, 3, 5, 7]
        for k in range(51):
            assert groups.dimension(g, k) == 2 * k + 1 == groups.dimension(so3(), k)

    def test_group_duals_are_one_dimensional(self):
        assert groups.dimension(dual_free_group(2), (1, 2, -1)) == 1
        assert groups.dimension(dual_zd(2), (3, -2)) == 1

    def test_exact_big_integers(self):
        # n_k for oplus:3 passes 64-bit range in the mid-40s; must stay exact
        g = free_orthogonal(3)
        n49, n50, n51 = (groups.dimension(g, k) for k in (49, 50, 51))
        assert n51 == 3 * n50 - n49
        assert n50 > 2**63

    def test_label_mismatch(self):
        with pytest.raises(LabelMismatchError):
            groups.dimension(free_orthogonal(3), (1, 2))
        with pytest.raises(LabelMismatchError):
            groups.dimension(dual_free_group(2), 3)
        with pytest.raises(LabelMismatchError):
            groups.dimension(dual_free_group(2), (1, -1))  # not reduced
        with pytest.raises(LabelMismatchError):
            groups.dimension(dual_zd(2), (1, 2, 3))


class TestLength:
    def test_examples(self):
        assert groups.length(dual_free_group(2), (1, 2, -1)) == 3
        assert groups.length(free_orthogonal(5), 7) == 7
        assert groups.length(dual_zd(2), (3, -2)) == 5


class TestFusion:
    def test_oplus_ladder(self):
        g = free_orthogonal(3)
        assert groups.fusion_decompose(g, 2, 3) == {1: 1, 3: 1, 5: 1}
        total = sum(groups.dimension(g, c) for c in (1, 3, 5))
        assert total == groups.dimension(g, 2) * groups.dimension(g, 3) == 168

    def test_splus_ladder(self):
        g = free_permutation(5)
        assert groups.fusion_decompose(g, 1, 1) == {0: 1, 1: 1, 2: 1}
        total = sum(groups.dimension(g, c) for c in (0, 1, 2))
        assert total == groups.dimension(g, 1) ** 2

    def test_free_group_product(self):
        g = dual_free_group(2)
        assert groups.fusion_decompose(g, (1,), (-1,)) == {(): 1}
        assert groups.fusion_decompose(g, (1, 2), (-2, 1)) == {(1, 1): 1}

    @pytest.mark.parametrize(
        "group",
        [free_orthogonal(n) for n in (2, 3, 4, 5)]
        + [free_permutation(n) for n in (4, 5, 6)],
    )
    def test_dimension_consistency_exact(self, group):
        # sum_c N(a,b,c) n_c == n_a n_b, exact integers, a,b <= 20
        for a in range(21):
            for b in range(21):
                total = sum(
                    mult * groups.dimension(group, c)
                    for c, mult in groups.fusion_decompose(group, a, b).items()
                )
                assert total == groups.dimension(group, a) * groups.dimension(group, b)

    @given(a=st.integers(0, 30), b=st.integers(0, 30))
    @settings(max_examples=60, deadline=None)
    def test_symmetry_and_subadditivity(self, a, b):
        for group in (free_orthogonal(3), free_permutation(5), su2(), so3()):
            dec = groups.fusion_decompose(group, a, b)
            assert dec == groups.fusion_decompose(group, b, a)
            assert all(c <= a + b for c in dec)


class TestSpheresAndBalls:
    def test_free_group_spheres_vs_enumeration(self):
        g = dual_free_group(2)
        for k in range(4):
            assert groups.sphere_size(g, k) == len(brute_reduced_words(2, k))
        assert [groups.sphere_size(g, k) for k in range(4)] == [1, 4, 12, 36]

    def test_oplus2_spheres(self):
        g = free_orthogonal(2)
        for k in range(50):
            assert groups.sphere_size(g, k) == (1 + k) ** 2

    def test_zd_spheres_vs_enumeration(self):
        for d in (1, 2, 3):
            g = dual_zd(d)
            for k in range(7):
                labels = groups.sphere_labels(g, k)
                assert all(sum(abs(x) for x in v) == k for v in labels)
                assert groups.sphere_size(g, k) == len(labels)

    def test_ball_telescoping(self):
        for g in (free_orthogonal(3), dual_free_group(2), dual_zd(2)):
            for k in range(1, 101):
                assert groups.ball_size(g, k) == groups.ball_size(g, k - 1) + groups.sphere_size(g, k)

    def test_zd2_ball_closed_form(self):
        g = dual_zd(2)
        for k in range(30):
            assert groups.ball_size(g, k) == 2 * k * k + 2 * k + 1


class TestGrowth:
    def test_estimates(self):
        assert 2.9 <= groups.growth_order_estimate(free_orthogonal(2), 200) <= 3.1
        assert 0.95 <= groups.growth_order_estimate(dual_zd(1), 200) <= 1.05
        assert 1.9 <= groups.growth_order_estimate(dual_zd(2), 200) <= 2.1

    def test_exponential_group_rejected(self):
        with pytest.raises(NotPolynomialGrowthError):
            groups.growth_order_estimate(free_orthogonal(3), 100)
        with pytest.raises(NotPolynomialGrowthError):
            groups.growth_order_estimate(dual_free_group(2), 100)

    def test_kmax_floor(self):
        with pytest.raises(ValueError):
            groups.growth_order_estimate(dual_zd(1), 4)


class TestCentralProduct:
    def test_su2_squares(self):
        assert groups.central_product(su2(), {1: 1}, {1: 1}) == {0: 1, 2: 1}

    def test_oplus3_chi2_squared(self):
        g = free_orthogonal(3)
        assert groups.central_product(g, {2: 1}, {2: 1}) == {0: 1, 2: 1, 4: 1}

    def test_so3_mixed(self):
        assert groups.central_product(so3(), {1: 1}, {2: 1}) == {1: 1, 2: 1, 3: 1}

    def test_convolution_path_for_group_duals(self):
        g = dual_free_group(2)
        a = {(1,): 1, (2,): 1}
        b = {(-1,): 1}
        assert groups.central_product(g, a, b) == {(): 1, (2, -1): 1}

    def test_commutative_associative_exact(self):
        rng = np.random.default_rng(11)
        for group in (free_orthogonal(3), free_permutation(5), su2()):
            for _ in range(10):
                elts = []
                for _ in range(3):
                    degs = rng.integers(0, 11, size=3)
                    elts.append(
                        {int(d): Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 7))) for d in degs}
                    )
                a, b, c = elts
                ab = groups.central_product(group, a, b)
                assert ab == groups.central_product(group, b, a)
                left = groups.central_product(group, ab, c)
                right = groups.central_product(group, a, groups.central_product(group, b, c))
                assert left == right


class TestConcurrentUse:
    def test_dimension_table_safe_under_threads(self):
        import concurrent.futures

        groups._dim_memo.clear()
        g = free_orthogonal(3)
        ks = list(range(301)) * 4
        with concurrent.futures.ThreadPoolExecutor(max_workers=8) as pool:
            results = list(pool.map(lambda k: groups.dimension(g, k), ks))
        serial = [groups.dimension(g, k) for k in ks]
        assert results == serial
        # recurrence still intact after the concurrent fill
        memo_check = all(
            groups.dimension(g, k + 1) == 3 * groups.dimension(g, k) - groups.dimension(g, k - 1)
            for k in range(1, 300)
        )
        assert memo_check


class TestWords:
    @given(st.lists(st.sampled_from([1, -1, 2, -2]), max_size=12))
    @settings(max_examples=200, deadline=None)
    def test_reduction_kills_inverse(self, letters):
        w = groups.reduce_word(letters)
        assert groups.word_multiply(w, groups.word_inverse(w)) == ()
        # reduced: no adjacent cancelling pair
        assert all(w[i] != -w[i + 1] for i in range(len(w) - 1))

    def test_word_string_roundtrip(self):
        for w in ((), (1,), (1, -2, 1), (2, 2, -1)):
            assert groups.word_from_str(groups.word_to_str(w)) == w
        assert groups.word_to_str((1, -2)) == "a B"
        assert groups.word_from_str("aBa") == (1, -2, 1)
