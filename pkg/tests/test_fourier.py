"""Dual lp norms, multipliers, mixed norms, interpolation exponents."""

import math

import numpy as np
import pytest

from qgharm import fourier, groups
from qgharm.errors import ExponentRangeError, InterpolationRelationError, LabelMismatchError
from qgharm.fourier import (
    CentralElement,
    DenseBlock,
    FourierCoefficients,
    ScalarBlock,
    WeightSpec,
)

G3 = groups.free_orthogonal(3)


def random_dense_coeffs(rng, group=G3, spheres=(0, 1), rank_one=False):
    blocks = {}
    for k in spheres:
        n = groups.dimension(group, k)
        if n > 4:
            continue
        if rank_one:
            u = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            m = np.outer(u, v.conj())
        else:
            m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        blocks[k] = DenseBlock(m)
    return FourierCoefficients(group, blocks)


class TestDualLpNorm:
    def test_scalar_block_l2(self):
        fc = FourierCoefficients(G3, {1: ScalarBlock(3, 2.0)})
        assert fourier.dual_lp_norm(fc, 2) == pytest.approx(6.0, abs=1e-12)

    def test_scalar_block_linf(self):
        fc = FourierCoefficients(G3, {1: ScalarBlock(3, 2.0)})
        assert fourier.dual_lp_norm(fc, math.inf) == pytest.approx(2.0)

    def test_p_below_one_rejected(self):
        fc = FourierCoefficients(G3, {0: ScalarBlock(1, 1.0)})
        with pytest.raises(ExponentRangeError):
            fourier.dual_lp_norm(fc, 0.5)

    def test_block_dim_validated(self):
        with pytest.raises(LabelMismatchError):
            FourierCoefficients(G3, {1: ScalarBlock(2, 1.0)})

    def test_dense_blocks_guarded_at_desk_scale(self):
        with pytest.raises(ValueError):
            DenseBlock(np.eye(65))

    def test_hoelder_on_random_rank_one_blocks(self):
        rng = np.random.default_rng(3)
        for _ in range(40):
            A = random_dense_coeffs(rng, spheres=(0, 1), rank_one=True)
            B = random_dense_coeffs(rng, spheres=(0, 1), rank_one=True)
            # brute-force pairing sum_a n_a tr(B_a A_a)
            pairing = 0.0 + 0.0j
            for k in A.blocks.keys() & B.blocks.keys():
                n = groups.dimension(G3, k)
                pairing += n * np.trace(B.blocks[k].entries @ A.blocks[k].entries)
            assert abs(pairing) == pytest.approx(abs(fourier.dual_pairing(A, B)), rel=1e-10)
            for p in (1.0, 1.5, 2.0, 3.0):
                pp = fourier.conjugate_exponent(p)
                bound = fourier.dual_lp_norm(A, p) * fourier.dual_lp_norm(B, pp)
                assert abs(pairing) <= bound * (1 + 1e-10)

    def test_lp_monotone_in_p(self):
        rng = np.random.default_rng(5)
        ps = (1.0, 1.2, 1.5, 2.0, 3.0, 6.0, math.inf)
        for _ in range(20):
            A = random_dense_coeffs(rng, spheres=(0, 1))
            norms = [fourier.dual_lp_norm(A, p) for p in ps]
            for lower, higher in zip(norms, norms[1:]):
                assert higher <= lower * (1 + 1e-12)


class TestPlancherel:
    def test_single_character(self):
        f = CentralElement(G3, {2: 1.0})
        assert fourier.plancherel_l2_norm(f) == pytest.approx(1.0)

    def test_two_terms(self):
        f = CentralElement(G3, {0: 1.0, 1: 0.5})
        assert fourier.plancherel_l2_norm(f) == pytest.approx(math.sqrt(5) / 2)

    def test_matches_block_form(self):
        f = CentralElement(G3, {0: 1.0, 1: 0.5, 3: -2.0})
        assert fourier.plancherel_l2_norm(f) == pytest.approx(
            fourier.dual_lp_norm(f.to_fourier(), 2), rel=1e-12
        )

    def test_central_roundtrip(self):
        f = CentralElement(G3, {0: 1.0, 2: -0.25})
        again = CentralElement.from_fourier(f.to_fourier())
        assert set(again.coeffs) == set(f.coeffs)
        for k in f.coeffs:
            assert complex(again.coeffs[k]) == pytest.approx(complex(f.coeffs[k]))


class TestMultiplier:
    def test_identity_weight(self):
        f = CentralElement(G3, {0: 1.0, 1: 1.0}).to_fourier()
        out = fourier.apply_multiplier(f, WeightSpec.power(0.0))
        assert out.blocks == f.blocks

    def test_sobolev_exponent_arithmetic(self):
        w = WeightSpec.sobolev(3.0, 4.0 / 3.0)
        # s(2/p - 1)/2 = 3 * (1/2) / 2 = 3/4
        assert w.exponent == pytest.approx(-0.75)
        f = CentralElement(G3, {2: 1.0})
        out = fourier.apply_multiplier(f, w)
        # character coefficient a_2 = block value * n_2 picks up (1+2)^(-3/4)
        n2 = groups.dimension(G3, 2)
        assert out.blocks[2].value * n2 == pytest.approx(3.0 ** (-0.75))

    def test_composition_multiplicative(self):
        rng = np.random.default_rng(9)
        f = random_dense_coeffs(rng, spheres=(0, 1))
        w1, w2 = WeightSpec.power(-0.7), WeightSpec.power(0.3)
        twice = fourier.apply_multiplier(fourier.apply_multiplier(f, w1), w2)
        once = fourier.apply_multiplier(f, WeightSpec.power(w1.exponent + w2.exponent))
        for k in f.blocks:
            np.testing.assert_allclose(
                twice.blocks[k].entries, once.blocks[k].entries, rtol=1e-12
            )

    def test_preserves_sphere_support_and_commutes_with_projection(self):
        f = CentralElement(G3, {0: 1.0, 1: 2.0, 4: -1.0}).to_fourier()
        w = WeightSpec.power(-1.3)
        a = fourier.project_sphere(fourier.apply_multiplier(f, w), 4)
        b = fourier.apply_multiplier(fourier.project_sphere(f, 4), w)
        assert set(a.blocks) == set(b.blocks) == {4}
        assert a.blocks[4].value == pytest.approx(b.blocks[4].value)


class TestProjection:
    def test_idempotent_and_reassembly(self):
        f = CentralElement(G3, {0: 1.0, 1: 2.0, 3: -0.5}).to_fourier()
        for k in (0, 1, 3):
            pk = fourier.project_sphere(f, k)
            assert set(pk.blocks) == {k}
            assert fourier.project_sphere(pk, k).blocks == pk.blocks
        assert fourier.project_sphere(f, 2).blocks == {}
        recombined = {}
        for k in range(4):
            recombined.update(fourier.project_sphere(f, k).blocks)
        assert recombined == f.blocks


class TestMixedNorm:
    def test_single_sphere_reduction(self):
        f = CentralElement(G3, {3: 2.5})
        w = WeightSpec.power(-1.1)
        inner = 2.5**2  # n ||f^||^2 = n * (a/n)^2 * n = a^2
        for q in (1.5, 2.0, 4.0):
            assert fourier.mixed_norm(f, q, w) == pytest.approx(
                w(3) ** (1 / q) * math.sqrt(inner)
            )

    def test_weight_one_q2_is_plancherel(self):
        rng = np.random.default_rng(2)
        f = random_dense_coeffs(rng, spheres=(0, 1))
        assert fourier.mixed_norm(f, 2.0, WeightSpec.power(0.0)) == pytest.approx(
            fourier.plancherel_l2_norm(f), rel=1e-12
        )

    def test_hand_expanded_example(self):
        f = CentralElement(G3, {0: 1.0, 1: 1.0})
        value = fourier.mixed_norm(f, 4.0, WeightSpec.power(-2.0))
        assert value == pytest.approx((1 + 2.0 ** (-2)) ** 0.25, rel=1e-12)

    def test_q_infinity_folds_weight_into_sup(self):
        f = CentralElement(G3, {0: 3.0, 2: 8.0})
        w = WeightSpec.power(-1.0)
        assert fourier.mixed_norm(f, math.inf, w) == pytest.approx(
            max(3.0, 8.0 / 3.0)
        )

    def test_q_below_one_rejected(self):
        f = CentralElement(G3, {0: 1.0})
        with pytest.raises(ExponentRangeError):
            fourier.mixed_norm(f, 0.9, WeightSpec.power(0.0))


class TestSchattenWeighted:
    def test_collapses_to_plancherel_at_two(self):
        rng = np.random.default_rng(4)
        f = random_dense_coeffs(rng, spheres=(0, 1))
        for beta in (0.0, 1.0, 2.5):
            assert fourier.schatten_weighted_norm(f, 2.0, beta) == pytest.approx(
                fourier.plancherel_l2_norm(f), rel=1e-12
            )

    def test_scalar_block_closed_form_vs_dense(self):
        # symbolic reduction for v*Id at degree k, checked against svd route
        k, v, beta, pp = 2, 0.7 - 0.2j, 1.0, 3.0
        n = groups.dimension(G3, k)
        scalar = FourierCoefficients(G3, {k: ScalarBlock(n, v)})
        dense = FourierCoefficients(G3, {k: DenseBlock(v * np.eye(n))})
        closed = (
            n ** (pp / 2 - 1) * (1 + k) ** (-beta * (pp - 2)) * n * n * abs(v) ** pp
        ) ** (1 / pp)
        assert fourier.schatten_weighted_norm(scalar, pp, beta) == pytest.approx(closed, rel=1e-12)
        assert fourier.schatten_weighted_norm(dense, pp, beta) == pytest.approx(closed, rel=1e-12)

    def test_dominated_by_mixed_norm(self):
        rng = np.random.default_rng(6)
        beta = 1.0
        for _ in range(25):
            f = random_dense_coeffs(rng, spheres=(0, 1))
            for pp in (2.0, 2.5, 3.0, 4.0):
                w = WeightSpec.power(-beta * (pp - 2.0))
                assert fourier.schatten_weighted_norm(f, pp, beta) <= fourier.mixed_norm(
                    f, pp, w
                ) * (1 + 1e-12)

    def test_below_two_rejected(self):
        f = CentralElement(G3, {0: 1.0})
        with pytest.raises(ExponentRangeError):
            fourier.schatten_weighted_norm(f, 1.5, 1.0)


class TestInterpolationExponents:
    def test_thm_sobolev_exponent_grid(self):
        for p in np.linspace(1.05, 1.95, 10):
            pp = fourier.conjugate_exponent(p)
            for beta in (0.5, 1.0, 2.0):
                e = fourier.interp_weight_combine(
                    -(beta + 1) * (2 - p), p, -beta * (pp - 2), pp, 0.5, 2.0
                )
                assert e == pytest.approx(-(2 * beta + 1) * (2 / p - 1), abs=1e-12)

    def test_degenerate_combine(self):
        for theta in (0.25, 0.5, 0.75):
            e = fourier.interp_weight_combine(-1.7, 2.0, -1.7, 2.0, theta, 2.0)
            assert e == pytest.approx(-1.7, abs=1e-14)

    def test_ci2_two_sided(self):
        for theta in (0.3, 0.6):
            e = fourier.interp_weight_combine(-1.0, 2.0, -3.0, 2.0, theta, 2.0)
            assert e == pytest.approx((1 - theta) * -1.0 + theta * -3.0, abs=1e-14)

    def test_relation_enforced(self):
        with pytest.raises(InterpolationRelationError):
            fourier.interp_weight_combine(0.0, 1.5, 0.0, 3.0, 0.5, 2.5)
        with pytest.raises(InterpolationRelationError):
            fourier.interp_weight_combine(0.0, 2.0, 0.0, 2.0, 1.5, 2.0)

    def test_infinite_endpoint(self):
        # interpolating against an l-infinity endpoint drops its term
        p_prime = 4.0
        theta = 2.0 / p_prime
        e = fourier.interp_weight_combine(-2.0, math.inf, -1.0, 2.0, theta, p_prime)
        assert e == pytest.approx(-1.0 * p_prime * theta / 2.0)


class TestSerialization:
    def test_fourier_roundtrip(self):
        rng = np.random.default_rng(8)
        f = random_dense_coeffs(rng, spheres=(1,))
        f = f.with_blocks({**f.blocks, 0: ScalarBlock(1, 0.5 + 0.25j)})
        again = FourierCoefficients.from_json_dict(f.to_json_dict())
        assert set(again.blocks) == set(f.blocks)
        np.testing.assert_allclose(again.blocks[1].entries, f.blocks[1].entries)
        assert complex(again.blocks[0].value) == pytest.approx(0.5 + 0.25j)

    def test_central_roundtrip(self):
        f = CentralElement(G3, {0: 1.0, 5: -2.5})
        again = CentralElement.from_json_dict(f.to_json_dict())
        assert again.group == f.group
        assert {k: complex(v) for k, v in again.coeffs.items()} == {
            k: complex(v) for k, v in f.coeffs.items()
        }

    def test_word_labels_serialize(self):
        g = groups.dual_free_group(2)
        f = FourierCoefficients(g, {(1, -2): ScalarBlock(1, 1.0)})
        doc = f.to_json_dict()
        assert doc["coeffs"][0]["label"] == "a B"
        assert set(FourierCoefficients.from_json_dict(doc).blocks) == {(1, -2)}
