"""Closed-form anchors and structural properties of the information measures."""

import math

import numpy as np
import pytest

from conftest import bsc, random_channel, random_distribution
from core.measures import (
    alpha_from_rho,
    arimoto_conditional_entropy,
    arimoto_mi,
    arimoto_mi_entropic,
    csiszar_mi,
    gallager_e0,
    kl_divergence,
    renyi_divergence,
    renyi_entropy,
    require_alpha,
    require_rho,
    rho_from_alpha,
    shannon_entropy,
    shannon_mi,
    sibson_mi,
    tilt,
    tilt_reverse,
)
from core.prob import Channel, Distribution, ReverseChannel
from errors import AlphabetMismatch, AlphaOutOfRange


class TestOrderParameters:

    def test_round_trip(self):
        assert alpha_from_rho(rho_from_alpha(2.0)) == pytest.approx(2.0)
        assert rho_from_alpha(2.0) == pytest.approx(-0.5)

    @pytest.mark.parametrize("alpha", [1.0, 0.0, -1.0, math.inf, math.nan])
    def test_rejects_invalid_alpha(self, alpha):
        with pytest.raises(AlphaOutOfRange):
            require_alpha(alpha)

    def test_above_one_required(self):
        with pytest.raises(AlphaOutOfRange):
            require_alpha(0.5, above_one=True)

    def test_rho_range(self):
        with pytest.raises(AlphaOutOfRange):
            require_rho(0.0, negative=True)
        assert require_rho(-0.5, negative=True) == -0.5


class TestRenyi:

    def test_entropy_two_point(self):
        assert renyi_entropy(Distribution([0.8, 0.2]), 2.0) == pytest.approx(0.385662, abs=1e-6)

    def test_entropy_uniform_is_log_n(self):
        assert renyi_entropy(Distribution.uniform(5), 3.0) == pytest.approx(math.log(5), abs=1e-12)

    def test_divergence_to_self_is_zero(self, rng):
        p = random_distribution(rng, 4)
        assert renyi_divergence(p, p, 2.5) == pytest.approx(0.0, abs=1e-12)

    def test_divergence_infinite_outside_support(self):
        assert renyi_divergence(Distribution([0.5, 0.5]), Distribution([1.0, 0.0]), 2.0) == math.inf

    def test_divergence_below_one_ignores_missing_support(self):
        value = renyi_divergence(Distribution([0.5, 0.5]), Distribution([1.0, 0.0]), 0.5)
        assert value == pytest.approx(-2.0 * math.log(math.sqrt(0.5)), abs=1e-12)

    def test_divergence_tends_to_kl(self, rng):
        p, q = random_distribution(rng, 4), random_distribution(rng, 4)
        assert renyi_divergence(p, q, 1.0 + 1e-6) == pytest.approx(kl_divergence(p, q), abs=1e-5)

    def test_alphabet_mismatch(self):
        with pytest.raises(AlphabetMismatch):
            renyi_divergence(Distribution.uniform(2), Distribution.uniform(3), 2.0)


class TestGallagerE0:

    def test_zero_rho_is_exactly_zero(self, rng):
        for _ in range(100):
            w = random_channel(rng, 3, 4)
            p = random_distribution(rng, 3)
            assert gallager_e0(0.0, p, w) == 0.0

    def test_bsc(self):
        assert gallager_e0(-0.5, Distribution.uniform(2), bsc(0.1)) == pytest.approx(-0.2473481, abs=1e-6)

    def test_identity(self):
        value = gallager_e0(-0.5, Distribution.uniform(3), Channel.identity(3))
        assert value == pytest.approx(-0.5 * math.log(3), abs=1e-12)


class TestTiltComposition:

    def test_two_point(self):
        np.testing.assert_allclose(tilt(Distribution([0.8, 0.2]), 2.0).probs,
                                   [0.64 / 0.68, 0.04 / 0.68], atol=1e-12)

    def test_composition_law(self, rng):
        for _ in range(100):
            p = random_distribution(rng, 5)
            a, b = rng.uniform(0.2, 5.0, size=2)
            np.testing.assert_allclose(tilt(tilt(p, a), b).probs, tilt(p, a * b).probs, atol=1e-12)

    def test_inverse_tilt(self, rng):
        p = random_distribution(rng, 4)
        np.testing.assert_allclose(tilt(tilt(p, 3.0), 1.0 / 3.0).probs, p.probs, atol=1e-12)

    def test_reverse_columns_sum_to_one(self):
        r = ReverseChannel([[0.2, 0.7], [0.8, 0.3]])
        np.testing.assert_allclose(tilt_reverse(r, 2.0).matrix.sum(axis=0), 1.0)


class TestMutualInformations:

    def test_sibson_bsc(self):
        assert sibson_mi(Distribution.uniform(2), bsc(0.1), 2.0) == pytest.approx(0.4946962, abs=1e-6)

    def test_shannon_bsc(self):
        h = -(0.1 * math.log(0.1) + 0.9 * math.log(0.9))
        assert shannon_mi(Distribution.uniform(2), bsc(0.1)) == pytest.approx(math.log(2) - h, abs=1e-12)

    def test_shannon_entropy_uniform(self):
        assert shannon_entropy(Distribution.uniform(8)) == pytest.approx(math.log(8))

    def test_identity_all_variants_give_log_n(self):
        p, w = Distribution.uniform(3), Channel.identity(3)
        for alpha in (1.5, 2.0, 5.0):
            assert sibson_mi(p, w, alpha) == pytest.approx(math.log(3), abs=1e-12)
            assert arimoto_mi(p, w, alpha) == pytest.approx(math.log(3), abs=1e-12)
            assert csiszar_mi(p, w, alpha) == pytest.approx(math.log(3), abs=1e-9)

    def test_uniform_rows_carry_no_information(self, rng):
        w = Channel.uniform(3, 4)
        p = random_distribution(rng, 3)
        assert sibson_mi(p, w, 2.0) == pytest.approx(0.0, abs=1e-12)
        assert csiszar_mi(p, w, 2.0) == pytest.approx(0.0, abs=1e-9)

    def test_arimoto_two_formulas_agree(self, rng):
        for _ in range(100):
            w = random_channel(rng, 3, 3)
            p = random_distribution(rng, 3)
            alpha = float(rng.choice([rng.uniform(0.2, 0.95), rng.uniform(1.05, 6.0)]))
            assert arimoto_mi(p, w, alpha) == pytest.approx(arimoto_mi_entropic(p, w, alpha), abs=1e-10)

    def test_conditional_entropy_of_noiseless_channel(self):
        value = arimoto_conditional_entropy(Distribution.uniform(3), Channel.identity(3), 2.0)
        assert value == pytest.approx(0.0, abs=1e-12)

    def test_csiszar_below_sibson_for_alpha_above_one(self, rng):
        # for α > 1 the Augustin–Csiszár MI never exceeds the Sibson MI at the same input
        w = random_channel(rng, 3, 3)
        p = random_distribution(rng, 3)
        assert csiszar_mi(p, w, 2.0) <= sibson_mi(p, w, 2.0) + 1e-9

    def test_csiszar_drops_zero_inputs(self, reference_channel):
        p = Distribution([0.5, 0.5, 0.0])
        sub = Channel(reference_channel.matrix[:2])
        assert csiszar_mi(p, reference_channel, 2.0) == pytest.approx(csiszar_mi(Distribution([0.5, 0.5]), sub, 2.0))
