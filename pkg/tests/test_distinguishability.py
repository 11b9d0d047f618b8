import math

import numpy as np
import pytest
from scipy.stats import binom

from qsense.distinguishability import (SampleBudget, BinomialEstimate, critical_fidelity, snr_distinguishable,
                                       detectable_outcomes, detection_probability, min_detectable_phase)
from qsense.errors import NoInformation


@pytest.mark.parametrize("n", [1, 3, 100])
def test_critical_fidelity_balances_signal_and_noise(n):
    f0 = critical_fidelity(n)
    assert f0 == n / (n + 1)
    assert abs(1 - f0) == pytest.approx(math.sqrt(f0 * (1 - f0) / n), abs=1e-12)


def test_critical_fidelity_tends_to_one():
    assert critical_fidelity(10 ** 9) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("n", [0, -3, 2.5])
def test_budget_validation(n):
    with pytest.raises(ValueError):
        SampleBudget(n)


def test_identical_estimates_are_not_distinguishable():
    a = BinomialEstimate.from_counts(7, 10)
    assert not snr_distinguishable(a, a)
    reference = BinomialEstimate.deterministic(10)
    assert not snr_distinguishable(reference, reference)


def test_single_failure_against_deterministic_reference():
    reference = BinomialEstimate.deterministic(1)
    output = BinomialEstimate.from_counts(0, 1)
    assert snr_distinguishable(reference, output)


def test_snr_threshold():
    reference = BinomialEstimate.deterministic(100)
    # p_hat = 0.99: signal 0.01, noise sqrt(0.99*0.01/100) ~ 0.00995
    assert snr_distinguishable(reference, BinomialEstimate.from_counts(99, 100))
    # noisy comparison on both sides
    assert not snr_distinguishable(BinomialEstimate.from_counts(50, 100), BinomialEstimate.from_counts(55, 100))


def test_detectable_outcomes_is_any_failure():
    mask = detectable_outcomes(50)
    assert not mask[0]
    assert mask[1:].all()


@pytest.mark.parametrize("f, n", [(100 / 101, 100), (0.5, 1), (0.9, 7), (0.999, 1000)])
def test_detection_probability_closed_form(f, n):
    assert detection_probability(f, n) == pytest.approx(1 - f ** n, abs=1e-12)


def test_detection_probability_against_binomial_enumeration():
    f, n = 0.97, 40
    mask = detectable_outcomes(n)
    expected = sum(binom.pmf(m, n, 1 - f) for m in range(n + 1) if mask[m])
    assert detection_probability(f, n) == pytest.approx(expected, abs=1e-12)


def test_detection_probability_reference_value():
    assert detection_probability(100 / 101, 100) == pytest.approx(0.63029, abs=1e-5)


def test_detection_probability_edges():
    assert detection_probability(1.0, 10) == 0.0
    assert detection_probability(0.0, 10) == 1.0
    with pytest.raises(ValueError):
        detection_probability(1.2, 10)


def test_detection_probability_increases_as_fidelity_drops():
    rates = [detection_probability(f, 20) for f in np.linspace(1.0, 0.8, 11)]
    assert all(a < b for a, b in zip(rates[:-1], rates[1:]))


def test_min_detectable_phase():
    bound = min_detectable_phase(100, 0.5, 0.5)
    assert bound.ml_component == pytest.approx(2 / math.pi / 50)
    assert bound.mt_component == pytest.approx(0.2)
    assert bound.bound == bound.mt_component


def test_min_detectable_phase_without_information():
    assert min_detectable_phase(10, 0.0, 1.0).ml_component == math.inf
    with pytest.raises(NoInformation):
        min_detectable_phase(10, 0.0, 0.0)


def test_detectable_outcomes_for_every_budget():
    for n in range(1, 10001):
        mask = detectable_outcomes(n)
        assert len(mask) == n + 1
        assert not mask[0] and mask[1:].all(), n


def test_detection_rate_at_critical_fidelity_approaches_limit():
    rates = [detection_probability(critical_fidelity(n), n) for n in (100, 1000, 10000)]
    assert rates == pytest.approx([0.63029, 0.63194, 0.63210], abs=1e-5)
    assert rates[0] < rates[1] < rates[2] < 1 - math.exp(-1)
    assert 1 - math.exp(-1) - rates[2] < 3e-5


def test_detection_rate_at_critical_fidelity_never_drops():
    rates = [detection_probability(critical_fidelity(n), n) for n in range(1, 301)]
    assert rates[0] == pytest.approx(0.5)
    assert all(a <= b for a, b in zip(rates[:-1], rates[1:]))
