"""
Distinguishability of two qubit states under projection noise.

The measurement basis is the input state itself, so the reference outcome is deterministic
(p = 1, dp = 0) and the output state succeeds with probability F.
"""
from collections import namedtuple
import math

import numpy as np
from scipy.stats import binom

from qsense.errors import NoInformation


class SampleBudget(namedtuple("SampleBudget", ["n"])):
    __slots__ = ()

    def __new__(cls, n):
        if int(n) != n or n < 1:
            raise ValueError("sample budget must be a positive integer, got {}".format(n))
        return super().__new__(cls, int(n))


def as_budget(budget):
    if isinstance(budget, SampleBudget):
        return budget
    return SampleBudget(budget)


class BinomialEstimate(namedtuple("BinomialEstimate", ["successes", "trials", "p_hat", "delta_p"])):
    __slots__ = ()

    @classmethod
    def from_counts(cls, successes, trials):
        if trials < 1 or not 0 <= successes <= trials:
            raise ValueError("need 0 <= successes <= trials and trials >= 1, got {}/{}".format(successes, trials))
        p_hat = successes / trials
        return cls(successes, trials, p_hat, math.sqrt(p_hat * (1.0 - p_hat) / trials))

    @classmethod
    def deterministic(cls, trials):
        return cls.from_counts(trials, trials)


PhaseBound = namedtuple("PhaseBound", ["ml_component", "mt_component", "bound"])


def critical_fidelity(budget):
    n = as_budget(budget).n
    return n / (n + 1.0)


def snr_distinguishable(a, b):
    signal = abs(a.p_hat - b.p_hat)
    noise = a.delta_p + b.delta_p
    # zero signal never counts, even when both noises vanish
    return signal > 0.0 and signal >= noise


def detectable_outcomes(n):
    """
    Boolean mask over the number of failures m = 0..n of the output-state measurement:
    True where the plug-in criterion |1 - p_hat| >= dp_hat holds.
    """
    m = np.arange(n + 1)
    p_hat = (n - m) / n
    delta = np.sqrt(p_hat * (1.0 - p_hat) / n)
    signal = m / n
    return (signal > 0.0) & (signal >= delta)


def detection_probability(true_fidelity, budget):
    """
    Exact probability that N measurements in the input basis flag the output state as different,
    summed over m ~ Binomial(N, 1 - F). The criterion reduces to m >= 1, i.e. 1 - F^N.
    """
    if not 0.0 <= true_fidelity <= 1.0:
        raise ValueError("fidelity must lie in [0, 1], got {}".format(true_fidelity))
    n = as_budget(budget).n

    m = np.arange(n + 1)
    log_pmf = binom.logpmf(m, n, 1.0 - true_fidelity)
    detected = detectable_outcomes(n)
    probability = math.fsum(np.exp(log_pmf[detected]))
    return min(1.0, max(0.0, probability))


def min_detectable_phase(budget, gen_mean_above_ground, gen_stddev):
    """
    Precision limit for a phase imprinted by generator G:
    max(2/pi / (N <G - G_g>), 1 / (sqrt(N) dG)), hbar = 1
    """
    n = as_budget(budget).n
    if gen_mean_above_ground < 0 or gen_stddev < 0:
        raise ValueError("generator moments must be nonnegative")
    if gen_mean_above_ground == 0 and gen_stddev == 0:
        raise NoInformation("generator has zero mean above ground and zero spread")

    ml = (2.0 / math.pi) / (n * gen_mean_above_ground) if gen_mean_above_ground > 0 else math.inf
    mt = 1.0 / (math.sqrt(n) * gen_stddev) if gen_stddev > 0 else math.inf
    return PhaseBound(ml, mt, max(ml, mt))
