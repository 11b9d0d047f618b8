"""
Brute-force check of the M-body scaling laws: M non-interacting copies of a single-qubit signal,
probed with a product state or with a GHZ state over the signal eigenbasis.

H_total = sum_i H_i is diagonal in the product eigenbasis, so it is stored as its diagonal over
the 2^M basis states.
"""
from collections import namedtuple
from functools import reduce
import math

import numpy as np

from qsense.bounds import PRODUCT, GHZ
from qsense.config import CONFIG
from qsense.errors import DimensionTooLarge, ScalingViolation
from qsense.monitoring import monitor_runtime
from qsense.pauli import eig, stats

ManyBodyStats = namedtuple("ManyBodyStats", ["m", "stddev_total", "mean_total", "e_ground_total", "kind"])

ScalingRow = namedtuple("ScalingRow", ["m", "stddev_product", "stddev_ghz", "excess_product", "excess_ghz",
                                       "mt_speedup_product", "mt_speedup_ghz", "ml_speedup"])


def _check_bodies(m):
    limit = CONFIG["manybody"]["max_bodies"]
    if m < 1 or int(m) != m:
        raise ValueError("number of bodies must be a positive integer, got {}".format(m))
    if m > limit:
        raise DimensionTooLarge("m={} needs a {}-dimensional space, limit is m={}".format(m, 2 ** m, limit))


def total_energies(e_plus, e_minus, m):
    """diagonal of sum_i H_i, basis index bit i = 0 meaning site i in the upper eigenstate"""
    bits = (np.arange(2 ** m)[:, None] >> np.arange(m)) & 1
    return np.where(bits == 0, e_plus, e_minus).sum(axis=1)


def product_amplitudes(single_amplitudes, m):
    return reduce(np.kron, [np.asarray(single_amplitudes, dtype=complex)] * m)


def ghz_amplitudes(m):
    amplitudes = np.zeros(2 ** m, dtype=complex)
    amplitudes[0] = amplitudes[-1] = 1 / math.sqrt(2)
    return amplitudes


@monitor_runtime
def tensor_stats(h_single, single_state, m, kind):
    _check_bodies(m)
    system = eig(h_single)
    energies = total_energies(system.e_plus, system.e_minus, m)

    if kind == PRODUCT:
        # amplitudes of the single-site state in the eigenbasis of h_single
        single = [np.vdot(system.v_plus.vector, single_state.vector),
                  np.vdot(system.v_minus.vector, single_state.vector)]
        amplitudes = product_amplitudes(single, m)
    elif kind == GHZ:
        amplitudes = ghz_amplitudes(m)
    else:
        raise NotImplementedError("unknown many-body state {}".format(kind))

    probabilities = np.abs(amplitudes) ** 2
    probabilities /= probabilities.sum()

    mean = float(np.dot(probabilities, energies))
    variance = float(np.dot(probabilities, (energies - mean) ** 2))
    return ManyBodyStats(m, math.sqrt(max(variance, 0.0)), mean, float(energies.min()), kind)


def _check_close(name, m, actual, expected, tol, energy_scale):
    # relative check, with a rounding floor for quantities that vanish
    allowed = tol * max(abs(expected), abs(actual)) + 1e-14 * m * energy_scale
    if abs(actual - expected) > allowed:
        raise ScalingViolation("{} at m={}: brute force {} vs scaling law {}".format(name, m, actual, expected))


@monitor_runtime
def verify_scaling(h_single, single_state, m_range, tol=None):
    """
    Compare brute-force many-body moments against
      dH_product = sqrt(m) dH,  dH_ghz = m dH_equal,  <H - E_g>_total = m <h - e_g>
    where dH_equal is the spread of the equal-weight single-site state, the one the GHZ state is
    built from. Returns one ScalingRow per m; raises ScalingViolation on mismatch.
    """
    if tol is None:
        tol = CONFIG["manybody"]["tolerance"]

    single = stats(h_single, single_state)
    system = eig(h_single)
    gap = system.e_plus - system.e_minus
    excess_single = single.mean - single.e_ground
    stddev_equal = gap / 2.0
    excess_equal = gap / 2.0

    rows = []
    for m in m_range:
        product = tensor_stats(h_single, single_state, m, PRODUCT)
        ghz = tensor_stats(h_single, single_state, m, GHZ)

        _check_close("product spread", m, product.stddev_total, math.sqrt(m) * single.stddev, tol, gap)
        _check_close("GHZ spread", m, ghz.stddev_total, m * stddev_equal, tol, gap)
        _check_close("product excess energy", m, product.mean_total - product.e_ground_total, m * excess_single, tol, gap)
        _check_close("GHZ excess energy", m, ghz.mean_total - ghz.e_ground_total, m * excess_equal, tol, gap)

        mt_speedup_product = product.stddev_total / single.stddev if single.stddev > 0 else math.nan
        rows.append(ScalingRow(m, product.stddev_total, ghz.stddev_total,
                               product.mean_total - product.e_ground_total, ghz.mean_total - ghz.e_ground_total,
                               mt_speedup_product, ghz.stddev_total / stddev_equal, float(m)))
    return rows
