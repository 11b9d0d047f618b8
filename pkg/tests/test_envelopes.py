import math

import pytest
from scipy.integrate import quad

from qsense.envelopes import EnvelopeSpec
from qsense.errors import INFEASIBLE


def test_constant_envelope():
    env = EnvelopeSpec.constant(10.0, amplitude=2.0)
    assert env(3.0) == 2.0
    assert env.phase(1.5) == 3.0
    assert env.first_phase_time(4.0) == pytest.approx(2.0)
    assert env.first_phase_time(40.0) is INFEASIBLE


def test_sinusoid_phase_and_breakpoints():
    env = EnvelopeSpec.sinusoid(0.5, 20.0)
    assert env.phase(2.0) == pytest.approx(quad(env, 0.0, 2.0)[0], abs=1e-12)
    assert env.breakpoints() == pytest.approx([2 * math.pi, 4 * math.pi, 6 * math.pi])


def test_sinusoid_first_phase_time():
    env = EnvelopeSpec.sinusoid(0.5, 20.0)
    target = 0.3
    t = env.first_phase_time(target)
    assert env.phase(t) == pytest.approx(target, abs=1e-12)
    # the phase of sin(kt) never exceeds 2/k
    assert env.first_phase_time(4.1) is INFEASIBLE


def test_samples_interpolate_and_hold():
    env = EnvelopeSpec.samples([1.0, 2.0, 4.0], [0.0, 2.0, 2.0], horizon=6.0)
    assert env(1.5) == pytest.approx(1.0)
    assert env(5.0) == 2.0
    assert env(0.5) == 0.0
    # trapezoids: 0 on [0, 1], 1 on [1, 2], 4 on [2, 4], 2 on [4, 5]
    assert env.phase(5.0) == pytest.approx(7.0)
    assert env.first_phase_time(3.0) == pytest.approx(3.0, abs=1e-8)


def test_samples_sign_change_adds_breakpoint():
    env = EnvelopeSpec.samples([0.0, 2.0], [1.0, -1.0])
    assert 1.0 in env.breakpoints()


@pytest.mark.parametrize("times, values", [([0.0], [1.0]), ([0.0, 1.0], [1.0]), ([1.0, 0.5], [0.0, 1.0]),
                                           ([-1.0, 1.0], [0.0, 1.0])])
def test_samples_validation(times, values):
    with pytest.raises(ValueError):
        EnvelopeSpec.samples(times, values)


def test_zero_envelopes():
    assert EnvelopeSpec.constant(1.0, 0.0).is_zero()
    assert EnvelopeSpec.sinusoid(0.0, 1.0).is_zero()
    assert not EnvelopeSpec.sinusoid(1.0, 1.0).is_zero()
    with pytest.raises(ValueError):
        EnvelopeSpec.constant(0.0)
