import math

import numpy as np
import pytest
from scipy.integrate import quad, trapezoid

from qsense.errors import INFEASIBLE
from qsense.numerics import (adaptive_simpson, integrate_piecewise, solve_accumulated, first_crossing,
                             solve_tabulated, tabulated_integral)


@pytest.mark.parametrize("f, a, b", [(math.sin, 0.0, math.pi), (math.exp, -1.0, 2.0),
                                     (lambda x: 1 / (1 + x * x), 0.0, 5.0)])
def test_adaptive_simpson_against_quad(f, a, b):
    assert adaptive_simpson(f, a, b) == pytest.approx(quad(f, a, b, epsabs=1e-13)[0], abs=1e-11)


def test_adaptive_simpson_reversed_limits():
    assert adaptive_simpson(math.cos, 1.0, 0.0) == pytest.approx(-math.sin(1.0), abs=1e-12)


def test_piecewise_integration_of_kinked_integrand():
    f = lambda t: abs(math.sin(t))
    value = integrate_piecewise(f, 0.0, 3 * math.pi, breakpoints=[math.pi, 2 * math.pi])
    assert value == pytest.approx(6.0, abs=1e-11)


def test_solve_accumulated_constant_integrand():
    assert solve_accumulated(lambda t: 2.0, 3.0, horizon=10.0) == pytest.approx(1.5, abs=1e-12)


def test_solve_accumulated_sinusoid():
    # integral of sin from 0 to t is 1 - cos t
    t = solve_accumulated(math.sin, 0.5, horizon=math.pi, breakpoints=[math.pi])
    assert t == pytest.approx(math.acos(0.5), abs=1e-9)


def test_solve_accumulated_kinked_integrand():
    # integral is t + (t - 1)^2 past the kink, reaching 2 at the golden ratio
    f = lambda t: 1.0 + 2.0 * max(0.0, t - 1.0)
    assert solve_accumulated(f, 2.0, horizon=5.0, breakpoints=[1.0]) == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-9)


def test_solve_accumulated_infeasible_and_trivial():
    assert solve_accumulated(lambda t: 1.0, 20.0, horizon=10.0) is INFEASIBLE
    assert solve_accumulated(lambda t: 1.0, 0.0, horizon=10.0) == 0.0


def test_first_crossing_non_monotone():
    f = lambda t: math.sin(t)
    assert first_crossing(f, 0.5, horizon=10.0) == pytest.approx(math.pi / 6, abs=2e-9)
    assert first_crossing(f, 1.5, horizon=10.0) is INFEASIBLE


def test_solve_tabulated_linear_integrand_is_exact():
    times = np.linspace(0.0, 10.0, 11)
    values = 2.0 * times
    # integral of 2t is t^2
    assert solve_tabulated(times, values, 30.25) == pytest.approx(5.5, abs=1e-12)
    assert solve_tabulated(times, values, 200.0) is INFEASIBLE
    assert solve_tabulated(times, values, 0.0) == 0.0


def test_solve_tabulated_constant_integrand():
    times = np.linspace(1.0, 3.0, 5)
    assert solve_tabulated(times, np.full(5, 4.0), 2.0) == pytest.approx(1.5, abs=1e-12)


def test_tabulated_integral_matches_trapezoid_on_grid():
    times = np.linspace(0.0, 4.0, 9)
    values = np.cos(times) + 2.0
    assert tabulated_integral(times, values, times[5]) == pytest.approx(trapezoid(values[:6], times[:6]), abs=1e-14)
    # exact for linear integrands between samples
    assert tabulated_integral(times, 2.0 * times, 3.3) == pytest.approx(3.3 ** 2, abs=1e-12)
