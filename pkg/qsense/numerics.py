"""
Quadrature and root finding for the speed-limit solvers.
"""
import math

import numpy as np
from scipy.integrate import cumulative_trapezoid

from qsense.config import CONFIG
from qsense.errors import INFEASIBLE

ROUNDING = 4.0 * np.finfo(float).eps


###################################################################################
#                              QUADRATURE                                         #
###################################################################################


def _simpson(fa, fm, fb, h):
    return h / 3.0 * (fa + 4.0 * fm + fb)


def adaptive_simpson(f, a, b, tol=None, max_depth=None):
    """
    Adaptive Simpson's rule to an absolute tolerance, with Richardson correction on accepted panels
    """
    settings = CONFIG["quadrature"]
    tol = settings["tolerance"] if tol is None else tol
    max_depth = settings["max_depth"] if max_depth is None else max_depth

    if a == b:
        return 0.0
    if a > b:
        return -adaptive_simpson(f, b, a, tol, max_depth)

    def _adaptive(a, b, fa, fm, fb, whole, depth, tol):
        m = (a + b) / 2.0
        h = (b - a) / 2.0
        flm = f((a + m) / 2.0)
        frm = f((m + b) / 2.0)

        left = _simpson(fa, flm, fm, h / 2.0)
        right = _simpson(fm, frm, fb, h / 2.0)
        error = (left + right - whole) / 15.0

        # rounding floor relative to the panel value
        if depth >= max_depth or abs(error) < max(tol, ROUNDING * abs(left + right)):
            return left + right + error

        return (_adaptive(a, m, fa, flm, fm, left, depth + 1, tol / 2.0) +
                _adaptive(m, b, fm, frm, fb, right, depth + 1, tol / 2.0))

    fa, fb = f(a), f(b)
    fm = f((a + b) / 2.0)
    return _adaptive(a, b, fa, fm, fb, _simpson(fa, fm, fb, (b - a) / 2.0), 0, tol)


def integrate_piecewise(f, a, b, breakpoints=(), tol=None):
    inner = sorted(x for x in breakpoints if a < x < b)
    edges = [a] + inner + [b]
    return math.fsum(adaptive_simpson(f, lo, hi, tol) for lo, hi in zip(edges[:-1], edges[1:]))


###################################################################################
#                              ROOT FINDING                                       #
###################################################################################


def _settings(horizon, time_tol):
    settings = CONFIG["root_finding"]
    time_tol = settings["time_tolerance"] if time_tol is None else time_tol
    first = min(horizon, settings["initial_bracket"] * horizon)
    return time_tol, first


def solve_accumulated(integrand, target, horizon, breakpoints=(), time_tol=None, quad_tol=None):
    """
    Smallest t in [0, horizon] with integral_0^t integrand >= target, for a nonnegative integrand.

    The bracket grows geometrically up to the horizon, then bisection keeps I(lo) < target <= I(hi),
    so plateaus resolve to their left end. A final secant step inside the last bracket makes
    piecewise-linear cumulative integrals exact.
    """
    if target <= 0:
        return 0.0
    time_tol, hi = _settings(horizon, time_tol)

    def integral(a, b):
        return integrate_piecewise(integrand, a, b, breakpoints, quad_tol)

    lo, value_lo = 0.0, 0.0
    while True:
        value_hi = value_lo + integral(lo, hi)
        if value_hi >= target:
            break
        if hi >= horizon:
            return INFEASIBLE
        lo, value_lo = hi, value_hi
        hi = min(2.0 * hi, horizon)

    while hi - lo > time_tol:
        mid = 0.5 * (lo + hi)
        value_mid = value_lo + integral(lo, mid)
        if value_mid >= target:
            hi, value_hi = mid, value_mid
        else:
            lo, value_lo = mid, value_mid

    if value_hi > value_lo:
        return lo + (target - value_lo) / (value_hi - value_lo) * (hi - lo)
    return hi


def first_crossing(f, target, horizon, scan_points=None, time_tol=None):
    """
    Smallest t in [0, horizon] with f(t) >= target for a continuous, possibly non-monotone f.

    Scans a uniform grid for the first sample at or above the target, then bisects between it and
    its predecessor. Excursions narrower than the scan spacing can be missed.
    """
    settings = CONFIG["root_finding"]
    scan_points = settings["scan_points"] if scan_points is None else scan_points
    time_tol = settings["time_tolerance"] if time_tol is None else time_tol

    if f(0.0) >= target:
        return 0.0

    grid = np.linspace(0.0, horizon, scan_points + 1)
    values = np.array([f(t) for t in grid])
    above = np.nonzero(values >= target)[0]
    if len(above) == 0:
        return INFEASIBLE

    i = above[0]
    lo, hi = grid[i - 1], grid[i]
    while hi - lo > time_tol:
        mid = 0.5 * (lo + hi)
        if f(mid) >= target:
            hi = mid
        else:
            lo = mid
    return hi


def solve_tabulated(times, values, target):
    """
    Smallest t with integral_{times[0]}^t g >= target, g the piecewise-linear interpolant of
    nonnegative samples. Exact for integrands linear between samples.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if target <= 0:
        return float(times[0])

    cumulative = cumulative_trapezoid(values, times, initial=0.0)
    above = np.nonzero(cumulative >= target)[0]
    if len(above) == 0:
        return INFEASIBLE

    i = above[0]
    t0, g0 = times[i - 1], values[i - 1]
    slope = (values[i] - g0) / (times[i] - t0)
    remaining = target - cumulative[i - 1]

    # g0*x + slope*x^2/2 = remaining, smallest nonnegative root in cancellation-free form
    discriminant = max(g0 * g0 + 2.0 * slope * remaining, 0.0)
    x = 2.0 * remaining / (g0 + math.sqrt(discriminant))
    return float(t0 + min(max(x, 0.0), times[i] - t0))


def tabulated_integral(times, values, t):
    """integral from times[0] to t, t inside the samples, of the piecewise-linear interpolant"""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    cumulative = cumulative_trapezoid(values, times, initial=0.0)
    i = int(np.clip(np.searchsorted(times, t, side="right") - 1, 0, len(times) - 2))
    value_t = float(np.interp(t, times, values))
    return float(cumulative[i] + (t - times[i]) * (values[i] + value_t) / 2.0)
