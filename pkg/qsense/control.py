"""
Quantum control for general time-dependent signals H(omega, t).

The eigenvectors |psi_k(t)> of dH/domega at the working point omega_c are tracked in time. Adding
    H_c(t) = -H(omega_c, t) + i sum_k |d/dt psi_k><psi_k|
turns the evolution under H(omega, t) + H_c(t) into pure transport of the frame, each branch picking
up the phase -(omega - omega_c) integral mu_k. The probe (psi_max + psi_min)/sqrt(2) then moves as
fast as the MT bound allows.

The signal strength s multiplying the eigenvalue spread is explicit: s = omega for detecting the
presence of the signal, s = omega - omega_c for detecting a deviation from omega_c.
"""
from bisect import bisect_right
from collections import namedtuple
from functools import lru_cache
import logging
import math

import numpy as np
from scipy.interpolate import CubicSpline

from qsense.bounds import distances
from qsense.config import CONFIG
from qsense.errors import Degenerate, INFEASIBLE, is_feasible
from qsense.monitoring import monitor_runtime
from qsense.numerics import solve_tabulated, tabulated_integral
from qsense.pauli import PauliHamiltonian, QubitState, eig, fidelity, propagate_td

logger = logging.getLogger("control")

# control values kept per ControlHamiltonian, a few per propagation step
CACHE_SIZE = 256


class ParamHamiltonian(namedtuple("ParamHamiltonian", ["sampler", "d_omega_sampler"])):
    """
    sampler(omega, t) -> PauliHamiltonian, d_omega_sampler(omega, t) -> PauliHamiltonian or None,
    in which case dH/domega is a central finite difference
    """
    __slots__ = ()

    def __new__(cls, sampler, d_omega_sampler=None):
        return super().__new__(cls, sampler, d_omega_sampler)

    def __call__(self, omega, t):
        return self.sampler(omega, t)

    def derivative(self, omega, t, omega_step=None):
        if self.d_omega_sampler is not None:
            return self.d_omega_sampler(omega, t)

        if omega_step is None:
            omega_step = CONFIG["control"]["omega_step"]
        h = omega_step * max(1.0, abs(omega))
        upper = self.sampler(omega + h, t)
        lower = self.sampler(omega - h, t)
        return upper.plus(lower.scaled(-1.0)).scaled(1.0 / (2.0 * h))


EigenframeTrace = namedtuple("EigenframeTrace", ["grid", "mu_max", "mu_min", "frames"])

ControlledBound = namedtuple("ControlledBound", ["tau_mt", "tau_ml", "signal_strength", "f0"])

FidelityTrace = namedtuple("FidelityTrace", ["times", "fidelity", "signal_states", "reference_states"])


###################################################################################
#                              EIGENFRAMES                                        #
###################################################################################


def _overlap(a, b):
    return a.amp0.conjugate() * b.amp0 + a.amp1.conjugate() * b.amp1


def _align(state, reference):
    """state times the phase making <reference|state> real and positive"""
    overlap = _overlap(reference, state)
    if abs(overlap) == 0.0:
        raise Degenerate("eigenvector is orthogonal to its predecessor")
    return state.with_phase(-math.atan2(overlap.imag, overlap.real))


def _canonical(state):
    # largest component real and positive, ties resolved towards the first component
    magnitudes = [abs(state.amp0), abs(state.amp1)]
    largest = state.amp0 if magnitudes[0] >= max(magnitudes) * (1.0 - 1e-9) else state.amp1
    return state.with_phase(-math.atan2(largest.imag, largest.real))


def gauge_fix(frame_pairs):
    """
    Parallel-transport gauge for a sequence of (v_max, v_min) pairs: the first pair is put in a
    canonical phase, every later vector is rotated so its overlap with its predecessor on the same
    branch is real and positive.
    """
    fixed = []
    for v_max, v_min in frame_pairs:
        if not fixed:
            fixed.append((_canonical(v_max), _canonical(v_min)))
        else:
            previous_max, previous_min = fixed[-1]
            fixed.append((_align(v_max, previous_max), _align(v_min, previous_min)))
    return fixed


def _frame(ph, omega_c, t, threshold):
    derivative = ph.derivative(omega_c, t)
    gap = 2.0 * derivative.norm
    if gap < threshold or gap == 0.0:
        raise Degenerate("dH/domega is degenerate at t={}: mu_max - mu_min = {}".format(t, gap))
    return eig(derivative, threshold=0.0)


@monitor_runtime
def eigenframe_track(ph, omega_c, grid, threshold=None):
    """
    Eigenvalues and gauge-fixed eigenvectors of dH/domega(omega_c, t) on the grid. The upper
    eigenvector must stay on the upper branch between grid points; if it overlaps more with the
    lower one the grid is too coarse (or the branches cross) and Degenerate is raised.
    """
    if threshold is None:
        threshold = CONFIG["control"]["degeneracy_threshold"]
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2:
        raise ValueError("eigenframe grid needs at least two points")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("eigenframe grid must be strictly increasing")

    mu_max, mu_min, pairs = [], [], []
    for t in grid:
        system = _frame(ph, omega_c, t, threshold)
        if pairs:
            previous_max, _ = pairs[-1]
            if abs(_overlap(previous_max, system.v_plus)) < abs(_overlap(previous_max, system.v_minus)):
                raise Degenerate("eigenframe branches exchange before t={}, refine the grid".format(t))
        mu_max.append(system.e_plus)
        mu_min.append(system.e_minus)
        pairs.append((system.v_plus, system.v_minus))

    logger.debug("tracked eigenframe of dH/domega at omega_c={} on {} points".format(omega_c, len(grid)))
    return EigenframeTrace(grid, np.array(mu_max), np.array(mu_min), tuple(gauge_fix(pairs)))


###################################################################################
#                              CONTROL HAMILTONIAN                                #
###################################################################################


class ControlHamiltonian:
    """
    H_c(t) = -H(omega_c, t) + i sum_k |d/dt psi_k><psi_k|, valid on the trace window.

    The gauge-fixed frames of the trace are interpolated by a cubic spline, which gives the frame and
    its derivative anywhere in the window. The transport term is projected onto Pauli form, which
    drops the anti-Hermitian residue of the interpolation. Values are cached by t, so samplers for
    different omega share the evaluations.
    """
    def __init__(self, ph, trace, omega_c, cache_size=CACHE_SIZE):
        self.ph = ph
        self.omega_c = omega_c
        self.start = float(trace.grid[0])
        self.end = float(trace.grid[-1])

        # columns: real parts of (v_max, v_min), then imaginary parts
        amplitudes = np.array([[v_max.amp0, v_max.amp1, v_min.amp0, v_min.amp1] for v_max, v_min in trace.frames])
        spline = CubicSpline(trace.grid, np.concatenate([amplitudes.real, amplitudes.imag], axis=1), axis=0)
        self.knots = spline.x.tolist()
        self.coefficients = spline.c
        self._evaluate = lru_cache(maxsize=cache_size)(self._evaluate)

    def _frame_and_derivative(self, t):
        # cubic piece i of the spline, highest power first
        i = min(max(bisect_right(self.knots, t) - 1, 0), len(self.knots) - 2)
        dx = t - self.knots[i]
        c3, c2, c1, c0 = self.coefficients[:, i]
        value = ((c3 * dx + c2) * dx + c1) * dx + c0
        slope = (3.0 * c3 * dx + 2.0 * c2) * dx + c1
        frame = (value[:4] + 1j * value[4:]).reshape(2, 2)
        derivative = (slope[:4] + 1j * slope[4:]).reshape(2, 2)
        return frame, derivative

    def _transport_matrix(self, t):
        if not self.start <= t <= self.end:
            raise ValueError("t={} lies outside the eigenframe window [{}, {}]".format(t, self.start, self.end))
        frame, derivative = self._frame_and_derivative(t)
        # rows are the branches
        return 1j * derivative.T @ frame.conj()

    def hermiticity_residual(self, t):
        """norm of the anti-Hermitian part of the transport term before projection"""
        matrix = self._transport_matrix(t)
        return float(np.linalg.norm(matrix - matrix.conj().T))

    def _evaluate(self, t):
        transport = PauliHamiltonian.from_matrix(self._transport_matrix(t))
        return transport.plus(self.ph(self.omega_c, t).scaled(-1.0))

    def __call__(self, t):
        return self._evaluate(float(t))


def control_hamiltonian(ph, trace, omega_c):
    return ControlHamiltonian(ph, trace, omega_c)


###################################################################################
#                              BOUNDS                                             #
###################################################################################


def controlled_qsl(trace, signal_strength, f0):
    """
    Smallest t with (s/2) integral (mu_max - mu_min) >= (pi/2) beta(f0), and the ML analogue with
    alpha, integrating from the start of the trace. A window too short for the target gives the
    INFEASIBLE value.
    """
    if signal_strength <= 0:
        raise ValueError("signal strength must be positive, got {}".format(signal_strength))

    d = distances(f0)
    if d.beta == 0:
        return ControlledBound(0.0, 0.0, signal_strength, f0)

    spread = trace.mu_max - trace.mu_min
    tau_mt = solve_tabulated(trace.grid, spread, math.pi * d.beta / signal_strength)
    tau_ml = solve_tabulated(trace.grid, spread, math.pi * d.alpha / signal_strength)

    # alpha <= beta and a nonnegative integrand, so ML is never the later bound
    assert not (is_feasible(tau_mt) and is_feasible(tau_ml)) or tau_ml <= tau_mt
    return ControlledBound(tau_mt, tau_ml, signal_strength, f0)


def branch_phases(trace, signal_strength, t_end, t_start=None):
    """
    Phases s * integral mu_k accumulated on the upper and lower branch between t_start (default:
    start of the trace) and t_end
    """
    if t_start is None:
        t_start = trace.grid[0]
    phase_max = tabulated_integral(trace.grid, trace.mu_max, t_end) - tabulated_integral(trace.grid, trace.mu_max, t_start)
    phase_min = tabulated_integral(trace.grid, trace.mu_min, t_end) - tabulated_integral(trace.grid, trace.mu_min, t_start)
    return signal_strength * phase_max, signal_strength * phase_min


###################################################################################
#                              SIMULATION                                         #
###################################################################################


def equal_weight_probe(trace):
    v_max, v_min = trace.frames[0]
    return QubitState.from_vector((v_max.vector + v_min.vector) / math.sqrt(2.0))


@monitor_runtime
def simulate_controlled(ph, omega_true, omega_c, trace, horizon, steps, tol=None):
    """
    Propagate the equal-weight probe under H(omega_true, t) + H_c(t) and the reference under
    H(omega_c, t) + H_c(t) from the start of the trace to the horizon, recording their fidelity on
    steps + 1 equidistant times. The phase law behind the MT saturation is first order in
    omega_true - omega_c; keeping the deviation small is up to the caller.
    """
    start, end = float(trace.grid[0]), float(trace.grid[-1])
    if not start < horizon <= end:
        raise ValueError("horizon {} must lie in the eigenframe window ({}, {}]".format(horizon, start, end))
    if steps < 1:
        raise ValueError("need at least one step, got {}".format(steps))

    control = ControlHamiltonian(ph, trace, omega_c)
    signal_sampler = _controlled_sampler(ph, control, omega_true)
    reference_sampler = _controlled_sampler(ph, control, omega_c)

    times = np.linspace(start, horizon, steps + 1)
    signal = reference = equal_weight_probe(trace)
    signal_states, reference_states, fidelities = [signal], [reference], [1.0]
    for t0, t1 in zip(times[:-1], times[1:]):
        signal = propagate_td(signal_sampler, t0, t1, signal, tol=tol)
        reference = propagate_td(reference_sampler, t0, t1, reference, tol=tol)
        signal_states.append(signal)
        reference_states.append(reference)
        fidelities.append(fidelity(signal, reference))

    logger.debug("controlled evolution omega_true={} omega_c={}: final fidelity {}".format(
        omega_true, omega_c, fidelities[-1]))
    return FidelityTrace(times, np.array(fidelities), tuple(signal_states), tuple(reference_states))


def _controlled_sampler(ph, control, omega):
    def sampler(t):
        return ph(omega, t).plus(control(t))
    return sampler


def controlled_crossing_time(fidelity_trace, ph, omega_true, omega_c, trace, f0, tol=None, time_tol=None):
    """
    First time the controlled fidelity reaches f0: the simulation step that brackets the crossing is
    bisected by re-propagating both states from the start of that step.
    """
    if time_tol is None:
        time_tol = CONFIG["control"]["crossing_tolerance"]

    below = np.nonzero(fidelity_trace.fidelity <= f0)[0]
    if len(below) == 0:
        return INFEASIBLE
    i = below[0]
    if i == 0:
        return float(fidelity_trace.times[0])

    control = ControlHamiltonian(ph, trace, omega_c)
    signal_sampler = _controlled_sampler(ph, control, omega_true)
    reference_sampler = _controlled_sampler(ph, control, omega_c)
    t_start = float(fidelity_trace.times[i - 1])
    signal = fidelity_trace.signal_states[i - 1]
    reference = fidelity_trace.reference_states[i - 1]

    lo, hi = t_start, float(fidelity_trace.times[i])
    while hi - lo > time_tol:
        mid = 0.5 * (lo + hi)
        f_mid = fidelity(propagate_td(signal_sampler, t_start, mid, signal, tol=tol),
                         propagate_td(reference_sampler, t_start, mid, reference, tol=tol))
        if f_mid <= f0:
            hi = mid
        else:
            lo = mid
    return hi
