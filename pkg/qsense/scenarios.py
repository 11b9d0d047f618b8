"""
Magnetic-field sensing scenarios: a single-mode AC field along a fixed axis, and a field of fixed
strength rotating at frequency k = epsilon * omega.

omega = 2 mu_B B0 / hbar is the Larmor angular frequency of the field amplitude B0.
"""
from collections import namedtuple
import math

import numpy as np

from qsense.bounds import (PRODUCT, GHZ, MT, ML, BoundResult, distances, mt_envelope, ml_envelope,
                           actual_crossing_time, scale_many_body, static_bounds)
from qsense.config import CONFIG
from qsense.control import ParamHamiltonian, ControlledBound, eigenframe_track, controlled_qsl
from qsense.distinguishability import as_budget, critical_fidelity
from qsense.envelopes import EnvelopeSpec
from qsense.errors import INFEASIBLE
from qsense.monitoring import monitor_runtime
from qsense.pauli import PauliHamiltonian, QubitState, eig

SINGLE = "single"
KINDS = (SINGLE, PRODUCT, GHZ)

OMEGA = "omega"
K = "k"

# dH/dk vanishes at t = 0, the rotating-field k trace starts just after
K_TRACE_START = 1e-6


def _check_kind(kind, m):
    if kind not in KINDS:
        raise ValueError("probe kind must be one of {}, got {}".format(KINDS, kind))
    if m < 1 or int(m) != m:
        raise ValueError("number of bodies must be a positive integer, got {}".format(m))
    if kind == SINGLE and m != 1:
        raise ValueError("a single probe has m = 1, got m = {}".format(m))


class AcScenario(namedtuple("AcScenario", ["omega", "k", "n", "m", "kind"])):
    """H(t) = sin(k t) * (omega/2) sigma_z on each of m probe qubits, N measurements"""
    __slots__ = ()

    def __new__(cls, omega, k, n, m=1, kind=SINGLE):
        if not omega > 0 or not math.isfinite(omega):
            raise ValueError("omega must be positive, got {}".format(omega))
        if not k >= 0 or not math.isfinite(k):
            raise ValueError("k must be nonnegative, got {}".format(k))
        _check_kind(kind, m)
        return super().__new__(cls, float(omega), float(k), as_budget(n).n, int(m), kind)

    @property
    def f0(self):
        return critical_fidelity(self.n)


class RotatingScenario(namedtuple("RotatingScenario", ["omega", "epsilon", "target", "n"])):
    """H(t) = (omega/2)(cos(k t) sigma_x + sin(k t) sigma_z) with k = epsilon * omega; target is the estimated parameter"""
    __slots__ = ()

    def __new__(cls, omega, epsilon, target=OMEGA, n=1):
        if not omega > 0 or not math.isfinite(omega):
            raise ValueError("omega must be positive, got {}".format(omega))
        if not epsilon > 0 or not math.isfinite(epsilon):
            raise ValueError("epsilon must be positive, got {}".format(epsilon))
        if target not in (OMEGA, K):
            raise ValueError("target parameter must be '{}' or '{}', got {}".format(OMEGA, K, target))
        return super().__new__(cls, float(omega), float(epsilon), target, as_budget(n).n)

    @property
    def k(self):
        return self.epsilon * self.omega

    @property
    def f0(self):
        return critical_fidelity(self.n)

    @property
    def signal_strength(self):
        return self.omega if self.target == OMEGA else self.k


###################################################################################
#                              AC FIELD                                           #
###################################################################################


def effective_omega(omega, m, kind):
    if kind == PRODUCT:
        return math.sqrt(m) * omega
    elif kind == GHZ:
        return m * omega
    return omega


def ac_kmax(s):
    """largest k at which the field still resolves within one half period; product probes use the sqrt(m) MT speedup"""
    arccos = math.acos(math.sqrt(s.f0))
    return effective_omega(s.omega, s.m, s.kind) / arccos


def ac_tmin(s):
    """(1/k) arccos(1 - (2k/omega_eff) arccos sqrt(F0)); a static field (k = 0) gives (2/omega_eff) arccos sqrt(F0)"""
    arccos = math.acos(math.sqrt(s.f0))
    omega_eff = effective_omega(s.omega, s.m, s.kind)
    if s.k == 0:
        return 2.0 * arccos / omega_eff
    if s.k > ac_kmax(s):
        return INFEASIBLE
    argument = max(-1.0, 1.0 - 2.0 * s.k * arccos / omega_eff)
    return math.acos(argument) / s.k


def ac_envelope(s, horizon=None):
    if s.k == 0:
        return EnvelopeSpec.constant(math.pi / s.omega if horizon is None else horizon)
    return EnvelopeSpec.sinusoid(s.k, math.pi / s.k if horizon is None else horizon)


def ac_phase(s, t):
    if s.k == 0:
        return t
    return (1.0 - math.cos(s.k * t)) / s.k


def ac_fidelity(s, t):
    half_angle = s.omega * ac_phase(s, t) / 2.0
    if s.kind == GHZ:
        return math.cos(s.m * half_angle) ** 2
    return math.cos(half_angle) ** (2 * s.m)


def ac_bound(s, horizon=None):
    """
    Envelope-solver bounds for the equal-weight probe: dh = omega_eff/2 for MT, <h> = 0 over a gap
    of m omega for ML, together with the time the probe actually reaches F0.
    """
    env = ac_envelope(s, horizon)
    f0 = s.f0

    tau_mt = mt_envelope(effective_omega(s.omega, s.m, s.kind) / 2.0, env, f0)
    tau_ml = ml_envelope(0.0, s.m * s.omega, env, f0)
    if s.kind == PRODUCT:
        t_actual = actual_crossing_time(s.omega, 0.5, env, f0 ** (1.0 / s.m))
    else:
        t_actual = actual_crossing_time(s.m * s.omega, 0.5, env, f0)
    return BoundResult.combine(tau_mt, tau_ml, distances(f0), t_actual)


###################################################################################
#                              ROTATING FIELD                                     #
###################################################################################


def rotating_bounds(s):
    d = distances(s.f0)
    if s.target == OMEGA:
        tau_mt = math.pi * d.beta / s.omega
        tau_ml = math.pi * d.alpha / s.omega
    else:
        scale = 2.0 * math.pi / (s.epsilon * s.omega ** 2)
        tau_mt = math.sqrt(scale * d.beta)
        tau_ml = math.sqrt(scale * d.alpha)
    return ControlledBound(tau_mt, tau_ml, s.signal_strength, s.f0)


def rotating_tmin(s):
    # the MT bound covers the ML bound here
    return rotating_bounds(s).tau_mt


def rotating_param_hamiltonian(s):
    """H as a function of the target parameter, the other one held at its scenario value, with analytic derivative"""
    if s.target == OMEGA:
        k = s.k

        def sampler(omega, t):
            return PauliHamiltonian(0.0, omega / 2.0 * math.cos(k * t), 0.0, omega / 2.0 * math.sin(k * t))

        def d_sampler(omega, t):
            return PauliHamiltonian(0.0, 0.5 * math.cos(k * t), 0.0, 0.5 * math.sin(k * t))
    else:
        omega = s.omega

        def sampler(k, t):
            return PauliHamiltonian(0.0, omega / 2.0 * math.cos(k * t), 0.0, omega / 2.0 * math.sin(k * t))

        def d_sampler(k, t):
            return PauliHamiltonian(0.0, -omega * t / 2.0 * math.sin(k * t), 0.0, omega * t / 2.0 * math.cos(k * t))

    return ParamHamiltonian(sampler, d_sampler)


def rotating_trace(s, horizon, points):
    start = 0.0 if s.target == OMEGA else K_TRACE_START
    grid = np.linspace(start, horizon, points)
    return eigenframe_track(rotating_param_hamiltonian(s), s.signal_strength, grid)


def rotating_trace_bounds(s, horizon, points=None):
    if points is None:
        points = CONFIG["cli"]["steps"] + 1
    return controlled_qsl(rotating_trace(s, horizon, points), s.signal_strength, s.f0)


###################################################################################
#                              BIOMAGNETIC FIELDS                                 #
###################################################################################


BiomagRow = namedtuple("BiomagRow", ["frequency_hz", "b_min_tesla", "n", "m", "kind"])


def biomagnetic_threshold(frequency_hz, n, m=1, kind=SINGLE):
    """smallest field amplitude in tesla whose frequency still satisfies k <= omega_eff / arccos sqrt(F0)"""
    if frequency_hz < 0:
        raise ValueError("frequency must be nonnegative, got {}".format(frequency_hz))
    _check_kind(kind, m)
    if frequency_hz == 0:
        return 0.0

    constants = CONFIG["constants"]
    arccos = math.acos(math.sqrt(critical_fidelity(n)))
    k = 2.0 * math.pi * frequency_hz
    m_eff = effective_omega(1.0, m, kind)
    return constants["hbar"] * k * arccos / (2.0 * constants["bohr_magneton"] * m_eff)


def frequency_grid(spec, points):
    """'start:stop' or 'start:stop:lin' for a linear grid, 'start:stop:log' for a logarithmic one"""
    parts = spec.split(":")
    if len(parts) not in (2, 3):
        raise ValueError("frequency grid must read start:stop[:lin|log], got '{}'".format(spec))
    start, stop = float(parts[0]), float(parts[1])
    scale = parts[2] if len(parts) == 3 else "lin"
    if points < 1:
        raise ValueError("frequency grid needs at least one point")
    if not 0 <= start <= stop:
        raise ValueError("frequency grid needs 0 <= start <= stop, got {}".format(spec))

    if scale == "log":
        if start == 0:
            raise ValueError("a logarithmic frequency grid must start above zero")
        return np.geomspace(start, stop, points)
    elif scale == "lin":
        return np.linspace(start, stop, points)
    raise ValueError("unknown grid scale '{}'".format(scale))


@monitor_runtime
def biomag_dataset(frequencies, n, m=1, kind=SINGLE):
    return [BiomagRow(float(f), biomagnetic_threshold(f, n, m, kind), as_budget(n).n, m, kind) for f in frequencies]


###################################################################################
#                              STATIC FIELD, ARBITRARY PROBE WEIGHT               #
###################################################################################


Fig1Row = namedtuple("Fig1Row", ["c0_sq", "tau_mt", "tau_ml", "t_actual", "feasible"])


def weight_grid(points):
    return np.linspace(0.0, 1.0, points + 2)[1:-1]


def static_probe_bound(omega, n, c0_sq, m=1, kind=SINGLE):
    """
    Bounds and actual crossing time for the probe sqrt(c0_sq)|up> + sqrt(1 - c0_sq)|down> under
    H = (omega/2) sigma_z, per site for product probes and over |up...up>, |down...down> for GHZ probes.
    """
    _check_kind(kind, m)
    if not 0.0 < c0_sq < 1.0:
        raise ValueError("probe weight must lie in (0, 1), got {}".format(c0_sq))
    f0 = critical_fidelity(n)
    h = PauliHamiltonian(az=omega / 2.0)
    system = eig(h)
    state = QubitState.superposition(system.v_plus, system.v_minus, c0_sq)
    single = static_bounds(h, state, f0, horizon=math.pi / omega)
    if kind == SINGLE:
        return single

    tau_mt = scale_many_body(single.tau_mt, m, kind, MT)
    tau_ml = scale_many_body(single.tau_ml, m, kind, ML)
    if kind == PRODUCT:
        t_actual = actual_crossing_time(omega, c0_sq, EnvelopeSpec.constant(math.pi / omega), f0 ** (1.0 / m))
    else:
        t_actual = actual_crossing_time(m * omega, c0_sq, EnvelopeSpec.constant(math.pi / (m * omega)), f0)
    return BoundResult.combine(tau_mt, tau_ml, single.distances, t_actual)


@monitor_runtime
def fig1_dataset(omega, n, c0_grid, m=1, kind=SINGLE):
    rows = []
    for c0_sq in c0_grid:
        result = static_probe_bound(omega, n, float(c0_sq), m, kind)
        rows.append(Fig1Row(float(c0_sq), result.tau_mt, result.tau_ml, result.t_actual, result.feasible))
    return rows


def envelope_bound(omega, env, n, c0_sq=0.5):
    if not 0.0 < c0_sq < 1.0:
        raise ValueError("probe weight must lie in (0, 1), got {}".format(c0_sq))
    f0 = critical_fidelity(n)
    tau_mt = mt_envelope(omega * math.sqrt(c0_sq * (1.0 - c0_sq)), env, f0)
    tau_ml = ml_envelope(omega / 2.0 * (2.0 * c0_sq - 1.0), omega, env, f0)
    t_actual = actual_crossing_time(omega, c0_sq, env, f0)
    return BoundResult.combine(tau_mt, tau_ml, distances(f0), t_actual)
