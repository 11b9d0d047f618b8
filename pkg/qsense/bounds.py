"""
Mandelstam-Tamm (MT) and Margolus-Levitin (ML) bounds on the time a qubit needs to fall to a
target fidelity with its initial state.

The ML distance alpha(F) is not known in closed form; it is taken as beta(F)^2 throughout and
flagged as such in every emitted result.
"""
from collections import namedtuple
import math

from qsense.errors import INFEASIBLE, NoInformation, InvalidReference, is_feasible
from qsense.envelopes import EnvelopeSpec, CONSTANT
from qsense.numerics import solve_accumulated
from qsense.pauli import eig, stats, fidelity, evolve_fixed_axis

ALPHA_IS_BETA_SQUARED = True

# energies closer than this (relative) count as equal
LEVEL_TOLERANCE = 1e-12

PRODUCT = "product"
GHZ = "ghz"
MT = "mt"
ML = "ml"

DistanceFunctions = namedtuple("DistanceFunctions", ["f", "beta", "alpha"])


class BoundResult(namedtuple("BoundResult", ["tau_mt", "tau_ml", "t_min", "distances", "feasible", "t_actual"])):
    """
    t_min = max(tau_mt, tau_ml) when both are finite. feasible requires both bounds to be reached
    within the horizon and, when known, the actual evolution to reach the target fidelity.
    """
    __slots__ = ()

    @classmethod
    def combine(cls, tau_mt, tau_ml, distances, t_actual=None):
        both = is_feasible(tau_mt) and is_feasible(tau_ml)
        t_min = max(tau_mt, tau_ml) if both else INFEASIBLE
        feasible = both and (t_actual is None or is_feasible(t_actual))
        return cls(tau_mt, tau_ml, t_min, distances, feasible, t_actual)


###################################################################################
#                              DISTANCES                                          #
###################################################################################


def distances(f0):
    if not 0.0 <= f0 <= 1.0:
        raise ValueError("fidelity must lie in [0, 1], got {}".format(f0))
    beta = 2.0 / math.pi * math.acos(math.sqrt(f0))
    return DistanceFunctions(f0, beta, beta * beta)


def large_n_arccos(n):
    """arccos(sqrt(F0)) for F0 = N/(N+1), to leading order in 1/N"""
    return 1.0 / math.sqrt(n)


###################################################################################
#                              TIME-INDEPENDENT HAMILTONIANS                      #
###################################################################################


def mt_static(stddev_h, f0):
    if stddev_h < 0:
        raise ValueError("energy spread must be nonnegative")
    beta = distances(f0).beta
    if beta == 0:
        return 0.0
    if stddev_h == 0:
        raise NoInformation("zero energy spread: the state never moves")
    return math.pi / (2.0 * stddev_h) * beta


def ml_reference_valid(e_reference, e_ground):
    return e_reference <= e_ground


def ml_static(mean_h, e_reference, f0, e_ground=None):
    if e_ground is not None and not ml_reference_valid(e_reference, e_ground):
        raise InvalidReference("reference level {} lies above the ground energy {}".format(e_reference, e_ground))
    excess = mean_h - e_reference
    resolution = LEVEL_TOLERANCE * max(1.0, abs(mean_h), abs(e_reference))
    if excess < -resolution:
        raise InvalidReference("mean energy {} lies below the reference level {}".format(mean_h, e_reference))

    alpha = distances(f0).alpha
    if alpha == 0:
        return 0.0
    if excess <= resolution:
        raise NoInformation("mean energy sits at the reference level")
    return math.pi / (2.0 * excess) * alpha


###################################################################################
#                              COMMUTING TIME-DEPENDENT HAMILTONIANS              #
###################################################################################


def mt_time_dependent(stddev_fn, f0, horizon, breakpoints=()):
    """smallest t with integral_0^t dH(s) ds >= (pi/2) beta(f0)"""
    target = math.pi / 2.0 * distances(f0).beta
    return solve_accumulated(stddev_fn, target, horizon, breakpoints)


def ml_time_dependent(mean_fn, reference_fn, f0, horizon, breakpoints=()):
    """smallest t with integral_0^t (<H(s)> - E_r(s)) ds >= (pi/2) alpha(f0)"""
    target = math.pi / 2.0 * distances(f0).alpha

    def integrand(t):
        value = mean_fn(t) - reference_fn(t)
        if value < -1e-12:
            raise InvalidReference("mean energy below the reference level at t={}".format(t))
        return max(value, 0.0)

    return solve_accumulated(integrand, target, horizon, breakpoints)


def mt_envelope(stddev_h_unit, env, f0):
    if stddev_h_unit < 0:
        raise ValueError("energy spread must be nonnegative")
    if distances(f0).beta == 0:
        return 0.0
    if stddev_h_unit == 0 or env.is_zero():
        raise NoInformation("the MT integrand vanishes identically")
    return mt_time_dependent(lambda t: stddev_h_unit * abs(env(t)), f0, env.horizon, env.breakpoints())


def ml_envelope(mean_h_unit, omega, env, f0):
    """
    ML bound for H(t) = r(t) h with h of gap omega; the reference level is the instantaneous
    ground energy -omega |r(t)| / 2.
    """
    if omega <= 0:
        raise ValueError("omega must be positive, got {}".format(omega))
    if abs(mean_h_unit) > omega / 2.0 * (1.0 + 1e-12):
        raise ValueError("<h> = {} is outside the spectrum [-omega/2, omega/2]".format(mean_h_unit))
    if distances(f0).alpha == 0:
        return 0.0
    if env.is_zero():
        raise NoInformation("the ML integrand vanishes identically")
    if env.kind == CONSTANT and mean_h_unit * env.amplitude + omega / 2.0 * abs(env.amplitude) <= 0:
        raise NoInformation("the probe is the ground state of H: the ML integrand vanishes identically")

    return ml_time_dependent(lambda t: mean_h_unit * env(t),
                             lambda t: -omega / 2.0 * abs(env(t)),
                             f0, env.horizon, env.breakpoints())


###################################################################################
#                              ACTUAL EVOLUTION                                   #
###################################################################################


def minimum_fidelity(c0_sq):
    return (1.0 - 2.0 * c0_sq) ** 2


def actual_crossing_time(omega, c0_sq, env, f0):
    """
    Smallest t with F(t) = 1 - 4 c(1-c) sin^2(omega/2 * integral_0^t r) <= f0
    """
    if omega <= 0:
        raise ValueError("omega must be positive, got {}".format(omega))
    if not 0.0 <= c0_sq <= 1.0:
        raise ValueError("c0_sq must lie in [0, 1], got {}".format(c0_sq))
    if f0 >= 1.0:
        return 0.0
    if minimum_fidelity(c0_sq) > f0:
        return INFEASIBLE

    spread = 4.0 * c0_sq * (1.0 - c0_sq)
    needed = min(1.0, (1.0 - f0) / spread)
    phase = 2.0 * math.asin(math.sqrt(needed)) / omega
    return env.first_phase_time(phase)


def scale_many_body(tau, m, kind, which):
    if m < 1 or int(m) != m:
        raise ValueError("number of bodies must be a positive integer, got {}".format(m))
    if not is_feasible(tau):
        return tau

    if which == MT:
        if kind == PRODUCT:
            return tau / math.sqrt(m)
        elif kind == GHZ:
            return tau / m
    elif which == ML:
        if kind in (PRODUCT, GHZ):
            return tau / m
    raise NotImplementedError("unknown scaling {}/{}".format(kind, which))


def mlb_vs_mtb_crossover(omega, f0):
    """
    Upper weight c0^2 at which the static ML and MT bounds coincide; below it ML is the larger.
    Independent of omega.
    """
    if not 0.0 < f0 < 1.0:
        raise ValueError("crossover needs 0 < f0 < 1, got {}".format(f0))
    beta = distances(f0).beta
    return beta * beta / (1.0 + beta * beta)


###################################################################################
#                              CONVENIENCE                                        #
###################################################################################


def static_bounds(h, state, f0, e_reference=None, horizon=None):
    """
    BoundResult for a time-independent H and arbitrary probe state. The actual time is searched
    up to `horizon` (one full precession period by default).
    """
    system = eig(h)
    moments = stats(h, state)
    if e_reference is None:
        e_reference = moments.e_ground

    tau_mt = mt_static(moments.stddev, f0)
    tau_ml = ml_static(moments.mean, e_reference, f0, e_ground=moments.e_ground)

    if system.degenerate:
        t_actual = 0.0 if f0 >= 1.0 else INFEASIBLE
    else:
        gap = system.e_plus - system.e_minus
        if horizon is None:
            horizon = 2.0 * math.pi / gap
        c0_sq = fidelity(system.v_plus, state)
        t_actual = actual_crossing_time(gap, c0_sq, EnvelopeSpec.constant(horizon), f0)

    return BoundResult.combine(tau_mt, tau_ml, distances(f0), t_actual)


def fidelity_after(h, state, t):
    return fidelity(state, evolve_fixed_axis(h, t, state))
