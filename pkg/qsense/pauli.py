"""
Single-qubit Hermitians in Pauli form, pure states, closed-form propagators and fidelity.

Units: hbar = 1, all energies are angular frequencies.
"""
from collections import namedtuple
import cmath
import math

import numpy as np

from qsense.config import CONFIG
from qsense.errors import NonConvergence

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


###################################################################################
#                              VALUES                                             #
###################################################################################


class PauliHamiltonian(namedtuple("PauliHamiltonian", ["a0", "ax", "ay", "az"])):
    """
    H = a0*I + ax*sigma_x + ay*sigma_y + az*sigma_z

    Hermitian by construction, eigenvalues a0 +- |a|.
    """
    __slots__ = ()

    def __new__(cls, a0=0.0, ax=0.0, ay=0.0, az=0.0):
        values = [float(a0), float(ax), float(ay), float(az)]
        if not all(math.isfinite(v) for v in values):
            raise ValueError("Hamiltonian coefficients must be finite, got {}".format(values))
        return super().__new__(cls, *values)

    @classmethod
    def from_matrix(cls, matrix):
        # projection onto the Hermitian part
        m = np.asarray(matrix, dtype=complex)
        return cls(np.trace(m).real / 2,
                   np.trace(SIGMA_X @ m).real / 2,
                   np.trace(SIGMA_Y @ m).real / 2,
                   np.trace(SIGMA_Z @ m).real / 2)

    @classmethod
    def along(cls, direction, amplitude):
        """amplitude * (n . sigma) for the unit vector n along direction"""
        direction = np.asarray(direction, dtype=float)
        norm = np.linalg.norm(direction)
        if norm == 0:
            raise ValueError("direction must be nonzero")
        ax, ay, az = amplitude * direction / norm
        return cls(0.0, ax, ay, az)

    @property
    def vector(self):
        return np.array([self.ax, self.ay, self.az])

    @property
    def norm(self):
        return math.hypot(self.ax, self.ay, self.az)

    def matrix(self):
        return self.a0 * IDENTITY + self.ax * SIGMA_X + self.ay * SIGMA_Y + self.az * SIGMA_Z

    def plus(self, other):
        return PauliHamiltonian(self.a0 + other.a0, self.ax + other.ax, self.ay + other.ay, self.az + other.az)

    def scaled(self, factor):
        return PauliHamiltonian(factor * self.a0, factor * self.ax, factor * self.ay, factor * self.az)

    def commutes_with(self, other, tol=1e-12):
        return np.linalg.norm(np.cross(self.vector, other.vector)) <= tol


ZERO_HAMILTONIAN = PauliHamiltonian()


class QubitState(namedtuple("QubitState", ["amp0", "amp1"])):
    __slots__ = ()

    def __new__(cls, amp0, amp1):
        amp0, amp1 = complex(amp0), complex(amp1)
        if not all(cmath.isfinite(a) for a in (amp0, amp1)):
            raise ValueError("amplitudes must be finite")
        return super().__new__(cls, amp0, amp1)

    @classmethod
    def from_vector(cls, vector):
        return cls(vector[0], vector[1])

    @classmethod
    def zero(cls):
        return cls(1, 0)

    @classmethod
    def one(cls):
        return cls(0, 1)

    @classmethod
    def plus_state(cls):
        return cls(1 / math.sqrt(2), 1 / math.sqrt(2))

    @classmethod
    def minus_state(cls):
        return cls(1 / math.sqrt(2), -1 / math.sqrt(2))

    @classmethod
    def superposition(cls, upper, lower, c0_sq, phase=0.0):
        """sqrt(c0_sq)|upper> + sqrt(1 - c0_sq) e^{i phase} |lower>"""
        if not 0.0 <= c0_sq <= 1.0:
            raise ValueError("c0_sq must lie in [0, 1], got {}".format(c0_sq))
        weight_upper = math.sqrt(c0_sq)
        weight_lower = math.sqrt(1.0 - c0_sq) * cmath.exp(1j * phase)
        return cls.from_vector(weight_upper * upper.vector + weight_lower * lower.vector).normalized()

    @property
    def vector(self):
        return np.array([self.amp0, self.amp1], dtype=complex)

    @property
    def norm(self):
        return math.sqrt(abs(self.amp0) ** 2 + abs(self.amp1) ** 2)

    def normalized(self):
        norm = self.norm
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        return QubitState(self.amp0 / norm, self.amp1 / norm)

    def is_normalized(self, tol=None):
        if tol is None:
            tol = CONFIG["pauli"]["normalization_tolerance"]
        return abs(abs(self.amp0) ** 2 + abs(self.amp1) ** 2 - 1.0) <= tol

    def with_phase(self, phase):
        factor = cmath.exp(1j * phase)
        return QubitState(factor * self.amp0, factor * self.amp1)

    def bloch_vector(self):
        overlap = self.amp0.conjugate() * self.amp1
        return np.array([2 * overlap.real, 2 * overlap.imag, abs(self.amp0) ** 2 - abs(self.amp1) ** 2])


Eigensystem = namedtuple("Eigensystem", ["e_plus", "e_minus", "v_plus", "v_minus", "degenerate"])

StateStats = namedtuple("StateStats", ["mean", "stddev", "e_ground"])


###################################################################################
#                              LINEAR ALGEBRA                                     #
###################################################################################


def eig(h, threshold=None):
    """
    Closed-form eigensystem. Below the degeneracy threshold H is proportional to the identity,
    which is flagged and answered with the canonical basis.
    """
    if threshold is None:
        threshold = CONFIG["pauli"]["degeneracy_threshold"]

    r = h.norm
    if r < threshold:
        return Eigensystem(h.a0 + r, h.a0 - r, QubitState.zero(), QubitState.one(), True)

    nx, ny, nz = h.vector / r
    theta = math.acos(max(-1.0, min(1.0, nz)))
    phi = math.atan2(ny, nx)
    c, s = math.cos(theta / 2), math.sin(theta / 2)

    v_plus = QubitState(c, cmath.exp(1j * phi) * s)
    v_minus = QubitState(-cmath.exp(-1j * phi) * s, c)
    return Eigensystem(h.a0 + r, h.a0 - r, v_plus, v_minus, False)


def evolve_fixed_axis(h, phase_integral, state):
    """
    exp(-i H phase_integral)|state>; phase_integral is t for a constant H, or the integral of r(t)
    for H(t) = r(t) H.
    """
    global_phase = cmath.exp(-1j * h.a0 * phase_integral)
    r = h.norm
    a0, a1 = state.amp0, state.amp1

    if r == 0.0:
        return QubitState(global_phase * a0, global_phase * a1)

    nx, ny, nz = h.vector / r
    c = math.cos(r * phase_integral)
    s = math.sin(r * phase_integral)

    # exp(-i x n.sigma) = cos(x) I - i sin(x) n.sigma
    new0 = c * a0 - 1j * s * (nz * a0 + complex(nx, -ny) * a1)
    new1 = c * a1 - 1j * s * (complex(nx, ny) * a0 - nz * a1)
    return QubitState(global_phase * new0, global_phase * new1).normalized()


def fidelity(a, b):
    overlap = a.amp0.conjugate() * b.amp0 + a.amp1.conjugate() * b.amp1
    return min(1.0, max(0.0, abs(overlap) ** 2))


def stats(h, state):
    bloch = state.bloch_vector()
    projection = float(np.dot(h.vector, bloch))
    mean = h.a0 + projection
    # Var(H) = |a|^2 - (a.s)^2 = |a x s|^2 + |a|^2 (1 - |s|^2), free of cancellation near eigenstates
    variance = float(np.sum(np.cross(h.vector, bloch) ** 2)) + h.norm ** 2 * (1.0 - float(np.dot(bloch, bloch)))
    return StateStats(mean, math.sqrt(max(variance, 0.0)), h.a0 - h.norm)


###################################################################################
#                              TIME-ORDERED PROPAGATION                           #
###################################################################################


def state_distance(a, b):
    return math.hypot(abs(a.amp0 - b.amp0), abs(a.amp1 - b.amp1))


def _midpoint_product(sampler, t0, t1, state, steps):
    dt = (t1 - t0) / steps
    for i in range(steps):
        h = sampler(t0 + (i + 0.5) * dt)
        state = evolve_fixed_axis(h, dt, state)
    return state


def propagate_td(sampler, t0, t1, state, tol=None, min_depth=None, max_depth=None):
    """
    Time-ordered evolution under H(t) = sampler(t) from t0 to t1.

    Products of midpoint step exponentials, with the number of steps doubled until two consecutive
    levels differ by less than tol; the two finest levels are then Richardson-combined.
    """
    settings = CONFIG["propagation"]
    tol = settings["tolerance"] if tol is None else tol
    min_depth = settings["min_depth"] if min_depth is None else min_depth
    max_depth = settings["max_depth"] if max_depth is None else max_depth

    if t1 < t0:
        raise ValueError("propagation window must satisfy t1 >= t0, got [{}, {}]".format(t0, t1))
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if t1 == t0:
        return state

    previous = _midpoint_product(sampler, t0, t1, state, 1)
    for depth in range(1, max_depth + 1):
        current = _midpoint_product(sampler, t0, t1, state, 2 ** depth)
        if depth >= min_depth and state_distance(current, previous) < tol:
            # midpoint products are second order
            extrapolated = (4 * current.vector - previous.vector) / 3
            return QubitState.from_vector(extrapolated).normalized()
        previous = current

    raise NonConvergence("no convergence on [{}, {}] after {} refinements".format(t0, t1, max_depth))
