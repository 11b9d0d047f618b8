"""
Time modulation r(t) of a fixed-axis signal H(t) = r(t) * h.
"""
from collections import namedtuple
import math

import numpy as np

from qsense.errors import INFEASIBLE
from qsense.numerics import first_crossing, tabulated_integral

CONSTANT = "constant"
SINUSOID = "sinusoid"
SAMPLES = "samples"


class EnvelopeSpec(namedtuple("EnvelopeSpec", ["kind", "horizon", "amplitude", "k", "times", "values"])):
    """
    constant:  r(t) = amplitude
    sinusoid:  r(t) = amplitude * sin(k t)
    samples:   linear interpolation of (times, values), held constant outside the samples
    """
    __slots__ = ()

    @classmethod
    def constant(cls, horizon, amplitude=1.0):
        return cls._checked(CONSTANT, horizon, amplitude, 0.0, (), ())

    @classmethod
    def sinusoid(cls, k, horizon, amplitude=1.0):
        if k < 0:
            raise ValueError("oscillation frequency must be nonnegative, got {}".format(k))
        return cls._checked(SINUSOID, horizon, amplitude, k, (), ())

    @classmethod
    def samples(cls, times, values, horizon=None):
        times = tuple(float(t) for t in times)
        values = tuple(float(v) for v in values)
        if len(times) < 2 or len(times) != len(values):
            raise ValueError("need at least two (time, value) samples of equal length")
        if np.any(np.diff(times) <= 0):
            raise ValueError("sample times must be strictly increasing")
        if times[0] < 0:
            raise ValueError("sample times must be nonnegative")
        if horizon is None:
            horizon = times[-1]
        return cls._checked(SAMPLES, horizon, 1.0, 0.0, times, values)

    @classmethod
    def _checked(cls, kind, horizon, amplitude, k, times, values):
        numbers = [horizon, amplitude, k] + list(times) + list(values)
        if not all(math.isfinite(x) for x in numbers):
            raise ValueError("envelope parameters must be finite")
        if horizon <= 0:
            raise ValueError("horizon must be positive, got {}".format(horizon))
        return cls(kind, float(horizon), float(amplitude), float(k), times, values)

    ###############################################################################
    #                              EVALUATION                                     #
    ###############################################################################

    def _knots(self):
        # samples extended to [0, horizon] with the edge values held
        times, values = list(self.times), list(self.values)
        if times[0] > 0:
            times.insert(0, 0.0)
            values.insert(0, values[0])
        if times[-1] < self.horizon:
            times.append(self.horizon)
            values.append(values[-1])
        return np.array(times), np.array(values)

    def __call__(self, t):
        if self.kind == CONSTANT:
            return self.amplitude
        elif self.kind == SINUSOID:
            return self.amplitude * math.sin(self.k * t)
        elif self.kind == SAMPLES:
            return float(np.interp(t, self.times, self.values))
        else:
            raise NotImplementedError()

    def phase(self, t):
        if self.kind == CONSTANT:
            return self.amplitude * t
        elif self.kind == SINUSOID:
            if self.k == 0:
                return 0.0
            return self.amplitude * (1.0 - math.cos(self.k * t)) / self.k
        elif self.kind == SAMPLES:
            knots, values = self._knots()
            return tabulated_integral(knots, values, t)
        else:
            raise NotImplementedError()

    def breakpoints(self):
        """points in [0, horizon] where |r| is not smooth"""
        if self.kind == SINUSOID and self.k > 0:
            half_period = math.pi / self.k
            return [i * half_period for i in range(1, int(self.horizon / half_period) + 1)]
        elif self.kind == SAMPLES:
            knots, values = self._knots()
            points = list(knots)
            for (t0, v0), (t1, v1) in zip(zip(knots[:-1], values[:-1]), zip(knots[1:], values[1:])):
                if v0 * v1 < 0:
                    points.append(t0 + v0 / (v0 - v1) * (t1 - t0))
            return sorted(points)
        return []

    def is_zero(self):
        if self.kind == CONSTANT:
            return self.amplitude == 0
        elif self.kind == SINUSOID:
            return self.amplitude == 0 or self.k == 0
        elif self.kind == SAMPLES:
            return all(v == 0 for v in self.values)
        else:
            raise NotImplementedError()

    def first_phase_time(self, target):
        """smallest t in [0, horizon] with |phase(t)| >= target"""
        if target <= 0:
            return 0.0

        if self.kind == CONSTANT:
            if self.amplitude == 0:
                return INFEASIBLE
            t = target / abs(self.amplitude)
        elif self.kind == SINUSOID:
            if self.is_zero() or target > 2.0 * abs(self.amplitude) / self.k:
                return INFEASIBLE
            t = math.acos(1.0 - self.k * target / abs(self.amplitude)) / self.k
        elif self.kind == SAMPLES:
            return first_crossing(lambda s: abs(self.phase(s)), target, self.horizon)
        else:
            raise NotImplementedError()

        return t if t <= self.horizon else INFEASIBLE
