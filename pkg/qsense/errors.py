from enum import Enum
import math


class SensingError(Exception):
    pass


class NonConvergence(SensingError):
    pass


class NoInformation(SensingError):
    """
    The probe never moves away from the reference (zero energy spread, zero information rate)
    """
    pass


class InvalidReference(SensingError):
    pass


class DimensionTooLarge(SensingError):
    pass


class Degenerate(SensingError):
    pass


class ScalingViolation(SensingError):
    pass


class WorkerError(SensingError):
    pass


class SpecError(SensingError):
    def __init__(self, message, field=None, line=None):
        super().__init__(message)
        self.field = field
        self.line = line

    def __str__(self):
        location = []
        if self.line is not None:
            location.append("line {}".format(self.line))
        if self.field is not None:
            location.append("field '{}'".format(self.field))
        message = super().__str__()
        if location:
            return "{}: {}".format(", ".join(location), message)
        return message


# a value, not an exception: the target fidelity is not reached within the horizon
class Infeasible(Enum):
    INFEASIBLE = "infeasible"

    def __repr__(self):
        return "INFEASIBLE"


INFEASIBLE = Infeasible.INFEASIBLE


def is_feasible(value):
    return value is not INFEASIBLE and value is not None and math.isfinite(value)
