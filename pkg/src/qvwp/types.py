"""Value types shared by the series engines, eigenfunctions and reports."""

import cmath
import sys
from dataclasses import dataclass
from enum import Enum
from typing import Union

# Complex scalars are plain Python complex numbers
ComplexScalar = complex

_EPS = sys.float_info.epsilon


class PsiRoute(str, Enum):
    """Series representation used to evaluate Psi."""

    AUTO = "auto"
    W87 = "w87"
    PHI43 = "phi43"


class ERoute(str, Enum):
    """Evaluation route for the Askey-Wilson function."""

    AUTO = "auto"
    SERIES = "series"
    EXPANSION = "expansion"


class OutputFormat(str, Enum):
    """CLI output formats."""

    JSON = "json"
    TABLE = "table"


Operand = Union["SeriesValue", complex, float, int]


@dataclass(frozen=True, slots=True)
class SeriesValue:
    """A computed complex value with truncation diagnostics.

    ``tail_estimate`` bounds the absolute error of the value: truncation plus
    accumulated rounding. Arithmetic between values propagates it to first
    order, and a sum also picks up the rounding of its cancellation.
    ``converged`` of a derived value is the conjunction of its constituents.
    """

    value: complex
    terms_used: int = 0
    tail_estimate: float = 0.0
    converged: bool = True

    @classmethod
    def exact(cls, value: complex) -> "SeriesValue":
        """Wrap a value that carries no truncation error."""
        return cls(complex(value))

    @property
    def relative_tail(self) -> float:
        """Truncation error relative to the value (0 when the value is 0)."""
        magnitude = abs(self.value)
        return self.tail_estimate / magnitude if magnitude else 0.0

    def is_finite(self) -> bool:
        """True when the value has no NaN/Inf component."""
        return cmath.isfinite(self.value)

    def __complex__(self) -> complex:
        return complex(self.value)

    def __abs__(self) -> float:
        return abs(self.value)

    def __neg__(self) -> "SeriesValue":
        return SeriesValue(-self.value, self.terms_used, self.tail_estimate, self.converged)

    def __add__(self, other: Operand) -> "SeriesValue":
        rhs = _lift(other)
        rounding = _EPS * (abs(self.value) + abs(rhs.value))
        return SeriesValue(
            self.value + rhs.value,
            self.terms_used + rhs.terms_used,
            self.tail_estimate + rhs.tail_estimate + rounding,
            self.converged and rhs.converged,
        )

    __radd__ = __add__

    def __sub__(self, other: Operand) -> "SeriesValue":
        return self + (-_lift(other))

    def __rsub__(self, other: Operand) -> "SeriesValue":
        return _lift(other) + (-self)

    def __mul__(self, other: Operand) -> "SeriesValue":
        rhs = _lift(other)
        return SeriesValue(
            self.value * rhs.value,
            self.terms_used + rhs.terms_used,
            abs(self.value) * rhs.tail_estimate + abs(rhs.value) * self.tail_estimate,
            self.converged and rhs.converged,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: Operand) -> "SeriesValue":
        rhs = _lift(other)
        quotient = self.value / rhs.value
        tail = (self.tail_estimate + abs(quotient) * rhs.tail_estimate) / abs(rhs.value)
        return SeriesValue(
            quotient,
            self.terms_used + rhs.terms_used,
            tail,
            self.converged and rhs.converged,
        )

    def __rtruediv__(self, other: Operand) -> "SeriesValue":
        return _lift(other) / self


def _lift(operand: Operand) -> SeriesValue:
    if isinstance(operand, SeriesValue):
        return operand
    return SeriesValue(complex(operand))


@dataclass(frozen=True)
class EvalPoint:
    """A pair (x, z) of complex arguments: position and spectral variable."""

    x: complex
    z: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", complex(self.x))
        object.__setattr__(self, "z", complex(self.z))
        if not (cmath.isfinite(self.x) and cmath.isfinite(self.z)):
            raise ValueError("EvalPoint components must be finite")

    def swapped(self) -> "EvalPoint":
        """The point (z, x), as used by duality statements."""
        return EvalPoint(self.z, self.x)

    def with_x(self, x: complex) -> "EvalPoint":
        return EvalPoint(x, self.z)

    def with_z(self, z: complex) -> "EvalPoint":
        return EvalPoint(self.x, z)


@dataclass(frozen=True)
class EigenValue:
    """Eigenvalue of the Askey-Wilson operator attached to a spectral point."""

    value: complex
