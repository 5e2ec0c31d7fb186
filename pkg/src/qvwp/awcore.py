"""Parameter algebra and the second order difference operators.

Hecke parameters (kappa, lambda, upsilon, varsigma; q, s) determine the
Askey-Wilson parameters

    a = q**(kappa+lambda),      b = -q**(kappa-lambda),
    c = q**(s/2+upsilon+varsigma), d = -q**(s/2+upsilon-varsigma),

and their duals, obtained by interchanging lambda and upsilon.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, replace
from fractions import Fraction

from .config import Tolerance
from .exceptions import DomainError, PoleError
from .qcore import DEFAULT_TOLERANCE, qpow

logger = logging.getLogger(__name__)

# Operand of D and L: any function evaluable at x and x +- step
GridFunction = Callable[[complex], complex]


@dataclass(frozen=True)
class HeckeParams:
    """Real Hecke parameters with deformation parameter q and exact step size s."""

    kappa: float
    lambda_: float
    upsilon: float
    varsigma: float
    q: float
    s: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        """Validation."""
        if not 0 < self.q < 1:
            raise DomainError(f"q must lie in (0, 1), got {self.q}", argument="q", value=self.q)
        step = Fraction(self.s)
        if step <= 0:
            raise DomainError(f"s must be positive, got {self.s}", argument="s", value=self.s)
        object.__setattr__(self, "s", step)
        for name in ("kappa", "lambda_", "upsilon", "varsigma"):
            value = getattr(self, name)
            if isinstance(value, complex):
                raise DomainError(f"{name} must be real", argument=name, value=value)
            object.__setattr__(self, name, float(value))

    @property
    def base(self) -> float:
        """The series base q**s."""
        return float(self.q ** float(self.s))

    def power(self, offset: complex, steps: Fraction | int = 0) -> complex:
        """Return q**(offset + steps*s), adding the rational part exactly first."""
        return qpow(self.q, complex(offset) + float(Fraction(steps) * self.s))

    def with_step(self, s: Fraction | int) -> "HeckeParams":
        """Same parameters with a different step size."""
        return replace(self, s=Fraction(s))

    def shifted(
        self, kappa: int = 0, lambda_: int = 0, upsilon: int = 0, varsigma: int = 0
    ) -> "HeckeParams":
        """Shift the Hecke parameters by integer multiples of s."""
        step = float(self.s)
        return replace(
            self,
            kappa=self.kappa + kappa * step,
            lambda_=self.lambda_ + lambda_ * step,
            upsilon=self.upsilon + upsilon * step,
            varsigma=self.varsigma + varsigma * step,
        )


@dataclass(frozen=True)
class AWParams:
    """Askey-Wilson parameters (a, b, c, d) and their duals."""

    a: complex
    b: complex
    c: complex
    d: complex
    a_dual: complex
    b_dual: complex
    c_dual: complex
    d_dual: complex

    def as_tuple(self) -> tuple[complex, complex, complex, complex]:
        """The four primary parameters in order (a, b, c, d)."""
        return (self.a, self.b, self.c, self.d)

    @property
    def product(self) -> complex:
        """abcd."""
        return self.a * self.b * self.c * self.d


def dual(params: HeckeParams) -> HeckeParams:
    """Interchange lambda and upsilon."""
    return replace(params, lambda_=params.upsilon, upsilon=params.lambda_)


def _aw_quadruple(
    kappa: float, lambda_: float, upsilon: float, varsigma: float, params: HeckeParams
) -> tuple[complex, complex, complex, complex]:
    half = Fraction(1, 2)
    return (
        params.power(kappa + lambda_),
        -params.power(kappa - lambda_),
        params.power(upsilon + varsigma, half),
        -params.power(upsilon - varsigma, half),
    )


def derive_aw(params: HeckeParams) -> AWParams:
    """Askey-Wilson parameters and duals of a Hecke parameter tuple.

    Args:
        params: Hecke parameters

    Returns:
        AWParams with a = q**(kappa+lambda), ..., d_dual = -q**(s/2+lambda-varsigma)
    """
    p = params
    a, b, c, d = _aw_quadruple(p.kappa, p.lambda_, p.upsilon, p.varsigma, p)
    at, bt, ct, dt = _aw_quadruple(p.kappa, p.upsilon, p.lambda_, p.varsigma, p)
    return AWParams(a, b, c, d, at, bt, ct, dt)


def genericity(params: HeckeParams, depth: int = 3) -> float:
    """Smallest distance from 1 of the products that control degeneracies.

    Scans a_i a_j q**(ks), a_i / a_j q**(ks) and abcd q**(ks) for |k| <= depth.
    Small values flag parameters close to a degenerate configuration.
    """
    aw = derive_aw(params)
    quad = aw.as_tuple()
    products: list[complex] = [aw.product]
    for i in range(4):
        for j in range(i + 1, 4):
            products.append(quad[i] * quad[j])
            products.append(quad[i] / quad[j])
            products.append(quad[j] / quad[i])
    base = params.base
    return min(abs(1 - value * base**k) for value in products for k in range(-depth, depth + 1))


def _require_away(value: complex, quantity: str, tol: Tolerance) -> None:
    if abs(value) < tol.pole_guard:
        raise PoleError(f"{quantity} vanishes", quantity=quantity, value=value)


def coeff_A(x: complex, params: HeckeParams, tol: Tolerance = DEFAULT_TOLERANCE) -> complex:
    """Coefficient A(x) of the Askey-Wilson operator.

    A(x) = (1 - a q**x)(1 - b q**x)(1 - c q**x)(1 - d q**x)
           / [a_dual (1 - q**(2x))(1 - q**(s+2x))]

    Raises:
        PoleError: Near q**(2x) = 1 or q**(s+2x) = 1
    """
    aw = derive_aw(params)
    qx = params.power(x)
    qx2 = params.power(2 * complex(x))
    first = 1 - qx2
    second = 1 - qx2 * params.base
    _require_away(first, "1 - q^(2x)", tol)
    _require_away(second, "1 - q^(s+2x)", tol)
    numerator = (1 - aw.a * qx) * (1 - aw.b * qx) * (1 - aw.c * qx) * (1 - aw.d * qx)
    return numerator / (aw.a_dual * first * second)


def apply_D(
    f: GridFunction,
    x: complex,
    params: HeckeParams,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> complex:
    """(D f)(x) = A(x)(f(x+s) - f(x)) + A(-x)(f(x-s) - f(x)).

    Args:
        f: Operand, evaluated at x and x +- s
        x: Point
        params: Hecke parameters (step size s included)
        tol: Pole guard settings

    Returns:
        Value of the operator applied to f at x
    """
    x = complex(x)
    step = float(params.s)
    center = complex(f(x))
    forward = coeff_A(x, params, tol)
    backward = coeff_A(-x, params, tol)
    return forward * (complex(f(x + step)) - center) + backward * (complex(f(x - step)) - center)


def apply_L(
    f: GridFunction,
    x: complex,
    params: HeckeParams,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> complex:
    """Half-step operator L built from kappa and lambda.

    (L f)(x) = (1 - q**(k+l+x))(1 + q**(k-l+x)) / [q**k (1 - q**(2x))] f(x + s/2)
             + (same with x -> -x) f(x - s/2),     k = kappa, l = lambda

    Only kappa, lambda, q and s of ``params`` are used. L - q**kappa - q**(-kappa)
    equals D for the Hecke tuple (kappa, lambda, 0, 0) with step s/2.

    Raises:
        PoleError: Near q**(2x) = 1
    """
    x = complex(x)
    half = float(params.s) / 2
    forward, backward = L_coefficients(x, params, tol)
    return forward * complex(f(x + half)) + backward * complex(f(x - half))


def L_coefficients(
    x: complex, params: HeckeParams, tol: Tolerance = DEFAULT_TOLERANCE
) -> tuple[complex, complex]:
    """Coefficients of f(x + s/2) and f(x - s/2) in (L f)(x)."""
    qk = params.power(params.kappa)

    def coefficient(y: complex) -> complex:
        denominator = 1 - params.power(2 * y)
        _require_away(denominator, "1 - q^(2x)", tol)
        plus = params.power(params.kappa + params.lambda_ + y)
        minus = params.power(params.kappa - params.lambda_ + y)
        return (1 - plus) * (1 + minus) / (qk * denominator)

    return coefficient(complex(x)), coefficient(-complex(x))


def specialize_J(kappa: float, lambda_: float, q: float, s: Fraction | int = 1) -> HeckeParams:
    """Hecke tuple (kappa, lambda, kappa, lambda) with step s (continuous q-Jacobi case)."""
    return HeckeParams(kappa, lambda_, kappa, lambda_, q, Fraction(s))


def specialize_R(kappa: float, lambda_: float, q: float, s: Fraction | int = 1) -> HeckeParams:
    """Hecke tuple (kappa, lambda, 0, 0) with step s/2.

    Functions of the R-specialization are evaluated at spectral point z/2;
    halving the spectral variable is left to the caller.
    """
    return HeckeParams(kappa, lambda_, 0.0, 0.0, q, Fraction(s) / 2)
