"""Foundational q-series engine.

Complex powers of a real base q in (0, 1), q-Pochhammer symbols, modified
Jacobi theta functions, the basic hypergeometric series r+1phi_r and the
very-well-poised 8W7 series. Every infinite sum or product returns a
:class:`~qvwp.types.SeriesValue` carrying its truncation diagnostics.
"""

import cmath
import logging
import math
import sys
from collections.abc import Sequence

from .config import Tolerance
from .exceptions import ConvergenceRegionError, DomainError, PoleError
from .types import SeriesValue

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = Tolerance()

# Consecutive small terms required before a sum is considered converged
_SMALL_RUN = 3

_EPS = sys.float_info.epsilon


def _check_base(q: float) -> None:
    if not 0 < q < 1:
        raise DomainError(f"q must lie in (0, 1), got {q}", argument="q", value=q)


def qpow(q: float, x: complex) -> complex:
    """Return q**x := exp(x ln q) with the real logarithm of q.

    Args:
        q: Base in (0, 1)
        x: Complex exponent

    Returns:
        q to the power x

    Raises:
        DomainError: If q is outside (0, 1)
    """
    _check_base(q)
    return cmath.exp(complex(x) * math.log(q))


def vanishing_index(a: complex, q: float, tol: Tolerance = DEFAULT_TOLERANCE) -> int | None:
    """Return n >= 0 when a equals q**(-n) to within pole_guard * q**(-n).

    This is both the termination test of a numerator parameter and the
    vanishing test of (a; q)_inf.
    """
    magnitude = abs(a)
    if magnitude < 1.0 - tol.pole_guard:
        return None
    n = round(math.log(magnitude) / -math.log(q))
    if n < 0 or n > tol.term_cap:
        return None
    try:
        target = q ** (-n)
    except OverflowError:
        return None
    if abs(a - target) <= tol.pole_guard * target:
        return n
    return None


def theta_vanishes(u: complex, q: float, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    """True when theta(u; q) is within pole_guard of a zero (u = q**k, k in Z)."""
    if u == 0:
        return False
    return vanishing_index(u, q, tol) is not None or vanishing_index(q / u, q, tol) is not None


def qpochhammer_finite(a: complex, q: float, n: int) -> complex:
    """Finite q-Pochhammer symbol (a; q)_n = prod_{i<n} (1 - a q**i).

    Args:
        a: Parameter
        q: Base
        n: Number of factors (0 gives the empty product 1)

    Returns:
        The finite product
    """
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}", argument="n", value=n)
    result = 1 + 0j
    factor = complex(a)
    for _ in range(n):
        result *= 1 - factor
        factor *= q
    return result


def qpochhammer_inf(a: complex, q: float, tol: Tolerance = DEFAULT_TOLERANCE) -> SeriesValue:
    """Infinite q-Pochhammer symbol (a; q)_inf.

    Factors are multiplied until |a q**i| < rel_tol and the omitted tail,
    bounded through |log prod_{k>=i} (1 - a q**k)| <= sum_{k>=i} 2|a| q**k,
    is below rel_tol relative to max(1, |value|).

    Args:
        a: Parameter
        q: Base in (0, 1)
        tol: Truncation settings

    Returns:
        SeriesValue with the absolute tail bound in ``tail_estimate``
    """
    _check_base(q)
    value = 1 + 0j
    factor = complex(a)
    used = 0
    while True:
        size = abs(factor)
        if size < tol.rel_tol:
            log_bound = 2.0 * size / (1.0 - q)
            tail = abs(value) * math.expm1(log_bound)
            if tail <= tol.rel_tol * max(1.0, abs(value)):
                return SeriesValue(value, used, tail, True)
        if used >= tol.term_cap:
            bound = 2.0 * size / (1.0 - q)
            tail = abs(value) * math.expm1(bound) if size <= 0.5 else math.inf
            logger.warning(f"(a; q)_inf hit term_cap={tol.term_cap} at a={a}, q={q}")
            return SeriesValue(value, used, tail, False)
        value *= 1 - factor
        factor *= q
        used += 1
        if value == 0:
            return SeriesValue(0j, used, 0.0, True)


def qpochhammer_multi(
    params: Sequence[complex],
    q: float,
    n: int | None = None,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> SeriesValue:
    """Product of q-Pochhammer symbols (a_1, ..., a_r; q)_n.

    Args:
        params: Parameters a_1..a_r
        q: Base
        n: Number of factors per parameter, or None for the infinite product
        tol: Truncation settings

    Returns:
        SeriesValue aggregating the per-parameter diagnostics
    """
    if not params:
        raise DomainError("qpochhammer_multi needs at least one parameter", argument="params")
    result = SeriesValue.exact(1)
    for a in params:
        if n is None:
            result = result * qpochhammer_inf(a, q, tol)
        else:
            result = result * SeriesValue(qpochhammer_finite(a, q, n), n)
    return result


def theta(u: complex, q: float, tol: Tolerance = DEFAULT_TOLERANCE) -> SeriesValue:
    """Modified Jacobi theta function theta(u; q) = (u, q/u; q)_inf.

    Raises:
        DomainError: If u = 0
    """
    if u == 0:
        raise DomainError("theta(u; q) is undefined at u = 0", argument="u", value=u)
    return qpochhammer_inf(u, q, tol) * qpochhammer_inf(q / u, q, tol)


def theta_multi(
    us: Sequence[complex],
    q: float,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> SeriesValue:
    """Product theta(u_1, ..., u_r; q) of theta functions; empty product is 1."""
    result = SeriesValue.exact(1)
    for u in us:
        result = result * theta(u, q, tol)
    return result


def require_nonvanishing(
    params: Sequence[complex],
    q: float,
    quantity: str,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> SeriesValue:
    """Return (params; q)_inf, raising PoleError if it is about to divide by zero.

    Args:
        params: Parameters of the denominator product
        q: Base
        quantity: Name of the denominator, recorded on the error
        tol: Truncation settings

    Raises:
        PoleError: If some (a; q)_inf vanishes within pole_guard
    """
    for a in params:
        if vanishing_index(a, q, tol) is not None:
            raise PoleError(f"{quantity} vanishes", quantity=quantity, value=a)
    return qpochhammer_multi(params, q, None, tol)


def require_theta_nonvanishing(
    us: Sequence[complex],
    q: float,
    quantity: str,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> SeriesValue:
    """Return theta(us; q), raising PoleError near a theta zero."""
    for u in us:
        if theta_vanishes(u, q, tol):
            raise PoleError(f"{quantity} vanishes", quantity=quantity, value=u)
    return theta_multi(us, q, tol)


def _termination(params: Sequence[complex], q: float, tol: Tolerance) -> int | None:
    indices = [n for n in (vanishing_index(a, q, tol) for a in params) if n is not None]
    return min(indices) if indices else None


def _geometric_tail(last_term: float, ratio: float) -> float:
    if ratio >= 1.0:
        return math.inf
    return last_term * ratio / (1.0 - ratio)


def _factor_drift(x: complex) -> float:
    """Relative rounding error of the computed factor 1 - x."""
    gap = abs(1 - x)
    return _EPS * (2.0 + abs(x) / gap) if gap else 0.0


def _finish(
    name: str,
    total: complex,
    used: int,
    truncation: float,
    roundoff: float,
    tol: Tolerance,
) -> SeriesValue:
    """Close a sum: the tail bound covers truncation and accumulated rounding.

    A sum whose rounding error exceeds roundoff_limit * max(1, |sum|) is
    returned with converged=False.
    """
    scale = max(1.0, abs(total))
    converged = roundoff <= tol.roundoff_limit * scale
    if not converged:
        logger.debug(
            f"{name} lost accuracy to cancellation: rounding bound {roundoff:.3e} "
            f"against |sum| = {abs(total):.3e} after {used} terms"
        )
    return SeriesValue(total, used, truncation + roundoff, converged)


def phi_series(
    num: Sequence[complex],
    den: Sequence[complex],
    q: float,
    z: complex,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> SeriesValue:
    """Basic hypergeometric series r+1phi_r(num; den; q, z).

    Terms are generated by their ratio. Summation stops once three
    consecutive terms are below rel_tol * |partial sum| and the geometric
    tail estimate (asymptotic term ratio |z|) is below rel_tol, or at the
    termination index when a numerator parameter equals q**(-n).

    The rounding error of every term grows with the factors of its ratio
    and is added, together with the summation error, to ``tail_estimate``.
    Heavy cancellation therefore shows up as a large tail and converged=False.

    Args:
        num: r+1 numerator parameters
        den: r denominator parameters
        q: Base in (0, 1)
        z: Argument
        tol: Truncation settings

    Returns:
        SeriesValue of the sum

    Raises:
        DomainError: On mismatched parameter counts
        ConvergenceRegionError: If |z| >= 1 and the series does not terminate
        PoleError: If a denominator factor (b; q)_j vanishes before termination
    """
    _check_base(q)
    if len(num) != len(den) + 1:
        raise DomainError(
            f"phi_series needs r+1 numerator and r denominator parameters, "
            f"got {len(num)} and {len(den)}",
            argument="num/den",
        )
    z = complex(z)
    stop = _termination(num, q, tol)
    if stop is None and abs(z) >= 1:
        raise ConvergenceRegionError(
            f"non-terminating series needs |z| < 1, got |z| = {abs(z):.6g}",
            argument="z",
            value=z,
        )
    total = 1 + 0j
    term = 1 + 0j
    drift = 0.0  # relative rounding error of the current term
    roundoff = 0.0
    small_run = 0
    qj = 1.0
    j = 0
    while True:
        if stop is not None and j >= stop:
            return _finish("phi_series", total, j + 1, 0.0, roundoff, tol)
        if j >= tol.term_cap:
            tail = _geometric_tail(abs(term), abs(z))
            logger.warning(f"phi_series hit term_cap={tol.term_cap} (|z| = {abs(z):.3g})")
            return SeriesValue(total, j + 1, tail + roundoff, False)
        ratio = z / (1 - qj * q)
        drift += 2 * _EPS + _factor_drift(qj * q)
        for a in num:
            ratio *= 1 - a * qj
            drift += _factor_drift(a * qj)
        for b in den:
            factor = 1 - b * qj
            if abs(factor) < tol.pole_guard:
                raise PoleError(
                    f"denominator factor (b; q)_{j + 1} vanishes",
                    quantity="phi_series denominator",
                    value=b,
                )
            ratio /= factor
            drift += _factor_drift(b * qj)
        term *= ratio
        total += term
        roundoff += drift * abs(term) + _EPS * abs(total)
        j += 1
        qj *= q
        if term == 0:
            return _finish("phi_series", total, j + 1, 0.0, roundoff, tol)
        if abs(term) < tol.rel_tol * abs(total):
            small_run += 1
        else:
            small_run = 0
        if small_run >= _SMALL_RUN:
            tail = _geometric_tail(abs(term), abs(z))
            if tail <= tol.rel_tol * max(1.0, abs(total)):
                return _finish("phi_series", total, j + 1, tail, roundoff, tol)


def w8_7(
    a0: complex,
    alphas: Sequence[complex],
    q: float,
    z: complex,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> SeriesValue:
    """Very-well-poised series 8W7(a0; a1, ..., a5; q, z).

    Evaluated from the explicit term
    (1 - a0 q**(2r)) / (1 - a0) * z**r * prod_{j=0..5} (a_j; q)_r / (q a0 / a_j; q)_r
    rather than through an 8phi7 with the +-sqrt(a0) parameters.

    Args:
        a0: Well-poised parameter
        alphas: The five parameters a1..a5
        q: Base in (0, 1)
        z: Argument
        tol: Truncation settings

    Returns:
        SeriesValue of the sum

    Raises:
        DomainError: On a wrong number of parameters or a zero parameter
        ConvergenceRegionError: If |z| >= 1 and the series does not terminate
        PoleError: If a0 is within pole_guard of 1 or a factor of (q a0 / a_j; q)_r vanishes
    """
    _check_base(q)
    if len(alphas) != 5:
        raise DomainError(
            f"w8_7 needs five parameters a1..a5, got {len(alphas)}", argument="alphas"
        )
    if any(a == 0 for a in alphas):
        raise DomainError("w8_7 parameters a1..a5 must be nonzero", argument="alphas")
    a0 = complex(a0)
    z = complex(z)
    if abs(1 - a0) < tol.pole_guard:
        raise PoleError("well-poised factor 1/(1 - a0) is singular", quantity="1 - a0", value=a0)
    stop = _termination(alphas, q, tol)
    if stop is None and abs(z) >= 1:
        raise ConvergenceRegionError(
            f"non-terminating 8W7 needs |z| < 1, got |z| = {abs(z):.6g}",
            argument="z",
            value=z,
        )
    dens = [q * a0 / a for a in alphas]
    norm = 1 - a0
    norm_drift = _factor_drift(a0)
    total = 1 + 0j
    core = 1 + 0j  # z**r prod_j (a_j; q)_r / (q a0 / a_j; q)_r, j = 0..5
    drift = 0.0  # relative rounding error of core
    roundoff = 0.0
    small_run = 0
    qr = 1.0
    r = 0
    while True:
        if stop is not None and r >= stop:
            return _finish("w8_7", total, r + 1, 0.0, roundoff, tol)
        if r >= tol.term_cap:
            tail = _geometric_tail(abs(core), abs(z))
            logger.warning(f"w8_7 hit term_cap={tol.term_cap} (|z| = {abs(z):.3g})")
            return SeriesValue(total, r + 1, tail + roundoff, False)
        ratio = z * (1 - a0 * qr) / (1 - q * qr)
        drift += 3 * _EPS + _factor_drift(a0 * qr) + _factor_drift(q * qr)
        for a, b in zip(alphas, dens):
            factor = 1 - b * qr
            if abs(factor) < tol.pole_guard:
                raise PoleError(
                    f"denominator factor (q a0/a_j; q)_{r + 1} vanishes",
                    quantity="w8_7 denominator",
                    value=b,
                )
            ratio *= (1 - a * qr) / factor
            drift += 2 * _EPS + _factor_drift(a * qr) + _factor_drift(b * qr)
        core *= ratio
        r += 1
        qr *= q
        term = (1 - a0 * qr * qr) / norm * core
        total += term
        term_drift = drift + norm_drift + _factor_drift(a0 * qr * qr)
        roundoff += term_drift * abs(term) + _EPS * abs(total)
        if core == 0:
            return _finish("w8_7", total, r + 1, 0.0, roundoff, tol)
        if abs(term) < tol.rel_tol * abs(total):
            small_run += 1
        else:
            small_run = 0
        if small_run >= _SMALL_RUN:
            tail = _geometric_tail(abs(term), abs(z))
            if tail <= tol.rel_tol * max(1.0, abs(total)):
                return _finish("w8_7", total, r + 1, tail, roundoff, tol)
