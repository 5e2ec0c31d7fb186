"""Eigenfunctions of the Askey-Wilson difference operator.

The asymptotically free eigenfunction Phi = W Psi / (St St^d), the
normalized c-function, the Askey-Wilson function E with its c-function
expansion, the renormalization Phi~ = c Phi and the Askey-Wilson
polynomials P_n, plus the explicit c-functions of the continuous
q-Jacobi (J) and Rahman (R) specializations.
"""

import logging
from collections.abc import Sequence
from fractions import Fraction

from .awcore import AWParams, HeckeParams, derive_aw, dual, specialize_J, specialize_R
from .config import Tolerance
from .exceptions import (
    ConvergenceRegionError,
    DegeneracyError,
    PoleError,
    QVWPError,
    UnreachableRegionError,
)
from .qcore import (
    DEFAULT_TOLERANCE,
    phi_series,
    qpochhammer_finite,
    qpochhammer_multi,
    qpow,
    require_nonvanishing,
    require_theta_nonvanishing,
    theta_multi,
    vanishing_index,
    w8_7,
)
from .types import EigenValue, ERoute, EvalPoint, PsiRoute, SeriesValue

logger = logging.getLogger(__name__)


def W_fn(pt: EvalPoint, params: HeckeParams) -> complex:
    """Elementary factor W(x, z) = q**((kappa+lambda+x)(kappa+upsilon+z)/s)."""
    exponent = (params.kappa + params.lambda_ + pt.x) * (params.kappa + params.upsilon + pt.z)
    return qpow(params.q, exponent / float(params.s))


def St(x: complex, params: HeckeParams, tol: Tolerance = DEFAULT_TOLERANCE) -> SeriesValue:
    """Singular term (q**(s+x)/a, q**(s+x)/b, q**(s+x)/c, q**(s+x)/d; q**s)_inf."""
    aw = derive_aw(params)
    shift = params.power(x, 1)
    return qpochhammer_multi([shift / p for p in aw.as_tuple()], params.base, None, tol)


def St_dual(z: complex, params: HeckeParams, tol: Tolerance = DEFAULT_TOLERANCE) -> SeriesValue:
    """Singular term with respect to the dual parameters."""
    return St(z, dual(params), tol)


def eigenvalue(z: complex, params: HeckeParams) -> EigenValue:
    """Eigenvalue q**z + q**(-z) - a_dual - 1/a_dual attached to the spectral point z."""
    at = derive_aw(params).a_dual
    qz = params.power(z)
    return EigenValue(qz + 1 / qz - at - 1 / at)


def poly_spectral_point(n: int, params: HeckeParams) -> complex:
    """Spectral point -kappa-upsilon-ns where Phi and E reduce to P_n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return complex(-params.kappa - params.upsilon - float(n * params.s))


def polynomial_eigenvalue(n: int, params: HeckeParams) -> EigenValue:
    """Eigenvalue of P_n under D: a_dual (q**(ns) - 1) + (q**(-ns) - 1) / a_dual."""
    if n < 0:
        raise ValueError("n must be >= 0")
    at = derive_aw(params).a_dual
    qn = params.base**n
    return EigenValue(at * (qn - 1) + (1 / qn - 1) / at)


def _psi_w87(
    qx: complex,
    qz: complex,
    a: complex,
    b: complex,
    c: complex,
    d: complex,
    at: complex,
    p: float,
    tol: Tolerance,
) -> SeriesValue:
    bt, ct, dt = a * b / at, a * c / at, a * d / at
    head = p * qx * qz
    prefactor = qpochhammer_multi(
        [head * a / at, head * b / at, head * c / at, head * at / d, p * qz * qz, d * qx],
        p,
        None,
        tol,
    )
    a0 = p * qx * qz * qz / d
    denominator = require_nonvanishing([p * a0], p, "(q^(2s+x+2z)/d; q^s)_inf", tol)
    series = w8_7(a0, [p * qz / at, p * qz / dt, bt * qz, ct * qz, p * qx / d], p, d * qx, tol)
    return prefactor * series / denominator


def _psi_phi43_term(
    qx: complex,
    qz: complex,
    a: complex,
    b: complex,
    c: complex,
    d: complex,
    at: complex,
    p: float,
    tol: Tolerance,
) -> SeriesValue:
    head = p * qx * qz
    prefactor = qpochhammer_multi(
        [
            p * qx / a,
            d * qx,
            p * qz * at / (a * b),
            p * qz * at / (a * c),
            head * a / at,
            head * at / d,
        ],
        p,
        None,
        tol,
    )
    denominator = require_nonvanishing([d / a], p, "(d/a; q^s)_inf", tol)
    series = phi_series(
        [a * qx, p * qx / d, a * b * qz / at, a * c * qz / at],
        [head * a / at, head * at / d, p * a / d],
        p,
        p,
        tol,
    )
    return prefactor * series / denominator


def _psi_phi43(
    qx: complex,
    qz: complex,
    a: complex,
    b: complex,
    c: complex,
    d: complex,
    at: complex,
    p: float,
    tol: Tolerance,
) -> SeriesValue:
    # The second term is the first with a and d interchanged
    first = _psi_phi43_term(qx, qz, a, b, c, d, at, p, tol)
    second = _psi_phi43_term(qx, qz, d, b, c, a, at, p, tol)
    return first + second


def psi_from_aw(
    x: complex,
    z: complex,
    aw: Sequence[complex],
    a_dual: complex,
    q: float,
    s: Fraction,
    tol: Tolerance = DEFAULT_TOLERANCE,
    route: PsiRoute = PsiRoute.AUTO,
) -> SeriesValue:
    """Psi(x, z) written through the Askey-Wilson parameters (a, b, c, d) and a_dual.

    The remaining dual parameters follow from b_dual = ab/a_dual, c_dual = ac/a_dual
    and d_dual = ad/a_dual, so permuting ``aw`` evaluates Psi at permuted
    Askey-Wilson parameters.

    Args:
        x: Position
        z: Spectral variable
        aw: The four parameters (a, b, c, d)
        a_dual: Dual parameter a_dual (a_dual**2 = q**(-s) abcd)
        q: Deformation parameter
        s: Step size
        tol: Truncation and route settings
        route: ``w87`` for the very-well-poised series, ``phi43`` for the sum
            of two balanced 4phi3 series, ``auto`` to take the 8W7 form when it
            applies and converged, else the more accurate of the two

    Returns:
        SeriesValue of Psi

    Raises:
        DegeneracyError: If both routes are pole-blocked under ``auto``
    """
    a, b, c, d = (complex(v) for v in aw)
    at = complex(a_dual)
    p = float(q ** float(s))
    qx = qpow(q, x)
    qz = qpow(q, z)
    if route is PsiRoute.W87:
        return _psi_w87(qx, qz, a, b, c, d, at, p, tol)
    if route is PsiRoute.PHI43:
        return _psi_phi43(qx, qz, a, b, c, d, at, p, tol)

    causes: list[QVWPError] = []
    w87: SeriesValue | None = None
    if abs(d * qx) < tol.series_radius:
        try:
            w87 = _psi_w87(qx, qz, a, b, c, d, at, p, tol)
        except (PoleError, ConvergenceRegionError) as e:
            logger.debug(f"Psi 8W7 route blocked at x={x}, z={z}: {e}")
            causes.append(e)
    if w87 is not None and w87.converged:
        return w87
    if w87 is not None:
        logger.debug(
            f"Psi 8W7 route lost accuracy at x={x}, z={z} "
            f"(relative tail {w87.relative_tail:.3e}), trying 4phi3"
        )
    try:
        phi43 = _psi_phi43(qx, qz, a, b, c, d, at, p, tol)
    except PoleError as e:
        if w87 is not None:
            return w87
        causes.append(e)
        raise DegeneracyError(f"Psi is pole-blocked on every route at x={x}, z={z}", causes)
    return _more_accurate(w87, phi43)


def _more_accurate(first: SeriesValue | None, second: SeriesValue) -> SeriesValue:
    """Prefer a converged value, then the smaller relative tail."""
    if first is None:
        return second
    if first.converged != second.converged:
        return first if first.converged else second
    return first if first.relative_tail <= second.relative_tail else second


def Psi(
    pt: EvalPoint,
    params: HeckeParams,
    tol: Tolerance = DEFAULT_TOLERANCE,
    route: PsiRoute = PsiRoute.AUTO,
) -> SeriesValue:
    """Holomorphic part Psi(x, z) of the asymptotically free eigenfunction."""
    aw = derive_aw(params)
    return psi_from_aw(pt.x, pt.z, aw.as_tuple(), aw.a_dual, params.q, params.s, tol, route)


def Phi(
    pt: EvalPoint,
    params: HeckeParams,
    tol: Tolerance = DEFAULT_TOLERANCE,
    route: PsiRoute = PsiRoute.AUTO,
) -> SeriesValue:
    """Asymptotically free eigenfunction Phi(x, z) = W(x, z) Psi(x, z) / (St(x) St^d(z)).

    Args:
        pt: Point (x, z)
        params: Hecke parameters
        tol: Truncation and route settings
        route: Series route for Psi

    Returns:
        SeriesValue of Phi

    Raises:
        PoleError: If St(x) or St^d(z) vanishes
    """
    aw = derive_aw(params)
    p = params.base
    sx = params.power(pt.x, 1)
    sz = params.power(pt.z, 1)
    singular = require_nonvanishing([sx / v for v in aw.as_tuple()], p, "St(x)", tol)
    singular_dual = require_nonvanishing(
        [sz / aw.a_dual, sz / aw.b_dual, sz / aw.c_dual, sz / aw.d_dual], p, "St^d(z)", tol
    )
    psi = psi_from_aw(pt.x, pt.z, aw.as_tuple(), aw.a_dual, params.q, params.s, tol, route)
    return W_fn(pt, params) * psi / (singular * singular_dual)


def cfun(pt: EvalPoint, params: HeckeParams, tol: Tolerance = DEFAULT_TOLERANCE) -> SeriesValue:
    """Normalized c-function.

    c(x, z) = theta(a_dual q**-z, b_dual q**-z, c_dual q**-z, d q**(x-z)/a_dual; q**s)
              / [W(x, z) theta(q**(-2z), d q**x; q**s)]

    Raises:
        PoleError: If a denominator theta function vanishes
    """
    aw = derive_aw(params)
    p = params.base
    qmz = params.power(-pt.z)
    qx = params.power(pt.x)
    numerator = theta_multi(
        [aw.a_dual * qmz, aw.b_dual * qmz, aw.c_dual * qmz, aw.d * qx * qmz / aw.a_dual], p, tol
    )
    denominator = require_theta_nonvanishing(
        [qmz * qmz, aw.d * qx], p, "theta(q^(-2z), d q^x)", tol
    )
    return numerator / (W_fn(pt, params) * denominator)


def _e_argument(aw: AWParams, qz: complex, p: float) -> complex:
    return p / (qz * aw.d_dual)


def _e_terminates(aw: AWParams, qx: complex, qz: complex, p: float, tol: Tolerance) -> bool:
    upper = [aw.a * qx, aw.a / qx, aw.a_dual * qz, aw.b_dual * qz, aw.c_dual * qz]
    return any(vanishing_index(v, p, tol) is not None for v in upper)


def _e_series(pt: EvalPoint, params: HeckeParams, tol: Tolerance) -> SeriesValue:
    aw = derive_aw(params)
    p = params.base
    qx = params.power(pt.x)
    qz = params.power(pt.z)
    at, bt, ct = aw.a_dual, aw.b_dual, aw.c_dual
    a, b, c, d = aw.as_tuple()
    prefactor = qpochhammer_multi(
        [at * p * qz / (qx * d), at * p * qz * qx / d, a * b, a * c, p * a / d], p, None, tol
    )
    denominator = require_nonvanishing(
        [p * qx / d, p / (qx * d), p * qz / aw.d_dual, at * bt * ct * qz],
        p,
        "E prefactor denominator",
        tol,
    )
    series = w8_7(
        at * bt * ct * qz / p,
        [a * qx, a / qx, at * qz, bt * qz, ct * qz],
        p,
        _e_argument(aw, qz, p),
        tol,
    )
    return prefactor * series / denominator


def e_series_applies(
    pt: EvalPoint, params: HeckeParams, tol: Tolerance = DEFAULT_TOLERANCE
) -> bool:
    """True when the 8W7 form of E converges comfortably (or terminates) at pt."""
    aw = derive_aw(params)
    p = params.base
    qx = params.power(pt.x)
    qz = params.power(pt.z)
    if abs(_e_argument(aw, qz, p)) < tol.series_radius:
        return True
    return _e_terminates(aw, qx, qz, p, tol)


def E_aw(
    pt: EvalPoint,
    params: HeckeParams,
    tol: Tolerance = DEFAULT_TOLERANCE,
    route: ERoute = ERoute.AUTO,
) -> SeriesValue:
    """Askey-Wilson function E(x, z).

    ``auto`` tries the 8W7 form at (x, z), then at (x, -z), then the dual
    form at (z, x) and (z, -x), and finally the c-function expansion
    c(x, z) Phi(x, z) + c(x, -z) Phi(x, -z). ``series`` only evaluates the
    8W7 form at (x, z); ``expansion`` only the c-function expansion.
    Under ``auto`` a route that lost accuracy to cancellation gives way to the
    next one; when none converged the most accurate value is returned.

    Raises:
        ConvergenceRegionError: For ``series`` outside the convergence region
        UnreachableRegionError: If no route applies under ``auto``
    """
    if route is ERoute.SERIES:
        if not e_series_applies(pt, params, tol):
            raise ConvergenceRegionError(
                f"8W7 form of E needs |q^(s-z)/d_dual| < {tol.series_radius}",
                argument="z",
                value=pt.z,
            )
        return _e_series(pt, params, tol)
    if route is ERoute.EXPANSION:
        return _e_expansion(pt, params, tol)

    dual_params = dual(params)
    candidates = [
        ("series(x, z)", pt, params),
        ("series(x, -z)", pt.with_z(-pt.z), params),
        ("dual series(z, x)", pt.swapped(), dual_params),
        ("dual series(z, -x)", EvalPoint(pt.z, -pt.x), dual_params),
    ]
    attempts: list[str] = []
    best: SeriesValue | None = None
    for label, point, candidate in candidates:
        attempts.append(label)
        if not e_series_applies(point, candidate, tol):
            continue
        try:
            value = _e_series(point, candidate, tol)
        except QVWPError as e:
            logger.debug(f"E route {label} failed: {e}")
            continue
        if value.converged:
            logger.debug(f"E evaluated through {label}")
            return value
        logger.debug(f"E route {label} lost accuracy (relative tail {value.relative_tail:.3e})")
        best = _more_accurate(best, value)
    attempts.append("c-function expansion")
    try:
        return _more_accurate(best, _e_expansion(pt, params, tol))
    except QVWPError as e:
        logger.debug(f"E expansion failed: {e}")
    if best is not None:
        return best
    raise UnreachableRegionError(f"no route evaluates E at x={pt.x}, z={pt.z}", attempts)


def _e_expansion(pt: EvalPoint, params: HeckeParams, tol: Tolerance) -> SeriesValue:
    mirrored = pt.with_z(-pt.z)
    return cfun(pt, params, tol) * Phi(pt, params, tol) + cfun(mirrored, params, tol) * Phi(
        mirrored, params, tol
    )


def phi_tilde(
    pt: EvalPoint, params: HeckeParams, tol: Tolerance = DEFAULT_TOLERANCE
) -> SeriesValue:
    """Renormalized eigenfunction Phi~(x, z) = c(x, z) Phi(x, z)."""
    return cfun(pt, params, tol) * Phi(pt, params, tol)


def aw_polynomial(
    n: int, x: complex, params: HeckeParams, tol: Tolerance = DEFAULT_TOLERANCE
) -> complex:
    """Normalized Askey-Wilson polynomial P_n in q**x + q**(-x).

    P_n(x) = 4phi3(q**(-ns), q**((n-1)s) abcd, a q**x, a q**(-x); ab, ac, ad; q**s, q**s)

    Raises:
        PoleError: If (ab, ac, ad; q**s)_k vanishes for some k <= n
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    aw = derive_aw(params)
    p = params.base
    qx = params.power(x)
    a, b, c, d = aw.as_tuple()
    upper = [p ** (-n), p ** (n - 1) * aw.product, a * qx, a / qx]
    return phi_series(upper, [a * b, a * c, a * d], p, p, tol).value


def phi_poly_normalization(
    n: int, params: HeckeParams, tol: Tolerance = DEFAULT_TOLERANCE
) -> SeriesValue:
    """Constant K_n with Phi(x, -kappa-upsilon-ns) = K_n P_n(x).

    K_n = a**(-2n) (ab, ac, ad; q**s)_n (q**(2(1-n)s)/abcd; q**s)_inf
          / [(q**((n-1)s) abcd; q**s)_n St^d(-kappa-upsilon-ns)]
    """
    aw = derive_aw(params)
    p = params.base
    a, b, c, d = aw.as_tuple()
    abcd = aw.product
    finite = qpochhammer_finite(a * b, p, n) * qpochhammer_finite(a * c, p, n)
    finite *= qpochhammer_finite(a * d, p, n)
    balance = qpochhammer_finite(p ** (n - 1) * abcd, p, n)
    if abs(balance) < tol.pole_guard:
        raise PoleError("(q^((n-1)s) abcd; q^s)_n vanishes", quantity="balance", value=abcd)
    tail = qpochhammer_multi([p ** (2 * (1 - n)) / abcd], p, None, tol)
    singular = St_dual(poly_spectral_point(n, params), params, tol)
    if abs(singular.value) < tol.pole_guard:
        raise PoleError("St^d vanishes at the polynomial spectral point", quantity="St^d(z_n)")
    return a ** (-2 * n) * finite * tail / (balance * singular)


def e_poly_normalization(params: HeckeParams, tol: Tolerance = DEFAULT_TOLERANCE) -> SeriesValue:
    """Constant (ab, ac; q**s)_inf / (q**s/(ad); q**s)_inf.

    E(x, -kappa-upsilon-ns) equals this constant times P_n(x) for every n >= 0.
    """
    aw = derive_aw(params)
    p = params.base
    a, b, c, d = aw.as_tuple()
    numerator = qpochhammer_multi([a * b, a * c], p, None, tol)
    denominator = require_nonvanishing([p / (a * d)], p, "(q^s/(ad); q^s)_inf", tol)
    return numerator / denominator


# Continuous q-Jacobi (J) and Rahman (R) specializations


def c_jacobi(
    pt: EvalPoint,
    kappa: float,
    lambda_: float,
    q: float,
    s: Fraction,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> SeriesValue:
    """c_J(x, z): the c-function of the Hecke tuple (kappa, lambda, kappa, lambda) with step s."""
    return cfun(pt, specialize_J(kappa, lambda_, q, s), tol)


def c_jacobi_dual(
    pt: EvalPoint,
    kappa: float,
    lambda_: float,
    q: float,
    s: Fraction,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> SeriesValue:
    """c_J^d at pt = (z, x): the c-function of (kappa, kappa, lambda, lambda) with step s."""
    return cfun(pt, dual(specialize_J(kappa, lambda_, q, s)), tol)


def c_rahman(
    pt: EvalPoint,
    kappa: float,
    lambda_: float,
    q: float,
    s: Fraction,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> SeriesValue:
    """c_R(x, z) = c(x, z/2) for (kappa, lambda, 0, 0) with step s/2."""
    return cfun(pt.with_z(pt.z / 2), specialize_R(kappa, lambda_, q, s), tol)


def c_rahman_dual(
    pt: EvalPoint,
    kappa: float,
    lambda_: float,
    q: float,
    s: Fraction,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> SeriesValue:
    """c_R^d(X, Z) = c(X, Z/2) for (kappa, 0, lambda, 0) with step s/2, with pt = (X, Z)."""
    return cfun(pt.with_z(pt.z / 2), dual(specialize_R(kappa, lambda_, q, s)), tol)


def quadratic_connection_coefficient(
    pt: EvalPoint,
    kappa: float,
    lambda_: float,
    q: float,
    s: Fraction,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> SeriesValue:
    """Closed form of c_J(x, -z) / c_J^d(z, -x) as a theta quotient.

    q**(-4 kappa x/s) q**(2(kappa+lambda) z/s)
    * theta(q**(2x), q**(s/2+2lambda+z), q**(2kappa+z); q**s)
    / theta(q**z, q**(kappa+lambda+x), -q**(kappa-lambda+x); q**(s/2))
    """
    params = specialize_J(kappa, lambda_, q, s)
    x, z = pt.x, pt.z
    step = float(s)
    half = Fraction(1, 2)
    full = params.base
    numerator = theta_multi(
        [params.power(2 * x), params.power(2 * lambda_ + z, half), params.power(2 * kappa + z)],
        full,
        tol,
    )
    denominator = require_theta_nonvanishing(
        [params.power(z), params.power(kappa + lambda_ + x), -params.power(kappa - lambda_ + x)],
        float(q ** (step / 2)),
        "theta(q^z, q^(k+l+x), -q^(k-l+x); q^(s/2))",
        tol,
    )
    scale = qpow(q, (-4 * kappa * x + 2 * (kappa + lambda_) * z) / step)
    return scale * numerator / denominator
