"""The identity checks.

Every ``check_*`` function samples random admissible points with a
:class:`~qvwp.idcheck.sampling.Sampler`, evaluates both sides of one
identity and returns an :class:`~qvwp.idcheck.report.IdentityReport`.
Failures at individual points are rejections, never exceptions.
"""

import functools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from ..awcore import (
    GridFunction,
    HeckeParams,
    L_coefficients,
    apply_D,
    apply_L,
    coeff_A,
    derive_aw,
    dual,
    specialize_J,
    specialize_R,
)
from ..config import SamplePolicy, Tolerance
from ..eigenfun import (
    E_aw,
    Phi,
    Psi,
    W_fn,
    aw_polynomial,
    c_jacobi,
    c_jacobi_dual,
    c_rahman,
    c_rahman_dual,
    cfun,
    e_poly_normalization,
    eigenvalue,
    phi_poly_normalization,
    phi_tilde,
    poly_spectral_point,
    psi_from_aw,
    quadratic_connection_coefficient,
)
from ..exceptions import ConvergenceRegionError, DomainError, QVWPError
from ..qcore import (
    phi_series,
    qpochhammer_multi,
    qpow,
    require_nonvanishing,
    require_theta_nonvanishing,
    theta_multi,
    w8_7,
)
from ..types import ERoute, EvalPoint, PsiRoute, SeriesValue
from .engine import CheckEngine, Comparison, Evaluator, SamplePoint, Trial
from .report import IdentityReport
from .sampling import Sampler, identity_stream

logger = logging.getLogger(__name__)

POLY_DEGREE = 4
SINGH_DEGREE = 6

# Rescaled Hecke tuples (kappa, lambda, upsilon, varsigma) / s with trivial monodromy
_HALF = Fraction(1, 2)
MONODROMY_TUPLES: tuple[tuple[Fraction | int, ...], ...] = (
    (0, 0, 0, 0),
    (_HALF, _HALF, 0, 0),
    (_HALF, 0, _HALF, 0),
    (_HALF, 0, 0, _HALF),
    (0, _HALF, _HALF, 0),
    (0, _HALF, 0, _HALF),
    (0, 0, _HALF, _HALF),
    (_HALF, _HALF, _HALF, _HALF),
)


def _run(
    identity_id: str,
    policy: SamplePolicy,
    tol: Tolerance,
    evaluate: Evaluator,
    log: logging.Logger | None,
) -> IdentityReport:
    return CheckEngine(policy, tol, log or logger).run(identity_id, evaluate)


def _draw(sampler: Sampler) -> tuple[HeckeParams, EvalPoint]:
    params = sampler.params()
    return params, sampler.point(params.q)


def _sample(pt: EvalPoint, params: HeckeParams) -> SamplePoint:
    return SamplePoint(pt.x, pt.z, params)


def _free_sample(x: complex, z: complex, q: float) -> SamplePoint:
    """Worst-point record for identities in free complex variables."""
    return SamplePoint(x, z, HeckeParams(0.0, 0.0, 0.0, 0.0, q, Fraction(1)))


def _memoized(f: GridFunction) -> GridFunction:
    return functools.lru_cache(maxsize=None)(f)


def _series_region_width(params: HeckeParams, tol: Tolerance) -> float:
    """Half-width w such that the 8W7 form of E converges at z and -z for |Re z| < w."""
    # |q**(s-z) / d_dual| = q**(s/2 - lambda + varsigma - Re z)
    offset = float(params.s) / 2 - params.lambda_ + params.varsigma
    margin = math.log(tol.series_radius) / math.log(params.q)
    return offset - margin


# Eigenfunctions and the c-function


def check_eigen_phi(
    policy: SamplePolicy, tol: Tolerance, log: logging.Logger | None = None
) -> IdentityReport:
    """D Phi(., z) = (q**z + q**(-z) - a_dual - 1/a_dual) Phi(., z)."""

    def evaluate(sampler: Sampler, index: int) -> Trial:
        params, pt = _draw(sampler)
        f = _memoized(lambda y: Phi(EvalPoint(y, pt.z), params, tol).value)
        step = float(params.s)
        lhs = apply_D(f, pt.x, params, tol)
        rhs = eigenvalue(pt.z, params).value * f(pt.x)
        forward = abs(coeff_A(pt.x, params, tol))
        backward = abs(coeff_A(-pt.x, params, tol))
        center = abs(f(pt.x))
        scale = forward * (abs(f(pt.x + step)) + center) + backward * (
            abs(f(pt.x - step)) + center
        )
        return Trial(_sample(pt, params), [Comparison(lhs, rhs, scale)])

    return _run("eigen_phi", policy, tol, evaluate, log)


def check_selfdual_phi(
    policy: SamplePolicy, tol: Tolerance, log: logging.Logger | None = None
) -> IdentityReport:
    """Phi(x, z) = Phi^d(z, x)."""

    def evaluate(sampler: Sampler, index: int) -> Trial:
        params, pt = _draw(sampler)
        lhs = Phi(pt, params, tol)
        rhs = Phi(pt.swapped(), dual(params), tol)
        return Trial(_sample(pt, params), [Comparison(lhs, rhs)])

    return _run("selfdual_phi", policy, tol, evaluate, log)


def check_selfdual_E(
    policy: SamplePolicy, tol: Tolerance, log: logging.Logger | None = None
) -> IdentityReport:
    """E(x, z) = E^d(z, x), both sides from the 8W7 form.

    Points are kept only where both 8W7 forms converge.
    """

    def evaluate(sampler: Sampler, index: int) -> Trial:
        params, pt = _draw(sampler)
        lhs = E_aw(pt, params, tol, ERoute.SERIES)
        rhs = E_aw(pt.swapped(), dual(params), tol, ERoute.SERIES)
        return Trial(_sample(pt, params), [Comparison(lhs, rhs)])

    return _run("selfdual_E", policy, tol, evaluate, log)


def check_even_E(
    policy: SamplePolicy, tol: Tolerance, log: logging.Logger | None = None
) -> IdentityReport:
    """E(x, -z) = E(x, z) and E(-x, z) = E(x, z).

    Re z is narrowed to the strip where the 8W7 form converges at both z
    and -z. Evenness in x is tested against the c-function expansion at -x.
    """

    def evaluate(sampler: Sampler, index: int) -> Trial:
        params = sampler.params()
        width = _series_region_width(params, tol)
        if width <= 0:
            raise DomainError("8W7 strip of E is empty", argument="params", value=params)
        x = sampler.complex_value(params.q)
        z = complex(0.9 * sampler.uniform(-width, width), sampler.complex_value(params.q).imag)
        pt = EvalPoint(x, z)
        value = E_aw(pt, params, tol, ERoute.SERIES)
        mirrored_z = E_aw(pt.with_z(-z), params, tol, ERoute.SERIES)
        mirrored_x = E_aw(pt.with_x(-x), params, tol, ERoute.EXPANSION)
        return Trial(
            _sample(pt, params),
            [Comparison(mirrored_z, value), Comparison(mirrored_x, value)],
        )

    return _run("even_E", policy, tol, evaluate, log)


def check_c_expansion(
    policy: SamplePolicy, tol: Tolerance, log: logging.Logger | None = None
) -> IdentityReport:
    """E(x, z) = c(x, z) Phi(x, z) + c(x, -z) Phi(x, -z), E from its 8W7 form."""

    def evaluate(sampler: Sampler, index: int) -> Trial:
        params, pt = _draw(sampler)
        lhs = E_aw(pt, params, tol, ERoute.SERIES)
        mirrored = pt.with_z(-pt.z)
        first = cfun(pt, params, tol) * Phi(pt, params, tol)
        second = cfun(mirrored, params, tol) * Phi(mirrored, params, tol)
        scale = abs(first) + abs(second)
        return Trial(_sample(pt, params), [Comparison(lhs, first + second, scale)])

    return _run("c_expansion", policy, tol, evaluate, log)


def check_connection(
    policy: SamplePolicy, tol: Tolerance, log: logging.Logger | None = None
) -> IdentityReport:
    """Phi(-x, z) in terms of Phi(x, z) and Phi(x, -z) with c-function coefficients."""

    def evaluate(sampler: Sampler, index: int) -> Trial:
        params, pt = _draw(sampler)
        dual_params = dual(params)
        mirrored = pt.with_z(-pt.z)
        c_plus = cfun(pt, params, tol)
        c_minus = cfun(mirrored, params, tol)
        cd_plus = cfun(pt.swapped(), dual_params, tol)
        cd_minus = cfun(EvalPoint(pt.z, -pt.x), dual_params, tol)
        first = (c_plus - cd_plus) / cd_minus * Phi(pt, params, tol)
        second = c_minus / cd_minus * Phi(mirrored, params, tol)
        lhs = Phi(pt.with_x(-pt.x), params, tol)
        scale = abs(first) + abs(second)
        return Trial(_sample(pt, params), [Comparison(lhs, first + second, scale)])

    return _run("connection", policy, tol, evaluate, log)


def check_c_quadratic(
    policy: SamplePolicy, tol: Tolerance, log: logging.Logger | None = None
) -> IdentityReport:
    """Quadratic relation between c(+-x, +-z) and c^d(+-z, +-x)."""

    def evaluate(sampler: Sampler, index: int) -> Trial:
        params, pt = _draw(sampler)
        x, z = pt.x, pt.z
        dual_params = dual(params)

        def c(u: complex, v: complex) -> SeriesValue:
            return cfun(EvalPoint(u, v), params, tol)

        def cd(u: complex, v: complex) -> SeriesValue:
            return cfun(EvalPoint(u, v), dual_params, tol)

        terms_left = (
            c(x, z) * cd(z, -x) * cd(-z, -x),
            c(-x, z) * cd(z, x) * cd(-z, -x),
        )
        terms_right = (
            c(x, z) * c(-x, z) * cd(-z, -x),
            c(x, z) * c(-x, -z) * cd(z, -x),
        )
        scale = sum(abs(t) for t in terms_left + terms_right)
        lhs = terms_left[0] + terms_left[1]
        rhs = terms_right[0] + terms_right[1]
        return Trial(_sample(pt, params), [Comparison(lhs, rhs, scale)])

    return _run("c_quadratic", policy, tol, evaluate, log)


def check_slater_theta(
    policy: SamplePolicy, tol: Tolerance, log: logging.Logger | None = None
) -> IdentityReport:
    """Four-term theta identity obtained from the c-function relation at s = 1."""

    def evaluate(sampler: Sampler, index: int) -> Trial:
        params = sampler.params(s=Fraction(1))
        pt = sampler.point(params.q)
        q = params.q
        aw = derive_aw(params)
        a, b, c, d = aw.as_tuple()
        at, bt, ct, dt = aw.a_dual, aw.b_dual, aw.c_dual, aw.d_dual
        qx, qz = qpow(q, pt.x), qpow(q, pt.z)
        r = d / at
        t1 = theta_multi(
            [r * qx * qz, r * qx / qz, a * qx, b * qx, c * qx, d / qx, qz**2], q, tol
        )
        t2 = theta_multi(
            [r * qz / qx, r * qx * qz, at * qz, bt * qz, ct * qz, dt / qz, qx**2], q, tol
        )
        t3 = qx**2 * theta_multi(
            [r / (qx * qz), r * qz / qx, a / qx, b / qx, c / qx, d * qx, qz**2], q, tol
        )
        t4 = qz**2 * theta_multi(
            [r / (qx * qz), r * qx / qz, at / qz, bt / qz, ct / qz, dt * qz, qx**2], q, tol
        )
        scale = abs(t1) + abs(t2) + abs(t3) + abs(t4)
        return Trial(_sample(pt, params), [Comparison(t1 - t2, t3 - t4, scale)])

    return _run("slater_theta", policy, tol, evaluate, log)


def check_psi_symmetry(
    policy: SamplePolicy, tol: Tolerance, log: logging.Logger | None = None
) -> IdentityReport:
    """Psi is invariant under the transpositions a<->b, c<->d and b<->c.

    The permuted values come from the balanced 4phi3 route.
    """

    def evaluate(sampler: Sampler, index: int) -> Trial:
        params, pt = _draw(sampler)
        aw = derive_aw(params)
        a, b, c, d = aw.as_tuple()
        reference = Psi(pt, params, tol)
        comparisons = []
        for permuted in ((b, a, c, d), (a, b, d, c), (a, c, b, d)):
            value = psi_from_aw(
                pt.x, pt.z, permuted, aw.a_dual, params.q, params.s, tol, PsiRoute.PHI43
            )
            comparisons.append(Comparison(reference, value))
        return Trial(_sample(pt, params), comparisons)

    return _run("psi_symmetry", policy, tol, evaluate, log)


def check_W_recurrence(
    policy: SamplePolicy, tol: Tolerance, log: logging.Logger | None = None
) -> IdentityReport:
    """W(x + s, z) = a_dual q**z W(x, z)."""

    def evaluate(sampler: Sampler, index: int) -> Trial:
        params, pt = _draw(sampler)
        lhs = W_fn(pt.with_x(pt.x + float(params.s)), params)
        rhs = derive_aw(params).a_dual * params.power(pt.z) * W_fn(pt, params)
        return Trial(_sample(pt, params), [Comparison(lhs, rhs)])

    return _run("W_recurrence", policy, tol, evaluate, log)


def check_c_periodicity(
    policy: SamplePolicy, tol: Tolerance, log: logging.Logger | None = None
) -> IdentityReport:
    """c(x + s, z) = c(x, z) = c(x, z + s)."""

    def evaluate(sampler: Sampler, index: int) -> Trial:
        params, pt = _draw(sampler)
        step = float(params.s)
        value = cfun(pt, params, tol)
        shifted_x = cfun(pt.with_x(pt.x + step), params, tol)
        shifted_z = cfun(pt.with_z(pt.z + step), params, tol)
        return Trial(
            _sample(pt, params),
            [Comparison(shifted_x, value), Comparison(value, shifted_z)],
        )

    return _run("c_periodicity", policy, tol, evaluate, log)


def check_trivial_monodromy(
    policy: SamplePolicy, tol: Tolerance, log: logging.Logger | None = None
) -> IdentityReport:
    """Trivial monodromy at half-integer rescaled Hecke parameters.

    The first eight points use the eight base tuples; later points add
    random integer shifts in {-1, 0, 1} to each rescaled parameter. At every
    point: c(x, z) = c^d(z, x), Phi~(x, z) = Phi~^d(z, x),
    Phi~(-x, z) = Phi~(x, -z) and E(x, z) = Phi~(x, z) + Phi~(-x, z).
    """

    def evaluate(sampler: Sampler, index: int) -> Trial:
        base = MONODROMY_TUPLES[index % len(MONODROMY_TUPLES)]
        step = sampler.step()
        q = sampler.q()
        shifts = (0, 0, 0, 0)
        if index >= len(MONODROMY_TUPLES):
            shifts = (
                sampler.integer(-1, 1),
                sampler.integer(-1, 1),
                sampler.integer(-1, 1),
                sampler.integer(-1, 1),
            )
        kappa, lambda_, upsilon, varsigma = (float(v * step) for v in base)
        params = HeckeParams(kappa, lambda_, upsilon, varsigma, q, step).shifted(*shifts)
        pt = sampler.point(q)
        dual_params = dual(params)
        mirrored_x = pt.with_x(-pt.x)
        forward = phi_tilde(pt, params, tol)
        backward = phi_tilde(mirrored_x, params, tol)
        comparisons = [
            Comparison(cfun(pt, params, tol), cfun(pt.swapped(), dual_params, tol)),
            Comparison(forward, phi_tilde(pt.swapped(), dual_params, tol)),
            Comparison(backward, phi_tilde(pt.with_z(-pt.z), params, tol)),
            Comparison(
                E_aw(pt, params, tol), forward + backward, abs(forward) + abs(backward)
            ),
        ]
        return Trial(_sample(pt, params), comparisons)

    return _run("trivial_monodromy", policy, tol, evaluate, log)


# Quadratic transformations


def check_factorization(
    policy: SamplePolicy, tol: Tolerance, log: logging.Logger | None = None
) -> IdentityReport:
    """(L - mu)(L + mu) = D_J - q**z - q**(-z) + q**(2 kappa) + q**(-2 kappa).

    Here mu = q**(z/2) + q**(-z/2), L is the half-step operator of (kappa,
    lambda) and D_J the operator of (kappa, lambda, kappa, lambda). Both
    sides act on a random combination of 1, q**x + q**(-x), its square and
    q**(x/2) + q**(-x/2).
    """

    def evaluate(sampler: Sampler, index: int) -> Trial:
        params, pt = _draw(sampler)
        jacobi = specialize_J(params.kappa, params.lambda_, params.q, params.s)
        weights = [sampler.polar(0.5, 2.0) for _ in range(4)]

        def f(y: complex) -> complex:
            u = jacobi.power(y) + jacobi.power(-y)
            v = jacobi.power(y / 2) + jacobi.power(-y / 2)
            return weights[0] + weights[1] * u + weights[2] * u * u + weights[3] * v

        mu = jacobi.power(pt.z / 2) + jacobi.power(-pt.z / 2)
        test = _memoized(f)
        g = _memoized(lambda y: apply_L(test, y, jacobi, tol) + mu * test(y))
        outer = apply_L(g, pt.x, jacobi, tol)
        lhs = outer - mu * g(pt.x)
        shift = (
            jacobi.power(2 * jacobi.kappa)
            + jacobi.power(-2 * jacobi.kappa)
            - jacobi.power(pt.z)
            - jacobi.power(-pt.z)
        )
        operator = apply_D(test, pt.x, jacobi, tol)
        rhs = operator + shift * test(pt.x)
        scale = abs(outer) + abs(mu * g(pt.x)) + abs(operator) + abs(shift * test(pt.x))
        return Trial(_sample(pt, jacobi), [Comparison(lhs, rhs, scale)])

    return _run("factorization", policy, tol, evaluate, log)


def check_quadratic_phi(
    policy: SamplePolicy, tol: Tolerance, log: logging.Logger | None = None
) -> IdentityReport:
    """Phi_J(x, z) = Phi_R(x, z), plus the matching relation between Psi_J and Psi_R.

    Phi_J uses (kappa, lambda, kappa, lambda) with step s at z; Phi_R uses
    (kappa, lambda, 0, 0) with step s/2 at z/2, and
    Psi_R = (q**(s/2+2x); q**s)_inf / (-q**(s/2+z); q**(s/2))_inf Psi_J.
    """

    def evaluate(sampler: Sampler, index: int) -> Trial:
        params, pt = _draw(sampler)
        jacobi = specialize_J(params.kappa, params.lambda_, params.q, params.s)
        rahman = specialize_R(params.kappa, params.lambda_, params.q, params.s)
        halved = pt.with_z(pt.z / 2)
        phi_j = Phi(pt, jacobi, tol)
        phi_r = Phi(halved, rahman, tol)
        half = Fraction(1, 2)
        numerator = qpochhammer_multi([jacobi.power(2 * pt.x, half)], jacobi.base, None, tol)
        denominator = require_nonvanishing(
            [-jacobi.power(pt.z, half)], rahman.base, "(-q^(s/2+z); q^(s/2))_inf", tol
        )
        psi_j = Psi(pt, jacobi, tol)
        psi_r = Psi(halved, rahman, tol)
        return Trial(
            _sample(pt, jacobi),
            [Comparison(phi_j, phi_r), Comparison(psi_r, numerator / denominator * psi_j)],
        )

    return _run("quadratic_phi", policy, tol, evaluate, log)


@dataclass(frozen=True)
class QTransSample:
    """Free variables of the very-well-poised quadratic transformations."""

    alpha: complex
    beta: complex
    x: complex
    z: complex
    q: float


def _qtrans_sides(draw: QTransSample, tol: Tolerance) -> tuple[SeriesValue, SeriesValue]:
    alpha, beta, x, z, q = draw.alpha, draw.beta, draw.x, draw.z, draw.q
    rq = math.sqrt(q)
    q2 = q * q
    left_num = qpochhammer_multi(
        [q * beta * x * z, -q * x * z / beta, q * rq * x * z / alpha, -rq * alpha * x * z],
        q,
        None,
        tol,
    )
    left_den = require_nonvanishing(
        [rq * x, -q * rq * x * z * z, q2 * beta * x * z * z / alpha], q, "base-q prefactor", tol
    )
    left_series = w8_7(
        -rq * x * z * z,
        [q * z / alpha, -rq * z / beta, -alpha * z, rq * beta * z, -rq * x],
        q,
        -rq * x,
        tol,
    )
    right_num = qpochhammer_multi(
        [-q2 * x * z * z / (alpha * beta), -q * alpha * beta * x * z * z, -q * alpha * x / beta],
        q2,
        None,
        tol,
    )
    z4 = z**4
    right_den = require_nonvanishing(
        [-q2 * q * beta * x * z4 / alpha], q2, "base-q^2 prefactor", tol
    )
    right_series = w8_7(
        -q * beta * x * z4 / alpha,
        [q2 * z * z / alpha**2, -q * z * z, -z * z, q * beta**2 * z * z, -q * beta * x / alpha],
        q2,
        -q * alpha * x / beta,
        tol,
    )
    return left_num / left_den * left_series, right_num / right_den * right_series


def _qtrans_dual_sides(draw: QTransSample, tol: Tolerance) -> tuple[SeriesValue, SeriesValue]:
    alpha, beta, x, z, q = draw.alpha, draw.beta, draw.x, draw.z, draw.q
    rq = math.sqrt(q)
    q2 = q * q
    x2z2 = x * x * z * z
    left_num = qpochhammer_multi(
        [-rq * alpha * x * z, -rq * beta * z, q * rq * x * z / alpha], q, None, tol
    )
    left_den = require_nonvanishing([-q * rq * x * x * z / beta], q, "base-q prefactor", tol)
    left_series = w8_7(
        -rq * x * x * z / beta,
        [q * x / (alpha * beta), -rq * x, -alpha * x / beta, rq * x, -rq * z / beta],
        q,
        -rq * beta * z,
        tol,
    )
    right_num = qpochhammer_multi(
        [
            -q * alpha * beta * x * z * z,
            q2 * alpha * x * z * z / beta,
            -q2 * x * z * z / (alpha * beta),
            q2 * q * beta * x * z * z / alpha,
        ],
        q2,
        None,
        tol,
    )
    right_den = require_nonvanishing(
        [-q2 * q * x2z2, -q2 * z * z, q2 * x2z2 / beta**2], q2, "base-q^2 prefactor", tol
    )
    right_series = w8_7(
        -q * x2z2,
        [
            q2 * x / (alpha * beta),
            -q * beta * x / alpha,
            -alpha * x / beta,
            q * alpha * beta * x,
            -q * z * z,
        ],
        q2,
        -q * z * z,
        tol,
    )
    return left_num / left_den * left_series, right_num / right_den * right_series


def check_qtrans_8W7(
    policy: SamplePolicy, tol: Tolerance, log: logging.Logger | None = None
) -> IdentityReport:
    """Quadratic transformation between an 8W7 in base q and one in base q**2.

    Draws keep |q**(1/2) x| <= 0.8 and |q alpha x / beta| <= 0.8.
    """

    def evaluate(sampler: Sampler, index: int) -> Trial:
        q = sampler.q()
        draw = QTransSample(
            alpha=sampler.polar(0.4, 1.5),
            beta=sampler.polar(0.4, 1.5),
            x=sampler.polar(0.05, 0.8 / math.sqrt(q)),
            z=sampler.polar(0.2, 1.2),
            q=q,
        )
        if abs(q * draw.alpha * draw.x / draw.beta) > 0.8:
            raise ConvergenceRegionError("|q alpha x / beta| > 0.8", argument="x", value=draw.x)
        lhs, rhs = _qtrans_sides(draw, tol)
        return Trial(_free_sample(draw.x, draw.z, q), [Comparison(lhs, rhs)])

    return _run("qtrans_8W7", policy, tol, evaluate, log)


def check_qtrans_8W7_dual(
    policy: SamplePolicy, tol: Tolerance, log: logging.Logger | None = None
) -> IdentityReport:
    """Dual quadratic transformation of very-well-poised 8W7 series.

    Draws keep |q**(1/2) beta z| <= 0.8 and |q z**2| <= 0.8; the base-q**2
    side is the 8W7 with fifth parameter and argument -q z**2.
    """

    def evaluate(sampler: Sampler, index: int) -> Trial:
        q = sampler.q()
        draw = QTransSample(
            alpha=sampler.polar(0.4, 1.5),
            beta=sampler.polar(0.4, 1.5),
            x=sampler.polar(0.2, 1.2),
            z=sampler.polar(0.05, min(1.2, math.sqrt(0.8 / q))),
            q=q,
        )
        if abs(math.sqrt(q) * draw.beta * draw.z) > 0.8:
            raise ConvergenceRegionError(
                "|q^(1/2) beta z| > 0.8", argument="z", value=draw.z
            )
        lhs, rhs = _qtrans_dual_sides(draw, tol)
        return Trial(_free_sample(draw.x, draw.z, q), [Comparison(lhs, rhs)])

    return _run("qtrans_8W7_dual", policy, tol, evaluate, log)


# Polynomial reductions


def _poly_params(sampler: Sampler) -> HeckeParams:
    return sampler.params(q=sampler.q(0.3, 0.8))


def check_poly_reduction(
    policy: SamplePolicy, tol: Tolerance, log: logging.Logger | None = None
) -> IdentityReport:
    """Phi(x, -kappa-upsilon-ns) = K_n P_n(x) for n = 0..4, with q in [0.3, 0.8]."""
    degrees = policy.degree_range(POLY_DEGREE)

    def evaluate(sampler: Sampler, index: int) -> Trial:
        n = degrees[index % len(degrees)]
        params = _poly_params(sampler)
        pt = EvalPoint(sampler.complex_value(params.q), poly_spectral_point(n, params))
        lhs = Phi(pt, params, tol)
        rhs = phi_poly_normalization(n, params, tol) * aw_polynomial(n, pt.x, params, tol)
        return Trial(_sample(pt, params), [Comparison(lhs, rhs)])

    return _run("poly_reduction", policy, tol, evaluate, log)


def check_E_poly(
    policy: SamplePolicy, tol: Tolerance, log: logging.Logger | None = None
) -> IdentityReport:
    """E(x, -kappa-upsilon-ns) = (ab, ac; q**s)_inf / (q**s/(ad); q**s)_inf P_n(x), n = 0..4."""
    degrees = policy.degree_range(POLY_DEGREE)

    def evaluate(sampler: Sampler, index: int) -> Trial:
        n = degrees[index % len(degrees)]
        params = _poly_params(sampler)
        pt = EvalPoint(sampler.complex_value(params.q), poly_spectral_point(n, params))
        lhs = E_aw(pt, params, tol)
        rhs = e_poly_normalization(params, tol) * aw_polynomial(n, pt.x, params, tol)
        return Trial(_sample(pt, params), [Comparison(lhs, rhs)])

    return _run("E_poly", policy, tol, evaluate, log)


def check_singh(
    policy: SamplePolicy, tol: Tolerance, log: logging.Logger | None = None
) -> IdentityReport:
    """Terminating quadratic transformation of balanced 4phi3 series, n = 0..6.

    4phi3(q**(-2n), a q**x, a q**(-x), q**(2n) a**2 b**2; ab, q a**2, q ab; q**2, q**2)
    = 4phi3(q**(-n), a q**x, a q**(-x), -q**n ab; ab, q**(1/2) a, -q**(1/2) a; q, q)
    with a = q**(kappa+lambda) and b = -q**(kappa-lambda).
    """
    degrees = policy.degree_range(SINGH_DEGREE)

    def evaluate(sampler: Sampler, index: int) -> Trial:
        n = degrees[index % len(degrees)]
        params = specialize_J(sampler.hecke(), sampler.hecke(), sampler.q(), 2)
        q = params.q
        x = sampler.complex_value(q)
        aw = derive_aw(params)
        a, b = aw.a, aw.b
        qx = qpow(q, x)
        rq = math.sqrt(q)
        q2 = q * q
        lhs = phi_series(
            [q2 ** (-n), a * qx, a / qx, q2**n * a * a * b * b],
            [a * b, q * a * a, q * a * b],
            q2,
            q2,
            tol,
        )
        rhs = phi_series(
            [q ** (-n), a * qx, a / qx, -(q**n) * a * b], [a * b, rq * a, -rq * a], q, q, tol
        )
        pt = EvalPoint(x, -2 * params.kappa - 2 * n)
        return Trial(_sample(pt, params), [Comparison(lhs, rhs)])

    return _run("singh", policy, tol, evaluate, log)


# c-functions of the Jacobi and Rahman specializations and theta identities


def check_quadratic_c(
    policy: SamplePolicy, tol: Tolerance, log: logging.Logger | None = None
) -> IdentityReport:
    """Connection coefficients of the J and R specializations agree.

    c_J(x, -z) / c_J^d(z, -x) equals the explicit theta quotient and
    c_R(x, -z) / c_R^d(z/2, -2x); the coefficients of Phi(x, z) in the two
    connection formulas agree as well.
    """

    def evaluate(sampler: Sampler, index: int) -> Trial:
        params, pt = _draw(sampler)
        x, z = pt.x, pt.z
        k, lam, q, s = params.kappa, params.lambda_, params.q, params.s

        def cj(u: complex, v: complex) -> SeriesValue:
            return c_jacobi(EvalPoint(u, v), k, lam, q, s, tol)

        def cjd(u: complex, v: complex) -> SeriesValue:
            return c_jacobi_dual(EvalPoint(u, v), k, lam, q, s, tol)

        def cr(u: complex, v: complex) -> SeriesValue:
            return c_rahman(EvalPoint(u, v), k, lam, q, s, tol)

        def crd(u: complex, v: complex) -> SeriesValue:
            return c_rahman_dual(EvalPoint(u, v), k, lam, q, s, tol)

        closed = quadratic_connection_coefficient(pt, k, lam, q, s, tol)
        jacobi_ratio = cj(x, -z) / cjd(z, -x)
        rahman_ratio = cr(x, -z) / crd(z / 2, -2 * x)
        j_plus, jd_plus, jd_minus = cj(x, z), cjd(z, x), cjd(z, -x)
        r_plus, rd_plus, rd_minus = cr(x, z), crd(z / 2, 2 * x), crd(z / 2, -2 * x)
        jacobi_coefficient = (j_plus - jd_plus) / jd_minus
        rahman_coefficient = (r_plus - rd_plus) / rd_minus
        scale = (abs(j_plus) + abs(jd_plus)) / abs(jd_minus) + (
            abs(r_plus) + abs(rd_plus)
        ) / abs(rd_minus)
        return Trial(
            _sample(pt, specialize_J(k, lam, q, s)),
            [
                Comparison(jacobi_ratio, closed),
                Comparison(closed, rahman_ratio),
                Comparison(jacobi_coefficient, rahman_coefficient, scale),
            ],
        )

    return _run("quadratic_c", policy, tol, evaluate, log)


def check_theta_ident(
    policy: SamplePolicy, tol: Tolerance, log: logging.Logger | None = None
) -> IdentityReport:
    """Theta function identity in four free variables a, b, c, d (bases q and q**2)."""

    def evaluate(sampler: Sampler, index: int) -> Trial:
        q = sampler.q()
        a, b, c, d = (sampler.polar(0.5, 1.5) for _ in range(4))
        rq = math.sqrt(q)
        q2 = q * q
        b2 = b * b
        first = theta_multi(
            [a * a, b2 * c * c, -b2, q * b2 * d * d, -q * b2 / (a * c * d), -q * b2], q2, tol
        )
        second = theta_multi(
            [
                b2 * b2,
                -q * c / (a * d),
                a * c * d,
                -a * c / d,
                q * a * c * d,
                -q * a / (b2 * c * d),
            ],
            q2,
            tol,
        )
        numerator = theta_multi([-q * a * b2 * c * d], q2, tol) * theta_multi([-b2], q, tol)
        denominator = require_theta_nonvanishing(
            [q * a * a], q2, "theta(q a^2; q^2)", tol
        ) * require_theta_nonvanishing([-rq * a * b * c], q, "theta(-q^(1/2) abc; q)", tol)
        third = theta_multi(
            [b * c, -b * c, a * a, rq * b * d, -rq * b / (a * c), -rq * d / b], q, tol
        )
        fourth = theta_multi(
            [b2, -rq * a, a * c * d, -a * c / d, rq * a, -rq * a / (b * c)], q, tol
        )
        factor = numerator / denominator
        scale = abs(first) + abs(second) + abs(factor) * (abs(third) + abs(fourth))
        return Trial(
            _free_sample(a, b, q),
            [Comparison(first - second, factor * (third - fourth), scale)],
        )

    return _run("theta_ident", policy, tol, evaluate, log)


def check_E_R_is_L_eigen(
    policy: SamplePolicy, tol: Tolerance, log: logging.Logger | None = None
) -> IdentityReport:
    """L E_R(., z) = (q**(z/2) + q**(-z/2)) E_R(., z).

    E_R(x, z) is E(x, z/2) for (kappa, lambda, 0, 0) with step s/2. After
    the run, the same residual for E_J and the ratio c_J/c_R at the
    points +-(s/2 + 2 lambda + 2 pi i / |ln q|) are logged for information;
    they do not enter the report.
    """
    active = log or logger

    def evaluate(sampler: Sampler, index: int) -> Trial:
        params, pt = _draw(sampler)
        jacobi = specialize_J(params.kappa, params.lambda_, params.q, params.s)
        rahman = specialize_R(params.kappa, params.lambda_, params.q, params.s)
        f = _memoized(lambda y: E_aw(EvalPoint(y, pt.z / 2), rahman, tol).value)
        mu = jacobi.power(pt.z / 2) + jacobi.power(-pt.z / 2)
        lhs = apply_L(f, pt.x, jacobi, tol)
        rhs = mu * f(pt.x)
        forward, backward = L_coefficients(pt.x, jacobi, tol)
        half = float(params.s) / 2
        scale = abs(forward * f(pt.x + half)) + abs(backward * f(pt.x - half))
        return Trial(_sample(pt, jacobi), [Comparison(lhs, rhs, scale)])

    report = _run("E_R_is_L_eigen", policy, tol, evaluate, active)
    _log_jacobi_contrast(policy, tol, active)
    return report


def _log_jacobi_contrast(policy: SamplePolicy, tol: Tolerance, log: logging.Logger) -> None:
    """Log the L-residual of E_J and |c_J / c_R| at the witness points."""
    sampler = Sampler(policy, identity_stream(policy, "E_R_is_L_eigen/contrast"))
    params, pt = _draw(sampler)
    k, lam, q, s = params.kappa, params.lambda_, params.q, params.s
    jacobi = specialize_J(k, lam, q, s)
    try:
        f = _memoized(lambda y: E_aw(EvalPoint(y, pt.z), jacobi, tol).value)
        mu = jacobi.power(pt.z / 2) + jacobi.power(-pt.z / 2)
        target = mu * f(pt.x)
        residual = abs(apply_L(f, pt.x, jacobi, tol) - target) / max(abs(target), 1e-30)
        log.info(f"E_J L-residual {residual:.3e} at x={pt.x:.4g}, z={pt.z:.4g}")
    except (QVWPError, ArithmeticError, ValueError) as e:
        log.info(f"E_J L-residual unavailable: {e}")
    witness = complex(float(s) / 2 + 2 * lam, 2 * math.pi / abs(math.log(q)))
    for z in (witness, -witness):
        try:
            cj = c_jacobi(EvalPoint(pt.x, z), k, lam, q, s, tol).value
            cr = c_rahman(EvalPoint(pt.x, z), k, lam, q, s, tol).value
        except (QVWPError, ArithmeticError, ValueError) as e:
            log.info(f"c_J/c_R at z={z:.4g} unavailable: {e}")
            continue
        ratio = abs(cj / cr) if cr != 0 else math.inf
        log.info(f"|c_J/c_R| at z={z:.4g}: {ratio:.6g}")

