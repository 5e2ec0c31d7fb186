"""Tests for the q-series engine (mpmath as independent oracle)."""

import cmath
import logging
import math

import mpmath
import numpy as np
import pytest

from qvwp import (
    ConvergenceRegionError,
    DomainError,
    PoleError,
    Tolerance,
    phi_series,
    qpochhammer_finite,
    qpochhammer_inf,
    qpochhammer_multi,
    qpow,
    theta,
    theta_multi,
    w8_7,
)
from qvwp.qcore import require_nonvanishing, theta_vanishes, vanishing_index


def _close(value: complex, reference: complex, rel: float) -> bool:
    return abs(value - reference) <= rel * max(abs(reference), 1e-300)


def _oracle_qp(a: complex, q: float) -> complex:
    with mpmath.workdps(30):
        return complex(mpmath.qp(mpmath.mpc(a), mpmath.mpf(q)))


def _oracle_qhyper(num: list[complex], den: list[complex], q: float, z: complex) -> complex:
    with mpmath.workdps(30):
        return complex(
            mpmath.qhyper(
                [mpmath.mpc(a) for a in num],
                [mpmath.mpc(b) for b in den],
                mpmath.mpf(q),
                mpmath.mpc(z),
            )
        )


class TestQpow:
    """Test complex powers of the base."""

    def test_real_exponent(self) -> None:
        """Real exponents agree with float powers."""
        assert qpow(0.5, 2) == pytest.approx(0.25)
        assert qpow(0.5, -1) == pytest.approx(2.0)

    def test_complex_exponent(self) -> None:
        """Complex exponents use the real logarithm of q."""
        x = 0.3 - 1.7j
        assert _close(qpow(0.4, x), cmath.exp(x * math.log(0.4)), 1e-15)

    def test_rejects_base_outside_unit_interval(self) -> None:
        """q must lie in (0, 1)."""
        with pytest.raises(DomainError, match="q must lie in"):
            qpow(1.0, 0.5)


class TestQPochhammer:
    """Test finite and infinite q-Pochhammer symbols."""

    def test_finite_empty_product(self) -> None:
        """(a; q)_0 = 1."""
        assert qpochhammer_finite(3 + 1j, 0.5, 0) == 1

    def test_finite_product(self) -> None:
        """(a; q)_3 is the explicit three-factor product."""
        a, q = 0.7 - 0.2j, 0.3
        expected = (1 - a) * (1 - a * q) * (1 - a * q * q)
        assert _close(qpochhammer_finite(a, q, 3), expected, 1e-15)

    def test_finite_negative_length(self) -> None:
        """Negative n is a domain error."""
        with pytest.raises(DomainError, match="n must be >= 0"):
            qpochhammer_finite(0.5, 0.5, -1)

    @pytest.mark.parametrize("a", [0.5, -1.3 + 0.4j, 2.5 - 1.1j, 0.01j])
    @pytest.mark.parametrize("q", [0.2, 0.55, 0.8])
    def test_infinite_matches_mpmath(self, a: complex, q: float) -> None:
        """(a; q)_inf agrees with mpmath.qp."""
        result = qpochhammer_inf(a, q)
        assert result.converged
        assert _close(result.value, _oracle_qp(a, q), 1e-12)

    def test_infinite_tail_bound(self) -> None:
        """The tail estimate respects rel_tol."""
        tol = Tolerance()
        result = qpochhammer_inf(1.7 + 0.3j, 0.7, tol)
        assert result.tail_estimate <= tol.rel_tol * max(1.0, abs(result.value))

    def test_infinite_vanishes_at_negative_power(self) -> None:
        """(q^-2; q)_inf = 0."""
        q = 0.5
        assert qpochhammer_inf(q**-2, q).value == 0

    def test_multi_is_product(self) -> None:
        """(a, b; q)_inf = (a; q)_inf (b; q)_inf."""
        q = 0.45
        product = qpochhammer_multi([0.3 + 0.1j, -0.8], q)
        expected = _oracle_qp(0.3 + 0.1j, q) * _oracle_qp(-0.8, q)
        assert _close(product.value, expected, 1e-12)

    def test_multi_needs_parameters(self) -> None:
        """An empty parameter list is rejected."""
        with pytest.raises(DomainError, match="at least one parameter"):
            qpochhammer_multi([], 0.5)


class TestTheta:
    """Test the modified Jacobi theta function."""

    @pytest.mark.parametrize("u", [0.3, -2.1 + 0.5j, 0.9j, 4.0 - 3.0j])
    def test_matches_mpmath(self, u: complex) -> None:
        """theta(u; q) = (u, q/u; q)_inf."""
        q = 0.6
        expected = _oracle_qp(u, q) * _oracle_qp(q / u, q)
        assert _close(theta(u, q).value, expected, 1e-12)

    def test_quasi_periodicity(self) -> None:
        """theta(q u; q) = -theta(u; q) / u."""
        u, q = 0.7 + 0.4j, 0.35
        assert _close(theta(q * u, q).value, -theta(u, q).value / u, 1e-12)

    def test_inversion(self) -> None:
        """theta(q/u; q) = theta(u; q)."""
        u, q = -1.2 + 0.3j, 0.5
        assert _close(theta(q / u, q).value, theta(u, q).value, 1e-13)

    def test_zero_argument(self) -> None:
        """theta is undefined at u = 0."""
        with pytest.raises(DomainError, match="undefined at u = 0"):
            theta(0, 0.5)

    def test_multi_empty_product(self) -> None:
        """Empty theta product is 1."""
        assert theta_multi([], 0.5).value == 1

    def test_vanishing_detection(self) -> None:
        """theta vanishes at integral powers of q only."""
        q = 0.4
        assert theta_vanishes(q**3, q)
        assert theta_vanishes(q**-2, q)
        assert not theta_vanishes(0.5 * q, q)


class TestVanishingIndex:
    """Test detection of a = q^-n."""

    def test_detects_negative_powers(self) -> None:
        """q^-n is recognized with its index."""
        assert vanishing_index(0.5**-3, 0.5) == 3
        assert vanishing_index(1.0, 0.5) == 0

    def test_ignores_generic_values(self) -> None:
        """Generic values are not termination points."""
        assert vanishing_index(0.5, 0.5) is None
        assert vanishing_index(-8.0, 0.5) is None

    def test_require_nonvanishing(self) -> None:
        """A vanishing denominator raises PoleError naming the quantity."""
        with pytest.raises(PoleError, match="St\\(x\\) vanishes") as excinfo:
            require_nonvanishing([0.3, 0.5**-2], 0.5, "St(x)")
        assert excinfo.value.context["quantity"] == "St(x)"


class TestPhiSeries:
    """Test the basic hypergeometric series."""

    @pytest.mark.parametrize("z", [0.5, -0.7 + 0.2j, 0.3j])
    def test_2phi1_matches_mpmath(self, z: complex) -> None:
        """2phi1 agrees with mpmath.qhyper."""
        num, den, q = [0.3 + 0.2j, -1.4], [0.6 - 0.1j], 0.55
        result = phi_series(num, den, q, z)
        assert result.converged
        assert _close(result.value, _oracle_qhyper(num, den, q, z), 1e-11)

    def test_4phi3_matches_mpmath(self) -> None:
        """A balanced-looking 4phi3 at z = q agrees with mpmath.qhyper."""
        num = [0.2 + 0.1j, -0.7, 1.3j, 0.45]
        den = [0.8, -0.35 + 0.2j, 0.15]
        q = 0.5
        result = phi_series(num, den, q, q)
        assert _close(result.value, _oracle_qhyper(num, den, q, q), 1e-11)

    @pytest.mark.parametrize("n", [0, 1, 4])
    def test_q_chu_vandermonde(self, n: int) -> None:
        """2phi1(q^-n, b; c; q, q) = (c/b; q)_n / (c; q)_n b^n."""
        q, b, c = 0.6, 0.7 + 0.3j, -0.4 + 0.1j
        result = phi_series([q**-n, b], [c], q, q)
        expected = qpochhammer_finite(c / b, q, n) / qpochhammer_finite(c, q, n) * b**n
        assert result.converged
        assert result.terms_used == n + 1
        assert abs(result.value - expected) <= result.tail_estimate + 1e-14
        assert _close(result.value, expected, 1e-12)

    def test_terminating_series_outside_disc(self) -> None:
        """A terminating series is summed for any argument."""
        q = 0.5
        result = phi_series([q**-2, 0.3], [0.7], q, 5.0)
        expected = 1 + (1 - q**-2) * (1 - 0.3) / ((1 - q) * (1 - 0.7)) * 5.0
        expected += (
            (1 - q**-2) * (1 - q**-1) * (1 - 0.3) * (1 - 0.3 * q)
            / ((1 - q) * (1 - q * q) * (1 - 0.7) * (1 - 0.7 * q))
            * 25.0
        )
        assert _close(result.value, expected, 1e-12)

    def test_nonterminating_outside_disc(self) -> None:
        """|z| >= 1 without termination is rejected."""
        with pytest.raises(ConvergenceRegionError, match="needs \\|z\\| < 1"):
            phi_series([0.3, 0.4], [0.5], 0.5, 1.2)

    def test_parameter_count(self) -> None:
        """r+1 numerator parameters are required for r denominators."""
        with pytest.raises(DomainError, match="r\\+1 numerator"):
            phi_series([0.3], [0.5], 0.5, 0.1)

    def test_denominator_pole(self) -> None:
        """A vanishing denominator factor raises PoleError."""
        q = 0.5
        with pytest.raises(PoleError, match="denominator factor"):
            phi_series([0.3, 0.4], [1 / q], q, 0.5)

    def test_term_cap_reports_nonconvergence(self, caplog: pytest.LogCaptureFixture) -> None:
        """Hitting term_cap returns converged=False and logs a warning."""
        tol = Tolerance(term_cap=5)
        with caplog.at_level(logging.WARNING, logger="qvwp.qcore"):
            result = phi_series([0.3, 0.4], [0.5], 0.9, 0.99, tol)
        assert not result.converged
        assert result.terms_used == 6
        assert "term_cap=5" in caplog.text


class TestW87:
    """Test the very-well-poised 8W7 series."""

    @staticmethod
    def _oracle(a0: float, alphas: list[complex], q: float, z: complex) -> complex:
        root = math.sqrt(a0)
        num = [a0, q * root, -q * root, *alphas]
        den = [root, -root, *[q * a0 / a for a in alphas]]
        return _oracle_qhyper(num, den, q, z)

    @pytest.mark.parametrize("z", [0.4, -0.6 + 0.3j])
    def test_matches_8phi7(self, z: complex) -> None:
        """8W7 equals the 8phi7 with the +-sqrt(a0) parameters."""
        a0, q = 0.37, 0.5
        alphas = [0.2 + 0.1j, -0.6, 1.1j, 0.8 - 0.4j, -0.3 + 0.2j]
        result = w8_7(a0, alphas, q, z)
        assert result.converged
        assert _close(result.value, self._oracle(a0, alphas, q, z), 1e-11)

    def test_jackson_summation(self) -> None:
        """Terminating balanced 8W7 obeys Jackson's summation."""
        q, a, b, c, d, n = 0.45, 0.31, 0.6 + 0.2j, -0.7, 1.3j, 3
        e = a * a * q ** (n + 1) / (b * c * d)
        result = w8_7(a, [b, c, d, e, q**-n], q, q)
        expected = (
            qpochhammer_finite(a * q, q, n)
            * qpochhammer_finite(a * q / (b * c), q, n)
            * qpochhammer_finite(a * q / (b * d), q, n)
            * qpochhammer_finite(a * q / (c * d), q, n)
            / (
                qpochhammer_finite(a * q / b, q, n)
                * qpochhammer_finite(a * q / c, q, n)
                * qpochhammer_finite(a * q / d, q, n)
                * qpochhammer_finite(a * q / (b * c * d), q, n)
            )
        )
        assert _close(result.value, expected, 1e-11)

    def test_parameter_count(self) -> None:
        """Exactly five parameters are required."""
        with pytest.raises(DomainError, match="five parameters"):
            w8_7(0.3, [0.1, 0.2, 0.3, 0.4], 0.5, 0.1)

    def test_well_poised_pole(self) -> None:
        """a0 = 1 is singular."""
        with pytest.raises(PoleError, match="singular"):
            w8_7(1.0, [0.1, 0.2, 0.3, 0.4, 0.5], 0.5, 0.1)

    def test_outside_disc(self) -> None:
        """Non-terminating 8W7 needs |z| < 1."""
        with pytest.raises(ConvergenceRegionError, match="non-terminating 8W7"):
            w8_7(0.3, [0.1, 0.2, 0.3, 0.4, 0.5], 0.5, 1.5)


def _brute_qp(a: complex, q: float, terms: int) -> complex:
    powers = q ** np.arange(terms)
    return complex(np.prod(1 - a * powers))


def _brute_phi(num: list[complex], den: list[complex], q: float, z: complex, terms: int) -> complex:
    powers = q ** np.arange(terms)
    ratios = z / (1 - q * powers)
    for a in num:
        ratios = ratios * (1 - a * powers)
    for b in den:
        ratios = ratios / (1 - b * powers)
    return complex(1 + np.sum(np.cumprod(ratios)))


def _brute_w87(a0: complex, alphas: list[complex], q: float, z: complex, terms: int) -> complex:
    powers = q ** np.arange(terms)
    ratios = z * (1 - a0 * powers) / (1 - q * powers)
    for a in alphas:
        ratios = ratios * (1 - a * powers) / (1 - q * a0 / a * powers)
    cores = np.cumprod(ratios)
    well_poised = (1 - a0 * (q * powers) ** 2) / (1 - a0)
    return complex(1 + np.sum(well_poised * cores))


def _polar(rng: np.random.Generator, lo: float, hi: float) -> complex:
    return complex(rng.uniform(lo, hi) * np.exp(1j * rng.uniform(-np.pi, np.pi)))


class TestBruteForceOracle:
    """Compare against direct 10,000-term sums and products at 100 random points."""

    TERMS = 10_000
    POINTS = 100

    def test_qpochhammer_inf(self) -> None:
        """(a; q)_inf agrees with the truncated product."""
        rng = np.random.default_rng(11)
        for _ in range(self.POINTS):
            a, q = _polar(rng, 0.05, 3.0), float(rng.uniform(0.2, 0.8))
            reference = _brute_qp(a, q, self.TERMS)
            assert abs(qpochhammer_inf(a, q).value - reference) <= 1e-10 * max(1.0, abs(reference))

    def test_theta(self) -> None:
        """theta(u; q) agrees with the product of two truncated products."""
        rng = np.random.default_rng(12)
        for _ in range(self.POINTS):
            u, q = _polar(rng, 0.2, 5.0), float(rng.uniform(0.2, 0.8))
            reference = _brute_qp(u, q, self.TERMS) * _brute_qp(q / u, q, self.TERMS)
            assert abs(theta(u, q).value - reference) <= 1e-10 * max(1.0, abs(reference))

    def test_phi_series(self) -> None:
        """A random 3phi2 agrees with the truncated sum."""
        rng = np.random.default_rng(13)
        for _ in range(self.POINTS):
            num = [_polar(rng, 0.0, 0.5) for _ in range(3)]
            den = [_polar(rng, 0.0, 0.5) for _ in range(2)]
            q, z = float(rng.uniform(0.2, 0.6)), _polar(rng, 0.0, 0.5)
            result = phi_series(num, den, q, z)
            reference = _brute_phi(num, den, q, z, self.TERMS)
            assert result.converged
            assert abs(result.value - reference) <= 1e-10 * max(1.0, abs(reference))

    def test_w8_7(self) -> None:
        """A random 8W7 agrees with the truncated sum of its explicit terms."""
        rng = np.random.default_rng(14)
        for _ in range(self.POINTS):
            a0 = _polar(rng, 0.0, 0.1)
            alphas = [_polar(rng, 0.4, 0.6) for _ in range(5)]
            q, z = float(rng.uniform(0.2, 0.6)), _polar(rng, 0.0, 0.4)
            result = w8_7(a0, alphas, q, z)
            reference = _brute_w87(a0, alphas, q, z, self.TERMS)
            assert result.converged
            assert abs(result.value - reference) <= 1e-10 * max(1.0, abs(reference))


class TestProductIdentities:
    """Structural identities of theta and the q-Pochhammer symbols."""

    def test_theta_quasi_periodicity(self) -> None:
        """theta(q u; q) + theta(u; q) / u vanishes at 500 random (u, q)."""
        rng = np.random.default_rng(21)
        for _ in range(500):
            u, q = _polar(rng, 0.2, 5.0), float(rng.uniform(0.2, 0.8))
            base = theta(u, q).value
            defect = abs(theta(q * u, q).value + base / u)
            assert defect <= 1e-10 * max(1.0, abs(base))

    def test_pochhammer_splitting(self) -> None:
        """(a; q)_(n+m) = (a; q)_n (a q**n; q)_m for 0 <= n, m <= 10."""
        rng = np.random.default_rng(22)
        for _ in range(20):
            # Keep a off the positive real axis so no factor 1 - a q**i is near 0
            phase = float(rng.uniform(0.3, math.pi)) * float(rng.choice([-1.0, 1.0]))
            a = float(rng.uniform(0.1, 3.0)) * cmath.exp(1j * phase)
            q = float(rng.uniform(0.2, 0.8))
            for n in range(11):
                for m in range(11):
                    whole = qpochhammer_finite(a, q, n + m)
                    split = qpochhammer_finite(a, q, n) * qpochhammer_finite(a * q**n, q, m)
                    assert _close(split, whole, 1e-12)


class TestRefinement:
    """Tightening rel_tol moves a value by less than ten times its error bound."""

    @pytest.mark.parametrize("z", [0.5, -0.7 + 0.2j, 0.9j])
    def test_phi_series(self, z: complex) -> None:
        """2phi1 under rel_tol and rel_tol / 10."""
        coarse = Tolerance(rel_tol=1e-6)
        num, den, q = [0.3 + 0.2j, -1.4], [0.6 - 0.1j], 0.55
        first = phi_series(num, den, q, z, coarse)
        second = phi_series(num, den, q, z, coarse.refined())
        assert abs(second.value - first.value) <= 10 * first.tail_estimate

    def test_w8_7(self) -> None:
        """8W7 under rel_tol and rel_tol / 10."""
        coarse = Tolerance(rel_tol=1e-7)
        alphas = [0.2 + 0.1j, -0.6, 1.1j, 0.8 - 0.4j, -0.3 + 0.2j]
        first = w8_7(0.37, alphas, 0.5, -0.6 + 0.3j, coarse)
        second = w8_7(0.37, alphas, 0.5, -0.6 + 0.3j, coarse.refined())
        assert abs(second.value - first.value) <= 10 * first.tail_estimate

    @pytest.mark.parametrize("a", [0.5, -1.3 + 0.4j, 2.5 - 1.1j])
    def test_qpochhammer_inf(self, a: complex) -> None:
        """(a; q)_inf under rel_tol and rel_tol / 10."""
        coarse = Tolerance(rel_tol=1e-6)
        first = qpochhammer_inf(a, 0.7, coarse)
        second = qpochhammer_inf(a, 0.7, coarse.refined())
        assert abs(second.value - first.value) <= 10 * first.tail_estimate


class TestRounding:
    """Rounding error is part of the reported error bound."""

    def test_cancellation_clears_converged(self) -> None:
        """A terminating sum that cancels to 0 from huge terms is flagged."""
        q = 0.5
        # 1phi0(q^-12;; q, q) = (q^-11; q)_12 = 0 while its terms reach 2**66
        result = phi_series([q**-12], [], q, q)
        assert not result.converged
        assert result.tail_estimate > 1e3
        assert abs(result.value) <= result.tail_estimate

    def test_well_conditioned_sum_stays_converged(self) -> None:
        """Sums without cancellation keep a rounding share far below roundoff_limit."""
        result = phi_series([0.3 + 0.2j, -0.4], [0.6 - 0.1j], 0.55, 0.5)
        assert result.converged
        assert result.tail_estimate <= Tolerance().roundoff_limit * max(1.0, abs(result.value))

    def test_roundoff_limit_controls_flag(self) -> None:
        """The same sum is flagged once roundoff_limit drops below its rounding bound."""
        num, den, q, z = [0.3 + 0.2j, -0.4], [0.6 - 0.1j], 0.55, 0.5
        loose = phi_series(num, den, q, z)
        strict = phi_series(num, den, q, z, Tolerance(roundoff_limit=1e-300))
        assert loose.converged
        assert not strict.converged
        assert strict.value == loose.value
