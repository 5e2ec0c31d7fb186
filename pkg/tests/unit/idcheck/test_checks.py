"""Tests for the identity checks."""

import logging

import pytest

from qvwp import SamplePolicy, Tolerance
from qvwp.idcheck import REGISTRY, get_identity
from qvwp.idcheck.checks import (
    MONODROMY_TUPLES,
    check_c_periodicity,
    check_qtrans_8W7,
    check_quadratic_phi,
    check_theta_ident,
    check_trivial_monodromy,
    check_W_recurrence,
)
from qvwp.idcheck.registry import CheckFunction, IdentityEntry

# Closed-form identities that evaluate quickly
FAST_IDENTITIES = [
    "W_recurrence",
    "c_periodicity",
    "slater_theta",
    "theta_ident",
    "c_quadratic",
    "connection",
    "quadratic_c",
    "singh",
    "qtrans_8W7",
    "qtrans_8W7_dual",
]


class TestFastChecks:
    """Run the closed-form identities on a handful of points."""

    @pytest.mark.parametrize("name", FAST_IDENTITIES)
    def test_passes(self, name: str, quiet_logger: logging.Logger) -> None:
        """The identity holds at every sampled point."""
        policy = SamplePolicy(n_points=5, seed=0)
        report = get_identity(name).check(policy, Tolerance(), quiet_logger)

        assert report.identity_id == name
        assert report.passed, report.summary()
        assert report.max_rel_residual <= policy.check_tol

    @pytest.mark.parametrize("check", [check_W_recurrence, check_c_periodicity])
    def test_injected_error_detected(
        self, check: CheckFunction, quiet_logger: logging.Logger
    ) -> None:
        """A 1e-6 relative perturbation of the right side fails the check."""
        policy = SamplePolicy(n_points=5, seed=0, inject_relative_error=1e-6)
        report = check(policy, Tolerance(), quiet_logger)

        assert not report.passed
        assert report.max_rel_residual > policy.check_tol

    def test_deterministic(self, quiet_logger: logging.Logger) -> None:
        """A fixed seed reproduces the report exactly."""
        policy = SamplePolicy(n_points=4, seed=42)
        first = check_theta_ident(policy, Tolerance(), quiet_logger)
        second = check_theta_ident(policy, Tolerance(), quiet_logger)
        assert first == second

    def test_seed_changes_points(self, quiet_logger: logging.Logger) -> None:
        """Different seeds sample different worst points."""
        first = check_theta_ident(SamplePolicy(n_points=3, seed=1), Tolerance(), quiet_logger)
        second = check_theta_ident(SamplePolicy(n_points=3, seed=2), Tolerance(), quiet_logger)
        assert first.worst_point != second.worst_point

    @pytest.mark.parametrize("check", [check_c_periodicity, check_theta_ident])
    def test_halving_rel_tol_does_not_inflate_residual(
        self, check: CheckFunction, quiet_logger: logging.Logger
    ) -> None:
        """Halving rel_tol at most doubles the largest residual, up to rounding."""
        policy = SamplePolicy(n_points=6, seed=5, check_tol=1e-2)
        coarse = check(policy, Tolerance(rel_tol=1e-6), quiet_logger)
        fine = check(policy, Tolerance(rel_tol=5e-7), quiet_logger)

        assert coarse.points_evaluated == fine.points_evaluated == 6
        assert fine.max_rel_residual <= 2 * coarse.max_rel_residual + 1e-12


class TestTrivialMonodromy:
    """Test the half-integer parameter check."""

    def test_base_tuples(self) -> None:
        """Eight tuples with entries in {0, 1/2}."""
        assert len(MONODROMY_TUPLES) == 8
        assert len(set(MONODROMY_TUPLES)) == 8
        assert all(2 * v in (0, 1) for t in MONODROMY_TUPLES for v in t)

    @pytest.mark.slow
    def test_passes(self, quiet_logger: logging.Logger) -> None:
        """All four relations hold at the base tuples and shifted tuples."""
        policy = SamplePolicy(n_points=10, seed=0)
        report = check_trivial_monodromy(policy, Tolerance(), quiet_logger)
        assert report.passed, report.summary()


@pytest.mark.slow
class TestAllChecks:
    """Run every registered identity."""

    @pytest.mark.parametrize("entry", REGISTRY, ids=[entry.name for entry in REGISTRY])
    def test_passes(self, entry: IdentityEntry, quiet_logger: logging.Logger) -> None:
        """Every identity passes on a small batch."""
        report = entry.check(SamplePolicy(n_points=8, seed=3), Tolerance(), quiet_logger)
        assert report.passed, report.summary()

    def test_contrast_is_logged(
        self, quiet_logger: logging.Logger, caplog: pytest.LogCaptureFixture
    ) -> None:
        """The E_R check logs the c_J/c_R contrast without changing its report."""
        with caplog.at_level(logging.INFO, logger=quiet_logger.name):
            get_identity("E_R_is_L_eigen").check(
                SamplePolicy(n_points=2, seed=0), Tolerance(), quiet_logger
            )
        assert "c_J/c_R" in caplog.text

    @pytest.mark.parametrize("injected", [0.0, 1e-6])
    def test_quadratic_pair_agrees(self, injected: float, quiet_logger: logging.Logger) -> None:
        """quadratic_phi and qtrans_8W7 pass or fail together on the same draws."""
        policy = SamplePolicy(n_points=10, seed=42, inject_relative_error=injected)
        phi = check_quadratic_phi(policy, Tolerance(), quiet_logger)
        series = check_qtrans_8W7(policy, Tolerance(), quiet_logger)

        assert phi.passed == series.passed
        assert phi.passed is (injected == 0.0), phi.summary()
