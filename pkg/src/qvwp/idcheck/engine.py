"""Per-point sampling loop that turns an identity evaluator into a report."""

import cmath
import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass

from ..awcore import HeckeParams
from ..config import SamplePolicy, Tolerance
from ..exceptions import QVWPError
from ..logging import LogContext
from ..types import SeriesValue
from .report import IdentityReport, PointRecord
from .sampling import Sampler, identity_stream

# Floor of the relative residual denominator
_TINY = 1e-30


@dataclass(frozen=True)
class SamplePoint:
    """Where an identity was evaluated; recorded as the report's worst point."""

    x: complex
    z: complex
    params: HeckeParams


@dataclass(frozen=True)
class Comparison:
    """Two sides of one identity at one point.

    ``scale`` is the sum of the magnitudes of the terms that make up the
    two sides; when it exceeds the larger side by more than the policy's
    max_cancellation, the point is rejected. Independently, a point is
    rejected when the error bounds carried by the sides exceed
    error_fraction * check_tol relative to the larger side.
    """

    lhs: SeriesValue | complex
    rhs: SeriesValue | complex
    scale: float | None = None

    @property
    def left(self) -> complex:
        return complex(self.lhs)

    @property
    def right(self) -> complex:
        return complex(self.rhs)

    @property
    def converged(self) -> bool:
        """False if either side is a series that stopped at term_cap."""
        sides = (self.lhs, self.rhs)
        return all(side.converged for side in sides if isinstance(side, SeriesValue))

    @property
    def error_bound(self) -> float:
        """Sum of the absolute error bounds of the series sides (0 for plain numbers)."""
        sides = (self.lhs, self.rhs)
        return float(sum(side.tail_estimate for side in sides if isinstance(side, SeriesValue)))


@dataclass(frozen=True)
class Trial:
    """Result of evaluating an identity at one sampled point."""

    point: SamplePoint
    comparisons: Sequence[Comparison]


# (sampler, point index) -> trial; any QVWPError or arithmetic failure rejects the draw
Evaluator = Callable[[Sampler, int], Trial]


class _Rejected(Exception):
    """Sampled point is inadmissible for a reason found after evaluation."""


class CheckEngine:
    """Runs an identity over n_points admissible random points."""

    def __init__(
        self,
        policy: SamplePolicy,
        tolerance: Tolerance,
        logger: logging.Logger,
    ) -> None:
        """Initialize check engine.

        Args:
            policy: Sampling and pass/fail settings
            tolerance: Series engine settings handed to the evaluators
            logger: Logger instance
        """
        self.policy = policy
        self.tolerance = tolerance
        self.logger = logger

    def run(self, identity_id: str, evaluate: Evaluator) -> IdentityReport:
        """Evaluate the identity at n_points points and summarize the residuals.

        Each point is re-drawn up to max_retries times when evaluation fails
        or the sides are non-finite, unconverged, dominated by cancellation or
        carry error bounds too wide to resolve check_tol.
        A point whose retries are exhausted is counted as skipped.

        Args:
            identity_id: Short identity name (also keys the random stream)
            evaluate: Evaluator of both sides at a sampled point

        Returns:
            IdentityReport for the run
        """
        policy = self.policy
        sampler = Sampler(policy, identity_stream(policy, identity_id))
        context = LogContext(self.logger, {"identity": identity_id, "seed": policy.seed})

        evaluated = 0
        skipped = 0
        max_abs = 0.0
        max_rel = 0.0
        worst: SamplePoint | None = None

        for index in range(policy.n_points):
            outcome = self._evaluate_point(sampler, index, evaluate, context.child(point=index))
            if outcome is None:
                skipped += 1
                continue
            point, abs_residual, rel_residual = outcome
            evaluated += 1
            max_abs = max(max_abs, abs_residual)
            if worst is None or rel_residual > max_rel:
                max_rel = rel_residual
                worst = point

        passed = max_rel <= policy.check_tol and evaluated >= policy.min_quota * policy.n_points
        report = IdentityReport(
            identity_id=identity_id,
            seed=policy.seed,
            points_requested=policy.n_points,
            points_evaluated=evaluated,
            points_skipped=skipped,
            max_abs_residual=max_abs,
            max_rel_residual=max_rel,
            worst_point=(
                None if worst is None else PointRecord.from_values(worst.x, worst.z, worst.params)
            ),
            passed=passed,
        )
        if skipped:
            context.warning(f"{skipped} of {policy.n_points} points skipped")
        context.info(report.summary())
        return report

    def _evaluate_point(
        self,
        sampler: Sampler,
        index: int,
        evaluate: Evaluator,
        context: LogContext,
    ) -> tuple[SamplePoint, float, float] | None:
        """Draw until an admissible point is found; None when retries run out."""
        for attempt in range(self.policy.max_retries):
            try:
                trial = evaluate(sampler, index)
                abs_residual, rel_residual = self._residuals(trial.comparisons)
            except (QVWPError, ArithmeticError, ValueError, _Rejected) as e:
                context.debug(f"Draw {attempt + 1} rejected: {type(e).__name__}: {e}")
                continue
            return trial.point, abs_residual, rel_residual
        return None

    def _residuals(self, comparisons: Sequence[Comparison]) -> tuple[float, float]:
        """Largest absolute and relative residual over the comparisons of one point."""
        if not comparisons:
            raise _Rejected("no comparisons")
        factor = 1.0 + self.policy.inject_relative_error
        error_limit = self.policy.error_fraction * self.policy.check_tol
        abs_residual = 0.0
        rel_residual = 0.0
        for comparison in comparisons:
            if not comparison.converged:
                raise _Rejected("series did not converge")
            lhs = comparison.left
            rhs = comparison.right * factor
            if not (cmath.isfinite(lhs) and cmath.isfinite(rhs)):
                raise _Rejected("non-finite side")
            size = max(abs(lhs), abs(rhs))
            if comparison.scale is not None and size > 0:
                if comparison.scale > self.policy.max_cancellation * size:
                    raise _Rejected(f"cancellation factor {comparison.scale / size:.3g}")
            bound = comparison.error_bound
            if bound > error_limit * size:
                raise _Rejected(f"error bound {bound:.3g} against |side| {size:.3g}")
            difference = abs(lhs - rhs)
            abs_residual = max(abs_residual, difference)
            rel_residual = max(rel_residual, difference / max(size, _TINY))
        return abs_residual, rel_residual
