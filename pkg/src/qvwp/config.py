"""Configuration management (immutable dataclasses)."""

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from .types import OutputFormat


@dataclass(frozen=True)
class Tolerance:
    """Truncation and pole-guard settings shared by every series engine."""

    rel_tol: float = 1e-13
    term_cap: int = 10_000
    pole_guard: float = 1e-8
    series_radius: float = 0.9  # route switch margin for Psi and E
    roundoff_limit: float = 1e-10  # accumulated rounding error a converged sum may carry

    def __post_init__(self) -> None:
        """Validation."""
        if not 0 < self.rel_tol < 1:
            raise ValueError("rel_tol must be in (0, 1)")
        if self.term_cap < 1:
            raise ValueError("term_cap must be >= 1")
        if not 0 < self.pole_guard < 1:
            raise ValueError("pole_guard must be in (0, 1)")
        if not 0 < self.series_radius < 1:
            raise ValueError("series_radius must be in (0, 1)")
        if not 0 < self.roundoff_limit < 1:
            raise ValueError("roundoff_limit must be in (0, 1)")

    def refined(self, factor: float = 10.0) -> "Tolerance":
        """Return a copy with rel_tol divided by factor."""
        return Tolerance(
            rel_tol=self.rel_tol / factor,
            term_cap=self.term_cap,
            pole_guard=self.pole_guard,
            series_radius=self.series_radius,
            roundoff_limit=self.roundoff_limit,
        )


@dataclass(frozen=True)
class SamplePolicy:
    """How identity checks draw their random evaluation points."""

    q_range: tuple[float, float] = (0.2, 0.8)
    hecke_range: tuple[float, float] = (-0.7, 0.7)
    s_choices: tuple[Fraction, ...] = (Fraction(1), Fraction(2))
    re_range: tuple[float, float] = (-2.0, 2.0)
    im_fraction: float = 0.3  # of the period 2*pi/|ln q|
    n_points: int = 100
    seed: int = 0
    max_retries: int = 50
    min_quota: float = 0.8
    check_tol: float = 1e-8
    max_cancellation: float = 1e4
    error_fraction: float = 0.1  # of check_tol, bound on the error estimate of a side
    max_degree: int | None = None
    inject_relative_error: float = 0.0

    def __post_init__(self) -> None:
        """Validation."""
        lo, hi = self.q_range
        if not 0 < lo <= hi < 1:
            raise ValueError("q_range must satisfy 0 < lo <= hi < 1")
        if self.hecke_range[0] > self.hecke_range[1]:
            raise ValueError("hecke_range must be a nonempty interval")
        if self.re_range[0] > self.re_range[1]:
            raise ValueError("re_range must be a nonempty interval")
        if not self.s_choices:
            raise ValueError("s_choices must not be empty")
        object.__setattr__(self, "s_choices", tuple(Fraction(s) for s in self.s_choices))
        if any(s <= 0 for s in self.s_choices):
            raise ValueError("s_choices must be positive")
        if not 0 <= self.im_fraction < 0.5:
            raise ValueError("im_fraction must be in [0, 0.5)")
        if self.n_points < 1:
            raise ValueError("n_points must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be >= 0")
        if self.max_retries < 1:
            raise ValueError("max_retries must be >= 1")
        if not 0 < self.min_quota <= 1:
            raise ValueError("min_quota must be in (0, 1]")
        if self.check_tol <= 0:
            raise ValueError("check_tol must be > 0")
        if self.max_cancellation < 1:
            raise ValueError("max_cancellation must be >= 1")
        if not 0 < self.error_fraction <= 1:
            raise ValueError("error_fraction must be in (0, 1]")
        if self.max_degree is not None and self.max_degree < 0:
            raise ValueError("max_degree must be >= 0")

    def degree_range(self, default: int) -> range:
        """Polynomial degrees a degree-based check should cover."""
        top = default if self.max_degree is None else self.max_degree
        return range(top + 1)


@dataclass(frozen=True)
class LoggingConfig:
    """Logging configuration."""

    level: str = "INFO"  # DEBUG, INFO, WARNING, ERROR, CRITICAL

    def __post_init__(self) -> None:
        """Validation."""
        valid_levels = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}
        if self.level.upper() not in valid_levels:
            raise ValueError(f"level must be one of {valid_levels}")

    def get_logging_level(self) -> int:
        """Return logging level as logging module constant."""
        return int(getattr(logging, self.level.upper()))


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved CLI run (flags, environment and config file merged)."""

    command: str
    target: str | None = None
    tolerance: Tolerance = field(default_factory=Tolerance)
    policy: SamplePolicy = field(default_factory=SamplePolicy)
    logging: LoggingConfig = field(default_factory=lambda: LoggingConfig(level="WARNING"))
    output: OutputFormat = OutputFormat.TABLE
    eval_args: Mapping[str, object] = field(default_factory=dict)  # parsed eval inputs
    concurrent: bool = False

    def __post_init__(self) -> None:
        """Validation."""
        if self.command not in {"eval", "check", "list"}:
            raise ValueError("command must be one of {'eval', 'check', 'list'}")
        if self.command != "list" and not self.target:
            raise ValueError(f"command '{self.command}' needs a target name")
