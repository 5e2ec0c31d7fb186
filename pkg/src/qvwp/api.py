"""Main API for running identity checks."""

import asyncio
from collections.abc import Sequence

from .config import LoggingConfig, SamplePolicy, Tolerance
from .exceptions import QVWPError
from .idcheck.registry import REGISTRY, IdentityEntry, get_identity
from .idcheck.report import IdentityReport
from .logging import setup_logger

LOGGER_NAME = "qvwp.api"


def _select(names: Sequence[str] | None) -> list[IdentityEntry]:
    if names is None:
        return list(REGISTRY)
    return [get_identity(name) for name in names]


def run_identity(
    name: str,
    policy: SamplePolicy | None = None,
    tol: Tolerance | None = None,
    logging_config: LoggingConfig | None = None,
) -> IdentityReport:
    """Run one identity check.

    Args:
        name: Identity name, with or without the ``check_`` prefix
        policy: Sampling settings (defaults to SamplePolicy())
        tol: Series engine settings (defaults to Tolerance())
        logging_config: Logging configuration

    Returns:
        The identity's report

    Raises:
        ConfigError: If the identity name is unknown
    """
    return run_identities([name], policy, tol, logging_config)[0]


def run_identities(
    names: Sequence[str] | None = None,
    policy: SamplePolicy | None = None,
    tol: Tolerance | None = None,
    logging_config: LoggingConfig | None = None,
) -> list[IdentityReport]:
    """Run identity checks in the order given (all of them, in registry order, when None).

    Raises:
        ConfigError: If an identity name is unknown
    """
    policy = policy or SamplePolicy()
    tol = tol or Tolerance()
    logger = setup_logger(LOGGER_NAME, logging_config or LoggingConfig())

    try:
        entries = _select(names)
    except QVWPError as e:
        logger.error(f"Identity selection failed: {e.message}", extra={"context": e.context})
        raise

    reports = [entry.check(policy, tol, logger) for entry in entries]
    failed = [report.identity_id for report in reports if not report.passed]
    if failed:
        logger.warning(f"{len(failed)} of {len(reports)} identities failed: {', '.join(failed)}")
    else:
        logger.info(f"All {len(reports)} identities passed")
    return reports


async def run_identities_async(
    names: Sequence[str] | None = None,
    policy: SamplePolicy | None = None,
    tol: Tolerance | None = None,
    logging_config: LoggingConfig | None = None,
) -> list[IdentityReport]:
    """Async version of run_identities.

    Checks run concurrently in worker threads; the reports are returned in
    the same order as run_identities and are identical to its reports.

    Raises:
        ConfigError: If an identity name is unknown
    """
    policy = policy or SamplePolicy()
    tol = tol or Tolerance()
    logger = setup_logger(LOGGER_NAME, logging_config or LoggingConfig())

    try:
        entries = _select(names)
    except QVWPError as e:
        logger.error(f"Identity selection failed: {e.message}", extra={"context": e.context})
        raise

    tasks = [asyncio.to_thread(entry.check, policy, tol, logger) for entry in entries]
    reports = list(await asyncio.gather(*tasks))
    failed = [report.identity_id for report in reports if not report.passed]
    if failed:
        logger.warning(f"{len(failed)} of {len(reports)} identities failed: {', '.join(failed)}")
    else:
        logger.info(f"All {len(reports)} identities passed")
    return reports
