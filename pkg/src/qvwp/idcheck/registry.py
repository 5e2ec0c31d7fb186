"""Ordered catalogue of identity checks."""

import asyncio
import logging
from collections.abc import Callable
from dataclasses import dataclass

from ..config import SamplePolicy, Tolerance
from ..exceptions import ConfigError
from . import checks
from .report import IdentityReport

CheckFunction = Callable[[SamplePolicy, Tolerance, logging.Logger | None], IdentityReport]


@dataclass(frozen=True)
class IdentityEntry:
    """One registered identity: short name, descriptive anchor and check function."""

    name: str
    anchor: str
    check: CheckFunction

    @property
    def qualified_name(self) -> str:
        return f"check_{self.name}"

    def listing(self) -> str:
        """Line shown by ``qvwp list``."""
        return f"{self.qualified_name} — {self.anchor}"


REGISTRY: tuple[IdentityEntry, ...] = (
    IdentityEntry("eigen_phi", "eigenvalue equation of Phi under D", checks.check_eigen_phi),
    IdentityEntry("selfdual_phi", "selfduality Phi(x,z) = Phi^d(z,x)", checks.check_selfdual_phi),
    IdentityEntry("selfdual_E", "selfduality E(x,z) = E^d(z,x)", checks.check_selfdual_E),
    IdentityEntry("even_E", "evenness E(-x,z) = E(x,z) = E(x,-z)", checks.check_even_E),
    IdentityEntry("c_expansion", "c-function expansion of E", checks.check_c_expansion),
    IdentityEntry("connection", "connection formula for Phi(-x,z)", checks.check_connection),
    IdentityEntry("c_quadratic", "quadratic relation of the c-function", checks.check_c_quadratic),
    IdentityEntry(
        "slater_theta", "special case of Slater's theta identity", checks.check_slater_theta
    ),
    IdentityEntry("psi_symmetry", "Psi symmetric under permutations", checks.check_psi_symmetry),
    IdentityEntry("W_recurrence", "W(x+s,z) = a_dual q^z W(x,z)", checks.check_W_recurrence),
    IdentityEntry(
        "c_periodicity", "c(x+s,z) = c(x,z) = c(x,z+s)", checks.check_c_periodicity
    ),
    IdentityEntry(
        "trivial_monodromy",
        "trivial monodromy at half-integer Hecke parameters",
        checks.check_trivial_monodromy,
    ),
    IdentityEntry(
        "factorization", "factorization of D_J through L", checks.check_factorization
    ),
    IdentityEntry(
        "quadratic_phi",
        "quadratic transformation Phi_J = Phi_R",
        checks.check_quadratic_phi,
    ),
    IdentityEntry(
        "qtrans_8W7", "quadratic transformation of 8W7 series", checks.check_qtrans_8W7
    ),
    IdentityEntry(
        "qtrans_8W7_dual",
        "dual quadratic transformation of 8W7 series",
        checks.check_qtrans_8W7_dual,
    ),
    IdentityEntry(
        "poly_reduction",
        "Phi at z = -kappa-upsilon-ns is a multiple of P_n",
        checks.check_poly_reduction,
    ),
    IdentityEntry(
        "E_poly", "E at z = -kappa-upsilon-ns is a multiple of P_n", checks.check_E_poly
    ),
    IdentityEntry("singh", "quadratic transformation of terminating 4phi3", checks.check_singh),
    IdentityEntry(
        "quadratic_c",
        "connection coefficients of the J and R specializations",
        checks.check_quadratic_c,
    ),
    IdentityEntry("theta_ident", "theta function identity in a, b, c, d", checks.check_theta_ident),
    IdentityEntry(
        "E_R_is_L_eigen", "E_R is an eigenfunction of L", checks.check_E_R_is_L_eigen
    ),
)


def identity_names() -> list[str]:
    """Short identity names in registry order."""
    return [entry.name for entry in REGISTRY]


def get_identity(name: str) -> IdentityEntry:
    """Look up an identity by short name or by its ``check_`` name.

    Raises:
        ConfigError: If no identity has that name
    """
    short = name[len("check_") :] if name.startswith("check_") else name
    for entry in REGISTRY:
        if entry.name == short:
            return entry
    raise ConfigError(f"Unknown identity '{name}'", config_key="identity")


def run_all(
    policy: SamplePolicy,
    tol: Tolerance | None = None,
    logger: logging.Logger | None = None,
) -> list[IdentityReport]:
    """Run every registered check; each draws from its own seeded stream."""
    tol = tol or Tolerance()
    return [entry.check(policy, tol, logger) for entry in REGISTRY]


async def run_all_async(
    policy: SamplePolicy,
    tol: Tolerance | None = None,
    logger: logging.Logger | None = None,
) -> list[IdentityReport]:
    """Async version of run_all: checks run in worker threads, reports keep registry order."""
    tol = tol or Tolerance()
    tasks = [asyncio.to_thread(entry.check, policy, tol, logger) for entry in REGISTRY]
    return list(await asyncio.gather(*tasks))
