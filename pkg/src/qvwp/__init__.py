"""qvwp: Askey-Wilson functions, their q-series and randomized identity checks."""

__version__ = "0.1.0"

from .api import run_identities, run_identities_async, run_identity
from .awcore import (
    AWParams,
    HeckeParams,
    apply_D,
    apply_L,
    coeff_A,
    derive_aw,
    dual,
    specialize_J,
    specialize_R,
)
from .config import LoggingConfig, RunConfig, SamplePolicy, Tolerance
from .eigenfun import (
    E_aw,
    Phi,
    Psi,
    St,
    St_dual,
    W_fn,
    aw_polynomial,
    cfun,
    eigenvalue,
    phi_tilde,
)
from .exceptions import (
    ConfigError,
    ConvergenceRegionError,
    DegeneracyError,
    DomainError,
    PoleError,
    QVWPError,
    UnreachableRegionError,
)
from .idcheck import IdentityReport, run_all, run_all_async
from .qcore import (
    phi_series,
    qpochhammer_finite,
    qpochhammer_inf,
    qpochhammer_multi,
    qpow,
    theta,
    theta_multi,
    w8_7,
)
from .types import EigenValue, ERoute, EvalPoint, PsiRoute, SeriesValue

__all__ = [
    # API
    "run_identity",
    "run_identities",
    "run_identities_async",
    "run_all",
    "run_all_async",
    "IdentityReport",
    # q-series
    "qpow",
    "qpochhammer_finite",
    "qpochhammer_inf",
    "qpochhammer_multi",
    "theta",
    "theta_multi",
    "phi_series",
    "w8_7",
    # Parameters and operators
    "HeckeParams",
    "AWParams",
    "derive_aw",
    "dual",
    "coeff_A",
    "apply_D",
    "apply_L",
    "specialize_J",
    "specialize_R",
    # Eigenfunctions
    "W_fn",
    "St",
    "St_dual",
    "Psi",
    "Phi",
    "phi_tilde",
    "cfun",
    "E_aw",
    "aw_polynomial",
    "eigenvalue",
    # Config
    "Tolerance",
    "SamplePolicy",
    "LoggingConfig",
    "RunConfig",
    # Types
    "SeriesValue",
    "EvalPoint",
    "EigenValue",
    "PsiRoute",
    "ERoute",
    # Exceptions
    "QVWPError",
    "DomainError",
    "ConvergenceRegionError",
    "PoleError",
    "DegeneracyError",
    "UnreachableRegionError",
    "ConfigError",
]
