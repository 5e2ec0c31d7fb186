"""Randomized verification of the Askey-Wilson function identities."""

from .engine import CheckEngine, Comparison, SamplePoint, Trial
from .registry import REGISTRY, IdentityEntry, get_identity, identity_names, run_all, run_all_async
from .report import IdentityReport, ParamsRecord, PointRecord
from .sampling import Sampler, identity_stream

__all__ = [
    "CheckEngine",
    "Comparison",
    "IdentityEntry",
    "IdentityReport",
    "ParamsRecord",
    "PointRecord",
    "REGISTRY",
    "SamplePoint",
    "Sampler",
    "Trial",
    "get_identity",
    "identity_names",
    "identity_stream",
    "run_all",
    "run_all_async",
]
