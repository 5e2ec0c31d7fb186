"""Seeded random draws of parameters and evaluation points."""

import math
from fractions import Fraction

import numpy as np

from ..awcore import HeckeParams
from ..config import SamplePolicy
from ..types import EvalPoint


def identity_stream(policy: SamplePolicy, identity_id: str) -> np.random.Generator:
    """Independent generator for one identity, keyed by the policy seed and the identity name."""
    key = tuple(identity_id.encode("utf-8"))
    return np.random.default_rng(np.random.SeedSequence(policy.seed, spawn_key=key))


class Sampler:
    """Draws admissible-looking random inputs for identity checks.

    All draws come from one numpy Generator, so a fixed seed replays the
    exact sequence including the re-draws that follow rejected points.
    """

    def __init__(self, policy: SamplePolicy, rng: np.random.Generator) -> None:
        """Initialize.

        Args:
            policy: Ranges and counts
            rng: Seeded generator
        """
        self.policy = policy
        self.rng = rng

    def uniform(self, lo: float, hi: float) -> float:
        """Uniform float in [lo, hi]."""
        return float(self.rng.uniform(lo, hi))

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi]."""
        return int(self.rng.integers(lo, hi + 1))

    def choice(self, options: tuple[object, ...]) -> object:
        """Uniform choice among options."""
        return options[int(self.rng.integers(0, len(options)))]

    def q(self, lo: float | None = None, hi: float | None = None) -> float:
        """Deformation parameter, optionally narrowed to [lo, hi] inside q_range."""
        q_lo, q_hi = self.policy.q_range
        return self.uniform(max(q_lo, lo or q_lo), min(q_hi, hi or q_hi))

    def step(self) -> Fraction:
        """Step size from s_choices."""
        index = int(self.rng.integers(0, len(self.policy.s_choices)))
        return self.policy.s_choices[index]

    def hecke(self) -> float:
        """One Hecke parameter from hecke_range."""
        return self.uniform(*self.policy.hecke_range)

    def params(
        self,
        q: float | None = None,
        s: Fraction | None = None,
    ) -> HeckeParams:
        """Random Hecke parameter tuple."""
        return HeckeParams(
            kappa=self.hecke(),
            lambda_=self.hecke(),
            upsilon=self.hecke(),
            varsigma=self.hecke(),
            q=self.q() if q is None else q,
            s=self.step() if s is None else s,
        )

    def complex_value(self, q: float) -> complex:
        """Complex argument; |Im| is at most im_fraction of the period 2 pi / |ln q|."""
        period = 2 * math.pi / abs(math.log(q))
        bound = self.policy.im_fraction * period
        real = self.uniform(*self.policy.re_range)
        imag = self.uniform(-bound, bound) if bound > 0 else 0.0
        return complex(real, imag)

    def point(self, q: float) -> EvalPoint:
        """Random (x, z)."""
        return EvalPoint(self.complex_value(q), self.complex_value(q))

    def polar(self, r_lo: float, r_hi: float) -> complex:
        """Complex number with modulus in [r_lo, r_hi] and uniform phase."""
        radius = self.uniform(r_lo, r_hi)
        phase = self.uniform(-math.pi, math.pi)
        return complex(radius * math.cos(phase), radius * math.sin(phase))
