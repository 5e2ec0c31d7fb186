"""Identity reports and their JSON records."""

from fractions import Fraction

from pydantic import BaseModel, ConfigDict, Field

from ..awcore import HeckeParams


class ParamsRecord(BaseModel):
    """Hecke parameters of a sample point; ``s`` is the rational string "p/q"."""

    model_config = ConfigDict(populate_by_name=True, frozen=True)

    kappa: float
    lambda_: float = Field(alias="lambda")
    upsilon: float
    varsigma: float
    q: float
    s: str

    @classmethod
    def from_params(cls, params: HeckeParams) -> "ParamsRecord":
        """Build the record from HeckeParams."""
        step = params.s
        return cls(
            kappa=params.kappa,
            lambda_=params.lambda_,
            upsilon=params.upsilon,
            varsigma=params.varsigma,
            q=params.q,
            s=f"{step.numerator}/{step.denominator}",
        )

    def to_params(self) -> HeckeParams:
        """Rebuild HeckeParams (used to replay a worst point)."""
        return HeckeParams(
            self.kappa, self.lambda_, self.upsilon, self.varsigma, self.q, Fraction(self.s)
        )


class PointRecord(BaseModel):
    """Worst sample point: x and z as [re, im] pairs plus the parameters."""

    model_config = ConfigDict(frozen=True)

    x: tuple[float, float]
    z: tuple[float, float]
    params: ParamsRecord

    @classmethod
    def from_values(cls, x: complex, z: complex, params: HeckeParams) -> "PointRecord":
        """Build the record from complex arguments and HeckeParams."""
        return cls(
            x=(x.real, x.imag),
            z=(z.real, z.imag),
            params=ParamsRecord.from_params(params),
        )


class IdentityReport(BaseModel):
    """Verification record of one identity over a batch of random points."""

    model_config = ConfigDict(frozen=True)

    identity_id: str
    seed: int
    points_requested: int
    points_evaluated: int
    points_skipped: int
    max_abs_residual: float
    max_rel_residual: float
    worst_point: PointRecord | None = None
    passed: bool

    def to_json_dict(self) -> dict[str, object]:
        """JSON-ready dict using the public field names ("lambda", not "lambda_")."""
        return self.model_dump(mode="json", by_alias=True)

    def summary(self) -> str:
        """One-line human summary."""
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status} {self.identity_id}: max_rel={self.max_rel_residual:.3e} "
            f"evaluated={self.points_evaluated}/{self.points_requested} "
            f"skipped={self.points_skipped}"
        )
