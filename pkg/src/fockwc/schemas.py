"""Request/response models shared by the pipeline, the HTTP service and the CLI.

Complex numbers travel as two-element [re, im] arrays; p = "inf" is the
explicit tag for the sup-norm space.  Unknown fields are rejected everywhere.
"""

from __future__ import annotations

import math
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .core import AffineSymbol, ExpQuadWeight, KernelWeight, TaylorWeight, Weight

FiniteFloat = Annotated[float, Field(allow_inf_nan=False)]
ComplexPair = tuple[FiniteFloat, FiniteFloat]

TaskName = Literal["classify", "spectrum", "ergodic", "verify", "matrix"]

#: Execution order honoring dependencies (classification before verification;
#: the matrix is built once and shared).
TASK_ORDER: tuple = ("classify", "spectrum", "ergodic", "matrix", "verify")


def _cx(pair: ComplexPair) -> complex:
    return complex(pair[0], pair[1])


def _pair(z: complex) -> tuple:
    return (float(z.real), float(z.imag))


class KernelWeightSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["kernel"] = "kernel"
    u0: ComplexPair
    w: ComplexPair

    def build(self) -> KernelWeight:
        return KernelWeight(_cx(self.u0), _cx(self.w))


class ExpQuadWeightSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["expquad"] = "expquad"
    a0: ComplexPair
    a1: ComplexPair
    a2: ComplexPair

    def build(self) -> ExpQuadWeight:
        return ExpQuadWeight(_cx(self.a0), _cx(self.a1), _cx(self.a2))


class TaylorWeightSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["taylor"] = "taylor"
    coeffs: list[ComplexPair] = Field(min_length=1, max_length=129)

    def build(self) -> TaylorWeight:
        return TaylorWeight(tuple(_cx(c) for c in self.coeffs))


WeightSpec = Annotated[
    Union[KernelWeightSpec, ExpQuadWeightSpec, TaylorWeightSpec],
    Field(discriminator="kind"),
]


def weight_spec_from(weight: Weight):
    if isinstance(weight, KernelWeight):
        return KernelWeightSpec(u0=_pair(weight.u0), w=_pair(weight.w))
    if isinstance(weight, ExpQuadWeight):
        return ExpQuadWeightSpec(a0=_pair(weight.a0), a1=_pair(weight.a1), a2=_pair(weight.a2))
    return TaylorWeightSpec(coeffs=[_pair(c) for c in weight.coeffs])


class SymbolSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")
    a: ComplexPair
    b: ComplexPair

    def build(self) -> AffineSymbol:
        return AffineSymbol(_cx(self.a), _cx(self.b))


class NumericOptions(BaseModel):
    model_config = ConfigDict(extra="forbid")
    N: int = Field(64, ge=1, le=512)
    cesaro_N: int = Field(48, ge=1, le=512)
    nmax: int = Field(20, ge=1, le=2000)
    tol: FiniteFloat = Field(1e-6, gt=0)
    seed: int = Field(1234, ge=0)
    exact: bool = False  # exact parameter dichotomies instead of 1e-12 tolerance


class JobConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")
    weight: WeightSpec
    symbol: SymbolSpec
    p: Union[FiniteFloat, Literal["inf"]] = 2.0
    tasks: list[TaskName] = Field(min_length=1)
    numeric: NumericOptions = Field(default_factory=NumericOptions)

    @field_validator("p")
    @classmethod
    def _check_p(cls, v):
        if isinstance(v, str):
            return v
        if v < 1.0:
            raise ValueError("p must satisfy p >= 1 (or be \"inf\")")
        return v

    @field_validator("tasks")
    @classmethod
    def _dedupe(cls, v):
        seen = []
        for t in v:
            if t not in seen:
                seen.append(t)
        return seen

    def p_value(self) -> float:
        return math.inf if self.p == "inf" else float(self.p)

    def ordered_tasks(self) -> list:
        return [t for t in TASK_ORDER if t in self.tasks]


class VerdictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    value: Literal["yes", "no", "undetermined"]
    reason: str
    anchor: str


class LimitModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["zero", "identity", "rank-one", "periodic-average", "eval-at-zero", "unknown"]
    weight: Optional[ExpQuadWeightSpec] = None
    z0: Optional[ComplexPair] = None
    period: Optional[int] = None
    note: str = ""


class ErgodicModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    mean: VerdictModel
    uniform: VerdictModel
    limit: LimitModel


class SpectrumModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["finite", "geometric-with-zero", "circle"]
    points: list[ComplexPair] = []
    base: Optional[ComplexPair] = None
    ratio: Optional[ComplexPair] = None
    radius: Optional[FiniteFloat] = None


JsonFloat = Union[FiniteFloat, Literal["inf"]]


def json_float(x: float) -> Union[float, str]:
    return "inf" if math.isinf(x) else float(x)


class NormEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")
    n: int
    lo: JsonFloat
    hi: JsonFloat
    exact: bool
    numeric: Optional[FiniteFloat] = None
    note: str = ""


class VerificationEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")
    name: str
    passed: bool
    delta: Optional[JsonFloat] = None
    tol: Optional[FiniteFloat] = None
    note: str = ""


class Report(BaseModel):
    model_config = ConfigDict(extra="forbid")
    config: JobConfig
    verdicts: dict[str, VerdictModel] = {}
    ergodic: Optional[ErgodicModel] = None
    spectrum: Optional[SpectrumModel] = None
    norms: list[NormEntry] = []
    verification: list[VerificationEntry] = []
    matrix_csv: Optional[str] = None
    failures: list[str] = []
    timing: Optional[dict[str, float]] = None

    def all_passed(self) -> bool:
        return not self.failures and all(entry.passed for entry in self.verification)


class SweepRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    jobs: list[JobConfig] = Field(min_length=1)


class SweepRow(BaseModel):
    model_config = ConfigDict(extra="forbid")
    index: int
    ok: bool
    bounded: str = ""
    compact: str = ""
    power_bounded: str = ""
    mean_ergodic: str = ""
    uniformly_mean_ergodic: str = ""
    spectrum_kind: str = ""
    max_delta: Optional[JsonFloat] = None
    error: str = ""


class SweepSummary(BaseModel):
    model_config = ConfigDict(extra="forbid")
    rows: list[SweepRow]
    reports: list[Report] = []
