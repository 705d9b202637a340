"""Pydantic models shared by the CLI JSON output and the HTTP responses."""

from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field

from src.core.golden import GoldenNumber
from src.services.blocks import BlockDecomposition, adm_window, render_blocks
from src.services.mixing import MixingEstimate
from src.services.mudist import MuDistribution, TowerDump, TowerLevel, mass_window, moment, mu_mass, total_mass


class GoldenNumberModel(BaseModel):
    """Exact a + b*phi with a float approximation."""

    a: str = Field(..., description="Rational part, e.g. '-3/2'")
    b: str = Field(..., description="Coefficient of phi")
    approx: float = Field(..., description="Float approximation")

    @classmethod
    def of(cls, value: GoldenNumber) -> "GoldenNumberModel":
        return cls(**value.to_json())


class EncodeResponse(BaseModel):
    n: int = Field(..., description="Input integer")
    word: str = Field(..., description="Zeckendorf word, most significant digit first")
    digit_sum: int = Field(..., description="Number of ones")


class DecodeResponse(BaseModel):
    word: str = Field(..., description="Input word")
    n: int = Field(..., description="Decoded integer")


class AddResponse(BaseModel):
    n: int
    r: int
    word: str = Field(..., description="Digits of n + r computed by the carry engine")
    value: int
    cases: List[str] = Field(default_factory=list, description="Addition-table case per Fibonacci summand")


class DeltaResponse(BaseModel):
    n: int
    r: int
    delta: int = Field(..., description="s(n + r) - s(n)")


class MuEntry(BaseModel):
    d: int
    mass: GoldenNumberModel


class MuChecksums(BaseModel):
    total_mass: str = Field(..., description="Exact total mass (must be 1)")
    mean: str = Field(..., description="Exact mean (must be 0)")


class MuDistributionModel(BaseModel):
    """mu^(r) on its finite window; below tail_threshold masses follow tail_ratio."""

    r: int
    ell: int
    tail_threshold: int
    entries: List[MuEntry]
    tail_ratio: GoldenNumberModel
    checksums: MuChecksums


class MuMassResponse(BaseModel):
    r: int
    d: int
    mass: GoldenNumberModel


class MuMomentResponse(BaseModel):
    r: int
    p: int
    moment: GoldenNumberModel


class CheckModel(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class VerifyResponse(BaseModel):
    passed: bool
    checks: List[CheckModel]


class BlockModel(BaseModel):
    index: int = Field(..., description="1-based block index from the units side")
    start: int = Field(..., description="n_i, the closing zero (1 under the units convention)")
    length: int = Field(..., description="Number of ones")
    positions: List[int]
    partial_sum: int = Field(..., description="r[i]")
    adm: List[int] = Field(..., description="Positions of the Adm window")


class BlocksResponse(BaseModel):
    r: int
    rho: int
    rendered: str
    blocks: List[BlockModel]


class TowerLevelModel(BaseModel):
    index: int
    integer: int
    word: str
    mass: GoldenNumberModel
    parent_tower: Optional[str] = None
    parent_index: Optional[int] = None
    in_niz: bool = False
    niz_order: Optional[int] = None
    delta: Optional[int] = None


class TowerDumpModel(BaseModel):
    k: int
    r: Optional[int] = None
    large: List[TowerLevelModel]
    small: List[TowerLevelModel]


class MixingRow(BaseModel):
    kind: str
    k: int
    p: int
    estimate: float
    stderr: float
    theorem_bound: float
    passed: bool = Field(..., alias="pass")
    trivially_passed: bool = False
    n_samples: int
    event_family: str

    model_config = ConfigDict(populate_by_name=True)


class EmpiricalResponse(BaseModel):
    r: int
    d: int
    N: int
    density: float


class HealthResponse(BaseModel):
    status: str = Field(..., description="Health status")


class ReadinessResponse(BaseModel):
    status: str
    threads: int = Field(..., description="Worker threads for CPU work")
    version: str


class CacheStatusResponse(BaseModel):
    capacity: int
    size: int
    keys: List[str]
    hits: int
    misses: int
    utilization: str


class ErrorResponse(BaseModel):
    """Body of every library error response."""
    detail: str
    error: str


class MixingReport(BaseModel):
    rows: List[MixingRow]


# -- conversions from the computation types ------------------------------------


def golden(value: GoldenNumber) -> GoldenNumberModel:
    return GoldenNumberModel.of(value)


def distribution_model(dist: MuDistribution, lo: Optional[int] = None, hi: Optional[int] = None) -> MuDistributionModel:
    """MuDistributionModel over [lo, hi] (defaults to the finite window).

    Raises:
        DomainError: If the window fails mass_window
    """
    window = mass_window(dist, lo, hi)
    return MuDistributionModel(
        r=dist.r,
        ell=dist.ell,
        tail_threshold=dist.tail_threshold,
        entries=[MuEntry(d=d, mass=golden(mu_mass(dist, d))) for d in window],
        tail_ratio=golden(dist.tail_ratio),
        checksums=MuChecksums(total_mass=str(total_mass(dist)), mean=str(moment(dist, 1))),
    )


def blocks_model(dec: BlockDecomposition) -> BlocksResponse:
    return BlocksResponse(
        r=dec.r,
        rho=dec.rho,
        rendered=render_blocks(dec),
        blocks=[
            BlockModel(
                index=i,
                start=b.start,
                length=b.length,
                positions=list(b.positions),
                partial_sum=dec.partial_sums[i],
                adm=adm_window(dec, i),
            )
            for i, b in enumerate(dec.blocks, start=1)
        ],
    )


def _level_model(level: TowerLevel) -> TowerLevelModel:
    return TowerLevelModel(
        index=level.index, integer=level.integer, word=level.word, mass=golden(level.mass),
        parent_tower=level.parent_tower, parent_index=level.parent_index,
        in_niz=level.in_niz, niz_order=level.niz_order, delta=level.delta,
    )


def tower_model(dump: TowerDump) -> TowerDumpModel:
    return TowerDumpModel(
        k=dump.k, r=dump.r,
        large=[_level_model(lv) for lv in dump.large],
        small=[_level_model(lv) for lv in dump.small],
    )


def mixing_row(estimate: MixingEstimate) -> MixingRow:
    return MixingRow(
        kind=estimate.kind, k=estimate.k, p=estimate.p,
        estimate=estimate.estimate, stderr=estimate.stderr,
        theorem_bound=estimate.bound, passed=estimate.passed,
        trivially_passed=estimate.trivially_passed,
        n_samples=estimate.n_samples, event_family=estimate.event_family,
    )
