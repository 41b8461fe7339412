from __future__ import annotations
from enum import Enum
from fractions import Fraction
from typing import Annotated, Any, Dict, List, Optional
from pydantic import BaseModel, ConfigDict, Field, PlainSerializer


SCHEMA_VERSION: int = 1

# Big integers travel as decimal strings in JSON
BigInt = Annotated[int, PlainSerializer(str, return_type=str, when_used="json")]


class GroupKind(str, Enum):
    SYMMETRIC = "S_n"
    ALTERNATING = "A_n"
    SL2 = "SL2(p)"


class ImageMode(str, Enum):
    EXACT = "exact"
    SAMPLED = "sampled"


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"

    def __mul__(self, other: Parity) -> Parity:
        return Parity.EVEN if self == other else Parity.ODD


class SpecialType(str, Enum):
    ODD = "odd"
    EVEN = "even"


class StructureConstant(BaseModel):
    model_config = ConfigDict(strict=False, frozen=True)
    c1: List[int]
    c2: List[int]
    cg: List[int]
    count: BigInt
    total: BigInt

    @property
    def probability(self: StructureConstant) -> Fraction:
        return Fraction(self.count, self.total)

    @property
    def positive(self: StructureConstant) -> bool:
        return self.count > 0


class CoverageResult(BaseModel):
    model_config = ConfigDict(strict=False)
    covers: bool
    target: str
    missing: List[str] = []
    witnesses: Dict[str, List[str]] = {}


class PackedInterval(BaseModel):
    model_config = ConfigDict(strict=False, frozen=True)
    block: int
    index: int
    left: int
    length: int

    @property
    def right(self: PackedInterval) -> int:
        return self.left + self.length - 1


class SpecialPoint(BaseModel):
    model_config = ConfigDict(strict=False, frozen=True)
    point: int
    kind: SpecialType
    label: int


class PackingPlan(BaseModel):
    model_config = ConfigDict(strict=False)
    boundaries: List[int]
    intervals: List[PackedInterval]
    c: Dict[int, int]
    d: Dict[int, int]
    leftover: List[int]
    x_sets: List[List[int]]
    y_sets: List[List[int]]
    special_points: List[SpecialPoint]

    @property
    def y(self: PackingPlan) -> List[int]:
        return [y for block in self.y_sets for y in block]


class SquareCertificate(BaseModel):
    model_config = ConfigDict(strict=False, arbitrary_types_allowed=True)
    alpha: List[int]
    beta: List[int]
    gamma: Any = Field(exclude=True)
    delta: Any = Field(exclude=True)
    epsilon: Any = Field(exclude=True)
    packing: PackingPlan
    product_tally: Dict[int, int]
    verified: bool = False

    def export(self: SquareCertificate) -> Dict[str, Any]:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "gamma_cycles": self.gamma.to_cycles(),
            "delta_cycles": self.delta.to_cycles(),
            "epsilon_cycles": self.epsilon.to_cycles(),
            "packing": [
                interval.model_dump() for interval in self.packing.intervals
            ],
            "special_points": [
                point.model_dump(mode="json")
                for point in self.packing.special_points
            ],
            "verified": self.verified,
        }


class SurveyReport(BaseModel):
    model_config = ConfigDict(strict=False)
    n: int
    trials: int
    seed: Optional[int] = None
    covered: int = 0
    fraction: float = 0.0
    per_class: Dict[str, bool] = {}


class CharBoundReport(BaseModel):
    model_config = ConfigDict(strict=False)
    n: int
    max_ratio: str
    max_ratio_float: float
    argmax_lambda: List[int]
    argmax_mu: List[int]
    violations: int
    ncycle_values_bounded: bool
    ncycle_support_single_layer: bool


class DimBoundReport(BaseModel):
    model_config = ConfigDict(strict=False)
    n: int
    checked: int
    violations: int
    min_margin: BigInt
    tight: List[List[int]] = []


class ExponentReport(BaseModel):
    model_config = ConfigDict(strict=False)
    n: int
    description: str
    value: float
    argmax_lambda: List[int] = []
    argmax_mu: List[int] = []


class TraceDiagnostics(BaseModel):
    model_config = ConfigDict(strict=False)
    u: int
    p: int
    M: int
    split_torus: bool
    square_roots: bool
    kth_roots: Dict[int, int] = {}
    kth_roots_ok: bool = True
    word_trace: Optional[bool] = None

    @property
    def passes(self: TraceDiagnostics) -> bool:
        return (
            self.split_torus
            and self.square_roots
            and self.kth_roots_ok
            and self.word_trace is not False
        )


class SearchResult(BaseModel):
    model_config = ConfigDict(strict=False)
    p: int
    word: str
    target_order: int
    seed: Optional[int] = None
    trials: int = 0
    found: bool = False
    element: Optional[List[List[int]]] = None
    witness: Optional[List[List[List[int]]]] = None


class PrimeTriple(BaseModel):
    model_config = ConfigDict(strict=False, frozen=True)
    p1: int
    p2: int
    p3: int
    n: int
    n_prime: int
    padding: int
    M: int

    @property
    def primes(self: PrimeTriple) -> List[int]:
        return [self.p1, self.p2, self.p3]


class SigmaWitness(BaseModel):
    model_config = ConfigDict(strict=False, arbitrary_types_allowed=True)
    N: int
    M: int
    triple: PrimeTriple
    sigma: Any = Field(exclude=True)
    cycle_type: List[int]
    cyc: int
    fix: int
    even: bool
    word: Optional[str] = None
    witnesses: Optional[List[Optional[List[List[List[int]]]]]] = None
    seed: Optional[int] = None


class LowerBoundReport(BaseModel):
    model_config = ConfigDict(strict=False)
    n: int
    M: int
    epsilon: float
    triples: List[PrimeTriple] = []
    cycle_types: List[List[int]] = []
    class_sizes: List[BigInt] = []
    centralizer_orders: List[BigInt] = []
    centralizer_bounds: List[BigInt] = []
    within_centralizer_bound: List[bool] = []
    sixth_power_ratios: List[float] = []
    log10_aggregate: Optional[float] = None
    log10_reference: Optional[float] = None


class RunReport(BaseModel):
    model_config = ConfigDict(strict=False)
    version: int = SCHEMA_VERSION
    command: str
    parameters: Dict[str, Any] = {}
    seed: Optional[int] = None
    wall_time: float = Field(default=0.0, exclude=True)
    results: Dict[str, Any] = {}
    assertions: Dict[str, bool] = {}

    @property
    def passed(self: RunReport) -> bool:
        return all(self.assertions.values())


class CharTableFile(BaseModel):
    model_config = ConfigDict(strict=False)
    version: int
    n: int
    partitions: List[List[int]]
    values: List[List[str]]
