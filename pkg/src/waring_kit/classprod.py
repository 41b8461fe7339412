"""
Products of conjugacy classes in S_n.

Frobenius structure constants from the character table, a brute-force
oracle, class-square coverage of A_n and the explicit packing
construction that writes a class B as a subset of A^2 whenever B is even
and has at least 7*cyc(A) fixed points.
"""
from __future__ import annotations
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple
import json
from .config import config_data
from .errors import (
    BudgetExceededError,
    DegreeMismatchError,
    PreconditionError,
    VerificationError,
)
from .logger import logger
from .perm import (
    Partition,
    Permutation,
    class_size,
    cycle_lengths,
    elements_of_type,
    even_partitions,
    partitions,
    random_permutation,
    representative,
    splits_in_An,
)
from .symchar import character_table
from .types import (
    PackedInterval,
    PackingPlan,
    SpecialPoint,
    SpecialType,
    SquareCertificate,
    StructureConstant,
    SurveyReport,
)
from .utils import SeedLike, format_type, make_rng, parallel_map


# Offsets from the left endpoint e of a packed interval; first term is its right end
PATTERNS: Dict[int, Tuple[int, ...]] = {
    3: (2, 0, 1),
    4: (3, 0, 1, 2),
    6: (5, 2, 0, 3, 4, 1),
    8: (7, 5, 2, 0, 3, 6, 4, 1),
}
# Offsets of special points inside an interval, with their type
SPECIAL_OFFSETS: Dict[int, Tuple[Tuple[int, SpecialType], ...]] = {
    3: ((1, SpecialType.ODD),),
    4: (),
    6: ((1, SpecialType.EVEN),),
    8: ((1, SpecialType.EVEN), (6, SpecialType.EVEN)),
}
PACKING_ORDER: Tuple[int, ...] = (8, 6, 4, 3)
FIXED_POINT_FACTOR: int = 7
# Classes with at most two cycles whose square misses part of A_n, with the missed class
SHORT_CLASS_SQUARE_GAPS: Dict[Partition, Partition] = {
    Partition([3, 3]): Partition([4, 2]),
}


def _same_degree(*types: Partition) -> int:
    n = types[0].n
    for t in types[1:]:
        if t.n != n:
            raise DegreeMismatchError(n, t.n)
    return n


@lru_cache(maxsize=None)
def _constant(c1: Partition, c2: Partition, cg: Partition) -> int:
    n = c1.n
    if c1.parity() * c2.parity() != cg.parity():
        return 0
    table = character_table(n)
    i1, i2, ig = table.index(c1), table.index(c2), table.index(cg)
    total = sum(
        Fraction(row[i1] * row[i2] * row[ig], row[-1]) for row in table.values
    )
    count = Fraction(class_size(c1) * class_size(c2), factorial(n)) * total
    if count.denominator != 1 or count < 0:
        raise VerificationError(
            f"Structure constant for ({c1}; {c2}; {cg}) is {count}, "
            "the character table is inconsistent."
        )
    return int(count)


def structure_constant(c1: Partition, c2: Partition, cg: Partition) -> StructureConstant:
    """Number of (y1, y2) in C1 x C2 with y1*y2 = g for one fixed g in Cg."""
    _same_degree(c1, c2, cg)
    return StructureConstant(
        c1=list(c1),
        c2=list(c2),
        cg=list(cg),
        count=_constant(c1, c2, cg),
        total=class_size(c1) * class_size(c2),
    )


def brute_constant(
    c1: Partition,
    c2: Partition,
    cg: Partition,
    n: Optional[int] = None,
    budget: Optional[int] = None,
) -> int:
    degree = _same_degree(c1, c2, cg)
    if n is not None and n != degree:
        raise DegreeMismatchError(n, degree)
    budget = budget if budget is not None else config_data["budget"]
    if class_size(c1) > budget:
        raise BudgetExceededError(class_size(c1), budget, what="Brute-force class product")
    g = representative(cg)
    # y1 * y2 = g  <=>  y2 = y1^-1 * g
    return sum(
        1
        for y1 in elements_of_type(c1)
        if Partition(cycle_lengths((y1.inverse() * g).raw)) == c2
    )


def class_square(c: Partition) -> List[Partition]:
    return [t for t in partitions(c.n) if _constant(c, c, t) > 0]


def class_square_covers(
    c: Partition,
    n: Optional[int] = None,
) -> Tuple[bool, Optional[Partition]]:
    if n is not None and n != c.n:
        raise DegreeMismatchError(n, c.n)
    for target in even_partitions(c.n):
        if _constant(c, c, target) == 0:
            return False, target
    return True, None


def exact_square_fraction(n: int) -> Fraction:
    covered = sum(class_size(t) for t in partitions(n) if class_square_covers(t)[0])
    return Fraction(covered, factorial(n))


def random_class_square_survey(
    n: int,
    trials: int,
    seed: SeedLike = None,
) -> SurveyReport:
    rng = make_rng(seed)
    report = SurveyReport(n=n, trials=trials, seed=seed if isinstance(seed, int) else None)
    if trials <= 0:
        return report
    covered = 0
    for _ in range(trials):
        t = random_permutation(n, rng).cycle_type()
        label = format_type(list(t))
        if label not in report.per_class:
            report.per_class[label] = class_square_covers(t)[0]
        covered += report.per_class[label]
    report.covered = covered
    report.fraction = covered / trials
    logger.info(f"Class-square survey S_{n}: {covered}/{trials} cover A_{n}.")
    return report


def random_alternating_survey(
    n: int,
    trials: int,
    seed: SeedLike = None,
) -> SurveyReport:
    rng = make_rng(seed)
    report = SurveyReport(n=n, trials=trials, seed=seed if isinstance(seed, int) else None)
    if trials <= 0:
        return report
    swap = Permutation.from_cycles([[1, 2]], n) if n > 1 else Permutation.identity(n)
    covered = 0
    for _ in range(trials):
        sigma = random_permutation(n, rng)
        if not sigma.cycle_type().is_even:
            sigma = sigma * swap
        t = sigma.cycle_type()
        label = format_type(list(t))
        if label not in report.per_class:
            report.per_class[label] = (not splits_in_An(t)) and class_square_covers(t)[0]
        covered += report.per_class[label]
    report.covered = covered
    report.fraction = covered / trials
    return report


def linear_contribution(c: Partition, g: Partition) -> Tuple[Fraction, Fraction]:
    _same_degree(c, g)
    table = character_table(c.n)
    ic, ig = table.index(c), table.index(g)
    order = factorial(c.n)
    linear = Fraction(0)
    rest = Fraction(0)
    for row in table.values:
        term = Fraction(row[ic] * row[ic] * row[ig], row[-1] * order)
        if row[-1] == 1:
            linear += term
        else:
            rest += term
    return linear, rest


def _pack(
    boundaries: Sequence[int],
    quotas: Dict[int, int],
) -> Tuple[List[PackedInterval], List[int]]:
    remaining = dict(quotas)
    intervals: List[PackedInterval] = []
    leftover: List[int] = []
    for k in range(len(boundaries) - 1):
        low, cursor = boundaries[k], boundaries[k + 1]
        index = 0
        while True:
            length = next(
                (
                    length
                    for length in PACKING_ORDER
                    if remaining[length] > 0 and cursor - length >= low
                ),
                None,
            )
            if length is None:
                break
            index += 1
            intervals.append(
                PackedInterval(block=k, index=index, left=cursor - length + 1, length=length)
            )
            remaining[length] -= 1
            cursor -= length
        leftover.append(cursor)
    if any(remaining.values()):
        raise VerificationError(f"Packing left quotas unfilled: {remaining}.")
    return intervals, leftover


def _label_special_points(
    intervals: Sequence[PackedInterval],
    counts: Dict[int, int],
) -> List[SpecialPoint]:
    found: Dict[SpecialType, List[int]] = {SpecialType.ODD: [], SpecialType.EVEN: []}
    for interval in intervals:
        for offset, kind in SPECIAL_OFFSETS[interval.length]:
            found[kind].append(interval.left + offset)
    largest = max(counts, default=0)
    # odd type, label l <-> cycles of length 2l+1; even type <-> 2l+2
    labels: Dict[SpecialType, List[int]] = {
        SpecialType.ODD: [
            lam
            for lam in range(largest // 2, 0, -1)
            for _ in range(counts.get(2 * lam + 1, 0))
        ],
        SpecialType.EVEN: [
            lam
            for lam in range(largest // 2, 0, -1)
            for _ in range(counts.get(2 * lam + 2, 0))
        ],
    }
    points: List[SpecialPoint] = []
    for kind in (SpecialType.ODD, SpecialType.EVEN):
        positions = sorted(found[kind])
        if len(positions) != len(labels[kind]):
            raise VerificationError(
                f"{len(positions)} special points of {kind.value} type "
                f"but {len(labels[kind])} labels."
            )
        points.extend(
            SpecialPoint(point=point, kind=kind, label=label)
            for point, label in zip(positions, labels[kind])
        )
    return points


def packing_plan(alpha: Partition, beta: Partition) -> PackingPlan:
    n = _same_degree(alpha, beta)
    boundaries: List[int] = [0]
    for part in alpha:
        boundaries.append(boundaries[-1] + part)
    b = beta.counts()
    c = {
        1: b.get(1, 0),
        2: b.get(2, 0),
        3: sum(count for length, count in b.items() if length >= 3 and length % 2),
        4: sum(count for length, count in b.items() if length >= 4 and not length % 2),
    }
    d = {3: c[3], 4: c[2] // 2, 6: c[2] - 2 * (c[2] // 2), 8: c[4] // 2}
    intervals, leftover = _pack(boundaries, d)
    x_sets = [list(range(boundaries[k] + 1, leftover[k] + 1)) for k in range(len(leftover))]
    y_sets = [
        [boundaries[k] + x for x in range(1, leftover[k] - boundaries[k], 2)]
        for k in range(len(leftover))
    ]
    special_points = _label_special_points(intervals, b)
    logger.debug(
        f"Packed {len(intervals)} intervals for alpha={alpha}, beta={beta} (n={n})."
    )
    return PackingPlan(
        boundaries=boundaries,
        intervals=intervals,
        c=c,
        d=d,
        leftover=leftover,
        x_sets=x_sets,
        y_sets=y_sets,
        special_points=special_points,
    )


def _epsilon(plan: PackingPlan, n: int) -> Permutation:
    pool = sorted(plan.y)
    used = 0
    cycles: List[List[int]] = []
    for special in plan.special_points:
        size = special.label - 1
        if used + size > len(pool):
            raise VerificationError(f"Not enough free points for label {special.label}.")
        cycles.append([special.point] + pool[used:used + size])
        used += size
    return Permutation.from_cycles(cycles, n)


def _block_cycles(plan: PackingPlan) -> List[List[int]]:
    cycles: List[List[int]] = []
    for k, low in enumerate(plan.boundaries[:-1]):
        sequence: List[int] = []
        for interval in plan.intervals:
            if interval.block == k:
                sequence.extend(interval.left + offset for offset in PATTERNS[interval.length])
        sequence.extend(range(plan.leftover[k], low, -1))
        cycles.append(sequence)
    return cycles


def construct_delta(alpha: Partition, beta: Partition) -> SquareCertificate:
    """delta of type alpha with gamma*delta of type beta, gamma the interval representative."""
    n = _same_degree(alpha, beta)
    if not beta.is_even:
        raise PreconditionError(f"Target type {beta} is odd.")
    trivial = beta.fix == n
    if not trivial and beta.fix < FIXED_POINT_FACTOR * alpha.length:
        raise PreconditionError(
            f"fix({beta}) = {beta.fix} < {FIXED_POINT_FACTOR} * cyc({alpha}) = "
            f"{FIXED_POINT_FACTOR * alpha.length}."
        )
    gamma = representative(alpha)
    plan = packing_plan(alpha, beta)
    epsilon = _epsilon(plan, n)
    blocks = Permutation.from_cycles(_block_cycles(plan), n)
    delta = blocks.conjugate(epsilon)
    product = gamma * delta
    tally = product.cycle_type().counts()
    if delta.cycle_type() != alpha or product.cycle_type() != beta:
        raise VerificationError(
            f"Construction failed for alpha={alpha}, beta={beta}: "
            f"delta has type {delta.cycle_type()}, gamma*delta has type {product.cycle_type()}."
        )
    return SquareCertificate(
        alpha=list(alpha),
        beta=list(beta),
        gamma=gamma,
        delta=delta,
        epsilon=epsilon,
        packing=plan,
        product_tally=tally,
        verified=True,
    )


def covered_by_packing(
    alpha: Partition,
    n: Optional[int] = None,
    cross_check: bool = True,
) -> List[Partition]:
    if n is not None and n != alpha.n:
        raise DegreeMismatchError(n, alpha.n)
    bound = FIXED_POINT_FACTOR * alpha.length
    found = [t for t in even_partitions(alpha.n) if t.fix >= bound]
    if cross_check:
        for t in found:
            if _constant(alpha, alpha, t) == 0:
                raise VerificationError(f"{t} is not in the square of class {alpha}.")
    return found


def certificate_to_json(certificate: SquareCertificate, indent: Optional[int] = None) -> str:
    return json.dumps(certificate.export(), indent=indent)


def constants_for(n: int, threads: Optional[int] = None) -> Dict[Tuple[Partition, Partition], List[int]]:
    labels = list(partitions(n))
    pairs = [(a, b) for a in labels for b in labels]
    rows = parallel_map(lambda pair: [_constant(pair[0], pair[1], t) for t in labels], pairs, threads)
    return dict(zip(pairs, rows))
