"""
Irreducible characters of S_n.

Values come from the Murnaghan-Nakayama rule with rim hooks found on
beta-numbers (first-column hook lengths); degrees from the hook length
formula. Everything is exact integer arithmetic except zeta.
"""
from __future__ import annotations
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, fsum, log
from threading import Lock
from typing import Dict, List, Optional, Sequence, Tuple
from .config import config_data
from .errors import BudgetExceededError, DegreeMismatchError, PreconditionError
from .logger import logger
from .perm import Partition, centralizer_order, class_size, partitions, sign_of_type
from .types import CharBoundReport, DimBoundReport, ExponentReport
from .utils import parallel_map


class YoungDiagram:
    __slots__ = ("partition",)

    def __init__(self: YoungDiagram, partition: Partition) -> None:
        self.partition: Partition = partition

    def transpose(self: YoungDiagram) -> YoungDiagram:
        return YoungDiagram(self.partition.transpose())

    def hook_lengths(self: YoungDiagram) -> List[List[int]]:
        rows = self.partition.parts
        columns = self.partition.transpose().parts
        return [
            [row - j + columns[j] - i - 1 for j in range(row)]
            for i, row in enumerate(rows)
        ]

    def __eq__(self: YoungDiagram, other: object) -> bool:
        return isinstance(other, YoungDiagram) and self.partition == other.partition

    def __hash__(self: YoungDiagram) -> int:
        return hash(self.partition)

    def __repr__(self: YoungDiagram) -> str:
        return f"YoungDiagram({list(self.partition)})"


class RimHook:
    __slots__ = ("start_row", "end_col", "length", "leg", "remainder")

    def __init__(
        self: RimHook,
        start_row: int,
        end_col: int,
        length: int,
        leg: int,
        remainder: Partition,
    ) -> None:
        # start_row and end_col are 1-based
        self.start_row: int = start_row
        self.end_col: int = end_col
        self.length: int = length
        self.leg: int = leg
        self.remainder: Partition = remainder

    @property
    def sign(self: RimHook) -> int:
        return -1 if self.leg % 2 else 1

    def __repr__(self: RimHook) -> str:
        return (
            f"RimHook(start_row={self.start_row}, end_col={self.end_col}, "
            f"length={self.length}, leg={self.leg}, remainder={list(self.remainder)})"
        )


def _beta_numbers(parts: Tuple[int, ...]) -> Tuple[int, ...]:
    m = len(parts)
    return tuple(part + m - 1 - i for i, part in enumerate(parts))


def _from_beta(beta: Sequence[int]) -> Tuple[int, ...]:
    ordered = sorted(beta, reverse=True)
    m = len(ordered)
    return tuple(b - (m - 1 - i) for i, b in enumerate(ordered) if b - (m - 1 - i) > 0)


@lru_cache(maxsize=None)
def _hooks(parts: Tuple[int, ...], r: int) -> Tuple[Tuple[int, int, int, Tuple[int, ...]], ...]:
    # (row, end_col, leg, remainder) for every removable rim r-hook
    beta = _beta_numbers(parts)
    beads = set(beta)
    m = len(beta)
    found: List[Tuple[int, int, int, Tuple[int, ...]]] = []
    for row, b in enumerate(beta):
        target = b - r
        if target < 0 or target in beads:
            continue
        leg = sum(1 for other in beta if target < other < b)
        bottom = row + leg
        end_col = target - (m - 1 - bottom) + 1
        moved = beta[:row] + (target,) + beta[row + 1:]
        found.append((row + 1, end_col, leg, _from_beta(moved)))
    return tuple(found)


def rim_hooks(lam: Partition, r: int) -> List[RimHook]:
    if r < 1 or r > lam.n:
        return []
    return [
        RimHook(row, end_col, r, leg, Partition(rest))
        for row, end_col, leg, rest in _hooks(lam.parts, r)
    ]


@lru_cache(maxsize=None)
def _mn(parts: Tuple[int, ...], cycles: Tuple[int, ...]) -> int:
    # cycles sorted decreasing, largest consumed first
    if not cycles:
        return 1 if not parts else 0
    r, rest = cycles[0], cycles[1:]
    total = 0
    for _, _, leg, remainder in _hooks(parts, r):
        value = _mn(remainder, rest)
        total += -value if leg % 2 else value
    return total


def _mn_in_order(parts: Tuple[int, ...], cycles: Sequence[int]) -> int:
    if not cycles:
        return 1 if not parts else 0
    total = 0
    for _, _, leg, remainder in _hooks(parts, cycles[0]):
        value = _mn_in_order(remainder, cycles[1:])
        total += -value if leg % 2 else value
    return total


def mn_value(lam: Partition, mu: Partition, order: Optional[Sequence[int]] = None) -> int:
    """chi_lambda on the class of cycle type mu.

    With `order`, the cycles of mu are stripped in that sequence instead of
    largest first, bypassing the memo.
    """
    if lam.n != mu.n:
        raise DegreeMismatchError(lam.n, mu.n)
    if order is not None:
        if sorted(order, reverse=True) != list(mu.parts):
            raise PreconditionError(f"Order {list(order)} is not a rearrangement of {mu}.")
        return _mn_in_order(lam.parts, tuple(order))
    return _mn(lam.parts, mu.parts)


def degree(lam: Partition) -> int:
    product = 1
    for row in YoungDiagram(lam).hook_lengths():
        for hook in row:
            product *= hook
    return factorial(lam.n) // product


def layers(lam: Partition) -> int:
    # peeling first row + column repeatedly = number of diagonal boxes
    if lam.n == 0:
        raise PreconditionError("Empty partition has no layers.")
    return sum(1 for i, part in enumerate(lam.parts) if part > i)


class CharacterTable:
    def __init__(
        self: CharacterTable,
        n: int,
        labels: List[Partition],
        values: List[List[int]],
    ) -> None:
        self.n: int = n
        self.partitions: List[Partition] = labels
        self.values: List[List[int]] = values
        self._index: Dict[Partition, int] = {lam: i for i, lam in enumerate(labels)}
        self.class_sizes: List[int] = [class_size(mu) for mu in labels]
        self.degrees: List[int] = [row[-1] for row in values]

    def index(self: CharacterTable, lam: Partition) -> int:
        return self._index[lam]

    def value(self: CharacterTable, lam: Partition, mu: Partition) -> int:
        return self.values[self._index[lam]][self._index[mu]]

    def row(self: CharacterTable, lam: Partition) -> List[int]:
        return self.values[self._index[lam]]

    def column(self: CharacterTable, mu: Partition) -> List[int]:
        j = self._index[mu]
        return [row[j] for row in self.values]

    def row_inner(self: CharacterTable, i: int, j: int) -> int:
        return sum(
            size * a * b
            for size, a, b in zip(self.class_sizes, self.values[i], self.values[j])
        )

    def column_inner(self: CharacterTable, i: int, j: int) -> int:
        return sum(row[i] * row[j] for row in self.values)

    def check_row(self: CharacterTable, i: int) -> bool:
        order = factorial(self.n)
        return all(
            self.row_inner(i, j) == (order if i == j else 0)
            for j in range(len(self.partitions))
        )

    def check_orthogonality(self: CharacterTable) -> bool:
        size = len(self.partitions)
        rows_ok = all(self.check_row(i) for i in range(size))
        columns_ok = all(
            self.column_inner(i, j)
            == (centralizer_order(self.partitions[i]) if i == j else 0)
            for i in range(size)
            for j in range(size)
        )
        return rows_ok and columns_ok


_table_lock: Lock = Lock()
_tables: Dict[int, CharacterTable] = {}


def character_table(n: int, threads: Optional[int] = None) -> CharacterTable:
    with _table_lock:
        if n in _tables:
            return _tables[n]
    labels: List[Partition] = list(partitions(n))
    budget: int = config_data["budget"]
    if len(labels) ** 2 > budget:
        raise BudgetExceededError(len(labels) ** 2, budget, what=f"Character table of S_{n}")

    def build_row(lam: Partition) -> List[int]:
        return [mn_value(lam, mu) for mu in labels]

    values = parallel_map(build_row, labels, threads)
    table = CharacterTable(n, labels, values)
    logger.info(f"Character table of S_{n} built ({len(labels)} classes).")
    with _table_lock:
        return _tables.setdefault(n, table)


def register_table(table: CharacterTable) -> CharacterTable:
    with _table_lock:
        return _tables.setdefault(table.n, table)


def zeta(n: int, s: float) -> float:
    if s <= 0:
        raise PreconditionError(f"zeta needs s > 0, got {s}.")
    return fsum(float(degree(lam)) ** -s for lam in partitions(n))


def character_sign_twist(lam: Partition, mu: Partition) -> bool:
    return mn_value(lam.transpose(), mu) == sign_of_type(mu) * mn_value(lam, mu)


def verify_char_bound(n: int, threads: Optional[int] = None) -> CharBoundReport:
    table = character_table(n, threads)
    best: Fraction = Fraction(-1)
    argmax: Tuple[Partition, Partition] = (table.partitions[0], table.partitions[0])
    violations = 0
    for lam in table.partitions:
        for mu in table.partitions:
            k = mu.length
            ratio = Fraction(abs(table.value(lam, mu)), 2 ** (k - 1) * factorial(k))
            if ratio > 1:
                violations += 1
            if ratio > best:
                best, argmax = ratio, (lam, mu)
    cycle = Partition([n])
    values = {lam: table.value(lam, cycle) for lam in table.partitions}
    report = CharBoundReport(
        n=n,
        max_ratio=str(best),
        max_ratio_float=float(best),
        argmax_lambda=list(argmax[0]),
        argmax_mu=list(argmax[1]),
        violations=violations,
        ncycle_values_bounded=all(abs(v) <= 1 for v in values.values()),
        ncycle_support_single_layer=all(
            layers(lam) == 1 for lam, v in values.items() if v != 0
        ),
    )
    logger.info(f"Character bound scan for S_{n}: max ratio {float(best):.6f}.")
    return report


def verify_dim_bound(n: int) -> DimBoundReport:
    checked = 0
    violations = 0
    min_margin: Optional[int] = None
    tight: List[List[int]] = []
    for lam in partitions(n):
        if lam[0] < lam.length:
            continue
        checked += 1
        t = n - lam[0]
        margin = degree(lam) - comb(n - t, t)
        if margin < 0:
            violations += 1
        if margin == 0:
            tight.append(list(lam))
        min_margin = margin if min_margin is None else min(min_margin, margin)
    return DimBoundReport(
        n=n,
        checked=checked,
        violations=violations,
        min_margin=min_margin or 0,
        tight=tight,
    )


def _log_ratio(value: int, dim: int) -> float:
    return log(abs(value)) / log(dim)


def verify_sigma_estimate(n: int, k: int, threads: Optional[int] = None) -> ExponentReport:
    table = character_table(n, threads)
    best, argmax = 0.0, ([], [])
    for lam in table.partitions:
        dim = degree(lam)
        if dim == 1:
            continue
        for mu in table.partitions:
            value = table.value(lam, mu)
            if mu.length > k or value == 0 or abs(value) == 1:
                continue
            exponent = _log_ratio(value, dim)
            if exponent > best:
                best, argmax = exponent, (list(lam), list(mu))
    return ExponentReport(
        n=n,
        description=f"max log|chi(sigma)|/log chi(1), cyc(sigma) <= {k}",
        value=best,
        argmax_lambda=argmax[0],
        argmax_mu=argmax[1],
    )


def verify_fixed_point_bound(
    n: int,
    max_fix: int,
    threads: Optional[int] = None,
) -> ExponentReport:
    table = character_table(n, threads)
    best, argmax = 0.0, ([], [])
    for lam in table.partitions:
        dim = degree(lam)
        if dim == 1:
            continue
        for mu in table.partitions:
            value = table.value(lam, mu)
            if mu.fix >= max_fix or value == 0 or abs(value) == 1:
                continue
            exponent = _log_ratio(value, dim)
            if exponent > best:
                best, argmax = exponent, (list(lam), list(mu))
    return ExponentReport(
        n=n,
        description=f"max log|chi(pi)|/log chi(1), fix(pi) < {max_fix}",
        value=best,
        argmax_lambda=argmax[0],
        argmax_mu=argmax[1],
    )


def verify_exponential_degree(n: int) -> ExponentReport:
    best: Optional[float] = None
    argmin: List[int] = []
    for lam in partitions(n):
        t = n - lam[0]
        if lam[0] < lam.length or 3 * t < n:
            continue
        value = degree(lam) ** (1.0 / n)
        if best is None or value < best:
            best, argmin = value, list(lam)
    return ExponentReport(
        n=n,
        description="min chi(1)^(1/n) with t >= n/3",
        value=best or 0.0,
        argmax_lambda=argmin,
    )
