"""
Permutations of {1..n} and cycle types.

Composition applies the right factor first: (p * q)(x) = p(q(x)).
All public interfaces are 1-based; storage is a 0-based tuple.
"""
from __future__ import annotations
from collections import Counter
from functools import lru_cache
from itertools import permutations as _all_arrangements
from math import factorial
from threading import Lock
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple
import re
from .config import config_data
from .errors import BudgetExceededError, DegreeMismatchError, PreconditionError
from .logger import logger
from .types import Parity
from .utils import SeedLike, format_type, make_rng, parse_type


CYCLE_REGEX: re.Pattern = re.compile(r"\(([^()]*)\)")


class Partition:
    """Weakly decreasing sequence of positive integers (cycle type or diagram)."""
    __slots__ = ("_parts",)

    def __init__(self: Partition, parts: Iterable[int]) -> None:
        values: Tuple[int, ...] = tuple(sorted((int(x) for x in parts), reverse=True))
        if any(x < 1 for x in values):
            raise PreconditionError(f"Partition parts must be positive: {values}.")
        self._parts: Tuple[int, ...] = values

    @classmethod
    def parse(cls: type, text: str) -> Partition:
        return cls(parse_type(text))

    @classmethod
    def ones(cls: type, n: int) -> Partition:
        return cls([1] * n)

    @property
    def parts(self: Partition) -> Tuple[int, ...]:
        return self._parts

    @property
    def n(self: Partition) -> int:
        return sum(self._parts)

    @property
    def length(self: Partition) -> int:
        return len(self._parts)

    @property
    def fix(self: Partition) -> int:
        return self._parts.count(1)

    def counts(self: Partition) -> Dict[int, int]:
        # b_k: number of parts equal to k
        return dict(sorted(Counter(self._parts).items()))

    def parity(self: Partition) -> Parity:
        odd = sum(part - 1 for part in self._parts) % 2
        return Parity.ODD if odd else Parity.EVEN

    @property
    def is_even(self: Partition) -> bool:
        return self.parity() == Parity.EVEN

    def transpose(self: Partition) -> Partition:
        if not self._parts:
            return Partition(())
        return Partition(
            sum(1 for part in self._parts if part > j)
            for j in range(self._parts[0])
        )

    def __iter__(self: Partition) -> Iterator[int]:
        return iter(self._parts)

    def __len__(self: Partition) -> int:
        return len(self._parts)

    def __getitem__(self: Partition, index: int) -> int:
        return self._parts[index]

    def __eq__(self: Partition, other: object) -> bool:
        return isinstance(other, Partition) and self._parts == other._parts

    def __lt__(self: Partition, other: Partition) -> bool:
        return self._parts < other._parts

    def __hash__(self: Partition) -> int:
        return hash(self._parts)

    def __repr__(self: Partition) -> str:
        return f"Partition({list(self._parts)})"

    def __str__(self: Partition) -> str:
        return format_type(self._parts)


class Permutation:
    __slots__ = ("_image",)

    def __init__(self: Permutation, image: Sequence[int]) -> None:
        # image in one-line notation, 1-based
        zero_based = tuple(int(x) - 1 for x in image)
        if sorted(zero_based) != list(range(len(zero_based))):
            raise PreconditionError(f"Not a bijection of 1..{len(zero_based)}: {list(image)}.")
        self._image: Tuple[int, ...] = zero_based

    @classmethod
    def _raw(cls: type, zero_based: Tuple[int, ...]) -> Permutation:
        perm = object.__new__(cls)
        perm._image = zero_based
        return perm

    @classmethod
    def identity(cls: type, n: int) -> Permutation:
        return cls._raw(tuple(range(n)))

    @classmethod
    def from_cycles(cls: type, cycles: Iterable[Sequence[int]], n: int) -> Permutation:
        image: List[int] = list(range(n))
        seen: set = set()
        for cycle in cycles:
            for x in cycle:
                if not 1 <= x <= n or x in seen:
                    raise PreconditionError(f"Invalid or repeated point {x} in cycles.")
                seen.add(x)
            for a, b in zip(cycle, list(cycle[1:]) + list(cycle[:1])):
                image[a - 1] = b - 1
        return cls._raw(tuple(image))

    @classmethod
    def parse(cls: type, text: str, n: Optional[int] = None) -> Permutation:
        text = text.strip()
        if text.startswith("["):
            values = [int(x) for x in text.strip("[]").replace(",", " ").split()]
            perm = cls(values)
            if n is not None and perm.n != n:
                raise DegreeMismatchError(perm.n, n)
            return perm
        cycles: List[List[int]] = [
            [int(x) for x in body.replace(",", " ").split()]
            for body in CYCLE_REGEX.findall(text)
        ]
        if not cycles and text not in ("", "()"):
            raise PreconditionError(f"Cannot parse permutation '{text}'.")
        largest = max((x for cycle in cycles for x in cycle), default=0)
        return cls.from_cycles(cycles, n if n is not None else largest)

    @property
    def n(self: Permutation) -> int:
        return len(self._image)

    @property
    def image(self: Permutation) -> Tuple[int, ...]:
        return tuple(x + 1 for x in self._image)

    @property
    def raw(self: Permutation) -> Tuple[int, ...]:
        return self._image

    def __call__(self: Permutation, x: int) -> int:
        return self._image[x - 1] + 1

    def __mul__(self: Permutation, other: Permutation) -> Permutation:
        return compose(self, other)

    def __pow__(self: Permutation, exponent: int) -> Permutation:
        base: Permutation = self if exponent >= 0 else self.inverse()
        exponent = abs(exponent)
        result: Permutation = Permutation.identity(self.n)
        while exponent:
            if exponent & 1:
                result = compose(result, base)
            base = compose(base, base)
            exponent >>= 1
        return result

    def inverse(self: Permutation) -> Permutation:
        image: List[int] = [0] * len(self._image)
        for i, j in enumerate(self._image):
            image[j] = i
        return Permutation._raw(tuple(image))

    def conjugate(self: Permutation, by: Permutation) -> Permutation:
        # by * self * by^-1
        return compose(compose(by, self), by.inverse())

    def cycles(self: Permutation, include_fixed: bool = True) -> List[List[int]]:
        seen: List[bool] = [False] * len(self._image)
        result: List[List[int]] = []
        for start in range(len(self._image)):
            if seen[start]:
                continue
            cycle: List[int] = []
            x = start
            while not seen[x]:
                seen[x] = True
                cycle.append(x + 1)
                x = self._image[x]
            if include_fixed or len(cycle) > 1:
                result.append(cycle)
        return result

    def to_cycles(self: Permutation) -> List[List[int]]:
        return self.cycles(include_fixed=False)

    def cycle_type(self: Permutation) -> Partition:
        return cycle_type(self)

    def is_identity(self: Permutation) -> bool:
        return all(i == j for i, j in enumerate(self._image))

    def __eq__(self: Permutation, other: object) -> bool:
        return isinstance(other, Permutation) and self._image == other._image

    def __hash__(self: Permutation) -> int:
        return hash(self._image)

    def __repr__(self: Permutation) -> str:
        return f"Permutation({list(self.image)})"

    def __str__(self: Permutation) -> str:
        return format_cycles(self)


def format_cycles(p: Permutation) -> str:
    cycles = p.to_cycles()
    if not cycles:
        return "()"
    return "".join("(" + " ".join(map(str, cycle)) + ")" for cycle in cycles)


def format_one_line(p: Permutation) -> str:
    return "[" + ",".join(map(str, p.image)) + "]"


def parse_permutation(text: str, n: Optional[int] = None) -> Permutation:
    return Permutation.parse(text, n)


def compose(p: Permutation, q: Permutation) -> Permutation:
    if p.n != q.n:
        raise DegreeMismatchError(p.n, q.n)
    left = p.raw
    return Permutation._raw(tuple(left[x] for x in q.raw))


def inverse(p: Permutation) -> Permutation:
    return p.inverse()


def cycle_lengths(raw: Sequence[int]) -> Tuple[int, ...]:
    # Cycle type of a 0-based image tuple, sorted decreasing
    seen: List[bool] = [False] * len(raw)
    lengths: List[int] = []
    for start in range(len(raw)):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = raw[x]
            length += 1
        lengths.append(length)
    lengths.sort(reverse=True)
    return tuple(lengths)


def cycle_type(p: Permutation) -> Partition:
    return Partition(cycle_lengths(p.raw))


def cyc(p: Permutation) -> int:
    return len(cycle_lengths(p.raw))


def fix(p: Permutation) -> int:
    return sum(1 for i, j in enumerate(p.raw) if i == j)


def parity(p: Permutation) -> Parity:
    return cycle_type(p).parity()


def cycle_counts(t: Partition) -> Dict[int, int]:
    return t.counts()


def sign_of_type(t: Partition) -> int:
    return 1 if t.is_even else -1


def class_size(t: Partition) -> int:
    return factorial(t.n) // centralizer_order(t)


def centralizer_order(t: Partition) -> int:
    order = 1
    for part, multiplicity in t.counts().items():
        order *= part ** multiplicity * factorial(multiplicity)
    return order


def splits_in_An(t: Partition) -> bool:
    if not t.is_even:
        raise PreconditionError(f"Cycle type {t} is odd, it does not lie in A_n.")
    return all(part % 2 == 1 for part in t) and len(set(t)) == len(t)


def partitions(n: int, largest: Optional[int] = None) -> Iterator[Partition]:
    for parts in _partition_tuples(n, n if largest is None else largest):
        yield Partition(parts)


@lru_cache(maxsize=None)
def _partition_tuples(n: int, largest: int) -> Tuple[Tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    result: List[Tuple[int, ...]] = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partition_tuples(n - first, first):
            result.append((first,) + rest)
    return tuple(result)


def even_partitions(n: int) -> List[Partition]:
    return [t for t in partitions(n) if t.is_even]


def random_of_type(t: Partition, seed: SeedLike = None) -> Permutation:
    rng = make_rng(seed)
    points: List[int] = list(range(1, t.n + 1))
    rng.shuffle(points)
    cycles: List[List[int]] = []
    offset = 0
    for part in t:
        cycles.append(points[offset:offset + part])
        offset += part
    return Permutation.from_cycles(cycles, t.n)


def random_permutation(n: int, seed: SeedLike = None) -> Permutation:
    rng = make_rng(seed)
    image: List[int] = list(range(1, n + 1))
    rng.shuffle(image)
    return Permutation(image)


def representative(t: Partition) -> Permutation:
    cycles: List[List[int]] = []
    start = 1
    for part in t:
        cycles.append(list(range(start, start + part)))
        start += part
    return Permutation.from_cycles(cycles, t.n)


def align(p: Permutation, q: Permutation) -> Permutation:
    # q = r * p * r^-1
    if p.n != q.n:
        raise DegreeMismatchError(p.n, q.n)
    if cycle_type(p) != cycle_type(q):
        raise PreconditionError(
            f"Cycle types differ: {cycle_type(p)} vs {cycle_type(q)}."
        )
    by_length = lambda c: -len(c)
    source = sorted(p.cycles(), key=by_length)
    target = sorted(q.cycles(), key=by_length)
    image: List[int] = [0] * p.n
    for cycle_p, cycle_q in zip(source, target):
        for x, y in zip(cycle_p, cycle_q):
            image[x - 1] = y
    return Permutation(image)


_elements_lock: Lock = Lock()
_elements_cache: Dict[int, Dict[Partition, List[Permutation]]] = {}


def elements_by_type(n: int) -> Dict[Partition, List[Permutation]]:
    limit: int = config_data["brute-max-n"]
    if n > limit:
        raise BudgetExceededError(factorial(n), factorial(limit), what=f"Enumerating S_{n}")
    with _elements_lock:
        if n not in _elements_cache:
            buckets: Dict[Partition, List[Permutation]] = {
                t: [] for t in partitions(n)
            }
            for arrangement in _all_arrangements(range(n)):
                raw = tuple(arrangement)
                buckets[Partition(cycle_lengths(raw))].append(Permutation._raw(raw))
            logger.debug(f"Enumerated S_{n} into {len(buckets)} classes.")
            _elements_cache[n] = buckets
        return _elements_cache[n]


def elements_of_type(t: Partition) -> List[Permutation]:
    return elements_by_type(t.n)[t]


def all_permutations(n: int, even_only: bool = False) -> List[Permutation]:
    buckets = elements_by_type(n)
    return [
        perm
        for t, members in buckets.items()
        if t.is_even or not even_only
        for perm in members
    ]
