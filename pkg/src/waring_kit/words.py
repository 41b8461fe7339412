"""
Free-group words and their images in finite groups.

Images are stored as sets of conjugacy-class keys: S_n cycle types for
S_n and A_n (A_n images are closed under S_n conjugation), GL2 class
labels for SL2(p).
"""
from __future__ import annotations
from fractions import Fraction
from functools import reduce
from itertools import product
from math import factorial
from threading import Lock
from typing import (
    Any,
    Dict,
    FrozenSet,
    Hashable,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)
import random
import re
from .config import config_data
from .errors import (
    BudgetExceededError,
    MissingGeneratorError,
    PreconditionError,
    WordSyntaxError,
)
from .logger import logger
from .perm import (
    Partition,
    Permutation,
    all_permutations,
    class_size,
    cycle_lengths,
    partitions,
    random_permutation,
    representative,
)
from .types import CoverageResult, GroupKind, ImageMode
from .utils import SeedLike, format_type, make_rng, parallel_map


LETTER_REGEX: re.Pattern = re.compile(r"x(\d+)(?:\s*\^\s*(-?\d+))?")
COMMUTATOR_REGEX: re.Pattern = re.compile(r"\[\s*x(\d+)\s*,\s*x(\d+)\s*\]")
TOKEN_REGEX: re.Pattern = re.compile(
    rf"\s*(?:{COMMUTATOR_REGEX.pattern}|{LETTER_REGEX.pattern})\s*"
)

Letter = Tuple[int, int]
ClassKey = Hashable


def _reduce_letters(letters: Iterable[Letter]) -> Tuple[Letter, ...]:
    stack: List[Letter] = []
    for gen, exp in letters:
        if exp == 0:
            continue
        if stack and stack[-1][0] == gen:
            merged = stack[-1][1] + exp
            stack.pop()
            if merged != 0:
                stack.append((gen, merged))
        else:
            stack.append((gen, exp))
    return tuple(stack)


class FreeWord:
    __slots__ = ("_letters",)

    def __init__(self: FreeWord, letters: Iterable[Letter] = ()) -> None:
        checked: List[Letter] = []
        for gen, exp in letters:
            if int(gen) < 1:
                raise WordSyntaxError(f"Generator index must be positive, got {gen}.")
            checked.append((int(gen), int(exp)))
        self._letters: Tuple[Letter, ...] = _reduce_letters(checked)

    @classmethod
    def parse(cls: type, text: str) -> FreeWord:
        return parse_word(text)

    @property
    def letters(self: FreeWord) -> Tuple[Letter, ...]:
        return self._letters

    @property
    def generators(self: FreeWord) -> Tuple[int, ...]:
        return tuple(sorted({gen for gen, _ in self._letters}))

    @property
    def d(self: FreeWord) -> int:
        return len(self.generators)

    @property
    def is_trivial(self: FreeWord) -> bool:
        return not self._letters

    def inverse(self: FreeWord) -> FreeWord:
        return FreeWord((gen, -exp) for gen, exp in reversed(self._letters))

    def __mul__(self: FreeWord, other: FreeWord) -> FreeWord:
        return FreeWord(self._letters + other._letters)

    def __eq__(self: FreeWord, other: object) -> bool:
        return isinstance(other, FreeWord) and self._letters == other._letters

    def __hash__(self: FreeWord) -> int:
        return hash(self._letters)

    def __repr__(self: FreeWord) -> str:
        return f"FreeWord('{self}')"

    def __str__(self: FreeWord) -> str:
        if not self._letters:
            return "1"
        return " ".join(
            f"x{gen}" if exp == 1 else f"x{gen}^{exp}"
            for gen, exp in self._letters
        )


def parse_word(text: str) -> FreeWord:
    """Parse "x1^2", "x1^-1 x2^-1 x1 x2" or "[x1,x2]"; "1" is the empty word."""
    source = text.strip()
    if source in ("", "1", "e"):
        return FreeWord()
    letters: List[Letter] = []
    position = 0
    while position < len(source):
        match = TOKEN_REGEX.match(source, position)
        if match is None or match.end() == position:
            raise WordSyntaxError(f"Unexpected input at {position} in '{text}'.")
        left, right, gen, exp = match.groups()
        if left is not None:
            a, b = int(left), int(right)
            letters.extend([(a, -1), (b, -1), (a, 1), (b, 1)])
        else:
            letters.append((int(gen), int(exp) if exp is not None else 1))
        position = match.end()
    word = FreeWord(letters)
    if word.is_trivial:
        logger.debug(f"Word '{text}' reduces to the identity.")
    return word


def power_word(k: int, gen: int = 1) -> FreeWord:
    return FreeWord([(gen, k)])


def commutator(u: Optional[FreeWord] = None, v: Optional[FreeWord] = None) -> FreeWord:
    # [u, v] = u^-1 v^-1 u v, defaults to [x1, x2]
    u = u if u is not None else power_word(1, 1)
    v = v if v is not None else power_word(1, 2)
    return u.inverse() * v.inverse() * u * v


class GroupContext:

    kind: GroupKind
    parameter: int

    @classmethod
    def symmetric(cls: type, n: int) -> GroupContext:
        return PermutationContext(n, even_only=False)

    @classmethod
    def alternating(cls: type, n: int) -> GroupContext:
        return PermutationContext(n, even_only=True)

    @classmethod
    def sl2(cls: type, p: int) -> GroupContext:
        from .sl2 import SL2Context
        return SL2Context(p)

    @property
    def order(self: GroupContext) -> int:
        raise NotImplementedError

    @property
    def name(self: GroupContext) -> str:
        if self.kind == GroupKind.SL2:
            return f"SL2({self.parameter})"
        return f"{self.kind.value[0]}_{self.parameter}"

    def identity(self: GroupContext) -> Any:
        raise NotImplementedError

    def mul(self: GroupContext, a: Any, b: Any) -> Any:
        return a * b

    def power(self: GroupContext, a: Any, e: int) -> Any:
        return a ** e

    def elements(self: GroupContext) -> List[Any]:
        raise NotImplementedError

    def random_element(self: GroupContext, rng: random.Random) -> Any:
        raise NotImplementedError

    def class_key(self: GroupContext, element: Any) -> ClassKey:
        raise NotImplementedError

    def class_keys(self: GroupContext) -> List[ClassKey]:
        raise NotImplementedError

    def class_representative(self: GroupContext, key: ClassKey) -> Any:
        raise NotImplementedError

    def class_size(self: GroupContext, key: ClassKey) -> int:
        raise NotImplementedError

    def class_label(self: GroupContext, key: ClassKey) -> str:
        return str(key)

    def default_target(self: GroupContext) -> List[ClassKey]:
        return self.class_keys()

    def product_classes(self: GroupContext, a: ClassKey, b: ClassKey) -> FrozenSet[ClassKey]:
        raise NotImplementedError

    def __eq__(self: GroupContext, other: object) -> bool:
        return (
            isinstance(other, GroupContext)
            and self.kind == other.kind
            and self.parameter == other.parameter
        )

    def __hash__(self: GroupContext) -> int:
        return hash((self.kind, self.parameter))

    def __repr__(self: GroupContext) -> str:
        return f"GroupContext({self.name})"


class PermutationContext(GroupContext):
    def __init__(self: PermutationContext, n: int, even_only: bool) -> None:
        self.kind: GroupKind = GroupKind.ALTERNATING if even_only else GroupKind.SYMMETRIC
        self.parameter: int = n
        self.n: int = n
        self.even_only: bool = even_only
        self._keys: List[Partition] = [
            t for t in partitions(n) if t.is_even or not even_only
        ]
        self._products: Dict[Tuple[Partition, Partition], FrozenSet[Partition]] = {}
        self._lock: Lock = Lock()

    @property
    def order(self: PermutationContext) -> int:
        full = factorial(self.n)
        return full // 2 if self.even_only and self.n > 1 else full

    def identity(self: PermutationContext) -> Permutation:
        return Permutation.identity(self.n)

    def elements(self: PermutationContext) -> List[Permutation]:
        return all_permutations(self.n, even_only=self.even_only)

    def random_element(self: PermutationContext, rng: random.Random) -> Permutation:
        perm = random_permutation(self.n, rng)
        if self.even_only and not perm.cycle_type().is_even:
            # right multiplication by (1 2) is a bijection odd -> even
            perm = perm * Permutation.from_cycles([[1, 2]], self.n)
        return perm

    def class_key(self: PermutationContext, element: Permutation) -> Partition:
        return Partition(cycle_lengths(element.raw))

    def class_keys(self: PermutationContext) -> List[Partition]:
        return list(self._keys)

    def class_representative(self: PermutationContext, key: Partition) -> Permutation:
        return representative(key)

    def class_size(self: PermutationContext, key: Partition) -> int:
        return class_size(key)

    def class_label(self: PermutationContext, key: Partition) -> str:
        return format_type(list(key))

    def default_target(self: PermutationContext) -> List[Partition]:
        # coverage questions in S_n are asked about A_n
        return [t for t in self._keys if t.is_even]

    def product_classes(
        self: PermutationContext,
        a: Partition,
        b: Partition,
    ) -> FrozenSet[Partition]:
        from .classprod import structure_constant
        with self._lock:
            if (a, b) in self._products:
                return self._products[(a, b)]
        found = frozenset(
            t for t in partitions(self.n) if structure_constant(a, b, t).positive
        )
        with self._lock:
            return self._products.setdefault((a, b), found)


class ClassClosedSet:
    __slots__ = ("ambient", "classes")

    def __init__(
        self: ClassClosedSet,
        ambient: GroupContext,
        classes: Iterable[ClassKey],
    ) -> None:
        self.ambient: GroupContext = ambient
        self.classes: FrozenSet[ClassKey] = frozenset(classes)

    @classmethod
    def whole(cls: type, ambient: GroupContext) -> ClassClosedSet:
        return cls(ambient, ambient.class_keys())

    @property
    def size(self: ClassClosedSet) -> int:
        return sum(self.ambient.class_size(key) for key in self.classes)

    @property
    def density(self: ClassClosedSet) -> Fraction:
        return Fraction(self.size, self.ambient.order)

    def contains_element(self: ClassClosedSet, element: Any) -> bool:
        return self.ambient.class_key(element) in self.classes

    def labels(self: ClassClosedSet) -> List[str]:
        return [self.ambient.class_label(key) for key in self.sorted_classes()]

    def sorted_classes(self: ClassClosedSet) -> List[ClassKey]:
        order = {key: i for i, key in enumerate(self.ambient.class_keys())}
        return sorted(self.classes, key=lambda key: order.get(key, len(order)))

    def issubset(self: ClassClosedSet, other: ClassClosedSet) -> bool:
        return self.classes <= other.classes

    def __and__(self: ClassClosedSet, other: ClassClosedSet) -> ClassClosedSet:
        _check_ambient(self, other)
        return ClassClosedSet(self.ambient, self.classes & other.classes)

    def __or__(self: ClassClosedSet, other: ClassClosedSet) -> ClassClosedSet:
        _check_ambient(self, other)
        return ClassClosedSet(self.ambient, self.classes | other.classes)

    def __contains__(self: ClassClosedSet, key: ClassKey) -> bool:
        return key in self.classes

    def __len__(self: ClassClosedSet) -> int:
        return len(self.classes)

    def __eq__(self: ClassClosedSet, other: object) -> bool:
        return (
            isinstance(other, ClassClosedSet)
            and self.ambient == other.ambient
            and self.classes == other.classes
        )

    def __hash__(self: ClassClosedSet) -> int:
        return hash((self.ambient, self.classes))

    def __repr__(self: ClassClosedSet) -> str:
        return f"ClassClosedSet({self.ambient.name}, {self.labels()})"


def _check_ambient(a: ClassClosedSet, b: ClassClosedSet) -> None:
    if a.ambient != b.ambient:
        raise PreconditionError(f"Sets live in different groups: {a.ambient} vs {b.ambient}.")


ArgumentsLike = Union[Sequence[Any], Mapping[int, Any]]


def evaluate(w: FreeWord, args: ArgumentsLike, G: GroupContext) -> Any:
    result = G.identity()
    for gen, exp in w.letters:
        if isinstance(args, Mapping):
            if gen not in args:
                raise MissingGeneratorError(gen)
            element = args[gen]
        else:
            if gen > len(args):
                raise MissingGeneratorError(gen)
            element = args[gen - 1]
        result = G.mul(result, G.power(element, exp))
    return result


def _assignment(w: FreeWord, values: Sequence[Any]) -> Dict[int, Any]:
    return dict(zip(w.generators, values))


def exact_image_cost(w: FreeWord, G: GroupContext) -> int:
    if w.d == 0:
        return 1
    return G.order ** (w.d - 1) * len(G.class_keys())


def image(
    w: FreeWord,
    G: GroupContext,
    mode: ImageMode = ImageMode.EXACT,
    samples: int = 1000,
    budget: Optional[int] = None,
    seed: SeedLike = None,
    threads: Optional[int] = None,
) -> ClassClosedSet:
    """w(G) as a union of classes.

    Exact mode fixes the first generator to one representative per class and
    runs the others over G. Sampled mode returns only classes witnessed by
    random tuples, so it is a subset of the exact image.
    """
    if w.is_trivial:
        return ClassClosedSet(G, [G.class_key(G.identity())])
    if mode == ImageMode.SAMPLED:
        return _sampled_image(w, G, samples, seed)
    budget = budget if budget is not None else config_data["budget"]
    cost = exact_image_cost(w, G)
    if cost > budget:
        raise BudgetExceededError(cost, budget, what=f"Image of '{w}' in {G.name}")
    rest: List[Any] = G.elements() if w.d > 1 else []

    def classes_from(key: ClassKey) -> Set[ClassKey]:
        first = G.class_representative(key)
        found: Set[ClassKey] = set()
        for others in product(rest, repeat=w.d - 1):
            value = evaluate(w, _assignment(w, (first,) + others), G)
            found.add(G.class_key(value))
        return found

    found = reduce(set.union, parallel_map(classes_from, G.class_keys(), threads), set())
    logger.debug(f"Image of '{w}' in {G.name}: {len(found)} classes ({cost} evaluations).")
    return ClassClosedSet(G, found)


def _sampled_image(
    w: FreeWord,
    G: GroupContext,
    samples: int,
    seed: SeedLike,
) -> ClassClosedSet:
    rng = make_rng(seed)
    # all-identity tuple always evaluates to the identity
    found: Set[ClassKey] = {G.class_key(G.identity())}
    for _ in range(samples):
        values = [G.random_element(rng) for _ in range(w.d)]
        found.add(G.class_key(evaluate(w, _assignment(w, values), G)))
    return ClassClosedSet(G, found)


def _target_keys(G: GroupContext, target: Optional[GroupKind]) -> List[ClassKey]:
    if target is None:
        return G.default_target()
    if target == GroupKind.ALTERNATING and isinstance(G, PermutationContext):
        return [t for t in G.class_keys() if t.is_even]
    return G.class_keys()


def product_set(A: ClassClosedSet, B: ClassClosedSet) -> ClassClosedSet:
    _check_ambient(A, B)
    G = A.ambient
    classes: Set[ClassKey] = set()
    for a in A.classes:
        for b in B.classes:
            classes |= G.product_classes(a, b)
    allowed = set(G.class_keys())
    return ClassClosedSet(G, classes & allowed)


def product_covers(
    A: ClassClosedSet,
    B: ClassClosedSet,
    target: Optional[GroupKind] = None,
) -> CoverageResult:
    _check_ambient(A, B)
    G = A.ambient
    witnesses: Dict[str, List[str]] = {}
    missing: List[str] = []
    pairs = [(a, b) for a in A.sorted_classes() for b in B.sorted_classes()]
    for key in _target_keys(G, target):
        witness = next(
            (pair for pair in pairs if key in G.product_classes(*pair)),
            None,
        )
        label = G.class_label(key)
        if witness is None:
            missing.append(label)
        else:
            witnesses[label] = [G.class_label(witness[0]), G.class_label(witness[1])]
    if target is not None:
        target_name = target.value
    elif isinstance(G, PermutationContext):
        target_name = GroupKind.ALTERNATING.value
    else:
        target_name = G.kind.value
    return CoverageResult(
        covers=not missing,
        target=target_name,
        missing=missing,
        witnesses=witnesses,
    )


def verify_waring(
    w1: FreeWord,
    w2: FreeWord,
    G: GroupContext,
    budget: Optional[int] = None,
    threads: Optional[int] = None,
) -> bool:
    return verify_waring_many([w1, w2], G, budget=budget, threads=threads)


def verify_waring_many(
    ws: Sequence[FreeWord],
    G: GroupContext,
    budget: Optional[int] = None,
    threads: Optional[int] = None,
) -> bool:
    images = [image(w, G, budget=budget, threads=threads) for w in ws]
    if len(images) == 1:
        return set(G.default_target()) <= images[0].classes
    prefix = reduce(product_set, images[:-1])
    return product_covers(prefix, images[-1]).covers


def intersect_images(
    ws: Sequence[FreeWord],
    G: GroupContext,
    budget: Optional[int] = None,
    threads: Optional[int] = None,
) -> ClassClosedSet:
    images = [image(w, G, budget=budget, threads=threads) for w in ws]
    return reduce(lambda a, b: a & b, images, ClassClosedSet.whole(G))


def intersection_square_covers(
    ws: Sequence[FreeWord],
    G: GroupContext,
    budget: Optional[int] = None,
    threads: Optional[int] = None,
) -> bool:
    common = intersect_images(ws, G, budget=budget, threads=threads)
    return product_covers(common, common).covers


def min_cycles_in_image(
    w: FreeWord,
    n: int,
    budget: Optional[int] = None,
    threads: Optional[int] = None,
) -> int:
    found = image(w, GroupContext.alternating(n), budget=budget, threads=threads)
    return min(len(t) for t in found.classes)


def image_size(w: FreeWord, G: GroupContext, **kwargs: Any) -> int:
    return image(w, G, **kwargs).size


def image_density(w: FreeWord, G: GroupContext, **kwargs: Any) -> Fraction:
    return image(w, G, **kwargs).density


def intersection_density(
    ws: Sequence[FreeWord],
    G: GroupContext,
    budget: Optional[int] = None,
    threads: Optional[int] = None,
) -> Fraction:
    return intersect_images(ws, G, budget=budget, threads=threads).density
