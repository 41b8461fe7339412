"""
SL2(F_p): matrices, traces, Chebyshev polynomials and the action on P^1.

Classes are taken up to GL2(p)-conjugacy, which is enough for word images
since they are closed under every automorphism. Labels: "I", "-I", "U+"
(trace 2, not central), "U-" (trace -2, not central) and "t=<u>" for the
remaining traces.
"""
from __future__ import annotations
from fractions import Fraction
from functools import lru_cache
from threading import Lock
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple
import random
import sympy
from sympy.ntheory import (
    divisors,
    is_quad_residue,
    isprime,
    n_order,
    primefactors,
    primitive_root,
    sqrt_mod,
)
from .config import config_data
from .errors import PreconditionError
from .logger import logger
from .perm import Permutation
from .types import GroupKind, ImageMode, SearchResult, TraceDiagnostics
from .utils import SeedLike, make_rng
from .words import (
    ClassClosedSet,
    FreeWord,
    GroupContext,
    evaluate,
    image,
    intersect_images,
)


SCAN_LIMIT: int = 5000


def _check_prime(p: int) -> None:
    if p < 3 or not isprime(p):
        raise PreconditionError(f"{p} is not an odd prime.")


class FpElem:
    __slots__ = ("value", "p")

    def __init__(self: FpElem, value: int, p: int) -> None:
        self.value: int = int(value) % p
        self.p: int = p

    def _coerce(self: FpElem, other: Any) -> int:
        if isinstance(other, FpElem):
            if other.p != self.p:
                raise PreconditionError(f"Mixing F_{self.p} and F_{other.p}.")
            return other.value
        return int(other)

    def __add__(self: FpElem, other: Any) -> FpElem:
        return FpElem(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self: FpElem, other: Any) -> FpElem:
        return FpElem(self.value - self._coerce(other), self.p)

    def __rsub__(self: FpElem, other: Any) -> FpElem:
        return FpElem(self._coerce(other) - self.value, self.p)

    def __neg__(self: FpElem) -> FpElem:
        return FpElem(-self.value, self.p)

    def __mul__(self: FpElem, other: Any) -> FpElem:
        return FpElem(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def inverse(self: FpElem) -> FpElem:
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}.")
        return FpElem(pow(self.value, -1, self.p), self.p)

    def __truediv__(self: FpElem, other: Any) -> FpElem:
        return self * FpElem(self._coerce(other), self.p).inverse()

    def __pow__(self: FpElem, exponent: int) -> FpElem:
        if exponent < 0:
            return self.inverse() ** -exponent
        return FpElem(pow(self.value, exponent, self.p), self.p)

    def __eq__(self: FpElem, other: object) -> bool:
        if isinstance(other, FpElem):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return False

    def __hash__(self: FpElem) -> int:
        return hash((self.value, self.p))

    def __int__(self: FpElem) -> int:
        return self.value

    def __repr__(self: FpElem) -> str:
        return f"FpElem({self.value}, {self.p})"

    @classmethod
    def random(cls: type, p: int, rng: random.Random) -> FpElem:
        return cls(rng.randrange(p), p)


class SL2Elem:
    __slots__ = ("a", "b", "c", "d", "p")

    def __init__(self: SL2Elem, a: int, b: int, c: int, d: int, p: int) -> None:
        a, b, c, d = (int(x) % p for x in (a, b, c, d))
        if (a * d - b * c) % p != 1:
            raise PreconditionError(f"Determinant of [[{a},{b}],[{c},{d}]] mod {p} is not 1.")
        self.a, self.b, self.c, self.d, self.p = a, b, c, d, p

    @classmethod
    def _raw(cls: type, a: int, b: int, c: int, d: int, p: int) -> SL2Elem:
        elem = object.__new__(cls)
        elem.a, elem.b, elem.c, elem.d, elem.p = a, b, c, d, p
        return elem

    @classmethod
    def from_matrix(cls: type, matrix: Sequence[Sequence[int]], p: int) -> SL2Elem:
        return cls(matrix[0][0], matrix[0][1], matrix[1][0], matrix[1][1], p)

    @classmethod
    def identity(cls: type, p: int) -> SL2Elem:
        return cls._raw(1, 0, 0, 1, p)

    @classmethod
    def random(cls: type, p: int, rng: Optional[random.Random] = None) -> SL2Elem:
        # uniform first column, then a uniform point on the line of valid second columns
        rng = rng or make_rng()
        while True:
            a, c = rng.randrange(p), rng.randrange(p)
            if a or c:
                break
        if a:
            b, d = 0, pow(a, -1, p)
        else:
            b, d = (-pow(c, -1, p)) % p, 0
        t = rng.randrange(p)
        return cls._raw(a, (b + t * a) % p, c, (d + t * c) % p, p)

    @property
    def entries(self: SL2Elem) -> Tuple[FpElem, FpElem, FpElem, FpElem]:
        return tuple(FpElem(x, self.p) for x in (self.a, self.b, self.c, self.d))

    def matrix(self: SL2Elem) -> List[List[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    @property
    def trace(self: SL2Elem) -> int:
        return (self.a + self.d) % self.p

    def __mul__(self: SL2Elem, other: SL2Elem) -> SL2Elem:
        p = self.p
        return SL2Elem._raw(
            (self.a * other.a + self.b * other.c) % p,
            (self.a * other.b + self.b * other.d) % p,
            (self.c * other.a + self.d * other.c) % p,
            (self.c * other.b + self.d * other.d) % p,
            p,
        )

    def inverse(self: SL2Elem) -> SL2Elem:
        p = self.p
        return SL2Elem._raw(self.d, (-self.b) % p, (-self.c) % p, self.a, p)

    def __pow__(self: SL2Elem, exponent: int) -> SL2Elem:
        base = self if exponent >= 0 else self.inverse()
        exponent = abs(exponent)
        result = SL2Elem.identity(self.p)
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def is_identity(self: SL2Elem) -> bool:
        return (self.a, self.b, self.c, self.d) == (1, 0, 0, 1)

    def is_central(self: SL2Elem) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def __eq__(self: SL2Elem, other: object) -> bool:
        return isinstance(other, SL2Elem) and (
            (self.a, self.b, self.c, self.d, self.p)
            == (other.a, other.b, other.c, other.d, other.p)
        )

    def __hash__(self: SL2Elem) -> int:
        return hash((self.a, self.b, self.c, self.d, self.p))

    def __repr__(self: SL2Elem) -> str:
        return f"SL2Elem([[{self.a},{self.b}],[{self.c},{self.d}]], p={self.p})"


def mul(s: SL2Elem, t: SL2Elem) -> SL2Elem:
    return s * t


def inv(s: SL2Elem) -> SL2Elem:
    return s.inverse()


def power(s: SL2Elem, e: int) -> SL2Elem:
    return s ** e


def class_label(s: SL2Elem) -> str:
    if s.is_central():
        return "I" if s.a == 1 else "-I"
    t = s.trace
    if t == 2:
        return "U+"
    if t == s.p - 2:
        return "U-"
    return f"t={t}"


def class_labels(p: int) -> List[str]:
    return ["I", "-I", "U+", "U-"] + [
        f"t={t}" for t in range(p) if t not in (2, p - 2)
    ]


def _is_nonzero_square(value: int, p: int) -> bool:
    value %= p
    return value != 0 and is_quad_residue(value, p)


def class_size_of(label: str, p: int) -> int:
    if label in ("I", "-I"):
        return 1
    if label in ("U+", "U-"):
        return p * p - 1
    t = int(label[2:])
    return p * (p + 1) if _is_nonzero_square(t * t - 4, p) else p * (p - 1)


def class_representative_of(label: str, p: int) -> SL2Elem:
    if label == "I":
        return SL2Elem.identity(p)
    if label == "-I":
        return SL2Elem._raw(p - 1, 0, 0, p - 1, p)
    if label == "U+":
        return SL2Elem._raw(1, 1, 0, 1, p)
    if label == "U-":
        return SL2Elem._raw(p - 1, p - 1, 0, p - 1, p)
    # companion matrix of x^2 - t x + 1
    return SL2Elem._raw(0, p - 1, 1, int(label[2:]) % p, p)


_elements_lock: Lock = Lock()
_elements_cache: Dict[int, Dict[str, List[SL2Elem]]] = {}


def _elements_by_class(p: int) -> Dict[str, List[SL2Elem]]:
    with _elements_lock:
        if p not in _elements_cache:
            buckets: Dict[str, List[SL2Elem]] = {label: [] for label in class_labels(p)}
            for elem in _enumerate(p):
                buckets[class_label(elem)].append(elem)
            logger.debug(f"Enumerated SL2({p}) into {len(buckets)} classes.")
            _elements_cache[p] = buckets
        return _elements_cache[p]


def _enumerate(p: int) -> Iterable[SL2Elem]:
    for a in range(p):
        for c in range(p):
            if not (a or c):
                continue
            if a:
                b0, d0 = 0, pow(a, -1, p)
            else:
                b0, d0 = (-pow(c, -1, p)) % p, 0
            for t in range(p):
                yield SL2Elem._raw(a, (b0 + t * a) % p, c, (d0 + t * c) % p, p)


def sl2_elements(p: int) -> List[SL2Elem]:
    _check_prime(p)
    return [elem for members in _elements_by_class(p).values() for elem in members]


class SL2Context(GroupContext):
    def __init__(self: SL2Context, p: int) -> None:
        _check_prime(p)
        self.kind: GroupKind = GroupKind.SL2
        self.parameter: int = p
        self.p: int = p
        self._products: Dict[Tuple[str, str], FrozenSet[str]] = {}
        self._lock: Lock = Lock()

    @property
    def order(self: SL2Context) -> int:
        return self.p * (self.p * self.p - 1)

    def identity(self: SL2Context) -> SL2Elem:
        return SL2Elem.identity(self.p)

    def elements(self: SL2Context) -> List[SL2Elem]:
        return sl2_elements(self.p)

    def random_element(self: SL2Context, rng: random.Random) -> SL2Elem:
        return SL2Elem.random(self.p, rng)

    def class_key(self: SL2Context, element: SL2Elem) -> str:
        return class_label(element)

    def class_keys(self: SL2Context) -> List[str]:
        return class_labels(self.p)

    def class_representative(self: SL2Context, key: str) -> SL2Elem:
        return class_representative_of(key, self.p)

    def class_size(self: SL2Context, key: str) -> int:
        return class_size_of(key, self.p)

    def product_classes(self: SL2Context, a: str, b: str) -> FrozenSet[str]:
        with self._lock:
            if (a, b) in self._products:
                return self._products[(a, b)]
        members = _elements_by_class(self.p)[a]
        found = frozenset(
            key
            for key in self.class_keys()
            if any(
                class_label(y.inverse() * self.class_representative(key)) == b
                for y in members
            )
        )
        with self._lock:
            return self._products.setdefault((a, b), found)


def torus_element(p: int) -> SL2Elem:
    _check_prime(p)
    g = primitive_root(p)
    square = pow(g, 2, p)
    return SL2Elem._raw(square, 0, 0, pow(square, -1, p), p)


def _order_by_powering(s: SL2Elem, candidates: Iterable[int]) -> int:
    for d in candidates:
        if (s ** d).is_identity():
            return d
    raise PreconditionError(f"No candidate exponent kills {s}.")


def element_order(s: SL2Elem, method: str = "trace") -> int:
    p = s.p
    if method == "power":
        return _order_by_powering(s, divisors(p * (p * p - 1)))
    if method != "trace":
        raise PreconditionError(f"Unknown order method '{method}'.")
    if s.is_central():
        return 1 if s.a == 1 else 2
    t = s.trace
    if t == 2:
        return p
    if t == p - 2:
        return 2 * p
    disc = (t * t - 4) % p
    if is_quad_residue(disc, p):
        root = sqrt_mod(disc, p)
        eigenvalue = (t + root) * pow(2, -1, p) % p
        return n_order(eigenvalue, p)
    return _order_by_powering(s, divisors(p + 1))


class ChebyshevPoly:
    __slots__ = ("k", "coefficients")

    def __init__(self: ChebyshevPoly, k: int, coefficients: Sequence[int]) -> None:
        # coefficients[i] multiplies x^i
        self.k: int = k
        self.coefficients: Tuple[int, ...] = tuple(coefficients)

    def __call__(self: ChebyshevPoly, x: int, p: Optional[int] = None) -> int:
        value = 0
        for coefficient in reversed(self.coefficients):
            value = value * x + coefficient
            if p is not None:
                value %= p
        return value

    def as_sympy(self: ChebyshevPoly, symbol: Optional[sympy.Symbol] = None) -> sympy.Poly:
        x = symbol or sympy.Symbol("x")
        return sympy.Poly(list(reversed(self.coefficients)), x)

    def verify_identity(self: ChebyshevPoly) -> bool:
        x = sympy.Symbol("x")
        expr = self.as_sympy(x).as_expr().subs(x, x + 1 / x)
        return sympy.simplify(sympy.expand(expr - x ** self.k - x ** (-self.k))) == 0

    def __eq__(self: ChebyshevPoly, other: object) -> bool:
        return isinstance(other, ChebyshevPoly) and self.coefficients == other.coefficients

    def __hash__(self: ChebyshevPoly) -> int:
        return hash(self.coefficients)

    def __repr__(self: ChebyshevPoly) -> str:
        return f"ChebyshevPoly(k={self.k}, {list(self.coefficients)})"


@lru_cache(maxsize=None)
def _chebyshev_coefficients(k: int) -> Tuple[int, ...]:
    if k == 0:
        return (2,)
    if k == 1:
        return (0, 1)
    previous, current = _chebyshev_coefficients(k - 2), _chebyshev_coefficients(k - 1)
    # P_{k} = x P_{k-1} - P_{k-2}
    shifted = [0] + list(current)
    for i, coefficient in enumerate(previous):
        shifted[i] -= coefficient
    return tuple(shifted)


def chebyshev(k: int) -> ChebyshevPoly:
    if k < 0:
        raise PreconditionError(f"Chebyshev index must be >= 0, got {k}.")
    # fill the memo bottom-up so recursion stays shallow
    for j in range(2, k):
        _chebyshev_coefficients(j)
    return ChebyshevPoly(k, _chebyshev_coefficients(k))


def cheb_roots(k: int, u: int, p: int) -> int:
    if k < 1:
        raise PreconditionError(f"Root counting needs k >= 1, got {k}.")
    poly = chebyshev(k)
    u = int(u) % p
    if p <= SCAN_LIMIT:
        return sum(1 for x in range(p) if poly(x, p) == u)
    # distinct roots in F_p = deg gcd(f, x^p - x)
    x = sympy.Symbol("x")
    f = sympy.Poly(poly.as_sympy(x).as_expr() - u, x, modulus=p)
    if f.is_zero:
        return p
    frobenius = sympy.Poly(x, x, modulus=p)
    result = sympy.Poly(1, x, modulus=p)
    base, exponent = frobenius, p
    while exponent:
        if exponent & 1:
            result = result.mul(base).rem(f)
        base = base.mul(base).rem(f)
        exponent >>= 1
    common = sympy.gcd(f, result.sub(frobenius))
    return common.degree() if not common.is_zero else f.degree()


def _kth_root_orders(p: int, M: int) -> List[int]:
    return [
        k
        for k in divisors((p - 1) // 2)
        if k > 1 and min(primefactors(k)) > M
    ]


def trace_conditions(
    u: Any,
    p: int,
    M: Optional[int] = None,
    word_traces: Optional[Iterable[int]] = None,
) -> TraceDiagnostics:
    _check_prime(p)
    M = M if M is not None else config_data["admissibility-M"]
    if M < 3:
        raise PreconditionError(f"M must be at least 3, got {M}.")
    u = int(u) % p
    kth_roots = {k: cheb_roots(k, u, p) for k in _kth_root_orders(p, M)}
    return TraceDiagnostics(
        u=u,
        p=p,
        M=M,
        split_torus=_is_nonzero_square(u * u - 4, p),
        square_roots=_is_nonzero_square(u + 2, p),
        kth_roots=kth_roots,
        kth_roots_ok=all(count <= k - 1 for k, count in kth_roots.items()),
        word_trace=None if word_traces is None else u in {int(t) % p for t in word_traces},
    )


def find_high_order_value(
    w: FreeWord,
    p: int,
    budget: Optional[int] = None,
    seed: SeedLike = None,
) -> SearchResult:
    _check_prime(p)
    if p % 4 != 3:
        raise PreconditionError(f"p = {p} is not 3 mod 4.")
    budget = budget if budget is not None else config_data["search-budget"]
    target = (p - 1) // 2
    context = SL2Context(p)
    rng = make_rng(seed)
    result = SearchResult(
        p=p,
        word=str(w),
        target_order=target,
        seed=seed if isinstance(seed, int) else None,
    )
    for trial in range(1, budget + 1):
        values = [SL2Elem.random(p, rng) for _ in range(w.d)]
        value = evaluate(w, dict(zip(w.generators, values)), context)
        if element_order(value) == target:
            result.trials = trial
            result.found = True
            result.element = value.matrix()
            result.witness = [v.matrix() for v in values]
            logger.debug(f"Order {target} value of '{w}' in SL2({p}) after {trial} trials.")
            return result
    result.trials = budget
    logger.warning(f"No value of order {target} for '{w}' in SL2({p}) within {budget} trials.")
    return result


def embed_to_An(s: SL2Elem, p: Optional[int] = None) -> Permutation:
    # Moebius action on P^1(F_p), x -> x+1, infinity -> p+1
    p = p if p is not None else s.p
    if p != s.p:
        raise PreconditionError(f"Element lives in SL2({s.p}), not SL2({p}).")
    infinity = p + 1
    targets: List[int] = []
    for x in range(p):
        denominator = (s.c * x + s.d) % p
        if denominator == 0:
            targets.append(infinity)
        else:
            targets.append((s.a * x + s.b) * pow(denominator, -1, p) % p + 1)
    targets.append(s.a * pow(s.c, -1, p) % p + 1 if s.c else infinity)
    return Permutation(targets)


def image_density(
    w: FreeWord,
    p: int,
    mode: ImageMode = ImageMode.EXACT,
    samples: int = 1000,
    seed: SeedLike = None,
    budget: Optional[int] = None,
    threads: Optional[int] = None,
) -> Fraction:
    found: ClassClosedSet = image(
        w,
        SL2Context(p),
        mode=mode,
        samples=samples,
        seed=seed,
        budget=budget,
        threads=threads,
    )
    return found.density


def intersection_density(
    ws: Sequence[FreeWord],
    p: int,
    budget: Optional[int] = None,
    threads: Optional[int] = None,
) -> Fraction:
    return intersect_images(ws, SL2Context(p), budget=budget, threads=threads).density


def word_traces(w: FreeWord, p: int, budget: Optional[int] = None) -> List[int]:
    found = image(w, SL2Context(p), budget=budget)
    traces = {class_representative_of(label, p).trace for label in found.classes}
    return sorted(traces)


def power_orders(k: int, p: int) -> List[int]:
    # order is a class function and powering commutes with conjugation
    orders = {
        element_order(class_representative_of(label, p) ** k)
        for label in class_labels(p)
    }
    return sorted(orders)
