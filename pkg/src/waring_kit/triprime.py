"""
Admissible primes and the three-primes witness.

A prime p is admissible for M when p >= 5, p = 3 (mod 4) and no odd prime
l <= M divides p - 1. For N >= 36 we look for N' in [N - 11, N] with
N' - 3 = p1 + p2 + p3, all admissible, then place order (p_i - 1)/2
elements of SL2(p_i) acting on P^1(F_{p_i}) on disjoint blocks.
"""
from __future__ import annotations
from collections import Counter
from fractions import Fraction
from math import factorial, log10
from threading import Lock
from typing import Dict, List, Optional, Tuple
import numpy as np
from sympy.ntheory import isprime, primerange
from .config import config_data
from .errors import PreconditionError, VerificationError
from .logger import logger
from .perm import Partition, Permutation, class_size
from .sl2 import SL2Elem, embed_to_An, find_high_order_value, torus_element
from .types import LowerBoundReport, PrimeTriple, SigmaWitness
from .utils import SeedLike, make_rng, parallel_map
from .words import FreeWord


MIN_N: int = 36
MAX_OFFSET: int = 11
SIEVE_CEILING: int = 2 ** 32

_sieve_lock: Lock = Lock()
_sieve: np.ndarray = np.zeros(0, dtype=bool)
_admissible: Dict[int, np.ndarray] = {}


def _prime_mask(limit: int) -> np.ndarray:
    global _sieve
    if limit > SIEVE_CEILING:
        raise PreconditionError(f"Sieve limit {limit} exceeds 2^32.")
    with _sieve_lock:
        if _sieve.size <= limit:
            size = max(limit, config_data["sieve-limit"]) + 1
            mask = np.ones(size, dtype=bool)
            mask[:2] = False
            for k in range(2, int(size ** 0.5) + 1):
                if mask[k]:
                    mask[k * k::k] = False
            _sieve = mask
            _admissible.clear()
            logger.debug(f"Sieved primes up to {size - 1}.")
        return _sieve


def _admissible_mask(limit: int, M: int) -> np.ndarray:
    primes = _prime_mask(limit)
    with _sieve_lock:
        if M not in _admissible or _admissible[M].size != primes.size:
            values = np.arange(primes.size)
            mask = primes & (values % 4 == 3) & (values >= 5)
            for ell in primerange(3, M + 1):
                mask &= (values - 1) % ell != 0
            _admissible[M] = mask
        return _admissible[M]


def sieve(limit: int) -> List[int]:
    return np.flatnonzero(_prime_mask(limit)[: limit + 1]).tolist()


def _check_M(M: Optional[int]) -> int:
    M = M if M is not None else config_data["admissibility-M"]
    if M < 3:
        raise PreconditionError(f"M must be at least 3, got {M}.")
    return M


def is_admissible(p: int, M: Optional[int] = None) -> bool:
    M = _check_M(M)
    if p < 5 or p % 4 != 3 or not isprime(p):
        return False
    return all((p - 1) % ell for ell in primerange(3, M + 1))


def admissible_primes(limit: int, M: Optional[int] = None) -> List[int]:
    M = _check_M(M)
    return np.flatnonzero(_admissible_mask(limit, M)[: limit + 1]).tolist()


def _first_triple(total: int, M: int) -> Optional[Tuple[int, int, int]]:
    # smallest p1, then smallest p2
    mask = _admissible_mask(total, M)
    candidates = np.flatnonzero(mask[: total + 1])
    for p1 in candidates:
        if 3 * p1 > total:
            break
        for p2 in candidates[np.searchsorted(candidates, p1):]:
            p3 = total - p1 - p2
            if p3 < p2:
                break
            if mask[p3]:
                return int(p1), int(p2), int(p3)
    return None


def _all_triples(total: int, M: int) -> List[Tuple[int, int, int]]:
    mask = _admissible_mask(total, M)
    candidates = np.flatnonzero(mask[: total + 1])
    found: List[Tuple[int, int, int]] = []
    for i, p1 in enumerate(candidates):
        if 3 * p1 > total:
            break
        p2 = candidates[i:]
        p3 = total - p1 - p2
        keep = (p3 >= p2) & mask[np.clip(p3, 0, None)]
        found.extend((int(p1), int(a), int(b)) for a, b in zip(p2[keep], p3[keep]))
    return found


def _check_n(N: int) -> None:
    if N < MIN_N:
        raise PreconditionError(f"N must be at least {MIN_N}, got {N}.")


def feasible_offsets(N: int, M: Optional[int] = None) -> List[int]:
    _check_n(N)
    M = _check_M(M)
    return [
        n_prime
        for n_prime in range(N - MAX_OFFSET, N + 1)
        if n_prime % 2 == 0 and _first_triple(n_prime - 3, M) is not None
    ]


def choose_n_prime(N: int, M: int) -> Optional[int]:
    if M == 3:
        return 12 * (N // 12)
    feasible = feasible_offsets(N, M)
    return feasible[-1] if feasible else None


def decompose(N: int, M: Optional[int] = None) -> Optional[PrimeTriple]:
    _check_n(N)
    M = _check_M(M)
    n_prime = choose_n_prime(N, M)
    triple = _first_triple(n_prime - 3, M) if n_prime is not None else None
    if triple is None:
        logger.warning(f"No admissible three-prime decomposition for N={N}, M={M}.")
        return None
    result = PrimeTriple(
        p1=triple[0],
        p2=triple[1],
        p3=triple[2],
        n=N,
        n_prime=n_prime,
        padding=N - n_prime,
        M=M,
    )
    validate_triple(result)
    logger.debug(f"N={N}: N'={n_prime} = {triple} + 3.")
    return result


def validate_triple(triple: PrimeTriple) -> None:
    primes = triple.primes
    if primes != sorted(primes):
        raise VerificationError(f"Triple {primes} is not sorted.")
    if not all(is_admissible(p, triple.M) for p in primes):
        raise VerificationError(f"Triple {primes} has a non-admissible prime for M={triple.M}.")
    if sum(primes) + 3 != triple.n_prime or not 0 <= triple.padding <= MAX_OFFSET:
        raise VerificationError(f"Triple {primes} does not add up to N'={triple.n_prime}.")
    if triple.n - triple.n_prime != triple.padding:
        raise VerificationError(f"Padding {triple.padding} inconsistent with N={triple.n}.")


def count_representations(N: int, M: Optional[int] = None) -> int:
    _check_n(N)
    M = _check_M(M)
    n_prime = choose_n_prime(N, M)
    return len(_all_triples(n_prime - 3, M)) if n_prime is not None else 0


def representation_table(
    n_from: int,
    n_to: int,
    step: int = 12,
    M: Optional[int] = None,
    threads: Optional[int] = None,
) -> Dict[int, int]:
    M = _check_M(M)
    values = list(range(max(n_from, MIN_N), n_to + 1, step))
    # grow the sieve once before fanning out
    _admissible_mask(n_to, M)
    counts = parallel_map(lambda N: count_representations(N, M), values, threads)
    return dict(zip(values, counts))


def expected_cycle_type(triple: PrimeTriple) -> Partition:
    parts: List[int] = []
    for p in triple.primes:
        parts.extend([(p - 1) // 2, (p - 1) // 2, 1, 1])
    parts.extend([1] * triple.padding)
    return Partition(parts)


def build_sigma(
    N: int,
    M: Optional[int] = None,
    w: Optional[FreeWord] = None,
    budget: Optional[int] = None,
    seed: SeedLike = None,
) -> SigmaWitness:
    triple = decompose(N, M)
    if triple is None:
        raise PreconditionError(f"No three-prime decomposition available for N={N}.")
    rng = make_rng(seed)
    image: List[int] = []
    witnesses: List[Optional[List[List[List[int]]]]] = []
    for p in triple.primes:
        element: Optional[SL2Elem] = None
        if w is not None and not w.is_trivial:
            result = find_high_order_value(w, p, budget=budget, seed=rng)
            if result.found:
                element = SL2Elem.from_matrix(result.element, p)
                witnesses.append(result.witness)
            else:
                logger.warning(f"Falling back to a torus element in SL2({p}).")
                witnesses.append(None)
        if element is None:
            element = torus_element(p)
        offset = len(image)
        image.extend(offset + x for x in embed_to_An(element, p).image)
    image.extend(range(len(image) + 1, N + 1))
    sigma = Permutation(image)
    cycle_type = sigma.cycle_type()
    if cycle_type != expected_cycle_type(triple) or not cycle_type.is_even:
        raise VerificationError(
            f"sigma for N={N} has type {cycle_type}, expected {expected_cycle_type(triple)}."
        )
    if cycle_type.length > 12 + MAX_OFFSET or cycle_type.fix < 6:
        raise VerificationError(f"sigma for N={N} has {cycle_type.length} cycles.")
    return SigmaWitness(
        N=N,
        M=triple.M,
        triple=triple,
        sigma=sigma,
        cycle_type=list(cycle_type),
        cyc=cycle_type.length,
        fix=cycle_type.fix,
        even=cycle_type.is_even,
        word=str(w) if w is not None else None,
        witnesses=witnesses if w is not None else None,
        seed=seed if isinstance(seed, int) else None,
    )


def centralizer_bound(triple: PrimeTriple) -> int:
    """17! (p1+1)^2 (p2+1)^2 (p3+1)^2 / 16, times (2m)!/2^m for a prime used m times.

    Upper bound on the order of the centralizer of sigma in A_N.
    """
    bound = factorial(17)
    for p in triple.primes:
        bound *= (p + 1) ** 2
    for m in Counter(triple.primes).values():
        bound = bound * factorial(2 * m) // 2 ** m
    return bound // 16


def lower_bound_report(
    N: int,
    M: Optional[int] = None,
    epsilon: float = 0.5,
) -> LowerBoundReport:
    """Class sizes of every three-prime witness type, with their A_N centralizers.

    The centralizer bound is asserted; class size * N^6 / |A_N| and the
    aggregate against N^(-4-eps) |A_N| are only reported.
    """
    _check_n(N)
    M = _check_M(M)
    report = LowerBoundReport(n=N, M=M, epsilon=epsilon)
    n_prime = choose_n_prime(N, M)
    if n_prime is None:
        return report
    alternating_order = factorial(N) // 2
    seen: Dict[Partition, int] = {}
    for p1, p2, p3 in _all_triples(n_prime - 3, M):
        triple = PrimeTriple(
            p1=p1, p2=p2, p3=p3, n=N, n_prime=n_prime, padding=N - n_prime, M=M
        )
        t = expected_cycle_type(triple)
        if t in seen:
            continue
        seen[t] = class_size(t)
        # repeated parts, so the S_N class does not split in A_N
        centralizer = alternating_order // seen[t]
        bound = centralizer_bound(triple)
        report.triples.append(triple)
        report.cycle_types.append(list(t))
        report.class_sizes.append(seen[t])
        report.centralizer_orders.append(centralizer)
        report.centralizer_bounds.append(bound)
        report.within_centralizer_bound.append(centralizer <= bound)
        report.sixth_power_ratios.append(float(Fraction(seen[t] * N ** 6, alternating_order)))
    if seen:
        report.log10_aggregate = log10(sum(seen.values()))
        report.log10_reference = log10(alternating_order) - (4 + epsilon) * log10(N)
    return report
