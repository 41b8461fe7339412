from collections import Counter
from math import factorial, sqrt
import pytest
from waring_kit.errors import BudgetExceededError, DegreeMismatchError, PreconditionError
from waring_kit.perm import (
    Partition,
    Permutation,
    align,
    all_permutations,
    class_size,
    compose,
    cyc,
    cycle_counts,
    elements_by_type,
    elements_of_type,
    fix,
    format_cycles,
    format_one_line,
    parity,
    parse_permutation,
    partitions,
    random_of_type,
    random_permutation,
    representative,
    splits_in_An,
)
from waring_kit.types import Parity
from waring_kit.utils import make_rng


def test_compose_applies_right_factor_first():
    p = parse_permutation("(1 2 3)", 3)
    assert p * p == parse_permutation("(1 3 2)", 3)
    q = parse_permutation("(1 2)", 3)
    # (p*q)(1) = p(q(1)) = p(2) = 3
    assert compose(p, q)(1) == 3


def test_identity_and_inverse():
    p = parse_permutation("(1 4 2)(3 5)", 5)
    identity = Permutation.identity(5)
    assert identity * p == p
    assert (p * p.inverse()).is_identity()
    assert p ** 6 == identity
    assert p ** -1 == p.inverse()


def test_degree_mismatch():
    with pytest.raises(DegreeMismatchError):
        Permutation.identity(3) * Permutation.identity(4)


def test_invalid_image_rejected():
    with pytest.raises(PreconditionError):
        Permutation([1, 1, 2])
    with pytest.raises(PreconditionError):
        parse_permutation("(1 2)(2 3)", 3)


def test_cycle_types():
    assert Permutation.identity(5).cycle_type() == Partition.ones(5)
    assert parse_permutation("(1 2 3 4 5)").cycle_type() == Partition([5])
    assert parse_permutation("(1 2 3)(4 5)", 6).cycle_type() == Partition([3, 2, 1])


def test_cyc_fix_parity():
    identity = Permutation.identity(7)
    assert (cyc(identity), fix(identity), parity(identity)) == (7, 7, Parity.EVEN)
    p = parse_permutation("(1 2 3)(4 5 6)", 8)
    assert (cyc(p), fix(p), parity(p)) == (4, 2, Parity.EVEN)
    for n in range(2, 9):
        cycle = representative(Partition([n]))
        assert cyc(cycle) == 1 and fix(cycle) == 0
        assert (parity(cycle) == Parity.EVEN) == (n % 2 == 1)


def test_class_size():
    assert class_size(Partition.ones(6)) == 1
    assert class_size(Partition([3, 2])) == 20
    for n in range(1, 9):
        assert class_size(Partition([n])) == factorial(n - 1)


@pytest.mark.parametrize("n", [1, 5, 10, 20])
def test_class_sizes_sum_to_group_order(n):
    assert sum(class_size(t) for t in partitions(n)) == factorial(n)


def test_class_size_matches_enumeration():
    for n in range(1, 7):
        for t, members in elements_by_type(n).items():
            assert len(members) == class_size(t)


def test_splits_in_An():
    assert splits_in_An(Partition([5]))
    assert splits_in_An(Partition([5, 3, 1]))
    assert not splits_in_An(Partition([3, 1, 1]))
    assert not splits_in_An(Partition([2, 2]))
    with pytest.raises(PreconditionError):
        splits_in_An(Partition([2, 1]))


def test_random_of_type(rng):
    assert random_of_type(Partition.ones(6), rng).is_identity()
    for t in partitions(8):
        assert random_of_type(t, rng).cycle_type() == t
    t = Partition([4, 2, 1])
    assert random_of_type(t, 7) == random_of_type(t, 7)


def _chi_square(observed, expected):
    return sum((observed.get(key, 0) - e) ** 2 / e for key, e in expected.items())


def _within_five_sigma(statistic, categories):
    dof = categories - 1
    return statistic < dof + 5 * sqrt(2 * dof)


@pytest.mark.parametrize("parts", [[2, 2, 1], [3, 1, 1], [5], [3, 2]])
def test_random_of_type_is_uniform_on_its_class(parts):
    t = Partition(parts)
    rng = make_rng(5)
    samples = 20000
    observed = Counter(random_of_type(t, rng) for _ in range(samples))
    members = elements_of_type(t)
    assert set(observed) <= set(members)
    expected = {p: samples / len(members) for p in members}
    assert _within_five_sigma(_chi_square(observed, expected), len(members))


def test_random_permutation_class_frequencies():
    rng = make_rng(6)
    samples = 100000
    observed = Counter(random_permutation(5, rng).cycle_type() for _ in range(samples))
    labels = list(partitions(5))
    expected = {t: samples * class_size(t) / factorial(5) for t in labels}
    assert _within_five_sigma(_chi_square(observed, expected), len(labels))


def test_align_conjugates_onto_target():
    for n in range(1, 6):
        for members in elements_by_type(n).values():
            p = members[0]
            for q in members:
                assert p.conjugate(align(p, q)) == q


def test_align_rejects_different_types():
    with pytest.raises(PreconditionError):
        align(parse_permutation("(1 2)", 3), parse_permutation("(1 2 3)", 3))


def test_parity_is_a_homomorphism(rng):
    group = all_permutations(4)
    for p in group:
        for q in group:
            assert parity(p * q) == parity(p) * parity(q)
    for _ in range(200):
        p, q = random_permutation(9, rng), random_permutation(9, rng)
        assert parity(p * q) == parity(p) * parity(q)


def test_alternating_group_size():
    assert len(all_permutations(5, even_only=True)) == 60
    assert len(elements_of_type(Partition([2, 2, 1]))) == 15


def test_enumeration_budget():
    with pytest.raises(BudgetExceededError):
        elements_by_type(9)


def test_parse_and_format():
    p = parse_permutation("[2,3,1,5,4]")
    assert format_cycles(p) == "(1 2 3)(4 5)"
    assert format_one_line(p) == "[2,3,1,5,4]"
    assert parse_permutation(format_one_line(p)) == p
    assert format_cycles(Permutation.identity(4)) == "()"
    assert parse_permutation("()", 3).is_identity()
    with pytest.raises(DegreeMismatchError):
        parse_permutation("[2,1]", 3)


def test_partition_helpers():
    t = Partition.parse("3,1^4")
    assert list(t) == [3, 1, 1, 1, 1]
    assert str(t) == "3,1,1,1,1"
    assert cycle_counts(t) == {1: 4, 3: 1}
    assert Partition([3, 1]).transpose() == Partition([2, 1, 1])
    assert Partition([4, 2, 1]).transpose().transpose() == Partition([4, 2, 1])
    with pytest.raises(PreconditionError):
        Partition([2, 0])


def test_partitions_order():
    found = list(partitions(5))
    assert len(found) == 7
    assert found[0] == Partition([5])
    assert found[-1] == Partition.ones(5)
    assert len(list(partitions(12))) == 77
