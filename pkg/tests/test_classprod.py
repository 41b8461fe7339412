from fractions import Fraction
from itertools import product
import json
from math import factorial
import pytest
from waring_kit.classprod import (
    FIXED_POINT_FACTOR,
    SHORT_CLASS_SQUARE_GAPS,
    brute_constant,
    certificate_to_json,
    class_square,
    class_square_covers,
    construct_delta,
    constants_for,
    covered_by_packing,
    exact_square_fraction,
    linear_contribution,
    packing_plan,
    random_alternating_survey,
    random_class_square_survey,
    structure_constant,
)
from waring_kit.errors import DegreeMismatchError, PreconditionError
from waring_kit.perm import Partition, Permutation, class_size, partitions
from waring_kit.suite import check_class_squares, random_square_pair
from waring_kit.utils import make_rng


def test_small_structure_constants():
    three, one = Partition([3]), Partition.ones(3)
    assert structure_constant(three, three, three).count == 1
    assert structure_constant(three, three, one).count == 2
    assert structure_constant(three, three, one).total == 4
    assert structure_constant(three, three, one).probability == Fraction(1, 2)
    # even times even is never odd
    assert structure_constant(three, three, Partition([2, 1])).count == 0


def test_identity_class_constants():
    for n in range(1, 7):
        labels = list(partitions(n))
        for c2, cg in product(labels, repeat=2):
            # g is fixed, so the only pair is (identity, g)
            expected = 1 if c2 == cg else 0
            constant = structure_constant(Partition.ones(n), c2, cg)
            assert constant.count == expected
            assert constant.count == brute_constant(Partition.ones(n), c2, cg)


@pytest.mark.parametrize("n", range(1, 6))
def test_constants_match_brute_force(n):
    labels = list(partitions(n))
    for c1, c2, cg in product(labels, repeat=3):
        assert structure_constant(c1, c2, cg).count == brute_constant(c1, c2, cg)


@pytest.mark.slow
def test_constants_match_brute_force_sampled_s7():
    rng = make_rng(11)
    labels = list(partitions(7))
    for _ in range(100):
        c1, c2, cg = (rng.choice(labels) for _ in range(3))
        assert structure_constant(c1, c2, cg).count == brute_constant(c1, c2, cg)


def test_total_mass():
    for n in range(1, 8):
        labels = list(partitions(n))
        table = constants_for(n)
        for (c1, c2), row in table.items():
            assert sum(count * class_size(cg) for count, cg in zip(row, labels)) == (
                class_size(c1) * class_size(c2)
            )


def test_degree_mismatch():
    with pytest.raises(DegreeMismatchError):
        structure_constant(Partition([3]), Partition([2]), Partition([3]))
    with pytest.raises(DegreeMismatchError):
        brute_constant(Partition([3]), Partition([3]), Partition([3]), n=4)


def test_class_square_covers():
    assert class_square_covers(Partition([5])) == (True, None)
    assert class_square_covers(Partition([5, 1]))[0]
    assert class_square_covers(Partition([4, 3]))[0]
    assert class_square_covers(Partition.ones(5)) == (False, Partition([5]))
    assert class_square(Partition.ones(4)) == [Partition.ones(4)]
    with pytest.raises(DegreeMismatchError):
        class_square_covers(Partition([5]), n=6)


def test_two_cycle_classes_square_onto_An():
    for n in range(5, 10):
        for t in partitions(n):
            if t.length <= 2 and t not in SHORT_CLASS_SQUARE_GAPS:
                assert class_square_covers(t)[0], t


def test_three_three_square_misses_four_two():
    c = Partition([3, 3])
    assert SHORT_CLASS_SQUARE_GAPS == {c: Partition([4, 2])}
    assert class_square_covers(c) == (False, Partition([4, 2]))
    assert structure_constant(c, c, Partition([4, 2])).count == 0
    assert brute_constant(c, c, Partition([4, 2])) == 0
    assert structure_constant(c, c, Partition([5, 1])).count == 5
    assert structure_constant(c, c, Partition([3, 3])).count == 10
    assert structure_constant(c, c, Partition([2, 2, 1, 1])).count == 8
    assert structure_constant(c, c, Partition.ones(6)).count == 40


def test_exact_square_fraction():
    n = 5
    expected = sum(class_size(t) for t in partitions(n) if class_square_covers(t)[0])
    assert exact_square_fraction(n) == Fraction(expected, factorial(n))
    assert 0 < exact_square_fraction(8) < 1


def test_surveys():
    empty = random_class_square_survey(8, 0, seed=1)
    assert (empty.trials, empty.covered, empty.fraction, empty.per_class) == (0, 0, 0.0, {})
    report = random_class_square_survey(8, 200, seed=1)
    assert report.trials == 200
    assert report.fraction == report.covered / 200
    assert report == random_class_square_survey(8, 200, seed=1)
    alternating = random_alternating_survey(7, 100, seed=2)
    assert all(Partition.parse(label).is_even for label in alternating.per_class)


def test_linear_contribution():
    for n in range(3, 8):
        for c in partitions(n):
            for g in partitions(n):
                linear, rest = linear_contribution(c, g)
                if g.is_even:
                    assert linear == Fraction(2, factorial(n))
                count = structure_constant(c, c, g).count
                assert linear + rest == Fraction(count, class_size(c) ** 2)


def test_construct_delta_single_cycle():
    alpha, beta = Partition([14]), Partition.parse("3,1^11")
    certificate = construct_delta(alpha, beta)
    assert certificate.verified
    assert certificate.epsilon.is_identity()
    assert certificate.delta == Permutation.from_cycles([[14, 12, 13] + list(range(11, 0, -1))], 14)
    assert certificate.gamma * certificate.delta == Permutation.from_cycles([[12, 14, 13]], 14)
    assert certificate.product_tally == {1: 11, 3: 1}
    interval = certificate.packing.intervals[0]
    assert (interval.left, interval.length) == (12, 3)


def test_construct_delta_identity():
    n = 6
    certificate = construct_delta(Partition.ones(n), Partition.ones(n))
    assert certificate.delta.is_identity()
    assert certificate.gamma.is_identity()


def test_construct_delta_random_pairs():
    rng = make_rng(20090101)
    for _ in range(60):
        n = rng.randint(7, 60)
        alpha, beta = random_square_pair(n, rng)
        certificate = construct_delta(alpha, beta)
        assert certificate.verified
        assert certificate.delta.cycle_type() == alpha
        assert (certificate.gamma * certificate.delta).cycle_type() == beta
        assert beta.fix >= FIXED_POINT_FACTOR * alpha.length or beta.fix == n


def test_construct_delta_agrees_with_constants():
    rng = make_rng(3)
    for _ in range(20):
        alpha, beta = random_square_pair(rng.randint(7, 10), rng)
        construct_delta(alpha, beta)
        assert structure_constant(alpha, alpha, beta).positive


def test_construct_delta_preconditions():
    with pytest.raises(PreconditionError):
        construct_delta(Partition([14]), Partition.parse("2,1^12"))
    with pytest.raises(PreconditionError):
        construct_delta(Partition([7, 7]), Partition.parse("3,1^11"))


def test_packing_plan_quotas():
    plan = packing_plan(Partition([30]), Partition.parse("5,4,2,2,2,1^15"))
    assert plan.c == {1: 15, 2: 3, 3: 1, 4: 1}
    assert plan.d == {3: 1, 4: 1, 6: 1, 8: 0}
    assert sorted(interval.length for interval in plan.intervals) == [3, 4, 6]
    assert sorted(point.label for point in plan.special_points) == [1, 2]
    certificate = construct_delta(Partition([30]), Partition.parse("5,4,2,2,2,1^15"))
    assert certificate.verified


def test_covered_by_packing():
    assert covered_by_packing(Partition([10])) == [Partition.parse("3,1^7"), Partition.ones(10)]
    assert covered_by_packing(Partition.ones(10)) == []


def test_certificate_json():
    certificate = construct_delta(Partition([14]), Partition.parse("3,1^11"))
    data = json.loads(certificate_to_json(certificate))
    assert data["alpha"] == [14]
    assert data["verified"] is True


def test_class_squares_check_passes():
    results = {}
    assert check_class_squares(results, seed=1, threads=None, full=False)
    assert set(results["square_fraction"]) == {"8", "9"}
