from math import comb, factorial
import pytest
from waring_kit.errors import DegreeMismatchError, PreconditionError
from waring_kit.perm import Partition, centralizer_order, partitions, sign_of_type
from waring_kit.symchar import (
    YoungDiagram,
    character_sign_twist,
    character_table,
    degree,
    layers,
    mn_value,
    rim_hooks,
    verify_char_bound,
    verify_dim_bound,
    verify_exponential_degree,
    verify_fixed_point_bound,
    verify_sigma_estimate,
    zeta,
)
from waring_kit.utils import make_rng


def test_rim_hooks_of_row_and_column():
    for n in range(1, 8):
        (hook,) = rim_hooks(Partition([n]), n)
        assert hook.leg == 0 and hook.remainder == Partition([])
        (hook,) = rim_hooks(Partition.ones(n), n)
        assert hook.leg == n - 1


def test_rim_hook_of_two_one():
    (hook,) = rim_hooks(Partition([2, 1]), 3)
    assert hook.leg == 1
    assert hook.start_row == 1
    assert hook.remainder.n == 0
    assert hook.sign == -1


def test_rim_hooks_leave_partitions():
    for n in range(1, 11):
        for lam in partitions(n):
            for r in range(1, n + 1):
                rows = [hook.start_row for hook in rim_hooks(lam, r)]
                assert rows == sorted(rows)
                for hook in rim_hooks(lam, r):
                    assert hook.remainder.n == n - r


def test_rim_hook_count_bounded_by_layers():
    for n in range(1, 15):
        for lam in partitions(n):
            for r in range(1, n + 1):
                assert len(rim_hooks(lam, r)) <= 2 * layers(lam)


def test_mn_values():
    assert mn_value(Partition([2, 1]), Partition([3])) == -1
    assert mn_value(Partition([2, 1]), Partition.ones(3)) == 2
    for mu in partitions(6):
        assert mn_value(Partition([6]), mu) == 1
    with pytest.raises(DegreeMismatchError):
        mn_value(Partition([2, 1]), Partition([2]))


def test_mn_independent_of_cycle_order():
    rng = make_rng(5)
    for n in range(1, 11):
        for mu in partitions(n):
            lam = rng.choice(list(partitions(n)))
            expected = mn_value(lam, mu)
            for _ in range(3):
                order = list(mu)
                rng.shuffle(order)
                assert mn_value(lam, mu, order=order) == expected
    with pytest.raises(PreconditionError):
        mn_value(Partition([2, 1]), Partition([2, 1]), order=[3])


def test_degrees():
    assert degree(Partition([7])) == 1
    assert degree(Partition([2, 1])) == 2
    assert degree(Partition([3, 2])) == 5
    for n in range(1, 13):
        for lam in partitions(n):
            assert mn_value(lam, Partition.ones(n)) == degree(lam)


def test_hook_lengths():
    assert YoungDiagram(Partition([3, 2])).hook_lengths() == [[4, 3, 1], [2, 1]]
    diagram = YoungDiagram(Partition([4, 2, 1]))
    assert diagram.transpose().transpose() == diagram


def test_layers():
    assert layers(Partition([9])) == 1
    assert layers(Partition([2, 2])) == 2
    assert layers(Partition([3, 3, 3])) == 3
    with pytest.raises(PreconditionError):
        layers(Partition([]))


def test_small_tables():
    table = character_table(2)
    assert table.partitions == list(partitions(2))
    assert table.partitions == [Partition([2]), Partition([1, 1])]
    assert table.values == [[1, 1], [-1, 1]]
    table = character_table(5)
    assert sorted(table.degrees) == [1, 1, 4, 4, 5, 5, 6]


@pytest.mark.parametrize("n", range(1, 13))
def test_orthogonality(n):
    table = character_table(n)
    assert table.check_orthogonality()
    for i, mu in enumerate(table.partitions):
        assert table.column_inner(i, i) == centralizer_order(mu)
    assert sum(d * d for d in table.degrees) == factorial(n)


def test_sign_twist():
    for n in range(1, 11):
        for lam in partitions(n):
            for mu in partitions(n):
                assert character_sign_twist(lam, mu)
    assert mn_value(Partition([1, 1, 1]), Partition([2, 1])) == sign_of_type(Partition([2, 1]))


def test_ncycle_support_is_a_hook():
    for n in range(1, 13):
        for lam in partitions(n):
            value = mn_value(lam, Partition([n]))
            assert value in (-1, 0, 1)
            if value:
                assert layers(lam) == 1


def test_zeta():
    assert zeta(3, 1) == pytest.approx(2.5)
    assert zeta(5, 2) == pytest.approx(2 + 2 / 16 + 2 / 25 + 1 / 36)
    for n in range(2, 15):
        assert zeta(n, 1.5) >= 2
    with pytest.raises(PreconditionError):
        zeta(4, 0)


def test_char_bound():
    report = verify_char_bound(10)
    assert report.violations == 0
    assert report.max_ratio_float <= 1
    assert report.ncycle_values_bounded
    assert report.ncycle_support_single_layer


def test_dim_bound():
    report = verify_dim_bound(12)
    assert report.violations == 0
    assert report.checked > 0
    # (n-1, 1) meets the bound with equality
    assert [11, 1] in report.tight
    assert degree(Partition([11, 1])) == comb(11, 1)


def test_exponent_reports():
    sigma = verify_sigma_estimate(10, 3)
    assert 0 <= sigma.value < 1
    fixed = verify_fixed_point_bound(10, 4)
    assert 0 <= fixed.value < 1
    growth = verify_exponential_degree(12)
    assert growth.value > 1
    assert growth.argmax_lambda
