from collections import Counter
from fractions import Fraction
import pytest
from waring_kit import sl2
from waring_kit.errors import PreconditionError
from waring_kit.perm import Partition, Permutation
from waring_kit.sl2 import (
    FpElem,
    SL2Context,
    SL2Elem,
    cheb_roots,
    chebyshev,
    class_label,
    class_labels,
    class_size_of,
    element_order,
    embed_to_An,
    find_high_order_value,
    image_density,
    intersection_density,
    power_orders,
    sl2_elements,
    torus_element,
    trace_conditions,
    word_traces,
)
from waring_kit.suite import check_sl2
from waring_kit.types import ImageMode
from waring_kit.words import ClassClosedSet, commutator, power_word, product_covers


def test_field_arithmetic():
    a = FpElem(3, 7)
    assert a.inverse() == 5
    assert a * a.inverse() == 1
    assert a / 3 == 1
    assert a ** -1 == 5
    assert 10 - a == FpElem(0, 7)
    with pytest.raises(ZeroDivisionError):
        FpElem(0, 7).inverse()
    with pytest.raises(PreconditionError):
        a + FpElem(1, 5)


def test_matrix_arithmetic(rng):
    s = SL2Elem.random(11, rng)
    assert (s * s.inverse()).is_identity()
    assert s ** 0 == SL2Elem.identity(11)
    assert s ** -2 == (s * s).inverse()
    with pytest.raises(PreconditionError):
        SL2Elem(1, 1, 1, 1, 7)


def test_random_elements_have_determinant_one(rng):
    for p in (3, 7, 13):
        for _ in range(100):
            s = SL2Elem.random(p, rng)
            assert (s.a * s.d - s.b * s.c) % p == 1


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_enumeration_and_class_sizes(p):
    elements = sl2_elements(p)
    assert len(elements) == p * (p * p - 1)
    assert len(set(elements)) == len(elements)
    sizes = Counter(class_label(s) for s in elements)
    for label in class_labels(p):
        assert sizes[label] == class_size_of(label, p)


def test_element_orders():
    p = 7
    assert element_order(SL2Elem.identity(p)) == 1
    assert element_order(SL2Elem(6, 0, 0, 6, p)) == 2
    assert element_order(SL2Elem(1, 1, 0, 1, p)) == p
    assert element_order(SL2Elem(6, 6, 0, 6, p)) == 2 * p
    # 3 generates F_7^*
    assert element_order(SL2Elem(3, 0, 0, 5, p)) == 6
    assert element_order(torus_element(p)) == 3
    with pytest.raises(PreconditionError):
        element_order(SL2Elem.identity(p), method="guess")


@pytest.mark.parametrize("p", [5, 7, 11])
def test_order_methods_agree(p):
    for s in sl2_elements(p):
        assert element_order(s) == element_order(s, method="power")


def test_chebyshev_polynomials():
    assert chebyshev(0).coefficients == (2,)
    assert chebyshev(1).coefficients == (0, 1)
    assert chebyshev(2).coefficients == (-2, 0, 1)
    assert chebyshev(3).coefficients == (0, -3, 0, 1)
    for k in range(7):
        assert chebyshev(k).verify_identity()
    with pytest.raises(PreconditionError):
        chebyshev(-1)


def test_chebyshev_trace_of_powers(rng):
    p = 13
    for _ in range(50):
        s = SL2Elem.random(p, rng)
        for k in range(1, 6):
            assert chebyshev(k)(s.trace, p) == (s ** k).trace


def test_cheb_roots():
    assert cheb_roots(2, 2, 7) == 2
    assert cheb_roots(1, 4, 7) == 1
    with pytest.raises(PreconditionError):
        cheb_roots(0, 1, 7)


def test_cheb_roots_polynomial_branch(monkeypatch):
    expected = {(k, u): cheb_roots(k, u, 11) for k in (2, 3, 5) for u in range(11)}
    monkeypatch.setattr(sl2, "SCAN_LIMIT", 0)
    for (k, u), count in expected.items():
        assert cheb_roots(k, u, 11) == count
    assert cheb_roots(2, 2, 5003) == 2


def test_trace_conditions():
    assert not trace_conditions(2, 11).split_torus
    assert not trace_conditions(2, 11).passes
    assert any(trace_conditions(u, 11).passes for u in range(11))
    report = trace_conditions(3, 11, word_traces=[0, 1])
    assert report.word_trace is False
    with pytest.raises(PreconditionError):
        trace_conditions(3, 11, M=2)


def test_find_high_order_value():
    result = find_high_order_value(power_word(1), 7, budget=1000, seed=1)
    assert result.found
    assert element_order(SL2Elem.from_matrix(result.element, 7)) == 3
    result = find_high_order_value(power_word(2), 11, budget=10 ** 4, seed=1)
    assert result.found
    witness = SL2Elem.from_matrix(result.witness[0], 11)
    assert witness * witness == SL2Elem.from_matrix(result.element, 11)
    assert element_order(witness * witness) == 5
    with pytest.raises(PreconditionError):
        find_high_order_value(power_word(1), 13)


def test_commutator_search():
    result = find_high_order_value(commutator(), 19, budget=10 ** 5, seed=7)
    assert result.found
    x, y = (SL2Elem.from_matrix(m, 19) for m in result.witness)
    value = x.inverse() * y.inverse() * x * y
    assert value.matrix() == result.element
    assert element_order(value) == 9


def test_search_miss_is_reported():
    # nothing is tried on a zero budget
    result = find_high_order_value(power_word(2), 7, budget=0)
    assert not result.found
    assert result.trials == 0


def test_embedding():
    assert embed_to_An(SL2Elem.identity(7)).is_identity()
    assert embed_to_An(torus_element(7)).cycle_type() == Partition([3, 3, 1, 1])
    for p in (7, 11, 19, 23):
        t = (p - 1) // 2
        assert embed_to_An(torus_element(p)).cycle_type() == Partition([t, t, 1, 1])
    with pytest.raises(PreconditionError):
        embed_to_An(SL2Elem.identity(7), 11)


def test_embedding_is_a_homomorphism(rng):
    for _ in range(100):
        s, t = SL2Elem.random(11, rng), SL2Elem.random(11, rng)
        assert embed_to_An(s * t) == embed_to_An(s) * embed_to_An(t)
        assert embed_to_An(s).cycle_type().is_even


def test_densities():
    assert image_density(power_word(1), 7) == 1
    squares = {class_label(s * s) for s in sl2_elements(7)}
    expected = Fraction(sum(class_size_of(label, 7) for label in squares), 336)
    assert image_density(power_word(2), 7) == expected
    assert expected < 1
    for p in (5, 7, 11, 13):
        assert image_density(commutator(), p) > Fraction(1, 2)
    sampled = image_density(power_word(2), 7, mode=ImageMode.SAMPLED, samples=200, seed=3)
    assert sampled <= expected
    assert intersection_density([power_word(2), power_word(3)], 7) <= expected


def test_word_traces_and_coverage():
    assert word_traces(power_word(1), 5) == list(range(5))
    G = SL2Context(5)
    whole = ClassClosedSet.whole(G)
    assert product_covers(whole, whole).covers
    with pytest.raises(PreconditionError):
        SL2Context(9)


def test_power_orders_match_enumeration():
    for p in (7, 11, 13):
        for k in (1, 2, 3):
            brute = sorted({element_order(s ** k) for s in sl2_elements(p)})
            assert power_orders(k, p) == brute


def test_cubes_miss_half_order_when_three_divides_p_minus_one():
    assert power_orders(3, 7) == [1, 2, 4, 7, 8, 14]
    assert power_orders(3, 19) == [1, 2, 3, 4, 5, 6, 10, 19, 20, 38]
    for p in (7, 19):
        assert (p - 1) // 2 not in power_orders(3, p)
    # without 3 | p - 1 the cube map is a bijection on the split torus
    for p in (11, 23):
        assert (p - 1) // 2 in power_orders(3, p)


def test_sl2_check_covers_cube_exceptions():
    results = {}
    assert check_sl2(results, seed=3, threads=None, full=False)
    assert set(results["sl2_cube_orders"]) == {"7", "19"}
    assert "x1^3@7" not in results["sl2_search"]
    assert results["sl2_search"]["x1^3@11"]
