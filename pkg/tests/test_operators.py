import pytest
from hypothesis import given, settings, strategies as st

from jdcalc.diagram import DiagramExpr, make_label, strut_diagram, tree_diagram
from jdcalc.operators import (
    Delta,
    HalfValue,
    OperatorError,
    Y_op,
    compose,
    delta,
    delta_at_color,
    delta_double_prime,
    delta_prime,
    half_delta,
    leibniz_lhs_terms,
    leibniz_rhs_terms,
    mod2_equal,
    rev,
    star,
    star_i,
)
from jdcalc.diagram import canonicalize, decode
from jdcalc.parse import parse_expr
from jdcalc.spaces import connected_pool, is_zero_mod2, nf_mod2

POOL1 = [k for t in (1, 2) for k in connected_pool(1, t)]
POOL2 = list(connected_pool(2, 1))

gen1 = st.sampled_from(POOL1)
gen2 = st.sampled_from(POOL2)


@st.composite
def exprs(draw, pool=gen1, max_terms=3):
    e = DiagramExpr()
    for _ in range(draw(st.integers(1, max_terms))):
        e.add_key((draw(pool),), draw(st.integers(-3, 3)))
    return e


def equal_mod_as(a: DiagramExpr, b: DiagramExpr) -> bool:
    """Equality modulo AS only: classes with an orientation-reversing symmetry are 2-torsion."""
    for key, c in (a - b).terms.items():
        if c % 2 or not canonicalize(decode(key)).odd:
            return False
    return True


@given(exprs())
def test_rev_is_an_involution(x):
    assert rev(rev(x)) == x


@given(exprs(max_terms=2), exprs(max_terms=2))
def test_rev_reverses_products(x, y):
    assert rev(star(x, y)) == star(rev(y), rev(x))


@settings(max_examples=25)
@given(exprs(gen2, 1), exprs(gen2, 1), exprs(gen2, 1))
def test_star_is_associative(x, y, z):
    assert equal_mod_as(star(star(x, y), z), star(x, star(y, z)))


@given(exprs())
def test_empty_diagram_is_the_star_unit(x):
    one = DiagramExpr({(): 1})
    assert star(one, x) == x
    assert star(x, one) == x


@given(exprs(), exprs())
def test_star_is_bilinear(x, y):
    assert star(x + x, y) == 2 * star(x, y)
    assert star(x, y - y) == DiagramExpr()


@given(exprs(), exprs())
def test_delta_is_additive_mod2(x, y):
    assert mod2_equal(delta(x + y), delta(x) + delta(y))


@given(exprs())
def test_delta_kills_even_multiples(x):
    assert is_zero_mod2(delta(2 * x))


@given(gen1, gen1)
def test_leibniz_rule(a, b):
    x, y = DiagramExpr({(a,): 1}), DiagramExpr({(b,): 1})
    assert is_zero_mod2(delta(star(x, y)) + star(delta(x), y) + star(x, delta(y)))


@given(gen1, gen1, st.sampled_from(["split", "plus", "minus"]))
def test_per_color_identities(a, b, which):
    x, y = DiagramExpr({(a,): 1}), DiagramExpr({(b,): 1})
    lhs = leibniz_lhs_terms(x, y, 1, which)
    rhs = leibniz_rhs_terms(decode((a,)), decode((b,)), 1, which)
    assert is_zero_mod2(lhs + rhs)


@given(gen1)
def test_delta_splits_into_colors(a):
    x = DiagramExpr({(a,): 1})
    total = delta_at_color(x, make_label(1, True)) + delta_at_color(x, make_label(1, False))
    assert mod2_equal(delta(x), total)


@given(st.sampled_from(list(connected_pool(1, 1)) + list(connected_pool(2, 1))))
def test_delta_after_doubling_vanishes(a):
    x = DiagramExpr({(a,): 1})
    d = Delta(x)
    assert is_zero_mod2(delta_prime(d))
    assert is_zero_mod2(delta_double_prime(d))


def test_delta_splits_into_prime_parts():
    x = parse_expr("T(1+,1-,1+)", 1)
    assert mod2_equal(delta(x), delta_prime(x) + delta_double_prime(x))


def test_doubling_example():
    x = parse_expr("T(1+,1-,1+)", 1)
    assert Delta(x) == parse_expr("T(1+,1+,1-,1+,1+) + 2*T(1+,1-,1+,1+,1-)", 1)


def test_star_of_trees():
    x = parse_expr("T(1+,2-,1-)", 2)
    y = parse_expr("T(2+,1-,1+)", 2)
    glued = star(x, y)
    connected = DiagramExpr({k: c for k, c in glued.terms.items() if len(k) == 1})
    assert connected == -parse_expr("T(1+,2+,1-,2-)", 2)
    assert len(glued.terms) == 2


def test_star_by_color_sums_to_total_on_single_color():
    x, y = parse_expr("T(1+,1+,1-)", 1), parse_expr("T(1-,1-,1+)", 1)
    assert star_i(x, y, 1) == star(x, y)


def test_compose_glues_everything():
    x, y = parse_expr("T(1+,1+,1-)", 1), parse_expr("T(1-,1-,1+)", 1)
    for key in compose(x, y).terms:
        assert all(len(c) != 2 for c in key)


def test_Y_duplicates_degree_one_parts():
    x = parse_expr("T(1+,2+,1-)", 2)
    y = Y_op(x)
    assert list(y.terms) == [tuple(sorted(list(x.terms)[0] * 2))]


def test_struts_are_rejected():
    s = DiagramExpr.of(strut_diagram(make_label(1, True), make_label(1, False)))
    with pytest.raises(OperatorError):
        Y_op(s)


def test_half_delta_value():
    x = parse_expr("T(1+,2+,1-)", 2)
    h = half_delta(x)
    assert isinstance(h, HalfValue)
    assert h == half_delta(x + 2 * x)
    assert half_delta(2 * x).is_zero()


def test_mod2_equal_uses_relations():
    # AS with a repeated label: 2x = 0, so x and -x agree mod 2 and x + x is zero
    x = parse_expr("T(1+,1+,1-)", 1)
    assert mod2_equal(x, -x)
    assert nf_mod2(x) != frozenset()
    assert tree_diagram([make_label(1, True)] * 3).t == 1
