import pytest
from hypothesis import given, strategies as st

from jdcalc.diagram import DiagramExpr, canonicalize, disjoint_union, decode, make_label, strut_diagram, tree_diagram, wheel_diagram
from jdcalc.parse import ParseError, parse_diagram, parse_expr, render, render_class
from jdcalc.spaces import connected_pool

POOL = [k for t in (1, 2, 3) for k in connected_pool(1, t)] + list(connected_pool(2, 2))
STRUTS = [canonicalize(strut_diagram(make_label(1, True), make_label(1, False))).key[0]]


@st.composite
def exprs(draw):
    e = DiagramExpr()
    for _ in range(draw(st.integers(0, 4))):
        comps = draw(st.lists(st.sampled_from(POOL + STRUTS), min_size=1, max_size=2))
        e.add_key(tuple(sorted(comps)), draw(st.integers(-5, 5)))
    return e


@given(exprs())
def test_render_parse_round_trip(e):
    text = render(e)
    assert parse_expr(text) == e
    assert render(parse_expr(text)) == text


def test_named_shapes():
    a, b, c = make_label(1, True), make_label(1, False), make_label(2, True)
    assert render(DiagramExpr.of(tree_diagram([a, b, c]))) == "T(1+,1-,2+)"
    assert render(parse_expr("T(2+,1+,1-,2-)")) == "-T(1+,2+,1-,2-)"
    assert render(DiagramExpr.of(wheel_diagram([a, b]))) == "O(1+,1-)"


def test_generic_literal_equals_wheel():
    g = "G{t=2; legs=[1+,2-]; edges=[(v1,v2),(v1,v2),(v1,l1),(v2,l2)]; cyc={v1:[e1,e2,e3],v2:[e2,e1,e4]}}"
    w = parse_expr("O(1+,2-)")
    assert parse_expr(g) in (w, -w)


def test_coefficients_and_signs():
    e = parse_expr("-2*T(1+,1-,2+) + O(1+,1-) - O(1+,1-)", 2)
    assert e == -2 * parse_expr("T(1+,1-,2+)")
    assert parse_expr("0") == DiagramExpr()
    assert render(DiagramExpr()) == "0"


def test_mod2_rendering_drops_coefficients():
    e = parse_expr("3*T(1+,1-,2+)").to_ring("Z2")
    assert "3" not in render(e)


def test_disconnected_terms_use_generic_literal():
    a, b = make_label(1, True), make_label(1, False)
    d = disjoint_union(tree_diagram([a, b, a]), tree_diagram([b, b, a]))
    text = render(DiagramExpr.of(d))
    assert text.lstrip("-").startswith("G{")
    assert parse_expr(text) == DiagramExpr.of(d)


@pytest.mark.parametrize(
    "text,pos",
    [
        ("T(1+,1-)", 0),
        ("O()", 0),
        ("T(1+,1-,1+) +", 13),
        ("T(1+,1?,1+)", 6),
        ("Q(1+)", 0),
        ("T(3+,1-,1+)", 2),
    ],
)
def test_errors_report_positions(text, pos):
    with pytest.raises(ParseError) as info:
        parse_expr(text, genus=2)
    assert info.value.pos == pos


def test_genus_is_checked_only_when_given():
    parse_expr("T(3+,1-,1+)")
    with pytest.raises(ParseError):
        parse_expr("T(3+,1-,1+)", genus=2)


def test_parse_diagram_rejects_trailing_input():
    assert parse_diagram("O(1+)").t == 1
    with pytest.raises(ParseError):
        parse_diagram("O(1+) + O(1-)")


def test_bad_generic_literal():
    with pytest.raises(ParseError):
        parse_expr("G{t=1; legs=[1+]; edges=[(v1,l1)]; cyc={v1:[e1]}}")


@given(st.sampled_from(POOL))
def test_render_class_sign(key):
    text, s = render_class((key,))
    assert parse_expr(text) == DiagramExpr({(key,): s})
