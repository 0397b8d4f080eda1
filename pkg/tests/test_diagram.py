import pytest
from hypothesis import given, strategies as st

from jdcalc.diagram import (
    Diagram,
    DiagramError,
    DiagramExpr,
    all_labels,
    canonicalize,
    component_info,
    decode,
    disjoint_union,
    ihx_triple,
    internal_edges,
    label_index,
    label_is_plus,
    label_str,
    make_label,
    metrics,
    parse_label,
    star,
    strut_diagram,
    tree_diagram,
    wheel_diagram,
)
from jdcalc.spaces import connected_pool

POOL = [k for t in (1, 2, 3) for k in connected_pool(1, t)] + [k for k in connected_pool(2, 2)]


def shuffled(d: Diagram, vperm, rots, lperm) -> Diagram:
    """Same diagram with vertices renumbered, cyclic orders rotated and legs reordered."""
    t, m = d.t, d.legs
    pos = [0] * d.n_half
    for v in range(t):
        for s in range(3):
            pos[3 * v + s] = 3 * vperm[v] + (s + rots[v]) % 3
    for i in range(m):
        pos[3 * t + i] = 3 * t + lperm[i]
    mate = [0] * d.n_half
    for h, k in enumerate(d.mate):
        mate[pos[h]] = pos[k]
    labels = [0] * m
    for i, lab in enumerate(d.labels):
        labels[lperm[i]] = lab
    return Diagram(t, mate, labels)


@st.composite
def relabelings(draw):
    key = draw(st.sampled_from(POOL))
    d = decode((key,))
    vperm = draw(st.permutations(range(d.t)))
    rots = [draw(st.integers(0, 2)) for _ in range(d.t)]
    lperm = draw(st.permutations(range(d.legs)))
    return d, shuffled(d, vperm, rots, lperm)


def test_labels():
    assert make_label(1, True) == 0 and make_label(1, False) == 1
    assert label_str(make_label(3, False)) == "3-"
    assert parse_label("2+", 2) == make_label(2, True)
    assert star(make_label(2, True)) == make_label(2, False)
    assert label_index(make_label(4, False)) == 4
    assert not label_is_plus(make_label(1, False))
    assert len(all_labels(3)) == 6
    with pytest.raises(ValueError):
        parse_label("3+", 2)


def test_invalid_half_edge_table():
    with pytest.raises(DiagramError):
        Diagram(1, [1, 0, 2], [])
    with pytest.raises(DiagramError):
        Diagram(0, [0], [0])


@given(relabelings())
def test_canonical_key_ignores_numbering_and_rotation(pair):
    d, e = pair
    a, b = canonicalize(d), canonicalize(e)
    assert a.key == b.key
    assert a.sign == b.sign


@given(relabelings(), st.data())
def test_reversing_one_vertex_flips_sign(pair, data):
    d, e = pair
    v = data.draw(st.integers(0, e.t - 1))
    a, b = canonicalize(d), canonicalize(e.reversed_at(v))
    assert a.key == b.key
    if not a.odd:
        assert b.sign == -a.sign


@given(st.sampled_from(POOL), st.sampled_from(POOL))
def test_union_key_is_sorted_components(k1, k2):
    u = canonicalize(disjoint_union(decode((k1,)), decode((k2,))))
    assert u.key == tuple(sorted((k1, k2)))


@given(st.sampled_from([k for k in POOL if component_info(k).ideg >= 2]))
def test_ihx_triples_share_legs(key):
    d = decode((key,))
    for h, _ in internal_edges(d):
        terms = ihx_triple(d, h)
        assert len(terms) == 3
        for x in terms:
            assert sorted(x.labels) == sorted(d.labels)
            assert x.t == d.t


def test_self_loop_class_vanishes():
    lab = make_label(1, True)
    # vertex 0 with slots 0,1 joined to each other and slot 2 to a leg
    d = Diagram(1, [1, 0, 3, 2], [lab])
    assert d.has_self_loop()
    assert canonicalize(d).sign == 0
    assert not DiagramExpr.of(d)


def test_tree_and_wheel_shapes():
    a, b = make_label(1, True), make_label(1, False)
    t = tree_diagram([a, b, a, b])
    assert (t.t, t.legs) == (2, 4)
    w = wheel_diagram([a, b, b])
    assert (w.t, w.legs) == (3, 3)
    m = metrics(w)
    assert m.loop_degrees == (1,)
    assert m.strut_free
    s = metrics(strut_diagram(a, a))
    assert not s.strut_free and not s.top_substantial


def test_tree_as_symmetry():
    a, b = make_label(1, True), make_label(1, False)
    assert canonicalize(tree_diagram([a, a, b])).odd
    assert not canonicalize(tree_diagram([a, make_label(2, True), b])).odd


def test_expr_arithmetic():
    a, b = make_label(1, True), make_label(1, False)
    x = DiagramExpr.of(tree_diagram([a, b, make_label(2, True)]))
    assert not (x - x)
    assert (2 * x).to_ring("Z2") == DiagramExpr(ring="Z2")
    assert (x + x.to_ring("Z2")).ring == "Z2"
