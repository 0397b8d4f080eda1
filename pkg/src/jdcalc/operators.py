"""Operations on diagram combinations: δ and its pieces, 𝕐, Δ, D_vw, ⋆, ∘, rev.

Local rewiring happens on an :class:`Editor`; results are canonicalized into
:class:`DiagramExpr`.  Operators landing in ℤ/2 coefficients use ring "Z2",
so orientation choices for new vertices do not matter there.  Δ is integral;
its new vertex is ordered (leg, first copy, second copy).
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterable, Sequence

from .diagram import (
    Diagram,
    DiagramExpr,
    Editor,
    decode_cached,
    label_index,
    label_is_plus,
    metrics,
    star as star_label,
)
from .spaces import FlavorError, nf_half, nf_mod2


class OperatorError(ValueError):
    pass


# ---------------------------------------------------------------- editor primitives


def _attach(ed: Editor, lh: int) -> int:
    p = ed.mate[lh]
    if ed.is_leg(p):
        raise OperatorError("struts are not allowed in this operation")
    return p


def _double_leg(ed: Editor, lh: int) -> None:
    """Add a second leg with the same label next to the one at ``lh``."""
    p = _attach(ed, lh)
    u = ed.verts[ed.vertex_of(p)]
    q = u[(u.index(p) + 1) % 3]
    r = ed.mate[q]
    a, b, c = ed.add_vertex()
    ed.join(a, q)
    ed.join(b, r)
    ed.join(c, ed.add_leg(ed.leg_label[lh]))


def _branch_leg(ed: Editor, lh: int) -> None:
    """Replace the leg at ``lh`` by a fork carrying its label and the dual label."""
    lab = ed.leg_label[lh]
    _attach(ed, lh)
    p = ed.remove_leg(lh)
    z0, z1, z2 = ed.add_vertex()
    ed.join(z0, p)
    ed.join(z1, ed.add_leg(lab))
    ed.join(z2, ed.add_leg(star_label(lab)))


def _fuse_legs(ed: Editor, lv: int, lw: int) -> None:
    """Join the attachment points of two equally labeled legs through a new leg."""
    lab = ed.leg_label[lv]
    if ed.leg_label[lw] != lab:
        raise OperatorError("fused legs must carry the same label")
    _attach(ed, lv)
    _attach(ed, lw)
    pv = ed.remove_leg(lv)
    pw = ed.remove_leg(lw)
    a, b, c = ed.add_vertex()
    ed.join(a, pv)
    ed.join(b, pw)
    ed.join(c, ed.add_leg(lab))


def _glue(ed: Editor, lv: int, lw: int) -> None:
    """Glue two legs: their attachment points become joined by one edge."""
    pv = ed.remove_leg(lv)
    if pv == lw:
        raise OperatorError("gluing the two ends of one strut")
    pw = ed.remove_leg(lw)
    if pv == pw:
        raise OperatorError("gluing closes a vertex-free circle")
    ed.join(pv, pw)


def _editor_of(*parts: Diagram) -> tuple[Editor, list[list[int]]]:
    ed = Editor()
    legs = [ed.insert(d)[1] for d in parts]
    return ed, legs


# ---------------------------------------------------------------- per-diagram pieces


def delta_v(d: Diagram, i: int) -> list[Diagram]:
    """The two diagrams of δ_v for leg ``i``: doubled leg, then branched leg."""
    out = []
    for op in (_double_leg, _branch_leg):
        ed, (legs,) = _editor_of(d)
        op(ed, legs[i])
        out.append(ed.build())
    return out


def delta_vw(d: Diagram, i: int, j: int) -> Diagram:
    if i == j:
        raise OperatorError("δ_vw needs two distinct legs")
    if d.labels[i] != d.labels[j]:
        raise OperatorError("δ_vw needs legs with identical labels")
    ed, (legs,) = _editor_of(d)
    _fuse_legs(ed, legs[i], legs[j])
    return ed.build()


def _same_label_pairs(d: Diagram, label: int | None = None) -> Iterable[tuple[int, int]]:
    for i, j in itertools.combinations(range(d.legs), 2):
        if d.labels[i] == d.labels[j] and (label is None or d.labels[i] == label):
            yield i, j


def _require_strut_free(d: Diagram) -> None:
    if not metrics(d).strut_free:
        raise OperatorError("input contains a strut component")


# ---------------------------------------------------------------- expression-level operators


def _map_mod2(expr: DiagramExpr, f: Callable[[Diagram], Iterable[Diagram]]) -> DiagramExpr:
    out = DiagramExpr(ring="Z2")
    for key, c in expr.items():
        if c % 2 == 0:
            continue
        d = decode_cached(key)
        for e in f(d):
            out.add_diagram(e)
    return out


def _delta1_diagrams(d: Diagram, label: int | None = None) -> list[Diagram]:
    _require_strut_free(d)
    out = []
    for i in range(d.legs):
        if label is None or d.labels[i] == label:
            out.extend(delta_v(d, i))
    return out


def _delta2_diagrams(d: Diagram, label: int | None = None) -> list[Diagram]:
    _require_strut_free(d)
    return [delta_vw(d, i, j) for i, j in _same_label_pairs(d, label)]


def delta_prime(expr: DiagramExpr) -> DiagramExpr:
    return _map_mod2(expr, _delta1_diagrams)


def delta_double_prime(expr: DiagramExpr) -> DiagramExpr:
    return _map_mod2(expr, _delta2_diagrams)


def delta(expr: DiagramExpr) -> DiagramExpr:
    return _map_mod2(expr, lambda d: _delta1_diagrams(d) + _delta2_diagrams(d))


def delta_at_color(expr: DiagramExpr, label: int) -> DiagramExpr:
    """δ^a: the part of δ touching only legs labeled ``label`` (pairs unordered)."""
    return _map_mod2(expr, lambda d: _delta1_diagrams(d, label) + _delta2_diagrams(d, label))


def Y_op(expr: DiagramExpr) -> DiagramExpr:
    """Add a copy of each i-deg-1 component, once per such component."""
    out = DiagramExpr(ring=expr.ring)
    for key, c in expr.items():
        for ck in key:
            if len(ck) == 2:
                raise OperatorError("input contains a strut component")
        for ck in key:
            if len(ck) == 3:
                out.add_key(tuple(sorted(key + (ck,))), c)
    return out


def Delta_v(d: Diagram, i: int) -> Diagram:
    """Join leg ``i``'s label through a new vertex to two copies of the rest of ``d``."""
    ed, (l1, l2) = _editor_of(d, d)
    p1 = ed.remove_leg(l1[i])
    p2 = ed.remove_leg(l2[i])
    c0, c1, c2 = ed.add_vertex()
    ed.join(c0, ed.add_leg(d.labels[i]))
    ed.join(c1, p1)
    ed.join(c2, p2)
    return ed.build()


def Delta_diagrams(d: Diagram) -> list[Diagram]:
    if len(d.components()) != 1:
        raise OperatorError("Δ needs a connected diagram")
    return [Delta_v(d, i) for i in range(d.legs)]


def Delta(expr: DiagramExpr) -> DiagramExpr:
    """Δ_{n,r} extended linearly (integral coefficients)."""
    out = DiagramExpr(ring=expr.ring)
    for key, c in expr.items():
        if len(key) != 1:
            raise OperatorError("Δ needs a connected diagram")
        for e in Delta_diagrams(decode_cached(key)):
            out.add_diagram(e, c)
    return out


def edge_join(d1: Diagram, v: int, d2: Diagram, w: int) -> Diagram:
    """D_vw: join the midpoints of the edges at leg v of d1 and leg w of d2."""
    ed, (l1, l2) = _editor_of(d1, d2)
    mids = []
    for lh in (l1[v], l2[w]):
        p = ed.mate[lh]
        a, b, c = ed.add_vertex()
        ed.join(a, p)
        ed.join(b, lh)
        mids.append(c)
    ed.join(*mids)
    return ed.build()


# ---------------------------------------------------------------- gluing products


def _matchings(left: Sequence[int], right: Sequence[int], complete: bool) -> Iterable[list[tuple[int, int]]]:
    """Injective partial matchings between two leg lists (complete: all of both)."""
    if complete:
        if len(left) != len(right):
            return
        for perm in itertools.permutations(right):
            yield list(zip(left, perm))
        return
    for k in range(min(len(left), len(right)) + 1):
        for ls in itertools.combinations(left, k):
            for rs in itertools.permutations(right, k):
                yield list(zip(ls, rs))


def _gluings(x: Diagram, y: Diagram, colors: Iterable[int], complete: bool) -> Iterable[Diagram]:
    per_color = []
    for i in colors:
        plus = [k for k, lab in enumerate(x.labels) if label_index(lab) == i and label_is_plus(lab)]
        minus = [k for k, lab in enumerate(y.labels) if label_index(lab) == i and not label_is_plus(lab)]
        ms = list(_matchings(plus, minus, complete))
        if not ms:
            return
        per_color.append(ms)
    for combo in itertools.product(*per_color):
        ed, (lx, ly) = _editor_of(x, y)
        for pairs in combo:
            for a, b in pairs:
                _glue(ed, lx[a], ly[b])
        yield ed.build()


def _colors(*ds: Diagram) -> list[int]:
    return sorted({label_index(lab) for d in ds for lab in d.labels})


def _bilinear(x: DiagramExpr, y: DiagramExpr, f: Callable[[Diagram, Diagram], Iterable[Diagram]]) -> DiagramExpr:
    ring = "Z2" if "Z2" in (x.ring, y.ring) else x.ring
    out = DiagramExpr(ring=ring)
    for kx, cx in x.items():
        dx = decode_cached(kx)
        for ky, cy in y.items():
            dy = decode_cached(ky)
            for e in f(dx, dy):
                out.add_diagram(e, cx * cy)
    return out


def star(x: DiagramExpr, y: DiagramExpr) -> DiagramExpr:
    """x ⋆ y: all partial gluings of i+ legs of x with i- legs of y, over all colors."""

    def f(dx: Diagram, dy: Diagram):
        _require_strut_free(dx)
        _require_strut_free(dy)
        return _gluings(dx, dy, _colors(dx, dy), complete=False)

    return _bilinear(x, y, f)


def star_i(x: DiagramExpr, y: DiagramExpr, i: int) -> DiagramExpr:
    """x ⋆_i y: partial gluings in color i only."""

    def f(dx: Diagram, dy: Diagram):
        _require_strut_free(dx)
        _require_strut_free(dy)
        return _gluings(dx, dy, [i], complete=False)

    return _bilinear(x, y, f)


def compose(x: DiagramExpr, y: DiagramExpr) -> DiagramExpr:
    """x ∘ y: glue every i+ leg of x to an i- leg of y, in all ways."""

    def f(dx: Diagram, dy: Diagram):
        if not metrics(dx).top_substantial:
            raise OperatorError("the first argument of compose must be top-substantial")
        return _gluings(dx, dy, _colors(dx, dy), complete=True)

    return _bilinear(x, y, f)


def rev(expr: DiagramExpr) -> DiagramExpr:
    out = DiagramExpr(ring=expr.ring)
    for key, c in expr.items():
        out.add_diagram(decode_cached(key).relabel(star_label), c)
    return out


# ---------------------------------------------------------------- Q/Z-valued right-hand sides


class HalfValue:
    """One half of an integral combination, viewed in the diagram module tensored with Q/Z.

    Only the parity of free Smith coordinates matters; ``nf`` stores it and
    makes equality and zero tests exact.
    """

    __slots__ = ("lift", "nf")

    def __init__(self, lift: DiagramExpr):
        self.lift = lift.to_ring("Z") if lift.ring == "Z2" else lift
        self.nf = nf_half(self.lift)

    def is_zero(self) -> bool:
        return not self.nf

    def __eq__(self, other: object) -> bool:
        return isinstance(other, HalfValue) and self.nf == other.nf

    def __hash__(self) -> int:
        return hash(self.nf)

    def __add__(self, other: "HalfValue") -> "HalfValue":
        return HalfValue(self.lift + other.lift)


def half_delta(expr: DiagramExpr) -> HalfValue:
    """(id⊗½)∘δ, meant for connected inputs."""
    for key in expr.terms:
        if len(key) != 1:
            raise FlavorError("half_delta expects connected terms")
    return HalfValue(delta(expr))


def half_delta_plus_Y(expr: DiagramExpr) -> HalfValue:
    """(id⊗½)∘(δ+𝕐) on the strut-free module."""
    return HalfValue(delta(expr).to_ring("Z") + Y_op(expr).to_ring("Z"))


def half_value(expr: DiagramExpr, connected: bool = False) -> HalfValue:
    """(id⊗½)∘δ on connected input, (id⊗½)∘(δ+𝕐) otherwise."""
    return half_delta(expr) if connected else half_delta_plus_Y(expr)


# ---------------------------------------------------------------- per-color identities


def _restricted_matchings(x: Diagram, y: Diagram, i: int):
    plus = [k for k, lab in enumerate(x.labels) if label_index(lab) == i and label_is_plus(lab)]
    minus = [k for k, lab in enumerate(y.labels) if label_index(lab) == i and not label_is_plus(lab)]
    return plus, minus, list(_matchings(plus, minus, complete=False))


def _glued_after(x: Diagram, y: Diagram, beta, side: int, op, legs_args) -> Diagram:
    ed, (lx, ly) = _editor_of(x, y)
    own = lx if side == 0 else ly
    op(ed, *[own[a] for a in legs_args])
    for a, b in beta:
        _glue(ed, lx[a], ly[b])
    return ed.build()


def leibniz_rhs_terms(x: Diagram, y: Diagram, i: int, which: str) -> DiagramExpr:
    """Right-hand sides of the three per-color identities.

    ``which`` is "split" (δ^{i+} on x, δ^{i-} on y), "plus" (δ^{i+} of the product)
    or "minus" (δ^{i-} of the product).
    """
    plus, minus, betas = _restricted_matchings(x, y, i)
    out = DiagramExpr(ring="Z2")
    use_x = which in ("split", "plus")
    use_y = which in ("split", "minus")
    for beta in betas:
        used_x = {a for a, _ in beta}
        used_y = {b for _, b in beta}
        free_x = [a for a in plus if a not in used_x]
        free_y = [b for b in minus if b not in used_y]
        if use_x:
            for a in free_x:
                for op in (_double_leg, _branch_leg):
                    out.add_diagram(_glued_after(x, y, beta, 0, op, (a,)))
            for a, a2 in itertools.combinations(free_x, 2):
                out.add_diagram(_glued_after(x, y, beta, 0, _fuse_legs, (a, a2)))
        if use_y:
            for b in free_y:
                for op in (_double_leg, _branch_leg):
                    out.add_diagram(_glued_after(x, y, beta, 1, op, (b,)))
            for b, b2 in itertools.combinations(free_y, 2):
                out.add_diagram(_glued_after(x, y, beta, 1, _fuse_legs, (b, b2)))
    return out


def leibniz_lhs_terms(x: DiagramExpr, y: DiagramExpr, i: int, which: str) -> DiagramExpr:
    from .diagram import make_label

    ip, im = make_label(i, True), make_label(i, False)
    if which == "split":
        return star_i(delta_at_color(x, ip), y, i) + star_i(x, delta_at_color(y, im), i)
    if which == "plus":
        return delta_at_color(star_i(x, y, i), ip) + star_i(x, delta_at_color(y, ip), i)
    if which == "minus":
        return delta_at_color(star_i(x, y, i), im) + star_i(delta_at_color(x, im), y, i)
    raise ValueError(which)


def mod2_equal(a: DiagramExpr, b: DiagramExpr) -> bool:
    return nf_mod2(a.to_ring("Z2") + b.to_ring("Z2")) == frozenset()
