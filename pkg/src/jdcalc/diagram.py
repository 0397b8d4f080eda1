"""Jacobi diagrams: storage, metrics, canonical classes with orientation signs.

A diagram with ``t`` trivalent vertices and ``m`` legs is stored as a
half-edge involution.  Half-edges ``3v, 3v+1, 3v+2`` belong to vertex ``v``
and their numbering order *is* the cyclic order at ``v``.  Half-edge
``3t + i`` is the single half-edge of leg ``i``.  ``mate[h]`` is the other
half of the edge through ``h``.

Labels are small integers: ``2*(i-1)`` is ``i+`` and ``2*(i-1)+1`` is ``i-``,
so the involution ``*`` is ``label ^ 1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

# ---------------------------------------------------------------- labels


def make_label(index: int, plus: bool) -> int:
    if index < 1:
        raise ValueError(f"label index must be positive, got {index}")
    return 2 * (index - 1) + (0 if plus else 1)


def label_index(label: int) -> int:
    return label // 2 + 1


def label_is_plus(label: int) -> bool:
    return label % 2 == 0


def star(label: int) -> int:
    return label ^ 1


def label_str(label: int) -> str:
    return f"{label // 2 + 1}{'+' if label % 2 == 0 else '-'}"


_LABEL_RE = re.compile(r"^\s*(\d+)\s*([+-])\s*$")


def parse_label(text: str, genus: int | None = None) -> int:
    m = _LABEL_RE.match(text)
    if not m:
        raise ValueError(f"malformed label {text!r}")
    idx = int(m.group(1))
    if idx < 1 or (genus is not None and idx > genus):
        raise ValueError(f"label {text.strip()!r} outside genus range 1..{genus}")
    return make_label(idx, m.group(2) == "+")


def all_labels(genus: int) -> list[int]:
    return list(range(2 * genus))


# ---------------------------------------------------------------- diagrams


class DiagramError(ValueError):
    pass


class Diagram:
    """Immutable uni-trivalent graph with cyclic orders and colored legs."""

    __slots__ = ("t", "mate", "labels", "_hash")

    def __init__(self, t: int, mate: Sequence[int], labels: Sequence[int], check: bool = True):
        self.t = t
        self.mate = tuple(mate)
        self.labels = tuple(labels)
        self._hash = None
        if check:
            self._validate()

    def _validate(self) -> None:
        n = 3 * self.t + len(self.labels)
        if len(self.mate) != n:
            raise DiagramError("half-edge table has the wrong length")
        if n % 2:
            raise DiagramError("3*trivalent + legs must be even")
        for h, k in enumerate(self.mate):
            if not 0 <= k < n or k == h or self.mate[k] != h:
                raise DiagramError(f"half-edge {h} is not properly paired")
        for lab in self.labels:
            if lab < 0:
                raise DiagramError("negative label")

    # -- basic accessors
    @property
    def legs(self) -> int:
        return len(self.labels)

    @property
    def n_half(self) -> int:
        return 3 * self.t + len(self.labels)

    def leg_half(self, i: int) -> int:
        return 3 * self.t + i

    def is_leg_half(self, h: int) -> bool:
        return h >= 3 * self.t

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Diagram)
            and self.t == other.t
            and self.mate == other.mate
            and self.labels == other.labels
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.t, self.mate, self.labels))
        return self._hash

    def __repr__(self) -> str:
        return f"Diagram(t={self.t}, mate={self.mate}, labels={[label_str(x) for x in self.labels]})"

    # -- structure
    def has_self_loop(self) -> bool:
        n3 = 3 * self.t
        for h in range(n3):
            k = self.mate[h]
            if k < n3 and k // 3 == h // 3:
                return True
        return False

    def components(self) -> list[tuple[list[int], list[int]]]:
        """Connected components as (vertex list, leg list), ordered by first element."""
        n3 = 3 * self.t
        n = n3 + len(self.labels)
        node = [h // 3 if h < n3 else self.t + (h - n3) for h in range(n)]
        parent = list(range(self.t + len(self.labels)))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for h in range(n):
            a, b = find(node[h]), find(node[self.mate[h]])
            if a != b:
                parent[max(a, b)] = min(a, b)
        groups: dict[int, tuple[list[int], list[int]]] = {}
        for x in range(self.t + len(self.labels)):
            r = find(x)
            g = groups.setdefault(r, ([], []))
            if x < self.t:
                g[0].append(x)
            else:
                g[1].append(x - self.t)
        return [groups[r] for r in sorted(groups)]

    def sub(self, vertices: Sequence[int], legs: Sequence[int]) -> "Diagram":
        """Restriction to a union of components, renumbered."""
        vmap = {v: i for i, v in enumerate(vertices)}
        lmap = {l: i for i, l in enumerate(legs)}
        t = len(vertices)
        n3 = 3 * self.t

        def tr(h: int) -> int:
            if h < n3:
                return 3 * vmap[h // 3] + h % 3
            return 3 * t + lmap[h - n3]

        mate = [0] * (3 * t + len(legs))
        for v in vertices:
            for s in range(3):
                mate[tr(3 * v + s)] = tr(self.mate[3 * v + s])
        for l in legs:
            mate[tr(n3 + l)] = tr(self.mate[n3 + l])
        return Diagram(t, mate, [self.labels[l] for l in legs], check=False)

    def split(self) -> list["Diagram"]:
        return [self.sub(vs, ls) for vs, ls in self.components()]

    def relabel(self, f) -> "Diagram":
        return Diagram(self.t, self.mate, [f(x) for x in self.labels], check=False)

    def reversed_at(self, v: int) -> "Diagram":
        """Same graph with the cyclic order at vertex ``v`` reversed."""
        perm = list(range(self.n_half))
        perm[3 * v + 1], perm[3 * v + 2] = perm[3 * v + 2], perm[3 * v + 1]
        return self.permuted(perm)

    def permuted(self, perm: Sequence[int]) -> "Diagram":
        """Rename half-edge h to perm[h] (perm fixes the vertex/leg blocks)."""
        mate = [0] * self.n_half
        for h, k in enumerate(self.mate):
            mate[perm[h]] = perm[k]
        return Diagram(self.t, mate, self.labels, check=False)


def disjoint_union(*parts: Diagram) -> Diagram:
    t = sum(p.t for p in parts)
    labels: list[int] = []
    vbase = 0
    lbase = 0
    mate: list[int] = [0] * (3 * t + sum(p.legs for p in parts))
    for p in parts:
        n3 = 3 * p.t

        def tr(h: int, vb=vbase, lb=lbase, n3=n3) -> int:
            return 3 * vb + h if h < n3 else 3 * t + lb + (h - n3)

        for h, k in enumerate(p.mate):
            mate[tr(h)] = tr(k)
        labels.extend(p.labels)
        vbase += p.t
        lbase += p.legs
    return Diagram(t, mate, labels, check=False)


EMPTY = Diagram(0, (), ())


# ---------------------------------------------------------------- editing


class Editor:
    """Mutable half-edge graph used to build new diagrams from old ones."""

    def __init__(self) -> None:
        self.verts: list[list[int]] = []
        self.mate: dict[int, int] = {}
        self.leg_label: dict[int, int] = {}
        self.leg_order: list[int] = []
        self._next = 0

    def new_half(self) -> int:
        self._next += 1
        return self._next - 1

    def add_vertex(self) -> list[int]:
        hs = [self.new_half() for _ in range(3)]
        self.verts.append(hs)
        return hs

    def add_leg(self, label: int) -> int:
        h = self.new_half()
        self.leg_label[h] = label
        self.leg_order.append(h)
        return h

    def join(self, a: int, b: int) -> None:
        self.mate[a] = b
        self.mate[b] = a

    def remove_leg(self, h: int) -> int:
        """Delete leg half-edge ``h``; returns its former partner, now unpaired."""
        p = self.mate.pop(h)
        del self.mate[p]
        del self.leg_label[h]
        self.leg_order.remove(h)
        return p

    def insert(self, d: Diagram) -> tuple[list[int], list[int]]:
        """Copy ``d`` in; returns new ids of its half-edges and of its legs."""
        ids = [self.new_half() for _ in range(d.n_half)]
        for v in range(d.t):
            self.verts.append([ids[3 * v], ids[3 * v + 1], ids[3 * v + 2]])
        for h, k in enumerate(d.mate):
            self.mate[ids[h]] = ids[k]
        legs = []
        for i, lab in enumerate(d.labels):
            h = ids[3 * d.t + i]
            self.leg_label[h] = lab
            self.leg_order.append(h)
            legs.append(h)
        return ids, legs

    def copy(self) -> "Editor":
        e = Editor()
        e.verts = [list(v) for v in self.verts]
        e.mate = dict(self.mate)
        e.leg_label = dict(self.leg_label)
        e.leg_order = list(self.leg_order)
        e._next = self._next
        return e

    def is_leg(self, h: int) -> bool:
        return h in self.leg_label

    def vertex_of(self, h: int) -> int:
        for i, hs in enumerate(self.verts):
            if h in hs:
                return i
        raise KeyError(h)

    def build(self) -> Diagram:
        t = len(self.verts)
        pos: dict[int, int] = {}
        for i, hs in enumerate(self.verts):
            for s, h in enumerate(hs):
                pos[h] = 3 * i + s
        for j, h in enumerate(self.leg_order):
            pos[h] = 3 * t + j
        mate = [0] * len(pos)
        for h, p in pos.items():
            mate[p] = pos[self.mate[h]]
        return Diagram(t, mate, [self.leg_label[h] for h in self.leg_order])


# ---------------------------------------------------------------- builders


def tree_diagram(labels: Sequence[int]) -> Diagram:
    """Caterpillar T(a1,...,an): spine from a1 to an, a2..a(n-1) hanging above.

    With the picture drawn in the plane and orders read counterclockwise, the
    vertex carrying a_i has cyclic order (next, a_i, previous).
    """
    n = len(labels)
    if n < 3:
        raise DiagramError("T needs at least 3 labels")
    ed = Editor()
    legs = [ed.add_leg(x) for x in labels]
    spine = [ed.add_vertex() for _ in range(n - 2)]
    for i, (nxt, up, prv) in enumerate(spine):
        ed.join(up, legs[i + 1])
        ed.join(prv, legs[0] if i == 0 else spine[i - 1][0])
        if i == n - 3:
            ed.join(nxt, legs[-1])
    return ed.build()


def wheel_diagram(labels: Sequence[int]) -> Diagram:
    """One-loop wheel O(a1,...,an): legs placed clockwise around a circle.

    Each rim vertex has cyclic order (leg, toward the previous leg, toward the next leg).
    """
    n = len(labels)
    if n < 1:
        raise DiagramError("O needs at least 1 label")
    ed = Editor()
    legs = [ed.add_leg(x) for x in labels]
    rim = [ed.add_vertex() for _ in range(n)]
    for i, (out, to_prev, to_next) in enumerate(rim):
        ed.join(out, legs[i])
    for i in range(n):
        ed.join(rim[i][2], rim[(i + 1) % n][1])
    return ed.build()


def strut_diagram(a: int, b: int) -> Diagram:
    return Diagram(0, (1, 0), (a, b))


def theta_diagram(a: int, b: int) -> Diagram:
    """Theta graph with one leg on each of two of its three arcs."""
    ed = Editor()
    la, lb = ed.add_leg(a), ed.add_leg(b)
    top, bot, x, y = (ed.add_vertex() for _ in range(4))
    ed.join(top[0], x[0])
    ed.join(x[1], bot[0])
    ed.join(top[1], y[0])
    ed.join(y[1], bot[1])
    ed.join(top[2], bot[2])
    ed.join(x[2], la)
    ed.join(y[2], lb)
    return ed.build()


def _loop_degree(t: int, m: int) -> int:
    return (t - m) // 2 + 1


# ---------------------------------------------------------------- canonical form
#
# A component key is a tuple of ints.  For a component with trivalent
# vertices it lists, vertex by vertex in discovery order and slot by slot,
# what each half-edge is paired with: 3*j+s for slot s of vertex j, or
# -1-label for a leg.  A strut is the pair (-1-a, -1-b), a <= b.  A class key
# for a possibly disconnected diagram is the sorted tuple of component keys.


def _refine(t: int, mate: Sequence[int], labels: Sequence[int]) -> list[int]:
    n3 = 3 * t
    col = []
    for h in range(n3):
        k = mate[h]
        col.append(labels[k - n3] + 1 if k >= n3 else 0)
    ncls = len(set(col))
    while True:
        sig = []
        for h in range(n3):
            base = h - h % 3
            a, b = [col[base + s] for s in range(3) if base + s != h]
            k = mate[h]
            sig.append((col[h], col[k] if k < n3 else -1, (a, b) if a <= b else (b, a)))
        order = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [order[s] for s in sig]
        n = len(order)
        col = new
        if n == ncls:
            return col
        ncls = n


def _canon_connected(t: int, mate: Sequence[int], labels: Sequence[int]):
    """Return (key, parity set) for a connected component with t >= 1."""
    n3 = 3 * t
    col = _refine(t, mate, labels)
    lo = min(col)
    best: list | None = None
    parities: set[int] = set()

    def others(h: int) -> list[tuple[int, int]]:
        base = h - h % 3
        return [(base + s) for s in range(3) if base + s != h]

    def parity_of(order: tuple[int, int, int]) -> int:
        i0, i1 = order[0] % 3, order[1] % 3
        return 0 if (i1 - i0) % 3 == 1 else 1

    def run(order: list, where: dict, code: list, parity: int, pos: int) -> None:
        nonlocal best, parities
        while pos < n3:
            h = order[pos // 3][pos % 3]
            k = mate[h]
            if k >= n3:
                item = -1 - labels[k - n3]
            else:
                w = k // 3
                if k in where:
                    item = where[k]
                else:
                    x, y = others(k)
                    j = len(order)
                    if col[x] != col[y]:
                        if col[x] > col[y]:
                            x, y = y, x
                        choices = [(x, y)]
                    else:
                        choices = [(x, y), (y, x)]
                    item = 3 * j
                    code.append(item)
                    if best is not None and code > best[: len(code)]:
                        return
                    for x2, y2 in choices[1:]:
                        o2 = order + [(k, x2, y2)]
                        wh2 = dict(where)
                        wh2[k], wh2[x2], wh2[y2] = 3 * j, 3 * j + 1, 3 * j + 2
                        run(o2, wh2, list(code), parity ^ parity_of((k, x2, y2)), pos + 1)
                    x, y = choices[0]
                    order = order + [(k, x, y)]
                    where = dict(where)
                    where[k], where[x], where[y] = 3 * j, 3 * j + 1, 3 * j + 2
                    parity ^= parity_of((k, x, y))
                    pos += 1
                    continue
            code.append(item)
            if best is not None and code > best[: len(code)]:
                return
            pos += 1
        if best is None or code < best:
            best = code
            parities = {parity}
        elif code == best:
            parities.add(parity)

    for h0 in range(n3):
        if col[h0] != lo:
            continue
        x, y = others(h0)
        if col[x] != col[y]:
            if col[x] > col[y]:
                x, y = y, x
            choices = [(x, y)]
        else:
            choices = [(x, y), (y, x)]
        for x2, y2 in choices:
            o = [(h0, x2, y2)]
            run(o, {h0: 0, x2: 1, y2: 2}, [], parity_of((h0, x2, y2)), 0)
    return tuple(best), parities


_COMPONENT_CACHE: dict = {}


def canon_component(d: Diagram) -> tuple[tuple, int, bool]:
    """Canonical (key, sign, odd_automorphism) of a connected diagram."""
    cache_key = (d.t, d.mate, d.labels)
    hit = _COMPONENT_CACHE.get(cache_key)
    if hit is not None:
        return hit
    if d.t == 0:
        if d.legs != 2:
            raise DiagramError("a vertex-free component must be a strut")
        a, b = sorted(d.labels)
        res = ((-1 - a, -1 - b), 1, False)
    else:
        key, par = _canon_connected(d.t, d.mate, d.labels)
        sign = 0 if d.has_self_loop() else (1 if 0 in par else -1)
        res = (key, sign, len(par) == 2)
    if len(_COMPONENT_CACHE) > 2_000_000:
        _COMPONENT_CACHE.clear()
    _COMPONENT_CACHE[cache_key] = res
    return res


def decode_component(key: tuple) -> Diagram:
    """Canonical representative of a component key (sign +1 by construction)."""
    if len(key) == 2:
        return strut_diagram(-1 - key[0], -1 - key[1])
    t = len(key) // 3
    n3 = 3 * t
    labels: list[int] = []
    leg_at: dict[int, int] = {}
    for h, item in enumerate(key):
        if item < 0:
            leg_at[h] = len(labels)
            labels.append(-1 - item)
    mate = [0] * (n3 + len(labels))
    for h, item in enumerate(key):
        if item < 0:
            lh = n3 + leg_at[h]
            mate[h], mate[lh] = lh, h
        else:
            mate[h] = item
    return Diagram(t, mate, labels)


@dataclass(frozen=True)
class ComponentInfo:
    ideg: int
    legs: int
    loops: int
    labels: tuple


def component_info(key: tuple) -> ComponentInfo:
    if len(key) == 2:
        return ComponentInfo(0, 2, 0, tuple(sorted(-1 - x for x in key)))
    labs = tuple(sorted(-1 - x for x in key if x < 0))
    t = len(key) // 3
    return ComponentInfo(t, len(labs), _loop_degree(t, len(labs)), labs)


@dataclass(frozen=True)
class SignedClass:
    """Isomorphism class of a diagram together with the orientation sign."""

    key: tuple
    sign: int
    odd: bool

    @property
    def ideg(self) -> int:
        return sum(component_info(c).ideg for c in self.key)

    @property
    def components(self) -> tuple:
        return self.key

    @property
    def loop_degrees(self) -> tuple:
        return tuple(component_info(c).loops for c in self.key)

    @property
    def leg_multiset(self) -> tuple:
        return tuple(sorted(x for c in self.key for x in component_info(c).labels))

    @property
    def key_bytes(self) -> bytes:
        return repr(self.key).encode()


def canonicalize(d: Diagram) -> SignedClass:
    keys = []
    sign = 1
    odd = False
    for part in d.split():
        k, s, o = canon_component(part)
        keys.append(k)
        sign *= s
        odd = odd or o
    keys.sort()
    return SignedClass(tuple(keys), sign, odd)


def decode(key: tuple) -> Diagram:
    """Representative of a class key (disjoint union of component representatives)."""
    return disjoint_union(*[decode_component(c) for c in key])


_DECODE_CACHE: dict = {}


def decode_cached(key: tuple) -> Diagram:
    d = _DECODE_CACHE.get(key)
    if d is None:
        d = decode(key)
        _DECODE_CACHE[key] = d
    return d


# ---------------------------------------------------------------- metrics


@dataclass(frozen=True)
class Metrics:
    ideg: int
    loop_degrees: tuple
    leg_labels: tuple
    n_components: int
    strut_free: bool
    top_substantial: bool


def metrics(d: Diagram) -> Metrics:
    loops = []
    strut_free = True
    top = True
    for vs, ls in d.components():
        loops.append(_loop_degree(len(vs), len(ls)))
        if not vs:
            strut_free = False
            if all(label_is_plus(d.labels[i]) for i in ls):
                top = False
    return Metrics(d.t, tuple(loops), d.labels, len(loops), strut_free, top)


def internal_edges(d: Diagram) -> list[tuple[int, int]]:
    """Edges joining two distinct trivalent vertices, as (h, mate h) with h < mate."""
    n3 = 3 * d.t
    out = []
    for h in range(n3):
        k = d.mate[h]
        if h < k < n3 and h // 3 != k // 3:
            out.append((h, k))
    return out


def ihx_triple(d: Diagram, h: int) -> list[Diagram]:
    """The three diagrams of the IHX relation at the internal edge through ``h``.

    With u = (e, a, b) and w = (e', c, d) rotated so the edge comes first, the
    terms are u=(e,a,b) w=(e',c,d); u=(e,b,c) w=(e',a,d); u=(e,c,a) w=(e',b,d).
    Their sum vanishes in the diagram module.
    """
    k = d.mate[h]
    u, w = h // 3, k // 3
    ru = [h, 3 * u + (h + 1) % 3, 3 * u + (h + 2) % 3]
    rw = [k, 3 * w + (k + 1) % 3, 3 * w + (k + 2) % 3]
    a, b, c, dd = ru[1], ru[2], rw[1], rw[2]
    out = []
    for (x1, x2), (y1, y2) in (((a, b), (c, dd)), ((b, c), (a, dd)), ((c, a), (b, dd))):
        # slot contents for the two vertices; other vertices untouched
        slots = {3 * u: h, 3 * u + 1: x1, 3 * u + 2: x2, 3 * w: k, 3 * w + 1: y1, 3 * w + 2: y2}
        # position of each physical half-edge in the new diagram
        pos = list(range(d.n_half))
        for p, phys in slots.items():
            pos[phys] = p
        mate = [0] * d.n_half
        for phys, other in enumerate(d.mate):
            mate[pos[phys]] = pos[other]
        out.append(Diagram(d.t, mate, d.labels, check=False))
    return out


# ---------------------------------------------------------------- formal combinations

RINGS = ("Z", "Z2", "Q")


class DiagramExpr:
    """Finite formal combination of diagram classes.

    Keys are class keys (sorted tuples of component keys).  Coefficients live
    in ℤ, ℤ/2 or ℚ according to ``ring``.  Zero coefficients and sign-0
    classes are never stored.
    """

    __slots__ = ("terms", "ring")

    def __init__(self, terms: dict | None = None, ring: str = "Z"):
        if ring not in RINGS:
            raise ValueError(f"unknown coefficient ring {ring!r}")
        self.ring = ring
        self.terms: dict = {}
        for k, c in (terms or {}).items():
            self.add_key(k, c)

    def _norm(self, c):
        return c % 2 if self.ring == "Z2" else c

    def add_key(self, key: tuple, c) -> None:
        if not c:
            return
        v = self._norm(self.terms.get(key, 0) + c)
        if v:
            self.terms[key] = v
        else:
            self.terms.pop(key, None)

    def add_diagram(self, d: Diagram, c=1) -> None:
        sc = canonicalize(d)
        if sc.sign:
            self.add_key(sc.key, sc.sign * c)

    @classmethod
    def of(cls, d: Diagram, c=1, ring: str = "Z") -> "DiagramExpr":
        e = cls(ring=ring)
        e.add_diagram(d, c)
        return e

    @classmethod
    def from_diagrams(cls, ds: Iterable[Diagram], ring: str = "Z") -> "DiagramExpr":
        e = cls(ring=ring)
        for d in ds:
            e.add_diagram(d)
        return e

    def copy(self) -> "DiagramExpr":
        e = DiagramExpr(ring=self.ring)
        e.terms = dict(self.terms)
        return e

    def to_ring(self, ring: str) -> "DiagramExpr":
        return DiagramExpr(dict(self.terms), ring)

    def __add__(self, other: "DiagramExpr") -> "DiagramExpr":
        out = self.copy()
        if other.ring == "Z2" and out.ring != "Z2":
            out = out.to_ring("Z2")
        for k, c in other.terms.items():
            out.add_key(k, c)
        return out

    def __neg__(self) -> "DiagramExpr":
        return DiagramExpr({k: -c for k, c in self.terms.items()}, self.ring)

    def __sub__(self, other: "DiagramExpr") -> "DiagramExpr":
        return self + (-other)

    def __rmul__(self, c) -> "DiagramExpr":
        return DiagramExpr({k: c * v for k, v in self.terms.items()}, self.ring)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DiagramExpr) and self.ring == other.ring and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def items(self):
        return sorted(self.terms.items())

    def __repr__(self) -> str:
        return f"DiagramExpr({len(self.terms)} terms, ring={self.ring})"
