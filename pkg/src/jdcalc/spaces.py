"""Generators, relators and reduction for the modules of Jacobi diagrams.

Connected classes are grown from small shapes: every connected uni-trivalent
graph with a leg arises from a smaller one by subdividing an edge and hanging
a new leg there.  Legless graphs are enumerated directly from perfect
matchings.  Colorings are then applied and canonicalized.

Relations are local (AS, IHX, self-loop), so they never mix classes with
different i-deg, loop degree or leg multiset.  The IHX closure of a class is
therefore a finite *block*; zero tests inside a block are exact, which lets us
reduce expressions without enumerating a whole space.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .abelian import F2Basis, GroupElement, PresentedGroup, bits
from .diagram import (
    Diagram,
    DiagramExpr,
    all_labels,
    canon_component,
    component_info,
    decode,
    decode_component,
    ihx_triple,
    internal_edges,
    wheel_diagram,
)


class ResourceError(RuntimeError):
    """Requested computation exceeds the configured size caps."""


class FlavorError(ValueError):
    """A term does not belong to the requested space."""


# Largest i-deg for explicit enumeration, per genus.
IDEG_CAP = {1: 6, 2: 4, 3: 3}
LEG_CAP = 10


def ideg_cap(genus: int) -> int:
    return IDEG_CAP.get(genus, 2)


def check_bounds(genus: int, ideg: int, legs: int | None = None) -> None:
    if genus < 1:
        raise ValueError("genus must be at least 1")
    if ideg < 0:
        raise ValueError("i-deg must be nonnegative")
    if ideg > ideg_cap(genus):
        raise ResourceError(f"i-deg {ideg} exceeds the cap {ideg_cap(genus)} at genus {genus}")
    if legs is not None and legs > LEG_CAP:
        raise ResourceError(f"{legs} legs exceeds the cap {LEG_CAP}")


VARIANTS = ("full", "Y", "c", "ck", "cs", "period")


@dataclass(frozen=True)
class SpaceFlavor:
    """Which module: genus, i-deg and variant.

    ``loops`` is required for ``ck`` and ``cs``/``period`` (always 1 there);
    ``legs`` is required for ``full`` since struts make it infinitely
    generated otherwise.  For ``period`` the i-deg is the doubled one.
    """

    genus: int
    ideg: int
    variant: str = "c"
    loops: int | None = None
    legs: int | None = None

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.variant == "ck" and (self.loops is None or self.loops < 0):
            raise ValueError("variant ck needs loops >= 0")
        if self.variant == "full" and self.legs is None:
            raise ValueError("variant full needs a leg count")
        if self.variant == "period" and self.ideg % 2:
            raise ValueError("periodic wheels have even i-deg")

    def descriptor(self) -> str:
        parts = [f"g{self.genus}", f"n{self.ideg}", self.variant]
        if self.loops is not None:
            parts.append(f"k{self.loops}")
        if self.legs is not None:
            parts.append(f"m{self.legs}")
        return "-".join(parts)


# ---------------------------------------------------------------- shapes


def _sprout(d: Diagram, h: int) -> Diagram:
    """Subdivide the edge through ``h`` and hang a new leg at the new vertex."""
    t, m = d.t, d.legs
    n3 = 3 * t

    def tr(x: int) -> int:
        return x if x < n3 else x + 3

    k = d.mate[h]
    mate = [0] * (3 * (t + 1) + m + 1)
    for x, y in enumerate(d.mate):
        mate[tr(x)] = tr(y)
    a, b = tr(h), tr(k)
    new_leg = 3 * (t + 1) + m
    mate[a], mate[n3] = n3, a
    mate[b], mate[n3 + 1] = n3 + 1, b
    mate[n3 + 2], mate[new_leg] = new_leg, n3 + 2
    return Diagram(t + 1, mate, list(d.labels) + [0], check=False)


def _lollipop() -> Diagram:
    return Diagram(1, (3, 2, 1, 0), (0,))


def _legless(t: int) -> list[Diagram]:
    n = 3 * t
    if t == 0 or n % 2:
        return []
    if t > 4:
        raise ResourceError("legless shapes with more than 4 vertices are not enumerated")
    out = []

    def rec(free: list[int], mate: list[int]) -> None:
        if not free:
            d = Diagram(t, mate, (), check=False)
            if len(d.components()) == 1:
                out.append(d)
            return
        a = free[0]
        for i in range(1, len(free)):
            b = free[i]
            mate[a], mate[b] = b, a
            rec(free[1:i] + free[i + 1 :], mate)

    rec(list(range(n)), [0] * n)
    return out


def _shape_key(d: Diagram) -> tuple:
    if d.t == 0:
        return (-1, -1)
    return canon_component(d.relabel(lambda _: 0))[0]


@lru_cache(maxsize=None)
def shapes(t: int, m: int) -> tuple:
    """Connected uncolored shapes with ``t`` vertices and ``m`` legs, self-loops included."""
    if (3 * t + m) % 2:
        return ()
    if t == 0:
        return (Diagram(0, (1, 0), (0, 0)),) if m == 2 else ()
    if m == 0:
        found = {}
        for d in _legless(t):
            found.setdefault(_shape_key(d), decode_component(_shape_key(d)))
        return tuple(found[k] for k in sorted(found))
    found = {}
    if (t, m) == (1, 1):
        found[_shape_key(_lollipop())] = _lollipop()
    for d in shapes(t - 1, m - 1):
        seen = set()
        for h in range(d.n_half):
            k = d.mate[h]
            if k < h or (h, k) in seen:
                continue
            seen.add((h, k))
            e = _sprout(d, h)
            key = _shape_key(e)
            if key not in found:
                found[key] = decode_component(key) if e.t else e
    return tuple(found[k] for k in sorted(found))


def legs_for(t: int, loops: int) -> int:
    return t - 2 * loops + 2


@lru_cache(maxsize=None)
def connected_classes(genus: int, t: int, loops: int) -> tuple:
    """Sorted component keys of nonzero connected classes (legless ones excluded)."""
    m = legs_for(t, loops)
    if m < 1 or loops < 0:
        return ()
    labels = all_labels(genus)
    keys = set()
    for shape in shapes(t, m):
        if shape.has_self_loop():
            continue
        for col in itertools.product(labels, repeat=m):
            d = Diagram(shape.t, shape.mate, col, check=False)
            key, sign, _ = canon_component(d)
            if sign:
                keys.add(key)
    return tuple(sorted(keys))


def max_loops(t: int) -> int:
    return (t + 1) // 2


def connected_pool(genus: int, t: int) -> tuple:
    out: list = []
    for k in range(max_loops(t) + 1):
        out.extend(connected_classes(genus, t, k))
    return tuple(sorted(out))


# ---------------------------------------------------------------- relators and blocks


def _normalize(rel: dict) -> tuple:
    items = sorted((k, v) for k, v in rel.items() if v)
    if items and items[0][1] < 0:
        items = [(k, -v) for k, v in items]
    return tuple(items)


@lru_cache(maxsize=None)
def component_relators(ckey: tuple) -> tuple:
    """AS residue (2x for odd classes) and IHX relators touching ``ckey``."""
    if len(ckey) == 2:
        return ()
    d = decode_component(ckey)
    _, _, odd = canon_component(d)
    rels = set()
    if odd:
        rels.add(((ckey, 2),))
    for h, _ in internal_edges(d):
        rel: dict = {}
        for term in ihx_triple(d, h):
            key, s, _ = canon_component(term)
            if s:
                rel[key] = rel.get(key, 0) + s
        r = _normalize(rel)
        if r:
            rels.add(r)
    return tuple(sorted(rels))


class Block:
    """IHX closure of a connected class: a direct summand of the space it lives in."""

    def __init__(self, keys: Sequence[tuple], relators: Sequence[tuple]):
        self.keys = list(keys)
        self.index = {k: i for i, k in enumerate(self.keys)}
        self.relators = [{self.index[k]: v for k, v in r} for r in relators]
        self.tag = self.keys[0]
        self._f2: F2Basis | None = None
        self._group: PresentedGroup | None = None
        self._nf2: dict = {}
        self._free2: dict = {}

    def __len__(self) -> int:
        return len(self.keys)

    @property
    def group(self) -> PresentedGroup:
        if self._group is None:
            self._group = PresentedGroup(len(self.keys), self.relators, names=self.keys)
        return self._group

    def _echelon(self) -> "_Echelon":
        if self._f2 is None:
            ech = _Echelon()
            for r in self.relators:
                v = 0
                for i, c in r.items():
                    if c % 2:
                        v ^= 1 << i
                if v:
                    ech.add(v)
            self._f2 = ech
        return self._f2

    def nf2(self, key: tuple) -> tuple:
        """Normal form mod 2 of one class, as a tuple of atoms ``(tag, index)``."""
        hit = self._nf2.get(key)
        if hit is None:
            v = self._echelon().reduce(1 << self.index[key])
            hit = tuple((self.tag, i) for i in bits(v))
            self._nf2[key] = hit
        return hit

    def free2(self, key: tuple) -> tuple:
        """Free Smith coordinates mod 2 of one class, as atoms."""
        hit = self._free2.get(key)
        if hit is None:
            _, free = self.group.smith_coords({self.index[key]: 1})
            hit = tuple((self.tag, i) for i, c in enumerate(free) if c % 2)
            self._free2[key] = hit
        return hit


class _Echelon:
    """Row echelon form over GF(2) keyed by the highest set bit; reduction gives a unique normal form."""

    __slots__ = ("rows", "mask")

    def __init__(self) -> None:
        self.rows: dict[int, int] = {}
        self.mask = 0

    def reduce(self, v: int) -> int:
        rows, mask = self.rows, self.mask
        while True:
            m = v & mask
            if not m:
                return v
            v ^= rows[m.bit_length() - 1]

    def add(self, v: int) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        hb = v.bit_length() - 1
        self.rows[hb] = v
        self.mask |= 1 << hb
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


class BlockStore:
    """Lazily built IHX blocks, shared process-wide."""

    def __init__(self) -> None:
        self._block_of: dict = {}

    def block(self, ckey: tuple) -> Block:
        b = self._block_of.get(ckey)
        if b is not None:
            return b
        seen = {ckey}
        frontier = [ckey]
        rels = set()
        while frontier:
            nxt = []
            for k in frontier:
                for r in component_relators(k):
                    rels.add(r)
                    for k2, _ in r:
                        if k2 not in seen:
                            seen.add(k2)
                            nxt.append(k2)
            frontier = nxt
        b = Block(sorted(seen), sorted(rels))
        for k in seen:
            self._block_of[k] = b
        return b

    def clear(self) -> None:
        self._block_of.clear()


BLOCKS = BlockStore()


# ---------------------------------------------------------------- normal forms of expressions
#
# Elements of the strut-free module are polynomials in connected classes.  A
# normal form is a set of monomials (sorted tuples of atoms) taken mod 2.


def _expand(atom_lists: Sequence[tuple], acc: set) -> None:
    for combo in itertools.product(*atom_lists):
        mono = tuple(sorted(combo))
        if mono in acc:
            acc.remove(mono)
        else:
            acc.add(mono)


def _check_strut_free(key: tuple) -> None:
    for c in key:
        if len(c) == 2:
            raise FlavorError("struts are not allowed here")


def nf_mod2(expr: DiagramExpr) -> frozenset:
    """Normal form of ``expr`` in the strut-free module tensored with Z/2."""
    acc: set = set()
    for key, c in expr.terms.items():
        if c % 2 == 0:
            continue
        _check_strut_free(key)
        lists = [BLOCKS.block(ck).nf2(ck) for ck in key]
        if any(not x for x in lists):
            continue
        _expand(lists, acc)
    return frozenset(acc)


def nf_half(expr: DiagramExpr) -> frozenset:
    """Normal form of one half of ``expr`` in the strut-free module tensored with Q/Z.

    Torsion dies, so only free Smith coordinates mod 2 survive.
    """
    acc: set = set()
    for key, c in expr.terms.items():
        if c % 2 == 0:
            continue
        _check_strut_free(key)
        lists = [BLOCKS.block(ck).free2(ck) for ck in key]
        if any(not x for x in lists):
            continue
        _expand(lists, acc)
    return frozenset(acc)


def is_zero_mod2(expr: DiagramExpr) -> bool:
    return not nf_mod2(expr)


def is_zero_half(expr: DiagramExpr) -> bool:
    return not nf_half(expr)


def nf_integral(expr: DiagramExpr) -> dict:
    """Exact normal form over Z for connected expressions: block tag -> Smith coordinates."""
    per_block: dict = {}
    for key, c in expr.terms.items():
        if len(key) != 1:
            raise FlavorError("integral normal form needs connected terms")
        ck = key[0]
        if len(ck) == 2:
            continue
        b = BLOCKS.block(ck)
        vec = per_block.setdefault(b.tag, (b, {}))[1]
        i = b.index[ck]
        vec[i] = vec.get(i, 0) + c
    out = {}
    for tag, (b, vec) in per_block.items():
        tors, free = b.group.smith_coords(vec)
        if any(tors) or any(free):
            out[tag] = (tors, free)
    return out


def representative_mod2(nf: frozenset) -> DiagramExpr:
    """A diagram combination (coefficients mod 2) with the given mod-2 normal form."""
    out = DiagramExpr(ring="Z2")
    for mono in nf:
        comps = []
        for tag, i in mono:
            comps.append(BLOCKS.block(tag).keys[i])
        out.add_key(tuple(sorted(comps)), 1)
    return out


def representative_half(nf: frozenset) -> DiagramExpr:
    """Integral lift x with half-normal-form ``nf``; the Q/Z value is x/2."""
    out = DiagramExpr()
    for mono in nf:
        factors = []
        for tag, i in mono:
            b = BLOCKS.block(tag)
            free = [0] * b.group.rank
            free[i] = 1
            lift = b.group.lift([0] * len(b.group.torsion_factors), free)
            factors.append([(b.keys[j], c) for j, c in sorted(lift.items()) if c])
        for combo in itertools.product(*factors):
            coeff = 1
            for _, c in combo:
                coeff *= c
            out.add_key(tuple(sorted(k for k, _ in combo)), coeff)
    return DiagramExpr({k: v % 2 for k, v in out.terms.items()})


# ---------------------------------------------------------------- explicit presentations


@dataclass
class SpacePresentation:
    flavor: SpaceFlavor
    keys: list  # class keys, one per generator
    group: PresentedGroup
    index: dict
    ambient: "SpacePresentation | None" = None
    # for submodule flavors: generator images in the ambient space
    embedding: list | None = None

    def vector(self, expr: DiagramExpr) -> dict:
        """Generator coordinates of ``expr``; raises FlavorError for foreign terms."""
        if self.ambient is not None:
            raise FlavorError("submodule flavors reduce through their ambient space")
        vec: dict = {}
        for key, c in expr.terms.items():
            i = self.index.get(key)
            if i is None:
                raise FlavorError(f"term {key!r} is outside {self.flavor.descriptor()}: {_why_outside(key, self.flavor)}")
            vec[i] = vec.get(i, 0) + c
        return vec

    def reduce(self, expr: DiagramExpr) -> GroupElement:
        return self.group.element(self.vector(expr))


def _why_outside(key: tuple, flavor: SpaceFlavor) -> str:
    infos = [component_info(c) for c in key]
    ideg = sum(i.ideg for i in infos)
    if ideg != flavor.ideg:
        return f"i-deg {ideg} != {flavor.ideg}"
    if flavor.variant in ("c", "ck", "cs", "period") and len(key) != 1:
        return "not connected"
    if any(i.ideg == 0 for i in infos) and flavor.variant != "full":
        return "contains a strut"
    if flavor.variant == "ck" and infos[0].loops != flavor.loops:
        return f"loop degree {infos[0].loops} != {flavor.loops}"
    if flavor.variant == "full" and sum(i.legs for i in infos) != flavor.legs:
        return "wrong leg count"
    if any(x >= 2 * flavor.genus for i in infos for x in i.labels):
        return "label outside genus"
    return "not a generator (zero class?)"


def _multisets(pool_by_deg: dict, n: int, leg_target: int | None = None) -> list[tuple]:
    """Sorted tuples of component keys with total i-deg n (and total legs, if given)."""
    items = []
    for t, keys in pool_by_deg.items():
        for k in keys:
            items.append((t, component_info(k).legs, k))
    items.sort(key=lambda x: x[2])
    out = []

    def rec(start: int, remaining: int, legs: int, chosen: list) -> None:
        if remaining == 0 and (leg_target is None or legs == leg_target):
            if chosen:
                out.append(tuple(chosen))
        if leg_target is not None and legs >= leg_target:
            return
        for i in range(start, len(items)):
            t, m, k = items[i]
            if t > remaining:
                continue
            if leg_target is not None and legs + m > leg_target:
                continue
            if t == 0 and remaining == 0 and leg_target is None:
                continue
            chosen.append(k)
            rec(i, remaining - t, legs + m, chosen)
            chosen.pop()

    rec(0, n, 0, [])
    return sorted(set(out))


def enumerate_generators(flavor: SpaceFlavor) -> list[tuple]:
    """Ordered class keys generating the flavor (the multiset ones for Y/full)."""
    g, n, v = flavor.genus, flavor.ideg, flavor.variant
    check_bounds(g, n, flavor.legs)
    if v == "c":
        if n == 0:
            return [((-1 - a, -1 - b),) for a in all_labels(g) for b in all_labels(g) if a <= b]
        return [(k,) for k in connected_pool(g, n)]
    if v == "ck":
        if n == 0:
            return enumerate_generators(SpaceFlavor(g, 0, "c")) if flavor.loops == 0 else []
        return [(k,) for k in connected_classes(g, n, flavor.loops)]
    if v in ("cs", "period"):
        return [(k,) for k in connected_classes(g, n, 1)]
    if v == "Y":
        pool = {t: connected_pool(g, t) for t in range(1, n + 1)}
        return _multisets(pool, n) if n else [()]
    # full, with struts and a fixed number of legs
    pool = {t: connected_pool(g, t) for t in range(1, n + 1)}
    pool[0] = tuple(k for (k,) in enumerate_generators(SpaceFlavor(g, 0, "c")))
    if n == 0 and flavor.legs == 0:
        return [()]
    return _multisets(pool, n, flavor.legs)


_PRESENTATIONS: dict = {}


def presentation(flavor: SpaceFlavor, use_cache: bool = True) -> SpacePresentation:
    hit = _PRESENTATIONS.get(flavor)
    if hit is not None:
        return hit
    if use_cache:
        from . import cache

        loaded = cache.load_presentation(flavor)
        if loaded is not None:
            _PRESENTATIONS[flavor] = loaded
            return loaded
    pres = _build_presentation(flavor)
    _PRESENTATIONS[flavor] = pres
    if use_cache and pres.ambient is None:
        from . import cache

        cache.store_presentation(pres)
    return pres


def _connected_relators(keys: Sequence[tuple], index: dict) -> list[dict]:
    rels = set()
    for (ck,) in keys:
        for r in component_relators(ck):
            rels.add(r)
    out = []
    for r in sorted(rels):
        vec = {}
        for k, c in r:
            i = index.get((k,))
            if i is None:
                raise AssertionError("IHX left the space; closure assumption broken")
            vec[i] = c
        out.append(vec)
    return out


def _build_presentation(flavor: SpaceFlavor) -> SpacePresentation:
    keys = enumerate_generators(flavor)
    index = {k: i for i, k in enumerate(keys)}
    v = flavor.variant
    if v in ("c", "ck"):
        rels = _connected_relators(keys, index)
        return SpacePresentation(flavor, keys, PresentedGroup(len(keys), rels, names=keys), index)
    if v in ("cs", "period"):
        amb = presentation(SpaceFlavor(flavor.genus, flavor.ideg, "ck", loops=1))
        words = symmetric_words(flavor.genus, flavor.ideg) if v == "cs" else periodic_words(flavor.genus, flavor.ideg)
        elems = []
        seen = set()
        for w in words:
            vec = amb.vector(DiagramExpr.of(wheel_diagram(w)))
            t = tuple(sorted(vec.items()))
            if t not in seen:
                seen.add(t)
                elems.append(vec)
        sub = amb.group.subgroup(elems)
        return SpacePresentation(flavor, [], sub, {}, ambient=amb, embedding=elems)
    # multisets: lift component relators
    rels = set()
    for key in keys:
        for pos, ck in enumerate(key):
            if pos and key[pos - 1] == ck:
                continue
            rest = key[:pos] + key[pos + 1 :]
            for r in component_relators(ck):
                vec = {}
                for k2, c in r:
                    j = index[tuple(sorted(rest + (k2,)))]
                    vec[j] = vec.get(j, 0) + c
                t = _normalize(vec)
                if t:
                    rels.add(t)
    relvecs = [dict(r) for r in sorted(rels)]
    return SpacePresentation(flavor, keys, PresentedGroup(len(keys), relvecs, names=keys), index)


def reduce_expr(expr: DiagramExpr, flavor: SpaceFlavor) -> GroupElement:
    pres = presentation(flavor)
    if pres.ambient is not None:
        raise FlavorError("reduce through the ambient one-loop space")
    return pres.reduce(expr)


# ---------------------------------------------------------------- words for the one-loop submodules


def is_symmetric_word(w: Sequence[int]) -> bool:
    """True when the cyclic word is carried to itself by some reflection."""
    n = len(w)
    return any(all(w[(n - 1 - i) % n] == w[(k + i) % n] for i in range(n)) for k in range(n))


def symmetric_words(genus: int, n: int) -> list[tuple]:
    return [w for w in itertools.product(all_labels(genus), repeat=n) if is_symmetric_word(w)]


def periodic_words(genus: int, n2: int) -> list[tuple]:
    half = n2 // 2
    return [w + w for w in itertools.product(all_labels(genus), repeat=half)]


def classes_of(expr: DiagramExpr) -> Iterable[tuple]:
    return iter(sorted(expr.terms))


def diagram_of(key: tuple) -> Diagram:
    return decode(key)
