"""Free Lie and quasi-Lie algebras on H, bracket kernels and the maps tying them to diagrams.

Letters are diagram labels ``0 .. 2g-1``.  A rooted binary tree is either a
letter or a pair ``(left, right)`` meaning the bracket [left, right].

* L_n (free Lie) is represented inside the tensor algebra; coordinates are
  taken on the Lyndon basis by peeling off the lexicographically smallest
  word, which is always the leading word of a standard bracketing.
* L'_n (free quasi-Lie) is a presented group: rooted trees modulo
  antisymmetry and Jacobi, with no [x, x] = 0.  A tree with two equal
  sibling subtrees is 2-torsion there, not zero.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .abelian import F2Basis, GroupHom, PresentedGroup, WellDefinednessError, bits
from .diagram import (
    Diagram,
    DiagramExpr,
    Editor,
    all_labels,
    decode_cached,
    label_str,
    wheel_diagram,
)
from .spaces import SpaceFlavor, nf_half, nf_mod2, presentation

Tree = "int | tuple"


# ---------------------------------------------------------------- trees


def degree(t) -> int:
    return 1 if isinstance(t, int) else degree(t[0]) + degree(t[1])


def tree_key(t) -> tuple:
    if isinstance(t, int):
        return (1, t)
    return (degree(t), tree_key(t[0]), tree_key(t[1]))


def canon_tree(t) -> tuple:
    """Antisymmetry normal form: (tree, sign)."""
    if isinstance(t, int):
        return t, 1
    a, sa = canon_tree(t[0])
    b, sb = canon_tree(t[1])
    if tree_key(a) > tree_key(b):
        return (b, a), -sa * sb
    return (a, b), sa * sb


def has_square(t) -> bool:
    """True if some node brackets a subtree with itself."""
    if isinstance(t, int):
        return False
    return t[0] == t[1] or has_square(t[0]) or has_square(t[1])


def tree_str(t) -> str:
    if isinstance(t, int):
        return label_str(t)
    return f"[{tree_str(t[0])},{tree_str(t[1])}]"


@lru_cache(maxsize=None)
def canonical_trees(genus: int, n: int) -> tuple:
    """All antisymmetry-canonical rooted trees with n leaves, sorted."""
    if n == 1:
        return tuple(all_labels(genus))
    out = []
    for p in range(1, n // 2 + 1):
        for a in canonical_trees(genus, p):
            for b in canonical_trees(genus, n - p):
                if p < n - p or tree_key(a) <= tree_key(b):
                    out.append((a, b))
    return tuple(sorted(out, key=tree_key))


# ---------------------------------------------------------------- tensor algebra and L_n


def _add(acc: dict, vec: dict, c: int = 1) -> None:
    for k, v in vec.items():
        x = acc.get(k, 0) + c * v
        if x:
            acc[k] = x
        else:
            acc.pop(k, None)


def tensor_bracket(x: dict, y: dict) -> dict:
    out: dict = {}
    for u, a in x.items():
        for v, b in y.items():
            _add(out, {u + v: a * b})
            _add(out, {v + u: -a * b})
    return out


@lru_cache(maxsize=None)
def expand_tree(t) -> tuple:
    """Tensor-algebra expansion of a bracket tree, as sorted (word, coeff) pairs."""
    if isinstance(t, int):
        return (((t,), 1),)
    v = tensor_bracket(dict(expand_tree(t[0])), dict(expand_tree(t[1])))
    return tuple(sorted(v.items()))


def lyndon_words(q: int, n: int) -> list[tuple]:
    """Lyndon words of length n over 0..q-1 (Duval's algorithm), increasing."""
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m == n:
            out.append(tuple(w))
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == q - 1:
            w.pop()
    return out


def _is_lyndon(w: tuple) -> bool:
    return all(w < w[i:] + w[:i] for i in range(1, len(w))) if len(w) > 1 else True


@lru_cache(maxsize=None)
def standard_tree(w: tuple):
    """Standard bracketing of a Lyndon word: w = uv with v its longest proper Lyndon suffix."""
    if len(w) == 1:
        return w[0]
    for i in range(1, len(w)):
        if _is_lyndon(w[i:]):
            return (standard_tree(w[:i]), standard_tree(w[i:]))
    raise AssertionError("not a Lyndon word")


def witt_dimension(q: int, n: int) -> int:
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += _mobius(d) * q ** (n // d)
    return total // n


def _mobius(n: int) -> int:
    res = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            res = -res
        p += 1
    return -res if n > 1 else res


class FreeLie:
    """Degree-n part of the free Lie algebra on 2g letters."""

    def __init__(self, genus: int, n: int):
        self.genus, self.n = genus, n
        self.basis = lyndon_words(2 * genus, n)
        self.index = {w: i for i, w in enumerate(self.basis)}
        self.group = PresentedGroup(len(self.basis), [], names=self.basis)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def coords(self, x: dict) -> dict:
        """Lyndon coordinates of a tensor-algebra element; raises if it is not Lie."""
        x = dict(x)
        out = {}
        while x:
            w = min(x)
            c = x[w]
            i = self.index.get(w)
            if i is None:
                raise ValueError(f"element is not in the free Lie algebra (word {w})")
            out[i] = c
            _add(x, dict(expand_tree(standard_tree(w))), -c)
        return out

    def tree_coords(self, t) -> dict:
        return self.coords(dict(expand_tree(t)))

    def tree(self, i: int):
        return standard_tree(self.basis[i])


@lru_cache(maxsize=None)
def free_lie(genus: int, n: int) -> FreeLie:
    return FreeLie(genus, n)


# ---------------------------------------------------------------- quasi-Lie


def _replace(t, path: tuple, new):
    if not path:
        return new
    if path[0] == 0:
        return (_replace(t[0], path[1:], new), t[1])
    return (t[0], _replace(t[1], path[1:], new))


def _nodes(t, path=()):
    if isinstance(t, int):
        return
    yield path, t
    yield from _nodes(t[0], path + (0,))
    yield from _nodes(t[1], path + (1,))


def jacobi_terms(x, y, z) -> list:
    """[x,[y,z]], [y,[z,x]], [z,[x,y]]: their sum vanishes."""
    return [(x, (y, z)), (y, (z, x)), (z, (x, y))]


class QuasiLie:
    """Degree-n part of the free quasi-Lie algebra, presented by trees mod AS and Jacobi."""

    def __init__(self, genus: int, n: int):
        self.genus, self.n = genus, n
        self.trees = list(canonical_trees(genus, n))
        self.index = {t: i for i, t in enumerate(self.trees)}
        rels = set()
        for t in self.trees:
            if has_square(t):
                rels.add(((self.index[t], 2),))
            for path, node in _nodes(t):
                for outer, inner in ((node[0], node[1]), (node[1], node[0])):
                    if isinstance(inner, int):
                        continue
                    vec: dict = {}
                    for term in jacobi_terms(outer, inner[0], inner[1]):
                        c, s = canon_tree(_replace(t, path, term))
                        j = self.index[c]
                        vec[j] = vec.get(j, 0) + s
                    items = sorted((k, v) for k, v in vec.items() if v)
                    if items:
                        if items[0][1] < 0:
                            items = [(k, -v) for k, v in items]
                        rels.add(tuple(items))
        self.group = PresentedGroup(len(self.trees), [dict(r) for r in sorted(rels)], names=self.trees)

    def vec(self, t) -> dict:
        c, s = canon_tree(t)
        return {self.index[c]: s}


@lru_cache(maxsize=None)
def quasi_lie(genus: int, n: int) -> QuasiLie:
    return QuasiLie(genus, n)


@lru_cache(maxsize=None)
def gamma(genus: int, n: int) -> GroupHom:
    """L'_n → L_n, evaluating each tree as an honest bracket."""
    src, tgt = quasi_lie(genus, n), free_lie(genus, n)
    return GroupHom(src.group, tgt.group, [tgt.tree_coords(t) for t in src.trees])


def mod2_group(g: PresentedGroup) -> PresentedGroup:
    """g ⊗ ℤ/2 on the same generators."""
    return PresentedGroup(g.ngens, list(g.relators) + [{i: 2} for i in range(g.ngens)], g.names)


@lru_cache(maxsize=None)
def theta(genus: int, k: int) -> GroupHom:
    """L_k ⊗ ℤ/2 → L'_{2k}, T ↦ [T, T] on Lyndon trees."""
    src = mod2_group(free_lie(genus, k).group)
    tgt = quasi_lie(genus, 2 * k)
    fl = free_lie(genus, k)
    return GroupHom(src, tgt.group, [tgt.vec((fl.tree(i), fl.tree(i))) for i in range(fl.dimension)])


@lru_cache(maxsize=None)
def theta_quasi(genus: int, k: int) -> GroupHom:
    """L'_k ⊗ ℤ/2 → L'_{2k}, T ↦ [T, T] on all trees; the certificate checks additivity."""
    ql = quasi_lie(genus, k)
    tgt = quasi_lie(genus, 2 * k)
    return GroupHom(mod2_group(ql.group), tgt.group, [tgt.vec((t, t)) for t in ql.trees])


# ---------------------------------------------------------------- H ⊗ L and bracket kernels


class HTensor:
    """H ⊗ G for a presented group G given by generator names; generators (letter, i)."""

    def __init__(self, genus: int, inner: PresentedGroup):
        self.genus = genus
        self.inner = inner
        self.letters = all_labels(genus)
        m = inner.ngens
        self.gens = [(h, i) for h in self.letters for i in range(m)]
        rels = []
        for hi, _ in enumerate(self.letters):
            for r in inner.relators:
                rels.append({hi * m + i: c for i, c in r.items()})
        self.group = PresentedGroup(len(self.gens), rels, names=self.gens)

    def gen_index(self, h: int, i: int) -> int:
        return h * self.inner.ngens + i


@lru_cache(maxsize=None)
def h_tensor_lie(genus: int, n: int) -> HTensor:
    return HTensor(genus, free_lie(genus, n).group)


@lru_cache(maxsize=None)
def h_tensor_quasi(genus: int, n: int) -> HTensor:
    return HTensor(genus, quasi_lie(genus, n).group)


@lru_cache(maxsize=None)
def bracket_lie(genus: int, n: int) -> GroupHom:
    """H ⊗ L_{n+1} → L_{n+2}."""
    ht, fl, tgt = h_tensor_lie(genus, n + 1), free_lie(genus, n + 1), free_lie(genus, n + 2)
    return GroupHom(ht.group, tgt.group, [tgt.tree_coords((h, fl.tree(i))) for h, i in ht.gens])


@lru_cache(maxsize=None)
def bracket_quasi(genus: int, n: int) -> GroupHom:
    """H ⊗ L'_{n+1} → L'_{n+2}."""
    ht, ql, tgt = h_tensor_quasi(genus, n + 1), quasi_lie(genus, n + 1), quasi_lie(genus, n + 2)
    return GroupHom(ht.group, tgt.group, [tgt.vec((h, ql.trees[i])) for h, i in ht.gens])


@dataclass
class Kernel:
    group: PresentedGroup  # on the kernel generators
    ambient: PresentedGroup
    gens: list  # kernel generators in ambient coordinates


@lru_cache(maxsize=None)
def bracket_kernels(genus: int, n: int) -> tuple[Kernel, Kernel]:
    """(D_n, D'_n) as subgroups of H ⊗ L_{n+1} and H ⊗ L'_{n+1}."""
    out = []
    for hom in (bracket_lie(genus, n), bracket_quasi(genus, n)):
        kv = hom.kernel_vectors()
        out.append(Kernel(hom.source.subgroup(kv), hom.source, kv))
    return out[0], out[1]


@lru_cache(maxsize=None)
def h_gamma(genus: int, n: int) -> GroupHom:
    """id_H ⊗ γ_{n+1}: H ⊗ L'_{n+1} → H ⊗ L_{n+1}."""
    src, tgt = h_tensor_quasi(genus, n + 1), h_tensor_lie(genus, n + 1)
    g = gamma(genus, n + 1)
    m = tgt.inner.ngens
    images = []
    for h, i in src.gens:
        images.append({h * m + j: c for j, c in g.images[i].items()})
    return GroupHom(src.group, tgt.group, images)


# ---------------------------------------------------------------- trees as diagrams


def _grow(ed: Editor, t) -> int:
    """Insert rooted tree ``t``; return the dangling root half-edge.

    A node [A, B] becomes a vertex with cyclic order (root, B-side, A-side).
    """
    if isinstance(t, int):
        return ed.add_leg(t)
    r, x, y = ed.add_vertex()
    ed.join(x, _grow(ed, t[1]))
    ed.join(y, _grow(ed, t[0]))
    return r


def rooted_to_diagram(letter: int, t) -> Diagram:
    """The tree diagram with a leg ``letter`` at the root of ``t``."""
    ed = Editor()
    ed.join(ed.add_leg(letter), _grow(ed, t))
    return ed.build()


def doubled_tree(t, letter: int | None = None) -> Diagram:
    """T-T (roots joined), or T-x-T with a middle leg when ``letter`` is given."""
    ed = Editor()
    r1, r2 = _grow(ed, t), _grow(ed, t)
    if letter is None:
        ed.join(r1, r2)
    else:
        c0, c1, c2 = ed.add_vertex()
        ed.join(c0, ed.add_leg(letter))
        ed.join(c1, r1)
        ed.join(c2, r2)
    return ed.build()


def _rooted_at(d: Diagram, leg: int):
    """Rooted tree seen from leg ``leg``: at a vertex reached through r with order (r,x,y), [y,x]."""
    n3 = 3 * d.t

    def walk(h: int):
        # h is a half-edge at a vertex, reached from outside
        if h >= n3:
            return d.labels[h - n3]
        v = h // 3
        x = 3 * v + (h + 1) % 3
        y = 3 * v + (h + 2) % 3
        return (walk(d.mate[y]), walk(d.mate[x]))

    return walk(d.mate[n3 + leg])


def eta_prime_vec(expr: DiagramExpr, genus: int, n: int) -> dict:
    """η′ of a tree combination, in generator coordinates of H ⊗ L'_{n+1}."""
    ht = h_tensor_quasi(genus, n + 1)
    ql = quasi_lie(genus, n + 1)
    out: dict = {}
    for key, c in expr.items():
        d = decode_cached(key)
        if len(key) != 1 or d.t != n or d.legs != n + 2:
            raise ValueError("η′ takes connected trees of the given i-deg")
        for v in range(d.legs):
            t = _rooted_at(d, v)
            ct, s = canon_tree(t)
            _add(out, {ht.gen_index(d.labels[v], ql.index[ct]): s * c})
    return out


@lru_cache(maxsize=None)
def eta_prime(genus: int, n: int) -> GroupHom:
    """𝒜^c_{n,0} → H ⊗ L'_{n+1}."""
    pres = presentation(SpaceFlavor(genus, n, "ck", loops=0))
    ht = h_tensor_quasi(genus, n + 1)
    images = [eta_prime_vec(DiagramExpr({k: 1}), genus, n) for k in pres.keys]
    return GroupHom(pres.group, ht.group, images)


@lru_cache(maxsize=None)
def eta(genus: int, n: int) -> GroupHom:
    """(id ⊗ γ_{n+1}) ∘ η′ : 𝒜^c_{n,0} → H ⊗ L_{n+1}."""
    return h_gamma(genus, n).compose(eta_prime(genus, n))


def eta_prime_is_iso_onto_kernel(genus: int, n: int) -> dict:
    """Checks that η′ is injective with image exactly D'_n."""
    ep = eta_prime(genus, n)
    br = bracket_quasi(genus, n)
    lands = all(br.target.is_zero(br.apply_vec(im)) for im in ep.images)
    injective = ep.is_injective()
    _, dq = bracket_kernels(genus, n)
    quot = ep.target.quotient(ep.images)
    onto = all(quot.is_zero(v) for v in dq.gens)
    return {"lands_in_kernel": lands, "injective": injective, "onto_kernel": onto}


# ---------------------------------------------------------------- sq, ξ, ν, sq-bar, sl


@lru_cache(maxsize=None)
def h_lie_mod2(genus: int, k: int) -> PresentedGroup:
    return mod2_group(h_tensor_lie(genus, k).group)


@lru_cache(maxsize=None)
def sq_diagrams(genus: int, k: int) -> list[DiagramExpr]:
    """η′⁻¹∘sq on the basis x ⊗ P(w) of (H ⊗ L_k) ⊗ ℤ/2: the diagram T-x-T."""
    ht, fl = h_tensor_lie(genus, k), free_lie(genus, k)
    return [DiagramExpr.of(doubled_tree(fl.tree(i), h)) for h, i in ht.gens]


@lru_cache(maxsize=None)
def sq_hom(genus: int, k: int) -> GroupHom:
    """(H ⊗ L_k) ⊗ ℤ/2 → 𝒜^c_{2k-1,0}."""
    pres = presentation(SpaceFlavor(genus, 2 * k - 1, "ck", loops=0))
    return GroupHom(h_lie_mod2(genus, k), pres.group, [pres.vector(e) for e in sq_diagrams(genus, k)])


@lru_cache(maxsize=None)
def sq_to_quasi(genus: int, k: int) -> GroupHom:
    """sq on the Lie side: x ⊗ T ↦ x ⊗ [T, T] in H ⊗ L'_{2k}."""
    ht, fl = h_tensor_lie(genus, k), free_lie(genus, k)
    tgt = h_tensor_quasi(genus, 2 * k)
    ql = quasi_lie(genus, 2 * k)
    images = []
    for h, i in ht.gens:
        t = fl.tree(i)
        c, s = canon_tree((t, t))
        images.append({tgt.gen_index(h, ql.index[c]): s})
    return GroupHom(h_lie_mod2(genus, k), tgt.group, images)


def xi_word(word: Sequence[int]) -> DiagramExpr:
    """ξ(a0 ⊗ a1 ⊗ … ⊗ ak) = O(a0, a1, …, ak, …, a1)."""
    w = list(word)
    full = w + w[-2:0:-1]
    return DiagramExpr.of(wheel_diagram(full), ring="Z2")


def xi_of_lie(genus: int, k: int, h: int, i: int) -> DiagramExpr:
    """ξ on x ⊗ P(w), expanding P(w) in the tensor algebra mod 2."""
    out = DiagramExpr(ring="Z2")
    for word, c in expand_tree(free_lie(genus, k).tree(i)):
        if c % 2:
            out = out + xi_word((h,) + word)
    return out


def nu_value(t) -> frozenset:
    """Normal form of ν(T) = ½(T-T) in 𝒜^c_{2k,0} ⊗ ℚ/ℤ."""
    if isinstance(t, int):
        raise ValueError("ν needs a tree with at least two leaves")
    return nf_half(DiagramExpr.of(doubled_tree(t)))


def nu_matrix(genus: int, k: int) -> list[int]:
    """ν on the Lyndon basis of L_{k+1} ⊗ ℤ/2, as bitsets over the monomials seen."""
    fl = free_lie(genus, k + 1)
    vals = [nu_value(fl.tree(i)) for i in range(fl.dimension)]
    return _bitsets(vals)


def _bitsets(vals: Sequence[frozenset]) -> list[int]:
    atoms: dict = {}
    for v in vals:
        for a in sorted(v):
            atoms.setdefault(a, len(atoms))
    out = []
    for v in vals:
        b = 0
        for a in v:
            b |= 1 << atoms[a]
        out.append(b)
    return out


def nu_certificate(genus: int, k: int) -> list[int]:
    """Indices of L'_{k+1} relators on which ν (extended additively) fails to vanish."""
    ql = quasi_lie(genus, k + 1)
    vals = [nu_value(t) for t in ql.trees]
    bad = []
    for idx, r in enumerate(ql.group.relators):
        acc: set = set()
        for i, c in r.items():
            if c % 2:
                acc ^= set(vals[i])
        if acc:
            bad.append(idx)
    return bad


def nu_kills_theta(genus: int, k: int) -> bool:
    """ν([T, T]) = 0 for every tree T of L'_m with 2m = k + 1 (vacuous for even k)."""
    if (k + 1) % 2:
        return True
    return all(not nu_value((t, t)) for t in quasi_lie(genus, (k + 1) // 2).trees)


def _f2_solve(columns: Sequence[int], target: int) -> int | None:
    """Bitset of columns summing to ``target`` over GF(2), or None."""
    basis: dict[int, tuple[int, int]] = {}
    for j, col in enumerate(columns):
        v, comb = col, 1 << j
        while v:
            hb = v.bit_length() - 1
            if hb not in basis:
                basis[hb] = (v, comb)
                break
            bv, bc = basis[hb]
            v ^= bv
            comb ^= bc
    v, comb = target, 0
    while v:
        hb = v.bit_length() - 1
        if hb not in basis:
            return None
        bv, bc = basis[hb]
        v ^= bv
        comb ^= bc
    return comb


@dataclass
class SqBar:
    hom: GroupHom  # L'_{k+1} ⊗ ℤ/2 → 𝒜^c_{2k-1,0} / Im Δ_{k-1,0}
    preimages: list  # per tree of L'_{k+1}: bitset over the basis of H ⊗ L_k

    def is_iso_onto_torsion(self) -> bool:
        """Injective, with image the whole torsion subgroup of the target.

        Im Δ is torsion, so tor(𝒜)/Im Δ is the torsion of the quotient.
        """
        if not self.hom.is_injective():
            return False
        order = 1
        for f in self.hom.target.torsion_factors:
            order *= f
        return order == 2 ** self.hom.source.mod2_dimension()


@lru_cache(maxsize=None)
def sq_bar(genus: int, k: int) -> SqBar:
    """Factor η′⁻¹∘sq through the bracket (H ⊗ L_k) ⊗ ℤ/2 → L'_{k+1} ⊗ ℤ/2.

    Each tree of L'_{k+1} gets a preimage under the bracket mod 2; the
    certificate then checks that relators of L'_{k+1} ⊗ ℤ/2 land in Im Δ.
    """
    from .operators import Delta

    ht, fl = h_tensor_lie(genus, k), free_lie(genus, k)
    ql = quasi_lie(genus, k + 1)
    q2 = ql.group
    cols = [q2.mod2_coords(ql.vec((h, fl.tree(i)))) for h, i in ht.gens]
    pres = presentation(SpaceFlavor(genus, 2 * k - 1, "ck", loops=0))
    if k == 1:
        deltas = [pres.vector(Delta(DiagramExpr({((-1 - a, -1 - b),): 1})))
                  for a in all_labels(genus) for b in all_labels(genus) if a <= b]
    else:
        src = presentation(SpaceFlavor(genus, k - 1, "ck", loops=0))
        deltas = [pres.vector(Delta(DiagramExpr({key: 1}))) for key in src.keys]
    target = pres.group.quotient(deltas)
    sqv = [pres.vector(e) for e in sq_diagrams(genus, k)]
    images, pre = [], []
    for t in ql.trees:
        comb = _f2_solve(cols, q2.mod2_coords(ql.vec(t)))
        if comb is None:
            raise WellDefinednessError(f"tree {tree_str(t)} has no preimage under the bracket")
        pre.append(comb)
        img: dict = {}
        for j in bits(comb):
            _add(img, sqv[j])
        images.append(img)
    return SqBar(GroupHom(mod2_group(q2), target, images), pre)


@dataclass
class SlIdent:
    hom: GroupHom  # L_{k+1} ⊗ ℤ/2 → (H ⊗ L_{2k+1}) / η(𝒜^c_{2k,0})
    d_image: list  # generators of D_{2k} in the same quotient


@lru_cache(maxsize=None)
def sl_ident(genus: int, k: int) -> SlIdent:
    """T ↦ class of ½η(T-T) modulo η(𝒜^c_{2k,0})."""
    et = eta(genus, 2 * k)
    quot = et.target.quotient(et.images)
    fl = free_lie(genus, k + 1)
    pres = presentation(SpaceFlavor(genus, 2 * k, "ck", loops=0))
    images = []
    for i in range(fl.dimension):
        v = et.apply_vec(pres.vector(DiagramExpr.of(doubled_tree(fl.tree(i)))))
        if any(c % 2 for c in v.values()):
            raise WellDefinednessError("η of a doubled tree is not divisible by 2")
        images.append({j: c // 2 for j, c in v.items()})
    dk, _ = bracket_kernels(genus, 2 * k)
    return SlIdent(GroupHom(mod2_group(fl.group), quot, images), dk.gens)


def periodic_inclusion(genus: int, m: int) -> list[tuple]:
    """Push each Lyndon basis tree v of L_m through θ, sq-bar and δ″.

    Returns (v, computed, expected) mod-2 normal forms, where ``expected`` is the
    sum of wheels O(uu) over words u in the expansion of v, with u a
    half-palindrome a1…am am…a2.  Equality means the composite lands in the
    symmetric periodic part and matches the inclusion L_m → H^{⊗m}.
    """
    from .operators import delta_double_prime

    k = 2 * m - 1
    sb = sq_bar(genus, k)
    ql = quasi_lie(genus, k + 1)
    sqd = sq_diagrams(genus, k)
    fl = free_lie(genus, m)
    out = []
    for i in range(fl.dimension):
        v = fl.tree(i)
        c, _ = canon_tree((v, v))
        d = DiagramExpr(ring="Z2")
        for j in bits(sb.preimages[ql.index[c]]):
            d = d + sqd[j].to_ring("Z2")
        computed = nf_mod2(delta_double_prime(d))
        exp = DiagramExpr(ring="Z2")
        for word, coeff in expand_tree(v):
            if coeff % 2:
                u = tuple(word) + tuple(word[:0:-1])
                exp.add_diagram(wheel_diagram(u + u))
        out.append((v, computed, nf_mod2(exp)))
    return out


@dataclass
class TreeKernel:
    torsion_dim: int
    kernel_dim: int  # dim of Ker((id⊗½)∘δ) inside the torsion
    delta_image_dim: int
    delta_in_kernel: bool  # Im Δ ⊂ tor and (id⊗½)∘δ kills it
    kernel_in_delta: bool  # every kernel element vanishes modulo Im Δ

    @property
    def equal(self) -> bool:
        return self.delta_in_kernel and self.kernel_in_delta


def _delta_source_images(genus: int, k: int, pres) -> list[dict]:
    from .operators import Delta

    if k == 1:
        exprs = [DiagramExpr({((-1 - a, -1 - b),): 1}) for a in all_labels(genus) for b in all_labels(genus) if a <= b]
    else:
        src = presentation(SpaceFlavor(genus, k - 1, "ck", loops=0))
        exprs = [DiagramExpr({key: 1}) for key in src.keys]
    return [pres.vector(Delta(e)) for e in exprs]


def tree_kernel(genus: int, k: int) -> TreeKernel:
    """Compare Ker((id⊗½)∘δ on tor 𝒜^c_{2k-1,0}) with Im Δ_{k-1,0} as subgroups.

    The torsion basis comes straight from the Smith form, not from sq.
    """
    from .operators import half_delta

    pres = presentation(SpaceFlavor(genus, 2 * k - 1, "ck", loops=0))
    grp = pres.group
    facs = grp.torsion_factors
    if any(f != 2 for f in facs):
        raise WellDefinednessError("torsion is not elementary abelian of exponent 2")
    r, nfree = len(facs), grp.rank

    def as_expr(vec: dict) -> DiagramExpr:
        return DiagramExpr({pres.keys[i]: c for i, c in vec.items() if c})

    basis = [grp.lift([1 if j == i else 0 for j in range(r)], [0] * nfree) for i in range(r)]
    halves = _bitsets([half_delta(as_expr(v)).nf for v in basis])
    from .abelian import f2_kernel

    kernel = []
    for comb in f2_kernel(halves):
        vec: dict = {}
        for i in bits(comb):
            _add(vec, basis[i])
        kernel.append(vec)
    dvecs = _delta_source_images(genus, k, pres)
    delta_in = all(grp.is_zero({i: 2 * c for i, c in v.items()}) and half_delta(as_expr(v)).is_zero() for v in dvecs)
    quot = grp.quotient(dvecs)
    kernel_in = all(quot.is_zero(v) for v in kernel)
    img = grp.subgroup(dvecs) if dvecs else PresentedGroup(0, [])
    return TreeKernel(r, len(kernel), img.mod2_dimension(), delta_in, kernel_in)


# ---------------------------------------------------------------- j for the degree-3 quotient


def _wedge_sources(genus: int) -> tuple[list, list]:
    labs = all_labels(genus)
    return list(itertools.product(labs, repeat=3)), list(itertools.product(labs, repeat=2))


@lru_cache(maxsize=None)
def wedge_mod2_group(genus: int) -> tuple[PresentedGroup, list]:
    """(Λ³H ⊕ Λ²H) ⊗ ℤ/2 presented on ordered tuples: swaps, repeated letters, 2x."""
    tri, bi = _wedge_sources(genus)
    gens = [("3",) + t for t in tri] + [("2",) + t for t in bi]
    idx = {g: i for i, g in enumerate(gens)}
    rels = []
    for g in gens:
        i = idx[g]
        rels.append({i: 2})
        letters = g[1:]
        if len(set(letters)) < len(letters):
            rels.append({i: 1})
        for a in range(len(letters) - 1):
            sw = list(letters)
            sw[a], sw[a + 1] = sw[a + 1], sw[a]
            j = idx[(g[0],) + tuple(sw)]
            rels.append({i: 1, j: 1} if i != j else {i: 2})
    return PresentedGroup(len(gens), rels, names=gens), gens


def j_images(genus: int) -> list[DiagramExpr]:
    from .diagram import tree_diagram

    _, gens = wedge_mod2_group(genus)
    out = []
    for g in gens:
        if g[0] == "3":
            a, b, c = g[1:]
            e = DiagramExpr()
            for w in ((a, b, c, b, a), (b, c, a, c, b), (c, a, b, a, c)):
                e.add_diagram(tree_diagram(w))
        else:
            a, b = g[1:]
            e = DiagramExpr()
            e.add_diagram(wheel_diagram((a, b, b)))
            e.add_diagram(wheel_diagram((b, a, a)))
        out.append(e)
    return out


@lru_cache(maxsize=None)
def j_hom(genus: int) -> GroupHom:
    src, _ = wedge_mod2_group(genus)
    pres = presentation(SpaceFlavor(genus, 3, "c"))
    return GroupHom(src, pres.group, [pres.vector(e) for e in j_images(genus)])


def y3_expected(genus: int) -> tuple[int, int]:
    """(free rank, number of ℤ/2 summands) of (L3 ⊕ S²H) ⊗ ℤ/2 ⊕ (D3 ⊕ Λ³H), from Lie-side data only."""
    q = 2 * genus
    l3 = free_lie(genus, 3).dimension
    s2 = q * (q + 1) // 2
    d3 = bracket_kernels(genus, 3)[0].group.rank
    l3w = q * (q - 1) * (q - 2) // 6
    return d3 + l3w, l3 + s2


def structure_maps(genus: int, k: int) -> dict:
    """The bundle of structure maps at (g, k); built lazily by the callers' needs."""
    return {
        "sq": sq_hom(genus, k),
        "sq_bar": sq_bar(genus, k),
        "xi": lambda h, i: xi_of_lie(genus, k, h, i),
        "nu": nu_value,
        "sl_ident": lambda: sl_ident(genus, k),
        "j": lambda: j_hom(genus),
    }


__all__ = [
    "FreeLie",
    "QuasiLie",
    "free_lie",
    "quasi_lie",
    "gamma",
    "theta",
    "theta_quasi",
    "bracket_kernels",
    "eta_prime",
    "eta",
    "sq_hom",
    "sq_bar",
    "sl_ident",
    "j_hom",
    "nu_value",
    "xi_word",
    "structure_maps",
    "F2Basis",
    "nf_mod2",
]
