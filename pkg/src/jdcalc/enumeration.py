"""Cyclic words: necklace and bracelet counts, the dihedral action, and wheels.

Words are tuples of labels.  The dihedral group of order 2n acts on H^{⊗n}
by rotation x and by reflection y, where y reverses a word and multiplies it
by (-1)^n; this is the sign a wheel picks up when every vertex is flipped.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

from .abelian import GroupHom, PresentedGroup
from .diagram import DiagramExpr, all_labels, wheel_diagram
from .lie import mod2_group, witt_dimension
from .spaces import SpaceFlavor, is_symmetric_word, presentation


# ---------------------------------------------------------------- counting


def totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def necklace_count(q: int, n: int) -> int:
    """Number of q-ary necklaces of length n."""
    return sum(totient(d) * q ** (n // d) for d in divisors(n)) // n


def bracelet_count(q: int, n: int) -> int:
    """Number of q-ary bracelets of length n (Pólya)."""
    nk = necklace_count(q, n)
    if n % 2 == 0:
        num, den = 2 * nk + (q + 1) * q ** (n // 2), 4
    else:
        num, den = nk + q ** ((n + 1) // 2), 2
    if num % den:
        raise ArithmeticError(f"bracelet formula not integral at q={q}, n={n}")
    return num // den


def _rotations(w: tuple) -> list[tuple]:
    return [w[i:] + w[:i] for i in range(len(w))]


def necklace_rep(w: tuple) -> tuple:
    return min(_rotations(w))


def bracelet_rep(w: tuple) -> tuple:
    return min(necklace_rep(w), necklace_rep(w[::-1]))


def necklaces_brute(q: int, n: int) -> int:
    return len({necklace_rep(w) for w in itertools.product(range(q), repeat=n)})


def bracelets_brute(q: int, n: int) -> int:
    return len({bracelet_rep(w) for w in itertools.product(range(q), repeat=n)})


def counts(q: int, n: int) -> dict:
    """Formula counts for alphabet size q and length n."""
    if n < 1:
        raise ValueError("length must be positive")
    return {
        "alphabet": q,
        "length": n,
        "totient": {d: totient(d) for d in divisors(n)},
        "necklaces": necklace_count(q, n),
        "bracelets": bracelet_count(q, n),
        "wittDim": witt_dimension(q, n),
    }


def rank_formula(genus: int, n: int) -> int:
    """Predicted rank of the one-loop part of i-deg n."""
    if n < 2:
        raise ValueError("n must be at least 2")
    q = 2 * genus
    nk = necklace_count(q, n)
    if n % 2 == 0:
        num = 2 * nk + (q + 1) * q ** (n // 2)
        den = 4
    else:
        num = nk - q ** ((n + 1) // 2)
        den = 2
    if num % den:
        raise ArithmeticError(f"rank formula not integral at g={genus}, n={n}")
    return num // den


def torsion_formula(genus: int, n: int) -> int:
    """Number of ℤ/2 summands predicted for the one-loop part: rank H^{⊗(n+1)/2} for odd n."""
    return (2 * genus) ** ((n + 1) // 2) if n % 2 else 0


# ---------------------------------------------------------------- cyclic words


def is_periodic_word(w: tuple) -> bool:
    n = len(w)
    return n % 2 == 0 and w[: n // 2] == w[n // 2 :]


@dataclass(frozen=True)
class CyclicWord:
    letters: tuple
    symmetric: bool = field(init=False)
    periodic: bool = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "letters", tuple(self.letters))
        object.__setattr__(self, "symmetric", is_symmetric_word(self.letters))
        object.__setattr__(self, "periodic", is_periodic_word(self.letters))

    def rotate(self, k: int = 1) -> "CyclicWord":
        w = self.letters
        k %= len(w)
        return CyclicWord(w[-k:] + w[:-k]) if k else self

    def reflect(self) -> tuple["CyclicWord", int]:
        """y·w: the reversed word together with the sign (-1)^n."""
        return CyclicWord(self.letters[::-1]), (-1) ** len(self.letters)


def dihedral_action(w: tuple, rot: int, reflect: bool) -> tuple[tuple, int]:
    """Apply x^rot, then y if ``reflect``; returns (word, sign)."""
    n = len(w)
    rot %= n
    v = w[-rot:] + w[:-rot] if rot else w
    if reflect:
        return v[::-1], (-1) ** n
    return v, 1


# ---------------------------------------------------------------- coinvariants and Φ


@dataclass
class WordGroup:
    group: PresentedGroup
    words: list
    index: dict


@lru_cache(maxsize=None)
def dihedral_coinvariants(genus: int, n: int) -> WordGroup:
    """(H^{⊗n}) coinvariants under the signed dihedral action, on all words."""
    words = list(itertools.product(all_labels(genus), repeat=n))
    index = {w: i for i, w in enumerate(words)}
    rels = []
    for w in words:
        i = index[w]
        for img, s in (dihedral_action(w, 1, False), dihedral_action(w, 0, True)):
            j = index[img]
            r: dict = {i: 1}
            r[j] = r.get(j, 0) - s
            rels.append(r)
    return WordGroup(PresentedGroup(len(words), rels, names=words), words, index)


def _one_loop(genus: int, n: int):
    return presentation(SpaceFlavor(genus, n, "ck", loops=1))


def wheel_vector(genus: int, word: tuple) -> dict:
    return _one_loop(genus, len(word)).vector(DiagramExpr.of(wheel_diagram(word)))


@lru_cache(maxsize=None)
def phi(genus: int, n: int) -> GroupHom:
    """Φ: coinvariants → 𝒜^c_{n,1}, a1⊗…⊗an ↦ O(a1,…,an)."""
    src = dihedral_coinvariants(genus, n)
    tgt = _one_loop(genus, n)
    return GroupHom(src.group, tgt.group, [wheel_vector(genus, w) for w in src.words])


def half_palindrome(u: tuple) -> tuple:
    """a1…am ↦ a1…am am…a2."""
    return tuple(u) + tuple(u[:0:-1])


@dataclass
class TorsionParam:
    hom: GroupHom  # H^{⊗m} ⊗ ℤ/2 → 𝒜^c_{2m-1,1}
    words: list

    def is_iso_onto_torsion(self) -> bool:
        if not self.hom.is_injective():
            return False
        order = 1
        for f in self.hom.target.torsion_factors:
            order *= f
        return order == 2 ** len(self.words)


@lru_cache(maxsize=None)
def torsion_parametrization(genus: int, n: int) -> TorsionParam:
    if n % 2 == 0:
        raise ValueError("torsion only appears for odd n")
    m = (n + 1) // 2
    words = list(itertools.product(all_labels(genus), repeat=m))
    src = PresentedGroup(len(words), [{i: 2} for i in range(len(words))], names=words)
    tgt = _one_loop(genus, n)
    hom = GroupHom(src, tgt.group, [wheel_vector(genus, half_palindrome(u)) for u in words])
    return TorsionParam(hom, words)


# ---------------------------------------------------------------- periodic isomorphisms


def _wheel_subgroup(genus: int, words: list) -> PresentedGroup:
    amb = _one_loop(genus, len(words[0]))
    return amb.group.subgroup([wheel_vector(genus, w) for w in words])


@dataclass
class PeriodicIso:
    hom: GroupHom
    words: list
    over: str  # "Z" or "Z2"


@lru_cache(maxsize=None)
def periodic_iso(genus: int, n: int, symmetric: bool = False) -> PeriodicIso:
    """O(w) ↦ O(ww) between wheel subgroups of i-deg n and 2n.

    Over ℤ when n is even, after tensoring with ℤ/2 when n is odd.  With
    ``symmetric`` only symmetric words are used on both sides.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    words = [w for w in itertools.product(all_labels(genus), repeat=n) if not symmetric or is_symmetric_word(w)]
    src = _wheel_subgroup(genus, words)
    tgt = _wheel_subgroup(genus, [w + w for w in words])
    over = "Z"
    if n % 2:
        src, tgt, over = mod2_group(src), mod2_group(tgt), "Z2"
    hom = GroupHom(src, tgt, [{i: 1} for i in range(len(words))])
    return PeriodicIso(hom, words, over)


def symmetric_periodic_words(genus: int, n: int) -> list[tuple]:
    """Words ww of length 2n with w symmetric."""
    return [w + w for w in itertools.product(all_labels(genus), repeat=n) if is_symmetric_word(w)]


def word_maps(genus: int, n: int) -> dict:
    out = {"phi": phi(genus, n)}
    if n % 2:
        out["torsion"] = torsion_parametrization(genus, n)
    out["periodic"] = periodic_iso(genus, n)
    out["periodic_symmetric"] = periodic_iso(genus, n, symmetric=True)
    return out
