import itertools

import pytest
from hypothesis import given, strategies as st

from jdcalc import lie
from jdcalc.abelian import describe_structure
from jdcalc.diagram import DiagramExpr

# dim L_n(H) for rank 2 and rank 4
WITT = {2: [2, 1, 2, 3, 6, 9, 18], 4: [4, 6, 20, 60, 204, 670, 2340]}


def lyndon_brute(q: int, n: int) -> int:
    """Aperiodic words that are strictly smallest among their rotations."""
    count = 0
    for w in itertools.product(range(q), repeat=n):
        rots = [w[i:] + w[:i] for i in range(1, n)]
        if all(w < r for r in rots):
            count += 1
    return count


@pytest.mark.parametrize("q", [2, 4])
def test_witt_dimensions(q):
    assert [lie.witt_dimension(q, n) for n in range(1, 8)] == WITT[q]


@given(st.integers(1, 4), st.integers(1, 7))
def test_witt_matches_lyndon_words(q, n):
    assert lie.witt_dimension(q, n) == lyndon_brute(q, n) == len(lie.lyndon_words(q, n))


@given(st.integers(1, 3), st.integers(1, 6))
def test_lyndon_words_are_sorted_and_lyndon(q, n):
    ws = lie.lyndon_words(q, n)
    assert ws == sorted(ws)
    for w in ws:
        assert all(w < w[i:] + w[:i] for i in range(1, n))


letters = st.integers(0, 3)
trees = st.recursive(letters, lambda inner: st.tuples(inner, inner), max_leaves=5)


@given(trees, trees, trees)
def test_jacobi_in_tensor_algebra(x, y, z):
    acc: dict = {}
    for t in ((x, (y, z)), (y, (z, x)), (z, (x, y))):
        for w, c in lie.expand_tree(t):
            acc[w] = acc.get(w, 0) + c
    assert not any(acc.values())


@given(trees, trees)
def test_antisymmetry_in_tensor_algebra(x, y):
    a = dict(lie.expand_tree((x, y)))
    b = dict(lie.expand_tree((y, x)))
    assert all(a.get(w, 0) == -b.get(w, 0) for w in set(a) | set(b))


@given(trees)
def test_canonical_tree_sign(t):
    c, s = lie.canon_tree(t)
    assert s in (-1, 0, 1)
    assert lie.degree(c) == lie.degree(t)
    if not isinstance(t, int):
        c2, s2 = lie.canon_tree((t[1], t[0]))
        assert c2 == c
        if not lie.has_square(c):
            assert s2 == -s


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_standard_trees_give_unit_coordinates(n):
    fl = lie.free_lie(1, n)
    for i in range(fl.dimension):
        assert fl.tree_coords(fl.tree(i)) == {i: 1}


def test_free_lie_group_is_free():
    assert lie.free_lie(2, 3).group.describe() == "Z ^ 20"


@pytest.mark.parametrize(
    "g,n,expected",
    [(1, 2, "Z + Z/2 ^ 2"), (1, 3, "Z ^ 2"), (1, 4, "Z ^ 3 + Z/2"), (2, 2, "Z ^ 6 + Z/2 ^ 4")],
)
def test_quasi_lie_structure(g, n, expected):
    assert lie.quasi_lie(g, n).group.describe() == expected


@pytest.mark.parametrize("n", [1, 3])
def test_gamma_odd_degree_is_iso(n):
    assert lie.gamma(1, n).is_isomorphism()


# D_n and D'_n: kernels of the bracket H⊗L_{n+1} -> L_{n+2} and its quasi-Lie analogue
KERNELS = {
    (1, 1): ("0", "Z/2 ^ 4"),
    (1, 2): ("Z", "Z"),
    (1, 3): ("0", "Z/2 ^ 2"),
    (2, 1): ("Z ^ 4", "Z ^ 4 + Z/2 ^ 16"),
    (2, 2): ("Z ^ 20", "Z ^ 20"),
}


@pytest.mark.parametrize("g,n", sorted(KERNELS))
def test_bracket_kernels(g, n):
    d, dq = lie.bracket_kernels(g, n)
    assert (d.group.describe(), dq.group.describe()) == KERNELS[(g, n)]


def test_free_kernel_rank_formula():
    q = 4
    for n in (1, 2):
        d, _ = lie.bracket_kernels(2, n)
        assert d.group.rank == q * lie.witt_dimension(q, n + 1) - lie.witt_dimension(q, n + 2)


@pytest.mark.parametrize("g,n", [(1, 1), (1, 2), (2, 1)])
def test_eta_prime_is_iso_onto_kernel(g, n):
    assert lie.eta_prime_is_iso_onto_kernel(g, n) == {"lands_in_kernel": True, "injective": True, "onto_kernel": True}


def test_doubled_tree_is_tree_diagram():
    d = lie.doubled_tree((0, (1, 0)))
    assert (d.t, d.legs) == (4, 6)
    e = lie.doubled_tree((0, (1, 0)), letter=1)
    assert (e.t, e.legs) == (5, 7)


@pytest.mark.parametrize("k", [1, 2])
def test_sq_is_injective_into_tree_torsion(k):
    assert lie.sq_hom(1, k).is_injective()
    assert lie.sq_bar(1, k).is_iso_onto_torsion()


def test_nu_injective_and_kills_theta():
    from jdcalc.abelian import f2_rank

    for k in (1, 2):
        assert f2_rank(lie.nu_matrix(1, k)) == lie.free_lie(1, k + 1).dimension
        assert lie.nu_certificate(1, k) == []
        assert lie.nu_kills_theta(1, k)


def test_j_structure():
    j = lie.j_hom(1)
    assert j.is_injective()
    assert j.cokernel().describe() == "Z/2 ^ 5"


def test_xi_word_is_mod2_wheel():
    e = lie.xi_word((0, 1, 1))
    assert isinstance(e, DiagramExpr) and e.ring == "Z2"
