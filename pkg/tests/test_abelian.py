from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors as sympy_invariant_factors

from jdcalc.abelian import (
    GroupHom,
    IntMatrix,
    PresentedGroup,
    WellDefinednessError,
    bits,
    cyclic_group,
    describe_structure,
    determinant,
    direct_sum,
    f2_kernel,
    f2_rank,
    invariant_factors,
    left_kernel,
    smith_decompose,
    to_bits,
)

small_ints = st.integers(min_value=-6, max_value=6)


@st.composite
def matrices(draw, max_dim=6):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    return [[draw(small_ints) for _ in range(c)] for _ in range(r)]


def sympy_factors(rows):
    dm = DomainMatrix([[ZZ(x) for x in r] for r in rows], (len(rows), len(rows[0])), ZZ)
    return [int(x) for x in sympy_invariant_factors(dm) if x != 0]


@given(matrices())
def test_invariant_factors_match_sympy(rows):
    assert invariant_factors(IntMatrix.from_dense(rows)) == sympy_factors(rows)


@given(matrices(max_dim=5))
def test_smith_decomposition_is_unimodular_and_diagonal(rows):
    m = IntMatrix.from_dense(rows)
    U, D, V = smith_decompose(m)
    assert U @ m @ V == D
    assert abs(determinant(U)) == 1
    assert abs(determinant(V)) == 1
    diag = [D.entries.get((i, i), 0) for i in range(min(m.rows, m.cols))]
    assert all(k[0] == k[1] for k in D.entries)
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


@given(matrices(max_dim=5))
def test_group_structure_counts(rows):
    # columns of ``rows`` are relators on len(rows) generators
    n = len(rows)
    rels = [{i: rows[i][j] for i in range(n)} for j in range(len(rows[0]))]
    g = PresentedGroup(n, rels)
    facs = sympy_factors([list(r) for r in zip(*rows)])
    assert g.rank == n - len(facs)
    assert g.torsion_factors == [d for d in facs if d > 1]


def test_determinant_examples():
    assert determinant(IntMatrix.from_dense([[2, 1], [1, 1]])) == 1
    assert determinant(IntMatrix.from_dense([[0, 1, 2], [1, 0, 3], [4, -3, 8]])) == -2
    assert determinant(IntMatrix.from_dense([[1, 2], [2, 4]])) == 0


def test_describe_structure():
    assert describe_structure(0, []) == "0"
    assert describe_structure(1, [2]) == "Z + Z/2"
    assert describe_structure(3, [2, 2, 4]) == "Z ^ 3 + Z/2 ^ 2 + Z/4"


def test_presented_group_elements():
    g = PresentedGroup(2, [{0: 2}, {0: 1, 1: -3}])  # x = 3y, 6y = 0
    assert g.describe() == "Z/6"
    assert g.is_zero({1: 6})
    assert not g.is_zero({1: 3})
    assert g.is_zero({0: 1, 1: -3})
    e = g.gen(1)
    assert (6 * e).is_zero()
    assert (e + e + e) == g.element({0: 1})
    assert g.mod2_dimension() == 1


def test_lift_round_trip():
    g = direct_sum([cyclic_group(4), cyclic_group(0), cyclic_group(6)])
    t, f = g.smith_coords({0: 3, 1: -5, 2: 1})
    v = g.lift(t, f)
    assert g.is_zero({0: 3 - v.get(0, 0), 1: -5 - v.get(1, 0), 2: 1 - v.get(2, 0)})


def test_half_and_rational_coordinates():
    g = direct_sum([cyclic_group(0), cyclic_group(2)])
    assert g.half_is_zero({0: 2, 1: 1})
    assert not g.half_is_zero({0: 1})
    assert g.qz_coords({0: Fraction(3, 2)}) in ((Fraction(1, 2),),)


def test_subgroup_and_quotient():
    z = cyclic_group(0)
    sub = z.subgroup([{0: 4}, {0: 6}])
    assert sub.describe() == "Z"
    assert z.quotient([{0: 4}, {0: 6}]).describe() == "Z/2"


def test_hom_checks_relators():
    z2, z4 = cyclic_group(2), cyclic_group(4)
    GroupHom(z2, z4, [{0: 2}])
    with pytest.raises(WellDefinednessError):
        GroupHom(z2, z4, [{0: 1}])


def test_hom_kernel_image_cokernel():
    z, z6 = cyclic_group(0), cyclic_group(6)
    h = GroupHom(z, z6, [{0: 2}])
    assert h.image().describe() == "Z/3"
    assert h.cokernel().describe() == "Z/2"
    assert h.kernel().describe() == "Z"
    assert not h.is_injective()
    iso = GroupHom(z6, direct_sum([cyclic_group(2), cyclic_group(3)]), [{0: 1, 1: 1}])
    assert iso.is_isomorphism()


def test_compose():
    z = cyclic_group(0)
    a = GroupHom(z, z, [{0: 2}])
    b = GroupHom(z, z, [{0: 3}])
    assert a.compose(b).images == [{0: 6}]


@given(st.lists(st.integers(0, 2**8 - 1), max_size=10))
def test_f2_kernel_vectors_vanish(vectors):
    ker = f2_kernel(vectors)
    assert len(ker) == len(vectors) - f2_rank(vectors)
    for c in ker:
        acc = 0
        for i in bits(c):
            acc ^= vectors[i]
        assert acc == 0


@given(st.sets(st.integers(0, 40)))
def test_bits_round_trip(s):
    assert sorted(bits(to_bits(s))) == sorted(s)


@given(matrices(max_dim=5))
def test_left_kernel(rows):
    ncols = len(rows[0])
    rd = [{j: x for j, x in enumerate(r) if x} for r in rows]
    for c in left_kernel(rd, ncols):
        for j in range(ncols):
            assert sum(c.get(i, 0) * rows[i][j] for i in range(len(rows))) == 0
