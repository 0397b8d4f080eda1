import json

import pytest
from hypothesis import given, strategies as st

from jdcalc import cache
from jdcalc.diagram import DiagramExpr, decode, make_label, strut_diagram, wheel_diagram
from jdcalc.spaces import (
    FlavorError,
    ResourceError,
    SpaceFlavor,
    component_relators,
    connected_pool,
    enumerate_generators,
    is_symmetric_word,
    nf_half,
    nf_mod2,
    presentation,
    representative_half,
    representative_mod2,
)

# (genus, i-deg, variant, loops) -> invariant factors; rank of the one-loop part
# comes from the necklace formula, torsion of the tree part from (H⊗L_k)⊗Z/2
STRUCTURES = [
    (1, 1, "c", None, "Z/2 ^ 4"),
    (1, 2, "c", None, "Z ^ 4"),
    (1, 2, "ck", 0, "Z"),
    (1, 2, "ck", 1, "Z ^ 3"),
    (1, 3, "ck", 0, "Z/2 ^ 2"),
    (1, 3, "ck", 1, "Z/2 ^ 4"),
    (1, 2, "Y", None, "Z ^ 4 + Z/2 ^ 10"),
    (2, 1, "c", None, "Z ^ 4 + Z/2 ^ 16"),
    (2, 2, "ck", 0, "Z ^ 20"),
    (2, 2, "ck", 1, "Z ^ 10"),
    (2, 3, "ck", 1, "Z ^ 4 + Z/2 ^ 16"),
]


@pytest.mark.parametrize("g,n,variant,loops,expected", STRUCTURES)
def test_frozen_structures(g, n, variant, loops, expected):
    assert presentation(SpaceFlavor(g, n, variant, loops=loops)).group.describe() == expected


def test_connected_splits_by_loop_degree():
    for g, n in ((1, 2), (1, 3), (2, 2)):
        whole = presentation(SpaceFlavor(g, n, "c")).group
        parts = [presentation(SpaceFlavor(g, n, "ck", loops=k)).group for k in range(0, (n + 1) // 2 + 1)]
        assert whole.rank == sum(p.rank for p in parts)
        assert sorted(whole.torsion_factors) == sorted(d for p in parts for d in p.torsion_factors)


def test_submodule_variants():
    assert presentation(SpaceFlavor(1, 2, "cs", loops=1)).group.describe() == "Z ^ 3"
    assert presentation(SpaceFlavor(1, 4, "period", loops=1)).group.describe() == "Z ^ 3"
    assert presentation(SpaceFlavor(1, 2, "full", legs=4)).group.describe() == "Z ^ 10"


def test_flavor_validation():
    with pytest.raises(ValueError):
        SpaceFlavor(1, 2, "ck")
    with pytest.raises(ValueError):
        SpaceFlavor(1, 2, "full")
    with pytest.raises(ValueError):
        SpaceFlavor(1, 3, "period", loops=1)
    with pytest.raises(ValueError):
        SpaceFlavor(1, 2, "bogus")


def test_resource_caps():
    with pytest.raises(ResourceError):
        presentation(SpaceFlavor(2, 9, "c"))
    with pytest.raises(ResourceError):
        presentation(SpaceFlavor(5, 3, "c"))


def test_foreign_terms_are_rejected():
    pres = presentation(SpaceFlavor(1, 2, "ck", loops=1))
    a, b = make_label(1, True), make_label(1, False)
    assert pres.vector(DiagramExpr.of(wheel_diagram([a, b])))
    with pytest.raises(FlavorError):
        pres.vector(DiagramExpr.of(wheel_diagram([a, b, b])))


def test_struts_have_no_mod2_normal_form():
    s = DiagramExpr.of(strut_diagram(make_label(1, True), make_label(1, False)))
    with pytest.raises(FlavorError):
        nf_mod2(s)


POOL = [k for t in (1, 2, 3) for k in connected_pool(1, t)] + list(connected_pool(2, 2))


@given(st.sampled_from(POOL))
def test_relators_vanish_in_normal_forms(key):
    for rel in component_relators(key):
        e = DiagramExpr({(k,): c for k, c in rel})
        assert not nf_mod2(e)
        assert not nf_half(e)


@given(st.lists(st.sampled_from(POOL), min_size=1, max_size=4))
def test_mod2_representative_round_trip(keys):
    e = DiagramExpr({(k,): 1 for k in keys}, ring="Z2")
    nf = nf_mod2(e)
    assert nf_mod2(representative_mod2(nf)) == nf


@given(st.lists(st.sampled_from(POOL), min_size=1, max_size=4))
def test_half_representative_round_trip(keys):
    e = DiagramExpr({(k,): 1 for k in keys})
    nf = nf_half(e)
    assert nf_half(representative_half(nf)) == nf


@given(st.lists(st.sampled_from(POOL), min_size=1, max_size=3), st.lists(st.sampled_from(POOL), max_size=2))
def test_products_normalize_componentwise(xs, ys):
    # disconnected classes reduce factor by factor
    e = DiagramExpr({tuple(sorted(xs)): 1})
    atoms = [set(nf_mod2(DiagramExpr({(k,): 1}))) for k in xs]
    if all(atoms):
        assert nf_mod2(e)
    else:
        assert not nf_mod2(e)


def test_symmetric_words():
    a, b, c = make_label(1, True), make_label(1, False), make_label(2, True)
    assert is_symmetric_word((a, b, b, a))
    assert is_symmetric_word((a, b, a))
    assert is_symmetric_word((b, a, a))  # a rotation of aba
    assert not is_symmetric_word((a, b, c))
    assert is_symmetric_word((a,))


def test_generators_are_deterministic():
    fl = SpaceFlavor(1, 3, "c")
    assert enumerate_generators(fl) == enumerate_generators(fl)


def test_disk_cache_round_trip(tmp_path, monkeypatch):
    monkeypatch.setenv("JD_CACHE_DIR", str(tmp_path))
    fl = SpaceFlavor(1, 3, "ck", loops=1)
    pres = presentation(fl, use_cache=False)
    cache.store_presentation(pres)
    loaded = cache.load_presentation(fl)
    assert loaded.keys == pres.keys
    assert loaded.group.describe() == pres.group.describe()
    path = next(tmp_path.iterdir())
    entry = json.loads(path.read_text())
    entry["checksum"] = "0" * 64
    path.write_text(json.dumps(entry))
    assert cache.load_presentation(fl) is None


def test_cache_disabled_without_env(monkeypatch):
    monkeypatch.delenv("JD_CACHE_DIR", raising=False)
    assert cache.load_presentation(SpaceFlavor(1, 2, "c")) is None
