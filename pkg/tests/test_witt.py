import pytest

from conftest import F9, ring
from mwkt.errors import CharTwo
from mwkt.groupring import GroupRingElem
from mwkt.kmw import gw_ring, kmw
from mwkt.witt import FiberModel, eta_h_sequence, eta_map, fiber_model, gw_oracle_check, witt_tower

ODD = ["F3", "F5", "F7", F9, "Z/9", "Z/25"]


def S(free, *tors):
    return {"free_rank": free, "invariant_factors": list(tors)}


def classical_witt(q):
    # W(F_q) is Z/4 when -1 is a non-square (q = 3 mod 4) and Z/2[F*/F*^2] otherwise
    return S(0, 4) if q % 4 == 3 else S(0, 2, 2)


@pytest.mark.parametrize("spec", ODD)
def test_witt_ring_matches_classical(spec):
    R = ring(spec)
    T = witt_tower(R, 3)
    assert T.W.to_json() == classical_witt(R.residue_field.size)
    assert T.quotient_structure(0).to_json() == S(0, 2)
    assert T.power_structure(1).order == 2
    assert T.quotient_structure(1).to_json() == S(0, 2)
    assert T.power_structure(2).is_trivial
    assert T.stable_index() == 2


def test_witt_spec_examples():
    T = witt_tower(ring("F3"), 2)
    assert T.W.order == 4
    assert T.power_structure(1).order == 2
    assert T.power_structure(2).is_trivial
    assert witt_tower(ring("F5"), 2).quotient_structure(1).to_json() == S(0, 2)


@pytest.mark.parametrize("spec", ["F3", "F5", "F7", F9])
def test_gw_oracle(spec):
    res = gw_oracle_check(ring(spec))
    assert res["isomorphism"]
    assert res["structure"] == S(1, 2)
    assert res["table_mismatches"] == 0
    assert res["angle_product_mismatches"] == 0


@pytest.mark.parametrize("spec", ODD)
@pytest.mark.parametrize("n", [0, 1, 2])
def test_fiber_comparison_is_iso(spec, n):
    F = fiber_model(ring(spec), n)
    _, v = F.comparison()
    assert v == {
        "well_defined": True,
        "lands_in_pullback": True,
        "injective": True,
        "onto_pullback": True,
        "isomorphism": True,
    }
    assert F.pullback.to_json() == kmw(ring(spec), n).structure.to_json()


def test_fiber_spec_examples():
    assert fiber_model(ring("F5"), 2).pullback.is_trivial
    assert fiber_model(ring("F3"), 1).pullback.order == 2
    for spec in ("F3", "F5", "F7"):
        assert fiber_model(ring(spec), 0).pullback.to_json() == gw_ring(ring(spec)).structure.to_json()


def test_char_two_rejected():
    with pytest.raises(CharTwo):
        FiberModel(ring("F2"), 1)
    with pytest.raises(CharTwo):
        eta_h_sequence(ring("F2^2[x^2+x+1]"), 1)
    with pytest.raises(CharTwo):
        gw_oracle_check(ring("F2"))


@pytest.mark.parametrize("spec", ["F3", "F5", "F7", "Z/9"])
@pytest.mark.parametrize("n", [1, 2])
def test_eta_h_sequence_exact(spec, n):
    rep = eta_h_sequence(ring(spec), n)
    assert rep["exact_at_source"] and rep["exact_at_middle"] and rep["surjective"]


def test_eta_sends_symbol_to_pfister():
    R = ring("F7")
    em = eta_map(R, 1)
    gw = gw_ring(R)
    p = kmw(R, 1)
    for a in R.units:
        img = em.apply(tuple(int(x) for x in p.word((R.unit_index[a],))))
        assert tuple(img) == tuple(gw.coords_of(GroupRingElem.pfister(R, a)))


def test_pfister_products_land_in_powers():
    R = ring("F5")
    T = witt_tower(R, 2)
    for a in R.units:
        for b in R.units:
            assert T.in_power(T.pfister_product([a]), 1)
            assert T.in_power(T.pfister_product([a, b]), 2)
