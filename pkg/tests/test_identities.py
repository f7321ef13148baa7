import pytest

from conftest import TEST_RINGS, ring
from mwkt import identities
from mwkt.identities import Evaluator, _grid, symbol_relation, symbol_relation_reference
from mwkt.kmw import HatAlgebra

SUITES = {
    "basic hat identities": (identities.basic_hat_identities, 8),
    "hat identities over large residue fields": (identities.field_hat_identities, 6),
    "tensor model identities": (identities.kmw_identities, 7),
    "relations in V": (identities.some_v_relations, 2),
}


@pytest.mark.parametrize("spec", TEST_RINGS)
@pytest.mark.parametrize("name", sorted(SUITES))
def test_identity_suite_has_no_violations(spec, name):
    fn, min_items = SUITES[name]
    items = fn(ring(spec))
    assert len(items) >= min_items
    assert [it for it in items if it["violations"]] == []


@pytest.mark.parametrize("spec", TEST_RINGS)
def test_symbol_relation_in_hat_algebra(spec):
    items = symbol_relation(ring(spec), 3)
    assert [it["item"] for it in items] == [f"symbol relation, n={n}" for n in (1, 2, 3)]
    assert all(it["violations"] == 0 for it in items)


@pytest.mark.parametrize("spec", ["F3", "F5", "Z/9"])
def test_vectorized_matches_per_tuple(spec):
    R = ring(spec)
    for alg in (None, HatAlgebra(R, steinberg=False)):
        fast = symbol_relation(R, 2, algebra=alg)
        assert fast[1]["violations"] == symbol_relation_reference(R, 2, alg)
        assert fast[0]["violations"] == symbol_relation_reference(R, 1, alg)


@pytest.mark.parametrize("spec", ["F5", "F7"])
def test_checks_detect_missing_steinberg(spec):
    # degree 2 of the real hat algebra is zero, so identities there hold
    # vacuously; without Steinberg the group is free and the checks must fire
    R = ring(spec)
    ev = Evaluator(HatAlgebra(R, steinberg=False))
    U = ev.ud.U
    a, b = _grid(U, 2)
    assert ev.violations(2, ev.word([a, ev.neg(a)])) > 0
    a, b, c = _grid(U, 3)
    additivity = ev.word([ev.mul[a, b], c]) - ev.word([a, c]) - ev.word([b, c], a)
    assert ev.violations(2, additivity) == 0
    assert symbol_relation(R, 2, algebra=HatAlgebra(R, steinberg=False))[1]["violations"] > 0


def test_items_report_tuple_counts():
    items = identities.basic_hat_identities(ring("F5"))
    first = items[0]
    assert first["tuples"] > 0 and set(first) >= {"item", "tuples", "violations"}
