import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import F9, TEST_RINGS, ring
from mwkt.errors import BadWitness, RingMismatch
from mwkt.groupring import GroupRingElem as G
from mwkt.groupring import VkSpace, gr_arith, s_element, vk_image
from mwkt.rings import many_units_witnesses

SMALL = [s for s in TEST_RINGS if len(ring(s).units) <= 24]


def test_augmentation_of_brackets():
    R = ring("F7")
    for a in R.units:
        assert gr_arith("augment", G.bracket(R, a)) == 0
        assert G.angle(R, a).augment() == 1


def test_bracket_cocycle_f5():
    R = ring("F5")
    for a, b in itertools.product(R.units, repeat=2):
        assert G.bracket(R, R.mul(a, b)) - G.bracket(R, a) - G.angle(R, a) * G.bracket(R, b) == G.zero(R)


def test_hyperbolic_kills_pfister_minus_one_f3():
    R = ring("F3")
    assert G.hyperbolic(R) * G.pfister(R, R.minus_one) == G.zero(R)


def test_ring_mismatch():
    with pytest.raises(RingMismatch):
        G.one(ring("F3")) + G.one(ring("F5"))
    with pytest.raises(RingMismatch):
        vk_image(VkSpace(ring("F5"), 1), G.one(ring("F7")))


def test_json_map():
    R = ring("F5")
    assert (G.angle(R, 2) * 3 - G.one(R)).to_json() == {"1": -1, "2": 3}


def test_s_element_two_term_formula():
    R = ring("F7")
    for w in itertools.islice(many_units_witnesses(R, 2), 4):
        x1, x2 = w
        expected = G.angle(R, x1) + G.angle(R, x2) - G.angle(R, R.add(x1, x2))
        assert s_element(R, 2, 1, w) == expected


def test_s_element_f5_example():
    R = ring("F5")
    assert s_element(R, 2, 1, [1, 1]) == G.one(R) * 2 - G.angle(R, 2)


def test_bad_witness():
    R = ring("F5")
    with pytest.raises(BadWitness):
        s_element(R, 2, 1, [1, 4])
    with pytest.raises(BadWitness):
        s_element(R, 3, 1, [1, 1])


@pytest.mark.parametrize("spec,m", [("F5", 2), ("F7", 3), ("F31", 4), (F9, 2)])
def test_augmentation_of_s_is_one(spec, m):
    R = ring(spec)
    for w in itertools.islice(many_units_witnesses(R, m), 5):
        for t in (-3, -1, 0, 1, 2, 5):
            assert s_element(R, m, t, w).augment() == 1


def test_vk_examples_f5():
    R = ring("F5")
    s2 = s_element(R, 2, 1, [1, 1])
    assert vk_image(VkSpace(R, 1), s2) == (0,)
    assert vk_image(VkSpace(R, 2), s2) == (3,)
    assert VkSpace(R, 2).structure.to_json() == {"free_rank": 0, "invariant_factors": [5]}


@pytest.mark.parametrize("spec,k", [("F5", 2), (F9, 2), ("Z/9", 3), ("F5[t]/t^2", 2)])
def test_vk_image_of_one_is_identity(spec, k):
    V = VkSpace(ring(spec), k)
    assert vk_image(V, G.one(ring(spec))) == V.identity()


@pytest.mark.parametrize("spec,k", [(F9, 2), (F9, 3), ("Z/9", 2)])
def test_vk_images_are_symmetric(spec, k):
    R = ring(spec)
    V = VkSpace(R, k)
    for u in R.units:
        assert V.is_invariant(vk_image(V, G.angle(R, u)))


@pytest.mark.parametrize("spec", ["F31", F9])
def test_s_vanishes_below_bound_for_several_witnesses(spec):
    R = ring(spec)
    for m in range(2, 5):
        for w in itertools.islice(many_units_witnesses(R, m), 3):
            for k in range(1, m):
                V = VkSpace(R, k)
                for t in range(1, m):
                    if k * t < m:
                        assert not any(vk_image(V, s_element(R, m, t, w)))


@st.composite
def ring_and_units(draw, n=3):
    spec = draw(st.sampled_from(SMALL))
    R = ring(spec)
    return R, [draw(st.sampled_from(R.units)) for _ in range(n)]


@given(ring_and_units())
def test_group_ring_identities(data):
    R, (a, b, c) = data
    x = G.angle(R, a) * 2 - G.bracket(R, b)
    y = G.bracket(R, c) + G.one(R)
    assert x * y == y * x
    assert (x + y) * G.angle(R, c) == x * G.angle(R, c) + y * G.angle(R, c)
    assert (x * y).augment() == x.augment() * y.augment()
    assert gr_arith("scalar-act", x, c) == x * G.angle(R, c)
    assert G.bracket(R, R.mul(a, b)) == G.bracket(R, a) + G.angle(R, a) * G.bracket(R, b)
    # <<a>>[b] = <<b>>[a] as group ring elements
    assert G.pfister(R, a) * G.bracket(R, b) == G.pfister(R, b) * G.bracket(R, a)
    assert G.epsilon(R) * G.epsilon(R) == G.one(R)
