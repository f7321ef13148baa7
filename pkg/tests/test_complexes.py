import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import F9, ring
from oracles import as_json, boundary_matrix, chain_homology, frames
from mwkt.complexes import (
    build_complex,
    complete_frame,
    complex_homology,
    determinant,
    frame_count_formula,
    residue_rank,
)
from mwkt.errors import TooLarge

ZERO = {"free_rank": 0, "invariant_factors": []}


def test_counts_f3_squared():
    cx = build_complex(ring("F3"), 2)
    assert cx.dims == [1, 8, 48]


@pytest.mark.parametrize(
    "spec,n,variant,dims",
    [
        ("F2", 2, "U", [1, 3, 6]),
        ("F5", 2, "U", [1, 24, 480]),
        ("F3", 3, "U", [1, 26, 624, 11232]),
        ("F5", 2, "GP", [1, 24, 480, 7680]),
    ],
)
def test_dims(spec, n, variant, dims):
    assert build_complex(ring(spec), n, variant).dims == dims


@pytest.mark.parametrize("spec", ["F2", "F3", "F2^2[x^2+x+1]", "F5", "F7", F9])
def test_frame_counts_match_formula(spec):
    R = ring(spec)
    cx = build_complex(R, 2)
    assert cx.dims == [frame_count_formula(R.size, 2, r) for r in range(3)]


@pytest.mark.parametrize("spec", ["F2", "F3", "F5", "Z/9", "Z/4", "F5[t]/t^2"])
def test_dd_zero_and_completion(spec):
    cx = build_complex(ring(spec), 2)
    assert cx.check_dd()
    assert cx.completion_failures == 0


@pytest.mark.parametrize("spec", ["Z/9", "F5[t]/t^2"])
def test_local_ring_frames(spec):
    # a frame over a local ring needs only residues independent
    R = ring(spec)
    cx = build_complex(R, 2)
    ideal = R.size // R.residue_field.size
    assert len(cx.bases[1]) == R.size**2 - ideal**2
    if R.size**2 > 100:
        # |U_2| = 600 * 500 here, over the column cap
        assert 2 in cx.skipped
        return
    assert len(cx.bases[2]) == (R.size**2 - ideal**2) * (R.size**2 - R.size * ideal)
    for f in cx.bases[2].frames:
        assert R.is_unit(determinant(R, f))


@pytest.mark.parametrize("spec", ["F2", "F3", "F5"])
def test_gp_equals_u_up_to_n(spec):
    R = ring(spec)
    u = build_complex(R, 2, "U")
    gp = build_complex(R, 2, "GP")
    for r in range(3):
        assert gp.bases[r].frames == u.bases[r].frames
    assert gp.check_dd()


@pytest.mark.parametrize("spec,n", [("F2", 2), ("F3", 2), ("F5", 2), ("F2", 3), ("F3", 3)])
def test_h0_vanishes(spec, n):
    cx = build_complex(ring(spec), n, r_max=1)
    assert complex_homology(cx, 0).to_json() == ZERO


@pytest.mark.parametrize("p,n", [(2, 2), (3, 2), (5, 2), (2, 3)])
def test_homology_against_oracle(p, n):
    cx = build_complex(ring(f"F{p}"), n)
    for i in range(n):
        assert complex_homology(cx, i).to_json() == as_json(chain_homology(p, n, i)), i


def test_h1_f5_squared():
    cx = build_complex(ring("F5"), 2)
    assert complex_homology(cx, 1).to_json() == ZERO


def test_gp_homology_f5_is_computed():
    # reported, not a hard claim: the acyclicity statement needs an infinite field
    cx = build_complex(ring("F5"), 2, "GP")
    for i in (1, 2):
        assert complex_homology(cx, i) is not None


def test_boundary_matches_oracle_matrix():
    cx = build_complex(ring("F3"), 2)
    assert [f for f in cx.bases[2].frames] == frames(3, 2, 2)
    rows = cx.differential_rows(2)
    dense = [[row.get(j, 0) for j in range(len(cx.bases[2]))] for row in rows]
    assert dense == boundary_matrix(3, 2, 2)


def test_homology_needs_next_degree():
    cx = build_complex(ring("F3"), 2, r_max=1)
    assert complex_homology(cx, 1) is None


def test_cap():
    cx = build_complex(ring("F5"), 3, cap=1000)
    assert 2 in cx.skipped and len(cx.bases) == 2
    with pytest.raises(ValueError):
        build_complex(ring("F3"), 2, "X")
    from mwkt.complexes import _extend

    with pytest.raises(TooLarge):
        _extend(ring("F5"), 2, [()], "U", 10)


@settings(max_examples=40)
@given(st.sampled_from(["F3", "F5", "Z/9", "F2^2[x^2+x+1]"]), st.data())
def test_frames_complete_to_invertible(spec, data):
    R = ring(spec)
    cx = build_complex(R, 3, r_max=1) if R.size <= 5 else build_complex(R, 2, r_max=1)
    n = cx.n
    f = data.draw(st.sampled_from(cx.bases[1].frames))
    g = complete_frame(R, f, n)
    assert g is not None and g[0] == f[0]
    assert residue_rank(R, list(g)) == n
    assert R.is_unit(determinant(R, g))
