import json
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle
from sphbuild.building import (
    apartment_containing,
    are_opposite,
    check_automorphism,
    corrupt_delta,
    enumerate_apartments,
    find_isomorphism,
    fixed_subcomplex,
    flag_building,
    from_json,
    join,
    matrix_automorphism,
    preset,
    random_automorphism,
    rank1_building,
    thin_building,
    to_json,
    verify_wd_axioms,
)
from sphbuild.convexity import is_convex
from sphbuild.coxeter import longest_element, named_system

SINGER = [[0, 0, 1], [1, 0, 1], [0, 1, 0]]  # companion matrix of x^3 + x + 1 over GF(2)
TRANSVECTION = [[1, 1, 0], [0, 1, 0], [0, 0, 1]]


@pytest.fixture(scope="module")
def fano():
    return preset("fano")


def _points_lines(b):
    pts = [v for v in range(b.num_vertices) if b.vertex_type[v] == 0]
    lines = [v for v in range(b.num_vertices) if b.vertex_type[v] == 1]
    return pts, lines


def test_fano_counts_match_incidence_oracle(fano):
    assert (fano.num_vertices, fano.num_chambers) == oracle.fano_vertex_and_chamber_counts() == (14, 21)
    assert all(len(p) == 3 for ps in fano.panels for p in ps)


def test_pg32_counts():
    b = flag_building(3, 2)
    assert b.num_chambers == len(oracle.pg2_flags(4)) == 315
    assert [b.vertex_type.count(t) for t in range(3)] == [15, 35, 15]


def test_pg23_is_thick_with_four_chambers_per_panel():
    b = flag_building(2, 3)
    assert b.num_chambers == 13 * 4
    assert {len(p) for ps in b.panels for p in ps} == {4}


def test_flag_building_rejects_out_of_range():
    with pytest.raises(ValueError):
        flag_building(4, 2)
    with pytest.raises(ValueError):
        flag_building(2, 4)


@pytest.mark.parametrize("n,pairs", [(2, 1), (3, 3), (5, 10)])
def test_rank1_buildings(n, pairs):
    b = rank1_building(n)
    assert b.num_chambers == n
    w0 = longest_element(b.system)
    assert int((b.delta == w0).sum()) // 2 == pairs
    assert b.is_thick() == (n >= 3)


def test_rank1_needs_two_chambers():
    with pytest.raises(ValueError):
        rank1_building(1)


def test_join_counts(fano):
    fs = join(fano, rank1_building(2))
    assert fs.num_chambers == 42 and fs.system.matrix.to_json() == [[1, 3, 2], [3, 1, 2], [2, 2, 1]]
    sq = join(rank1_building(2), rank1_building(2))
    assert sq.num_chambers == 4 and sq.rank == 2
    assert join(preset("hexagon"), rank1_building(2)).num_chambers == 12


@pytest.mark.parametrize("name", ["fano", "hexagon", "thin:B2", "thin:A3", "fano*s0", "fano*r3", "s0*s0", "hexagon*s0", "pg23"])
def test_wd_axioms_hold_on_constructions(name):
    rep = verify_wd_axioms(preset(name))
    assert rep.ok, rep.violations[:3]


def test_corrupted_entry_is_reported(fano):
    bad = corrupt_delta(fano, 0, 5, int((fano.delta[0, 5] + 1) % 6))
    rep = verify_wd_axioms(bad)
    assert not rep.ok
    assert any(v.get("c") in (0, 5) and v.get("d") in (0, 5) for v in rep.violations)
    assert {v["axiom"] for v in rep.violations} >= {"symmetry"}


def test_every_fano_chamber_has_eight_opposites(fano):
    w0 = longest_element(fano.system)
    assert {int(n) for n in (fano.delta == w0).sum(axis=1)} == {8}
    assert oracle.opposite_flag_count(3) == 8


def test_pg32_has_64_opposites_per_chamber():
    b = flag_building(3, 2)
    w0 = longest_element(b.system)
    assert {int(n) for n in (b.delta == w0).sum(axis=1)} == {oracle.opposite_flag_count(4)} == {64}


def test_apartment_examples(fano):
    w0 = longest_element(fano.system)
    same = apartment_containing(fano, 4, 4)
    assert len(same.image) == 6 and 4 in same.image
    e = int(np.nonzero(fano.delta[0] == w0)[0][0])
    ap = apartment_containing(fano, 0, e)
    assert len(ap.image) == 6 and {0, e} <= ap.image
    adj = fano.panel(0, 0)[1]
    ap2 = apartment_containing(fano, 0, adj)
    assert len(ap2.image) == 6 and {0, adj} <= ap2.image


@pytest.mark.parametrize("name", ["fano", "thin:A3", "fano*s0", "pg23"])
def test_charts_preserve_weyl_distance(name):
    b = preset(name)
    sys = b.system
    rng = random.Random(2)
    for _ in range(5):
        c, d = rng.randrange(b.num_chambers), rng.randrange(b.num_chambers)
        ch = apartment_containing(b, c, d, rng)
        x = ch.chamber_of
        expect = sys.mul[sys.inv[:, None], np.arange(sys.order)[None, :]]
        assert (b.delta[np.ix_(x, x)] == expect).all()
        assert {c, d} <= ch.image


def test_apartment_counts(fano):
    assert len(enumerate_apartments(preset("hexagon"))) == 1
    assert len(enumerate_apartments(fano)) == oracle.fano_triangles() == 28
    assert len(enumerate_apartments(rank1_building(3))) == 3


def test_point_line_opposition(fano):
    pts, lines = _points_lines(fano)
    p = pts[0]
    off = [l for l in lines if not fano.has_simplex((p, l))]
    on = [l for l in lines if fano.has_simplex((p, l))]
    assert len(off) == 4 and len(on) == 3
    assert all(are_opposite(fano, (p,), (l,)) for l in off)
    assert not any(are_opposite(fano, (p,), (l,)) for l in on)
    c = fano.chamber_simplex(0)
    assert not are_opposite(fano, c, c)


@given(st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6))
def test_opposition_is_symmetric_and_chart_independent(i, j, seed):
    b = preset("fano")
    simplices = b.simplices()
    x, y = simplices[i % len(simplices)], simplices[j % len(simplices)]
    verdict = are_opposite(b, x, y)
    assert verdict == are_opposite(b, y, x)
    rng = random.Random(seed)
    for _ in range(5):
        c = rng.choice(b.chambers_containing(x))
        d = rng.choice(b.chambers_containing(y))
        assert are_opposite(b, x, y, apartment_containing(b, c, d, rng)) == verdict


def test_fixed_subcomplex_examples(fano):
    assert fixed_subcomplex(fano, []).simplices == fano.whole().simplices
    singer = matrix_automorphism(fano, SINGER)
    assert check_automorphism(fano, singer) is None
    assert not fixed_subcomplex(fano, [singer]).simplices
    inv = matrix_automorphism(fano, TRANSVECTION)
    fixed = fixed_subcomplex(fano, [inv])
    assert fixed.of_dim(1)  # a full flag survives
    assert is_convex(fano, fixed).convex


def test_transvection_fixed_points_match_matrix_eigenvectors(fano):
    inv = matrix_automorphism(fano, TRANSVECTION)
    fixed = fixed_subcomplex(fano, [inv])
    pts = [v for v in fixed.vertices if fano.vertex_type[v] == 0]
    # fixed projective points of the transvection: nonzero v with Mv = v over GF(2)
    m = np.array(TRANSVECTION)
    eig = [v for v in range(1, 8) if ((m @ np.array([(v >> k) & 1 for k in range(3)])) % 2 == np.array([(v >> k) & 1 for k in range(3)])).all()]
    assert len(pts) == len(eig) == 3


def test_non_automorphism_is_rejected_with_witness(fano):
    perm = list(range(fano.num_chambers))
    perm[0], perm[1] = perm[1], perm[0]
    if check_automorphism(fano, perm) is None:
        perm[0], perm[5] = perm[5], perm[0]
    with pytest.raises(ValueError, match="chamber pair"):
        fixed_subcomplex(fano, [perm])


@pytest.mark.parametrize("name", ["fano", "hexagon", "thin:A3", "fano*s0", "r4"])
def test_random_automorphisms_preserve_delta(name):
    b = preset(name)
    rng = random.Random(5)
    for _ in range(5):
        assert check_automorphism(b, random_automorphism(b, rng)) is None


def test_json_round_trip_keeps_construction(fano, tmp_path):
    data = to_json(fano)
    path = tmp_path / "b.json"
    path.write_text(json.dumps(data))
    back = from_json(json.loads(path.read_text()))
    assert back.kind == "flag" and (back.delta == fano.delta).all()
    no_delta = {k: v for k, v in data.items() if k not in ("delta", "elements")}
    no_delta["preset"] = False
    rebuilt = from_json(no_delta)
    assert (rebuilt.delta == fano.delta).all() and rebuilt.kind == "generic"


def test_isomorphism_search(fano):
    res = find_isomorphism(fano, preset("fano"))
    assert res is not None
    assert find_isomorphism(fano, preset("hexagon")) is None
    thin = thin_building(named_system("A2"))
    assert find_isomorphism(thin, preset("hexagon")) is not None
