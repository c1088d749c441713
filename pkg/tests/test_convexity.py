import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle
from sphbuild.battery import random_convex_subcomplex
from sphbuild.building import apartment_containing, enumerate_apartments, longest_element, preset
from sphbuild.complex import Subcomplex, face_closure
from sphbuild.convexity import (
    connectivity_violations,
    convex_hull,
    hull2,
    is_convex,
    opp_lemma_violations,
    purity_violations,
    replay_witness,
    span_lemma_violations,
)


@pytest.fixture(scope="module")
def hexagon():
    return preset("hexagon")


@pytest.fixture(scope="module")
def fano():
    return preset("fano")


def _positions(b):
    """Vertex -> multiple of 60 degrees, from a Euclidean embedding of the Gram form."""
    ch = b.apartment(0, 0)
    g = np.array([[float(x) for x in row] for row in b.sigma.realization.gram.matrix])
    lt = np.linalg.cholesky(g).T
    pos = {}
    for v in range(b.num_vertices):
        x, y = lt @ np.array(ch.vec(v), dtype=float)
        pos[v] = round(oracle.angle_of(x, y) / (math.pi / 3)) % 6
    return pos


def _arc_hull_oracle(b, pos, x, y):
    """Cells of the hexagon whose open part meets cone(x ∪ y), by angles."""
    pts = sorted({pos[v] for v in x + y})
    if len(pts) == 2 and (pts[1] - pts[0]) % 6 == 3:
        return {(v,) for v in x + y}
    # smallest closed arc (start, length) covering pts
    best = None
    for s in pts:
        length = max((p - s) % 6 for p in pts)
        if best is None or length < best[1]:
            best = (s, length)
    s, length = best
    if length > 3:
        return set(b.whole().simplices)
    covered = {(s + k) % 6 for k in range(length + 1)}
    out = set()
    for cell in b.whole().simplices:
        ps = [pos[v] for v in cell]
        if len(ps) == 1 and ps[0] in covered:
            out.add(cell)
        elif len(ps) == 2 and set(ps) <= covered:
            out.add(cell)
    return out


def test_hull_of_a_chamber_with_itself_is_its_closure(fano):
    c = fano.chamber_simplex(0)
    assert hull2(fano, c, c) == face_closure([c])


def test_hexagon_hull_examples(hexagon):
    pos = _positions(hexagon)
    by_pos = {p: v for v, p in pos.items()}
    e1 = tuple(sorted((by_pos[0], by_pos[1])))
    e3 = tuple(sorted((by_pos[2], by_pos[3])))
    h = hull2(hexagon, e1, e3)
    assert {s for s in h if len(s) == 2} == {e1, tuple(sorted((by_pos[1], by_pos[2]))), e3}
    assert hull2(hexagon, (by_pos[0],), (by_pos[3],)) == {(by_pos[0],), (by_pos[3],)}


@given(st.integers(0, 11), st.integers(0, 11))
def test_hexagon_hulls_match_angle_oracle(i, j):
    b = preset("hexagon")
    pos = _positions(b)
    cells = sorted(b.whole().simplices)
    x, y = cells[i], cells[j]
    assert hull2(b, x, y) == _arc_hull_oracle(b, pos, x, y)


@given(st.integers(0, 10**6), st.integers(0, 10**6), st.integers(1, 9))
def test_sampled_geodesic_points_land_in_the_hull(i, j, t):
    b = preset("thin:A3")
    cells = b.simplices()
    x, y = cells[i % len(cells)], cells[j % len(cells)]
    ch = b.apartment_for(x, y)
    p = ch.barycenter(x)
    q = ch.barycenter(y)
    z = tuple(Fraction(10 - t, 10) * a + Fraction(t, 10) * c for a, c in zip(p, q))
    if not any(z):
        return
    assert ch.push(b.sigma.carrier(z)) in hull2(b, x, y)


def test_hull_is_chart_independent_on_100_pairs(fano):
    rng = random.Random(11)
    simplices = fano.simplices()
    for _ in range(100):
        x, y = rng.choice(simplices), rng.choice(simplices)
        ref = hull2(fano, x, y)
        c, d = rng.choice(fano.chambers_containing(x)), rng.choice(fano.chambers_containing(y))
        assert hull2(fano, x, y, apartment_containing(fano, c, d, rng)) == ref


def test_convex_hull_examples(fano):
    c = fano.chamber_simplex(2)
    assert convex_hull(fano, [c]).simplices == face_closure([c])
    p = 0
    line = next(v for v in range(fano.num_vertices) if fano.vertex_type[v] == 1 and not fano.has_simplex((p, v)))
    assert convex_hull(fano, [(p,), (line,)]).simplices == {(p,), (line,)}
    w0 = longest_element(fano.system)
    e = int(np.nonzero(fano.delta[0] == w0)[0][0])
    hull = convex_hull(fano, [fano.chamber_simplex(0), fano.chamber_simplex(e)])
    assert hull.simplices == apartment_containing(fano, 0, e).simplices()


def test_is_convex_examples(fano, hexagon):
    for ch in enumerate_apartments(fano)[:5]:
        assert is_convex(fano, Subcomplex(fano, ch.simplices())).convex
    pos = _positions(hexagon)
    by_pos = {p: v for v, p in pos.items()}
    path = Subcomplex.closure_of(hexagon, [tuple(sorted((by_pos[k], by_pos[k + 1]))) for k in range(4)])
    cert = is_convex(hexagon, path)
    assert not cert.convex
    assert {pos[cert.a[0]], pos[cert.b[0]]} & {0, 4} or {pos[v] for v in cert.a + cert.b} >= {0, 4}
    assert replay_witness(hexagon, cert) and replay_witness(hexagon, cert.to_json())
    pair = Subcomplex.closure_of(hexagon, [(by_pos[0],), (by_pos[3],)])
    assert is_convex(hexagon, pair).convex
    with pytest.raises(ValueError):
        is_convex(hexagon, Subcomplex(hexagon, frozenset({hexagon.chamber_simplex(0)})))


def test_removing_a_simplex_breaks_convexity_with_replayable_witness(fano):
    ap = enumerate_apartments(fano)[3]
    full = ap.simplices()
    victim = sorted(s for s in full if len(s) == 2)[2]
    a = Subcomplex(fano, frozenset(full - {victim}))
    cert = is_convex(fano, a)
    assert not cert.convex and cert.missing == victim
    assert replay_witness(fano, cert.to_json())


def test_witness_replay_rejects_tampering(hexagon):
    pos = _positions(hexagon)
    by_pos = {p: v for v, p in pos.items()}
    path = Subcomplex.closure_of(hexagon, [tuple(sorted((by_pos[k], by_pos[k + 1]))) for k in range(4)])
    data = is_convex(hexagon, path).to_json()
    data["witness"]["point"] = [str(-Fraction(x)) for x in data["witness"]["point"]]
    assert not replay_witness(hexagon, data)


@given(st.integers(0, 10**9))
def test_convex_hull_is_idempotent_and_monotone(seed):
    b = preset("fano")
    rng = random.Random(seed)
    simplices = b.simplices()
    seeds = [rng.choice(simplices) for _ in range(2)]
    h = convex_hull(b, seeds)
    assert convex_hull(b, h.simplices).simplices == h.simplices
    more = convex_hull(b, seeds + [rng.choice(simplices)])
    assert h.simplices <= more.simplices
    assert is_convex(b, h).convex


@given(st.sampled_from(["fano", "hexagon", "thin:A3"]), st.integers(0, 10**9))
def test_structural_lemmas_on_random_convex_subcomplexes(name, seed):
    b = preset(name)
    a = random_convex_subcomplex(b, random.Random(seed)).subcomplex
    assert is_convex(b, a).convex
    assert purity_violations(a) == []
    assert connectivity_violations(a) == []
    assert span_lemma_violations(b, a) == []
    assert opp_lemma_violations(b, a) == []
