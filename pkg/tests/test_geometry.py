from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sphbuild.coxeter import longest_element, named_system
from sphbuild.geometry import (
    ConvexCone,
    QSubspace,
    Side,
    act,
    antipodal,
    cone_side,
    dump_matrix,
    identity,
    intersect,
    lp_feasible,
    mat_mul,
    orthogonal_complement,
    realize,
    reflect_along,
    relint_meets_cone,
    span,
    whole_space,
)
from sphbuild.complex import coxeter_complex

F = Fraction
SYSTEMS = ["A1", "A2", "B2", "G2", "A3", "B3", "A2xA1"]
ints = st.integers(-6, 6)


def test_a1_rays():
    r = realize(named_system("A1"))
    assert act(r, 1, (1,)) == (-1,)


def test_a2_gram_form():
    r = realize(named_system("A2"))
    # inverse of [[2,-1],[-1,2]] is (1/3)[[2,1],[1,2]]
    assert r.gram.matrix == ((F(2, 3), F(1, 3)), (F(1, 3), F(2, 3)))


@pytest.mark.parametrize("name", SYSTEMS)
def test_reflections_preserve_gram_and_satisfy_relations(name):
    sys = named_system(name)
    r = realize(sys)
    for m in r.reflections:
        assert r.gram.is_isometry(m)
        assert mat_mul(m, m) == identity(sys.rank)
    for i in range(sys.rank):
        for j in range(sys.rank):
            g = sys.product(sys.generator(i), sys.generator(j))
            k = sys.matrix[i, j]
            p = np.linalg.matrix_power(sys.matrices[g], k)
            assert (p == np.eye(sys.rank, dtype=int)).all()


def test_b2_tiles_the_circle_with_integer_reflections():
    sys = named_system("B2")
    r = realize(sys)
    assert all(isinstance(x, int) for m in r.reflections for row in m for x in row)
    assert len(coxeter_complex(sys).chamber_vertices) == 8


def test_w0_sends_fundamental_weights_to_negatives_of_opposite_type():
    sys = named_system("A2")
    r = realize(sys)
    w0 = longest_element(sys)
    img = act(r, w0, r.weight(0))
    assert img == tuple(-x for x in r.weight(1))
    assert not antipodal(r.weight(0), img)
    assert antipodal(r.weight(1), img)


@given(st.sampled_from(SYSTEMS), st.integers(0, 10**6), st.integers(0, 10**6), st.lists(ints, min_size=4, max_size=4))
def test_action_is_a_homomorphism(name, g, h, x):
    sys = named_system(name)
    r = realize(sys)
    g %= sys.order
    h %= sys.order
    x = x[: sys.rank]
    assert act(r, sys.product(g, h), x) == act(r, g, act(r, h, x))
    assert act(r, 0, x) == tuple(x)


def test_s_is_an_involution_on_weights():
    sys = named_system("A2")
    r = realize(sys)
    s = sys.generator(0)
    x = r.weight(0)
    assert act(r, s, x) == (-1, 1)
    assert act(r, s, act(r, s, x)) == x


def test_cone_side_examples():
    u, v = (1, 0), (0, 1)
    assert cone_side([u], u) is Side.INTERIOR
    assert cone_side([u, v], u) is Side.BOUNDARY
    assert cone_side(ConvexCone((u, v)), (1, 1)) is Side.INTERIOR
    assert cone_side([u, (-1, 0)], (0, 1)) is Side.OUTSIDE
    assert cone_side([u, (-1, 0)], (3, 0)) is Side.INTERIOR
    with pytest.raises(ValueError):
        cone_side([u], (0, 0))


@given(st.lists(st.lists(ints, min_size=3, max_size=3), min_size=1, max_size=4),
       st.lists(ints, min_size=3, max_size=3), st.integers(1, 7), st.integers(1, 7))
def test_cone_side_is_scale_invariant(gens, x, k, j):
    if not any(x):
        return
    base = cone_side(gens, x)
    scaled_gens = [tuple(j * c for c in g) for g in gens[:1]] + gens[1:]
    assert cone_side(gens, tuple(k * c for c in x)) is base
    assert cone_side(scaled_gens, x) is base


@given(st.lists(st.lists(ints, min_size=3, max_size=3), min_size=1, max_size=5), st.lists(ints, min_size=3, max_size=3))
def test_lp_solutions_are_exact(cols, b):
    a = [[c[r] for c in cols] for r in range(3)]
    x = lp_feasible(a, b)
    if x is not None:
        assert all(v >= 0 for v in x)
        assert all(sum(a[r][k] * x[k] for k in range(len(cols))) == b[r] for r in range(3))


def test_lp_detects_infeasibility():
    assert lp_feasible([[1, 1]], [-1]) is None
    assert lp_feasible([[1, -1], [1, 1]], [0, 2]) == (1, 1)


def test_relint_meets_cone_gives_a_witness():
    p = relint_meets_cone([(1, 0), (0, 1)], [(1, 0), (0, 1)])
    assert p is not None and cone_side([(1, 0), (0, 1)], p) is Side.INTERIOR
    assert relint_meets_cone([(-1, 0)], [(1, 0), (0, 1)]) is None


def test_subspace_operations():
    u = span([(1, 0, 0), (0, 1, 0)])
    assert intersect(u, u) == u
    v = span([(0, 1, 0), (0, 0, 1)])
    assert intersect(u, v) == span([(0, 1, 0)])
    assert whole_space(3).dim == 3
    assert u.contains((3, 4, 0)) and not u.contains((0, 0, 1))


def test_orthogonal_complement_in_a2_plane():
    r = realize(named_system("A2"))
    line = span([r.weight(0)])
    comp = orthogonal_complement(line, whole_space(2), r.gram)
    assert comp.dim == 1
    assert r.gram.inner(comp.basis[0], r.weight(0)) == 0


@given(st.lists(st.lists(ints, min_size=3, max_size=3), min_size=2, max_size=2), st.lists(ints, min_size=3, max_size=3))
def test_reflect_along_is_an_involutive_isometry_fixing_the_hyperplane(basis, x):
    r = realize(named_system("A3"))
    h = span(basis, 3)
    if h.dim != 2:
        return
    m = reflect_along(h, whole_space(3), r.gram)
    assert mat_mul(m, m) == identity(3)
    assert r.gram.is_isometry(m)
    for b in h.basis:
        assert tuple(sum(m[i][k] * b[k] for k in range(3)) for i in range(3)) == b
    normal = orthogonal_complement(h, whole_space(3), r.gram).basis[0]
    assert tuple(sum(m[i][k] * normal[k] for k in range(3)) for i in range(3)) == tuple(-c for c in normal)


def test_reflect_along_needs_codimension_one():
    r = realize(named_system("A3"))
    with pytest.raises(ValueError):
        reflect_along(span([(1, 0, 0)]), whole_space(3), r.gram)


def test_antipodal():
    assert antipodal((1, 2), (-2, -4))
    assert not antipodal((1, 2), (1, 2))
    assert not antipodal((1, 2), (-1, 2))
    with pytest.raises(ValueError):
        antipodal((0, 0), (1, 0))


@pytest.mark.parametrize("name", ["A2", "B2", "A3"])
def test_chamber_cones_tile_random_rays(name):
    sys = named_system(name)
    cx = coxeter_complex(sys)
    rng = np.random.default_rng(3)
    for _ in range(60):
        y = tuple(int(v) for v in rng.integers(-9, 10, sys.rank))
        if not any(y):
            continue
        inside = [w for w in range(sys.order) if cone_side([cx.vertex_vec[v] for v in cx.chamber_vertices[w]], y) is Side.INTERIOR]
        closed = [w for w in range(sys.order) if cone_side([cx.vertex_vec[v] for v in cx.chamber_vertices[w]], y) is not Side.OUTSIDE]
        assert len(inside) <= 1 and closed
        cell, (w, dom) = cx.locate(y)
        assert w in closed


def test_matrix_dump_uses_rational_strings():
    assert dump_matrix([[F(1, 3), 2]]) == [["1/3", "2"]]
