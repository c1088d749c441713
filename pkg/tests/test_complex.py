import pytest
from hypothesis import given
from hypothesis import strategies as st

from sphbuild.building import preset
from sphbuild.complex import (
    ParabolicCoset,
    Subcomplex,
    chamber_graph,
    coset,
    coxeter_complex,
    purity_and_dimension,
    thin_opposite,
)
from sphbuild.coxeter import longest_element, named_system, parabolic_elements
from sphbuild.geometry import antipodal

# (vertices, cells) per system; vertices = sum over types of |W| / |W_{S-{s}}|
COUNTS = {"A1": (2, 2), "A2": (6, 12), "B2": (8, 16), "A3": (14, 74), "A2xA1": (8, 38), "B3": (26, 146)}


def _vertex_count_formula(name):
    sys = named_system(name)
    return sum(sys.order // len(parabolic_elements(sys, [t for t in range(sys.rank) if t != s])) for s in range(sys.rank))


@pytest.mark.parametrize("name", sorted(COUNTS))
def test_coxeter_complex_counts(name):
    cx = coxeter_complex(named_system(name))
    assert (cx.num_vertices, len(cx.cells)) == COUNTS[name]
    assert cx.num_vertices == _vertex_count_formula(name)
    assert len(cx.chamber_cell) == named_system(name).order


def test_a1_is_a_zero_sphere():
    cx = coxeter_complex(named_system("A1"))
    assert cx.num_vertices == 2 and len(cx.chamber_cell) == 2


def test_a2_is_a_hexagon():
    hexagon = preset("hexagon")
    g, connected = chamber_graph(hexagon.whole())
    assert connected and len(g.nodes) == 6 and len(g.edges) == 6
    assert all(len(n) == 2 for n in g.neighbours())


def test_vertex_rays_are_integer_weight_images():
    cx = coxeter_complex(named_system("A2"))
    assert sorted(cx.vertex_vec) == sorted([(1, 0), (0, 1), (-1, 1), (1, -1), (-1, 0), (0, -1)])


@pytest.mark.parametrize("name", ["A2", "B3", "A2xA1", "A3"])
def test_full_chamber_graph_is_connected_and_regular(name):
    b = preset(f"thin:{name}")
    g, connected = chamber_graph(b.whole())
    assert connected
    assert {len(n) for n in g.neighbours()} == {b.rank}


def test_thin_opposite_examples():
    sys = named_system("A2")
    w0 = longest_element(sys)
    chamber = ParabolicCoset(0, frozenset())
    assert thin_opposite(sys, chamber) == ParabolicCoset(w0, frozenset())
    v = coset(sys, 0, {0})
    opp = thin_opposite(sys, v)
    assert opp.types == frozenset({1})
    assert opp == coset(sys, w0, {1})
    a1 = named_system("A1")
    assert thin_opposite(a1, coset(a1, 0, set())) == coset(a1, 1, set())


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "A3", "B3", "A2xA1"])
def test_thin_opposite_is_the_antipodal_map(name):
    sys = named_system(name)
    cx = coxeter_complex(sys)
    for c in range(len(cx.cells)):
        pc = cx.cell_coset(c)
        opp = thin_opposite(sys, pc)
        assert thin_opposite(sys, opp) == pc
        oc = cx.cell_from_coset(opp)
        assert oc == cx.opposite(c)
        for v in cx.cells[c].vertices:
            w = cx.opp_vertex[v]
            assert w in cx.cells[oc].vertices
            assert antipodal(cx.vertex_vec[v], cx.vertex_vec[w])


def test_purity_examples():
    b = preset("hexagon")
    chamber = Subcomplex.closure_of(b, [b.chamber_simplex(0)])
    rep = purity_and_dimension(chamber)
    assert rep.pure and rep.dimension == 1
    g, _ = chamber_graph(b.whole())
    path = Subcomplex.closure_of(b, g.nodes[:1] + tuple(g.nodes[j] for j in g.neighbours()[0][:1]))
    assert purity_and_dimension(path).pure
    e = b.chamber_simplex(0)
    far = next(v for v in range(b.num_vertices) if v not in e and not any(b.has_simplex((v, x)) for x in e))
    mixed = Subcomplex.closure_of(b, [e, (far,)])
    rep = purity_and_dimension(mixed)
    assert not rep.pure and rep.witness == (far,)
    with pytest.raises(ValueError):
        purity_and_dimension(Subcomplex(b, frozenset()))


def test_chamber_graph_examples():
    b = preset("hexagon")
    one = Subcomplex.closure_of(b, [b.chamber_simplex(0)])
    g, ok = chamber_graph(one)
    assert ok and len(g.nodes) == 1
    e0 = b.chamber_simplex(0)
    far = next(c for c in range(6) if not set(b.chamber_simplex(c)) & set(e0))
    two = Subcomplex.closure_of(b, [e0, b.chamber_simplex(far)])
    assert not chamber_graph(two)[1]
    lonely = next(v for v in range(6) if v not in e0 and not any(b.has_simplex((v, x)) for x in e0))
    with pytest.raises(ValueError):
        chamber_graph(Subcomplex.closure_of(b, [e0, (lonely,)]))


def test_subcomplex_json_round_trip_and_type_check():
    b = preset("fano")
    a = Subcomplex.closure_of(b, [b.chamber_simplex(3)])
    assert Subcomplex.from_json(b, a.to_json()) == a
    bad = [[[1 - t, v] for t, v in s] for s in a.to_json()]
    with pytest.raises(ValueError):
        Subcomplex.from_json(b, bad)
    with pytest.raises(ValueError):
        Subcomplex(b, frozenset({(0, 1)}))  # two points never form a simplex


def test_chamber_graph_dot_export():
    g, _ = chamber_graph(preset("hexagon").whole())
    dot = g.to_dot()
    assert dot.startswith("graph chambers {") and dot.count("--") == 6


@given(st.sampled_from(["A2", "B2", "A3"]), st.integers(0, 10**6), st.integers(0, 10**6))
def test_translation_preserves_opposition(name, g, c):
    cx = coxeter_complex(named_system(name))
    g %= cx.system.order
    c %= len(cx.cells)
    assert cx.translate(g, cx.opposite(c)) == cx.opposite(cx.translate(g, c))
