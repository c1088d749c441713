"""Typed simplicial complexes: the Coxeter complex and subcomplexes of buildings.

A simplex is a sorted tuple of vertex ids.  Vertex types live with the
ambient object, so a simplex never carries two vertices of the same type.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .coxeter import CoxeterSystem, longest_element, minimal_coset_rep, opposition_type_map
from .geometry import Realization, realize, relint_meets_cone

Simplex = tuple  # sorted tuple[int, ...]


@dataclass(frozen=True)
class ParabolicCoset:
    """The coset rep * W_J, stored with its shortest representative."""

    rep: int
    types: frozenset[int]


def coset(sys: CoxeterSystem, w: int, types: Iterable[int]) -> ParabolicCoset:
    t = frozenset(types)
    return ParabolicCoset(minimal_coset_rep(sys, w, t), t)


def thin_opposite(sys: CoxeterSystem, cell: ParabolicCoset) -> ParabolicCoset:
    """-|wW_J| = |w w0 W_{J*}|."""
    w0 = longest_element(sys)
    return coset(sys, sys.product(cell.rep, w0), opposition_type_map(sys, cell.types))


@dataclass(frozen=True)
class Cell:
    rep: int
    cotype: frozenset[int]
    vertices: Simplex

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


class CoxeterComplex:
    """The Coxeter complex of a finite system, with its exact realization.

    Vertex ``v`` of type ``i`` is the coset ``rep W_{S-{i}}`` and is realized
    by the integer vector ``rep . omega_i`` in weight coordinates.
    """

    def __init__(self, sys: CoxeterSystem):
        self.system = sys
        self.realization: Realization = realize(sys)
        n = sys.rank
        self.w0 = longest_element(sys)
        self.opp_type = [next(iter(opposition_type_map(sys, {i}))) for i in range(n)]
        self.vertex_type: list[int] = []
        self.vertex_rep: list[int] = []
        self.vertex_vec: list[tuple[int, ...]] = []
        vid: dict[tuple[int, int], int] = {}
        chamber_vertices = np.empty((sys.order, n), dtype=np.int32)
        for w in range(sys.order):
            for i in range(n):
                rep = minimal_coset_rep(sys, w, [s for s in range(n) if s != i])
                key = (i, rep)
                if key not in vid:
                    vid[key] = len(self.vertex_type)
                    self.vertex_type.append(i)
                    self.vertex_rep.append(rep)
                    self.vertex_vec.append(tuple(int(x) for x in sys.matrices[rep][:, i]))
                chamber_vertices[w, i] = vid[key]
        self.chamber_vertices = chamber_vertices
        self.cells: list[Cell] = []
        self.cell_index: dict[Simplex, int] = {}
        for w in range(sys.order):
            for k in range(1, n + 1):
                for types in combinations(range(n), k):
                    verts = tuple(sorted(int(chamber_vertices[w, i]) for i in types))
                    if verts not in self.cell_index:
                        cot = frozenset(range(n)) - frozenset(types)
                        self.cell_index[verts] = len(self.cells)
                        self.cells.append(Cell(minimal_coset_rep(sys, w, cot), cot, verts))
        self.chamber_cell = [self.cell_index[tuple(sorted(int(x) for x in chamber_vertices[w]))] for w in range(sys.order)]
        self.opp_vertex = [
            int(chamber_vertices[sys.mul[self.vertex_rep[v], self.w0], self.opp_type[self.vertex_type[v]]])
            for v in range(len(self.vertex_type))
        ]
        # left translation of vertices: (g, v) -> g.v
        reps = np.array(self.vertex_rep)
        types_ = np.array(self.vertex_type)
        self.left = chamber_vertices[sys.mul[:, reps], types_[None, :]]
        self._hull_cache: dict[tuple[int, int], frozenset[int]] = {}

    # -- basic queries

    @property
    def rank(self) -> int:
        return self.system.rank

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_type)

    def cell_of(self, vertices: Iterable[int]) -> int | None:
        return self.cell_index.get(tuple(sorted(vertices)))

    def cell_coset(self, c: int) -> ParabolicCoset:
        cell = self.cells[c]
        return ParabolicCoset(cell.rep, cell.cotype)

    def cell_from_coset(self, pc: ParabolicCoset) -> int:
        types = [i for i in range(self.rank) if i not in pc.types]
        return self.cell_index[tuple(sorted(int(self.chamber_vertices[pc.rep, i]) for i in types))]

    def vectors(self, c: int) -> list[tuple[int, ...]]:
        return [self.vertex_vec[v] for v in self.cells[c].vertices]

    def barycenter(self, c: int) -> tuple[int, ...]:
        vs = self.vectors(c)
        return tuple(sum(v[k] for v in vs) for k in range(self.rank))

    def opposite(self, c: int) -> int:
        return self.cell_index[tuple(sorted(self.opp_vertex[v] for v in self.cells[c].vertices))]

    def translate(self, g: int, c: int) -> int:
        return self.cell_index[tuple(sorted(int(self.left[g, v]) for v in self.cells[c].vertices))]

    def faces(self, c: int) -> list[int]:
        vs = self.cells[c].vertices
        return [self.cell_index[f] for k in range(1, len(vs) + 1) for f in combinations(vs, k)]

    # -- exact point location

    def locate(self, y: Sequence) -> tuple[int, tuple]:
        """Carrier cell of the ray y and the chamber element w with w^-1 y dominant."""
        if all(x == 0 for x in y):
            raise ValueError("zero vector has no carrier")
        sys = self.system
        c = sys.cartan
        n = self.rank
        cur = list(y)
        w = 0
        while True:
            i = next((k for k in range(n) if cur[k] < 0), None)
            if i is None:
                break
            yi = cur[i]
            cur = [cur[j] - yi * c[i][j] for j in range(n)]
            w = int(sys.mul[w, sys.generator(i)])
        verts = [int(self.chamber_vertices[w, i]) for i in range(n) if cur[i] != 0]
        return self.cell_index[tuple(sorted(verts))], (w, tuple(cur))

    def carrier(self, y: Sequence) -> int:
        return self.locate(y)[0]

    # -- hulls

    def hull(self, a: int, b: int) -> frozenset[int]:
        """Cells whose relative interior meets cone(vertex rays of a and b)."""
        g = self.cells[a].rep
        ginv = int(self.system.inv[g])
        ka = self.translate(ginv, a)
        kb = self.translate(ginv, b)
        key = (ka, kb)
        res = self._hull_cache.get(key)
        if res is None:
            res = self._hull_direct(ka, kb)
            self._hull_cache[key] = res
        return frozenset(self.translate(g, c) for c in res)

    def _hull_direct(self, a: int, b: int) -> frozenset[int]:
        gens = list(dict.fromkeys(self.vectors(a) + self.vectors(b)))
        return frozenset(c for c in range(len(self.cells)) if relint_meets_cone(self.vectors(c), gens) is not None)

    def hull_witness(self, a: int, b: int, c: int):
        """A point of relint(c) inside cone(a ∪ b), or None."""
        gens = list(dict.fromkeys(self.vectors(a) + self.vectors(b)))
        return relint_meets_cone(self.vectors(c), gens)


_COMPLEXES: dict[int, CoxeterComplex] = {}


def coxeter_complex(sys: CoxeterSystem) -> CoxeterComplex:
    cx = _COMPLEXES.get(id(sys))
    if cx is None or cx.system is not sys:
        cx = CoxeterComplex(sys)
        _COMPLEXES[id(sys)] = cx
    return cx


# --------------------------------------------------------------------------
# subcomplexes


def face_closure(simplices: Iterable[Simplex]) -> frozenset[Simplex]:
    out: set[Simplex] = set()
    for s in simplices:
        s = tuple(sorted(s))
        if s in out:
            continue
        for k in range(1, len(s) + 1):
            out.update(combinations(s, k))
    return frozenset(out)


def is_face_closed(simplices: frozenset[Simplex]) -> bool:
    return all(f in simplices for s in simplices for k in range(1, len(s)) for f in combinations(s, k))


def maximal_simplices(simplices: Iterable[Simplex]) -> list[Simplex]:
    ss = sorted(set(simplices), key=lambda s: (-len(s), s))
    covered: set[Simplex] = set()
    out = []
    for s in ss:
        if s in covered:
            continue
        out.append(s)
        for k in range(1, len(s)):
            covered.update(combinations(s, k))
    return sorted(out)


@dataclass(frozen=True)
class Subcomplex:
    """A face-closed set of simplices of an ambient building."""

    ambient: object
    simplices: frozenset

    @classmethod
    def closure_of(cls, ambient, simplices: Iterable[Sequence[int]]) -> "Subcomplex":
        return cls(ambient, face_closure(tuple(sorted(s)) for s in simplices))

    def __post_init__(self):
        missing = [s for s in self.simplices if not self.ambient.has_simplex(s)]
        if missing:
            raise ValueError(f"simplex {sorted(missing)[0]} is not in the ambient building")

    def __contains__(self, s) -> bool:
        return tuple(sorted(s)) in self.simplices

    def __len__(self) -> int:
        return len(self.simplices)

    @property
    def dim(self) -> int:
        return max((len(s) for s in self.simplices), default=0) - 1

    def of_dim(self, k: int) -> list[Simplex]:
        return sorted(s for s in self.simplices if len(s) == k + 1)

    @property
    def vertices(self) -> list[int]:
        return sorted(s[0] for s in self.simplices if len(s) == 1)

    def to_json(self) -> list[list[list[int]]]:
        vt = self.ambient.vertex_type
        return [[[int(vt[v]), int(v)] for v in s] for s in sorted(self.simplices, key=lambda s: (len(s), s))]

    @classmethod
    def from_json(cls, ambient, data) -> "Subcomplex":
        simplices = []
        for s in data:
            verts = []
            for t, v in s:
                if ambient.vertex_type[v] != t:
                    raise ValueError(f"vertex {v} has type {ambient.vertex_type[v]}, file says {t}")
                verts.append(int(v))
            simplices.append(tuple(sorted(verts)))
        return cls.closure_of(ambient, simplices)


@dataclass(frozen=True)
class PurityReport:
    dimension: int
    pure: bool
    witness: Simplex | None


def purity_and_dimension(a: Subcomplex) -> PurityReport:
    if not a.simplices:
        raise ValueError("empty subcomplex")
    m = a.dim
    lonely = [s for s in maximal_simplices(a.simplices) if len(s) - 1 < m]
    if not lonely:
        return PurityReport(m, True, None)
    witness = sorted(lonely, key=lambda s: (-len(s), s))[0]
    return PurityReport(m, False, witness)


@dataclass(frozen=True)
class ChamberGraph:
    nodes: tuple[Simplex, ...]
    edges: frozenset[tuple[int, int]]

    def neighbours(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.nodes]
        for i, j in sorted(self.edges):
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def components(self) -> list[list[int]]:
        adj = self.neighbours()
        seen = [False] * len(self.nodes)
        comps = []
        for s in range(len(self.nodes)):
            if seen[s]:
                continue
            seen[s] = True
            stack, comp = [s], []
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        stack.append(y)
            comps.append(sorted(comp))
        return comps

    def to_dot(self, name: str = "chambers") -> str:
        lines = [f"graph {name} {{"]
        for i, s in enumerate(self.nodes):
            lines.append(f'  c{i} [label="{"-".join(map(str, s))}"];')
        for i, j in sorted(self.edges):
            lines.append(f"  c{i} -- c{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def panel_map(tops: Iterable[Simplex]) -> dict[Simplex, list[Simplex]]:
    out: dict[Simplex, list[Simplex]] = {}
    for s in tops:
        for f in combinations(s, len(s) - 1):
            if f:
                out.setdefault(f, []).append(s)
    return out


def chamber_graph(a: Subcomplex) -> tuple[ChamberGraph, bool]:
    rep = purity_and_dimension(a)
    if not rep.pure:
        raise ValueError(f"subcomplex is not pure; lonely simplex {rep.witness}")
    if rep.dimension < 1:
        raise ValueError("chamber graph needs dimension >= 1")
    tops = a.of_dim(rep.dimension)
    idx = {s: i for i, s in enumerate(tops)}
    edges = set()
    for cs in panel_map(tops).values():
        for x, y in combinations(cs, 2):
            i, j = sorted((idx[x], idx[y]))
            edges.add((i, j))
    g = ChamberGraph(tuple(tops), frozenset(edges))
    return g, len(g.components()) == 1
