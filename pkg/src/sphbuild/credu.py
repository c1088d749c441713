"""Complete reducibility and the reduction of a completely reducible convex
subcomplex to a thick building joined with 0-spheres.

All geometry happens in apartment-chart coordinates (weight basis of the
Coxeter complex).  Maps between charts are group elements, so every
transport is exact and type-preserving.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .building import ApartmentChart, WMetricBuilding, are_opposite, rank1_building, verify_wd_axioms
from .complex import Simplex, Subcomplex, maximal_simplices, panel_map
from .convexity import hull2, is_convex
from .coxeter import CoxeterMatrix, system_for
from .errors import InvariantViolation
from .geometry import (
    QSubspace,
    dot,
    dump_matrix,
    fmt,
    identity,
    intersect,
    mat_mul,
    mat_vec,
    orthogonal_complement,
    reflect_along,
    span,
)

MAX_REFLECTION_GROUP = 5000


def _key(s: Simplex):
    return (len(s), s)


def _tops(a: Subcomplex) -> list[Simplex]:
    return a.of_dim(a.dim)


# --------------------------------------------------------------------------
# opposition and complete reducibility


def opposites_in(a: Subcomplex, x: Sequence[int]) -> list[Simplex]:
    """Every simplex of A opposite x, by exhaustive scan."""
    x = tuple(sorted(x))
    if x not in a.simplices:
        raise ValueError(f"simplex {x} is not in the subcomplex")
    b: WMetricBuilding = a.ambient
    sigma = b.sigma
    want = frozenset(sigma.opp_type[t] for t in b.types(x))
    return [y for y in a.of_dim(len(x) - 1) if b.types(y) == want and are_opposite(b, x, y)]


class Mode(enum.Enum):
    ALL = "all"
    VERTICES = "vertices"
    ONE_PAIR = "one_pair"


@dataclass(frozen=True)
class CRCertificate:
    mode: Mode
    completely_reducible: bool
    witness: Simplex | None = None  # simplex with no opposite in A
    pair: tuple[Simplex, Simplex] | None = None

    def to_json(self) -> dict:
        return {
            "mode": self.mode.value,
            "cr": self.completely_reducible,
            "witness": list(self.witness) if self.witness is not None else None,
            "pair": [list(p) for p in self.pair] if self.pair else None,
        }


def complete_reducibility(a: Subcomplex, mode: Mode | str = Mode.ALL) -> CRCertificate:
    """Decide complete reducibility by checking all simplices, only vertices, or one top pair."""
    mode = Mode(mode)
    if mode is Mode.ONE_PAIR:
        tops = _tops(a)
        for x in tops:
            opp = opposites_in(a, x)
            if opp:
                return CRCertificate(mode, True, pair=(x, opp[0]))
        return CRCertificate(mode, False, witness=tops[0])
    pool = sorted(a.simplices, key=_key) if mode is Mode.ALL else [(v,) for v in a.vertices]
    for x in pool:
        if not opposites_in(a, x):
            return CRCertificate(mode, False, witness=x)
    return CRCertificate(mode, True)


# --------------------------------------------------------------------------
# Levi spheres


@dataclass(eq=False)
class LeviSphere:
    """The great m-sphere spanned by an opposite pair of top simplices of A."""

    a: Simplex
    b: Simplex
    chart: ApartmentChart
    span: QSubspace
    cells: frozenset  # building simplices lying in the sphere

    @property
    def m(self) -> int:
        return len(self.a) - 1

    def tops(self) -> list[Simplex]:
        return sorted(s for s in self.cells if len(s) == len(self.a))

    def vec(self, v: int) -> tuple[int, ...]:
        return self.chart.vec(v)

    def barycenter(self, s: Sequence[int]) -> tuple[int, ...]:
        return self.chart.barycenter(s)

    def rep(self, s: Sequence[int]) -> int:
        return self.chart.rep(s)

    def to_json(self) -> dict:
        return {"a": list(self.a), "b": list(self.b), "span": self.span.to_json(), "tops": [list(t) for t in self.tops()]}


def levi_sphere(a: Subcomplex, x: Sequence[int], y: Sequence[int], chart: ApartmentChart | None = None) -> LeviSphere:
    b: WMetricBuilding = a.ambient
    x, y = tuple(sorted(x)), tuple(sorted(y))
    if not are_opposite(b, x, y):
        raise ValueError(f"{x} and {y} are not opposite")
    chart = chart or b.apartment_for(x, y)
    cells = hull2(b, x, y, chart)
    outside = sorted((s for s in cells if s not in a.simplices), key=_key)
    if outside:
        raise InvariantViolation("Levi sphere leaves the subcomplex", {"a": list(x), "b": list(y), "outside": list(outside[0])})
    return LeviSphere(x, y, chart, span(chart.vectors(x)), cells)


def levi_sphere_violations(a: Subcomplex, s: LeviSphere) -> list[dict]:
    """Closed pseudomanifold of the right dimension inside A, spanned by its base simplex."""
    out = []
    if not s.cells <= a.simplices:
        out.append({"check": "levi-in-A", "a": list(s.a)})
    tops = s.tops()
    if s.m == 0:
        if len(tops) != 2:
            out.append({"check": "levi-0-sphere", "a": list(s.a), "size": len(tops)})
        return out
    for p, cs in panel_map(tops).items():
        if len(cs) != 2:
            out.append({"check": "levi-closed", "a": list(s.a), "panel": list(p), "count": len(cs)})
            break
    if any(not s.span.contains_all(s.chart.vectors(t)) for t in tops):
        out.append({"check": "levi-span", "a": list(s.a)})
    return out


def _chart_matrix(g_from: int, g_to: int, b: WMetricBuilding) -> int:
    """Group element taking chart-1 coordinates of a simplex to chart-2 coordinates."""
    sys = b.system
    return int(sys.mul[g_to, sys.inv[g_from]])


def extend_to_opposite(a: Subcomplex, c: Sequence[int], s: LeviSphere) -> Simplex:
    """An opposite of the top simplex c inside the Levi sphere s.

    The geodesic from an interior point u of c to an interior point v of the
    base simplex is continued inside s up to distance pi from u.
    """
    b: WMetricBuilding = a.ambient
    c = tuple(sorted(c))
    if are_opposite(b, c, s.a):
        return s.a
    sys = b.system
    chart1 = b.apartment_for(c, s.a)
    u = chart1.barycenter(c)
    if not span(chart1.vectors(s.a)).contains(u):
        raise InvariantViolation("geodesic from c does not enter the base simplex through its span",
                                 {"c": list(c), "base": list(s.a), "chart": [chart1.base, chart1.opposite]})
    h = _chart_matrix(chart1.rep(s.a), s.rep(s.a), b)
    w = tuple(-x for x in mat_vec(sys.action(h), u))
    cell = b.sigma.carrier(w)
    out = s.chart.push(cell)
    if out not in a.simplices or not are_opposite(b, c, out):
        raise InvariantViolation("continued geodesic does not end in an opposite simplex of A",
                                 {"c": list(c), "base": list(s.a), "found": list(out)})
    return out


def _lift(a: Subcomplex, x: Sequence[int]) -> Simplex:
    x = tuple(sorted(x))
    if len(x) == a.dim + 1:
        return x
    return next(t for t in _tops(a) if set(x) <= set(t))


def common_levi_sphere(a: Subcomplex, x: Sequence[int], y: Sequence[int]) -> LeviSphere:
    """A Levi sphere of A containing both simplices."""
    b: WMetricBuilding = a.ambient
    x, y = _lift(a, x), _lift(a, y)
    cache = b.info.setdefault("_common_levi", {})
    key = (id(a.simplices), x, y)
    hit = cache.get(key)
    if hit is not None and hit[0] is a.simplices:
        return hit[1]
    if are_opposite(b, x, y):
        res = levi_sphere(a, x, y)
    else:
        opp = opposites_in(a, y)
        if not opp:
            raise ValueError(f"{y} has no opposite; subcomplex is not completely reducible")
        d = extend_to_opposite(a, x, levi_sphere(a, y, opp[0]))
        res = levi_sphere(a, x, d)
        if y not in res.cells:
            raise InvariantViolation("constructed Levi sphere misses the second simplex",
                                     {"a": list(x), "b": list(y), "d": list(d)})
    cache[key] = (a.simplices, res)
    return res


# --------------------------------------------------------------------------
# singular structure


def singular_panels(a: Subcomplex) -> frozenset[Simplex]:
    if a.dim < 1:
        raise ValueError("singular panels need dimension >= 1")
    return frozenset(p for p, cs in panel_map(_tops(a)).items() if len(cs) >= 3)


@dataclass(frozen=True)
class Wall:
    subspace: QSubspace
    panels: tuple[Simplex, ...]  # (m-1)-simplices of the sphere inside the wall

    def to_json(self) -> dict:
        return {"basis": self.subspace.to_json(), "panels": [list(p) for p in self.panels]}


def walls_in(a: Subcomplex, s: LeviSphere, singular: frozenset | None = None) -> list[Wall]:
    """Great spheres of s spanned by singular panels, each checked to be a union of singular panels."""
    singular = singular_panels(a) if singular is None else singular
    panels = sorted(p for p in s.cells if len(p) == len(s.a) - 1)
    walls: dict[QSubspace, Wall] = {}
    for p in panels:
        if p not in singular:
            continue
        h = span(s.chart.vectors(p), s.span.ambient)
        if h in walls:
            continue
        carried = tuple(q for q in panels if h.contains_all(s.chart.vectors(q)))
        bad = [q for q in carried if q not in singular]
        if bad:
            raise InvariantViolation("great sphere through a singular panel carries a non-singular panel",
                                     {"sphere": list(s.a), "wall": h.to_json(), "panel": list(bad[0])})
        walls[h] = Wall(h, carried)
    return sorted(walls.values(), key=lambda w: w.panels)


def _side(normal, gram, x) -> int:
    v = gram.inner(normal, x)
    return (v > 0) - (v < 0)


@dataclass(frozen=True)
class Hemisphere:
    sphere: LeviSphere
    boundary: QSubspace  # in the sphere's chart coordinates
    cells: frozenset
    boundary_cells: frozenset


def hemisphere(s: LeviSphere, wall: QSubspace, side: int) -> Hemisphere:
    """Closed half of s on the given side (+1 or -1) of a codimension-1 subspace."""
    gram = s.chart.sigma.realization.gram
    normal = orthogonal_complement(wall, s.span, gram).basis[0]
    cells, bd = set(), set()
    for x in s.cells:
        signs = {_side(normal, gram, s.vec(v)) for v in x}
        if signs <= {0, side}:
            cells.add(x)
            if signs == {0}:
                bd.add(x)
    return Hemisphere(s, wall, frozenset(cells), frozenset(bd))


def replacement_hemisphere(a: Subcomplex, s: LeviSphere, wall: Wall) -> Hemisphere:
    """The hemisphere Y bounded by the wall's panels, leaving s through a third top simplex."""
    b: WMetricBuilding = a.ambient
    p = wall.panels[0]
    in_s = set(s.tops())
    outer = next((t for t in _tops(a) if set(p) <= set(t) and t not in in_s), None)
    if outer is None:
        raise InvariantViolation("singular panel has no third top simplex", {"panel": list(p)})
    sig = s.chart.sigma
    neg_p = s.chart.push(sig.opposite(s.chart.pull(p)))
    e = _lift_within(s, neg_p)
    s2 = common_levi_sphere(a, outer, e)
    cells = hull2(b, outer, neg_p, s2.chart)
    h2 = span(s2.chart.vectors(p), s2.span.ambient)
    bd = frozenset(x for x in cells if h2.contains_all(s2.chart.vectors(x)))
    return Hemisphere(s2, h2, cells, bd)


def _lift_within(s: LeviSphere, x: Simplex) -> Simplex:
    return next(t for t in s.tops() if set(x) <= set(t))


def surgery(a: Subcomplex, s: LeviSphere, wall: Wall, side: int, y: Hemisphere) -> LeviSphere:
    """Replace the half of s opposite `side` by y; the result is again a Levi sphere."""
    if wall.subspace.dim != s.span.dim - 1 or any(p not in s.cells for p in wall.panels):
        raise ValueError("not a wall of this sphere")
    z = hemisphere(s, wall.subspace, side)
    if y.boundary_cells != z.boundary_cells:
        raise ValueError("replacement hemisphere is not bounded by the wall")
    if z.cells & y.cells != z.boundary_cells:
        raise InvariantViolation("hemispheres overlap beyond the wall",
                                 {"sphere": list(s.a), "wall": wall.subspace.to_json()})
    target = z.cells | y.cells
    b: WMetricBuilding = a.ambient
    m1 = len(s.a)
    ztops = sorted(t for t in z.cells if len(t) == m1)
    ytops = sorted(t for t in y.cells if len(t) == m1)
    for c in ztops:
        for d in ytops:
            if are_opposite(b, c, d):
                res = levi_sphere(a, c, d)
                if res.cells != target:
                    raise InvariantViolation("glued hemispheres differ from the Levi sphere they span",
                                             {"a": list(c), "b": list(d)})
                return res
    raise InvariantViolation("glued hemispheres contain no opposite pair", {"sphere": list(s.a)})


# --------------------------------------------------------------------------
# reflection group of a Levi sphere


def _freeze(m) -> tuple:
    return tuple(tuple(Fraction(x) for x in row) for row in m)


@dataclass(eq=False)
class ReflectionData:
    sphere: LeviSphere
    walls: list[Wall]
    reflections: list[tuple]  # one ambient matrix per wall, same order
    group: list[tuple]  # all elements of W_S as ambient matrices
    words: list[tuple[int, ...]]  # words in the simple reflections, parallel to group
    s0: QSubspace
    s_plus: QSubspace
    normals: list[tuple]  # wall normals, oriented so the base barycenter is on the positive side
    simple: list[int]  # indices into walls bounding the fundamental chamber
    coxeter: CoxeterMatrix | None

    @property
    def k(self) -> int:
        return self.s0.dim

    @property
    def rank(self) -> int:
        return len(self.simple)

    def region(self, x) -> tuple[int, ...]:
        gram = self.sphere.chart.sigma.realization.gram
        return tuple(_side(n, gram, x) for n in self.normals)

    def in_fundamental(self, x) -> bool:
        return all(s >= 0 for s in self.region(x))

    def element_of_region(self, x) -> int:
        """Index g into ``group`` with g^-1 x in the fundamental domain."""
        for i, g in enumerate(self.group):
            ginv = self._inverse[i]
            if self.in_fundamental(mat_vec(self.group[ginv], x)):
                return i
        raise InvariantViolation("point lies in no Weyl chamber translate", {"point": [fmt(v) for v in x]})

    def to_json(self) -> dict:
        return {
            "walls": [w.to_json() for w in self.walls],
            "order": len(self.group),
            "S0": self.s0.to_json(),
            "S_plus": self.s_plus.to_json(),
            "coxeter_matrix": self.coxeter.to_json() if self.coxeter else [],
        }


def _order(m, limit: int = 12) -> int:
    n = len(m)
    ident = _freeze(identity(n))
    cur = m
    for k in range(1, limit + 1):
        if cur == ident:
            return k
        cur = _freeze(mat_mul(cur, m))
    raise InvariantViolation("product of simple reflections has unexpected order", {"matrix": dump_matrix(m)})


def reflection_data(a: Subcomplex, s: LeviSphere, walls: list[Wall] | None = None) -> ReflectionData:
    walls = walls_in(a, s) if walls is None else walls
    gram = s.chart.sigma.realization.gram
    n = s.span.ambient
    refl = [_freeze(reflect_along(w.subspace, s.span, gram)) for w in walls]
    wall_set = {w.subspace for w in walls}
    for i, r in enumerate(refl):
        for w in walls:
            img = w.subspace.image(r)
            if img not in wall_set:
                raise InvariantViolation("reflection image of a wall is not a wall",
                                         {"sphere": list(s.a), "reflection": i, "wall": w.subspace.to_json()})
    s0 = s.span
    for w in walls:
        s0 = intersect(s0, w.subspace)
    s_plus = orthogonal_complement(s0, s.span, gram)
    p = s.barycenter(s.a)
    normals = []
    for w in walls:
        nv = orthogonal_complement(w.subspace, s.span, gram).basis[0]
        side = _side(nv, gram, p)
        if side == 0:
            raise InvariantViolation("base simplex meets a wall in its interior", {"sphere": list(s.a)})
        normals.append(tuple(side * x for x in nv))
    # walls carrying a facet of a top cell inside the fundamental domain
    simple = []
    fund_tops = [t for t in s.tops() if all(all(_side(nv, gram, s.vec(v)) >= 0 for nv in normals) for v in t)]
    for i, w in enumerate(walls):
        if any(pn in w.panels for t in fund_tops for pn in combinations(t, len(t) - 1)):
            simple.append(i)
    gens = [refl[i] for i in simple]
    ident = _freeze(identity(n))
    group, words = [ident], [()]
    index = {ident: 0}
    head = 0
    while head < len(group):
        g, wd = group[head], words[head]
        head += 1
        for j, r in enumerate(gens):
            h = _freeze(mat_mul(g, r))
            if h not in index:
                index[h] = len(group)
                group.append(h)
                words.append(wd + (j,))
                if len(group) > MAX_REFLECTION_GROUP:
                    raise InvariantViolation("reflection group of a Levi sphere is too large", {"sphere": list(s.a)})
    for r in refl:
        if r not in index:
            raise InvariantViolation("wall reflection not generated by the simple reflections", {"sphere": list(s.a)})
    coxeter = None
    if simple:
        entries = [[1 if i == j else _order(_freeze(mat_mul(gens[i], gens[j]))) for j in range(len(gens))] for i in range(len(gens))]
        coxeter = CoxeterMatrix.of(entries)
    rd = ReflectionData(s, walls, refl, group, words, s0, s_plus, normals, simple, coxeter)
    rd._inverse = [index[_freeze(_inv_orth(g, gram))] for g in group]
    return rd


def _inv_orth(g, gram) -> tuple:
    # inverse of a Gram-orthogonal map: G^-1 g^T G
    from .geometry import inverse, transpose

    gm = gram.matrix
    return mat_mul(mat_mul(inverse(gm), transpose(g)), gm)


def reflection_violations(rd: ReflectionData) -> list[dict]:
    """W_S fixes S_0 pointwise, permutes walls, and rank + dim S_0 = dim span."""
    out = []
    walls = {w.subspace for w in rd.walls}
    for i, g in enumerate(rd.group):
        if any(tuple(mat_vec(g, v)) != tuple(v) for v in rd.s0.basis):
            out.append({"check": "S0-fixed", "element": list(rd.words[i])})
            break
    for i, r in enumerate(rd.reflections):
        if any(w.subspace.image(r) not in walls for w in rd.walls):
            out.append({"check": "wall-stability", "reflection": i})
    if rd.k + rd.rank != rd.sphere.span.dim:
        out.append({"check": "rank-split", "k": rd.k, "rank": rd.rank, "dim": rd.sphere.span.dim})
    return out


# --------------------------------------------------------------------------
# t-classes


@dataclass(frozen=True)
class TClassPartition:
    classes: tuple[tuple[Simplex, ...], ...]
    singular: frozenset
    class_of: dict = field(hash=False, compare=False)

    def boundary_panels(self, i: int) -> list[Simplex]:
        return sorted({p for t in self.classes[i] for p in combinations(t, len(t) - 1) if p in self.singular})

    def internal_panels(self, i: int) -> list[Simplex]:
        return sorted({p for t in self.classes[i] for p in combinations(t, len(t) - 1) if p and p not in self.singular})


def t_classes(a: Subcomplex) -> TClassPartition:
    tops = _tops(a)
    idx = {t: i for i, t in enumerate(tops)}
    parent = list(range(len(tops)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p, cs in panel_map(tops).items():
        if len(cs) == 2:
            x, y = find(idx[cs[0]]), find(idx[cs[1]])
            if x != y:
                parent[max(x, y)] = min(x, y)
    groups: dict[int, list[Simplex]] = {}
    for t in tops:
        groups.setdefault(find(idx[t]), []).append(t)
    classes = tuple(sorted(tuple(sorted(g)) for g in groups.values()))
    class_of = {t: i for i, g in enumerate(classes) for t in g}
    sing = singular_panels(a) if a.dim >= 1 else frozenset()
    return TClassPartition(classes, sing, class_of)


def tiling_violations(rd: ReflectionData, tc: TClassPartition) -> list[dict]:
    """Each t-class meeting the sphere fills exactly one W_S-chamber joined with S_0."""
    s = rd.sphere
    out = []
    by_region: dict[tuple, set] = {}
    for t in s.tops():
        by_region.setdefault(rd.region(s.barycenter(t)), set()).add(t)
    for t in s.tops():
        cls = set(tc.classes[tc.class_of[t]])
        if cls != by_region[rd.region(s.barycenter(t))]:
            out.append({"check": "t-class-tiling", "sphere": list(s.a), "top": list(t)})
            break
    return out


# --------------------------------------------------------------------------
# isometries between Levi spheres


@dataclass(frozen=True)
class LeviIsometry:
    source: LeviSphere
    target: LeviSphere
    element: int  # group element mapping source-chart coordinates to target-chart coordinates
    via: LeviSphere | None = None

    def matrix(self) -> tuple:
        return self.source.chart.building.system.action(self.element)

    def apply(self, x) -> tuple:
        return tuple(mat_vec(self.matrix(), x))


def _direct_isometry(s: LeviSphere, t: LeviSphere, shared: Simplex) -> LeviIsometry:
    b = s.chart.building
    return LeviIsometry(s, t, _chart_matrix(s.rep(shared), t.rep(shared), b))


def _fixes_intersection(phi: LeviIsometry) -> bool:
    s, t = phi.source, phi.target
    common = {v for x in s.cells & t.cells for v in x}
    return all(phi.apply(s.vec(v)) == t.vec(v) for v in common)


def _maps_walls(phi: LeviIsometry, ws: list[Wall], wt: list[Wall]) -> bool:
    m = phi.matrix()
    return {w.subspace.image(m) for w in ws} == {w.subspace for w in wt}


def levi_isometry(a: Subcomplex, s: LeviSphere, t: LeviSphere) -> LeviIsometry:
    """Isometry s -> t fixing s ∩ t, through a third sphere when no top simplex is shared."""
    shared = sorted(set(s.tops()) & set(t.tops()))
    if shared:
        return _direct_isometry(s, t, shared[0])
    common = s.cells & t.cells
    if not common:
        raise ValueError("Levi spheres do not meet")
    # lift a maximal common simplex into each sphere and route through a sphere holding both lifts
    top_common = max(sorted(common), key=len)
    cands_s = [x for x in s.tops() if set(top_common) <= set(x)]
    cands_t = [y for y in t.tops() if set(top_common) <= set(y)]
    ws, wt = walls_in(a, s), walls_in(a, t)
    for x in cands_s:
        for y in cands_t:
            mid = common_levi_sphere(a, x, y)
            first = _direct_isometry(s, mid, x)
            second = _direct_isometry(mid, t, y)
            sys = s.chart.building.system
            phi = LeviIsometry(s, t, int(sys.mul[second.element, first.element]), via=mid)
            if _fixes_intersection(phi) and _maps_walls(phi, ws, wt):
                return phi
    raise InvariantViolation("no composed isometry fixes the intersection of the Levi spheres",
                             {"s": list(s.a), "t": list(t.a)})


def isometry_violations(a: Subcomplex, phi: LeviIsometry) -> list[dict]:
    out = []
    if not _fixes_intersection(phi):
        out.append({"check": "isometry-fixes-intersection", "s": list(phi.source.a), "t": list(phi.target.a)})
    if not _maps_walls(phi, walls_in(a, phi.source), walls_in(a, phi.target)):
        out.append({"check": "isometry-walls", "s": list(phi.source.a), "t": list(phi.target.a)})
    return out


# --------------------------------------------------------------------------
# the decomposition


@dataclass(eq=False)
class Decomposition:
    cr: bool
    m: int
    k: int | None = None
    z: WMetricBuilding | None = None
    reflection: ReflectionData | None = None
    classes: TClassPartition | None = None
    base: tuple[Simplex, Simplex] | None = None
    thick: bool | None = None
    wd_ok: bool | None = None
    violations: list[dict] = field(default_factory=list)
    certificate: CRCertificate | None = None

    @property
    def z_chambers(self) -> int:
        return self.z.num_chambers if self.z is not None else 0

    def to_json(self) -> dict:
        z = None
        if self.z is not None:
            z = {"chambers": self.z.num_chambers, "coxeter_matrix": self.z.system.matrix.to_json(),
                 "thick": self.thick, "wd_ok": self.wd_ok}
        elif self.cr:
            z = {"chambers": 0, "coxeter_matrix": [], "thick": True, "wd_ok": True}
        out = {"cr": self.cr, "m": self.m, "k": self.k, "Z": z, "violations": self.violations}
        if self.base:
            out["base"] = [list(x) for x in self.base]
        if self.reflection is not None:
            out["reflection"] = self.reflection.to_json()
        if self.classes is not None:
            out["t_classes"] = [[list(t) for t in c] for c in self.classes.classes]
        if self.certificate is not None and not self.cr:
            out["certificate"] = self.certificate.to_json()
        return out


def _base_pair(a: Subcomplex) -> tuple[Simplex, Simplex]:
    for x in _tops(a):
        opp = opposites_in(a, x)
        if opp:
            return x, opp[0]
    raise ValueError("no opposite pair of top simplices")


def decompose(a: Subcomplex, check_convex: bool = True) -> Decomposition:
    """Split a completely reducible convex A as Z * S^0 * ... * S^0 with Z thick."""
    b: WMetricBuilding = a.ambient
    if check_convex:
        cc = is_convex(b, a)
        if not cc.convex:
            raise ValueError(f"subcomplex is not convex: hull of {cc.a} and {cc.b} needs {cc.missing}")
    cert = complete_reducibility(a, Mode.ONE_PAIR)
    m = a.dim
    if not cert.completely_reducible:
        return Decomposition(False, m, certificate=cert)
    if m == 0:
        verts = a.vertices
        if len(verts) == 2:
            return Decomposition(True, 0, k=1, base=((verts[0],), (verts[1],)), thick=True, wd_ok=True)
        z = rank1_building(len(verts))
        return Decomposition(True, 0, k=0, z=z, base=((verts[0],), (verts[1],)), thick=True,
                             wd_ok=verify_wd_axioms(z).ok)
    x0, y0 = _base_pair(a)
    base = levi_sphere(a, x0, y0)
    sing = singular_panels(a)
    walls = walls_in(a, base, sing)
    rd = reflection_data(a, base, walls)
    tc = t_classes(a)
    dec = Decomposition(True, m, k=rd.k, reflection=rd, classes=tc, base=(x0, y0))
    dec.violations += reflection_violations(rd) + tiling_violations(rd, tc)
    if rd.rank == 0:
        if len(tc.classes) != 1:
            dec.violations.append({"check": "no-walls-single-class", "classes": len(tc.classes)})
        dec.thick = dec.wd_ok = True
        return dec
    sys_z = system_for(rd.coxeter)
    reps = [cls[0] for cls in tc.classes]
    bsys = b.system
    # chart element taking each class representative's sphere to the base sphere
    to_base = {}
    for r in reps:
        sr = common_levi_sphere(a, x0, r)
        to_base[r] = (sr, _direct_isometry(sr, base, x0).element)
    nz = len(reps)
    D = np.zeros((nz, nz), dtype=np.int32)
    for i, j in combinations(range(nz), 2):
        ri, rj = reps[i], reps[j]
        s12 = common_levi_sphere(a, ri, rj)
        # one map s12 -> base for both: through the sphere joining x0 and ri
        sr, g_base = to_base[ri]
        g = int(bsys.mul[g_base, _direct_isometry(s12, sr, ri).element])
        act_g = bsys.action(g)
        pos = [rd.element_of_region(mat_vec(act_g, s12.barycenter(r))) for r in (ri, rj)]
        w1, w2 = pos
        word = tuple(reversed(rd.words[w1]))  # inverse word for a product of involutions
        e = sys_z.product(sys_z.from_word(word), sys_z.from_word(rd.words[w2]))
        D[i, j] = e
        D[j, i] = sys_z.inverse(e)
    panels = []
    for sgen in range(sys_z.rank):
        g = sys_z.generator(sgen)
        parent = list(range(nz))
        for i, j in zip(*np.nonzero(D == g)):
            ri, rj = int(i), int(j)
            while parent[ri] != ri:
                ri = parent[ri]
            while parent[rj] != rj:
                rj = parent[rj]
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
        groups: dict[int, list[int]] = {}
        for c in range(nz):
            r = c
            while parent[r] != r:
                r = parent[r]
            groups.setdefault(r, []).append(c)
        panels.append(sorted(groups.values()))
    z = WMetricBuilding(sys_z, D, panels, name="Z", kind="generic")
    rep_wd = verify_wd_axioms(z)
    dec.z = z
    dec.wd_ok = rep_wd.ok
    dec.thick = z.is_thick()
    if not rep_wd.ok:
        dec.violations.append({"check": "Z-wd-axioms", "first": rep_wd.violations[0]})
    if not dec.thick:
        dec.violations.append({"check": "Z-thick"})
    # adjacency across singular panels must be a single wall crossing
    lengths = sys_z.lengths
    for p, cs in panel_map(_tops(a)).items():
        if p in sing:
            ids = sorted({tc.class_of[t] for t in cs})
            for i, j in combinations(ids, 2):
                if lengths[D[i, j]] != 1:
                    dec.violations.append({"check": "Z-adjacency", "panel": list(p), "classes": [i, j]})
                    break
    return dec
