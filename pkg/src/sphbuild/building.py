"""W-metric buildings given by a full table of Weyl distances.

Chambers are the integers ``0..N-1``.  ``delta[c, d]`` is the element index
(in the building's :class:`CoxeterSystem`) of the Weyl distance from ``c``
to ``d``.  Panels are kept separately from ``delta`` so that a corrupted
table can be detected rather than silently re-derived.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .complex import CoxeterComplex, Simplex, Subcomplex, coxeter_complex
from .coxeter import (
    CoxeterMatrix,
    CoxeterSystem,
    block_sum,
    longest_element,
    named_matrix,
    system_for,
)
from .errors import InvariantViolation


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            if rx < ry:
                self.parent[ry] = rx
            else:
                self.parent[rx] = ry

    def classes(self) -> list[list[int]]:
        groups: dict[int, list[int]] = {}
        for x in range(len(self.parent)):
            groups.setdefault(self.find(x), []).append(x)
        return sorted(groups.values())


@dataclass(eq=False)
class WMetricBuilding:
    system: CoxeterSystem
    delta: np.ndarray
    panels: list[list[list[int]]]  # panels[s] = list of chamber lists
    name: str = ""
    labels: list | None = None
    kind: str = "generic"
    info: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        n = self.system.rank
        N = self.num_chambers
        self.delta = np.asarray(self.delta, dtype=np.int32)
        if self.delta.shape != (N, N):
            raise ValueError(f"delta has shape {self.delta.shape}, expected {(N, N)}")
        self.panel_of = np.empty((n, N), dtype=np.int32)
        for s in range(n):
            for k, p in enumerate(self.panels[s]):
                self.panel_of[s, p] = k
        # vertex of type i = connected component under j-adjacency, j != i
        self.chamber_vertices = np.empty((N, n), dtype=np.int32)
        self.vertex_type: list[int] = []
        for i in range(n):
            uf = _UnionFind(N)
            for s in range(n):
                if s != i:
                    for p in self.panels[s]:
                        for c in p[1:]:
                            uf.union(p[0], c)
            for comp in uf.classes():
                self.chamber_vertices[comp, i] = len(self.vertex_type)
                self.vertex_type.append(i)
        self._simplex_chambers: dict[Simplex, list[int]] = {}
        for c in range(N):
            vs = [int(x) for x in self.chamber_vertices[c]]
            for k in range(1, n + 1):
                for f in itertools.combinations(vs, k):
                    self._simplex_chambers.setdefault(tuple(sorted(f)), []).append(c)
        self._apartments: dict[tuple[int, int], ApartmentChart] = {}

    # -- basic structure

    @property
    def num_chambers(self) -> int:
        return sum(len(p) for p in self.panels[0]) if self.panels else 0

    @property
    def rank(self) -> int:
        return self.system.rank

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_type)

    @property
    def sigma(self) -> CoxeterComplex:
        return coxeter_complex(self.system)

    def chamber_simplex(self, c: int) -> Simplex:
        return tuple(sorted(int(x) for x in self.chamber_vertices[c]))

    def has_simplex(self, s: Sequence[int]) -> bool:
        return tuple(sorted(s)) in self._simplex_chambers

    def chambers_containing(self, s: Sequence[int]) -> list[int]:
        return self._simplex_chambers[tuple(sorted(s))]

    def simplices(self) -> list[Simplex]:
        return sorted(self._simplex_chambers, key=lambda s: (len(s), s))

    def types(self, s: Sequence[int]) -> frozenset[int]:
        return frozenset(self.vertex_type[v] for v in s)

    def panel(self, s: int, c: int) -> list[int]:
        return self.panels[s][self.panel_of[s, c]]

    def whole(self) -> Subcomplex:
        return Subcomplex(self, frozenset(self._simplex_chambers))

    def is_thick(self) -> bool:
        return all(len(p) >= 3 for ps in self.panels for p in ps)

    def vertex_label(self, v: int) -> str:
        names = self.info.get("vertex_names")
        return names[v] if names else f"v{v}"

    def __repr__(self) -> str:
        return f"WMetricBuilding({self.name or self.kind}, chambers={self.num_chambers}, rank={self.rank})"

    # -- apartments

    def apartment(self, c: int, d: int) -> "ApartmentChart":
        key = (c, d)
        ch = self._apartments.get(key)
        if ch is None:
            ch = apartment_containing(self, c, d)
            self._apartments[key] = ch
        return ch

    def apartment_for(self, a: Sequence[int], b: Sequence[int]) -> "ApartmentChart":
        """Deterministic apartment containing the simplices a and b."""
        return self.apartment(self.chambers_containing(a)[0], self.chambers_containing(b)[0])


# --------------------------------------------------------------------------
# Weyl distance from panels


def delta_from_panels(sys: CoxeterSystem, n_chambers: int, panels: list[list[list[int]]]) -> np.ndarray:
    """Weyl distances by simultaneous breadth-first search from every chamber.

    The gallery type of a minimal gallery is well defined in a building;
    for anything else the result is arbitrary and the WD check will say so.
    """
    N = n_chambers
    D = np.full((N, N), -1, dtype=np.int32)
    D[np.arange(N), np.arange(N)] = 0
    lengths = sys.lengths
    edges = []
    for s in range(sys.rank):
        src, dst = [], []
        for p in panels[s]:
            for x in p:
                for y in p:
                    if x != y:
                        src.append(x)
                        dst.append(y)
        edges.append((sys.generator(s), np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64)))
    for k in range(int(lengths.max()) + 1):
        for g, src, dst in edges:
            if len(src) == 0:
                continue
            cur = D[:, src]
            mask = (cur >= 0) & (lengths[np.maximum(cur, 0)] == k) & (D[:, dst] < 0)
            rows, cols = np.nonzero(mask)
            if len(rows):
                D[rows, dst[cols]] = sys.mul[cur[rows, cols], g]
    if (D < 0).any():
        raise ValueError("chamber system is not connected")
    return D


def _panels_from_keys(keys: Sequence[Sequence[object]]) -> list[list[int]]:
    groups: dict[object, list[int]] = {}
    for c, k in enumerate(keys):
        groups.setdefault(k, []).append(c)
    return sorted(groups.values())


# --------------------------------------------------------------------------
# constructors


def thin_building(sys: CoxeterSystem, name: str = "") -> WMetricBuilding:
    """The Coxeter complex of sys as a thin building: chambers are group elements."""
    N = sys.order
    D = sys.mul[sys.inv[:, None], np.arange(N)[None, :]]
    panels = []
    for s in range(sys.rank):
        g = sys.generator(s)
        panels.append(sorted({tuple(sorted((u, int(sys.mul[u, g])))) for u in range(N)}))
        panels[-1] = [list(p) for p in panels[-1]]
    return WMetricBuilding(sys, D, panels, name=name or "thin", kind="thin")


def rank1_building(N: int) -> WMetricBuilding:
    if N < 2:
        raise ValueError("a rank-1 building needs at least 2 chambers")
    sys = system_for(named_matrix("A1"))
    s = sys.generator(0)
    D = np.full((N, N), s, dtype=np.int32)
    np.fill_diagonal(D, 0)
    return WMetricBuilding(sys, D, [[list(range(N))]], name=f"rank1({N})", kind="rank1", info={"N": N})


@dataclass(frozen=True)
class FlagGeometry:
    q: int
    points: tuple[tuple[int, ...], ...]
    subspaces: tuple[tuple[frozenset[int], ...], ...]  # subspaces[k] = (k+1)-dim subspaces
    flags: tuple[tuple[int, ...], ...]  # flag = subspace index per dimension


def _normalize(v: Sequence[int], q: int) -> tuple[int, ...]:
    k = next(i for i, x in enumerate(v) if x % q)
    inv = pow(v[k], -1, q)
    return tuple((x * inv) % q for x in v)


def _span_points(basis: Sequence[Sequence[int]], q: int, point_index: dict) -> frozenset[int]:
    pts = set()
    for coeffs in itertools.product(range(q), repeat=len(basis)):
        if any(coeffs):
            v = [sum(c * b[i] for c, b in zip(coeffs, basis)) % q for i in range(len(basis[0]))]
            if any(v):
                pts.add(point_index[_normalize(v, q)])
    return frozenset(pts)


def flag_geometry(n: int, q: int) -> FlagGeometry:
    dim = n + 1
    points = sorted({_normalize(v, q) for v in itertools.product(range(q), repeat=dim) if any(v)})
    pidx = {p: i for i, p in enumerate(points)}
    levels: list[dict[frozenset[int], tuple]] = [{frozenset([i]): (p,) for i, p in enumerate(points)}]
    for k in range(1, n):
        nxt: dict[frozenset[int], tuple] = {}
        for sub, basis in levels[-1].items():
            for i, p in enumerate(points):
                if i not in sub:
                    new = _span_points(basis + (p,), q, pidx)
                    if new not in nxt:
                        nxt[new] = basis + (p,)
        levels.append(nxt)
    subspaces = tuple(tuple(sorted(lv, key=lambda s: sorted(s))) for lv in levels)
    index = [{s: i for i, s in enumerate(lv)} for lv in subspaces]
    flags = []

    def extend(prefix: list[int]):
        k = len(prefix)
        if k == n:
            flags.append(tuple(prefix))
            return
        cur = subspaces[k - 1][prefix[-1]]
        for j, sub in enumerate(subspaces[k]):
            if cur < sub:
                extend(prefix + [j])

    for i in range(len(points)):
        extend([i])
    return FlagGeometry(q, tuple(points), subspaces, tuple(flags))


def flag_building(n: int, q: int) -> WMetricBuilding:
    """Complete flags of the projective space PG(n, q) as a type A_n building."""
    if n not in (1, 2, 3) or q not in (2, 3):
        raise ValueError("flag_building supports n in {1,2,3} and q in {2,3}")
    geo = flag_geometry(n, q)
    sys = system_for(named_matrix(f"A{n}"))
    panels = [
        [list(p) for p in _panels_from_keys([f[:i] + f[i + 1:] for f in geo.flags])] for i in range(n)
    ]
    D = delta_from_panels(sys, len(geo.flags), panels)
    b = WMetricBuilding(sys, D, panels, name=f"PG({n},{q})", labels=list(geo.flags), kind="flag", info={"geometry": geo})
    names = [None] * b.num_vertices
    for c, f in enumerate(geo.flags):
        for i in range(n):
            names[b.chamber_vertices[c, i]] = ("p", "L", "P")[i] + str(f[i]) if n <= 3 else f"{i}:{f[i]}"
    b.info["vertex_names"] = names
    return b


def join(b1: WMetricBuilding, b2: WMetricBuilding) -> WMetricBuilding:
    """Spherical join: chambers are pairs, Weyl distance is componentwise."""
    s1, s2 = b1.system, b2.system
    sys = system_for(block_sum(s1.matrix, s2.matrix))
    n1 = s1.rank
    pair = np.empty((s1.order, s2.order), dtype=np.int32)
    for w1 in range(s1.order):
        for w2 in range(s2.order):
            pair[w1, w2] = sys.from_word(s1.word(w1) + tuple(n1 + x for x in s2.word(w2)))
    N1, N2 = b1.num_chambers, b2.num_chambers
    D = pair[b1.delta[:, None, :, None], b2.delta[None, :, None, :]].reshape(N1 * N2, N1 * N2)
    panels = []
    for s in range(s1.rank):
        panels.append(sorted([c1 * N2 + c2 for c1 in p] for p in b1.panels[s] for c2 in range(N2)))
    for s in range(s2.rank):
        panels.append(sorted([c1 * N2 + c2 for c2 in p] for p in b2.panels[s] for c1 in range(N1)))
    b = WMetricBuilding(
        sys, D, panels, name=f"{b1.name}*{b2.name}", kind="join", info={"factors": (b1, b2), "pair": pair}
    )
    return b


# --------------------------------------------------------------------------
# WD axioms


@dataclass
class WDReport:
    ok: bool
    violations: list[dict]
    checked: int

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": self.violations, "checked": self.checked}


def verify_wd_axioms(b: WMetricBuilding, limit: int = 50) -> WDReport:
    """Exhaustive check of the Weyl-distance axioms over chamber pairs and panels."""
    sys = b.system
    D = b.delta
    N = b.num_chambers
    L = sys.lengths
    viol: list[dict] = []

    def add(kind: str, **w):
        if len(viol) < limit:
            viol.append({"axiom": kind, **{k: (int(v) if isinstance(v, (np.integer, int)) else v) for k, v in w.items()}})

    count = 0
    diag = np.diag(D)
    for c in np.nonzero(diag != 0)[0]:
        add("WD1", c=c, d=c, delta=list(sys.word(int(D[c, c]))))
    off = (D == 0) & ~np.eye(N, dtype=bool)
    for c, d in zip(*np.nonzero(off)):
        add("WD1", c=c, d=d, delta=[])
    asym = sys.inv[D.T] != D
    for c, d in zip(*np.nonzero(asym)):
        add("symmetry", c=c, d=d, delta=list(sys.word(int(D[c, d]))), reverse=list(sys.word(int(D[d, c]))))
    for s in range(sys.rank):
        g = sys.generator(s)
        ws = sys.mul[:, g]
        for p in b.panels[s]:
            if len(p) < 2:
                add("panel-size", s=s, panel=list(p))
            sub = D[:, p]  # N x |p|
            count += sub.size
            for j, d in enumerate(p):
                for k, d2 in enumerate(p):
                    if j != k and D[d, d2] != g:
                        add("panel-distance", s=s, c=d, d=d2, delta=list(sys.word(int(D[d, d2]))))
            # WD2
            up = L[ws[sub]] > L[sub]
            for j in range(len(p)):
                w = sub[:, j]
                up_j = up[:, j]
                for k in range(len(p)):
                    if j == k:
                        continue
                    w2 = sub[:, k]
                    bad = np.where(up_j, w2 != ws[w], (w2 != w) & (w2 != ws[w]))
                    for c in np.nonzero(bad)[0]:
                        add("WD2", c=c, d=p[j], d_prime=p[k], s=s,
                            delta_cd=list(sys.word(int(w[c]))), delta_cd_prime=list(sys.word(int(w2[c]))))
            # WD3: the panel realizes w s for every w it realizes
            for j in range(len(p)):
                target = ws[sub[:, j]]
                hit = (sub == target[:, None]).any(axis=1)
                for c in np.nonzero(~hit)[0]:
                    add("WD3", c=c, d=p[j], s=s, delta_cd=list(sys.word(int(sub[c, j]))))
    return WDReport(not viol, viol, int(count))


def corrupt_delta(b: WMetricBuilding, c: int, d: int, value: int) -> WMetricBuilding:
    """A copy of b with the single entry delta[c, d] replaced (fault injection)."""
    D = b.delta.copy()
    D[c, d] = value
    return WMetricBuilding(b.system, D, [list(map(list, ps)) for ps in b.panels], name=b.name + "!corrupt",
                           labels=b.labels, kind="generic", info={})


# --------------------------------------------------------------------------
# apartments


@dataclass(eq=False)
class ApartmentChart:
    """An isomorphism from the Coxeter complex onto an apartment of b.

    ``chamber_of[w]`` is the chamber x with delta(base, x) = w.
    """

    building: WMetricBuilding
    base: int
    opposite: int
    chamber_of: np.ndarray
    vertex_map: np.ndarray  # sigma vertex -> building vertex

    def __post_init__(self):
        self.sigma_vertex = {int(b): s for s, b in enumerate(self.vertex_map)}
        self.image = frozenset(int(x) for x in self.chamber_of)

    @property
    def sigma(self) -> CoxeterComplex:
        return self.building.sigma

    def contains(self, simplex: Sequence[int]) -> bool:
        return self.pull(simplex) is not None

    def pull(self, simplex: Sequence[int]) -> int | None:
        """Cell of the Coxeter complex corresponding to a building simplex."""
        try:
            return self.sigma.cell_of(self.sigma_vertex[v] for v in simplex)
        except KeyError:
            return None

    def push(self, cell: int) -> Simplex:
        return tuple(sorted(int(self.vertex_map[v]) for v in self.sigma.cells[cell].vertices))

    def vec(self, vertex: int) -> tuple[int, ...]:
        return self.sigma.vertex_vec[self.sigma_vertex[vertex]]

    def vectors(self, simplex: Sequence[int]) -> list[tuple[int, ...]]:
        return [self.vec(v) for v in simplex]

    def barycenter(self, simplex: Sequence[int]) -> tuple[int, ...]:
        vs = self.vectors(simplex)
        return tuple(sum(v[k] for v in vs) for k in range(len(vs[0])))

    def rep(self, simplex: Sequence[int]) -> int:
        """A group element g with simplex = g . (standard face of the same type)."""
        return self.sigma.cells[self.pull(simplex)].rep

    def simplices(self) -> frozenset[Simplex]:
        return frozenset(self.push(c) for c in range(len(self.sigma.cells)))


def apartment_containing(b: WMetricBuilding, c: int, d: int, rng: random.Random | None = None) -> ApartmentChart:
    """Extend delta(c, d) to w0 along panels, then take the convex hull of c and the end chamber."""
    sys = b.system
    D = b.delta
    L = sys.lengths
    w0 = longest_element(sys)
    lw0 = int(L[w0])
    e, w = d, int(D[c, d])
    while int(L[w]) < lw0:
        s = next(s for s in range(sys.rank) if L[sys.mul[w, sys.generator(s)]] > L[w])
        cands = [x for x in b.panel(s, e) if x != e]
        e = rng.choice(cands) if rng else cands[0]
        w = int(D[c, e])
    if w != w0:
        raise InvariantViolation("gallery extension did not reach w0", {"c": c, "d": d, "end": e})
    members = np.nonzero(L[D[c, :]] + L[D[:, e]] == lw0)[0]
    if len(members) != sys.order:
        raise InvariantViolation("convex hull of opposite chambers is not a copy of the Coxeter complex",
                                 {"c": c, "opposite": e, "size": int(len(members))})
    chamber_of = np.full(sys.order, -1, dtype=np.int64)
    chamber_of[D[c, members]] = members
    if (chamber_of < 0).any():
        raise InvariantViolation("apartment chart is not a bijection", {"c": c, "opposite": e})
    sigma = b.sigma
    vmap = np.full(sigma.num_vertices, -1, dtype=np.int64)
    sv = sigma.chamber_vertices
    bv = b.chamber_vertices[chamber_of]
    for w in range(sys.order):
        for i in range(sys.rank):
            v = sv[w, i]
            if vmap[v] < 0:
                vmap[v] = bv[w, i]
            elif vmap[v] != bv[w, i]:
                raise InvariantViolation("apartment chart is inconsistent on vertices", {"c": c, "w": w, "type": i})
    return ApartmentChart(b, c, e, chamber_of, vmap)


def enumerate_apartments(b: WMetricBuilding) -> list[ApartmentChart]:
    """Every apartment once, found from opposite chamber pairs."""
    cached = b.info.get("_apartments")
    if cached is not None:
        return cached
    sys = b.system
    w0 = longest_element(sys)
    L = sys.lengths
    lw0 = int(L[w0])
    seen: set[frozenset[int]] = set()
    out = []
    D = b.delta
    for c in range(b.num_chambers):
        for e in np.nonzero(D[c] == w0)[0]:
            e = int(e)
            if e < c:
                continue
            img = frozenset(int(x) for x in np.nonzero(L[D[c, :]] + L[D[:, e]] == lw0)[0])
            if img not in seen:
                seen.add(img)
                out.append(b.apartment(c, e))
    b.info["_apartments"] = out
    return out


def apartments_through(b: WMetricBuilding, a: Sequence[int], s: Sequence[int]) -> list[ApartmentChart]:
    return [ch for ch in enumerate_apartments(b) if ch.contains(a) and ch.contains(s)]


def are_opposite(b: WMetricBuilding, x: Sequence[int], y: Sequence[int], chart: ApartmentChart | None = None) -> bool:
    """x = -y inside an apartment containing both."""
    if len(x) != len(y):
        return False
    chart = chart or b.apartment_for(x, y)
    cx, cy = chart.pull(x), chart.pull(y)
    if cx is None or cy is None:
        raise InvariantViolation("apartment does not contain the simplices", {"x": list(x), "y": list(y)})
    return b.sigma.opposite(cx) == cy


# --------------------------------------------------------------------------
# automorphisms and fixed sets


def check_automorphism(b: WMetricBuilding, perm: Sequence[int]) -> tuple[int, int] | None:
    """None if perm preserves delta, else a witness pair (c, d)."""
    g = np.asarray(perm, dtype=np.int64)
    if sorted(g.tolist()) != list(range(b.num_chambers)):
        return (0, 0)
    bad = b.delta[np.ix_(g, g)] != b.delta
    if bad.any():
        c, d = np.argwhere(bad)[0]
        return int(c), int(d)
    return None


def vertex_permutation(b: WMetricBuilding, perm: Sequence[int]) -> np.ndarray:
    vmap = np.empty(b.num_vertices, dtype=np.int64)
    vmap[b.chamber_vertices.ravel()] = b.chamber_vertices[np.asarray(perm)].ravel()
    return vmap


def fixed_subcomplex(b: WMetricBuilding, automorphisms: Iterable[Sequence[int]]) -> Subcomplex:
    """All simplices fixed vertexwise by every given type-preserving automorphism."""
    fixed = np.ones(b.num_vertices, dtype=bool)
    for g in automorphisms:
        bad = check_automorphism(b, g)
        if bad is not None:
            raise ValueError(f"not a type-preserving automorphism: delta differs at chamber pair {bad}")
        vmap = vertex_permutation(b, g)
        fixed &= vmap == np.arange(b.num_vertices)
    return Subcomplex(b, frozenset(s for s in b._simplex_chambers if all(fixed[v] for v in s)))


def matrix_automorphism(b: WMetricBuilding, m: Sequence[Sequence[int]]) -> list[int]:
    """Chamber permutation of a flag building induced by an invertible matrix over GF(q)."""
    geo: FlagGeometry = b.info["geometry"]
    q = geo.q
    pidx = {p: i for i, p in enumerate(geo.points)}
    img = []
    for p in geo.points:
        v = [sum(m[r][k] * p[k] for k in range(len(p))) % q for r in range(len(m))]
        if not any(v):
            raise ValueError("matrix is singular")
        img.append(pidx[_normalize(v, q)])
    sub_index = [{s: i for i, s in enumerate(lv)} for lv in geo.subspaces]
    fidx = {f: i for i, f in enumerate(geo.flags)}
    perm = []
    for f in geo.flags:
        nf = tuple(sub_index[k][frozenset(img[x] for x in geo.subspaces[k][f[k]])] for k in range(len(f)))
        perm.append(fidx[nf])
    return perm


def left_translation(b: WMetricBuilding, g: int) -> list[int]:
    return [int(x) for x in b.system.mul[g]]


def _random_invertible(dim: int, q: int, rng: random.Random) -> list[list[int]]:
    from .geometry import det

    while True:
        m = [[rng.randrange(q) for _ in range(dim)] for _ in range(dim)]
        if det(m) % q != 0:
            return m


def random_automorphism(b: WMetricBuilding, rng: random.Random) -> list[int]:
    """A random type-preserving automorphism, for the known constructions."""
    if b.kind == "flag":
        geo: FlagGeometry = b.info["geometry"]
        return matrix_automorphism(b, _random_invertible(len(geo.points[0]), geo.q, rng))
    if b.kind == "thin":
        return left_translation(b, rng.randrange(b.system.order))
    if b.kind == "rank1":
        p = list(range(b.num_chambers))
        rng.shuffle(p)
        return p
    if b.kind == "join":
        b1, b2 = b.info["factors"]
        g1, g2 = random_automorphism(b1, rng), random_automorphism(b2, rng)
        N2 = b2.num_chambers
        return [g1[c // N2] * N2 + g2[c % N2] for c in range(b.num_chambers)]
    return list(range(b.num_chambers))


# --------------------------------------------------------------------------
# isomorphism


def type_relabelings(m1: CoxeterMatrix, m2: CoxeterMatrix) -> list[tuple[int, ...]]:
    n = m1.rank
    if m2.rank != n:
        return []
    return [p for p in itertools.permutations(range(n)) if all(m1[i, j] == m2[p[i], p[j]] for i in range(n) for j in range(n))]


def find_isomorphism(b1: WMetricBuilding, b2: WMetricBuilding) -> tuple[tuple[int, ...], list[int]] | None:
    """(type relabeling, chamber map) with delta2(f c, f d) = pi(delta1(c, d)), or None."""
    N = b1.num_chambers
    if N != b2.num_chambers:
        return None
    if N == 0:
        return ((), [])
    s1, s2 = b1.system, b2.system
    order = [0]
    seen = {0}
    for c in order:
        for s in range(s1.rank):
            for d in b1.panel(s, c):
                if d not in seen:
                    seen.add(d)
                    order.append(d)
    for pi in type_relabelings(s1.matrix, s2.matrix):
        wmap = np.array([s2.from_word([pi[x] for x in s1.word(w)]) for w in range(s1.order)])
        D1 = wmap[b1.delta]
        D2 = b2.delta
        for x0 in range(N):
            f = [-1] * N
            f[0] = x0
            used = {x0}

            def extend(k: int) -> bool:
                if k == len(order):
                    return True
                c = order[k]
                mapped = order[:k]
                cands = np.ones(N, dtype=bool)
                for d in mapped:
                    cands &= D2[f[d], :] == D1[d, c]
                for x in np.nonzero(cands)[0]:
                    x = int(x)
                    if x in used:
                        continue
                    f[c] = x
                    used.add(x)
                    if extend(k + 1):
                        return True
                    used.discard(x)
                    f[c] = -1
                return False

            if extend(1):
                return pi, f
    return None


# --------------------------------------------------------------------------
# presets and interchange


def preset(name: str) -> WMetricBuilding:
    """Named buildings: fano, pg32, pg22/pg23/pg33..., hexagon, thin:<type>, rank1:<N>, and joins with '*'.

    ``s0`` is the 0-sphere rank1(2); e.g. "fano*s0*s0".
    """
    parts = name.split("*")
    if len(parts) > 1:
        b = preset(parts[0])
        for p in parts[1:]:
            b = join(b, preset(p))
        b.name = name
        return b
    key = name.strip().lower()
    if key == "fano":
        b = flag_building(2, 2)
    elif key.startswith("pg") and len(key) == 4 and key[2:].isdigit():
        b = flag_building(int(key[2]), int(key[3]))
    elif key == "hexagon":
        b = thin_building(system_for(named_matrix("A2")))
    elif key.startswith("thin:"):
        b = thin_building(system_for(named_matrix(name.split(":", 1)[1])))
    elif key == "s0":
        b = rank1_building(2)
    elif key.startswith("rank1:") or key.startswith("r"):
        num = key.split(":", 1)[1] if ":" in key else key[1:]
        b = rank1_building(int(num))
    else:
        raise ValueError(f"unknown preset {name!r}")
    b.name = name
    return b


def to_json(b: WMetricBuilding, with_delta: bool = True) -> dict:
    out = {
        "name": b.name,
        "preset": b.kind != "generic",
        "coxeter_matrix": b.system.matrix.to_json(),
        "chambers": list(range(b.num_chambers)),
        "adjacency": {str(s): [list(map(int, p)) for p in b.panels[s]] for s in range(b.rank)},
    }
    if with_delta:
        out["elements"] = [list(w) for w in b.system.words]
        out["delta"] = b.delta.tolist()
    return out


def from_json(data: dict) -> WMetricBuilding:
    sys = system_for(CoxeterMatrix.of(data["coxeter_matrix"]))
    N = len(data["chambers"])
    if sorted(data["chambers"]) != list(range(N)):
        raise ValueError("chambers must be the ids 0..N-1")
    panels = [[list(map(int, p)) for p in data["adjacency"][str(s)]] for s in range(sys.rank)]
    for s in range(sys.rank):
        if sorted(c for p in panels[s] for c in p) != list(range(N)):
            raise ValueError(f"adjacency for generator {s} does not partition the chambers")
    if "delta" in data:
        table = np.array(data["delta"], dtype=np.int64)
        if "elements" in data:
            remap = np.array([sys.from_word(w) for w in data["elements"]])
            table = remap[table]
        D = table
    else:
        D = delta_from_panels(sys, N, panels)
    if data.get("preset"):
        # reattach the construction (and its automorphisms) when the tables match
        try:
            known = preset(data["name"])
        except ValueError:
            known = None
        if known is not None and known.panels == panels and np.array_equal(known.delta, D):
            return known
    return WMetricBuilding(sys, D, panels, name=data.get("name", ""))
