"""Spherical hulls inside apartments, convex closure and convexity certificates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .building import ApartmentChart, WMetricBuilding, apartments_through, are_opposite, enumerate_apartments
from .complex import (
    Simplex,
    Subcomplex,
    chamber_graph,
    face_closure,
    is_face_closed,
    maximal_simplices,
    purity_and_dimension,
)
from .geometry import Side, cone_side, fmt, span


def _key(s: Simplex):
    return (len(s), s)


@dataclass(frozen=True)
class HullStep:
    a: Simplex
    b: Simplex
    chart: tuple[int, int]  # (base, opposite) chambers of the apartment used
    added: frozenset


def hull2(b: WMetricBuilding, x: Sequence[int], y: Sequence[int], chart: ApartmentChart | None = None) -> frozenset:
    """Simplices of one apartment whose open cells meet cone(x ∪ y)."""
    chart = chart or b.apartment_for(x, y)
    cx, cy = chart.pull(x), chart.pull(y)
    if cx is None or cy is None:
        raise ValueError("chart does not contain both simplices")
    return frozenset(chart.push(c) for c in b.sigma.hull(cx, cy))


def convex_hull(b: WMetricBuilding, seeds: Iterable[Sequence[int]], trace: list | None = None) -> Subcomplex:
    """Least convex subcomplex containing the seeds.

    Hulls of faces sit inside hulls of the simplices containing them, so
    only pairs of maximal simplices are processed.
    """
    cur = set(face_closure(tuple(sorted(s)) for s in seeds))
    if not cur:
        raise ValueError("convex_hull needs at least one seed")
    done: set[tuple[Simplex, Simplex]] = set()
    while True:
        tops = sorted(maximal_simplices(cur), key=_key)
        fresh: set[Simplex] = set()
        for x, y in combinations(tops, 2):
            if (x, y) in done:
                continue
            done.add((x, y))
            h = hull2(b, x, y)
            add = face_closure(h) - cur
            if add:
                fresh |= add
                if trace is not None:
                    ch = b.apartment_for(x, y)
                    trace.append(HullStep(x, y, (ch.base, ch.opposite), frozenset(add)))
        if not fresh:
            return Subcomplex(b, frozenset(cur))
        cur |= fresh


@dataclass(frozen=True)
class ConvexityCertificate:
    convex: bool
    a: Simplex | None = None
    b: Simplex | None = None
    missing: Simplex | None = None
    chart: tuple[int, int] | None = None
    point: tuple | None = None  # chart coordinates of a point of the missing cell inside cone(a ∪ b)

    def to_json(self) -> dict:
        if self.convex:
            return {"convex": True, "witness": None}
        return {
            "convex": False,
            "witness": {
                "a": list(self.a),
                "b": list(self.b),
                "missing": list(self.missing),
                "chart": list(self.chart),
                "point": [fmt(x) for x in self.point],
            },
        }


def is_convex(b: WMetricBuilding, a: Subcomplex) -> ConvexityCertificate:
    if not is_face_closed(a.simplices):
        raise ValueError("subcomplex is not closed under faces")
    tops = sorted(maximal_simplices(a.simplices), key=_key)
    for x, y in combinations(tops, 2):
        h = hull2(b, x, y)
        missing = sorted((s for s in h if s not in a.simplices), key=_key)
        if missing:
            miss = missing[0]
            ch = b.apartment_for(x, y)
            pt = b.sigma.hull_witness(ch.pull(x), ch.pull(y), ch.pull(miss))
            return ConvexityCertificate(False, x, y, miss, (ch.base, ch.opposite), pt)
    return ConvexityCertificate(True)


def replay_witness(b: WMetricBuilding, cert: ConvexityCertificate | dict) -> bool:
    """Independently confirm a non-convexity witness.

    The point must lie in cone(a ∪ b) per cone_side, its carrier must be the
    missing simplex, and a, b must not be antipodal through that point.
    """
    if isinstance(cert, dict):
        w = cert["witness"]
        x, y, miss = tuple(w["a"]), tuple(w["b"]), tuple(w["missing"])
        base, opp = w["chart"]
        pt = tuple(Fraction(s) for s in w["point"])
    else:
        x, y, miss = cert.a, cert.b, cert.missing
        base, opp = cert.chart
        pt = cert.point
    ch = b.apartment(base, opp)
    if any(ch.pull(s) is None for s in (x, y, miss)):
        return False
    gens = ch.vectors(x) + ch.vectors(y)
    if cone_side(gens, pt) is Side.OUTSIDE:
        return False
    return b.sigma.carrier(pt) == ch.pull(miss)


# --------------------------------------------------------------------------
# structural lemmas as checks; each returns a list of violation dicts


def purity_violations(a: Subcomplex) -> list[dict]:
    rep = purity_and_dimension(a)
    return [] if rep.pure else [{"check": "purity", "lonely": list(rep.witness)}]


def connectivity_violations(a: Subcomplex) -> list[dict]:
    if a.dim < 1:
        return []
    g, ok = chamber_graph(a)
    return [] if ok else [{"check": "chamber-connectivity", "components": len(g.components())}]


def span_lemma_violations(b: WMetricBuilding, a: Subcomplex, charts: Iterable[ApartmentChart] | None = None) -> list[dict]:
    """Within each apartment, top simplices of A share one span holding all of A there."""
    out = []
    for ch in charts if charts is not None else enumerate_apartments(b):
        inside = [s for s in a.simplices if ch.contains(s)]
        if not inside:
            continue
        top = max(len(s) for s in inside)
        tops = sorted(s for s in inside if len(s) == top)
        v = span(ch.vectors(tops[0]))
        for s in tops[1:]:
            if span(ch.vectors(s)) != v:
                out.append({"check": "span-lemma", "chart": [ch.base, ch.opposite], "a": list(tops[0]), "b": list(s)})
                break
        else:
            for s in inside:
                if not v.contains_all(ch.vectors(s)):
                    out.append({"check": "span-lemma", "chart": [ch.base, ch.opposite], "outside": list(s)})
                    break
    return out


def opp_lemma_violations(b: WMetricBuilding, a: Subcomplex, max_charts: int = 4) -> list[dict]:
    """An opposite pair of top simplices forces the whole great sphere they span."""
    out = []
    tops = a.of_dim(a.dim)
    for x, y in combinations(tops, 2):
        if not are_opposite(b, x, y):
            continue
        charts = apartments_through(b, x, y)[:max_charts] if b.num_chambers <= 400 else [b.apartment_for(x, y)]
        for ch in charts:
            v = span(ch.vectors(x))
            sphere = [ch.push(c) for c in range(len(b.sigma.cells)) if v.contains_all(b.sigma.vectors(c))]
            gone = [s for s in sphere if s not in a.simplices]
            if gone:
                out.append({"check": "opp-lemma", "a": list(x), "b": list(y), "missing": list(min(gone, key=_key))})
                return out
    return out
