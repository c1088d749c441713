"""Seeded convex test subcomplexes and the invariant battery run on each."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

from .building import WMetricBuilding, fixed_subcomplex, random_automorphism
from .complex import Subcomplex
from .convexity import (
    connectivity_violations,
    convex_hull,
    opp_lemma_violations,
    purity_violations,
    span_lemma_violations,
)
from .credu import (
    Mode,
    common_levi_sphere,
    complete_reducibility,
    decompose,
    extend_to_opposite,
    hemisphere,
    isometry_violations,
    levi_isometry,
    levi_sphere,
    levi_sphere_violations,
    opposites_in,
    reflection_data,
    reflection_violations,
    replacement_hemisphere,
    singular_panels,
    surgery,
    t_classes,
    tiling_violations,
    walls_in,
)
from .errors import InvariantViolation

FIXED_SET_SHARE = 0.25


@dataclass(frozen=True)
class Sample:
    source: str  # "hull" or "fixed"
    detail: tuple
    subcomplex: Subcomplex


def random_convex_subcomplex(b: WMetricBuilding, rng: random.Random) -> Sample:
    """Convex hull of a uniform simplex pair, or (a quarter of the time) a fixed set of a random automorphism."""
    simplices = b.simplices()
    if rng.random() < FIXED_SET_SHARE:
        g = random_automorphism(b, rng)
        fixed = fixed_subcomplex(b, [g])
        if fixed.simplices:
            return Sample("fixed", tuple(g), fixed)
    x = simplices[rng.randrange(len(simplices))]
    y = simplices[rng.randrange(len(simplices))]
    return Sample("hull", (x, y), convex_hull(b, [x, y]))


def corpus(b: WMetricBuilding, count: int, seed: int) -> list[Sample]:
    rng = random.Random(seed)
    return [random_convex_subcomplex(b, rng) for _ in range(count)]


@dataclass
class BatteryReport:
    violations: list[dict] = field(default_factory=list)
    cr: bool | None = None
    m: int = -1
    checks: dict[str, int] = field(default_factory=dict)

    def tick(self, name: str, n: int = 1):
        self.checks[name] = self.checks.get(name, 0) + n


def _guard(report: BatteryReport, name: str, fn: Callable[[], list[dict]]):
    try:
        out = fn()
    except InvariantViolation as exc:
        out = [{"check": name, "violation": str(exc), "witness": exc.witness}]
    report.tick(name)
    report.violations.extend(out)


def lemma_checks(b: WMetricBuilding, a: Subcomplex, report: BatteryReport) -> None:
    _guard(report, "purity", lambda: purity_violations(a))
    _guard(report, "connectivity", lambda: connectivity_violations(a))
    _guard(report, "span-lemma", lambda: span_lemma_violations(b, a))
    _guard(report, "opp-lemma", lambda: opp_lemma_violations(b, a))


def serre_checks(b: WMetricBuilding, a: Subcomplex, report: BatteryReport) -> bool:
    verdicts = {mode: complete_reducibility(a, mode).completely_reducible for mode in Mode}
    report.tick("serre-modes")
    if len(set(verdicts.values())) != 1:
        report.violations.append({"check": "serre-modes", "verdicts": {m.value: v for m, v in verdicts.items()}})
    cr = verdicts[Mode.ALL]

    def extension():
        out = []
        tops = a.of_dim(a.dim)
        x = next(t for t in tops if opposites_in(a, t))
        s = levi_sphere(a, x, opposites_in(a, x)[0])
        for c in tops:
            c2 = extend_to_opposite(a, c, s)
            report.tick("extend-queries")
            if c2 not in opposites_in(a, c):
                out.append({"check": "extend-to-opposite", "c": list(c), "found": list(c2)})
        return out

    if cr:
        _guard(report, "extend-to-opposite", extension)
    return cr


def levi_checks(b: WMetricBuilding, a: Subcomplex, report: BatteryReport) -> None:
    """Levi spheres, walls, surgery, W_S, t-classes, isometries and the decomposition."""
    tops = a.of_dim(a.dim)
    spheres = {}

    def pairs():
        out = []
        for x, y in combinations(tops, 2):
            s = common_levi_sphere(a, x, y)
            spheres.setdefault(s.a + s.b, s)
            if x not in s.cells or y not in s.cells:
                out.append({"check": "common-levi-sphere", "a": list(x), "b": list(y)})
        return out

    _guard(report, "common-levi-sphere", pairs)
    for s in list(spheres.values())[:8]:
        _guard(report, "levi-sphere", lambda s=s: levi_sphere_violations(a, s))
    x0 = next(t for t in tops if opposites_in(a, t))
    base = levi_sphere(a, x0, opposites_in(a, x0)[0])
    sing = singular_panels(a)
    walls = []

    def wall_check():
        walls.extend(walls_in(a, base, sing))
        return []

    _guard(report, "walls", wall_check)

    def surgery_check():
        out = []
        for w in walls:
            for side in (1, -1):
                same = surgery(a, base, w, side, hemisphere(base, w.subspace, -side))
                if same.cells != base.cells:
                    out.append({"check": "surgery-identity", "wall": w.subspace.to_json()})
            y = replacement_hemisphere(a, base, w)
            for side in (1, -1):
                new = surgery(a, base, w, side, y)
                out += levi_sphere_violations(a, new)
        return out

    if walls:
        _guard(report, "surgery", surgery_check)
    rd_box = []

    def reflections():
        rd = reflection_data(a, base, walls)
        rd_box.append(rd)
        return reflection_violations(rd) + tiling_violations(rd, t_classes(a))

    _guard(report, "reflection-group", reflections)

    def isometries():
        out = []
        others = list(spheres.values())[:6]
        for s in others:
            if s.cells & base.cells:
                out += isometry_violations(a, levi_isometry(a, base, s))
                report.tick("isometries")
        # cocycle on a triple sharing the base simplex
        sharing = [s for s in others if x0 in s.tops()]
        for s1, s2 in combinations(sharing[:3], 2):
            p = levi_isometry(a, base, s1)
            q = levi_isometry(a, s1, s2)
            r = levi_isometry(a, base, s2)
            sys = b.system
            if any(q.apply(p.apply(v)) != r.apply(v) for v in base.span.basis):
                out.append({"check": "isometry-cocycle", "spheres": [list(base.a), list(s1.a), list(s2.a)]})
        return out

    _guard(report, "levi-isometry", isometries)

    def decomposition():
        d = decompose(a, check_convex=False)
        out = list(d.violations)
        if rd_box and d.k + rd_box[0].rank != base.span.dim:
            out.append({"check": "decompose-rank", "k": d.k})
        if d.z is not None and (not d.wd_ok or not d.thick):
            out.append({"check": "decompose-Z", "wd_ok": d.wd_ok, "thick": d.thick})
        return out

    _guard(report, "decompose", decomposition)


def run_battery(b: WMetricBuilding, a: Subcomplex, levi: bool = True) -> BatteryReport:
    report = BatteryReport(m=a.dim)
    lemma_checks(b, a, report)
    report.cr = serre_checks(b, a, report)
    if levi and report.cr and a.dim >= 1:
        levi_checks(b, a, report)
    return report
