"""Command-line driver: build buildings, generate subcomplexes, check, decompose, fuzz.

Exit codes: 0 success, 1 bad input, 2 a requested check failed (certificate
written), 3 an invariant that must hold on valid input was violated.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
import tempfile
from pathlib import Path

from . import building as bld
from .battery import corpus, random_convex_subcomplex, run_battery
from .complex import Subcomplex, chamber_graph
from .convexity import convex_hull, is_convex
from .credu import Mode, complete_reducibility, decompose
from .errors import InvariantViolation

log = logging.getLogger("sphbuild")

OK, BAD_INPUT, CHECK_FAILED, VIOLATION = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(BAD_INPUT, f"{self.prog}: error: {message}\n")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=".tmp-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, target)


def load_building(ref: str) -> bld.WMetricBuilding:
    """A building from a JSON file, or a preset name when no such file exists."""
    if os.path.exists(ref):
        with open(ref) as fh:
            return bld.from_json(json.load(fh))
    return bld.preset(ref)


def load_subcomplex(b: bld.WMetricBuilding, ref: str) -> Subcomplex:
    if ref == "whole":
        return b.whole()
    with open(ref) as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        data = data["simplices"]
    return Subcomplex.from_json(b, data)


def _parse_simplices(text: str) -> list[tuple[int, ...]]:
    return [tuple(sorted(int(v) for v in part.split(","))) for part in text.split(";") if part.strip()]


# --------------------------------------------------------------------------


def cmd_build(args) -> int:
    if args.input:
        with open(args.input) as fh:
            b = bld.from_json(json.load(fh))
        rep = bld.verify_wd_axioms(b)
        if not rep.ok:
            _write(args.output, _dump({"wd_axioms": rep.to_json()}))
            print(f"WD axioms fail: {len(rep.violations)} violation(s) listed", file=sys.stderr)
            return CHECK_FAILED
    else:
        b = bld.preset(args.preset)
    if args.emit == "dot":
        g, _ = chamber_graph(b.whole())
        _write(args.output, g.to_dot(b.name.replace("*", "_").replace(":", "_") or "building"))
    else:
        _write(args.output, _dump(bld.to_json(b)))
    print(f"{b.name}: {b.num_chambers} chambers, {b.num_vertices} vertices, rank {b.rank}")
    return OK


def cmd_subcomplex(args) -> int:
    b = load_building(args.building)
    if args.whole:
        a = b.whole()
    elif args.apartment:
        c, d = (int(x) for x in args.apartment.split(","))
        a = Subcomplex(b, b.apartment(c, d).simplices())
    elif args.simplices:
        seeds = _parse_simplices(args.simplices)
        a = convex_hull(b, seeds) if args.hull else Subcomplex.closure_of(b, seeds)
    else:
        a = corpus(b, 1, args.seed)[0].subcomplex
    if args.remove:
        drop = set(_parse_simplices(args.remove))
        keep = [s for s in a.simplices if not any(set(x) <= set(s) for x in drop)]
        a = Subcomplex(b, frozenset(keep))
    _write(args.output, _dump(a.to_json()))
    print(f"subcomplex: {len(a.simplices)} simplices, dimension {a.dim}")
    return OK


def cmd_check(args) -> int:
    b = load_building(args.building)
    a = load_subcomplex(b, args.subcomplex)
    out: dict = {}
    passed = True
    if args.mode in ("convex", "all", "cr"):
        cert = is_convex(b, a)
        out["convexity"] = cert.to_json()
        passed &= cert.convex
    if args.mode in ("cr", "all") and out["convexity"]["convex"]:
        certs = {m.value: complete_reducibility(a, m) for m in Mode}
        out["complete_reducibility"] = {k: c.to_json() for k, c in certs.items()}
        verdicts = {c.completely_reducible for c in certs.values()}
        if len(verdicts) != 1:
            out["violation"] = "complete-reducibility modes disagree"
            _write(args.output, _dump(out))
            return VIOLATION
        passed &= verdicts.pop()
    out["passed"] = passed
    _write(args.output, _dump(out))
    if args.emit == "dot" and args.output and a.dim >= 1:
        g, _ = chamber_graph(a)
        _write(args.output + ".dot", g.to_dot("subcomplex"))
    print("check " + ("passed" if passed else "FAILED"))
    return OK if passed else CHECK_FAILED


def cmd_decompose(args) -> int:
    b = load_building(args.building)
    a = load_subcomplex(b, args.subcomplex)
    cert = is_convex(b, a)
    if not cert.convex:
        _write(args.output, _dump({"convexity": cert.to_json(), "cr": None}))
        print("refused: subcomplex is not convex", file=sys.stderr)
        return CHECK_FAILED
    try:
        d = decompose(a, check_convex=False)
    except InvariantViolation as exc:
        _write(args.output, _dump({"violations": [exc.to_json()]}))
        return VIOLATION
    _write(args.output, _dump(d.to_json()))
    if not d.cr:
        print("refused: subcomplex is not completely reducible", file=sys.stderr)
        return CHECK_FAILED
    print(f"m={d.m} k={d.k} |Z|={d.z_chambers}" + (f" violations={len(d.violations)}" if d.violations else ""))
    return VIOLATION if d.violations else OK


def cmd_fuzz(args) -> int:
    b = load_building(args.building)
    if args.count < 1:
        print("count must be at least 1", file=sys.stderr)
        return BAD_INPUT
    summary: dict = {"building": b.name, "count": args.count, "seed": args.seed, "cases": []}
    wd = bld.verify_wd_axioms(b)
    violations = [{"case": None, "check": "wd-axioms", **v} for v in wd.violations]
    rng = random.Random(args.seed)
    for i in range(args.count):
        try:
            sample = random_convex_subcomplex(b, rng)
            rep = run_battery(b, sample.subcomplex)
            found = rep.violations
            summary["cases"].append({"case": i, "source": sample.source, "m": rep.m, "cr": rep.cr,
                                     "simplices": len(sample.subcomplex.simplices), "violations": len(found)})
        except InvariantViolation as exc:
            found = [exc.to_json()]
        except (ValueError, KeyError, StopIteration, IndexError) as exc:
            found = [{"check": "crash", "error": f"{type(exc).__name__}: {exc}"}]
        violations += [{"case": i, **v} for v in found]
    summary["violations"] = violations
    summary["total_violations"] = len(violations)
    _write(args.output, _dump(summary))
    print(f"fuzz {b.name}: {args.count} cases, {len(violations)} violation(s)", file=sys.stderr)
    return VIOLATION if violations else OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sphbuild", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("build", help="write a building as interchange JSON (or DOT)")
    src = q.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", help="fano, pg32, hexagon, thin:B3, rank1:N, joins like fano*s0")
    src.add_argument("--input", help="JSON building to validate and normalize")
    q.add_argument("-o", "--output")
    q.add_argument("--emit", choices=["json", "dot"], default="json")
    q.set_defaults(func=cmd_build)

    q = sub.add_parser("subcomplex", help="write a subcomplex file")
    q.add_argument("--building", required=True)
    g = q.add_mutually_exclusive_group()
    g.add_argument("--whole", action="store_true")
    g.add_argument("--apartment", metavar="C,D", help="apartment through chambers C and D")
    g.add_argument("--simplices", metavar="V,V;V", help="seed simplices as vertex lists")
    q.add_argument("--hull", action="store_true", help="take the convex hull of the seeds")
    q.add_argument("--remove", metavar="V,V;V", help="delete these simplices and their cofaces")
    q.add_argument("--seed", type=int, default=0, help="random convex subcomplex when no seeds are given")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_subcomplex)

    q = sub.add_parser("check", help="certify convexity and/or complete reducibility")
    q.add_argument("--building", required=True)
    q.add_argument("--subcomplex", required=True, help="subcomplex JSON file, or 'whole'")
    q.add_argument("--mode", choices=["convex", "cr", "all"], default="all")
    q.add_argument("-o", "--output")
    q.add_argument("--emit", choices=["json", "dot"], default="json")
    q.set_defaults(func=cmd_check)

    q = sub.add_parser("decompose", help="split a completely reducible subcomplex as Z * S^0 * ... * S^0")
    q.add_argument("--building", required=True)
    q.add_argument("--subcomplex", required=True)
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_decompose)

    q = sub.add_parser("fuzz", help="run the invariant battery on seeded convex subcomplexes")
    q.add_argument("--building", required=True)
    q.add_argument("--count", type=int, default=50)
    q.add_argument("--seed", type=int, default=1)
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_fuzz)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return VIOLATION


if __name__ == "__main__":
    sys.exit(main())
