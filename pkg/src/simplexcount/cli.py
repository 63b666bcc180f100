"""Command-line entry point: ``simplexcount <subcommand> ...``.

Exit status is 0 on success, 1 when a verification fails and 2 on bad
input (unreadable files, malformed JSON, violated preconditions).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from .acceptance import known_overrides, run_all
from .constructions import LenzSpec, lenz
from .counting import PatternSpec, count_pattern, count_unit_tuples
from .cuttings import CuttingError, sample_cutting, spheres_from_json_obj, verify_cutting
from .exponents import compute_bound, load_overrides
from .geom import PointSet
from .graphs import SmallGraph
from .lp import build_lp, solve_exact
from .realizability import necessary_conditions

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    args: argparse.Namespace


def _read(path: Optional[str]) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"input file not found: {path}")
    return p.read_text()


def _json(path: Optional[str]):
    text = _read(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path or 'stdin'}: {exc}") from exc


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _parse_lambda(text: str) -> tuple:
    try:
        return tuple(int(v) for v in text.replace(" ", "").split(",") if v)
    except ValueError as exc:
        raise ConfigError(f"--lambda expects comma-separated integers, got {text!r}") from exc


def cmd_exponents(a: argparse.Namespace) -> int:
    overrides = []
    if a.overrides:
        overrides = load_overrides(_read(a.overrides))
    elif a.known_overrides:
        overrides = known_overrides()
    res = compute_bound(a.k, a.d, a.mode, overrides, low_profile=a.low_profile)
    _emit(res.to_csv(), a.output)
    return EXIT_OK


def cmd_lp(a: argparse.Namespace) -> int:
    g = SmallGraph.from_json_obj(_json(a.graph))
    lam = _parse_lambda(a.lam)
    pattern = None
    if a.family == "pattern":
        if not a.pattern_graph:
            raise ConfigError("--family pattern needs --pattern-graph")
        pattern = SmallGraph.from_json_obj(_json(a.pattern_graph)).edges
    sol = solve_exact(build_lp(a.family, g, lam, pattern))
    out = {"family": a.family, "lambda": list(lam), **sol.to_json_obj()}
    if a.d is not None:
        out["conditions"] = necessary_conditions(g, lam, a.d).to_json_obj()
    _emit(json.dumps(out), a.output)
    return EXIT_OK


def cmd_lenz(a: argparse.Namespace) -> int:
    res = lenz(LenzSpec(a.d, a.n, a.mode, a.seed))
    _emit(res.points.to_json(), a.output)
    if a.sidecar:
        Path(a.sidecar).write_text(res.sidecar_json() + "\n")
    return EXIT_OK


def cmd_count(a: argparse.Namespace) -> int:
    pts = PointSet.from_json_obj(_json(a.points))
    if a.pattern == "unit":
        if a.k is None:
            raise ConfigError("--pattern unit needs --k")
        counts = count_unit_tuples(pts, a.k, tol=a.tol)
    else:
        spec = PatternSpec.from_json_obj(_json(a.pattern))
        counts = count_pattern(pts, spec, tol=a.tol)
    _emit(counts.to_json(), a.output)
    return EXIT_OK


def cmd_cutting(a: argparse.Namespace) -> int:
    sigmas = spheres_from_json_obj(_json(a.spheres))
    try:
        cut = sample_cutting(sigmas, a.r, seed=a.seed, constant=a.constant, budget=a.budget)
    except CuttingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    obj = cut.to_json_obj()
    status = EXIT_OK
    if a.verify:
        rep = verify_cutting(cut, sigmas, n_points=a.points, seed=a.seed)
        obj["verification"] = {
            "passed": rep.passed,
            "max_stoppers": list(rep.max_stoppers),
            "coverage_failures": rep.coverage_failures,
            "disjointness_violations": rep.disjointness_violations,
            "classification_mismatches": rep.classification_mismatches,
        }
        status = EXIT_OK if rep.passed else EXIT_FAIL
    _emit(json.dumps(obj), a.output)
    return status


def cmd_verify(a: argparse.Namespace) -> int:
    only = _parse_lambda(a.only) if a.only else None
    bad = [None]

    def report(res) -> None:
        print(res.line(), flush=True)
        if not res.passed and bad[0] is None:
            bad[0] = res.ident

    results = run_all(only, report)
    if bad[0] is not None:
        print(f"acceptance criterion {bad[0]} FAILED", file=sys.stderr)
        return EXIT_FAIL
    print(f"all {len(results)} criteria passed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="simplexcount", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="subcommand", required=True)

    e = sub.add_parser("exponents", help="bound table for k classes in R^d (CSV)")
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--d", type=int, required=True)
    e.add_argument("--mode", choices=("unit", "diam", "diameter"), default="unit")
    e.add_argument("--overrides", help="override JSON file")
    e.add_argument("--known-overrides", action="store_true",
                   help="use the bundled overrides for (k,d) = (4,7) unit and (3,5) diameter")
    e.add_argument("--low-profile", choices=("monotone", "recursive"), default="monotone")
    e.add_argument("--output")
    e.set_defaults(func=cmd_exponents)

    lp = sub.add_parser("lp", help="solve one covering LP exactly (JSON)")
    lp.add_argument("--graph", required=True, help="graph JSON ({\"k\": K, \"edges\": [[1,2],...]})")
    lp.add_argument("--lambda", dest="lam", required=True, help='profile such as "2,2,3"')
    lp.add_argument("--d", type=int, help="ambient dimension; adds the admissibility report")
    lp.add_argument("--family", choices=("unit", "diam", "diameter", "pattern"), default="unit")
    lp.add_argument("--pattern-graph", help="pattern graph JSON for --family pattern")
    lp.add_argument("--output")
    lp.set_defaults(func=cmd_lp)

    le = sub.add_parser("lenz", help="Lenz configuration (PointSet JSON)")
    le.add_argument("--d", type=int, required=True)
    le.add_argument("--n", type=int, required=True)
    le.add_argument("--mode", choices=("rich", "clique"), default="rich")
    le.add_argument("--seed", type=int, default=0)
    le.add_argument("--sidecar", help="write construction parameters here")
    le.add_argument("--output")
    le.set_defaults(func=cmd_lenz)

    c = sub.add_parser("count", help="brute-force counts (JSON)")
    c.add_argument("--points", help="PointSet JSON file; stdin when omitted")
    c.add_argument("--pattern", required=True, help='"unit" or a pattern JSON file')
    c.add_argument("--k", type=int)
    c.add_argument("--tol", type=float, default=1e-9)
    c.add_argument("--output")
    c.set_defaults(func=cmd_count)

    cu = sub.add_parser("cutting", help="sampled cutting of lifted spheres (JSON)")
    cu.add_argument("--spheres", required=True)
    cu.add_argument("--r", type=int, required=True)
    cu.add_argument("--seed", type=int, default=0)
    cu.add_argument("--constant", type=float, default=8.0)
    cu.add_argument("--budget", type=int, default=64)
    cu.add_argument("--verify", action="store_true", help="attach an independent recount")
    cu.add_argument("--points", type=int, default=10_000, help="coverage sample size")
    cu.add_argument("--output")
    cu.set_defaults(func=cmd_cutting)

    v = sub.add_parser("verify", help="run the acceptance suite")
    v.add_argument("--only", help='comma-separated criterion numbers, e.g. "1,2"')
    v.set_defaults(func=cmd_verify)
    return p


def dispatch(cfg: RunConfig) -> int:
    try:
        return cfg.args.func(cfg.args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, KeyError, TypeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return dispatch(RunConfig(args.subcommand, args))


if __name__ == "__main__":
    sys.exit(main())
