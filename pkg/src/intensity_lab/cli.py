"""Command-line front door: ``intensity-lab <command> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import reports, verify
from .constructions import ConstructionMismatch, GroupSpec, SpecError
from .groups import DEFAULT_MAX_ORDER, DEFAULT_MAX_SUBGROUPS, CapacityExceeded
from .intensity import DEFAULT_CANDIDATE_BUDGET, intensity
from .kappa import certificate_json

EXIT_OK, EXIT_CHECK, EXIT_CAPACITY, EXIT_INPUT = 0, 2, 3, 4


@dataclass
class RunConfig:
    command: str
    spec_path: str | None = None
    output: str | None = None
    fmt: str = "json"
    max_order: int = DEFAULT_MAX_ORDER
    max_subgroups: int = DEFAULT_MAX_SUBGROUPS
    candidate_budget: int = DEFAULT_CANDIDATE_BUDGET
    threads: int = 1
    seed: int = 0

    def __post_init__(self):
        for name in ("max_order", "max_subgroups", "candidate_budget", "threads"):
            if getattr(self, name) <= 0:
                raise SpecError(f"{name} must be positive")


def _load_spec(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc.strerror}") from None
    return GroupSpec.from_json(text)


def _emit(report, cfg):
    text = reports.to_markdown(report) if cfg.fmt == "markdown" else reports.to_json(report)
    if cfg.output:
        Path(cfg.output).write_text(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _group(cfg, args):
    spec = _load_spec(cfg.spec_path)
    G = reports.cached_group(spec, use_cache=not args.no_cache, max_order=cfg.max_order)
    G._cache.setdefault("max_subgroups", cfg.max_subgroups)
    return G


def cmd_analyze(cfg, args):
    G = _group(cfg, args)
    _emit(reports.analyze(G, seed=cfg.seed), cfg)
    return EXIT_OK


def cmd_intensity(cfg, args):
    G = _group(cfg, args)
    from .groups import all_subgroups
    all_subgroups(G, max_count=cfg.max_subgroups)
    rep = intensity(G, budget=cfg.candidate_budget, threads=cfg.threads)
    _emit(reports.intensity_report(G, rep), cfg)
    return EXIT_OK


def cmd_subgroups(cfg, args):
    G = _group(cfg, args)
    from .groups import all_subgroups
    all_subgroups(G, max_count=cfg.max_subgroups)
    _emit(reports.subgroups_report(G, classes_only=args.classes_only), cfg)
    return EXIT_OK


def cmd_kappa(cfg, args):
    text = certificate_json()
    if cfg.output:
        Path(cfg.output).write_text(text + "\n")
    else:
        print(text)
    ok = all(v is True or v == 3 for v in json.loads(text)["checks"].values())
    return EXIT_OK if ok else EXIT_CHECK


def cmd_verify(cfg, args):
    checks = verify.select(args.only)
    if not checks:
        raise SpecError(f"no checks for module {args.only!r}")
    outcomes = verify.run(checks, budget_minutes=args.budget_minutes)
    print(verify.format_table(outcomes))
    status = verify.exit_status(outcomes, strict=args.strict)
    passed = sum(o.status == "PASS" for o in outcomes)
    print(f"\n{passed}/{len(outcomes)} checks passed; exit {status}")
    if cfg.output:
        Path(cfg.output).write_text(reports.to_json(
            {"schemaVersion": reports.SCHEMA_VERSION, "kind": "verify",
             "rows": [o.row() for o in outcomes], "exit": status}) + "\n")
    return status


def cmd_cache(cfg, args):
    n = reports.clear_cache()
    print(f"removed {n} cached group(s) from {reports.cache_dir()}")
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="intensity-lab",
                                 description="Finite p-group constructions, predicates and intensity.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, spec=True):
        if spec:
            p.add_argument("spec", help="group spec JSON file")
        p.add_argument("-o", "--output", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "markdown"), default="json")
        p.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
        p.add_argument("--max-subgroups", type=int, default=DEFAULT_MAX_SUBGROUPS)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--no-cache", action="store_true", help="do not read or write the group cache")

    p = sub.add_parser("analyze", help="series, widths and the predicate battery")
    common(p)
    p = sub.add_parser("intensity", help="intensity by scalar-restricted automorphism search")
    common(p)
    p.add_argument("--budget-candidates", type=int, default=DEFAULT_CANDIDATE_BUDGET)
    p.add_argument("--threads", type=int, default=1)
    p = sub.add_parser("subgroups", help="all subgroups and their conjugacy classes")
    common(p)
    p.add_argument("--classes-only", action="store_true")
    p = sub.add_parser("kappa-structures", help="certificate for the structures on F_3^2")
    p.add_argument("-o", "--output")
    p = sub.add_parser("verify-thesis", help="run the verification battery")
    p.add_argument("--strict", action="store_true", help="budget skips count as failures")
    p.add_argument("--only", help="restrict to one module (e.g. kappa, group_core)")
    p.add_argument("--budget-minutes", type=float, default=None)
    p.add_argument("-o", "--output", help="also write the rows as JSON")
    p = sub.add_parser("cache", help="manage the group cache")
    p.add_argument("action", choices=("clear",))
    return ap


COMMANDS = {"analyze": cmd_analyze, "intensity": cmd_intensity, "subgroups": cmd_subgroups,
            "kappa-structures": cmd_kappa, "verify-thesis": cmd_verify, "cache": cmd_cache}


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = RunConfig(
            command=args.command,
            spec_path=getattr(args, "spec", None),
            output=getattr(args, "output", None),
            fmt=getattr(args, "format", "json"),
            max_order=getattr(args, "max_order", DEFAULT_MAX_ORDER),
            max_subgroups=getattr(args, "max_subgroups", DEFAULT_MAX_SUBGROUPS),
            candidate_budget=getattr(args, "budget_candidates", DEFAULT_CANDIDATE_BUDGET),
            threads=getattr(args, "threads", 1),
            seed=getattr(args, "seed", 0),
        )
        return COMMANDS[args.command](cfg, args)
    except CapacityExceeded as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (SpecError, ConstructionMismatch) as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        return EXIT_INPUT if isinstance(exc, SpecError) else EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
