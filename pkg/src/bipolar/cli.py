"""Command-line entry point: ``bipolar <subcommand> ...``.

Exit codes: 0 success, 2 precondition violation, 3 only inconclusive outcomes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .bipolar_cert import certify_zero_bipolar
from .dinv import CorrectionTable
from .linkform import LinkingGroup, brute_force_metabolizers, structured_metabolizers
from .numtheory import find_family, is_admissible, sqrt_minus_one
from .obstruction import averaging_decision
from .pipeline import PipelineConfig, knot_tables, render_text, run_pipeline, write_report

OUTPUT_ENV = "BIPOLAR_OUTPUT_DIR"
EXIT_OK, EXIT_PRECONDITION, EXIT_INCONCLUSIVE = 0, 2, 3


def _outdir(args) -> Path | None:
    env = os.environ.get(OUTPUT_ENV)
    if env:
        return Path(env)
    return Path(args.out) if getattr(args, "out", None) else None


def _load_config(path: str | None) -> PipelineConfig:
    if path is None:
        return PipelineConfig()
    return PipelineConfig.from_dict(json.loads(Path(path).read_text()))


def cmd_search(args) -> int:
    fam = find_family(args.n_lo, args.n_hi, args.count)
    if args.json:
        print(json.dumps([{"n": c.n, "m": c.m} for c in fam], indent=2))
    else:
        for c in fam:
            print(f"n={c.n} m={c.m}")
    return EXIT_OK


def cmd_metabolizers(args) -> int:
    m = args.m
    group = LinkingGroup(m, args.unit)
    if args.brute_force:
        mets = brute_force_metabolizers(group)
    else:
        mets = structured_metabolizers(m)
    rows = []
    for h in mets:
        b = h.slope
        rows.append({"generators": [list(g) for g in h.generators], "b": b})
    if args.json:
        print(json.dumps({"m": m, "unit": args.unit, "metabolizers": rows}, indent=2))
    else:
        print(f"m={m} unit={args.unit}: {len(rows)} metabolizer(s)")
        for r in rows:
            gens = ", ".join(f"({x},{y})" for x, y in r["generators"])
            print(f"  <{gens}>" + (f"  b={r['b']}" if r["b"] is not None else ""))
    return EXIT_OK


def cmd_dtable(args) -> int:
    cfg = _load_config(args.config)
    t_d, t_u = knot_tables(args.n, args.k, cfg)
    out = _outdir(args) or Path(".")
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, t in (("D", t_d), ("U", t_u)):
        path = out / f"dtable_n{args.n}_k{args.k}_{name}.json"
        path.write_text(t.to_json() + "\n")
        paths.append(path)
    for p in paths:
        print(p)
    return EXIT_OK


def cmd_obstruct(args) -> int:
    t_d = CorrectionTable.from_json(Path(args.td).read_text())
    t_u = CorrectionTable.from_json(Path(args.tu).read_text())
    m = 4 * args.n * args.n + 1
    if t_d.m != m or t_u.m != m:
        raise ValueError(f"tables must have order 4n^2+1 = {m}")
    report = averaging_decision(t_d, t_u, sqrt_minus_one(m))
    report.provenance["source"] = "ingested"
    report.provenance["knot"] = {"n": args.n, "k": args.k}
    print(report.to_json())
    return EXIT_OK if report.obstructed else EXIT_INCONCLUSIVE


def cmd_certify(args) -> int:
    cert = certify_zero_bipolar(args.n, args.k)
    print(cert.to_json() if args.json else cert.render())
    return EXIT_OK


def cmd_pipeline(args) -> int:
    cfg = _load_config(args.config)
    for name in ("n_lo", "n_hi", "family_size"):
        val = getattr(args, name)
        if val is not None:
            setattr(cfg, name, val)
    cfg.check()
    report = run_pipeline(cfg)
    out = _outdir(args) or (Path(cfg.output_dir) if cfg.output_dir else None)
    if out is not None:
        for p in write_report(report, out):
            print(p, file=sys.stderr)
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        sys.stdout.write(render_text(report))
    any_selected = any(e["selected_k"] for e in report["family"])
    return EXIT_OK if any_selected else EXIT_INCONCLUSIVE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bipolar", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("search", help="admissible n with pairwise coprime 4n^2+1")
    p.add_argument("n_lo", type=int)
    p.add_argument("n_hi", type=int)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("metabolizers", help="metabolizers of the linking form on Z_m + Z_m")
    p.add_argument("m", type=int)
    p.add_argument("--unit", type=int, default=1)
    p.add_argument("--brute-force", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_metabolizers)

    p = sub.add_parser("dtable", help="write correction-term tables for K_{D_k,n} and K_{U,n}")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("--config")
    p.add_argument("--out")
    p.set_defaults(func=cmd_dtable)

    p = sub.add_parser("obstruct", help="averaging decision on two ingested tables")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("--td", required=True, help="table for M(K_{D_k,n})")
    p.add_argument("--tu", required=True, help="table for M(K_{U,n})")
    p.set_defaults(func=cmd_obstruct)

    p = sub.add_parser("certify", help="0-bipolarity certificate for K_{n,k}")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("pipeline", help="full family run")
    p.add_argument("--config")
    p.add_argument("--n-lo", dest="n_lo", type=int)
    p.add_argument("--n-hi", dest="n_hi", type=int)
    p.add_argument("--count", dest="family_size", type=int)
    p.add_argument("--out")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_pipeline)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
