"""Command line entry point: ``qcovlab run|list|validate-r``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ConfigError, DomainError, QCovError, ShapeError
from .qnum import QContext

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _parser():
    p = argparse.ArgumentParser(prog="qcovlab", description="Verification suites for q-covariant systems.")
    sub = p.add_subparsers(dest="verb", required=True)
    run = sub.add_parser("run", help="run the suites named in a JSON config")
    run.add_argument("config", type=Path)
    run.add_argument("--out", type=Path, default=None, help="output directory (overrides paths.output_dir)")
    run.add_argument("--quiet", action="store_true")
    sub.add_parser("list", help="list the available suites")
    val = sub.add_parser("validate-r", help="validate a 9x9 OSp R-hat given as matrix JSON")
    val.add_argument("file", type=Path)
    val.add_argument("--q", type=float, required=True)
    return p


def _cmd_list(out) -> int:
    from .suites import list_suites

    for s in list_suites():
        flag = "  [requires input file]" if s["requires_input"] else ""
        print(f"{s['id']:<15} {s['description']}  ({s['covers']}){flag}", file=out)
    return EXIT_OK


def _cmd_run(args, out, err) -> int:
    from .suites import SuiteConfig, run_suites, write_reports

    try:
        cfg = SuiteConfig.load(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=err)
        return EXIT_CONFIG
    outdir = args.out or Path(cfg.paths.get("output_dir", "qcovlab-report"))
    if "rmatrix" in cfg.paths and not Path(cfg.paths["rmatrix"]).is_file():
        print(f"config error: paths.rmatrix: no such file {cfg.paths['rmatrix']}", file=err)
        return EXIT_CONFIG
    report, timings = run_suites(cfg)
    written = write_reports(report, timings, cfg, outdir)
    if not args.quiet:
        meta = report["meta"]
        print(f"{meta['n_checks']} checks, {meta['n_failed']} failed", file=out)
        for r in report["checks"]:
            if not r["pass"]:
                print(f"FAIL {r['suite']} {r['check_id']} {json.dumps(r['params'], sort_keys=True)}", file=out)
        for path in written:
            print(f"wrote {path}", file=out)
    return EXIT_OK if report["meta"]["n_failed"] == 0 else EXIT_FAIL


def _cmd_validate(args, out, err) -> int:
    from .rmx import load_rmatrix, osp_R_validate

    try:
        ctx = QContext(args.q)
    except DomainError as exc:
        print(f"error: --q: {exc}", file=err)
        return EXIT_CONFIG
    try:
        R = load_rmatrix(args.file)
    except (ShapeError, OSError) as exc:
        print(f"error: {args.file}: {exc}", file=err)
        return EXIT_CONFIG
    rep = osp_R_validate(R, ctx)
    print(json.dumps(rep.to_dict(), indent=2, sort_keys=True), file=out)
    return EXIT_OK if rep.passed else EXIT_FAIL


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        if args.verb == "list":
            return _cmd_list(out)
        if args.verb == "run":
            return _cmd_run(args, out, err)
        return _cmd_validate(args, out, err)
    except QCovError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
