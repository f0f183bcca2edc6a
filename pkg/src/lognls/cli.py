"""Command line entry point: lognls run|sweep|figures|verify."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

EXIT_OK, EXIT_ASSERT, EXIT_CONFIG, EXIT_ABORT = 0, 1, 2, 3


def _exit_code(manifests) -> int:
    if any(m.status == "numerical_abort" for m in manifests):
        return EXIT_ABORT
    if any(m.status != "ok" for m in manifests):
        return EXIT_ASSERT
    return EXIT_OK


def _load(path):
    from .harness import parse_config

    return parse_config(Path(path).read_text(encoding="utf-8"))


def _report(m):
    print(f"{m.tag}: {m.status} ({m.wall_clock:.2f}s)")
    for name, ok in m.assertions.items():
        print(f"  {'PASS' if ok else 'FAIL'}  {name}")
    if m.error:
        print(f"  error: {m.error}")


def cmd_run(args) -> int:
    from .harness import run_scenario

    s = _load(args.config)
    m = run_scenario(s, args.out)
    _report(m)
    return _exit_code([m])


def cmd_sweep(args) -> int:
    from .harness import _ilist, sweep, sweep_summary

    s = _load(args.config)
    raw = args.values
    values = _ilist(raw) if args.axis in ("K", "J", "n_time") else [float(v) for v in raw.split(",") if v]
    ms = sweep(s, args.axis, values, args.out, args.workers)
    for m in ms:
        _report(m)
    print(json.dumps(sweep_summary(ms, args.axis), indent=2))
    return _exit_code(ms)


def cmd_figures(args) -> int:
    from .figures import emit_figures, load_manifests

    if not load_manifests(args.manifest_dir):
        print(f"no manifests in {args.manifest_dir}", file=sys.stderr)
        return EXIT_CONFIG
    for p in emit_figures(args.manifest_dir, args.out):
        print(p)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .acceptance import run_all

    results = run_all(sys.stdout)
    n_ok = sum(r.passed for r in results)
    print(f"{n_ok}/{len(results)} criteria pass")
    return EXIT_OK if n_ok == len(results) else EXIT_ASSERT


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lognls", description="1D logNLS simulation and verification lab")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run one scenario from a config file")
    r.add_argument("config")
    r.add_argument("--out", help="output directory (default: out_dir from the config)")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("sweep", help="run a scenario over values of one parameter")
    s.add_argument("config")
    s.add_argument("--axis", required=True)
    s.add_argument("--values", required=True, help="comma separated; K accepts ranges like 7..11")
    s.add_argument("--out")
    s.add_argument("--workers", type=int)
    s.set_defaults(func=cmd_sweep)

    f = sub.add_parser("figures", help="write SVG figures from a directory of manifests")
    f.add_argument("manifest_dir")
    f.add_argument("--out")
    f.set_defaults(func=cmd_figures)

    v = sub.add_parser("verify", help="run the acceptance suite")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    from .harness import ConfigError

    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FloatingPointError as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return EXIT_ABORT


if __name__ == "__main__":
    sys.exit(main())
