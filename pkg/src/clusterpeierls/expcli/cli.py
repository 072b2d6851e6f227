"""``clusterpeierls`` command line.

    clusterpeierls run <config.json> [--seed S] [--out DIR] [--jobs K]
    clusterpeierls plot <sweep.csv> <trace.csv> [--out FILE]
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from ..errors import ClusterPeierlsError
from .config import default_out_root, parse_config
from .runner import run_experiment
from .svg import render_curves

log = logging.getLogger("clusterpeierls")


def _parser():
    ap = argparse.ArgumentParser(prog="clusterpeierls", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run an experiment config")
    r.add_argument("config", type=Path)
    r.add_argument("--seed", type=int, default=None, help="override the config seed")
    r.add_argument("--out", type=Path, default=None, help="output directory (default $CLUSTERPEIERLS_OUT or ./out)")
    r.add_argument("--jobs", type=int, default=1, help="worker processes; 1 runs serially")

    p = sub.add_parser("plot", help="render M(T) and I(t) curves to SVG")
    p.add_argument("sweep_csv", type=Path)
    p.add_argument("trace_csv", type=Path)
    p.add_argument("--out", type=Path, default=Path("curves.svg"))
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.command == "plot":
        try:
            path = render_curves(args.sweep_csv, args.trace_csv, args.out)
        except (ClusterPeierlsError, OSError) as exc:
            print(f"clusterpeierls plot: {exc}", file=sys.stderr)
            return 1
        print(path)
        return 0

    name = args.config.stem
    try:
        cfg = parse_config(args.config)
        name = cfg.name
        if args.seed is not None:
            cfg.params["seed"] = args.seed
        if args.jobs < 1:
            raise ClusterPeierlsError("--jobs must be >= 1")
        out = args.out or default_out_root()
        written = run_experiment(cfg, out, jobs=args.jobs)
    except (ClusterPeierlsError, OSError) as exc:
        print(f"experiment {name!r} failed: {exc}", file=sys.stderr)
        return 1
    for path in written.values():
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
