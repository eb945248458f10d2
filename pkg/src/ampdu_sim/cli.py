"""Command line entry point: ``ampdu-sim run|best|sweep-k|analytic|oracle``."""
from __future__ import annotations

import argparse
import logging
import sys

from .channel import ErrorModel
from .engine import SimConfig
from .experiment import (BEST_COLUMNS, RUN_COLUMNS, SWEEP_K_COLUMNS, SpecError, evaluate,
                         load_spec, render)
from .frame import FrameGeometry, MacTimingProfile, PhyProfile, analytic_throughput
from .oracle import markov_oracle
from .strategy import parse_strategy

TABLES = {"run": RUN_COLUMNS, "best": BEST_COLUMNS, "sweep-k": SWEEP_K_COLUMNS}


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _add_grid_args(p: argparse.ArgumentParser):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--spec", help="JSON experiment spec")
    src.add_argument("--paper-grid", action="store_true",
                     help="full default grid: 4 MSDU sizes, 4 rates, PER 0.05..0.50, 21 methods")
    p.add_argument("--seed", type=_u64, help="master seed (fallback: $AMPDU_SIM_SEED)")
    p.add_argument("--attempts", type=int)
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--jobs", type=int, default=1, help="grid points evaluated in parallel")


def _add_frame_args(p: argparse.ArgumentParser):
    p.add_argument("--msdu-bytes", type=int, default=1500)
    p.add_argument("--msdus-per-mpdu", type=int, default=1)
    p.add_argument("--mode", choices=("AMPDU", "TWO_LEVEL"), default="AMPDU")
    p.add_argument("--rate", type=float, default=1299.9, help="PHY rate in Mbps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ampdu-sim", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="log one line per grid point")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("run", "K-swept throughput of every strategy at every grid point"),
                        ("best", "best strategy per grid point against Base"),
                        ("sweep-k", "throughput for every K at every grid point")):
        _add_grid_args(sub.add_parser(name, help=help_))

    p = sub.add_parser("analytic", help="closed-form single-transmission throughput")
    p.add_argument("--x", type=int, default=64, help="distinct MPDUs in the PSDU")
    p.add_argument("--psucc", type=float, default=1.0)
    _add_frame_args(p)

    p = sub.add_parser("oracle", help="exact Markov-chain throughput for W <= 4")
    p.add_argument("--window", type=int, default=1)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--strategy", default="base")
    p.add_argument("--per", type=float, default=0.5)
    _add_frame_args(p)
    return parser


def _emit(text: str, out):
    if out:
        with open(out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _single(row: dict, columns: tuple[str, ...]) -> str:
    return render([row], columns, "csv")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s", stream=sys.stderr)
    try:
        if args.command in TABLES:
            spec = load_spec(args.spec, args.paper_grid, {
                "seed": args.seed, "attempts": args.attempts,
                "format": args.format, "out": args.out})
            rows = evaluate(args.command, spec, jobs=max(1, args.jobs))
            _emit(render(rows, TABLES[args.command], spec.format), spec.out)
            return 0
        geom = FrameGeometry(args.msdu_bytes, args.msdus_per_mpdu, args.mode)
        phy = PhyProfile(args.rate)
        axes = {"mode": geom.mode.value, "msdu_bytes": args.msdu_bytes,
                "msdus_per_mpdu": args.msdus_per_mpdu, "rate_mbps": args.rate}
        if args.command == "analytic":
            thr = analytic_throughput(args.x, args.psucc, geom, MacTimingProfile(), phy)
            cols = ("mode", "msdu_bytes", "msdus_per_mpdu", "rate_mbps", "x", "psucc",
                    "throughput_mbps")
            _emit(_single({**axes, "x": args.x, "psucc": args.psucc, "throughput_mbps": thr},
                          cols), None)
        else:
            strat = parse_strategy(args.strategy)
            cfg = SimConfig(geom, phy, ErrorModel(args.per), strategy=strat, k=args.k,
                            window_w=args.window)
            thr = markov_oracle(cfg)
            cols = ("mode", "msdu_bytes", "msdus_per_mpdu", "rate_mbps", "per", "strategy",
                    "window_w", "k", "throughput_mbps")
            _emit(_single({**axes, "per": args.per, "strategy": strat.name,
                           "window_w": args.window, "k": args.k, "throughput_mbps": thr},
                          cols), None)
        return 0
    except (SpecError, ValueError) as e:
        print(f"ampdu-sim: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
