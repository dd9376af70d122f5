"""Command-line front end: ``simulate``, ``compare`` and ``metrics``."""
from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .agents import TradeSequence, generate_trade_sequence
from .curves import CurveKind, CurveSpec, PoolState
from .engine import CSV_COLUMNS, SimConfig, SimResult, run, run_comparison
from .errors import AMMError
from .market import DEFAULT_P_MIN, PriceSchedule
from .metrics import divergence_loss_constant_product, pool_value, slippage


def _fmt(value) -> str:
    if isinstance(value, int):
        return str(value)
    return format(value, ".15g")


def write_csv(result: SimResult, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for record in result.records:
            writer.writerow([_fmt(v) for v in record.as_row()])


def format_summary(results: dict[CurveKind, SimResult]) -> str:
    lines = []
    for kind, result in results.items():
        s = result.summary
        lines += [
            f"[{kind.value}]",
            f"  final market price        {_fmt(s.final_price)}",
            f"  LP final value            {_fmt(s.lp_final_value)}"
            f"  ({s.lp_final_value / s.initial_value_at_final_price:.4f} of initial"
            f" holdings {_fmt(s.initial_value_at_final_price)})",
            f"  trader final value        {_fmt(s.trader_final_value)}",
            f"  arbitrageur final value   {_fmt(s.arb_final_value)}",
            f"  collected fees            {_fmt(s.total_fees)}",
            f"  trader slippage           {_fmt(s.total_slippage)}",
            f"  declined trades           {s.total_declined}",
            f"  arbitrage trades          {s.arb_trades}",
            f"  min pool X fraction       {s.min_pool_x_fraction:.6f}",
            f"  min pool Y fraction       {s.min_pool_y_fraction:.6f}",
        ]
    return "\n".join(lines) + "\n"


def _config_from(args, kind: CurveKind) -> SimConfig:
    schedule = PriceSchedule.parse(args.price_schedule, p_min=args.p_min)
    return SimConfig(
        amm_kind=kind, steps=args.steps, seed=args.seed, fee_rate=args.fee, schedule=schedule
    )


def _trades_from(args) -> TradeSequence:
    if args.replay_file:
        return TradeSequence.load(args.replay_file)
    return generate_trade_sequence(args.seed, args.steps)


def cmd_simulate(args) -> int:
    config = _config_from(args, CurveKind(args.amm))
    result = run(config, _trades_from(args))
    out = Path(args.out)
    if out.suffix != ".csv":
        out = out.with_name(out.name + ".csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(result, out)
    sys.stdout.write(format_summary({config.amm_kind: result}))
    return 0


def cmd_compare(args) -> int:
    config = _config_from(args, CurveKind.STATIC_SUM)
    trades = _trades_from(args)
    results = run_comparison(config, trades)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    trades.save(out / "trades.txt")
    for kind, result in results.items():
        write_csv(result, out / f"{kind.value}.csv")
    summary = format_summary(results)
    (out / "summary.txt").write_text(summary)
    sys.stdout.write(summary)
    return 0


def cmd_metrics(args) -> int:
    if args.metric == "divergence-loss":
        value = divergence_loss_constant_product(args.rho)
    elif args.metric == "pool-value":
        value = pool_value(args.x, args.y, args.price)
    else:
        kind = CurveKind(args.amm)
        if kind.is_dynamic:
            raise AMMError("slippage desk checks take a static curve through (x, y)")
        pool = PoolState(args.x, args.y)
        value = slippage(CurveSpec.for_pool(kind, pool), pool, args.dx)
    print(format(value, ".12g"))
    return 0


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--fee", type=float, default=0.02, help="fee rate on trade notional")
    p.add_argument(
        "--price-schedule",
        default="linear:0:10",
        help="linear:<p0>:<p1>, constant:<p> or file:<path> (default: linear:0:10)",
    )
    p.add_argument("--p-min", type=float, default=DEFAULT_P_MIN, help="market price floor")
    p.add_argument(
        "--replay-file", help="trade sizes, one per line; overrides --seed for trade generation"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynamic-amm", description="Static vs market-tracking AMM simulations."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    kinds = [k.value for k in CurveKind]

    sim = sub.add_parser("simulate", help="run one AMM and write <out>.csv")
    sim.add_argument("--amm", required=True, choices=kinds)
    _add_run_options(sim)
    sim.add_argument("--out", required=True, help="output path prefix")
    sim.set_defaults(func=cmd_simulate)

    cmp_ = sub.add_parser("compare", help="run all four AMMs on one trade sequence")
    _add_run_options(cmp_)
    cmp_.add_argument("--out", required=True, help="output directory")
    cmp_.set_defaults(func=cmd_compare)

    met = sub.add_parser("metrics", help="evaluate a single formula")
    met_sub = met.add_subparsers(dest="metric", required=True)
    dl = met_sub.add_parser("divergence-loss", help="constant-product loss for price ratio rho")
    dl.add_argument("--rho", type=float, required=True)
    pv = met_sub.add_parser("pool-value")
    pv.add_argument("--x", type=float, required=True)
    pv.add_argument("--y", type=float, required=True)
    pv.add_argument("--price", type=float, required=True)
    sl = met_sub.add_parser("slippage", help="slippage of a trade on a static curve through (x, y)")
    sl.add_argument("--amm", required=True, choices=kinds)
    sl.add_argument("--x", type=float, required=True)
    sl.add_argument("--y", type=float, required=True)
    sl.add_argument("--dx", type=float, required=True)
    met.set_defaults(func=cmd_metrics)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (AMMError, ValueError, OSError) as exc:
        print(f"dynamic-amm: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
