"""Command-line front end.

Subcommands: ``simulate`` (two-bath cycles), ``pump`` (single-bath pump
cycles), ``sweep`` (efficiency-power trade-off), ``verify`` (oracle and
invariant self-checks).  Numeric outputs are deterministic CSVs; ``--svg``
additionally renders charts and gnuplot-style ``.dat`` twins derived from
the same series.
"""

import argparse
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import cycle_efficiency, cycle_power, sweep_efficiency_power
from .config import EngineConfig, load_config
from .cycle import run_engine
from .exceptions import OttoKilnError, UndefinedEfficiencyError
from .output import (
    write_cycles_csv,
    write_dat,
    write_svg_chart,
    write_sweep_csv,
    write_timeseries_csv,
    write_wide_timeseries_csv,
)
from .verification import run_all_checks


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="ottokiln",
        description="Deterministic quantum Otto heat-engine simulator on a truncated oscillator ladder.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("simulate", "run two-bath Otto cycles and write time-series and cycle-ledger CSVs"),
        ("pump", "run single-bath pump cycles and write time-series and cycle-ledger CSVs"),
        ("sweep", "sweep the frequency ratio and write efficiency/power per point"),
        ("verify", "run oracle-equivalence and invariant suites, print a pass/fail table"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", type=Path, default=None, help="config file (defaults apply if omitted)")
        if name != "verify":
            cmd.add_argument("--out", type=Path, default=Path("out"), help="output directory")
            cmd.add_argument("--svg", action="store_true", help="also render SVG charts and .dat twins")
        if name in ("simulate", "pump"):
            cmd.add_argument("--wide", action="store_true", help="also write the full-distribution time series")
    return parser


def _load(args, mode_override):
    if args.config is None:
        base = EngineConfig()
        if mode_override is not None:
            base = replace(base, mode=mode_override)
        return base.validate()
    return load_config(args.config, mode_override=mode_override)


def _efficiency_series(trace):
    values = []
    for record in trace.records:
        try:
            values.append(cycle_efficiency(record))
        except UndefinedEfficiencyError:
            values.append(math.nan)
    return values


def _run_simulation(args, mode):
    config = _load(args, mode)
    trace = run_engine(config)
    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    write_timeseries_csv(out / "timeseries.csv", trace, config.csv_levels)
    write_cycles_csv(out / "cycles.csv", trace)
    if args.wide:
        write_wide_timeseries_csv(out / "timeseries_wide.csv", trace)

    efficiencies = _efficiency_series(trace)
    if args.svg and trace.records:
        cycles = [r.cycle_index + 1 for r in trace.records]
        write_dat(out / "u_t.dat", ["t", "U"], (trace.times, trace.energies))
        write_svg_chart(out / "u_t.svg", trace.times, trace.energies,
                        "Internal energy over time", "t", "U")
        write_dat(out / "efficiency_n.dat", ["cycle", "efficiency"], (cycles, efficiencies))
        write_svg_chart(out / "efficiency_n.svg", cycles, efficiencies,
                        "Per-cycle efficiency", "cycle", "efficiency")

    if trace.records:
        last = trace.final_record
        eff = efficiencies[-1]
        print(f"{mode}: {len(trace.records)} cycles, final efficiency {eff:.6g}, "
              f"final power {cycle_power(last, trace.cycle_time):.6g}, "
              f"cycle-start TV shift {trace.a_shift_tv[-1]:.3g}")
        if not trace.converged():
            print("note: run did not reach the cyclostationarity threshold (TV < 1e-6)")
    else:
        print(f"{mode}: 0 cycles requested; wrote empty series")
    print(f"wrote {out / 'timeseries.csv'} and {out / 'cycles.csv'}")
    return 0


def _run_sweep(args):
    config = _load(args, "sweep")
    if config.sweep_ratio_min is not None and config.sweep_ratio_max is not None:
        ratios = np.linspace(config.sweep_ratio_min, config.sweep_ratio_max,
                             config.sweep_ratio_steps)
    else:
        ratios = None
    points = sweep_efficiency_power(
        config.t_c, config.sweep_t_h, ratios, config.tau,
        omega_c=config.omega_c, mode=config.sweep_mode, engine_config=config,
    )
    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    write_sweep_csv(out / "sweep.csv", points)
    if args.svg:
        for t_h in dict.fromkeys(p.t_h for p in points):
            series = [p for p in points if p.t_h == t_h]
            tag = format(t_h, "g").replace(".", "p")
            write_dat(out / f"eta_power_th{tag}.dat", ["power", "efficiency"],
                      ([p.power for p in series], [p.efficiency for p in series]))
            write_svg_chart(out / f"eta_power_th{tag}.svg",
                            [p.power for p in series], [p.efficiency for p in series],
                            f"Efficiency vs power (t_h = {t_h:g})", "power", "efficiency")
    flagged = sum(not p.converged for p in points)
    print(f"sweep: {len(points)} points ({config.sweep_mode} mode)"
          + (f", {flagged} flagged non-converged" if flagged else ""))
    print(f"wrote {out / 'sweep.csv'}")
    return 0


def _run_verify(_args):
    results = run_all_checks()
    width = max(len(r.name) for r in results)
    failures = 0
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        if not result.passed:
            failures += 1
        print(f"{status}  {result.name:<{width}}  {result.detail}")
    print(f"{len(results) - failures}/{len(results)} checks passed")
    return 0 if failures == 0 else 1


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return _run_simulation(args, "otto")
        if args.command == "pump":
            return _run_simulation(args, "pump")
        if args.command == "sweep":
            return _run_sweep(args)
        return _run_verify(args)
    except OttoKilnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
