"""Command-line interface.

Exit codes: 0 success, 1 configuration error, 2 planner infeasibility.
"""

from __future__ import annotations

import argparse
import contextlib
import sys

import numpy as np

from . import bench
from .assembler import PlanInfeasible, plan_for_amax
from .config import ConfigError, RunConfig, load_config, preset_config
from .optimizer import PlanningError, best_accel_case2, plan
from .presets import PRESETS
from .segment import SegmentMethod, precompute_family

EXIT_OK, EXIT_CONFIG, EXIT_INFEASIBLE = 0, 1, 2


def _positive(s: str) -> float:
    v = float(s)
    if not v > 0 or not np.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be a positive number, got {s!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="jerkplan", description=__doc__.splitlines()[0])
    src = ap.add_mutually_exclusive_group()
    src.add_argument("--config", help="configuration file ([plant] [limits] [optimizer] [bench])")
    src.add_argument("--preset", choices=sorted(PRESETS), default=None,
                     help="built-in parameter set (default: expap)")
    ap.add_argument("--method", choices=[m.value for m in SegmentMethod],
                    help="segment construction (overrides the config)")
    ap.add_argument("--workers", type=int, default=None, help="threads for sweeps")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write CSV here instead of stdout")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def add(name, help):
        return sub.add_parser(name, help=help, parents=[common])

    p = add("plan", "plan one move and write the controller-cycle samples")
    p.add_argument("--zf", type=float, required=True, help="distance (m)")

    s = add("sweep", "all planners over a distance grid")
    s.add_argument("--zmin", type=_positive, required=True)
    s.add_argument("--zmax", type=_positive, required=True)
    s.add_argument("--n", type=int, required=True)

    se = add("sensitivity", "residual amplitude on mistuned plants")
    se.add_argument("--zf", type=_positive, required=True)
    se.add_argument("--fmin", type=_positive, required=True, help="Hz")
    se.add_argument("--fmax", type=_positive, required=True, help="Hz")
    se.add_argument("--n", type=int, required=True)

    c = add("compare", "one-row table of all planners")
    c.add_argument("--zf", type=_positive, required=True)

    a = add("abest", "Case-2 optimal acceleration and t_ft over a_max")
    a.add_argument("--zf", type=_positive, default=None,
                   help="distance for the t_ft(a_max) curve (default: 0.3)")
    return ap


def _resolve(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else preset_config(args.preset or "expap")
    if args.method:
        cfg = RunConfig(cfg.plant, cfg.limits, cfg.optimizer, SegmentMethod(args.method),
                        cfg.controller_cycle)
    return cfg


@contextlib.contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _grid(lo, hi, n):
    if n < 1:
        raise ConfigError(f"--n must be >= 1, got {n}")
    if hi < lo:
        raise ConfigError("upper bound below lower bound")
    return [lo] if n == 1 else list(np.linspace(lo, hi, n))


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _resolve(args)
        modal = cfg.modal
        if args.cmd == "plan":
            p = plan(args.zf, cfg.limits, modal, cfg.optimizer)
            samples = bench.resample_to_cycle(p, cfg.controller_cycle)
            with _output(args.out) as fh:
                bench.write_trajectory(fh, samples, cfg)
            print(f"{p.case_tag.value} t_ft={p.t_ft:.9g} s a_max={p.a_max_used:.9g} m/s^2 "
                  f"alg3={'yes' if p.used_alg3 else 'no'} {p.limit_report.describe()}",
                  file=sys.stderr)
        elif args.cmd == "sweep":
            rows = bench.sweep_distances(cfg, _grid(args.zmin, args.zmax, args.n), args.workers)
            with _output(args.out) as fh:
                bench.write_rows(fh, rows, cfg, "sweep")
            if any(r.error for r in rows):
                return EXIT_INFEASIBLE
        elif args.cmd == "sensitivity":
            rows = bench.sweep_sensitivity(cfg, args.zf, _grid(args.fmin, args.fmax, args.n))
            with _output(args.out) as fh:
                bench.write_rows(fh, rows, cfg, "sensitivity")
            if any(r.error for r in rows):
                return EXIT_INFEASIBLE
        elif args.cmd == "compare":
            rows = bench.sweep_distances(cfg, [args.zf])
            with _output(args.out) as fh:
                bench.write_rows(fh, rows, cfg, "compare")
            if rows[0].error:
                return EXIT_INFEASIBLE
        elif args.cmd == "abest":
            a_best = best_accel_case2(cfg.limits, modal, cfg.optimizer)
            z = args.zf if args.zf is not None else 0.3
            n = cfg.optimizer.a_scan_points
            with _output(args.out) as fh:
                for ln in bench.header_lines(cfg, "abest"):
                    fh.write(ln + "\n")
                fh.write(f"# a_best: {a_best:.17g}\n# z_f: {z:.17g}\n")
                fh.write("a_max,t_ft,case_tag,clean\n")
                for k in range(1, n + 1):
                    a = cfg.limits.a_lim * k / n
                    fam = precompute_family(a, cfg.limits, modal, cfg.segment_method)
                    try:
                        p = plan_for_amax(z, fam, cfg.limits)
                        rec = (format(a, ".17g"), format(p.t_ft, ".17g"), p.case_tag.value,
                               "1" if p.limit_report.clean else "0")
                    except PlanInfeasible:
                        rec = (format(a, ".17g"), "nan", "", "0")
                    fh.write(",".join(rec) + "\n")
            print(f"a_best={a_best:.17g}", file=sys.stderr)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PlanningError, PlanInfeasible) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


def main() -> None:
    sys.exit(run())
