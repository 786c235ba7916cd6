"""Command-line experiment harness.

Subcommands:

* ``sweep``  -- run an epsilon sweep over a benchmark (or custom) circuit,
  emit a CSV, and print log-log slope fits for every column;
* ``plan``   -- print the orientation plan for a circuit (table to stdout,
  JSON-lines mirror to ``--out``);
* ``verify`` -- run the acceptance battery, one pass/fail line per criterion.

Options may also come from a ``key=value`` config file; command-line flags
override config values.  Exits 0 on success, nonzero with a one-line
diagnostic otherwise.
"""

from __future__ import annotations

import argparse
import sys

from .acceptance import CRITERIA, run_all
from .orient import plan_circuit, plan_table
from .sweep import (CANONICAL_WINDOW, SWEEP_STRATEGIES, SweepConfig, emit_csv,
                    fit_slope, load_circuit, run_sweep, series_names, usable_points)

_CONFIG_KEYS = ("circuit", "variants", "eps_min", "eps_max", "points",
                "out", "fit_window", "workers", "bv_bits")


def _parse_window(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(part) for part in text.split(":"))
    except ValueError as exc:
        raise ValueError(f"fit window must look like '1e-3:1e-2', got {text!r}") from exc
    if not 0 < lo < hi:
        raise ValueError(f"fit window must satisfy 0 < lo < hi, got {text!r}")
    return lo, hi


def _read_config(path: str) -> dict:
    values: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, _, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if key not in _CONFIG_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            values[key] = value.strip()
    return values


def _setting(args, config: dict, key: str, default, cast):
    flag_value = getattr(args, key)
    if flag_value is not None:
        return flag_value
    if key in config:
        return cast(config[key])
    return default


def _cmd_sweep(args) -> int:
    config = _read_config(args.config) if args.config else {}
    variants = _setting(args, config, "variants", ",".join(SWEEP_STRATEGIES), str)
    cfg = SweepConfig(
        circuit=_setting(args, config, "circuit", "bv", str),
        variants=tuple(v.strip() for v in variants.split(",") if v.strip()),
        eps_min=_setting(args, config, "eps_min", CANONICAL_WINDOW[0], float),
        eps_max=_setting(args, config, "eps_max", CANONICAL_WINDOW[1], float),
        points=_setting(args, config, "points", 25, int),
        bv_bits=_setting(args, config, "bv_bits", "1111", str),
        workers=_setting(args, config, "workers", 1, int),
    )
    window = _setting(args, config, "fit_window", CANONICAL_WINDOW, _parse_window)
    out = _setting(args, config, "out", None, str)
    records = run_sweep(cfg)
    if out:
        emit_csv(records, cfg, out)
        report = sys.stdout
        print(f"wrote {len(records)} records to {out}", file=report)
    else:
        emit_csv(records, cfg, sys.stdout)
        report = sys.stderr
    for series in series_names(cfg):
        try:
            slope = fit_slope(records, series, window)
            used = usable_points(records, series, window)
            print(f"fit {series}: slope={slope:.4f} over "
                  f"[{window[0]:g}, {window[1]:g}] ({used} points)", file=report)
        except ValueError as exc:
            print(f"fit {series}: skipped ({exc})", file=report)
    return 0


def _cmd_plan(args) -> int:
    circuit = load_circuit(args.circuit, bv_bits=args.bv_bits or "1111")
    plan = plan_circuit(circuit)
    sys.stdout.write(plan_table(plan))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(plan.to_jsonl())
        print(f"wrote {len(plan.assignments)} assignments to {args.out}")
    return 0


def _cmd_verify(args) -> int:
    results = run_all(args.criteria or None)
    for result in results:
        print(result.line())
    failed = sum(1 for r in results if not r.passed)
    if failed:
        print(f"error: {failed} acceptance criterion(s) failed", file=sys.stderr)
        return 1
    print(f"all {len(results)} criteria passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="errorient",
        description="Error-orientation experiments with composite-pulse CNOTs.")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run an epsilon sweep and emit CSV")
    sweep.add_argument("--circuit", help="bv | toffoli | pea | path to a circuit file")
    sweep.add_argument("--variants", help="comma-separated subset of "
                                          + ",".join(SWEEP_STRATEGIES))
    sweep.add_argument("--eps-min", dest="eps_min", type=float)
    sweep.add_argument("--eps-max", dest="eps_max", type=float)
    sweep.add_argument("--points", type=int)
    sweep.add_argument("--out", help="CSV destination (default: stdout)")
    sweep.add_argument("--fit-window", dest="fit_window", type=_parse_window,
                       help="slope-fit window as lo:hi (default 1e-3:1e-2)")
    sweep.add_argument("--workers", type=int, help="parallel grid workers")
    sweep.add_argument("--bv-bits", dest="bv_bits", help="hidden string for the bv circuit")
    sweep.add_argument("--config", help="key=value config file; flags override")
    sweep.set_defaults(func=_cmd_sweep)

    plan = sub.add_parser("plan", help="print the orientation plan for a circuit")
    plan.add_argument("--circuit", required=True,
                      help="bv | toffoli | pea | path to a circuit file")
    plan.add_argument("--bv-bits", dest="bv_bits")
    plan.add_argument("--out", help="JSON-lines destination for the plan")
    plan.set_defaults(func=_cmd_plan)

    verify = sub.add_parser("verify", help="run the acceptance criteria")
    verify.add_argument("criteria", nargs="*",
                        help="criterion names to run (default: all); one of "
                             + ", ".join(name for name, _ in CRITERIA))
    verify.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # one-line diagnostic, nonzero exit
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
