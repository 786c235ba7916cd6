"""Epsilon-sweep experiments: grids, records, CSV emission, and slope fits.

A sweep evaluates, per grid point, the gate infidelity of the underlying CNOT
realisation and the circuit-level infidelity of a benchmark circuit for each
requested variant strategy.  The Toffoli experiment reports a composite gate
infidelity in the circuit column instead, since it is evaluated as a gate.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .circuit import (Circuit, build_bv, build_pea, build_toffoli, circuit_infidelity,
                      circuit_unitary, ideal_toffoli, parse_circuit, with_variants)
from .gates import (TEXTBOOK_CNOT, ErrorModel, PulseVariant, cnot_variant,
                    gate_infidelity)
from .orient import pair_cancel

log = logging.getLogger(__name__)

EPS_CAP = 0.5

#: Below this infidelity double precision is exhausted for trace-based values;
#: such points are excluded from slope fits.
FIT_FLOOR = 1e-14

#: Canonical fitting window for the asymptotic scaling exponents.
CANONICAL_WINDOW = (1e-3, 1e-2)

#: Strategies available to sweeps.  Uniform variants assign one pulse sequence
#: to every CNOT; "sk1_pair" applies the conjugate-pair cancellation plan.
SWEEP_STRATEGIES = ("naive", "sk1_xi", "sk1_yi", "sk1_iy", "sk1_pair")

BUILTIN_CIRCUITS = ("bv", "toffoli", "pea")


@dataclass(frozen=True)
class SweepConfig:
    """Grid and strategy selection for one sweep run."""

    circuit: str
    variants: tuple[str, ...]
    eps_min: float
    eps_max: float
    points: int = 25
    bv_bits: str = "1111"
    workers: int = 1

    def __post_init__(self):
        if not 0 < self.eps_min < self.eps_max < EPS_CAP:
            raise ValueError(
                f"need 0 < eps_min < eps_max < {EPS_CAP}, got "
                f"[{self.eps_min}, {self.eps_max}]"
            )
        if self.points < 2:
            raise ValueError(f"need at least 2 grid points, got {self.points}")
        object.__setattr__(self, "variants", tuple(self.variants))
        if not self.variants:
            raise ValueError("at least one variant is required")
        for v in self.variants:
            if v not in SWEEP_STRATEGIES:
                raise ValueError(f"unknown variant {v!r}; choose from {SWEEP_STRATEGIES}")
        if len(set(self.variants)) != len(self.variants):
            raise ValueError("duplicate variants in config")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    def grid(self) -> np.ndarray:
        return np.geomspace(self.eps_min, self.eps_max, self.points)


@dataclass
class SweepRecord:
    """One grid point: epsilon plus per-strategy gate and circuit infidelities."""

    epsilon: float
    gate_infidelity: dict[str, float]
    circuit_infidelity: dict[str, float]

    def value(self, series: str) -> float:
        kind, _, variant = series.partition(":")
        table = {"gate_infidelity": self.gate_infidelity,
                 "circuit_infidelity": self.circuit_infidelity}.get(kind)
        if table is None or variant not in table:
            raise KeyError(f"unknown series {series!r}")
        return table[variant]


def series_names(cfg: SweepConfig) -> list[str]:
    """Column series in emission order: gate columns first, then circuit columns."""
    return ([f"gate_infidelity:{v}" for v in cfg.variants]
            + [f"circuit_infidelity:{v}" for v in cfg.variants])


def load_circuit(name: str, bv_bits: str = "1111") -> Circuit:
    """Builder lookup for the named benchmark, or parse a custom circuit file."""
    if name == "bv":
        return build_bv(bv_bits)
    if name == "toffoli":
        return build_toffoli()
    if name == "pea":
        return build_pea()
    path = Path(name)
    if not path.is_file():
        raise ValueError(f"circuit must be one of {BUILTIN_CIRCUITS} or an existing file, "
                         f"got {name!r}")
    return parse_circuit(path.read_text())


def resolve_circuit(cfg: SweepConfig) -> Circuit:
    """Load the configured circuit and check it can be scored by the sweep."""
    circuit = load_circuit(cfg.circuit, cfg.bv_bits)
    if cfg.circuit != "toffoli" and circuit.ideal_output is None:
        raise ValueError(f"invalid circuit {cfg.circuit!r}: no ideal output defined")
    return circuit


def _strategy_assignment(circuit: Circuit, strategy: str) -> dict[int, PulseVariant]:
    if strategy == "sk1_pair":
        return pair_cancel(circuit).variant_map()
    variant = PulseVariant(strategy)
    return {i: variant for i in circuit.cnot_indices}


def _underlying_gate_variant(strategy: str) -> PulseVariant:
    # The pair strategy is built from the control-X sequence and its adjoint,
    # which share one gate infidelity.
    return PulseVariant.SK1_XI if strategy == "sk1_pair" else PulseVariant(strategy)


def _evaluate_point(args) -> SweepRecord:
    circuit, is_gate_level, strategies, epsilon = args
    err = ErrorModel(epsilon)
    gate_vals: dict[str, float] = {}
    circ_vals: dict[str, float] = {}
    for strategy in strategies:
        core = cnot_variant(_underlying_gate_variant(strategy), 0, 1, err, 2)
        gate_vals[strategy] = gate_infidelity(TEXTBOOK_CNOT, core)
        assigned = with_variants(circuit, _strategy_assignment(circuit, strategy))
        if is_gate_level:
            circ_vals[strategy] = gate_infidelity(ideal_toffoli(),
                                                  circuit_unitary(assigned, err))
        else:
            circ_vals[strategy] = circuit_infidelity(assigned, err)
    return SweepRecord(epsilon=float(epsilon), gate_infidelity=gate_vals,
                       circuit_infidelity=circ_vals)


def run_sweep(cfg: SweepConfig) -> list[SweepRecord]:
    """Evaluate every grid point; deterministic given the config.

    Grid points are independent; with ``workers > 1`` they are evaluated by a
    process pool and merged in epsilon order, so the output does not depend on
    scheduling.
    """
    circuit = resolve_circuit(cfg)
    is_gate_level = cfg.circuit == "toffoli"
    tasks = [(circuit, is_gate_level, cfg.variants, eps) for eps in cfg.grid()]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(_evaluate_point, tasks))
    else:
        records = [_evaluate_point(t) for t in tasks]
    records.sort(key=lambda r: r.epsilon)
    return records


def fit_slope(records: list[SweepRecord], series: str,
              window: tuple[float, float] = CANONICAL_WINDOW) -> float:
    """Least-squares slope of log(infidelity) against log(epsilon) in the window.

    Points with infidelity at or below ``FIT_FLOOR`` are excluded (their
    values are dominated by double-precision noise); at least 3 usable points
    are required.
    """
    lo, hi = window
    eps, vals = [], []
    dropped = 0
    for rec in records:
        if not lo <= rec.epsilon <= hi:
            continue
        v = rec.value(series)
        if v <= FIT_FLOOR:
            dropped += 1
            continue
        eps.append(rec.epsilon)
        vals.append(v)
    if dropped:
        log.info("fit_slope(%s): excluded %d sub-floor point(s)", series, dropped)
    if len(vals) < 3:
        raise ValueError(f"too few usable points for {series!r}: "
                         f"{len(vals)} in window [{lo}, {hi}]")
    slope = np.polyfit(np.log(eps), np.log(vals), 1)[0]
    return float(slope)


def usable_points(records: list[SweepRecord], series: str,
                  window: tuple[float, float] = CANONICAL_WINDOW) -> int:
    lo, hi = window
    return sum(1 for rec in records
               if lo <= rec.epsilon <= hi and rec.value(series) > FIT_FLOOR)


def _column_name(series: str) -> str:
    kind, _, variant = series.partition(":")
    return f"{kind}_{variant}"


def format_csv(records: list[SweepRecord], cfg: SweepConfig) -> str:
    """CSV text: epsilon first, then gate columns, then circuit columns.

    Values carry 17 significant digits so a round-trip parse is bit-exact.
    """
    if not records:
        raise ValueError("no records to emit")
    names = series_names(cfg)
    lines = [",".join(["epsilon"] + [_column_name(s) for s in names])]
    for rec in records:
        row = [f"{rec.epsilon:.17g}"] + [f"{rec.value(s):.17g}" for s in names]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def emit_csv(records: list[SweepRecord], cfg: SweepConfig, destination) -> None:
    """Write the sweep CSV to a path or file-like destination."""
    text = format_csv(records, cfg)
    if hasattr(destination, "write"):
        destination.write(text)
        return
    Path(destination).write_text(text)
