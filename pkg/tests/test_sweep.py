"""Sweep configs, records, CSV emission, determinism, and slope fitting."""

import csv
import io
import math

import numpy as np
import pytest

from errorient.sweep import (CANONICAL_WINDOW, SweepConfig, SweepRecord, emit_csv,
                             fit_slope, format_csv, load_circuit, run_sweep,
                             series_names)


def small_cfg(**overrides):
    base = dict(circuit="bv", variants=("naive", "sk1_xi"),
                eps_min=1e-3, eps_max=1e-2, points=7)
    base.update(overrides)
    return SweepConfig(**base)


# ---------------------------------------------------------------------------
# config validation
# ---------------------------------------------------------------------------

def test_config_rejects_degenerate_range():
    with pytest.raises(ValueError):
        small_cfg(eps_min=1e-2, eps_max=1e-2)
    with pytest.raises(ValueError):
        small_cfg(eps_min=1e-2, eps_max=1e-3)
    with pytest.raises(ValueError):
        small_cfg(eps_max=0.5)
    with pytest.raises(ValueError):
        small_cfg(eps_min=0.0)


def test_config_rejects_bad_points_and_variants():
    with pytest.raises(ValueError):
        small_cfg(points=1)
    with pytest.raises(ValueError):
        small_cfg(variants=())
    with pytest.raises(ValueError):
        small_cfg(variants=("naive", "bogus"))
    with pytest.raises(ValueError):
        small_cfg(variants=("naive", "naive"))


def test_load_circuit_unknown_name():
    with pytest.raises(ValueError):
        load_circuit("does-not-exist")


def test_custom_circuit_file(tmp_path):
    path = tmp_path / "mini.circ"
    path.write_text("qubits 2\ninput 00\noutput 0 1 = 00\ncnot 0 1\ncnot 0 1\n")
    cfg = small_cfg(circuit=str(path), points=3)
    records = run_sweep(cfg)
    assert len(records) == 3
    # the two CNOTs pair up, so the paired strategy cancels almost everything
    cfg_pair = small_cfg(circuit=str(path), variants=("sk1_xi", "sk1_pair"), points=3)
    rec = run_sweep(cfg_pair)[-1]
    assert rec.circuit_infidelity["sk1_pair"] < rec.circuit_infidelity["sk1_xi"]


def test_custom_circuit_requires_ideal_output(tmp_path):
    path = tmp_path / "noideal.circ"
    path.write_text("qubits 2\ncnot 0 1\n")
    with pytest.raises(ValueError, match="ideal output"):
        run_sweep(small_cfg(circuit=str(path)))


# ---------------------------------------------------------------------------
# run_sweep
# ---------------------------------------------------------------------------

def test_sweep_shape_and_grid():
    cfg = SweepConfig(circuit="bv", variants=("naive", "sk1_xi", "sk1_yi"),
                      eps_min=1e-3, eps_max=1e-1, points=25)
    records = run_sweep(cfg)
    assert len(records) == 25
    eps = [r.epsilon for r in records]
    np.testing.assert_allclose(eps, np.geomspace(1e-3, 1e-1, 25))
    for rec in records:
        for series in series_names(cfg):
            assert 0.0 <= rec.value(series) <= 1.0


def test_sweep_monotone_on_fit_window():
    cfg = SweepConfig(circuit="bv", variants=("naive", "sk1_xi", "sk1_yi"),
                      eps_min=1e-3, eps_max=1e-1, points=25)
    records = run_sweep(cfg)
    lo, hi = CANONICAL_WINDOW
    in_window = [r for r in records if lo <= r.epsilon <= hi]
    for series in series_names(cfg):
        vals = [r.value(series) for r in in_window]
        assert all(b >= a for a, b in zip(vals, vals[1:])), series


def test_sweep_gate_columns_equal_across_sk1_variants():
    cfg = SweepConfig(circuit="bv", variants=("sk1_xi", "sk1_yi"),
                      eps_min=1e-3, eps_max=1e-2, points=9)
    for rec in run_sweep(cfg):
        assert abs(rec.gate_infidelity["sk1_xi"] - rec.gate_infidelity["sk1_yi"]) < 1e-12


def test_sweep_variant_ordering_at_small_eps():
    cfg = SweepConfig(circuit="bv", variants=("naive", "sk1_yi", "sk1_xi"),
                      eps_min=1e-3, eps_max=1e-2, points=5)
    first = run_sweep(cfg)[0]
    circ = first.circuit_infidelity
    assert circ["naive"] > circ["sk1_yi"] > circ["sk1_xi"]


def test_pea_pair_below_xi_everywhere():
    cfg = SweepConfig(circuit="pea", variants=("sk1_xi", "sk1_pair"),
                      eps_min=1e-3, eps_max=1e-2, points=7)
    for rec in run_sweep(cfg):
        assert rec.circuit_infidelity["sk1_pair"] < rec.circuit_infidelity["sk1_xi"]


def test_toffoli_sweep_reports_composite_gate_infidelity():
    cfg = SweepConfig(circuit="toffoli", variants=("naive",),
                      eps_min=1e-3, eps_max=1e-2, points=5)
    for rec in run_sweep(cfg):
        assert rec.circuit_infidelity["naive"] > rec.gate_infidelity["naive"]


def test_worker_pool_matches_serial():
    cfg = small_cfg(points=3)
    serial = run_sweep(cfg)
    parallel = run_sweep(small_cfg(points=3, workers=2))
    for a, b in zip(serial, parallel):
        assert a.epsilon == b.epsilon
        assert a.gate_infidelity == b.gate_infidelity
        assert a.circuit_infidelity == b.circuit_infidelity


# ---------------------------------------------------------------------------
# fit_slope
# ---------------------------------------------------------------------------

def synthetic_records(power):
    eps = np.geomspace(1e-3, 1e-2, 15)
    return [SweepRecord(epsilon=float(e),
                        gate_infidelity={"naive": float(e ** power)},
                        circuit_infidelity={"naive": float(e ** power)})
            for e in eps]


def test_fit_slope_exact_power_law():
    records = synthetic_records(4)
    slope = fit_slope(records, "gate_infidelity:naive")
    assert abs(slope - 4.0) < 1e-6


def test_fit_slope_naive_gate():
    records = run_sweep(small_cfg(points=15))
    assert abs(fit_slope(records, "gate_infidelity:naive") - 2.0) <= 0.1


def test_fit_slope_bv_xi_circuit():
    cfg = SweepConfig(circuit="bv", variants=("sk1_xi",),
                      eps_min=1e-3, eps_max=1e-2, points=25)
    records = run_sweep(cfg)
    assert abs(fit_slope(records, "circuit_infidelity:sk1_xi") - 6.0) <= 0.3


def test_fit_slope_excludes_floor_and_requires_points():
    records = synthetic_records(4)
    # push everything below the floor except two points
    for rec in records[:-2]:
        rec.gate_infidelity["naive"] = 1e-16
    with pytest.raises(ValueError, match="too few"):
        fit_slope(records, "gate_infidelity:naive")
    with pytest.raises(KeyError):
        fit_slope(synthetic_records(2), "gate_infidelity:sk1_xi")


def test_fit_slope_window_filtering():
    eps = np.geomspace(1e-4, 1e-1, 30)
    records = [SweepRecord(float(e), {"naive": float(e ** 2)}, {"naive": float(e ** 2)})
               for e in eps]
    slope = fit_slope(records, "gate_infidelity:naive", window=(1e-3, 1e-2))
    assert abs(slope - 2.0) < 1e-9


# ---------------------------------------------------------------------------
# CSV emission
# ---------------------------------------------------------------------------

def test_csv_minimal_shape():
    cfg = small_cfg(variants=("naive",), points=2)
    records = run_sweep(cfg)[:1]
    text = format_csv(records, SweepConfig(circuit="bv", variants=("naive",),
                                           eps_min=1e-3, eps_max=1e-2, points=2))
    lines = text.strip().split("\n")
    assert len(lines) == 2
    assert lines[0] == "epsilon,gate_infidelity_naive,circuit_infidelity_naive"
    assert len(lines[1].split(",")) == 3


def test_csv_column_order():
    cfg = small_cfg(variants=("sk1_xi", "naive"), points=2)
    text = format_csv(run_sweep(cfg), cfg)
    header = text.split("\n", 1)[0].split(",")
    assert header == ["epsilon", "gate_infidelity_sk1_xi", "gate_infidelity_naive",
                      "circuit_infidelity_sk1_xi", "circuit_infidelity_naive"]


def test_csv_roundtrip_bit_exact():
    cfg = small_cfg(points=5)
    records = run_sweep(cfg)
    buf = io.StringIO()
    emit_csv(records, cfg, buf)
    rows = list(csv.DictReader(io.StringIO(buf.getvalue())))
    assert len(rows) == 5
    for rec, row in zip(records, rows):
        assert float(row["epsilon"]) == rec.epsilon
        assert float(row["gate_infidelity_naive"]) == rec.gate_infidelity["naive"]
        assert float(row["circuit_infidelity_sk1_xi"]) == rec.circuit_infidelity["sk1_xi"]


def test_csv_rejects_empty():
    with pytest.raises(ValueError):
        format_csv([], small_cfg())


def test_csv_deterministic(tmp_path):
    cfg = small_cfg(points=4)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_csv(run_sweep(cfg), cfg, a)
    emit_csv(run_sweep(cfg), cfg, b)
    assert a.read_bytes() == b.read_bytes()
