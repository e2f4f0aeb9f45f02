"""Acceptance suite: one test per release criterion, each printing a
pass/fail line (run with `pytest tests/test_acceptance.py -v -s`).

Solver correctness is checked against independent analytic oracles; the
case-study criteria check orderings and trends on the shipped synthetic
scenario, not absolute kelvin values.
"""

import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

from thermstack.cooling import emit_pattern, generate_pattern, parse_pattern
from thermstack.floorplan import (
    AreaBudget,
    AreaEntry,
    emit_floorplan,
    generate_from_areas,
    generate_template,
    parse_floorplan,
    rasterize,
)
from thermstack.gateway.documents import build_runtime, run_sweep_document
from thermstack.gateway.service import create_app
from thermstack.dse import run_pipeline
from thermstack.power import PowerTrace
from thermstack.scenarios import baseline_document
from thermstack.stack import DEFAULT_MATERIALS, DieOutline, Layer, Stack, grid_for
from thermstack.sweepdef import build_points, parse_sweep_definition
from thermstack.thermal import (
    assemble,
    channel_energy_balance,
    energy_report,
    solve_steady,
    solve_transient,
)

SI = DEFAULT_MATERIALS["silicon"]
CU = DEFAULT_MATERIALS["copper"]


def report(criterion: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    line = f"[{status}] {criterion}"
    if detail:
        line += f" ({detail})"
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def scenario():
    """All nine case-study points of the shipped scenario, solved at 64x64."""
    doc = baseline_document()
    rt = build_runtime(doc)
    defn = parse_sweep_definition(doc["sweep"])
    points = build_points(defn, rt.stack, rt.config)
    runs = {}
    for point in points:
        runs[point.name] = run_pipeline(point, rt.activity, rt.config)
    return {"doc": doc, "rt": rt, "points": {p.name: p for p in points}, "runs": runs}


@pytest.fixture(scope="module")
def sweep_timing():
    doc = baseline_document()
    start = time.perf_counter()
    report_, result, rt = run_sweep_document(doc)
    elapsed = time.perf_counter() - start
    return {"report": report_, "result": result, "elapsed": elapsed}


def test_criterion_01_analytic_1d_conduction():
    outline = DieOutline(8e-3, 8e-3)
    grid = grid_for(outline, 32, 32)
    t = 5e-4
    layers = [
        Layer("die", t, SI, floorplan=generate_template(outline, "core_grid", 1, f"L{i}"))
        for i in range(4)
    ]
    layers.append(Layer("sink", t, SI))
    stack = Stack(outline, layers, ambient_temperature=300.0)
    rasters = {i: rasterize(stack.layers[i].floorplan, grid) for i in stack.die_indices()}
    start = time.perf_counter()
    net = assemble(stack, grid, rasters, sink_h=1e4)
    q = 10.0
    field = solve_steady(net, {"L0_0": q})
    elapsed = time.perf_counter() - start
    means = [float(field.temperatures[i].mean()) for i in range(len(layers))]
    expected = q * t / (SI.thermal_conductivity * outline.area)
    worst = max(
        abs((lo - hi) - expected) / expected for lo, hi in zip(means, means[1:])
    )
    report(
        "1: analytic 1D conduction within 1% at 32x32, < 5 s",
        worst <= 0.01 and elapsed < 5.0,
        f"worst rel err {worst:.2e}, {elapsed:.2f} s",
    )


def test_criterion_02_energy_conservation_all_scenarios(scenario):
    worst = 0.0
    for name, run in scenario["runs"].items():
        rep = energy_report(run.network, run.field, run.block_powers)
        worst = max(worst, abs(rep["relative_imbalance"]))
    report(
        "2: energy conservation <= 1e-3 on every shipped scenario",
        worst <= 1e-3,
        f"worst |imbalance| {worst:.2e} over {len(scenario['runs'])} points",
    )


def _lumped_rc():
    outline = DieOutline(8e-3, 8e-3)
    grid = grid_for(outline, 2, 2)
    t = 1e-4
    stack = Stack(
        outline,
        [
            Layer("die", t, SI, floorplan=generate_template(outline, "core_grid", 1, "X")),
            Layer("sink", t, SI),
        ],
        ambient_temperature=300.0,
    )
    g_total = 0.5
    rasters = {0: rasterize(stack.layers[0].floorplan, grid)}
    net = assemble(stack, grid, rasters, sink_h=g_total / outline.area)
    c_total = 2 * SI.volumetric_heat_capacity * outline.area * t
    return net, c_total, g_total


def test_criterion_03_rc_step_response():
    net, c, g = _lumped_rc()
    tau = c / g
    p = 10.0
    trace = PowerTrace(10 * tau, {"X_0": (p,)})
    fields = solve_transient(net, trace, duration=tau, dt=tau / 10)
    fraction = (float(fields[-1].temperatures.max()) - 300.0) / (p / g)
    err = abs(fraction - (1 - math.exp(-1)))
    report(
        "3: RC step response within 2% of analytic at t = C/G, dt = C/(10 G)",
        err <= 0.02,
        f"fraction {fraction:.4f} vs {1 - math.exp(-1):.4f}, err {err:.4f}",
    )


def test_criterion_04_transient_reaches_steady():
    net, c, g = _lumped_rc()
    tau = c / g
    trace = PowerTrace(1e9, {"X_0": (10.0,)})
    fields = solve_transient(net, trace, duration=20 * tau, dt=tau / 10)
    steady = solve_steady(net, {"X_0": 10.0})
    diff = float(np.abs(fields[-1].temperatures - steady.temperatures).max())
    report(
        "4: transient matches steady within 0.1 K after 20 time constants",
        diff <= 0.1,
        f"max diff {diff:.2e} K",
    )


def test_criterion_05_monotonicity_and_symmetry_exhaustive():
    start = time.perf_counter()
    outline = DieOutline(8e-3, 8e-3)
    grid = grid_for(outline, 4, 4)
    cores = generate_template(outline, "core_grid", 4, "C")
    banks = generate_template(outline, "bank_grid", 4, "B")
    stack = Stack(
        outline,
        [
            Layer("die", 5e-4, SI, floorplan=cores),
            Layer("die", 5e-4, SI, floorplan=banks),
            Layer("sink", 2e-3, CU),
        ],
    )
    rasters = {i: rasterize(stack.layers[i].floorplan, grid) for i in stack.die_indices()}
    net = assemble(stack, grid, rasters)
    base_powers = {f"C_{i}": 1.0 for i in range(4)} | {f"B_{i}": 0.5 for i in range(4)}
    base = solve_steady(net, base_powers).temperatures
    monotone = True
    for block in base_powers:
        bumped = dict(base_powers)
        bumped[block] += 0.5
        hot = solve_steady(net, bumped).temperatures
        monotone = monotone and bool((hot - base).min() >= -1e-9)

    # mirror-symmetric powers give a mirror-symmetric field
    sym_powers = {f"C_{i}": 1.0 for i in range(4)} | {f"B_{i}": 0.5 for i in range(4)}
    field = solve_steady(net, sym_powers).temperatures
    symmetric = float(np.abs(field - field[:, :, ::-1]).max()) <= 1e-6
    symmetric = symmetric and float(np.abs(field - field[:, ::-1, :]).max()) <= 1e-6
    elapsed = time.perf_counter() - start
    report(
        "5: monotonicity + symmetry exhaustive on 4x4x3, < 60 s",
        monotone and symmetric and elapsed < 60.0,
        f"{elapsed:.2f} s",
    )


def _maxima(scenario):
    return {name: run.summary.stack_max_k for name, run in scenario["runs"].items()}


def test_criterion_06_case1_stacking_order(scenario):
    m = _maxima(scenario)
    ok = m["case1b"] < m["case1a"] < m["baseline"]
    report(
        "6: case I ordering T(case1b) < T(case1a) < T(baseline)",
        ok,
        f"{m['case1b']:.3f} < {m['case1a']:.3f} < {m['baseline']:.3f} K",
    )


def test_criterion_07_case2_cooling_styles(scenario):
    m = _maxima(scenario)
    ok = m["case2b"] < m["case2a"] < m["case1b"]
    report(
        "7: case II ordering T(case2b) < T(case2a) < T(case1b)",
        ok,
        f"{m['case2b']:.3f} < {m['case2a']:.3f} < {m['case1b']:.3f} K",
    )


def test_criterion_08_case3_capacity_knob(scenario):
    m = _maxima(scenario)
    ok = m["case3a"] > m["case2b"] and m["case3b"] < m["case2b"]
    report(
        "8: case III capacity knob direction (2x raises, 0.5x lowers)",
        ok,
        f"case3a {m['case3a']:.3f} > case2b {m['case2b']:.3f} > case3b {m['case3b']:.3f} K",
    )


def test_criterion_09_hotspot_localization_and_coupling(scenario):
    run = scenario["runs"]["baseline"]
    hottest = run.summary.hottest_block()
    temps = run.field.temperatures
    core_layer, adjacent, far = 0, 1, 2
    r_adj = np.corrcoef(temps[core_layer].ravel(), temps[adjacent].ravel())[0, 1]
    r_far = np.corrcoef(temps[core_layer].ravel(), temps[far].ravel())[0, 1]
    ok = hottest.name == "C_0" and r_adj > r_far
    report(
        "9: hottest block is the skewed core; adjacent-layer coupling dominates",
        ok,
        f"hottest {hottest.name}, corr adj {r_adj:.4f} > far {r_far:.4f}",
    )


def test_criterion_10_channel_energy_balance(scenario):
    worst = 0.0
    for name in ("case2a", "case2b"):
        run = scenario["runs"][name]
        layer = scenario["points"][name].stack.microchannel_indices()[0]
        for q_abs, q_flow in channel_energy_balance(run.network, run.field, layer):
            if abs(q_abs) > 1e-12:
                worst = max(worst, abs(q_flow - q_abs) / abs(q_abs))
    report(
        "10: per-channel coolant energy balance within 1e-3 on case2a/case2b",
        worst <= 1e-3,
        f"worst rel mismatch {worst:.2e}",
    )


def test_criterion_11_fifty_file_round_trip():
    outline = DieOutline(8e-3, 8e-3)
    corpus: list[tuple[str, str]] = []
    for n in (1, 2, 3, 4, 6, 8, 9, 12, 16, 20, 24, 25, 30, 32, 36, 40, 45, 48, 56, 64):
        corpus.append(("flp", emit_floorplan(generate_template(outline, "bank_grid", n))))
    rng = np.random.default_rng(7)
    for i in range(10):
        k = int(rng.integers(2, 9))
        weights = rng.uniform(0.2, 3.0, k)
        entries = tuple(
            AreaEntry(f"u{j}", float(w / weights.sum() * outline.area))
            for j, w in enumerate(weights)
        )
        corpus.append(("flp", emit_floorplan(generate_from_areas(outline, AreaBudget(entries)))))
    for rows in (8, 16, 32, 64):
        grid = grid_for(outline, rows, rows)
        for style in ("vertical", "horizontal", "bent90"):
            for pitch_cells in (2, 4):
                if rows % (2 * pitch_cells):
                    continue
                p = generate_pattern(
                    grid, style, grid.cell_width, pitch_cells * grid.cell_width
                )
                corpus.append(("pat", emit_pattern(p)))
    assert len(corpus) >= 50
    failures = 0
    for kind, text in corpus:
        if kind == "flp":
            again = emit_floorplan(parse_floorplan(text))
        else:
            again = emit_pattern(parse_pattern(text))
        if again != text:
            failures += 1
    report(
        "11: parse/emit round-trip byte-exact over the corpus",
        failures == 0,
        f"{len(corpus)} files, {failures} failures",
    )


def test_criterion_12_cli_api_equivalence(tmp_path):
    doc = baseline_document()
    doc_path = tmp_path / "design.json"
    doc_path.write_text(json.dumps(doc))
    out = tmp_path / "cli_out"
    proc = subprocess.run(
        [sys.executable, "-m", "thermstack.gateway.cli", "run", str(doc_path), "-o", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr

    app = create_app(tmp_path / "state", max_workers=1)
    with TestClient(app) as client:
        design_id = client.post("/designs", json={"content": doc}).json()["id"]
        job_id = client.post(f"/designs/{design_id}/jobs", json={"kind": "simulate"}).json()["job_id"]
        deadline = time.time() + 300
        while time.time() < deadline:
            state = client.get(f"/jobs/{job_id}").json()
            if state["state"] in ("done", "failed"):
                break
            time.sleep(0.2)
        assert state["state"] == "done", state
        mismatches = []
        for layer in (0, 1, 2):
            api_text = client.get(
                f"/jobs/{job_id}/heatmap", params={"layer": layer, "format": "text"}
            ).text
            cli_text = (out / f"heatmap_layer{layer}.txt").read_text()
            if api_text != cli_text:
                mismatches.append(layer)
    report(
        "12: CLI and API heatmaps bit-exact on the baseline document",
        not mismatches,
        f"layers checked: 3, mismatches: {mismatches}",
    )


def test_criterion_13_full_sweep_under_ten_minutes(sweep_timing):
    result = sweep_timing["result"]
    elapsed = sweep_timing["elapsed"]
    points = {r.point for r in result.records}
    ok = len(points) == 9 and not result.errors and elapsed < 600.0
    report(
        "13: 9-point case I-III sweep at 64x64 completes under 10 minutes",
        ok,
        f"{len(points)} points in {elapsed:.1f} s",
    )
