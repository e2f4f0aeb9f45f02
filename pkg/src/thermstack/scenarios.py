"""Shipped reference scenario: a three-die stack (quad-core compute die
under two 16-bank memory dies and a passive heat sink) with a fixed
synthetic activity trace and a sweep covering stacking order, microchannel
cooling style, and a cache-capacity power knob.

All power magnitudes are illustrative defaults for a "4 cores at 2 GHz"
class design; the interesting outputs are orderings and trends, not
absolute kelvin values.
"""

from __future__ import annotations

import json
from dataclasses import replace
from importlib import resources

from .floorplan import Floorplan, emit_floorplan, generate_template
from .power import BlockPowerModel
from .stack import DieOutline

DIE_W = 8e-3
DIE_H = 8e-3
DIE_THICKNESS = 0.5e-3
SINK_THICKNESS = 2e-3
AMBIENT_K = 318.15
GRID_ROWS = 64
GRID_COLS = 64

CORE_MODEL = dict(static_power=0.8, switching_energy=1.5e-9, clock_frequency=2e9,
                  activity_factor_default=0.12)
BANK_MODEL = dict(static_power=0.05, switching_energy=2e-10, clock_frequency=1e9,
                  activity_factor_default=0.30)
HOT_CORE_SKEW = 5.87  # hottest core executes this many times the peer activity


def outline() -> DieOutline:
    return DieOutline(DIE_W, DIE_H)


def core_floorplan() -> Floorplan:
    return generate_template(outline(), "core_grid", 4, "C")


def memory_floorplan(bank_offset: int = 0) -> Floorplan:
    fp = generate_template(outline(), "bank_grid", 16, "B")
    if bank_offset == 0:
        return fp
    renamed = tuple(
        replace(b, name=f"B_{int(b.name.split('_')[1]) + bank_offset}") for b in fp.blocks
    )
    return Floorplan(fp.outline, renamed)


def stack_text() -> str:
    return (
        "# three-die stack, core die farthest from the sink\n"
        f"outline\t{DIE_W!r}\t{DIE_H!r}\n"
        f"ambient\t{AMBIENT_K!r}\n"
        f"die\t{DIE_THICKNESS!r}\tsilicon\tcores.flp\n"
        f"die\t{DIE_THICKNESS!r}\tsilicon\tmem0.flp\n"
        f"die\t{DIE_THICKNESS!r}\tsilicon\tmem1.flp\n"
        f"sink\t{SINK_THICKNESS!r}\tcopper\n"
    )


def power_models() -> list[BlockPowerModel]:
    models = [BlockPowerModel(f"C_{i}", **CORE_MODEL) for i in range(4)]
    models += [BlockPowerModel(f"B_{i}", **BANK_MODEL) for i in range(32)]
    return models


def sweep_text() -> str:
    return (
        "# case-study sweep: stacking order, cooling style, cache-capacity knob\n"
        "[stackings]\n"
        "policy named_list\n"
        "order baseline 0 1 2\n"
        "order case1a 1 0 2\n"
        "order case1b 1 2 0\n"
        "\n"
        "[cooling]\n"
        "channel_width_m 0.000125\n"
        "channel_pitch_m 0.00025\n"
        "layer_thickness_m 0.0002\n"
        "wall_material silicon\n"
        "\n"
        "[knobs]\n"
        "knob l2_capacity targets C_* values 1.0 2.0 0.5 4.0\n"
        "\n"
        "[points]\n"
        "point baseline stacking baseline cooling none\n"
        "point case1a stacking case1a cooling none\n"
        "point case1b stacking case1b cooling none\n"
        "point case2a stacking case1b cooling vertical@below_hottest_die\n"
        "point case2b stacking case1b cooling bent90@below_hottest_die\n"
        "point case2c stacking case1b cooling horizontal@below_hottest_die\n"
        "point case3a stacking case1b cooling bent90@below_hottest_die knob l2_capacity=2.0\n"
        "point case3b stacking case1b cooling bent90@below_hottest_die knob l2_capacity=0.5\n"
        "point case3c stacking case1b cooling bent90@below_hottest_die knob l2_capacity=4.0\n"
        "\n"
        "[workloads]\n"
        "use default\n"
        "\n"
        "[baseline]\n"
        "point baseline\n"
    )


def activity_text() -> str:
    """The fixed shipped synthetic trace (core 0 skewed 5.87x over peers)."""
    return resources.files("thermstack.data").joinpath("baseline/activity.act").read_text()


def baseline_document(grid_rows: int = GRID_ROWS, grid_cols: int = GRID_COLS) -> dict:
    """The complete baseline design document, sweep included."""
    return {
        "name": "baseline",
        "grid": {"rows": grid_rows, "cols": grid_cols},
        "stack": stack_text(),
        "floorplans": {
            "cores.flp": emit_floorplan(core_floorplan()),
            "mem0.flp": emit_floorplan(memory_floorplan(0)),
            "mem1.flp": emit_floorplan(memory_floorplan(16)),
        },
        "patterns": {},
        "power_models": [
            {
                "block": m.block,
                "static_power": m.static_power,
                "switching_energy": m.switching_energy,
                "clock_frequency": m.clock_frequency,
                "activity_factor_default": m.activity_factor_default,
            }
            for m in power_models()
        ],
        "activity": {"trace": activity_text()},
        "solver": {},
        "sweep": sweep_text(),
    }


def write_baseline_files(directory) -> None:
    """Materialize the scenario as standalone files for CLI use."""
    from pathlib import Path

    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    (d / "cores.flp").write_text(emit_floorplan(core_floorplan()))
    (d / "mem0.flp").write_text(emit_floorplan(memory_floorplan(0)))
    (d / "mem1.flp").write_text(emit_floorplan(memory_floorplan(16)))
    (d / "stack.txt").write_text(stack_text())
    (d / "activity.act").write_text(activity_text())
    (d / "sweep.txt").write_text(sweep_text())
    doc = baseline_document()
    (d / "powermodels.json").write_text(json.dumps(doc["power_models"], indent=1))
    (d / "design.json").write_text(json.dumps(doc, indent=1))
