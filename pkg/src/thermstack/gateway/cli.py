"""Command-line front end.

Subcommands: run, sweep, floorplan gen, cooling gen, serve, demo. The
THERMSTACK_CONFIG environment variable points at an optional JSON file of
solver defaults ({"sink_h": ..., "grid": {"rows": ..., "cols": ...},
"workers": ...}); it is the only environment override.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .. import scenarios
from ..cooling import Coolant, emit_pattern, generate_pattern, water_coolant
from ..floorplan import AreaBudget, AreaEntry, emit_floorplan, generate_from_areas, generate_template
from ..stack import DieOutline, grid_for
from ..thermal.report import emit_heatmap, emit_summary
from .documents import DocumentError, run_simulate, run_sweep_document, validate_document

CONFIG_ENV = "THERMSTACK_CONFIG"


def load_config() -> dict:
    path = os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        print(f"warning: could not read config {path!r}: {e}", file=sys.stderr)
        return {}


def _apply_config(content: dict, config: dict) -> dict:
    solver = dict(content.get("solver", {}))
    for key in ("sink_h", "workers"):
        if key in config and key not in solver:
            solver[key] = config[key]
    content = dict(content)
    content["solver"] = solver
    if "grid" in config and "grid" not in content:
        content["grid"] = config["grid"]
    return content


def _load_document(args, config: dict) -> dict:
    if args.design:
        content = json.loads(Path(args.design).read_text())
    else:
        if not args.stack:
            raise SystemExit("either a design document or --stack is required")
        content = _document_from_files(args)
    if args.grid:
        rows, cols = (int(x) for x in args.grid.lower().split("x"))
        content["grid"] = {"rows": rows, "cols": cols}
    return _apply_config(content, config)


def _document_from_files(args) -> dict:
    """Assemble a document from loose files; refs resolve next to the stack file."""
    stack_path = Path(args.stack)
    base = stack_path.parent
    stack_text = stack_path.read_text()
    floorplans: dict[str, str] = {}
    patterns: dict[str, str] = {}
    for raw in stack_text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) == 4 and fields[0] in ("die", "microchannel"):
            ref = fields[3]
            target = floorplans if fields[0] == "die" else patterns
            if ref not in target:
                target[ref] = (base / ref).read_text()
    content: dict = {
        "name": stack_path.stem,
        "stack": stack_text,
        "floorplans": floorplans,
        "patterns": patterns,
    }
    if args.power:
        content["power_models"] = json.loads(Path(args.power).read_text())
    if args.activity:
        content["activity"] = {"trace": Path(args.activity).read_text()}
    if getattr(args, "sweep_file", None):
        content["sweep"] = Path(args.sweep_file).read_text()
    return content


def _fail_validation(violations) -> int:
    print("design validation failed:", file=sys.stderr)
    for v in violations:
        print(f"  - {v}", file=sys.stderr)
    return 2


def cmd_run(args) -> int:
    config = load_config()
    content = _load_document(args, config)
    violations = validate_document(content)
    if violations:
        return _fail_validation(violations)
    result, rt = run_simulate(content)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    (out / "summary.txt").write_text(emit_summary(result.summary))
    (out / "summary.json").write_text(json.dumps(result.summary.to_dict(), indent=1))
    for layer in rt.stack.die_indices():
        (out / f"heatmap_layer{layer}.txt").write_text(emit_heatmap(result.field, layer))
    print(f"stack max: {result.summary.stack_max_k:.6g} K")
    print(f"artifacts in {out}")
    return 0


def cmd_sweep(args) -> int:
    config = load_config()
    content = _load_document(args, config)
    violations = validate_document(content)
    if violations:
        return _fail_validation(violations)
    if not content.get("sweep"):
        print("document has no sweep definition", file=sys.stderr)
        return 2
    report, result, rt = run_sweep_document(content)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    (out / "table.txt").write_text(report.to_text())
    (out / "ranking.json").write_text(json.dumps(report.to_dict(), indent=1))
    records = [
        {
            "point": r.point,
            "workload": r.workload,
            "stack_max_k": r.stack_max_k,
            "layer_max_k": list(r.layer_max_k),
            "runtime_s": r.runtime_s,
        }
        for r in result.records
    ]
    (out / "records.json").write_text(json.dumps(records, indent=1))
    print(report.to_text())
    return 0 if not result.errors else 1


def cmd_floorplan_gen(args) -> int:
    outline = DieOutline(args.outline[0], args.outline[1])
    if args.areas:
        entries = []
        for spec in args.areas:
            name, _, rest = spec.partition("=")
            area, _, aspect = rest.partition(":")
            entries.append(AreaEntry(name, float(area), float(aspect) if aspect else None))
        fp = generate_from_areas(outline, AreaBudget(tuple(entries)))
    else:
        fp = generate_template(outline, args.template, args.count, args.prefix)
    text = emit_floorplan(fp)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)
        print(f"wrote {args.output} ({len(fp.blocks)} blocks)")
    return 0


def cmd_cooling_gen(args) -> int:
    rows, cols = (int(x) for x in args.grid.lower().split("x"))
    outline = DieOutline(args.outline[0], args.outline[1])
    grid = grid_for(outline, rows, cols)
    width = args.width_m if args.width_m else args.width_cells * grid.cell_width
    pitch = args.pitch_m if args.pitch_m else args.pitch_cells * grid.cell_width
    coolant = None
    if args.coolant:
        name, cv, t_in, flow, h = args.coolant
        coolant = Coolant(name, float(cv), float(t_in), float(flow), float(h))
    elif args.channel_depth_m:
        coolant = water_coolant(width, args.channel_depth_m)
    pattern = generate_pattern(grid, args.style, width, pitch, coolant)
    text = emit_pattern(pattern)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)
        print(f"wrote {args.output} ({pattern.fluid_cell_count()} fluid cells)")
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    serve(args.bind, args.state_dir, max_workers=args.workers)
    return 0


def cmd_demo(args) -> int:
    scenarios.write_baseline_files(args.output)
    print(f"baseline scenario written to {args.output}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="thermstack", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def add_design_args(sp):
        sp.add_argument("design", nargs="?", help="design document (JSON)")
        sp.add_argument("--stack", help="stack description file (alternative to a document)")
        sp.add_argument("--power", help="power models JSON (with --stack)")
        sp.add_argument("--activity", help="activity trace file (with --stack)")
        sp.add_argument("--grid", help="override grid resolution, e.g. 64x64")
        sp.add_argument("-o", "--output", required=True, help="output directory")

    run_p = sub.add_parser("run", help="steady simulation: heatmaps + summary")
    add_design_args(run_p)
    run_p.set_defaults(func=cmd_run)

    sweep_p = sub.add_parser("sweep", help="design-space sweep: table + ranking")
    add_design_args(sweep_p)
    sweep_p.add_argument("--sweep-file", help="sweep definition file (with --stack)")
    sweep_p.set_defaults(func=cmd_sweep)

    fp_p = sub.add_parser("floorplan", help="floorplan tools")
    fp_sub = fp_p.add_subparsers(dest="floorplan_command", required=True)
    gen = fp_sub.add_parser("gen", help="generate a floorplan file")
    gen.add_argument("--outline", nargs=2, type=float, required=True, metavar=("W_M", "H_M"))
    gen.add_argument("--template", default="core_grid", choices=["core_grid", "bank_grid"])
    gen.add_argument("--count", type=int, default=4)
    gen.add_argument("--prefix", default=None)
    gen.add_argument("--areas", nargs="*", help="area-driven mode: name=area_m2[:aspect]")
    gen.add_argument("-o", "--output", required=True)
    gen.set_defaults(func=cmd_floorplan_gen)

    cool_p = sub.add_parser("cooling", help="cooling pattern tools")
    cool_sub = cool_p.add_subparsers(dest="cooling_command", required=True)
    cgen = cool_sub.add_parser("gen", help="generate a cooling pattern file")
    cgen.add_argument("--grid", required=True, help="rows x cols, e.g. 64x64")
    cgen.add_argument("--outline", nargs=2, type=float, required=True, metavar=("W_M", "H_M"))
    cgen.add_argument("--style", required=True, choices=["vertical", "horizontal", "bent90"])
    cgen.add_argument("--width-cells", type=int, default=1)
    cgen.add_argument("--pitch-cells", type=int, default=2)
    cgen.add_argument("--width-m", type=float, default=None)
    cgen.add_argument("--pitch-m", type=float, default=None)
    cgen.add_argument("--channel-depth-m", type=float, default=None,
                      help="derive the water convection coefficient for this channel depth")
    cgen.add_argument("--coolant", nargs=5, metavar=("NAME", "CV", "T_IN", "FLOW", "H"))
    cgen.add_argument("-o", "--output", required=True)
    cgen.set_defaults(func=cmd_cooling_gen)

    serve_p = sub.add_parser("serve", help="run the HTTP gateway service")
    serve_p.add_argument("--bind", default="127.0.0.1:8080")
    serve_p.add_argument("--state-dir", required=True)
    serve_p.add_argument("--workers", type=int, default=None)
    serve_p.set_defaults(func=cmd_serve)

    demo_p = sub.add_parser("demo", help="write the shipped baseline scenario files")
    demo_p.add_argument("-o", "--output", required=True)
    demo_p.set_defaults(func=cmd_demo)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DocumentError as e:
        return _fail_validation(e.violations)
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
