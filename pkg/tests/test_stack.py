import pytest

from thermstack.cooling import generate_pattern
from thermstack.floorplan import generate_template
from thermstack.stack import (
    DEFAULT_MATERIALS,
    DieOutline,
    Grid,
    InvalidResolutionError,
    Layer,
    Material,
    Stack,
    StackFormatError,
    emit_stack,
    grid_for,
    parse_stack,
    validate_stack,
)

SI = DEFAULT_MATERIALS["silicon"]
CU = DEFAULT_MATERIALS["copper"]


class TestMaterial:
    def test_rejects_non_positive_conductivity(self):
        with pytest.raises(ValueError):
            Material("bad", 0.0, 1e6)

    def test_rejects_non_positive_heat_capacity(self):
        with pytest.raises(ValueError):
            Material("bad", 10.0, -1.0)


class TestValidateStack:
    def test_baseline_stack_is_valid(self, baseline_stack):
        assert validate_stack(baseline_stack) == []

    def test_empty_stack_reports_missing_die(self, outline):
        report = validate_stack(Stack(outline, []))
        assert any(v.code == "no-die-layer" for v in report)

    def test_adjacent_microchannels_name_both_indices(self, outline):
        grid = grid_for(outline, 8, 8)
        pattern = generate_pattern(grid, "vertical", grid.cell_width, 2 * grid.cell_width)
        fp = generate_template(outline, "core_grid", 1, "C")
        stack = Stack(
            outline,
            [
                Layer("die", 5e-4, SI, floorplan=fp),
                Layer("microchannel", 2e-4, SI, pattern=pattern),
                Layer("microchannel", 2e-4, SI, pattern=pattern),
            ],
        )
        report = validate_stack(stack)
        adjacent = [v for v in report if v.code == "adjacent-microchannels"]
        assert len(adjacent) == 1
        assert "1" in adjacent[0].message and "2" in adjacent[0].message

    def test_sink_must_be_last(self, outline):
        fp = generate_template(outline, "core_grid", 1, "C")
        stack = Stack(
            outline,
            [Layer("sink", 2e-3, CU), Layer("die", 5e-4, SI, floorplan=fp)],
        )
        assert any(v.code == "sink-not-last" for v in validate_stack(stack))

    def test_die_without_floorplan_flagged(self, outline):
        stack = Stack(outline, [Layer("die", 5e-4, SI)])
        assert any(v.code == "die-missing-floorplan" for v in validate_stack(stack))

    def test_non_positive_thickness_flagged(self, outline):
        fp = generate_template(outline, "core_grid", 1, "C")
        stack = Stack(outline, [Layer("die", 0.0, SI, floorplan=fp)])
        assert any(v.code == "non-positive-thickness" for v in validate_stack(stack))


class TestGridFor:
    def test_8mm_at_64x64_gives_125um_cells(self):
        grid = grid_for(DieOutline(8e-3, 8e-3), 64, 64)
        assert grid.cell_width == pytest.approx(125e-6, rel=1e-12)
        assert grid.cell_height == pytest.approx(125e-6, rel=1e-12)

    def test_1m_at_2x2_gives_half_meter_cells(self):
        grid = grid_for(DieOutline(1.0, 1.0), 2, 2)
        assert grid.cell_width == 0.5
        assert grid.cell_height == 0.5

    def test_degenerate_resolution_rejected(self):
        with pytest.raises(InvalidResolutionError):
            grid_for(DieOutline(8e-3, 8e-3), 1, 64)

    def test_grid_tiles_outline_exactly(self):
        outline = DieOutline(7.3e-3, 11.1e-3)
        grid = grid_for(outline, 37, 53)
        assert abs(grid.rows * grid.cell_height - outline.height) <= 1e-9 * outline.height
        assert abs(grid.cols * grid.cell_width - outline.width) <= 1e-9 * outline.width

    def test_grid_properties(self):
        g = Grid(4, 8, 1e-3, 2e-3)
        assert g.n_cells == 32
        assert g.cell_area == 2e-6


class TestStackFormat:
    def test_round_trip_is_field_exact(self, baseline_stack):
        fps = {
            "cores.flp": baseline_stack.layers[0].floorplan,
            "mem0.flp": baseline_stack.layers[1].floorplan,
            "mem1.flp": baseline_stack.layers[2].floorplan,
        }
        text = emit_stack(baseline_stack)
        parsed = parse_stack(text, floorplans=fps)
        assert parsed == baseline_stack
        assert emit_stack(parsed) == text

    def test_double_round_trip_is_byte_exact(self, baseline_stack):
        fps = {
            "cores.flp": baseline_stack.layers[0].floorplan,
            "mem0.flp": baseline_stack.layers[1].floorplan,
            "mem1.flp": baseline_stack.layers[2].floorplan,
        }
        text = emit_stack(baseline_stack)
        assert emit_stack(parse_stack(text, floorplans=fps)) == text

    def test_unknown_material_cites_line(self):
        text = "outline\t0.008\t0.008\ndie\t0.0005\tunobtainium\tx.flp\n"
        with pytest.raises(StackFormatError, match="line 2"):
            parse_stack(text)

    def test_missing_outline_rejected(self):
        with pytest.raises(StackFormatError, match="outline"):
            parse_stack("ambient\t300.0\n")

    def test_comments_and_blank_lines_ignored(self):
        text = "# hello\n\noutline\t0.008\t0.008\n# more\nambient\t300.0\n"
        stack = parse_stack(text)
        assert stack.ambient_temperature == 300.0
        assert stack.layers == []

    def test_custom_material_registry(self):
        text = "outline\t0.01\t0.01\nspreader\t0.001\tdiamond\n"
        diamond = Material("diamond", 2000.0, 1.8e6)
        stack = parse_stack(text, materials={"diamond": diamond})
        assert stack.layers[0].material == diamond
