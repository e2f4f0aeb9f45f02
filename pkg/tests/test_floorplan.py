import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thermstack.floorplan import (
    AreaBudget,
    AreaEntry,
    CoverageGapError,
    DuplicateBlockError,
    FloorplanError,
    OutOfOutlineError,
    OverlapError,
    check_floorplan,
    emit_floorplan,
    fill_gaps,
    generate_from_areas,
    generate_template,
    parse_floorplan,
    rasterize,
)
from thermstack.stack import DieOutline, grid_for


class TestTemplates:
    def test_four_cores_tile_as_2x2(self, outline):
        fp = generate_template(outline, "core_grid", 4, "C")
        assert fp.block_names() == ("C_0", "C_1", "C_2", "C_3")
        for b in fp.blocks:
            assert b.width == pytest.approx(4e-3)
            assert b.height == pytest.approx(4e-3)
        assert fp.block("C_0").left_x == 0.0 and fp.block("C_0").bottom_y == 0.0
        assert fp.block("C_3").left_x == pytest.approx(4e-3)
        assert fp.block("C_3").bottom_y == pytest.approx(4e-3)

    def test_sixteen_banks_tile_as_4x4(self, outline):
        fp = generate_template(outline, "bank_grid", 16)
        assert len(fp.blocks) == 16
        assert fp.block_names()[0] == "B_0"
        for b in fp.blocks:
            assert b.width == pytest.approx(2e-3)

    def test_single_block_covers_die(self, outline):
        fp = generate_template(outline, "core_grid", 1, "X")
        assert len(fp.blocks) == 1
        assert fp.blocks[0].area == pytest.approx(outline.area)

    def test_non_square_count_most_square(self, outline):
        fp = generate_template(outline, "core_grid", 6, "C")
        ys = sorted({b.bottom_y for b in fp.blocks})
        xs = sorted({b.left_x for b in fp.blocks})
        assert (len(ys), len(xs)) == (2, 3)

    def test_template_deterministic_bytes(self, outline):
        a = emit_floorplan(generate_template(outline, "core_grid", 4, "C"))
        b = emit_floorplan(generate_template(outline, "core_grid", 4, "C"))
        assert a == b

    def test_invariants_hold(self, outline):
        for n in (1, 2, 3, 4, 7, 12, 16):
            fp = generate_template(outline, "bank_grid", n)
            assert check_floorplan(fp) == []


class TestAreaDriven:
    def test_two_equal_areas_split_longer_axis(self):
        outline = DieOutline(10e-3, 5e-3)
        budget = AreaBudget((AreaEntry("A", 25e-6), AreaEntry("B", 25e-6)))
        fp = generate_from_areas(outline, budget)
        a, b = fp.block("A"), fp.block("B")
        # full-height strips split along the wider x axis
        assert a.height == pytest.approx(5e-3) and b.height == pytest.approx(5e-3)
        assert a.width + b.width == pytest.approx(10e-3)

    def test_quarter_quarter_half_coverage_exact(self, outline):
        area = outline.area
        budget = AreaBudget(
            (
                AreaEntry("A", 0.25 * area),
                AreaEntry("B", 0.25 * area),
                AreaEntry("C", 0.5 * area),
            )
        )
        fp = generate_from_areas(outline, budget)
        assert check_floorplan(fp) == []
        covered = sum(b.area for b in fp.blocks)
        assert covered == pytest.approx(area, rel=1e-12)
        for entry in budget.entries:
            assert fp.block(entry.name).area == pytest.approx(entry.area, rel=1e-6)

    def test_single_entry_full_die(self, outline):
        fp = generate_from_areas(outline, AreaBudget((AreaEntry("all", outline.area),)))
        assert len(fp.blocks) == 1
        assert fp.blocks[0].area == pytest.approx(outline.area)

    def test_empty_budget_rejected(self, outline):
        with pytest.raises(ValueError):
            generate_from_areas(outline, AreaBudget(()))

    def test_budget_normalized_to_outline(self, outline):
        # entries sum to half the die: normalization doubles every area
        budget = AreaBudget((AreaEntry("A", outline.area / 4), AreaEntry("B", outline.area / 4)))
        fp = generate_from_areas(outline, budget)
        assert fp.block("A").area == pytest.approx(outline.area / 2, rel=1e-9)

    def test_aspect_hint_steers_slicing(self):
        outline = DieOutline(10e-3, 10e-3)
        budget = AreaBudget(
            (AreaEntry("wide", 50e-6, aspect_hint=4.0), AreaEntry("rest", 50e-6))
        )
        fp = generate_from_areas(outline, budget)
        wide = fp.block("wide")
        assert wide.width / wide.height > 1.0
        assert check_floorplan(fp) == []

    @settings(max_examples=50, deadline=None)
    @given(
        st.lists(st.floats(min_value=0.05, max_value=10.0), min_size=1, max_size=9)
    )
    def test_random_budgets_keep_invariants(self, weights):
        outline = DieOutline(8e-3, 8e-3)
        total = sum(weights)
        entries = tuple(
            AreaEntry(f"u{i}", w / total * outline.area) for i, w in enumerate(weights)
        )
        fp = generate_from_areas(outline, AreaBudget(entries))
        assert check_floorplan(fp) == []


class TestFileFormat:
    def test_round_trip_identity(self, outline):
        fp = generate_template(outline, "core_grid", 4, "C")
        text = emit_floorplan(fp)
        assert parse_floorplan(text) == fp
        assert emit_floorplan(parse_floorplan(text)) == text

    def test_duplicate_name_rejected(self):
        text = "A\t0.004\t0.008\t0.0\t0.0\nA\t0.004\t0.008\t0.004\t0.0\n"
        with pytest.raises(DuplicateBlockError, match="A"):
            parse_floorplan(text)

    def test_overlap_names_both_blocks(self):
        text = "A\t0.005\t0.008\t0.0\t0.0\nB\t0.005\t0.008\t0.003\t0.0\n"
        with pytest.raises(OverlapError) as exc:
            parse_floorplan(text, outline=DieOutline(8e-3, 8e-3))
        assert set(exc.value.blocks) == {"A", "B"}

    def test_out_of_outline_rejected(self):
        text = "A\t0.009\t0.008\t0.0\t0.0\n"
        with pytest.raises(OutOfOutlineError):
            parse_floorplan(text, outline=DieOutline(8e-3, 8e-3))

    def test_coverage_gap_reports_missing_area(self, outline):
        fp = generate_template(outline, "core_grid", 4, "C")
        lines = emit_floorplan(fp).splitlines()
        # shrink one block 1%: residual appears in the error message
        parts = lines[1].split("\t")
        parts[1] = repr(float(parts[1]) * 0.99)
        lines[1] = "\t".join(parts)
        with pytest.raises(CoverageGapError, match="missing"):
            parse_floorplan("\n".join(lines), outline=outline)

    def test_malformed_line_cites_number(self):
        text = "A\t0.004\t0.008\t0.0\t0.0\nnot a block\n"
        with pytest.raises(FloorplanError, match="line 2"):
            parse_floorplan(text)

    def test_fill_gaps_completes_partial_placement(self, outline):
        fp = generate_template(outline, "core_grid", 4, "C")
        partial = fp.blocks[:3]
        filled = fill_gaps(outline, partial)
        assert check_floorplan(filled) == []
        fillers = [b for b in filled.blocks if b.is_filler()]
        assert len(fillers) == 1
        assert fillers[0].area == pytest.approx(fp.blocks[3].area)


class TestRasterize:
    def test_2x2_template_on_2x2_grid(self, outline):
        fp = generate_template(outline, "core_grid", 4, "C")
        grid = grid_for(outline, 2, 2)
        a = rasterize(fp, grid)
        assert a.name_at(0, 0) == "C_0"
        assert a.name_at(0, 1) == "C_1"
        assert a.name_at(1, 0) == "C_2"
        assert a.name_at(1, 1) == "C_3"

    def test_2x2_template_on_64x64_grid_counts(self, outline):
        fp = generate_template(outline, "core_grid", 4, "C")
        a = rasterize(fp, grid_for(outline, 64, 64))
        assert list(a.counts()) == [1024, 1024, 1024, 1024]

    def test_single_block_owns_all_cells(self, outline):
        fp = generate_template(outline, "core_grid", 1, "X")
        a = rasterize(fp, grid_for(outline, 16, 16))
        assert a.counts()[0] == 256

    def test_partition_property(self, outline):
        fp = generate_template(outline, "bank_grid", 16)
        grid = grid_for(outline, 48, 48)
        a = rasterize(fp, grid)
        assert a.counts().sum() == grid.n_cells
        assert (a.index >= 0).all()

    def test_edge_cells_tie_break_low_side(self):
        # blocks meet at x = 1.5 mm, exactly on the middle cell's center:
        # the (x - eps) rule assigns that cell to the left block
        outline = DieOutline(3e-3, 1e-3)
        text = "L\t0.0015\t0.001\t0.0\t0.0\nR\t0.0015\t0.001\t0.0015\t0.0\n"
        fp = parse_floorplan(text, outline=outline)
        a = rasterize(fp, grid_for(outline, 2, 3))
        assert [a.name_at(0, c) for c in range(3)] == ["L", "L", "R"]

    def test_assignment_equality(self, outline):
        fp = generate_template(outline, "core_grid", 4, "C")
        grid = grid_for(outline, 8, 8)
        assert rasterize(fp, grid) == rasterize(fp, grid)
