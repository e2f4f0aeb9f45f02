import pytest

from thermstack.dse import (
    CoolingVariant,
    DesignPoint,
    KnobSpec,
    SweepConfig,
    apply_knobs,
    build_point,
    compare_report,
    enumerate_cooling,
    enumerate_stackings,
    hottest_die_index,
    run_pipeline,
    run_sweep,
)
from thermstack.power import BlockPowerModel, synthetic_activity
from thermstack.stack import DEFAULT_MATERIALS, Layer, Stack
from thermstack.floorplan import generate_template
from thermstack.sweepdef import (
    build_points,
    emit_sweep_definition,
    parse_sweep_definition,
)

SI = DEFAULT_MATERIALS["silicon"]


def small_models():
    cores = [BlockPowerModel(f"C_{i}", 0.8, 1.5e-9, 2e9, 0.12) for i in range(4)]
    banks = [BlockPowerModel(f"B_{i}", 0.05, 2e-10, 1e9, 0.30) for i in range(16)]
    return tuple(cores + banks)


def small_config(rows=16, cols=16, **kw):
    # channel geometry sized for the 500 um cells of a 16x16 grid on 8 mm
    from thermstack.dse import CoolingGeometry

    kw.setdefault("cooling", CoolingGeometry(channel_width=5e-4, channel_pitch=1e-3))
    return SweepConfig(rows=rows, cols=cols, power_models=small_models(), **kw)


def small_workload():
    blocks = [m.block for m in small_models()]
    return {"wl": synthetic_activity(blocks, "one_hot", 4, 1e-3, base=0.12, skew=5.87)}


class TestEnumerateStackings:
    def test_identical_memory_dies_collapse_to_three_orders(self, baseline_stack):
        variants = enumerate_stackings(baseline_stack, "all_die_permutations")
        assert len(variants) == 3  # 3!/2! distinct multiset permutations

    def test_named_list_exact(self, baseline_stack):
        named = {"baseline": (0, 1, 2), "case1a": (1, 0, 2), "case1b": (1, 2, 0)}
        variants = enumerate_stackings(baseline_stack, "named_list", named)
        assert [v.name for v in variants] == ["baseline", "case1a", "case1b"]
        case1b = variants[2]
        # core die (originally index 0) moved to the sink-adjacent die slot
        assert case1b.stack.layers[2].floorplan.block_names()[0] == "C_0"
        assert case1b.stack.layers[0].floorplan.block_names()[0] == "B_0"

    def test_non_die_layers_keep_positions(self, baseline_stack):
        for v in enumerate_stackings(baseline_stack, "all_die_permutations"):
            assert v.stack.layers[-1].kind == "sink"

    def test_single_die_one_variant(self, outline):
        fp = generate_template(outline, "core_grid", 1, "X")
        stack = Stack(outline, [Layer("die", 5e-4, SI, floorplan=fp)])
        assert len(enumerate_stackings(stack, "all_die_permutations")) == 1

    def test_bad_named_order_rejected(self, baseline_stack):
        with pytest.raises(ValueError, match="permutation"):
            enumerate_stackings(baseline_stack, "named_list", {"x": (0, 0, 1)})


class TestEnumerateCooling:
    def test_two_styles_one_position(self, baseline_stack):
        variant = enumerate_stackings(baseline_stack, "all_die_permutations")[0]
        out = enumerate_cooling(variant, ["vertical", "bent90"], ["below_hottest_die"])
        assert [c.style for c in out] == ["vertical", "bent90"]

    def test_none_style_alone(self, baseline_stack):
        variant = enumerate_stackings(baseline_stack, "all_die_permutations")[0]
        out = enumerate_cooling(variant, ["none"])
        assert len(out) == 1 and out[0].style is None

    def test_index_beyond_layers_rejected(self, baseline_stack):
        variant = enumerate_stackings(baseline_stack, "all_die_permutations")[0]
        with pytest.raises(ValueError, match="beyond"):
            enumerate_cooling(variant, ["vertical"], [99])

    def test_hottest_die_is_core_die(self, baseline_stack):
        assert hottest_die_index(baseline_stack, small_models()) == 0

    def test_build_point_inserts_below_hottest(self, baseline_stack):
        named = {"case1b": (1, 2, 0)}
        variant = enumerate_stackings(baseline_stack, "named_list", named)[0]
        cooling = CoolingVariant("bent90@below_hottest_die", "bent90", "below_hottest_die")
        point = build_point("case2b", variant, cooling, small_config())
        kinds = [l.kind for l in point.stack.layers]
        assert kinds == ["die", "die", "microchannel", "die", "sink"]


class TestKnobs:
    def test_apply_scales_matching_blocks(self):
        knob = KnobSpec("l2_capacity", ("C_*",), (1.0, 2.0))
        scaled = apply_knobs(small_models(), [knob], {"l2_capacity": 2.0})
        by = {m.block: m for m in scaled}
        assert by["C_0"].static_power == pytest.approx(1.6)
        assert by["B_0"].static_power == pytest.approx(0.05)

    def test_unknown_knob_rejected(self):
        with pytest.raises(KeyError):
            apply_knobs(small_models(), [], {"nope": 1.0})


class TestRunSweep:
    def test_singleton_matches_direct_pipeline(self, baseline_stack):
        config = small_config()
        point = DesignPoint("solo", baseline_stack)
        wl = small_workload()
        result = run_sweep([point], wl, config)
        assert result.errors == []
        direct = run_pipeline(point, wl["wl"], config)
        assert result.records[0].stack_max_k == direct.summary.stack_max_k

    def test_failure_isolated(self, baseline_stack):
        config = small_config()
        bad_stack = baseline_stack.copy()
        bad_stack.layers[0].floorplan = None  # invalid die layer
        points = [DesignPoint("good", baseline_stack), DesignPoint("bad", bad_stack)]
        result = run_sweep(points, small_workload(), config)
        assert [e.point for e in result.errors] == ["bad"]
        assert [r.point for r in result.records] == ["good"]
        assert result.ranking == ["good"]

    def test_empty_inputs_rejected(self, baseline_stack):
        config = small_config()
        with pytest.raises(ValueError):
            run_sweep([], small_workload(), config)
        with pytest.raises(ValueError):
            run_sweep([DesignPoint("p", baseline_stack)], {}, config)

    def test_ranking_deterministic_across_worker_counts(self, baseline_stack):
        named = {"baseline": (0, 1, 2), "case1b": (1, 2, 0)}
        variants = enumerate_stackings(baseline_stack, "named_list", named)
        nocool = CoolingVariant("none", None, None)
        rankings = []
        for workers in (1, 4):
            config = small_config(workers=workers)
            points = [build_point(v.name, v, nocool, config) for v in variants]
            result = run_sweep(points, small_workload(), config)
            rankings.append((result.ranking, [r.stack_max_k for r in result.records]))
        assert rankings[0] == rankings[1]

    def test_ranking_invariant_under_ambient_shift(self, baseline_stack):
        named = {"baseline": (0, 1, 2), "case1a": (1, 0, 2), "case1b": (1, 2, 0)}
        config = small_config()
        nocool = CoolingVariant("none", None, None)
        variants = enumerate_stackings(baseline_stack, "named_list", named)
        points = [build_point(v.name, v, nocool, config) for v in variants]
        r1 = run_sweep(points, small_workload(), config)

        shifted = baseline_stack.copy()
        shifted.ambient_temperature += 7.0
        variants2 = enumerate_stackings(shifted, "named_list", named)
        points2 = [build_point(v.name, v, nocool, config) for v in variants2]
        r2 = run_sweep(points2, small_workload(), config)
        assert r1.ranking == r2.ranking

    def test_declaration_order_breaks_ties(self, baseline_stack):
        config = small_config()
        # identical stacks under different names: a forced tie
        points = [DesignPoint("zeta", baseline_stack), DesignPoint("alpha", baseline_stack)]
        result = run_sweep(points, small_workload(), config)
        assert result.ranking == ["zeta", "alpha"]


class TestCompareReport:
    def _result(self, baseline_stack):
        named = {"baseline": (0, 1, 2), "case1b": (1, 2, 0)}
        config = small_config()
        nocool = CoolingVariant("none", None, None)
        variants = enumerate_stackings(baseline_stack, "named_list", named)
        points = [build_point(v.name, v, nocool, config) for v in variants]
        return run_sweep(points, small_workload(), config)

    def test_baseline_self_delta_zero(self, baseline_stack):
        report = compare_report(self._result(baseline_stack), "baseline")
        self_rows = [r for r in report.rows if r.point == "baseline"]
        assert all(r.delta_k == 0.0 for r in self_rows)

    def test_missing_baseline_rejected(self, baseline_stack):
        with pytest.raises(KeyError):
            compare_report(self._result(baseline_stack), "nope")

    def test_text_and_dict_agree(self, baseline_stack):
        report = compare_report(self._result(baseline_stack), "baseline")
        data = report.to_dict()
        lines = [l for l in report.to_text().splitlines() if l and not l.startswith(("#", "point"))]
        assert len(lines) == len(data["rows"])
        for line, row in zip(lines, data["rows"]):
            point, workload, max_k, delta_k = line.split("\t")
            assert point == row["point"]
            assert float(max_k) == row["max_k"]
            assert float(delta_k) == row["delta_k"]


class TestSweepDefinition:
    SAMPLE = (
        "[stackings]\n"
        "policy named_list\n"
        "order baseline 0 1 2\n"
        "order flipped 1 2 0\n"
        "[cooling]\n"
        "channel_width_m 0.0005\n"
        "channel_pitch_m 0.001\n"
        "[knobs]\n"
        "knob cap targets C_* values 1.0 2.0\n"
        "[points]\n"
        "point base stacking baseline cooling none\n"
        "point cooled stacking flipped cooling vertical@below_hottest_die knob cap=2.0\n"
        "[workloads]\n"
        "use default\n"
        "[baseline]\n"
        "point base\n"
    )

    def test_parse_fields(self):
        defn = parse_sweep_definition(self.SAMPLE)
        assert defn.orders["flipped"] == (1, 2, 0)
        assert defn.knobs[0].values == (1.0, 2.0)
        assert defn.points[1].knobs == {"cap": 2.0}
        assert defn.baseline_point == "base"
        assert defn.use_default_workload

    def test_emit_parse_round_trip(self):
        defn = parse_sweep_definition(self.SAMPLE)
        again = parse_sweep_definition(emit_sweep_definition(defn))
        assert again == defn

    def test_build_points_from_definition(self, baseline_stack):
        defn = parse_sweep_definition(self.SAMPLE)
        config = small_config()
        points = build_points(defn, baseline_stack, config)
        assert [p.name for p in points] == ["base", "cooled"]
        assert points[1].knob_settings == {"cap": 2.0}
        assert any(l.kind == "microchannel" for l in points[1].stack.layers)

    def test_cross_product_mode(self, baseline_stack):
        text = (
            "[stackings]\npolicy named_list\norder a 0 1 2\norder b 1 2 0\n"
            "[cooling]\noption none\noption vertical below_hottest_die\n"
        )
        defn = parse_sweep_definition(text)
        points = build_points(defn, baseline_stack, small_config())
        assert len(points) == 4

    def test_unknown_section_cites_line(self):
        with pytest.raises(Exception, match="line 1"):
            parse_sweep_definition("[wat]\n")
