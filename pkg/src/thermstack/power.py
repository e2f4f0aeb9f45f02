"""Block-level power modeling and activity-to-power translation.

This stands in for a full performance/power simulation front end: per-block
power is static power plus activity * switching energy * clock frequency,
driven either by imported activity traces, by mapping rules applied to raw
statistics series, or by shipped synthetic workload profiles.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

import numpy as np


class PowerDomainError(ValueError):
    pass


class TraceFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class BlockPowerModel:
    block: str
    static_power: float  # W
    switching_energy: float  # J per toggle at full activity
    clock_frequency: float  # Hz
    activity_factor_default: float = 0.0

    def __post_init__(self):
        if self.static_power < 0:
            raise ValueError(f"{self.block}: static_power must be >= 0")
        if self.switching_energy < 0:
            raise ValueError(f"{self.block}: switching_energy must be >= 0")
        if self.clock_frequency <= 0:
            raise ValueError(f"{self.block}: clock_frequency must be > 0")
        if not 0.0 <= self.activity_factor_default <= 1.0:
            raise ValueError(f"{self.block}: activity_factor_default must be in [0, 1]")


def block_power(model: BlockPowerModel, activity: float) -> float:
    """Power in watts at the given activity factor."""
    if not 0.0 <= activity <= 1.0:
        raise PowerDomainError(f"activity {activity} outside [0, 1]")
    return model.static_power + activity * model.switching_energy * model.clock_frequency


def scale_for_capacity(
    model: BlockPowerModel,
    ratio: float,
    static_exponent: float = 1.0,
    dynamic_exponent: float = 0.5,
) -> BlockPowerModel:
    """Capacity-knob hook: ratio r scales static power by r**static_exponent
    and switching energy by r**dynamic_exponent (defaults r and sqrt(r))."""
    if ratio <= 0:
        raise ValueError("capacity ratio must be > 0")
    return replace(
        model,
        static_power=model.static_power * ratio**static_exponent,
        switching_energy=model.switching_energy * ratio**dynamic_exponent,
    )


@dataclass(frozen=True)
class ActivityTrace:
    sampling_interval: float  # s
    series: Mapping[str, tuple[float, ...]]

    def __post_init__(self):
        if self.sampling_interval <= 0:
            raise ValueError("sampling_interval must be > 0")
        lengths = {len(v) for v in self.series.values()}
        if len(lengths) > 1:
            raise ValueError(f"series lengths differ: {sorted(lengths)}")
        for name, vals in self.series.items():
            for v in vals:
                if not 0.0 <= v <= 1.0:
                    raise ValueError(f"{name}: activity {v} outside [0, 1]")

    @property
    def n_intervals(self) -> int:
        return len(next(iter(self.series.values()))) if self.series else 0

    @property
    def blocks(self) -> tuple[str, ...]:
        return tuple(self.series)


@dataclass(frozen=True)
class PowerTrace:
    sampling_interval: float  # s
    series: Mapping[str, tuple[float, ...]]

    @property
    def n_intervals(self) -> int:
        return len(next(iter(self.series.values()))) if self.series else 0

    @property
    def blocks(self) -> tuple[str, ...]:
        return tuple(self.series)

    def powers_at(self, interval: int) -> dict[str, float]:
        return {name: vals[interval] for name, vals in self.series.items()}

    def mean_powers(self) -> dict[str, float]:
        return {name: float(np.mean(vals)) for name, vals in self.series.items()}

    def total_energy(self) -> float:
        return self.sampling_interval * sum(sum(v) for v in self.series.values())


@dataclass(frozen=True)
class MappingRule:
    source: str
    target: str
    scale: float
    offset: float


def apply_mapping(
    raw_stats: Mapping[str, Sequence[float]],
    rules: Sequence[MappingRule],
    models: Iterable[BlockPowerModel],
    sampling_interval: float,
) -> ActivityTrace:
    """Translate raw statistics series into per-block activity factors.

    Each rule's target series is clamp(scale * source + offset, 0, 1);
    modeled blocks without a rule get their default activity factor.
    """
    models = list(models)
    by_block = {m.block: m for m in models}
    n = max((len(v) for v in raw_stats.values()), default=1)
    series: dict[str, tuple[float, ...]] = {}
    for rule in rules:
        if rule.source not in raw_stats:
            raise KeyError(
                f"mapping rule {rule.source!r} -> {rule.target!r}: no such source statistic"
            )
        if rule.target not in by_block:
            raise KeyError(
                f"mapping rule {rule.source!r} -> {rule.target!r}: target has no power model"
            )
        src = raw_stats[rule.source]
        series[rule.target] = tuple(
            min(1.0, max(0.0, rule.scale * v + rule.offset)) for v in src
        )
    for m in models:
        if m.block not in series:
            series[m.block] = (m.activity_factor_default,) * n
    return ActivityTrace(sampling_interval, series)


def trace_power(
    models: Iterable[BlockPowerModel],
    activity: ActivityTrace,
    blocks: Sequence[str] | None = None,
) -> PowerTrace:
    """Per-interval block powers; unmodeled blocks (fillers) emit 0 W.

    `blocks` fixes the output block set, typically the union of floorplan
    blocks; it defaults to the activity trace's blocks.
    """
    by_block = {m.block: m for m in models}
    missing = [b for b in activity.blocks if b not in by_block]
    if missing:
        raise KeyError(f"no power model for active block(s): {missing}")
    n = activity.n_intervals
    out_blocks = tuple(blocks) if blocks is not None else activity.blocks
    series: dict[str, tuple[float, ...]] = {}
    for name in out_blocks:
        model = by_block.get(name)
        if model is None:
            series[name] = (0.0,) * n
        elif name in activity.series:
            series[name] = tuple(block_power(model, a) for a in activity.series[name])
        else:
            series[name] = (block_power(model, model.activity_factor_default),) * n
    return PowerTrace(activity.sampling_interval, series)


def memory_bank_power(
    bank_count: int,
    per_bank_static: float,
    per_access_energy: float,
    access_rates: Sequence[float],
) -> list[float]:
    """Per-bank watts: static plus access rate times access energy."""
    if bank_count < 0 or per_bank_static < 0 or per_access_energy < 0:
        raise PowerDomainError("memory power inputs must be non-negative")
    if len(access_rates) != bank_count:
        raise PowerDomainError(f"expected {bank_count} access rates, got {len(access_rates)}")
    if any(r < 0 for r in access_rates):
        raise PowerDomainError("access rates must be non-negative")
    return [per_bank_static + r * per_access_energy for r in access_rates]


# --- synthetic workload profiles --------------------------------------------


def synthetic_activity(
    blocks: Sequence[str],
    profile: str,
    intervals: int,
    sampling_interval: float,
    *,
    base: float = 0.2,
    skew: float = 1.0,
    hot_block: str | None = None,
    jitter: float = 0.0,
    seed: int = 0,
) -> ActivityTrace:
    """Deterministic activity generator for the shipped case studies.

    Profiles: `uniform` (all blocks at `base`), `one_hot` (`hot_block`, or
    the first block, at min(1, base * skew), peers at `base`), `ramp`
    (linear 0 -> base over the trace). `jitter` adds seeded uniform noise,
    clamped to [0, 1].
    """
    if intervals < 1:
        raise ValueError("intervals must be >= 1")
    if not 0.0 <= base <= 1.0:
        raise ValueError("base activity must be in [0, 1]")
    rng = np.random.default_rng(seed)
    series: dict[str, tuple[float, ...]] = {}
    for i, name in enumerate(blocks):
        if profile == "uniform":
            level = base
        elif profile == "one_hot":
            hot = hot_block if hot_block is not None else blocks[0]
            level = min(1.0, base * skew) if name == hot else base
        elif profile == "ramp":
            level = None  # per-interval below
        else:
            raise ValueError(f"unknown profile {profile!r}")
        vals = []
        for k in range(intervals):
            v = base * (k + 1) / intervals if profile == "ramp" else level
            if jitter:
                v += rng.uniform(-jitter, jitter)
            vals.append(min(1.0, max(0.0, v)))
        series[name] = tuple(vals)
    return ActivityTrace(sampling_interval, series)


# --- file formats ------------------------------------------------------------
#
# Power/activity trace: '# interval_s <value>' preamble, a tab-separated
# block-name header, then one tab-separated row of values per interval.
# Mapping rules: 'source_stat target_block scale offset', '#' comments.


def _emit_trace(interval: float, series: Mapping[str, tuple[float, ...]]) -> str:
    names = list(series)
    lines = [f"# interval_s {interval!r}", "\t".join(names)]
    n = len(series[names[0]]) if names else 0
    for k in range(n):
        lines.append("\t".join(repr(series[name][k]) for name in names))
    return "\n".join(lines) + "\n"


def _parse_trace(text: str) -> tuple[float, dict[str, tuple[float, ...]]]:
    interval = None
    names: list[str] | None = None
    rows: list[list[float]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            fields = line[1:].split()
            if len(fields) == 2 and fields[0] == "interval_s":
                interval = float(fields[1])
            continue
        if names is None:
            names = line.split("\t")
            continue
        vals = line.split("\t")
        if len(vals) != len(names):
            raise TraceFormatError(f"expected {len(names)} values, got {len(vals)}", lineno)
        try:
            rows.append([float(v) for v in vals])
        except ValueError:
            raise TraceFormatError(f"bad numeric value in {raw!r}", lineno) from None
    if interval is None:
        raise TraceFormatError("missing '# interval_s <value>' preamble")
    if names is None:
        raise TraceFormatError("missing block-name header")
    series = {name: tuple(row[i] for row in rows) for i, name in enumerate(names)}
    return interval, series


def emit_power_trace(trace: PowerTrace) -> str:
    return _emit_trace(trace.sampling_interval, trace.series)


def parse_power_trace(text: str) -> PowerTrace:
    interval, series = _parse_trace(text)
    for name, vals in series.items():
        if any(v < 0 for v in vals):
            raise TraceFormatError(f"negative power for block {name!r}")
    return PowerTrace(interval, series)


def emit_activity_trace(trace: ActivityTrace) -> str:
    return _emit_trace(trace.sampling_interval, trace.series)


def parse_activity_trace(text: str) -> ActivityTrace:
    interval, series = _parse_trace(text)
    return ActivityTrace(interval, series)


def emit_mapping_rules(rules: Sequence[MappingRule]) -> str:
    lines = ["# mapping rules: source_stat target_block scale offset"]
    for r in rules:
        lines.append(f"{r.source}\t{r.target}\t{r.scale!r}\t{r.offset!r}")
    return "\n".join(lines) + "\n"


def parse_mapping_rules(text: str) -> list[MappingRule]:
    rules = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 4:
            raise TraceFormatError("expected: source_stat target_block scale offset", lineno)
        rules.append(MappingRule(fields[0], fields[1], float(fields[2]), float(fields[3])))
    return rules
