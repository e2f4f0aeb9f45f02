"""Field summaries and the on-disk heatmap / summary text formats."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from ..floorplan import CellAssignment
from .solve import ThermalField


@dataclass(frozen=True)
class BlockStat:
    layer: int
    name: str
    mean_k: float
    max_k: float


@dataclass(frozen=True)
class LayerStat:
    layer: int
    mean_k: float
    max_k: float


@dataclass(frozen=True)
class Summary:
    blocks: tuple[BlockStat, ...]
    layers: tuple[LayerStat, ...]
    stack_max_k: float

    def block(self, name: str, layer: int | None = None) -> BlockStat:
        for b in self.blocks:
            if b.name == name and (layer is None or b.layer == layer):
                return b
        raise KeyError(name)

    def hottest_block(self) -> BlockStat:
        return max(self.blocks, key=lambda b: b.max_k)

    def to_dict(self) -> dict:
        return {
            "blocks": [
                {"layer": b.layer, "name": b.name, "mean_k": b.mean_k, "max_k": b.max_k}
                for b in self.blocks
            ],
            "layers": [
                {"layer": l.layer, "mean_k": l.mean_k, "max_k": l.max_k} for l in self.layers
            ],
            "stack_max_k": self.stack_max_k,
        }


def summarize(field: ThermalField, rasterizations: Mapping[int, CellAssignment]) -> Summary:
    """Per-block mean/max, per-layer stats, and the stack maximum."""
    blocks: list[BlockStat] = []
    for layer in sorted(rasterizations):
        a = rasterizations[layer]
        temps = field.temperatures[layer].ravel()
        idx = a.index.ravel()
        counts = np.bincount(idx, minlength=len(a.block_names))
        sums = np.bincount(idx, weights=temps, minlength=len(a.block_names))
        for b, name in enumerate(a.block_names):
            if counts[b] == 0:
                continue
            blk = temps[idx == b]
            blocks.append(BlockStat(layer, name, float(sums[b] / counts[b]), float(blk.max())))
    layers = tuple(
        LayerStat(i, float(field.temperatures[i].mean()), float(field.temperatures[i].max()))
        for i in range(field.n_layers)
    )
    return Summary(tuple(blocks), layers, field.stack_max())


def emit_summary(summary: Summary) -> str:
    """Tab-separated `scope name mean_K max_K` rows, stack max last."""
    lines = ["# scope\tname\tmean_K\tmax_K"]
    for b in summary.blocks:
        lines.append(f"block\t{b.name}\t{b.mean_k:.6g}\t{b.max_k:.6g}")
    for l in summary.layers:
        lines.append(f"layer\t{l.layer}\t{l.mean_k:.6g}\t{l.max_k:.6g}")
    lines.append(f"stack\t-\t-\t{summary.stack_max_k:.6g}")
    return "\n".join(lines) + "\n"


def emit_heatmap(field: ThermalField, layer: int) -> str:
    """Row-major per-layer grid of temperatures, 6 significant digits."""
    g = field.grid
    lines = [
        f"# layer {layer} rows {g.rows} cols {g.cols} "
        f"cell_w_m {g.cell_width!r} cell_h_m {g.cell_height!r} unit K"
    ]
    for r in range(g.rows):
        lines.append("\t".join(f"{t:.6g}" for t in field.temperatures[layer, r]))
    return "\n".join(lines) + "\n"
