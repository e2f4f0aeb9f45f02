#!/usr/bin/env python3
"""Benchmark the numba assembly kernels against the pure-numpy fallback.

Builds thermal networks for a cooled four-layer stack at growing grid
resolutions with both backends, checks the assemblies agree, and prints the
timing ratio. Force the numpy path in production with THERMSTACK_PURE_NUMPY=1.
"""

import time

import numpy as np

from thermstack import kernels
from thermstack.cooling import generate_pattern
from thermstack.floorplan import generate_template, rasterize
from thermstack.stack import DEFAULT_MATERIALS, DieOutline, Layer, Stack, grid_for
from thermstack.thermal import assemble

SI = DEFAULT_MATERIALS["silicon"]
CU = DEFAULT_MATERIALS["copper"]

REPEATS = 5
SIZES = [32, 64, 128, 256]


def build_inputs(n):
    outline = DieOutline(8e-3, 8e-3)
    grid = grid_for(outline, n, n)
    cores = generate_template(outline, "core_grid", 4, "C")
    banks = generate_template(outline, "bank_grid", 16, "B")
    pattern = generate_pattern(grid, "bent90", grid.cell_width, 2 * grid.cell_width)
    stack = Stack(
        outline,
        [
            Layer("die", 5e-4, SI, floorplan=banks),
            Layer("microchannel", 2e-4, SI, pattern=pattern),
            Layer("die", 5e-4, SI, floorplan=cores),
            Layer("sink", 2e-3, CU),
        ],
    )
    rasters = {i: rasterize(stack.layers[i].floorplan, grid) for i in stack.die_indices()}
    return stack, grid, rasters


def time_assembly(stack, grid, rasters):
    best = float("inf")
    net = None
    for _ in range(REPEATS):
        start = time.perf_counter()
        net = assemble(stack, grid, rasters)
        best = min(best, time.perf_counter() - start)
    return best, net


def main():
    print(f"{'grid':>10} {'numpy':>12} {'numba':>12} {'speedup':>9}  edges")
    kernels.use_backend("numba")
    kernels.warmup()  # JIT once, outside the timed region
    for n in SIZES:
        stack, grid, rasters = build_inputs(n)
        kernels.use_backend("numpy")
        t_np, net_np = time_assembly(stack, grid, rasters)
        kernels.use_backend("numba")
        t_nb, net_nb = time_assembly(stack, grid, rasters)
        same = (
            np.array_equal(net_np.edge_i, net_nb.edge_i)
            and np.array_equal(net_np.edge_j, net_nb.edge_j)
            and np.array_equal(net_np.edge_g, net_nb.edge_g)
        )
        flag = "" if same else "  MISMATCH!"
        print(
            f"{n:>4}x{n:<5} {t_np * 1e3:>10.2f}ms {t_nb * 1e3:>10.2f}ms "
            f"{t_np / t_nb:>8.2f}x  {len(net_np.edge_g)}{flag}"
        )


if __name__ == "__main__":
    main()
