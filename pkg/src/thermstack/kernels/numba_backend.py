"""Numba-jitted assembly kernels.

Loop order matches the numpy backend exactly, so both produce the same edge
arrays element for element and assemblies are bit-identical across backends.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _count_x(solid, k):
    layers, rows, cols = k.shape
    n = 0
    for l in range(layers):
        for r in range(rows):
            for c in range(cols - 1):
                if solid[l, r, c] and solid[l, r, c + 1] and k[l, r, c] > 0 and k[l, r, c + 1] > 0:
                    n += 1
    return n


@njit(cache=True)
def _fill_x(solid, k, thickness, cell_width, cell_height, i, j, g):
    layers, rows, cols = k.shape
    n = 0
    for l in range(layers):
        area = cell_height * thickness[l]
        for r in range(rows):
            for c in range(cols - 1):
                ka = k[l, r, c]
                kb = k[l, r, c + 1]
                if solid[l, r, c] and solid[l, r, c + 1] and ka > 0 and kb > 0:
                    base = (l * rows + r) * cols + c
                    i[n] = base
                    j[n] = base + 1
                    g[n] = area / (cell_width / 2 / ka + cell_width / 2 / kb)
                    n += 1


def conduction_edges_x(k, solid, thickness, cell_width, cell_height):
    n = _count_x(solid, k)
    i = np.empty(n, dtype=np.int64)
    j = np.empty(n, dtype=np.int64)
    g = np.empty(n)
    _fill_x(solid, k, thickness, cell_width, cell_height, i, j, g)
    return i, j, g


@njit(cache=True)
def _count_y(solid, k):
    layers, rows, cols = k.shape
    n = 0
    for l in range(layers):
        for r in range(rows - 1):
            for c in range(cols):
                if solid[l, r, c] and solid[l, r + 1, c] and k[l, r, c] > 0 and k[l, r + 1, c] > 0:
                    n += 1
    return n


@njit(cache=True)
def _fill_y(solid, k, thickness, cell_width, cell_height, i, j, g):
    layers, rows, cols = k.shape
    n = 0
    for l in range(layers):
        area = cell_width * thickness[l]
        for r in range(rows - 1):
            for c in range(cols):
                ka = k[l, r, c]
                kb = k[l, r + 1, c]
                if solid[l, r, c] and solid[l, r + 1, c] and ka > 0 and kb > 0:
                    base = (l * rows + r) * cols + c
                    i[n] = base
                    j[n] = base + cols
                    g[n] = area / (cell_height / 2 / ka + cell_height / 2 / kb)
                    n += 1


def conduction_edges_y(k, solid, thickness, cell_width, cell_height):
    n = _count_y(solid, k)
    i = np.empty(n, dtype=np.int64)
    j = np.empty(n, dtype=np.int64)
    g = np.empty(n)
    _fill_y(solid, k, thickness, cell_width, cell_height, i, j, g)
    return i, j, g


@njit(cache=True)
def _count_z(solid, k):
    layers, rows, cols = k.shape
    n = 0
    for l in range(layers - 1):
        for r in range(rows):
            for c in range(cols):
                if solid[l, r, c] and solid[l + 1, r, c] and k[l, r, c] > 0 and k[l + 1, r, c] > 0:
                    n += 1
    return n


@njit(cache=True)
def _fill_z(solid, k, thickness, cell_area, i, j, g):
    layers, rows, cols = k.shape
    plane = rows * cols
    n = 0
    for l in range(layers - 1):
        for r in range(rows):
            for c in range(cols):
                ka = k[l, r, c]
                kb = k[l + 1, r, c]
                if solid[l, r, c] and solid[l + 1, r, c] and ka > 0 and kb > 0:
                    base = (l * rows + r) * cols + c
                    i[n] = base
                    j[n] = base + plane
                    g[n] = cell_area / (thickness[l] / 2 / ka + thickness[l + 1] / 2 / kb)
                    n += 1


def conduction_edges_z(k, solid, thickness, cell_area):
    n = _count_z(solid, k)
    i = np.empty(n, dtype=np.int64)
    j = np.empty(n, dtype=np.int64)
    g = np.empty(n)
    _fill_z(solid, k, thickness, cell_area, i, j, g)
    return i, j, g


@njit(cache=True)
def _convection(fluid, fluid_h, solid, thickness, cell_width, cell_height):
    # six passes in the numpy backend's group order: x fs, x sf, y fs, y sf,
    # z fs, z sf; each pass scans in C order.
    layers, rows, cols = fluid.shape
    cell_area = cell_width * cell_height
    n = 0
    for l in range(layers):
        for r in range(rows):
            for c in range(cols - 1):
                if (fluid[l, r, c] and solid[l, r, c + 1]) or (solid[l, r, c] and fluid[l, r, c + 1]):
                    n += 1
        for r in range(rows - 1):
            for c in range(cols):
                if (fluid[l, r, c] and solid[l, r + 1, c]) or (solid[l, r, c] and fluid[l, r + 1, c]):
                    n += 1
    for l in range(layers - 1):
        for r in range(rows):
            for c in range(cols):
                if (fluid[l, r, c] and solid[l + 1, r, c]) or (solid[l, r, c] and fluid[l + 1, r, c]):
                    n += 1

    i = np.empty(n, dtype=np.int64)
    j = np.empty(n, dtype=np.int64)
    g = np.empty(n)
    m = 0
    for fs in (True, False):
        for l in range(layers):
            area = cell_height * thickness[l]
            for r in range(rows):
                for c in range(cols - 1):
                    a_fluid = fluid[l, r, c] and solid[l, r, c + 1]
                    b_fluid = solid[l, r, c] and fluid[l, r, c + 1]
                    if (fs and a_fluid) or (not fs and b_fluid):
                        base = (l * rows + r) * cols + c
                        i[m] = base
                        j[m] = base + 1
                        g[m] = fluid_h[l] * area
                        m += 1
    for fs in (True, False):
        for l in range(layers):
            area = cell_width * thickness[l]
            for r in range(rows - 1):
                for c in range(cols):
                    a_fluid = fluid[l, r, c] and solid[l, r + 1, c]
                    b_fluid = solid[l, r, c] and fluid[l, r + 1, c]
                    if (fs and a_fluid) or (not fs and b_fluid):
                        base = (l * rows + r) * cols + c
                        i[m] = base
                        j[m] = base + cols
                        g[m] = fluid_h[l] * area
                        m += 1
    plane = rows * cols
    for fs in (True, False):
        for l in range(layers - 1):
            for r in range(rows):
                for c in range(cols):
                    a_fluid = fluid[l, r, c] and solid[l + 1, r, c]
                    b_fluid = solid[l, r, c] and fluid[l + 1, r, c]
                    if (fs and a_fluid) or (not fs and b_fluid):
                        base = (l * rows + r) * cols + c
                        i[m] = base
                        j[m] = base + plane
                        g[m] = fluid_h[l if fs else l + 1] * cell_area
                        m += 1
    return i[:m], j[:m], g[:m]


def convection_links(fluid_layers, fluid_h, solid, thickness, cell_width, cell_height):
    return _convection(
        fluid_layers,
        np.asarray(fluid_h, dtype=np.float64),
        solid,
        np.asarray(thickness, dtype=np.float64),
        cell_width,
        cell_height,
    )


@njit(cache=True)
def _deposit(index, block_powers, cell_area, block_areas, out):
    rows, cols = index.shape
    for r in range(rows):
        for c in range(cols):
            b = index[r, c]
            out[r, c] = block_powers[b] * (cell_area / block_areas[b])


def deposit_block_power(index, block_powers, cell_area, block_areas):
    out = np.empty(index.shape)
    _deposit(index, np.asarray(block_powers, dtype=np.float64), cell_area, block_areas, out)
    return out
