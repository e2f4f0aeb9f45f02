"""Vectorized reference implementations of the assembly kernels.

Shared conventions: cell arrays are shaped (layers, rows, cols) and flatten
to node ids in C order. Conduction edges pair face-adjacent solid cells with
G = A / (d1/(2 k1) + d2/(2 k2)); convection links pair fluid cells with
adjacent solid cells through G = h * A_contact. Each undirected edge is
emitted once as (i, j, g) with i < j in node order.
"""

from __future__ import annotations

import numpy as np


def _node_ids(shape):
    return np.arange(np.prod(shape), dtype=np.int64).reshape(shape)


def conduction_edges_x(k, solid, thickness, cell_width, cell_height):
    layers, rows, cols = k.shape
    ids = _node_ids(k.shape)
    ka = k[:, :, :-1]
    kb = k[:, :, 1:]
    ok = solid[:, :, :-1] & solid[:, :, 1:] & (ka > 0) & (kb > 0)
    area = cell_height * thickness[:, None, None]  # face normal to x
    g = np.where(ok, area / (cell_width / 2 / np.where(ka > 0, ka, 1) + cell_width / 2 / np.where(kb > 0, kb, 1)), 0.0)
    i = ids[:, :, :-1][ok]
    j = ids[:, :, 1:][ok]
    return i.ravel(), j.ravel(), g[ok].ravel()


def conduction_edges_y(k, solid, thickness, cell_width, cell_height):
    layers, rows, cols = k.shape
    ids = _node_ids(k.shape)
    ka = k[:, :-1, :]
    kb = k[:, 1:, :]
    ok = solid[:, :-1, :] & solid[:, 1:, :] & (ka > 0) & (kb > 0)
    area = cell_width * thickness[:, None, None]  # face normal to y
    g = np.where(ok, area / (cell_height / 2 / np.where(ka > 0, ka, 1) + cell_height / 2 / np.where(kb > 0, kb, 1)), 0.0)
    i = ids[:, :-1, :][ok]
    j = ids[:, 1:, :][ok]
    return i.ravel(), j.ravel(), g[ok].ravel()


def conduction_edges_z(k, solid, thickness, cell_area):
    layers, rows, cols = k.shape
    ids = _node_ids(k.shape)
    ka = k[:-1, :, :]
    kb = k[1:, :, :]
    ok = solid[:-1, :, :] & solid[1:, :, :] & (ka > 0) & (kb > 0)
    ta = thickness[:-1, None, None]
    tb = thickness[1:, None, None]
    g = np.where(ok, cell_area / (ta / 2 / np.where(ka > 0, ka, 1) + tb / 2 / np.where(kb > 0, kb, 1)), 0.0)
    i = ids[:-1, :, :][ok]
    j = ids[1:, :, :][ok]
    return i.ravel(), j.ravel(), g[ok].ravel()


def convection_links(fluid_layers, fluid_h, solid, thickness, cell_width, cell_height):
    """Fluid-to-solid couplings across lateral and vertical faces.

    fluid_layers: (L, R, C) bool, fluid cells; fluid_h: (L,) coolant h per
    layer (zero for layers without channels).
    """
    layers, rows, cols = fluid_layers.shape
    ids = _node_ids(fluid_layers.shape)
    cell_area = cell_width * cell_height
    out_i, out_j, out_g = [], [], []

    for axis, transverse in ((2, cell_height), (1, cell_width)):
        sl_a = [slice(None)] * 3
        sl_b = [slice(None)] * 3
        sl_a[axis] = slice(None, -1)
        sl_b[axis] = slice(1, None)
        a, b = tuple(sl_a), tuple(sl_b)
        pair_fs = fluid_layers[a] & solid[b]
        pair_sf = solid[a] & fluid_layers[b]
        for pair in (pair_fs, pair_sf):
            if not pair.any():
                continue
            li = np.nonzero(pair)[0]
            out_i.append(ids[a][pair])
            out_j.append(ids[b][pair])
            # grouped as h * (transverse * thickness) to stay bit-identical
            # with the scalar evaluation order in the numba backend
            out_g.append(fluid_h[li] * (transverse * thickness[li]))

    # vertical faces: fluid cell to the solid cell in the layer above/below
    pair_fs = fluid_layers[:-1] & solid[1:]
    pair_sf = solid[:-1] & fluid_layers[1:]
    for pair, h_off in ((pair_fs, 0), (pair_sf, 1)):
        if not pair.any():
            continue
        li = np.nonzero(pair)[0]
        out_i.append(ids[:-1][pair])
        out_j.append(ids[1:][pair])
        out_g.append(fluid_h[li + h_off] * cell_area)

    if not out_i:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty.copy(), np.empty(0)
    return np.concatenate(out_i), np.concatenate(out_j), np.concatenate(out_g)


def deposit_block_power(index, block_powers, cell_area, block_areas):
    """Per-cell power: block power scaled by the cell's share of block area."""
    return block_powers[index] * (cell_area / block_areas[index])
