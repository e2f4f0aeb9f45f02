"""Finite-volume thermal network assembly.

One node per grid cell per layer. Solid cells exchange heat by conduction
through face conductances; fluid cells exchange with adjacent solid cells
through convection (h * contact area) and with their upstream fluid cell
through first-order upwind advection. Only the sink layer convects to
ambient; the remaining outer faces are adiabatic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .. import kernels
from ..cooling import CoolingPattern, channel_paths
from ..floorplan import CellAssignment
from ..stack import Grid, Stack

# Effective sink-boundary heat-transfer coefficient; folds the fin/airflow
# behavior of a passive heat sink into one number. Configurable per assembly.
DEFAULT_SINK_H = 1.2e4  # W/(m^2 K)


class AssemblyError(ValueError):
    pass


@dataclass
class ThermalNetwork:
    stack: Stack
    grid: Grid
    n_layers: int
    # undirected conduction + convection couplings, each pair once
    edge_i: np.ndarray
    edge_j: np.ndarray
    edge_g: np.ndarray
    # convection to ambient, per node (nonzero only on the sink layer)
    boundary_g: np.ndarray
    capacitance: np.ndarray
    # upwind advection: per node, W/K carried by the flow and upstream node
    # id (-1 for channel-head cells, which are fed at inlet temperature)
    advection_f: np.ndarray
    advection_upstream: np.ndarray
    inlet_temp: np.ndarray
    assignments: dict[int, CellAssignment] = field(default_factory=dict)
    patterns: dict[int, CoolingPattern] = field(default_factory=dict)
    paths: dict[int, list[list[tuple[int, int]]]] = field(default_factory=dict)
    sink_h: float = DEFAULT_SINK_H

    @property
    def n_nodes(self) -> int:
        return self.n_layers * self.grid.rows * self.grid.cols

    def node_id(self, layer: int, row: int, col: int) -> int:
        return (layer * self.grid.rows + row) * self.grid.cols + col

    @property
    def ambient(self) -> float:
        return self.stack.ambient_temperature

    def has_boundary(self) -> bool:
        return bool(self.boundary_g.any() or self.advection_f.any())

    def power_vector(self, block_powers: Mapping[str, float]) -> np.ndarray:
        """Per-node injected power, block power spread uniformly over owned cells."""
        q = np.zeros(self.n_nodes)
        rows, cols = self.grid.rows, self.grid.cols
        for layer, assignment in self.assignments.items():
            powers = np.array([block_powers.get(n, 0.0) for n in assignment.block_names])
            per_cell = kernels.deposit_block_power(
                assignment.index, powers, self.grid.cell_area, assignment.block_areas
            )
            start = layer * rows * cols
            q[start : start + rows * cols] = per_cell.ravel()
        return q


def assemble(
    stack: Stack,
    grid: Grid,
    rasterizations: Mapping[int, CellAssignment],
    patterns: Mapping[int, CoolingPattern] | None = None,
    *,
    sink_h: float = DEFAULT_SINK_H,
) -> ThermalNetwork:
    """Build the thermal network for a validated stack on a grid.

    `rasterizations` maps die-layer index to the layer's cell assignment;
    `patterns` maps microchannel-layer index to its pattern and defaults to
    the patterns carried on the layers themselves.
    """
    n_layers = len(stack.layers)
    rows, cols = grid.rows, grid.cols
    if patterns is None:
        patterns = {}
    patterns = dict(patterns)
    for idx in stack.microchannel_indices():
        if idx not in patterns:
            if stack.layers[idx].pattern is None:
                raise AssemblyError(f"microchannel layer {idx} has no cooling pattern")
            patterns[idx] = stack.layers[idx].pattern
    for idx in stack.die_indices():
        if idx not in rasterizations:
            raise AssemblyError(f"die layer {idx} has no rasterized floorplan")
    for idx, a in rasterizations.items():
        if a.grid.rows != rows or a.grid.cols != cols:
            raise AssemblyError(f"rasterization for layer {idx} is on a different grid")
    for idx, p in patterns.items():
        if p.grid.rows != rows or p.grid.cols != cols:
            raise AssemblyError(
                f"pattern for layer {idx} is {p.grid.rows}x{p.grid.cols}, "
                f"simulation grid is {rows}x{cols}"
            )

    thickness = np.array([l.thickness for l in stack.layers])
    k = np.empty((n_layers, rows, cols))
    cv = np.empty((n_layers, rows, cols))
    fluid = np.zeros((n_layers, rows, cols), dtype=bool)
    fluid_h = np.zeros(n_layers)
    for i, layer in enumerate(stack.layers):
        k[i] = layer.material.thermal_conductivity
        cv[i] = layer.material.volumetric_heat_capacity
        if i in patterns:
            p = patterns[i]
            fluid[i] = p.fluid
            fluid_h[i] = p.coolant.convection_coefficient
            k[i][p.fluid] = 0.0  # fluid cells do not conduct as solid
            cv[i][p.fluid] = p.coolant.volumetric_heat_capacity
    solid = ~fluid

    ix, jx, gx = kernels.conduction_edges_x(k, solid, thickness, grid.cell_width, grid.cell_height)
    iy, jy, gy = kernels.conduction_edges_y(k, solid, thickness, grid.cell_width, grid.cell_height)
    iz, jz, gz = kernels.conduction_edges_z(k, solid, thickness, grid.cell_area)
    ic, jc, gc = kernels.convection_links(fluid, fluid_h, solid, thickness, grid.cell_width, grid.cell_height)
    edge_i = np.concatenate([ix, iy, iz, ic])
    edge_j = np.concatenate([jx, jy, jz, jc])
    edge_g = np.concatenate([gx, gy, gz, gc])

    n_nodes = n_layers * rows * cols
    boundary_g = np.zeros(n_nodes)
    if stack.layers[-1].kind == "sink":
        top = (n_layers - 1) * rows * cols
        boundary_g[top:] = sink_h * grid.cell_area

    capacitance = (cv * (thickness[:, None, None] * grid.cell_area)).ravel()

    advection_f = np.zeros(n_nodes)
    advection_upstream = np.full(n_nodes, -1, dtype=np.int64)
    inlet_temp = np.zeros(n_nodes)
    paths: dict[int, list[list[tuple[int, int]]]] = {}
    for layer, pattern in patterns.items():
        layer_paths = channel_paths(pattern)
        paths[layer] = layer_paths
        f = pattern.coolant.flow_heat_capacity
        t_in = pattern.coolant.inlet_temperature
        base = layer * rows * cols
        for path in layer_paths:
            prev = -1
            for r, c in path:
                node = base + r * cols + c
                advection_f[node] = f
                advection_upstream[node] = prev
                if prev == -1:
                    inlet_temp[node] = t_in
                prev = node

    return ThermalNetwork(
        stack=stack,
        grid=grid,
        n_layers=n_layers,
        edge_i=edge_i,
        edge_j=edge_j,
        edge_g=edge_g,
        boundary_g=boundary_g,
        capacitance=capacitance,
        advection_f=advection_f,
        advection_upstream=advection_upstream,
        inlet_temp=inlet_temp,
        assignments=dict(rasterizations),
        patterns=patterns,
        paths=paths,
        sink_h=sink_h,
    )
