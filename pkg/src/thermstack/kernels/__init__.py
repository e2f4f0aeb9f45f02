"""Hot assembly kernels with a numba fast path and a pure-numpy fallback.

The numba backend is used when importable; set THERMSTACK_PURE_NUMPY=1 to
force the numpy path. Both backends produce identical arrays; the benchmark
under benchmarks/ compares them.
"""

from __future__ import annotations

import os

from . import numpy_backend

_BACKENDS = {"numpy": numpy_backend}
_active = numpy_backend
_active_name = "numpy"

if os.environ.get("THERMSTACK_PURE_NUMPY", "").lower() not in ("1", "true", "yes"):
    try:
        from . import numba_backend

        _BACKENDS["numba"] = numba_backend
        _active = numba_backend
        _active_name = "numba"
    except ImportError:
        pass


def active_backend() -> str:
    return _active_name


def use_backend(name: str) -> str:
    """Switch the kernel backend ('numpy' or 'numba'); returns the old name."""
    global _active, _active_name
    if name not in _BACKENDS:
        if name == "numba":
            from . import numba_backend  # raises if numba is unavailable

            _BACKENDS["numba"] = numba_backend
        else:
            raise ValueError(f"unknown kernel backend {name!r}")
    old = _active_name
    _active = _BACKENDS[name]
    _active_name = name
    return old


def conduction_edges_x(k, solid, thickness, cell_width, cell_height):
    return _active.conduction_edges_x(k, solid, thickness, cell_width, cell_height)


def conduction_edges_y(k, solid, thickness, cell_width, cell_height):
    return _active.conduction_edges_y(k, solid, thickness, cell_width, cell_height)


def conduction_edges_z(k, solid, thickness, cell_area):
    return _active.conduction_edges_z(k, solid, thickness, cell_area)


def convection_links(fluid_layers, fluid_h, solid, thickness, cell_width, cell_height):
    return _active.convection_links(fluid_layers, fluid_h, solid, thickness, cell_width, cell_height)


def deposit_block_power(index, block_powers, cell_area, block_areas):
    return _active.deposit_block_power(index, block_powers, cell_area, block_areas)


def warmup() -> None:
    """Trigger JIT compilation on tiny inputs (no-op for the numpy backend)."""
    import numpy as np

    k = np.full((2, 2, 2), 100.0)
    solid = np.ones((2, 2, 2), dtype=bool)
    t = np.array([1e-4, 1e-4])
    conduction_edges_x(k, solid, t, 1e-4, 1e-4)
    conduction_edges_y(k, solid, t, 1e-4, 1e-4)
    conduction_edges_z(k, solid, t, 1e-8)
    fl = np.zeros((2, 2, 2), dtype=bool)
    fl[0, 0, 0] = True
    solid2 = solid.copy()
    solid2[0, 0, 0] = False
    convection_links(fl, np.array([1e4, 0.0]), solid2, t, 1e-4, 1e-4)
    deposit_block_power(
        np.zeros((2, 2), dtype=np.int32), np.array([1.0]), 1e-8, np.array([4e-8])
    )
