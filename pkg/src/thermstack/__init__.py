"""Thermal-aware design-space exploration for stacked-die chips.

Turns a high-level design description (floorplans, stacking order, cooling
strategy, block-level power characteristics) into steady-state and transient
temperature fields, and sweeps design dimensions ranked by maximum stack
temperature.
"""

__version__ = "0.1.0"
