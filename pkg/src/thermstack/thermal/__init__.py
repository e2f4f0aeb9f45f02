from .network import AssemblyError, ThermalNetwork, assemble
from .solve import (
    FloatingNetworkError,
    PatternMismatchError,
    ThermalField,
    channel_energy_balance,
    coolant_outlet_temperatures,
    energy_report,
    solve_steady,
    solve_transient,
)
from .report import (
    BlockStat,
    LayerStat,
    Summary,
    emit_heatmap,
    emit_summary,
    summarize,
)

__all__ = [
    "AssemblyError",
    "ThermalNetwork",
    "assemble",
    "FloatingNetworkError",
    "PatternMismatchError",
    "ThermalField",
    "channel_energy_balance",
    "coolant_outlet_temperatures",
    "energy_report",
    "solve_steady",
    "solve_transient",
    "BlockStat",
    "LayerStat",
    "Summary",
    "emit_heatmap",
    "emit_summary",
    "summarize",
]
