"""Python access to the spin-splitter simulation library."""

from ._core import (
    ScenarioError,
    analytic_table,
    design_report,
    rabi_frequency_bi,
    rabi_frequency_mono,
    simulate,
    stage_unitary,
    tool_version,
    total_evolution,
)

__version__ = "1.0.0"

__all__ = [
    "ScenarioError",
    "analytic_table",
    "design_report",
    "rabi_frequency_bi",
    "rabi_frequency_mono",
    "simulate",
    "stage_unitary",
    "tool_version",
    "total_evolution",
]
