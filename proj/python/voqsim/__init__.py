"""Flit-level 2D-mesh NoC simulator with OQ/VOQ routers.

Thin wrapper around the native module. The main entry points are
``simulate`` and ``sweep``; configuration keywords mirror the CLI flags
(``width``, ``height``, ``mode``, ``capacity``, ``algorithm``, ``pattern``,
``rate``, ``seed``, ...).
"""

from ._voqsim import (
    __version__,
    admissible_outputs,
    classify_turn,
    enumerate_turn_combinations,
    freedom_condition,
    simulate,
    sweep,
    sweep_csv,
    verify,
)

__all__ = [
    "__version__",
    "admissible_outputs",
    "classify_turn",
    "enumerate_turn_combinations",
    "freedom_condition",
    "simulate",
    "sweep",
    "sweep_csv",
    "verify",
]
