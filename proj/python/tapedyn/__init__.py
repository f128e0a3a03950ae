"""Tape-phase dynamics workbench.

Machines, their rationalized tape phases, the loop-detecting debugger,
real-map iteration and orbit classification, sequence-space measures, and
the budget-bounded halting census. Everything here is a thin re-export of
the compiled core.
"""

from ._core import (
    Machine,
    __version__,
    census,
    classify,
    contraction,
    debug_run,
    iterate,
    measure_box,
    near_diagonal,
    parse_machine,
    run,
    sensitivity,
    sequence_to_space,
    tape_phase,
)

__all__ = [
    "Machine",
    "__version__",
    "census",
    "classify",
    "contraction",
    "debug_run",
    "iterate",
    "measure_box",
    "near_diagonal",
    "parse_machine",
    "run",
    "sensitivity",
    "sequence_to_space",
    "tape_phase",
]
