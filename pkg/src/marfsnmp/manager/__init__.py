"""Manager side of the suite: requests, walks, traps, stats, gateway, CLI."""

from .client import (
    ErrorResponse,
    LoopDetected,
    TargetSpec,
    Timeout,
    get,
    get_bulk,
    get_next,
    set_values,
    walk,
)
from .gateway import SCHEMA_VERSION, Gateway
from .names import Namer, default_namer
from .stats import CSV_COLUMNS, StatSample, StatSeries, poll_stats, read_csv, write_csv
from .tables import render_table
from .traps import BindFailure, TrapListener, TrapRecord

__all__ = [
    "BindFailure",
    "CSV_COLUMNS",
    "ErrorResponse",
    "Gateway",
    "LoopDetected",
    "Namer",
    "SCHEMA_VERSION",
    "StatSample",
    "StatSeries",
    "TargetSpec",
    "Timeout",
    "TrapListener",
    "TrapRecord",
    "default_namer",
    "get",
    "get_bulk",
    "get_next",
    "poll_stats",
    "read_csv",
    "render_table",
    "set_values",
    "walk",
    "write_csv",
]
