"""Trace format, random traces, oracles and the trace runner."""
from .oracle import ApspOracle, dfs_reachable, has_negative_cycle, inverse_mod_p, lex_bellman_ford
from .runner import SCHEMA_VERSION, RunReport, run_trace
from .trace import Trace, format_trace, generate_cycle_trace, generate_trace, parse_trace

__all__ = [
    "ApspOracle",
    "RunReport",
    "SCHEMA_VERSION",
    "Trace",
    "dfs_reachable",
    "format_trace",
    "generate_cycle_trace",
    "generate_trace",
    "has_negative_cycle",
    "inverse_mod_p",
    "lex_bellman_ford",
    "parse_trace",
    "run_trace",
]
