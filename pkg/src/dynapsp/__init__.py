"""Fully dynamic exact all-pairs shortest paths and DAG reachability."""
from .apsp import DETERMINISTIC, RANDOMIZED, DynamicAPSP, Params
from .dagreach import DagReach, PrimeField, dag_path_counts
from .errors import (
    DynApspError,
    MalformedUpdateError,
    NoPathError,
    NotADagError,
    OracleMismatch,
    ParameterError,
    QueryForbiddenError,
    TraceParseError,
)
from .graph import HOP_BASE, INF, DynamicGraph, LexWeight

__all__ = [
    "DETERMINISTIC",
    "DagReach",
    "DynApspError",
    "DynamicAPSP",
    "DynamicGraph",
    "HOP_BASE",
    "INF",
    "LexWeight",
    "MalformedUpdateError",
    "NoPathError",
    "NotADagError",
    "OracleMismatch",
    "ParameterError",
    "PrimeField",
    "QueryForbiddenError",
    "RANDOMIZED",
    "TraceParseError",
    "dag_path_counts",
]

__version__ = "0.1.0"
