"""Balanced dynamic mTSP heuristics (BD-CVH, BD-AVH) and the cost approximation model."""

from ._core import (
    InfeasibleError,
    Instance,
    gen_uniform,
    load_tsplib,
    predict,
    reproduce,
    resolve_scope,
    solve,
    sweep,
)

__all__ = [
    "InfeasibleError",
    "Instance",
    "gen_uniform",
    "load_tsplib",
    "predict",
    "reproduce",
    "resolve_scope",
    "solve",
    "sweep",
]
