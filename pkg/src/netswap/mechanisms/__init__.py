"""Matching mechanisms for housing markets on social networks."""

from .ctc import (
    MarkedSubgraph,
    PathDetectionOutput,
    compute_S,
    minimal_closed_components,
    minimum_closed_component,
    path_detection,
    run_ctc,
)
from .ls import LsStack, run_ls
from .pointing import (
    Cycle,
    FavoritePointingGraph,
    build_favorite_pointing,
    detect_cycle_from,
    next_favorite,
)
from .swn import run_swn
from .ttc import run_ttc

__all__ = [
    "Cycle",
    "FavoritePointingGraph",
    "LsStack",
    "MarkedSubgraph",
    "PathDetectionOutput",
    "build_favorite_pointing",
    "compute_S",
    "detect_cycle_from",
    "minimal_closed_components",
    "minimum_closed_component",
    "next_favorite",
    "path_detection",
    "run_ctc",
    "run_ls",
    "run_swn",
    "run_ttc",
]
