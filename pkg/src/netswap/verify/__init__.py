"""Brute-force property checkers and scan drivers."""

from .components import (
    check_optimal_cc,
    check_optimal_wcc,
    check_stable_cc,
    check_stable_wcc,
    enumerate_complete_components,
    enumerate_weakly_complete_components,
)
from .properties import check_ic, check_ir, check_po, check_stability
from .report import (
    Caps,
    Property,
    PropertyReport,
    Witness,
    replay_coalition,
    replay_domination,
    replay_misreport,
)
from .scan import ScanReport, enumerate_instances, exhaustive_scan, sample_instances

__all__ = [
    "Caps",
    "Property",
    "PropertyReport",
    "ScanReport",
    "Witness",
    "check_ic",
    "check_ir",
    "check_optimal_cc",
    "check_optimal_wcc",
    "check_po",
    "check_stability",
    "check_stable_cc",
    "check_stable_wcc",
    "enumerate_complete_components",
    "enumerate_instances",
    "enumerate_weakly_complete_components",
    "exhaustive_scan",
    "replay_coalition",
    "replay_domination",
    "replay_misreport",
    "sample_instances",
]
