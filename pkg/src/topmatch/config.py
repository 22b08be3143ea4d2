"""Budgets and tie-break identifiers used throughout the package."""

from __future__ import annotations

from dataclasses import dataclass

ENGINE_VERSION = "0.1.0"

# Identifiers written into transcript headers so replays can detect policy drift.
NON_TIE_BREAK = "non-tie:delete"
CON_TIE_BREAK = "con-tie:lowest-index-v,lowest-index-neighbor,offers-by-edge-id"


@dataclass
class Budgets:
    """Size caps for the exhaustive routines."""

    faces: int = 5_000_000
    psi_vertices: int = 12
    igamma_vertices: int = 14
    rainbow_n: int = 8
    transversal_n: int = 9
    hall_classes: int = 20


DEFAULT_BUDGETS = Budgets()
