"""Triangular orbits of elliptic billiards and the ellipse traced by their incenters."""
from .billiard import (
    BilliardError,
    CausticSolution,
    Orbit,
    caustic_for_3_periodic,
    closure_defect,
    orbit_family,
    orbit_from_vertex,
)
from .conics import ConicCoeffs, Ellipse, HLine, HPoint, I1, I2, confocal_conic
from .locus import ConicFit, fit_conic, foci_curve, incenter, inradius, locus_of_incenters

__version__ = "0.1.0"

__all__ = [
    "BilliardError",
    "CausticSolution",
    "ConicCoeffs",
    "ConicFit",
    "Ellipse",
    "HLine",
    "HPoint",
    "I1",
    "I2",
    "Orbit",
    "caustic_for_3_periodic",
    "closure_defect",
    "confocal_conic",
    "fit_conic",
    "foci_curve",
    "incenter",
    "inradius",
    "locus_of_incenters",
    "orbit_family",
    "orbit_from_vertex",
]
