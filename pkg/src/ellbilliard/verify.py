"""Numerical verification suites with named, overridable thresholds."""
from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass

import numpy as np

from . import cproj
from .billiard import caustic_for_3_periodic, orbit_from_vertex
from .conics import Ellipse, I1, I2, HPoint, conic_from_ellipse, confocal_conic, incidence, tangent_lines_from
from .locus import (
    MainLemmaViolation,
    axis_intersections,
    incenter,
    inradius_asymmetry,
    inradius_derivative,
    locus_of_incenters,
    transversality_check,
)

DEFAULT_TOLERANCES = {
    "involution": 1e-15,
    "fixed_point": 1e-15,
    "real_closure": 1e-15,
    "euclidean_consistency": 1e-12,
    "limit_slope": 1e-6,
    "tangent_match": 1e-10,
    "foci_match": 1e-10,
    "center_isotropy": 1e-12,
    "lemma5_nonisotropic": 1e-3,
    "lemma5_exponent": 0.05,
    "lemma5_tangency": 1e-6,
    "axis_coincidence": 1e-6,
    "transversality": 1e-3,
    "evenness": 1e-12,
    "inradius_derivative": 1e-6,
}

SUITES = ("reflection", "confocal", "lemma5", "mainlemma")


@dataclass
class Check:
    name: str
    measured: float
    threshold: float
    relation: str  # "<" : measured must stay below, ">" : must exceed
    passed: bool

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.measured:.3e} {self.relation} {self.threshold:.3e}"


def _below(name, value, tol) -> Check:
    value = float(value)
    return Check(name, value, tol, "<", bool(value < tol) or value == 0.0 == tol)


def _above(name, value, tol) -> Check:
    value = float(value)
    return Check(name, value, tol, ">", bool(value > tol))


def _tols(overrides):
    tol = dict(DEFAULT_TOLERANCES)
    for key, value in (overrides or {}).items():
        if key not in tol:
            raise KeyError(f"unknown tolerance {key!r}; known: {', '.join(sorted(tol))}")
        tol[key] = float(value)
    return tol


def reflection_suite(seed: int = 42, trials: int = 1000, tolerances=None) -> list[Check]:
    tol = _tols(tolerances)
    rng = np.random.default_rng(seed)
    eps = rng.normal(size=200) + 1j * rng.normal(size=200)
    z = rng.normal(size=200) + 1j * rng.normal(size=200)
    invol = max(abs(cproj.reflect_coord(e, cproj.reflect_coord(e, w)) - w) / abs(w)
                for e, w in zip(eps, z))
    fixed = max(abs(cproj.reflect_coord(e, e) - e) / abs(e) for e in eps)
    swap_ok = all(cproj.is_infinite(cproj.reflect_coord(e, 0)) and cproj.reflect_coord(e, cproj.INF) == 0
                  for e in eps)
    angles = rng.uniform(-math.pi, math.pi, size=(200, 2))
    closure = max(abs(abs(cproj.reflect_coord(cmath.exp(1j * a), cmath.exp(1j * b))) - 1.0)
                  for a, b in angles)
    _, slope = cproj.isotropic_limit_behavior(complex(*rng.normal(size=2)), 10.0 ** -np.arange(1, 9))
    return [
        _below("involution", invol, tol["involution"]),
        _below("fixed_point", fixed, tol["fixed_point"]),
        Check("isotropic_swap", 0.0 if swap_ok else 1.0, 0.0, "==", swap_ok),
        _below("real_closure", closure, tol["real_closure"]),
        _below("euclidean_consistency", cproj.reflect_euclidean_consistency(trials, seed),
               tol["euclidean_consistency"]),
        _below("limit_slope", abs(slope - 2.0), tol["limit_slope"]),
    ]


def random_confocal_pairs(count: int, seed: int, focal: float = 0.8):
    """Confocal (table, caustic) pairs sharing the focal distance ``focal``."""
    rng = np.random.default_rng(seed)
    pairs = []
    for a in rng.uniform(1.0, 3.0, size=count):
        table = Ellipse(float(a), math.sqrt(a * a - focal * focal))
        lam = rng.uniform(0.1, 0.9) * table.b**2
        pairs.append((table, confocal_conic(table, lam)))
    return pairs


def confocal_suite(seed: int = 42, count: int = 10, tolerances=None) -> list[Check]:
    tol = _tols(tolerances)
    match = foci = 0.0
    for table, caustic in random_confocal_pairs(count, seed):
        report = cproj.common_isotropic_tangents(table, caustic)
        match = max(match, report.match_error)
        foci = max(foci, report.foci_error)
    iso = 0.0
    for r in (1.0, 0.3, 2.5):
        lines = tangent_lines_from(conic_from_ellipse(Ellipse(r, r)), HPoint.affine(0.0, 0.0))
        # each tangent from the centre must pass through one of the two isotropic points
        iso = max(iso, max(min(incidence(ln, I1), incidence(ln, I2)) for ln in lines))
    return [
        _below("tangent_match", match, tol["tangent_match"]),
        _below("foci_match", foci, tol["foci_match"]),
        _below("center_isotropy", iso, tol["center_isotropy"]),
    ]


def lemma5_suite(a: float = 1.0, b: float = 0.5, tolerances=None) -> list[Check]:
    tol = _tols(tolerances)
    table = Ellipse(a, b)
    sol = caustic_for_3_periodic(table)
    exp = cproj.lemma5_limit(table, sol.caustic)
    mod = abs(exp.extrapolated_limit)
    # distance from 0 and infinity in the chart, measured symmetrically
    nonisotropic = min(mod, 1.0 / mod) if mod > 0 else 0.0
    gaps = exp.distances_to_limit
    return [
        _above("lemma5_nonisotropic", nonisotropic, tol["lemma5_nonisotropic"]),
        _below("lemma5_exponent", abs(exp.tangent_angle_exponent - 0.5), tol["lemma5_exponent"]),
        _below("lemma5_tangency", exp.limit_tangency_residual, tol["lemma5_tangency"]),
        Check("lemma5_monotone", float(np.all(np.diff(gaps) < 0)), 1.0, "==",
              bool(np.all(np.diff(gaps) < 0))),
    ]


def mainlemma_suite(a: float = 1.0, b: float = 0.5, samples: int = 360, tolerances=None) -> list[Check]:
    tol = _tols(tolerances)
    table = Ellipse(a, b)
    sol = caustic_for_3_periodic(table)
    _, fit = locus_of_incenters(table, samples, sol)
    checks = []
    try:
        points = axis_intersections(fit)
        ok = True
    except MainLemmaViolation:
        points, ok = None, False
    checks.append(Check("two_real_axis_points", float(ok), 1.0, "==", ok))
    if ok:
        launched = np.array([incenter(orbit_from_vertex(table, sol, th)) for th in (0.0, math.pi)])
        gap = max(min(np.hypot(*(p - q)) for q in points) for p in launched)
        checks.append(_below("axis_coincidence", gap, tol["axis_coincidence"]))
    try:
        slope = transversality_check(table, sol=sol, threshold=0.0)
    except MainLemmaViolation:
        slope = 0.0
    checks.append(_above("transversality", abs(slope), tol["transversality"]))
    asym = max(abs(inradius_asymmetry(table, d, sol)) for d in (0.01, 0.1, 0.5))
    checks.append(_below("evenness", asym, tol["evenness"]))
    checks.append(_below("inradius_derivative", abs(inradius_derivative(table, sol=sol)),
                         tol["inradius_derivative"]))
    return checks


def run_suite(name: str, a: float = 1.0, b: float = 0.5, seed: int = 42, samples: int = 360,
              tolerances=None) -> dict:
    """Run one suite (or ``"all"``) and return a JSON-ready report."""
    names = SUITES if name == "all" else (name,)
    report = {"suites": {}, "tolerances": _tols(tolerances)}
    for n in names:
        if n == "reflection":
            checks = reflection_suite(seed, tolerances=tolerances)
        elif n == "confocal":
            checks = confocal_suite(seed, tolerances=tolerances)
        elif n == "lemma5":
            checks = lemma5_suite(a, b, tolerances=tolerances)
        elif n == "mainlemma":
            checks = mainlemma_suite(a, b, samples, tolerances=tolerances)
        else:
            raise ValueError(f"unknown suite {n!r}")
        report["suites"][n] = [asdict(c) for c in checks]
    report["passed"] = all(c["passed"] for cs in report["suites"].values() for c in cs)
    return report


__all__ = [
    "Check",
    "DEFAULT_TOLERANCES",
    "SUITES",
    "confocal_suite",
    "lemma5_suite",
    "mainlemma_suite",
    "random_confocal_pairs",
    "reflection_suite",
    "run_suite",
]
