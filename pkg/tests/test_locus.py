import math

import numpy as np
import pytest

from ellbilliard.billiard import caustic_for_3_periodic, orbit_family, orbit_from_vertex
from ellbilliard.conics import Ellipse
from ellbilliard.locus import (
    LocusError,
    MainLemmaViolation,
    PointLocus,
    axis_intersections,
    central_difference,
    fit_conic,
    foci_curve,
    incenter,
    incenter_x_derivative,
    inradius,
    inradius_asymmetry,
    inradius_derivative,
    locus_of_incenters,
    side_distances,
    transversality_check,
)

RIGHT = np.array([[0.0, 0.0], [4.0, 0.0], [0.0, 3.0]])
EQUILATERAL = np.array([[math.cos(t), math.sin(t)] for t in (math.pi / 2, 7 * math.pi / 6, 11 * math.pi / 6)])


def angle_bisector_incenter(v):
    """Meet of two angle bisectors, solved as a 2x2 linear system."""
    rows, rhs = [], []
    for k in (0, 1):
        p, q, r = v[k], v[(k + 1) % 3], v[(k + 2) % 3]
        d = (q - p) / np.linalg.norm(q - p) + (r - p) / np.linalg.norm(r - p)
        n = np.array([-d[1], d[0]])
        rows.append(n)
        rhs.append(n @ p)
    return np.linalg.solve(rows, rhs)


@pytest.fixture(scope="module")
def half():
    e = Ellipse(1.0, 0.5)
    sol = caustic_for_3_periodic(e)
    points, fit = locus_of_incenters(e, 360, sol)
    return e, sol, points, fit


def test_incenter_examples():
    assert incenter(RIGHT) == pytest.approx([1, 1])
    assert inradius(RIGHT) == pytest.approx(1.0)
    assert incenter(EQUILATERAL) == pytest.approx([0, 0], abs=1e-15)
    assert inradius(EQUILATERAL) == pytest.approx(0.5)


def test_incenter_against_bisectors(half):
    e, sol, _, _ = half
    for th in (0.1, 0.9, 2.3, 4.0):
        o = orbit_from_vertex(e, sol, th)
        c = incenter(o)
        assert c == pytest.approx(angle_bisector_incenter(o.vertices), abs=1e-12)
        assert np.abs(side_distances(o, c) - inradius(o)).max() < 1e-10


def test_incenter_on_axis_at_major_vertex(half):
    e, sol, _, _ = half
    assert abs(incenter(orbit_from_vertex(e, sol, 0.0))[1]) < 1e-12


def test_incenter_degenerate_triangle():
    with pytest.raises(LocusError):
        incenter(np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 1.0]]))


def test_fit_unit_circle():
    t = np.linspace(0, 2 * math.pi, 12, endpoint=False)
    fit = fit_conic(np.column_stack([np.cos(t), np.sin(t)]))
    v = fit.coeffs.as_vector()
    assert v / v[0] == pytest.approx([1, 0, 1, 0, 0, -1], abs=1e-12)
    assert fit.residual_max < 1e-12
    assert fit.kind == "ellipse"


def test_fit_axis_aligned_ellipse():
    t = np.linspace(0, 2 * math.pi, 12, endpoint=False)
    fit = fit_conic(np.column_stack([2 * np.cos(t), np.sin(t)]))
    assert fit.center == pytest.approx([0, 0], abs=1e-12)
    assert fit.semi_axes == pytest.approx((2, 1))
    assert fit.rotation == pytest.approx(0.0, abs=1e-12)
    assert fit.focal_distance == pytest.approx(math.sqrt(3))
    assert np.sort(fit.foci[:, 0]) == pytest.approx([-math.sqrt(3), math.sqrt(3)])


def test_fit_rotated_shifted_ellipse():
    t = np.linspace(0, 2 * math.pi, 40, endpoint=False)
    rot = 0.4
    R = np.array([[math.cos(rot), -math.sin(rot)], [math.sin(rot), math.cos(rot)]])
    pts = np.column_stack([3 * np.cos(t), np.sin(t)]) @ R.T + [0.5, -1.0]
    fit = fit_conic(pts)
    assert fit.center == pytest.approx([0.5, -1.0])
    assert fit.semi_axes == pytest.approx((3, 1))
    assert fit.rotation == pytest.approx(rot)


def test_fit_kinds():
    x = np.linspace(-2, 2, 20)
    assert fit_conic(np.column_stack([x, 2 * x + 1])).kind == "degenerate"
    assert fit_conic(np.column_stack([x, x * x])).kind == "parabola"
    xs = np.linspace(1.1, 3, 20)
    hyp = np.vstack([np.column_stack([xs, np.sqrt(xs**2 - 1)]), np.column_stack([-xs, -np.sqrt(xs**2 - 1)])])
    assert fit_conic(hyp).kind == "hyperbola"
    with pytest.raises(ValueError):
        fit_conic(np.zeros((5, 2)))


def test_incenter_ellipse_half(half):
    e, _, points, fit = half
    assert len(points) == 360
    assert fit.kind == "ellipse"
    assert fit.residual_max < 1e-8
    assert np.hypot(*fit.center) < 1e-8
    assert abs(fit.coeffs.B) < 1e-8
    # frozen from the sweep
    assert fit.semi_axes == pytest.approx((0.6513878188659983, 0.19722436226800555), abs=1e-9)


def test_locus_mirror_symmetry(half):
    e, sol, _, _ = half
    for th in (0.3, 1.7, 2.9):
        up = incenter(orbit_from_vertex(e, sol, th))
        down = incenter(orbit_from_vertex(e, sol, -th))
        assert up * [1, -1] == pytest.approx(down, abs=1e-10)


def test_similarity_equivariance(half):
    _, _, _, small = half
    _, big = locus_of_incenters(Ellipse(2.0, 1.0), 360)
    assert np.allclose(big.center, 2 * small.center, atol=1e-9)
    assert np.allclose(big.semi_axes, 2 * np.array(small.semi_axes), rtol=1e-9)
    assert np.allclose(np.sort(big.foci[:, 0]), 2 * np.sort(small.foci[:, 0]), rtol=1e-9)


def test_near_circle_reports_point_locus():
    with pytest.raises(PointLocus) as info:
        locus_of_incenters(Ellipse(1.0, 0.999999), 360)
    # the sweep lands at 1.0000010e-6, a hair above the nominal 1e-6 bound
    assert info.value.max_radius <= 1e-6 * (1 + 1e-5)


def test_locus_needs_samples():
    with pytest.raises(ValueError):
        locus_of_incenters(Ellipse(1.0, 0.5), 11)


def test_axis_intersections_circle():
    t = np.linspace(0, 2 * math.pi, 12, endpoint=False)
    fit = fit_conic(0.7 * np.column_stack([np.cos(t), np.sin(t)]))
    assert np.allclose(axis_intersections(fit), [[-0.7, 0], [0.7, 0]], atol=1e-12)


def test_axis_intersections_miss():
    t = np.linspace(0, 2 * math.pi, 12, endpoint=False)
    fit = fit_conic(np.column_stack([np.cos(t), np.sin(t) + 3.0]))
    with pytest.raises(MainLemmaViolation):
        axis_intersections(fit)


def test_axis_intersections_match_launched_orbits(half):
    e, sol, _, fit = half
    pts = axis_intersections(fit)
    assert pts[0] == pytest.approx(-pts[1], abs=1e-9)
    for th in (0.0, math.pi):
        c = incenter(orbit_from_vertex(e, sol, th))
        assert min(np.hypot(*(c - p)) for p in pts) < 1e-6


def plain_derivative(e, sol, th, h=1e-5):
    """Unextrapolated central difference, used as an independent cross-check."""
    f = lambda t: incenter(orbit_from_vertex(e, sol, t))[1]  # noqa: E731
    return (f(th + h) - f(th - h)) / (2 * h)


@pytest.mark.parametrize("b,frozen", [(0.5, -2.80277563772), (0.8, -0.7465856), (0.3, -5.92725)])
def test_transversality(b, frozen):
    e = Ellipse(1.0, b)
    sol = caustic_for_3_periodic(e)
    d = transversality_check(e, sol=sol)
    assert abs(d) > 1e-3
    assert d == pytest.approx(frozen, rel=1e-5)
    assert d == pytest.approx(plain_derivative(e, sol, 0.0), rel=1e-6)


def test_transversality_rejects_circle():
    with pytest.raises(ValueError):
        transversality_check(Ellipse(1, 1))


def test_transversality_threshold_raises(half):
    e, sol, _, _ = half
    with pytest.raises(MainLemmaViolation):
        transversality_check(e, sol=sol, threshold=10.0)


def test_evenness(half):
    e, sol, _, _ = half
    assert abs(incenter_x_derivative(e, sol=sol)) < 1e-8
    for delta in (0.01, 0.1, 0.5):
        assert abs(inradius_asymmetry(e, delta, sol)) < 1e-12
    assert abs(inradius_derivative(e, sol=sol)) < 1e-6


def test_central_difference_polynomial():
    assert central_difference(lambda x: x**3, 2.0, 1e-2) == pytest.approx(12.0, rel=1e-12)
    assert central_difference(math.sin, 0.3, 1e-4, richardson=False) == pytest.approx(math.cos(0.3), rel=1e-8)


def test_perimeter_family_sanity(half):
    e, sol, points, _ = half
    fam = orbit_family(e, 12, sol)
    assert np.allclose([incenter(o) for o in fam], points[::30], atol=1e-12)


def test_foci_curve_examples():
    samples = foci_curve([0.6, 0.5])
    assert [s.t for s in samples] == [0.5, 0.6]
    assert samples[1].d_gamma == 0.8
    s = samples[0]
    assert s.d_gamma == math.sqrt(0.75)
    assert 0 <= s.d_locus < s.d_gamma
    assert s.d_locus == pytest.approx(0.62081288766824183, abs=1e-9)


@pytest.mark.parametrize("t", [0.0, 1.0, 0.99995])
def test_foci_curve_domain(t):
    with pytest.raises(ValueError):
        foci_curve([t])
