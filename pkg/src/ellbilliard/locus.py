"""Incenters of the triangular orbits, the conic through them, and its foci."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .billiard import CausticSolution, Orbit, caustic_for_3_periodic, orbit_family, orbit_from_vertex
from .conics import ConicCoeffs, Ellipse

CIRCLE_CUTOFF = 1e-6
FD_STEP = 1e-4
CENTER_TOL = 1e-8
CROSS_TERM_TOL = 1e-8
RESIDUAL_TOL = 1e-8


class LocusError(RuntimeError):
    """A locus check failed."""


class MainLemmaViolation(LocusError):
    """The fitted locus does not cross the focal axis in two real simple points."""


class PointLocus(LocusError):
    """Near-circular table: every incenter sits at the centre, nothing to fit."""

    def __init__(self, table: Ellipse, points: np.ndarray):
        self.table = table
        self.points = points
        self.max_radius = float(np.max(np.hypot(points[:, 0], points[:, 1])))
        super().__init__(f"{table} is a circle to within {CIRCLE_CUTOFF:g}: incenter locus "
                         f"degenerates to a point (max |incenter| = {self.max_radius:.3e})")


def _vertices(o) -> np.ndarray:
    return np.asarray(o.vertices if isinstance(o, Orbit) else o, dtype=float)


def _opposite_lengths(v: np.ndarray) -> np.ndarray:
    return np.array([np.hypot(*(v[(i + 2) % 3] - v[(i + 1) % 3])) for i in range(3)])


def _check_nondegenerate(lengths):
    if lengths.min() <= 1e-9:
        raise LocusError(f"degenerate triangle, shortest side {lengths.min():.3e}")


def incenter(o) -> np.ndarray:
    """Incenter of an orbit (or of any triangle given as a 3x2 array)."""
    v = _vertices(o)
    w = _opposite_lengths(v)
    _check_nondegenerate(w)
    return w @ v / w.sum()


def inradius(o) -> float:
    v = _vertices(o)
    w = _opposite_lengths(v)
    _check_nondegenerate(w)
    e1, e2 = v[1] - v[0], v[2] - v[0]
    area = 0.5 * abs(e1[0] * e2[1] - e1[1] * e2[0])
    return float(area / (0.5 * w.sum()))


def side_distances(o, p) -> np.ndarray:
    """Distances from ``p`` to the three side lines of a triangle."""
    v = _vertices(o)
    out = []
    for k in range(3):
        a, b = v[k], v[(k + 1) % 3]
        d = b - a
        out.append(abs(d[0] * (p[1] - a[1]) - d[1] * (p[0] - a[0])) / np.hypot(*d))
    return np.array(out)


@dataclass
class ConicFit:
    coeffs: ConicCoeffs
    kind: str
    residual_max: float
    residual_rms: float
    center: np.ndarray | None = None
    semi_axes: tuple[float, float] | None = None
    rotation: float | None = None
    foci: np.ndarray | None = None

    @property
    def focal_distance(self) -> float:
        p, q = self.semi_axes
        return math.sqrt(max(p * p - q * q, 0.0))

    def as_dict(self) -> dict:
        def tolist(x):
            return None if x is None else np.asarray(x, dtype=float).tolist()

        return {
            "coeffs": [float(c) for c in self.coeffs.as_vector()],
            "kind": self.kind,
            "center": tolist(self.center),
            "semi_axes": tolist(self.semi_axes),
            "rotation": None if self.rotation is None else float(self.rotation),
            "foci": tolist(self.foci),
            "residual_max": self.residual_max,
            "residual_rms": self.residual_rms,
        }


def design_matrix(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    return np.column_stack([x * x, x * y, y * y, x, y, np.ones_like(x)])


def classify(v) -> str:
    """Kind of the conic with unit-norm coefficient vector ``v``."""
    A, B, C = v[0], v[1], v[2]
    M = ConicCoeffs(*v).matrix
    if abs(np.linalg.det(M)) <= 1e-12:
        return "degenerate"
    disc = B * B - 4 * A * C
    scale = 1e-10 * (A + C) ** 2
    if disc < -scale:
        return "ellipse"
    if disc > scale:
        return "hyperbola"
    return "parabola"


def fit_conic(points) -> ConicFit:
    """Algebraic least-squares conic through ``points``.

    The coefficient vector is the right singular vector of the monomial design
    matrix with the smallest singular value.  Nothing about symmetry is
    imposed; the caller checks it on the output.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 6:
        raise ValueError("need at least 6 points of shape (n, 2)")
    Dm = design_matrix(pts)
    _, sing, vt = np.linalg.svd(Dm, full_matrices=False)
    v = vt[-1]
    if v[0] + v[2] < 0 or (v[0] + v[2] == 0 and v[5] > 0):
        v = -v
    res = Dm @ v
    coeffs = ConicCoeffs(*v)
    fit = ConicFit(coeffs, classify(v), float(np.abs(res).max()), float(np.sqrt(np.mean(res**2))))
    # a second vanishing singular value means a pencil of conics fits (e.g. collinear points)
    if sing[-2] <= 1e-10 * sing[0]:
        fit.kind = "degenerate"
    if fit.kind != "ellipse":
        return fit

    M = coeffs.matrix
    Q = M[:2, :2]
    center = np.linalg.solve(Q, -M[:2, 2])
    f0 = M[2, 2] + M[:2, 2] @ center
    evals, evecs = np.linalg.eigh(Q)
    sq = -f0 / evals
    if np.any(sq <= 0):
        fit.kind = "degenerate"  # imaginary ellipse
        return fit
    axes = np.sqrt(sq)
    major = int(np.argmax(axes))
    p, q = float(axes[major]), float(axes[1 - major])
    u = evecs[:, major]
    rotation = math.atan2(u[1], u[0])
    # the major direction is only defined up to sign: fold into (-pi/2, pi/2]
    if rotation <= -math.pi / 2:
        rotation += math.pi
    elif rotation > math.pi / 2:
        rotation -= math.pi
    u = np.array([math.cos(rotation), math.sin(rotation)])
    c = math.sqrt(max(p * p - q * q, 0.0))
    fit.center = center
    fit.semi_axes = (p, q)
    fit.rotation = rotation
    fit.foci = np.array([center - c * u, center + c * u])
    return fit


def is_near_circle(e: Ellipse) -> bool:
    return 1.0 - e.b / e.a <= CIRCLE_CUTOFF * (1 + 1e-9)


def incenters(orbits) -> np.ndarray:
    return np.array([incenter(o) for o in orbits])


def locus_of_incenters(e: Ellipse, n: int = 360, sol: CausticSolution | None = None):
    """Sweep ``n`` orbits, fit a conic to their incenters and check its symmetry.

    Returns ``(points, fit)``.  Raises :class:`PointLocus` for near-circular
    tables and :class:`LocusError` if the fit is not a centred, axis-aligned
    ellipse.
    """
    if n < 12:
        raise ValueError(f"need n >= 12 samples, got {n}")
    if sol is None:
        sol = caustic_for_3_periodic(e)
    points = incenters(orbit_family(e, n, sol))
    if is_near_circle(e):
        raise PointLocus(e, points)
    fit = fit_conic(points)
    problems = []
    if fit.kind != "ellipse":
        problems.append(f"kind is {fit.kind}")
    else:
        if np.hypot(*fit.center) >= CENTER_TOL * e.a:
            problems.append(f"center {fit.center} off the origin")
        if abs(fit.coeffs.B) >= CROSS_TERM_TOL:
            problems.append(f"cross term B = {fit.coeffs.B:.3e}")
        if abs(math.sin(2 * fit.rotation)) >= 2 * CROSS_TERM_TOL:
            problems.append(f"axes rotated by {fit.rotation:.3e}")
    if problems:
        raise LocusError("incenter locus check failed: " + "; ".join(problems))
    return points, fit


def axis_intersections(fit: ConicFit, tol: float = 1e-10) -> np.ndarray:
    """The two points where the fitted conic meets the focal axis ``y = 0``."""
    if fit.kind != "ellipse":
        raise ValueError(f"need an ellipse fit, got {fit.kind}")
    A, _, _, D, _, F = fit.coeffs.as_vector()
    disc = D * D - 4 * A * F
    if disc <= tol * max(D * D, abs(4 * A * F), 1e-300):
        raise MainLemmaViolation(f"focal axis meets the locus in a double or complex pair "
                                 f"(discriminant {disc:.3e})")
    sq = math.sqrt(disc)
    q = -0.5 * (D + math.copysign(sq, D)) if D != 0 else 0.5 * sq
    roots = sorted([q / A, F / q])
    return np.array([[roots[0], 0.0], [roots[1], 0.0]])


def central_difference(f, x: float, h: float = FD_STEP, richardson: bool = True) -> float:
    """Derivative of ``f`` at ``x``; Richardson-combined over steps h and h/2."""

    def cd(step):
        return (f(x + step) - f(x - step)) / (2 * step)

    d1 = cd(h)
    if not richardson:
        return d1
    return (4 * cd(h / 2) - d1) / 3


def _incenter_at(e, sol, theta):
    return incenter(orbit_from_vertex(e, sol, theta))


def transversality_check(e: Ellipse, h: float = FD_STEP, sol: CausticSolution | None = None,
                         threshold: float = 1e-3) -> float:
    """d(incenter_y)/d(theta0) at theta0 = 0, where the locus crosses the focal axis."""
    if e.is_circle:
        raise ValueError("transversality is meaningless for a circular table")
    if sol is None:
        sol = caustic_for_3_periodic(e)
    d = central_difference(lambda t: _incenter_at(e, sol, t)[1], 0.0, h)
    if abs(d) <= threshold:
        raise MainLemmaViolation(f"locus is tangent to the focal axis: d(iy)/dtheta = {d:.3e}")
    return d


def incenter_x_derivative(e: Ellipse, h: float = FD_STEP, sol: CausticSolution | None = None) -> float:
    if sol is None:
        sol = caustic_for_3_periodic(e)
    return central_difference(lambda t: _incenter_at(e, sol, t)[0], 0.0, h)


def inradius_derivative(e: Ellipse, h: float = FD_STEP, sol: CausticSolution | None = None) -> float:
    if sol is None:
        sol = caustic_for_3_periodic(e)
    return central_difference(lambda t: inradius(orbit_from_vertex(e, sol, t)), 0.0, h)


def inradius_asymmetry(e: Ellipse, delta: float, sol: CausticSolution | None = None) -> float:
    """``r(delta) - r(-delta)``; zero because the inradius is even in the launch angle."""
    if sol is None:
        sol = caustic_for_3_periodic(e)
    return inradius(orbit_from_vertex(e, sol, delta)) - inradius(orbit_from_vertex(e, sol, -delta))


@dataclass(frozen=True)
class FociCurveSample:
    t: float
    d_gamma: float
    d_locus: float


def foci_curve(t_grid, n: int = 360) -> list[FociCurveSample]:
    """Focal distances of the table (a = 1, b = t) and of its incenter ellipse."""
    out = []
    for t in sorted(float(t) for t in t_grid):
        if not 0 < t < 1 - 1e-4:
            raise ValueError(f"ratio {t!r} outside (0, 1 - 1e-4)")
        _, fit = locus_of_incenters(Ellipse(1.0, t), n)
        out.append(FociCurveSample(t, math.sqrt(1.0 - t * t), fit.focal_distance))
    return out
