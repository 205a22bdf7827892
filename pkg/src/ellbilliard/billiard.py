"""Real billiard dynamics inside an ellipse and its 3-periodic Poncelet family."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .conics import (
    Ellipse,
    HPoint,
    confocal_conic,
    ellipse_dual,
    join,
)

TWO_PI = 2.0 * math.pi
BRANCH_TIE_TOL = 1e-8
SCAN_POINTS = 64
BISECTION_WIDTH = 1e-14
PORISM_CHECKS = 32


class BilliardError(RuntimeError):
    """Raised when a billiard construction fails or violates an invariant."""


def wrap_angle(x: float) -> float:
    """Wrap to the half-open interval (-pi, pi]."""
    y = math.remainder(x, TWO_PI)
    return math.pi if y == -math.pi else y


def boundary_point(e: Ellipse, theta: float) -> np.ndarray:
    return np.array([e.a * math.cos(theta), e.b * math.sin(theta)])


def boundary_parameter(e: Ellipse, p) -> float:
    """Parameter in [0, 2pi) of a point on ``e``."""
    return math.atan2(p[1] / e.b, p[0] / e.a) % TWO_PI


def boundary_tangent(e: Ellipse, theta: float) -> np.ndarray:
    t = np.array([-e.a * math.sin(theta), e.b * math.cos(theta)])
    return t / np.hypot(*t)


def reflect_direction(d, t) -> np.ndarray:
    """Mirror ``d`` in the line spanned by the unit tangent ``t``."""
    d = np.asarray(d, dtype=float)
    t = np.asarray(t, dtype=float)
    return 2.0 * np.dot(d, t) * t - d


def _angle_between(u, v) -> float:
    return abs(math.atan2(u[0] * v[1] - u[1] * v[0], u[0] * v[0] + u[1] * v[1]))


def caustic_tangency_points(caustic: Ellipse, p) -> tuple[np.ndarray, np.ndarray]:
    """Contact points of the two real tangents from an exterior point ``p``.

    On the polar of ``p`` the contact parameter solves
    ``(px/a) cos(phi) + (py/b) sin(phi) = 1``.
    """
    u = p[0] / caustic.a
    v = p[1] / caustic.b
    R = math.hypot(u, v)
    if R <= 1.0:
        raise BilliardError(f"point {tuple(p)} is not exterior to the caustic")
    psi = math.atan2(v, u)
    half = math.acos(1.0 / R)
    return boundary_point(caustic, psi + half), boundary_point(caustic, psi - half)


def _second_intersection(e: Ellipse, p, d) -> np.ndarray:
    # p + s d on the ellipse: s (s q + 2 l) = 0 once the known root s = 0 is divided out
    q = (d[0] / e.a) ** 2 + (d[1] / e.b) ** 2
    l = p[0] * d[0] / e.a**2 + p[1] * d[1] / e.b**2
    return p - (2.0 * l / q) * d


def next_chord(e: Ellipse, caustic: Ellipse, p, incoming_tangency=None, branch: int = 0):
    """Chord from ``p`` tangent to ``caustic``.

    Without ``incoming_tangency`` the tangent is picked by ``branch``
    (0 = counter-clockwise start, 1 = clockwise).  Otherwise the tangent whose
    contact point differs from ``incoming_tangency`` is used.

    Returns ``(q, side, tangency)``.
    """
    p = np.asarray(p, dtype=float)
    t_first, t_second = caustic_tangency_points(caustic, p)
    if incoming_tangency is None:
        tangency = (t_first, t_second)[branch]
    else:
        d1 = np.hypot(*(t_first - incoming_tangency))
        d2 = np.hypot(*(t_second - incoming_tangency))
        if abs(d1 - d2) <= BRANCH_TIE_TOL:
            raise BilliardError("cannot tell the incoming tangent from the outgoing one")
        tangency = t_second if d1 < d2 else t_first
    d = tangency - p
    d /= np.hypot(*d)
    q = _second_intersection(e, p, d)
    side = join(HPoint.affine(*p), HPoint.affine(*q))
    return q, side, tangency


def _walk(e: Ellipse, caustic: Ellipse, theta0: float, steps: int, branch: int = 0):
    """Consecutive caustic-tangent chords from ``boundary_point(e, theta0)``."""
    p = boundary_point(e, theta0)
    pts, sides, tangencies = [p], [], []
    tangency = None
    for k in range(steps):
        p, side, tangency = next_chord(e, caustic, p, tangency, branch)
        pts.append(p)
        sides.append(side)
        tangencies.append(tangency)
    return pts, sides, tangencies


def _caustic_from_minor(e: Ellipse, mu: float) -> Ellipse:
    # confocal member with minor semi-axis mu; avoids forming b^2 - lam
    mu = float(mu)
    return Ellipse(math.sqrt(e.a**2 - e.b**2 + mu * mu), mu)


def _advance(e: Ellipse, caustic: Ellipse, theta0: float) -> float:
    """Unwrapped parameter advance after three counter-clockwise chords."""
    pts, _, _ = _walk(e, caustic, theta0, 3)
    total, prev = 0.0, theta0
    for p in pts[1:]:
        th = boundary_parameter(e, p)
        total += (th - prev) % TWO_PI
        prev = th
    return total


def closure_defect(e: Ellipse, lam: float, theta0: float) -> float:
    """Signed mismatch, wrapped to (-pi, pi], between the third endpoint and ``theta0``."""
    if not 0 < lam < e.b**2:
        raise BilliardError(f"confocal parameter {lam!r} outside (0, b^2)")
    return wrap_angle(_advance(e, confocal_conic(e, lam), theta0))


@dataclass(frozen=True)
class CausticSolution:
    lambda_star: float
    caustic: Ellipse
    defect_at_solution: float
    bracket: tuple[float, float]
    iterations: int
    porism_defect: float = 0.0


def caustic_for_3_periodic(e: Ellipse) -> CausticSolution:
    """Confocal caustic of the 3-periodic orbits by bracketing and bisection.

    The unwrapped three-chord advance grows from 0 to 3pi as the caustic
    shrinks, so ``advance - 2pi`` has a single continuous sign change; the
    wrapped defect also jumps at advance = pi, which is why the scan uses the
    unwrapped quantity.
    """
    b2 = e.b**2
    if e.is_circle:
        lam = 0.75 * e.a**2
        return CausticSolution(lam, confocal_conic(e, lam), closure_defect(e, lam, 0.0),
                               (lam, lam), 0, 0.0)

    def f(mu):
        return _advance(e, _caustic_from_minor(e, mu), 0.0) - TWO_PI

    margin = 1e-6 * b2
    lams = np.linspace(margin, b2 - margin, SCAN_POINTS)
    mus = list(np.sqrt(b2 - lams))
    values = [f(mu) for mu in mus]
    # very flat tables put the root inside the last grid cell; extend geometrically in mu
    extension = iter(mus[-1] * np.logspace(-1, -8, 8))
    k = 0
    while True:
        if k == len(mus) - 1:
            mu = next(extension, None)
            if mu is None:
                raise BilliardError(f"no sign change of the closure defect for {e}")
            mus.append(mu)
            values.append(f(mu))
        if values[k] == 0.0 or (values[k] < 0.0) != (values[k + 1] < 0.0):
            break
        k += 1
    bracket = (float(b2 - mus[k] ** 2), float(b2 - mus[k + 1] ** 2))
    # bisect on the caustic minor semi-axis: d(defect)/d(lam) blows up as lam -> b^2
    hi, lo = mus[k], mus[k + 1]
    flo = values[k + 1]
    it = 0
    while hi - lo > BISECTION_WIDTH * hi:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fm = f(mid)
        it += 1
        if fm == 0.0:
            lo = hi = mid
        elif (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    mu = lo if abs(flo) <= abs(f(hi)) else hi
    caustic = _caustic_from_minor(e, mu)
    lam = b2 - mu * mu
    defect = wrap_angle(_advance(e, caustic, 0.0))
    porism = max(abs(wrap_angle(_advance(e, caustic, th)))
                 for th in TWO_PI * (np.arange(PORISM_CHECKS) + 0.5) / PORISM_CHECKS)
    if abs(defect) >= 1e-12 or porism >= 1e-9:
        raise BilliardError(f"caustic solve did not converge: defect={defect:.3e}, "
                            f"porism spot-check={porism:.3e}")
    return CausticSolution(lam, caustic, defect, bracket, it, porism)


@dataclass
class Orbit:
    """Closed triangular orbit, vertices in order of travel."""

    vertices: np.ndarray
    thetas: np.ndarray
    sides: list
    tangency_points: np.ndarray
    caustic: Ellipse
    table: Ellipse
    closure_residual: float = 0.0
    side_lengths: np.ndarray = field(init=False)

    def __post_init__(self):
        v = self.vertices
        # side k joins vertex k to vertex k+1
        self.side_lengths = np.array([np.hypot(*(v[(k + 1) % 3] - v[k])) for k in range(3)])

    @property
    def perimeter(self) -> float:
        return float(self.side_lengths.sum())

    def boundary_residual(self) -> float:
        c = self.table
        return float(max(abs((x / c.a) ** 2 + (y / c.b) ** 2 - 1.0) for x, y in self.vertices))

    def reflection_residuals(self) -> np.ndarray:
        """Angle mismatch (radians) between mirrored incoming and outgoing rays."""
        v = self.vertices
        out = []
        for k in range(3):
            d_in = v[k] - v[k - 1]
            d_out = v[(k + 1) % 3] - v[k]
            d_in /= np.hypot(*d_in)
            d_out /= np.hypot(*d_out)
            t = boundary_tangent(self.table, self.thetas[k])
            out.append(_angle_between(reflect_direction(d_in, t), d_out))
        return np.array(out)

    def tangency_residuals(self) -> np.ndarray:
        dual = ellipse_dual(self.caustic)
        return np.array([dual.residual(s.array) for s in self.sides])

    def check(self, tol: float = 1e-9) -> None:
        problems = []
        if self.boundary_residual() > 1e-10:
            problems.append(f"vertex off the table ({self.boundary_residual():.2e})")
        if self.reflection_residuals().max() >= tol:
            problems.append(f"reflection law ({self.reflection_residuals().max():.2e} rad)")
        if self.tangency_residuals().max() >= tol:
            problems.append(f"caustic tangency ({self.tangency_residuals().max():.2e})")
        if self.closure_residual >= tol:
            problems.append(f"closure ({self.closure_residual:.2e})")
        if problems:
            raise BilliardError("orbit invariant violated: " + "; ".join(problems))


def orbit_from_vertex(e: Ellipse, sol: CausticSolution, theta0: float,
                      branch: str = "first") -> Orbit:
    if branch not in ("first", "second"):
        raise ValueError(f"branch must be 'first' or 'second', got {branch!r}")
    pts, _, tangencies = _walk(e, sol.caustic, theta0, 3, 0 if branch == "first" else 1)
    start = pts[0]
    closure = float(np.hypot(*(pts[3] - start)))
    vertices = np.array(pts[:3])
    thetas = np.array([theta0 % TWO_PI] + [boundary_parameter(e, p) for p in pts[1:3]])
    sides = [join(HPoint.affine(*vertices[k]), HPoint.affine(*vertices[(k + 1) % 3]))
             for k in range(3)]
    orbit = Orbit(vertices, thetas, sides, np.array(tangencies), sol.caustic, e, closure)
    orbit.check()
    return orbit


def orbit_family(e: Ellipse, n: int, sol: CausticSolution | None = None) -> list[Orbit]:
    """``n`` orbits launched at equally spaced boundary parameters ``2 pi k / n``."""
    if n < 3:
        raise ValueError(f"need n >= 3 orbits, got {n}")
    if sol is None:
        sol = caustic_for_3_periodic(e)
    return [orbit_from_vertex(e, sol, TWO_PI * k / n) for k in range(n)]


def perimeter_spread(orbits) -> float:
    per = np.array([o.perimeter for o in orbits])
    return float((per.max() - per.min()) / per.min())


__all__ = [
    "BilliardError",
    "CausticSolution",
    "Orbit",
    "boundary_point",
    "boundary_parameter",
    "boundary_tangent",
    "caustic_for_3_periodic",
    "caustic_tangency_points",
    "closure_defect",
    "next_chord",
    "orbit_family",
    "orbit_from_vertex",
    "perimeter_spread",
    "reflect_direction",
    "wrap_angle",
]
