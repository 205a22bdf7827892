"""Complex reflection of lines and its behaviour near isotropic directions.

Directions through a point are coordinatized on the line at infinity by
``z = (v1 + i v2) / (v1 - i v2)``: the isotropic direction (1, i) sits at 0,
(1, -i) at infinity, and a real direction at angle theta at ``exp(2i theta)``.
In this chart reflection in a line of coordinate ``eps`` is ``z -> eps**2 / z``.

Extended complex numbers are plain Python complex values, with ``INF`` for the
point at infinity.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .conics import (
    ConicError,
    Ellipse,
    HLine,
    HPoint,
    I1,
    I2,
    conic_from_ellipse,
    ellipse_dual,
    join,
    line_conic_intersections,
    meet,
    polar_line,
    projective_distance,
    tangent_lines_from,
)

INF = complex(math.inf, 0.0)


class IsotropicMirrorError(ValueError):
    """Reflection in an isotropic line is multivalued and not computed."""


class PreconditionError(ValueError):
    pass


def is_infinite(z) -> bool:
    if isinstance(z, (complex, float, int)):
        return cmath.isinf(z)
    return bool(getattr(z, "is_infinite", False))


def direction_coord(v) -> complex:
    """Chart coordinate of the direction ``(v1, v2)``."""
    v1, v2 = complex(v[0]), complex(v[1])
    if v1 == 0 and v2 == 0:
        raise ValueError("zero direction vector")
    num = v1 + 1j * v2
    den = v1 - 1j * v2
    if den == 0:
        return INF
    return num / den


def direction_from_coord(z) -> np.ndarray:
    """A direction vector with chart coordinate ``z`` (inverse of direction_coord)."""
    if is_infinite(z):
        return np.array([1.0, -1j])
    return np.array([-1j * (1 + z), 1 - z])


def line_direction_coord(line: HLine) -> complex:
    l, m, _ = line.array
    return direction_coord((-m, l))


def reflect_coord(eps, z):
    """Reflection in a non-isotropic line of coordinate ``eps``: ``z -> eps**2 / z``.

    Works for any number type with ``*`` and ``/``, so exact arithmetic can be
    passed through unchanged.
    """
    if eps == 0 or is_infinite(eps):
        raise IsotropicMirrorError("mirror line is isotropic")
    if z == 0:
        return INF
    if is_infinite(z):
        return 0 * eps
    return eps * eps / z


def reflect_matrix(alpha: float) -> np.ndarray:
    """diag(1, -1) written in the frame of the line at angle ``alpha``."""
    c, s = math.cos(2 * alpha), math.sin(2 * alpha)
    return np.array([[c, s], [s, -c]])


def reflect_euclidean_consistency(trials: int = 1000, seed: int = 42) -> float:
    """Largest gap between the chart formula and matrix reflection over random real lines."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for alpha, theta in rng.uniform(-math.pi, math.pi, size=(trials, 2)):
        d = reflect_matrix(alpha) @ np.array([math.cos(theta), math.sin(theta)])
        via_matrix = direction_coord(d)
        via_chart = reflect_coord(cmath.exp(2j * alpha), cmath.exp(2j * theta))
        worst = max(worst, abs(via_matrix - via_chart))
    return worst


def isotropic_limit_behavior(z, eps_seq):
    """Images of direction ``z`` as the mirror coordinate ``eps`` goes to 0.

    Returns ``(images, slope)`` where ``slope`` is the fitted log-log slope of
    ``|image|`` against ``|eps|``.
    """
    if z == 0 or is_infinite(z):
        raise ValueError("z must be non-isotropic")
    eps_seq = list(eps_seq)
    images = [reflect_coord(eps, z) for eps in eps_seq]
    slope = float(np.polyfit(np.log([abs(e) for e in eps_seq]),
                             np.log([abs(t) for t in images]), 1)[0])
    return images, slope


def isotropic_tangency_parameter(e: Ellipse, which: int = 1) -> complex:
    """Complex boundary parameter where the tangent of ``e`` points to I1 (or I2).

    The tangent direction ``(-a sin t, b cos t)`` is proportional to (1, i)
    when ``tan t = i b / a``; ``which=2`` gives the I2 solution.
    """
    sign = 1 if which == 1 else -1
    return complex(np.arctan(sign * 1j * e.b / e.a))


def complex_boundary_point(e: Ellipse, t: complex) -> np.ndarray:
    return np.array([e.a * cmath.cos(t), e.b * cmath.sin(t)])


def complex_tangent_line(e: Ellipse, t: complex) -> HLine:
    return HLine(cmath.cos(t) / e.a, cmath.sin(t) / e.b, -1.0)


@dataclass
class IsotropicTangents:
    table_lines: dict
    caustic_lines: dict
    match_error: float
    foci_error: float
    intersections: list = field(default_factory=list)


def _match_error(lines_a, lines_b) -> float:
    # greedy is exact here: the four lines are pairwise far apart
    remaining = list(lines_b)
    worst = 0.0
    for la in lines_a:
        dists = [projective_distance(la.array, lb.array) for lb in remaining]
        k = int(np.argmin(dists))
        worst = max(worst, dists[k])
        remaining.pop(k)
    return worst


def common_isotropic_tangents(table: Ellipse, caustic: Ellipse, tol: float = 1e-12) -> IsotropicTangents:
    """Isotropic tangents of two confocal ellipses and the real foci they cut out."""
    c2 = table.a**2 - table.b**2
    if abs(c2 - (caustic.a**2 - caustic.b**2)) > tol * max(1.0, c2):
        raise PreconditionError(f"{table} and {caustic} are not confocal")
    if table.is_circle or caustic.is_circle:
        raise PreconditionError("circles have no finite foci pairing")
    lines = {}
    for name, e in (("table", table), ("caustic", caustic)):
        conic = conic_from_ellipse(e)
        lines[name] = {1: tangent_lines_from(conic, I1), 2: tangent_lines_from(conic, I2)}
    flat_t = [ln for k in (1, 2) for ln in lines["table"][k]]
    flat_c = [ln for k in (1, 2) for ln in lines["caustic"][k]]
    match = _match_error(flat_t, flat_c)

    points = [meet(u, v) for u in lines["table"][1] for v in lines["table"][2]]
    c = math.sqrt(c2)
    foci_err = 0.0
    for target in (HPoint.affine(c, 0.0), HPoint.affine(-c, 0.0)):
        foci_err = max(foci_err, min(_affine_distance(p, target) for p in points))
    return IsotropicTangents(lines["table"], lines["caustic"], match, foci_err, points)


def _affine_distance(p: HPoint, q: HPoint) -> float:
    if p.array[2] == 0 or q.array[2] == 0:
        return math.inf
    return float(np.linalg.norm(p.to_affine() - q.to_affine()))


@dataclass
class LimitExperiment:
    epsilons: np.ndarray
    reflected_coords: np.ndarray
    tangent_coords: np.ndarray
    extrapolated_limit: complex
    tangent_angle_exponent: float
    tangency_point: np.ndarray
    limit_line: HLine
    limit_tangency_residual: float
    step_tangency_residuals: np.ndarray

    @property
    def distances_to_limit(self) -> np.ndarray:
        return np.abs(self.reflected_coords - self.extrapolated_limit)


def richardson_sqrt(seq, ratio: float) -> complex:
    """Limit of the last three terms of ``s_k = L + c1 h_k^(1/2) + c2 h_k + ...``.

    ``h_{k+1} = ratio * h_k``; two elimination passes remove the h^(1/2) and h
    terms.
    """
    s = np.asarray(seq[-3:], dtype=complex)
    r = math.sqrt(ratio)
    first = (s[1:] - r * s[:-1]) / (1 - r)
    return complex((first[1] - ratio * first[0]) / (1 - ratio))


def lemma5_limit(table: Ellipse, caustic: Ellipse, eps_seq=None) -> LimitExperiment:
    """Reflect caustic tangents near a common isotropic tangent off the table.

    The family ``A_eps`` is tangent to ``caustic`` at boundary parameter
    ``t_iso + eps``, where ``t_iso`` is the caustic's isotropic tangency.  Each
    ``A_eps`` meets the table near the table's isotropic tangency point, and
    its mirror image in the table tangent there is recorded by chart
    coordinate.
    """
    if eps_seq is None:
        eps_seq = 10.0 ** -np.arange(2, 7)
    eps = np.asarray(eps_seq, dtype=float)
    if np.any(np.diff(eps) >= 0) or eps.min() < 1e-8:
        raise PreconditionError("epsilons must be strictly decreasing and >= 1e-8")
    common_isotropic_tangents(table, caustic)

    t_c = isotropic_tangency_parameter(caustic)
    line_a = complex_tangent_line(caustic, t_c)
    # the table touches the same isotropic line at t_iso or t_iso + pi
    t_g = isotropic_tangency_parameter(table)
    candidates = [t_g, t_g + math.pi]
    t_g = min(candidates, key=lambda t: projective_distance(
        complex_tangent_line(table, t).array, line_a.array))
    if projective_distance(complex_tangent_line(table, t_g).array, line_a.array) > 1e-10:
        raise PreconditionError("no common isotropic tangent found")
    a0 = complex_boundary_point(table, t_g)
    if np.linalg.norm(a0 - complex_boundary_point(caustic, t_c)) <= 1e-6:
        raise PreconditionError("tangency points of the isotropic line coincide")

    table_conic = conic_from_ellipse(table)
    caustic_dual = ellipse_dual(caustic)
    prev = a0
    reflected, tangents, step_res = [], [], []
    for e in eps:
        line = complex_tangent_line(caustic, t_c + e)
        pts = [p.to_affine() for p in line_conic_intersections(line, table_conic)]
        a_eps = min(pts, key=lambda p: np.linalg.norm(p - prev))
        prev = a_eps
        tangent = polar_line(table_conic, HPoint.affine(*a_eps))
        w = line_direction_coord(tangent)
        z = line_direction_coord(line)
        image = reflect_coord(w, z)
        reflected.append(image)
        tangents.append(w)
        image_line = join(HPoint.affine(*a_eps), HPoint(*direction_from_coord(image), 0.0))
        step_res.append(caustic_dual.residual(image_line.array))

    # the tracked intersection must collapse onto a0 like sqrt(eps)
    if np.linalg.norm(prev - a0) > 10.0 * math.sqrt(eps[-1]) * max(table.a, 1.0):
        raise ArithmeticError("continuation lost the intersection branch")
    reflected = np.array(reflected)
    tangents = np.array(tangents)
    ratio = eps[-1] / eps[-2]
    limit = richardson_sqrt(reflected, ratio)
    # the chart coordinate of A itself is 0, so |w| measures the angle between T_eps and A
    exponent = float(np.polyfit(np.log(eps), np.log(np.abs(tangents)), 1)[0])
    limit_line = join(HPoint.affine(*a0), HPoint(*direction_from_coord(limit), 0.0))
    return LimitExperiment(
        epsilons=eps,
        reflected_coords=reflected,
        tangent_coords=tangents,
        extrapolated_limit=limit,
        tangent_angle_exponent=exponent,
        tangency_point=a0,
        limit_line=limit_line,
        limit_tangency_residual=caustic_dual.residual(limit_line.array),
        step_tangency_residuals=np.array(step_res),
    )


__all__ = [
    "INF",
    "ConicError",
    "IsotropicMirrorError",
    "IsotropicTangents",
    "LimitExperiment",
    "PreconditionError",
    "common_isotropic_tangents",
    "direction_coord",
    "direction_from_coord",
    "is_infinite",
    "isotropic_limit_behavior",
    "lemma5_limit",
    "line_direction_coord",
    "reflect_coord",
    "reflect_euclidean_consistency",
    "richardson_sqrt",
]
