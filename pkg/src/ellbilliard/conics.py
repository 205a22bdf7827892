"""Real and complex conics in homogeneous coordinates.

A conic ``A x^2 + B xy + C y^2 + D x + E y + F = 0`` is stored by its six
coefficients and converted to the symmetric 3x3 matrix on demand.  Points and
lines are homogeneous complex triples, so points at infinity such as the
isotropic points ``I1 = (1 : i : 0)`` and ``I2 = (1 : -i : 0)`` need no special
handling.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEGENERACY_TOL = 1e-12


class ConicError(ValueError):
    """Raised on degenerate conics, degenerate pencils or invalid shapes."""


@dataclass(frozen=True)
class Ellipse:
    """Axis-aligned ellipse ``x^2/a^2 + y^2/b^2 = 1`` centred at the origin."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.b > 0 and self.a >= self.b):
            raise ConicError(f"need a >= b > 0, got a={self.a!r}, b={self.b!r}")

    @property
    def focal_distance(self) -> float:
        return float(np.sqrt(self.a**2 - self.b**2))

    @property
    def is_circle(self) -> bool:
        return self.a == self.b

    def scaled(self, s: float) -> "Ellipse":
        return Ellipse(s * self.a, s * self.b)


class _Homogeneous:
    """Shared behaviour of homogeneous triples."""

    __slots__ = ("array",)

    def __init__(self, *coords):
        if len(coords) == 1:
            coords = coords[0]
        arr = np.asarray(coords, dtype=complex).reshape(3)
        if not np.any(arr):
            raise ConicError(f"{type(self).__name__} coordinates are all zero")
        self.array = arr

    def __iter__(self):
        return iter(self.array)

    def __getitem__(self, i):
        return self.array[i]

    def __repr__(self):
        return f"{type(self).__name__}({', '.join(_fmt(v) for v in self.array)})"

    def normalized(self) -> np.ndarray:
        return normalize(self.array)

    def is_real(self, tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(self.normalized().imag) <= tol))

    def equals(self, other, tol: float = 1e-10) -> bool:
        """Projective equality up to ``tol`` after normalization."""
        return projective_distance(self.array, other.array) <= tol


class HPoint(_Homogeneous):
    """Point ``(x : y : w)`` of the complex projective plane."""

    @classmethod
    def affine(cls, x, y) -> "HPoint":
        return cls(x, y, 1.0)

    def to_affine(self) -> np.ndarray:
        if self.array[2] == 0:
            raise ConicError("point at infinity has no affine coordinates")
        return self.array[:2] / self.array[2]


class HLine(_Homogeneous):
    """Line ``l x + m y + n w = 0``."""

    def contains(self, p: HPoint, tol: float = 1e-12) -> bool:
        return incidence(self, p) <= tol

    def is_isotropic(self, tol: float = 1e-12) -> bool:
        l, m, _ = self.normalized()
        return abs(l) + abs(m) > tol and abs(l * l + m * m) <= tol


I1 = HPoint(1.0, 1j, 0.0)
I2 = HPoint(1.0, -1j, 0.0)


def _fmt(v: complex) -> str:
    if v.imag == 0:
        return f"{v.real:.6g}"
    return f"{v:.6g}"


def normalize(v) -> np.ndarray:
    """Unit Euclidean norm, first non-negligible entry made real positive."""
    v = np.asarray(v, dtype=complex)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ConicError("cannot normalize the zero vector")
    v = v / norm
    # a tiny leading entry would make the phase choice unstable
    k = int(np.argmax(np.abs(v) > 1e-8 * np.max(np.abs(v))))
    return v * (abs(v[k]) / v[k])


def projective_distance(u, v) -> float:
    """Distance between two homogeneous vectors in normalized form.

    Norm of the part of unit ``u`` orthogonal to unit ``v`` (the sine of the
    angle between them): zero iff the two are proportional, independent of
    which entry fixes the phase, and free of the cancellation in
    ``sqrt(1 - cos^2)``.
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    return float(np.linalg.norm(u - v * np.vdot(v, u)))


def incidence(line: HLine, p: HPoint) -> float:
    """Normalized |L . p|, zero iff ``p`` lies on ``line``."""
    l = line.array / np.linalg.norm(line.array)
    q = p.array / np.linalg.norm(p.array)
    return float(abs(l @ q))


def join(p: HPoint, q: HPoint) -> HLine:
    return HLine(np.cross(p.array, q.array))


def meet(l1: HLine, l2: HLine) -> HPoint:
    return HPoint(np.cross(l1.array, l2.array))


@dataclass(frozen=True)
class ConicCoeffs:
    """Coefficients of ``A x^2 + B xy + C y^2 + D x + E y + F = 0``.

    The same container holds dual conics, read in line coordinates
    ``(l, m, n)`` instead of ``(x, y, w)``.
    """

    A: complex
    B: complex
    C: complex
    D: complex
    E: complex
    F: complex

    def __post_init__(self):
        if not any(self.as_vector()):
            raise ConicError("all conic coefficients are zero")

    def as_vector(self) -> np.ndarray:
        v = np.array([self.A, self.B, self.C, self.D, self.E, self.F])
        return v if np.iscomplexobj(v) and np.any(v.imag) else v.real.astype(float)

    @property
    def matrix(self) -> np.ndarray:
        A, B, C, D, E, F = self.as_vector()
        return np.array([[A, B / 2, D / 2], [B / 2, C, E / 2], [D / 2, E / 2, F]])

    @classmethod
    def from_matrix(cls, M) -> "ConicCoeffs":
        M = np.asarray(M)
        M = (M + M.T) / 2
        return cls(M[0, 0], 2 * M[0, 1], M[1, 1], 2 * M[0, 2], 2 * M[1, 2], M[2, 2])

    @classmethod
    def from_vector(cls, v) -> "ConicCoeffs":
        return cls(*v)

    def evaluate(self, p) -> complex:
        """``p^T M p`` for a homogeneous point (HPoint or length-3 sequence)."""
        q = p.array if isinstance(p, _Homogeneous) else np.asarray(p)
        return q @ self.matrix @ q

    def residual(self, p) -> float:
        """Scale-free evaluation of ``p`` against the conic."""
        q = p.array if isinstance(p, _Homogeneous) else np.asarray(p)
        M = self.matrix
        return float(abs(q @ M @ q) / (np.linalg.norm(M) * np.linalg.norm(q) ** 2))

    def is_degenerate(self, tol: float = DEGENERACY_TOL) -> bool:
        M = self.matrix
        return bool(abs(np.linalg.det(M)) < tol * np.linalg.norm(M) ** 3)

    def equals(self, other: "ConicCoeffs", tol: float = 1e-10) -> bool:
        return projective_distance(self.as_vector(), other.as_vector()) <= tol


def conic_from_ellipse(e: Ellipse) -> ConicCoeffs:
    return ConicCoeffs(1.0 / e.a**2, 0.0, 1.0 / e.b**2, 0.0, 0.0, -1.0)


def ellipse_dual(e: Ellipse) -> ConicCoeffs:
    """Tangential equation ``a^2 l^2 + b^2 m^2 - n^2 = 0`` of an axis-aligned ellipse."""
    return ConicCoeffs(e.a**2, 0.0, e.b**2, 0.0, 0.0, -1.0)


def confocal_conic(e: Ellipse, lam: float) -> Ellipse:
    """Member of the confocal family of ``e`` with squared axes shrunk by ``lam``."""
    if not 0 <= lam < e.b**2:
        raise ConicError(f"confocal parameter {lam!r} outside [0, b^2) = [0, {e.b**2!r})")
    return Ellipse(float(np.sqrt(e.a**2 - lam)), float(np.sqrt(e.b**2 - lam)))


def polar_line(c: ConicCoeffs, p: HPoint) -> HLine:
    """Polar of ``p``; the tangent line when ``p`` lies on ``c``."""
    out = c.matrix @ p.array
    if np.linalg.norm(out) <= 1e-14 * np.linalg.norm(c.matrix) * np.linalg.norm(p.array):
        raise ConicError(f"{p!r} lies in the kernel of the conic matrix")
    return HLine(out)


def adjugate3(M) -> np.ndarray:
    """Adjugate of a 3x3 matrix from cofactors (no inversion, works over C)."""
    M = np.asarray(M)
    cof = np.empty((3, 3), dtype=np.result_type(M, float))
    for i in range(3):
        for j in range(3):
            r = [k for k in range(3) if k != i]
            s = [k for k in range(3) if k != j]
            minor = M[r[0], s[0]] * M[r[1], s[1]] - M[r[0], s[1]] * M[r[1], s[0]]
            cof[i, j] = (-1) ** (i + j) * minor
    return cof.T


def dual_conic(c: ConicCoeffs) -> ConicCoeffs:
    """Tangential equation of ``c``: ``L`` is tangent iff ``L^T adj(M) L = 0``."""
    if c.is_degenerate():
        raise ConicError("dual of a degenerate conic is not defined")
    return ConicCoeffs.from_matrix(adjugate3(c.matrix))


def dual_residual(c: ConicCoeffs, line: HLine, dual: ConicCoeffs | None = None) -> float:
    """Normalized tangency residual of ``line`` against ``c``."""
    if dual is None:
        dual = dual_conic(c)
    return dual.residual(line.array)


def _pencil_basis(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Two independent vectors orthogonal (bilinearly) to v, built from v x e_j
    # for the coordinate axes j that avoid the dominant entry of v.
    k = int(np.argmax(np.abs(v)))
    axes = [j for j in range(3) if j != k]
    e = np.eye(3)
    return np.cross(v, e[axes[0]]), np.cross(v, e[axes[1]])


def _solve_binary_quadratic(g11, g12, g22, allow_double: bool, ref: float = 1.0):
    """Roots ``(s, t)`` of ``g11 s^2 + 2 g12 s t + g22 t^2 = 0``.

    Both homogeneous root representations are formed and the one with the
    larger norm is kept, which avoids cancellation for either ordering.
    """
    scale = max(abs(g11), abs(g12), abs(g22))
    if scale <= 1e-14 * ref:
        raise ConicError("quadratic form vanishes identically on the pencil")
    g11, g12, g22 = g11 / scale, g12 / scale, g22 / scale
    disc = complex(g12 * g12 - g11 * g22)
    if abs(disc) <= 1e-14 and not allow_double:
        raise ConicError("coincident roots: the pencil is tangent")
    sq = np.sqrt(disc)
    roots = []
    for sgn in (1, -1):
        r1 = np.array([-g12 + sgn * sq, g11])
        r2 = np.array([g22, -g12 - sgn * sq])
        roots.append(r1 if np.linalg.norm(r1) >= np.linalg.norm(r2) else r2)
    return roots


def tangent_lines_from(c: ConicCoeffs, p: HPoint) -> tuple[HLine, HLine]:
    """The two tangents to ``c`` through ``p`` (complex lines allowed)."""
    dual = dual_conic(c).matrix
    u, v = _pencil_basis(p.array)
    g11 = u @ dual @ u
    g12 = u @ dual @ v
    g22 = v @ dual @ v
    ref = np.linalg.norm(dual) * np.linalg.norm(u) * np.linalg.norm(v)
    (s1, t1), (s2, t2) = _solve_binary_quadratic(g11, g12, g22, False, ref)
    return HLine(s1 * u + t1 * v), HLine(s2 * u + t2 * v)


def line_conic_intersections(line: HLine, c: ConicCoeffs) -> tuple[HPoint, HPoint]:
    """Intersections of ``line`` with ``c``; a tangent line gives a doubled point."""
    M = c.matrix
    u, v = _pencil_basis(line.array)
    g11 = u @ M @ u
    g12 = u @ M @ v
    g22 = v @ M @ v
    try:
        ref = np.linalg.norm(M) * np.linalg.norm(u) * np.linalg.norm(v)
        (s1, t1), (s2, t2) = _solve_binary_quadratic(g11, g12, g22, True, ref)
    except ConicError as err:
        raise ConicError("line is contained in the (degenerate) conic") from err
    return HPoint(s1 * u + t1 * v), HPoint(s2 * u + t2 * v)
