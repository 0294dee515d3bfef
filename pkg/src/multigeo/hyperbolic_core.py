"""Moebius and anti-Moebius maps of the unit disk, geodesics and distances.

Maps are stored as 2x2 complex numpy arrays with unit determinant.  Points
are plain Python/numpy complex numbers; a point with modulus one (within
``BOUNDARY_TOL``) is treated as an ideal point.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, NonUnitDeterminant, NotHyperbolic, PointOnBoundary

MATRIX_TOL = 1e-10
BOUNDARY_TOL = 1e-12
PARABOLIC_TOL = 1e-10

IDENTITY = np.eye(2, dtype=complex)


def moebius(a, b, c, d, normalize=False):
    """Return the matrix [[a, b], [c, d]] after checking ad - bc = 1."""
    g = np.array([[a, b], [c, d]], dtype=complex)
    det = np.linalg.det(g)
    if normalize:
        if abs(det) < MATRIX_TOL:
            raise NonUnitDeterminant("singular matrix")
        g = g / np.sqrt(det)
    elif abs(det - 1) > MATRIX_TOL:
        raise NonUnitDeterminant(f"determinant {det} differs from 1")
    return g


def check_unit(g, tol=MATRIX_TOL):
    """Raise unless det g = 1; the tolerance scales with |g|^2 to absorb rounding."""
    det = np.linalg.det(g)
    if abs(det - 1) > tol * max(1.0, float(np.max(np.abs(g))) ** 2):
        raise NonUnitDeterminant(f"determinant {det} differs from 1")
    return g


def is_su11(g, tol=MATRIX_TOL):
    """True when g has the form [[a, b], [conj b, conj a]]."""
    return abs(g[1, 0] - np.conj(g[0, 1])) < tol and abs(g[1, 1] - np.conj(g[0, 0])) < tol


def inverse(g):
    return np.array([[g[1, 1], -g[0, 1]], [-g[1, 0], g[0, 0]]], dtype=complex)


def apply(g, z):
    """Action of a Moebius matrix on a complex number or array."""
    z = np.asarray(z, dtype=complex)
    return (g[0, 0] * z + g[0, 1]) / (g[1, 0] * z + g[1, 1])


def product(*maps):
    """Matrix product of Moebius matrices, left to right."""
    out = IDENTITY
    for g in maps:
        out = out @ g
    return out


def power_along_axis(g, s):
    """Real power g**s of a hyperbolic map, taken along its axis.

    For s = 1/2 this is the square root that translates half as far along
    the same axis; its trace is positive.
    """
    if classify_map(g) != "hyperbolic":
        raise NotHyperbolic("power along axis needs a hyperbolic map")
    if g.trace().real < 0:
        g = -g
    vals, vecs = np.linalg.eig(g)
    powered = np.diag(vals.astype(complex) ** s)
    out = vecs @ powered @ np.linalg.inv(vecs)
    return out / np.sqrt(np.linalg.det(out))


def normalized_trace(g):
    """Trace of g with the PSL sign chosen so that the real part is >= 0."""
    tr = complex(g[0, 0] + g[1, 1])
    if tr.real < 0 or (tr.real == 0 and tr.imag < 0):
        tr = -tr
    return tr


def classify_map(g):
    check_unit(g)
    t = abs(normalized_trace(g))
    if abs(t - 2) < PARABOLIC_TOL:
        return "parabolic"
    return "hyperbolic" if t > 2 else "elliptic"


def translation_length(g):
    if classify_map(g) != "hyperbolic":
        raise NotHyperbolic("translation length is defined for hyperbolic maps only")
    return 2 * np.arccosh(abs(normalized_trace(g)) / 2)


def same_map(g, h, tol=MATRIX_TOL):
    """Equality in PSL(2, C): g = h or g = -h entrywise within tol."""
    return np.max(np.abs(g - h)) < tol or np.max(np.abs(g + h)) < tol


@dataclass(frozen=True)
class AntiMoebius:
    """The map z -> inner(conj(z))."""

    inner: np.ndarray

    def __call__(self, z):
        return apply(self.inner, np.conj(np.asarray(z, dtype=complex)))


CONJUGATION = AntiMoebius(IDENTITY)


def compose(f, g):
    """Return f o g for Moebius matrices and AntiMoebius maps in any mix."""
    if isinstance(f, AntiMoebius) and isinstance(g, AntiMoebius):
        return f.inner @ np.conj(g.inner)
    if isinstance(f, AntiMoebius):
        return AntiMoebius(f.inner @ np.conj(g))
    if isinstance(g, AntiMoebius):
        return AntiMoebius(f @ g.inner)
    return f @ g


def same_anti(f, g, tol=MATRIX_TOL):
    if isinstance(f, AntiMoebius) != isinstance(g, AntiMoebius):
        return False
    if isinstance(f, AntiMoebius):
        return same_map(f.inner, g.inner, tol)
    return same_map(f, g, tol)


def _check_inside(*points):
    for z in points:
        if abs(z) >= 1 - BOUNDARY_TOL:
            raise PointOnBoundary(f"{z} is not inside the unit disk")


def cosh_distance(z, w):
    _check_inside(z, w)
    return 1 + 2 * abs(z - w) ** 2 / ((1 - abs(z) ** 2) * (1 - abs(w) ** 2))


def disk_distance(z, w):
    """Hyperbolic distance in the Poincare disk."""
    return float(np.arccosh(max(cosh_distance(z, w), 1.0)))


def to_origin(z):
    """Disk automorphism u -> (u - z)/(1 - conj(z) u) sending z to 0."""
    return np.array([[1, -z], [-np.conj(z), 1]], dtype=complex) / np.sqrt(1 - abs(z) ** 2)


def midpoint(z, w):
    if abs(z - w) < BOUNDARY_TOL:
        raise DegenerateInput("midpoint of a single point")
    _check_inside(z, w)
    phi = to_origin(z)
    u = complex(apply(phi, w))
    r = np.tanh(disk_distance(z, w) / 4)
    return complex(apply(inverse(phi), r * u / abs(u)))


def point_at_distance(z, direction, d):
    """Point at hyperbolic distance d from z along the geodesic towards direction."""
    phi = to_origin(z)
    u = complex(apply(phi, direction))
    return complex(apply(inverse(phi), np.tanh(d / 2) * u / abs(u)))


@dataclass(frozen=True)
class GeodesicArc:
    """Geodesic segment (or full geodesic) of the disk.

    ``kind`` is "diameter" or "circular"; circular arcs lie on the circle
    |z - center| = radius, which meets the unit circle orthogonally.
    """

    kind: str
    start: complex
    end: complex
    center: complex = 0j
    radius: float = float("inf")

    def orthogonality_defect(self):
        if self.kind == "diameter":
            return 0.0
        return abs(abs(self.center) ** 2 - self.radius ** 2 - 1)

    def length(self):
        return disk_distance(self.start, self.end)

    def sample(self, k=32):
        """k points along the arc, including both endpoints."""
        s = np.linspace(0.0, 1.0, k)
        if self.kind == "diameter":
            return self.start + s * (self.end - self.start)
        a0 = np.angle(self.start - self.center)
        a1 = np.angle(self.end - self.center)
        da = (a1 - a0 + np.pi) % (2 * np.pi) - np.pi
        return self.center + self.radius * np.exp(1j * (a0 + s * da))

    def contains(self, z, tol=1e-9):
        """True if z lies on the underlying complete geodesic."""
        if self.kind == "diameter":
            d = self.end - self.start
            return abs((np.conj(d) * z).imag) < tol * max(abs(d), 1.0)
        return abs(abs(z - self.center) - self.radius) < tol


def geodesic_through(z, w):
    """Geodesic arc from z to w; z, w may be ideal points."""
    z, w = complex(z), complex(w)
    if abs(z - w) < BOUNDARY_TOL:
        raise DegenerateInput("geodesic through a single point")
    # the center c of an orthogonal circle through z solves 2 Re(z conj c) = |z|^2 + 1
    m = np.array([[z.real, z.imag], [w.real, w.imag]]) * 2
    rhs = np.array([abs(z) ** 2 + 1, abs(w) ** 2 + 1])
    det = np.linalg.det(m)
    if abs(det) < 1e-12 * max(1.0, np.abs(m).max() ** 2):
        return GeodesicArc("diameter", z, w)
    cx, cy = np.linalg.solve(m, rhs)
    c = complex(cx, cy)
    return GeodesicArc("circular", z, w, c, float(np.sqrt(abs(c) ** 2 - 1)))


def fixed_points(g):
    """The two fixed points of a Moebius map (attracting point first if hyperbolic)."""
    a, b, c, d = g[0, 0], g[0, 1], g[1, 0], g[1, 1]
    if abs(c) < 1e-15:
        pts = [np.inf, b / (d - a)] if abs(d - a) > 1e-15 else [np.inf, np.inf]
        return pts
    disc = np.sqrt((a + d) ** 2 - 4)
    pts = [(a - d + disc) / (2 * c), (a - d - disc) / (2 * c)]
    # attracting fixed point has derivative modulus < 1
    deriv = [abs(1 / (c * p + d) ** 2) for p in pts]
    if deriv[0] > deriv[1]:
        pts = pts[::-1]
    return [complex(p) for p in pts]


def axis_of(g):
    """Axis of a hyperbolic map, from repelling to attracting fixed point."""
    if classify_map(g) != "hyperbolic":
        raise NotHyperbolic("only hyperbolic maps have an axis")
    att, rep = fixed_points(g)
    return geodesic_through(rep, att)


def image_of_arc(g, arc):
    """Image of a geodesic arc under a Moebius or anti-Moebius map."""
    f = g if isinstance(g, AntiMoebius) else (lambda z: apply(g, z))
    return geodesic_through(complex(f(arc.start)), complex(f(arc.end)))


def angle_at(q, a, b):
    """Interior angle at q between the geodesics from q to a and from q to b."""
    phi = to_origin(q)
    ua = complex(apply(phi, a))
    ub = complex(apply(phi, b))
    return float(abs(np.angle(ub / ua)))


def orthogonal_geodesic_center(x):
    """Center and radius of the geodesic orthogonal to the diameter through x at x.

    x must be a nonzero interior point; the circle center lies on the ray
    through x beyond the unit circle.
    """
    r = abs(x)
    u = x / r
    return u * (1 + r * r) / (2 * r), (1 - r * r) / (2 * r)


def circle_intersections(c1, r1, c2, r2):
    """Intersection points of two circles in the plane."""
    d = abs(c2 - c1)
    if d > r1 + r2 or d < abs(r1 - r2) or d == 0:
        return []
    a = (r1 * r1 - r2 * r2 + d * d) / (2 * d)
    h = np.sqrt(max(r1 * r1 - a * a, 0.0))
    u = (c2 - c1) / d
    base = c1 + a * u
    return [base + 1j * h * u, base - 1j * h * u]
