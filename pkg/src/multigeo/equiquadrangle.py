"""Generators and vertex geometry of equiangular hyperbolic quadrangles.

A quadrangle is described by ``L`` (cosh of half the length of the
horizontal median), the angle denominator ``n`` (each interior angle is
pi/n, or zero for ideal vertices, written ``n=None``) and an optional twist
``t`` along the axis of A.

The base quadrangle has its horizontal median on the real diameter and its
vertical median on the imaginary diameter.  Side midpoints p1..p4 sit on
the positive real, positive imaginary, negative real and negative
imaginary axes; vertices q1..q4 are numbered counterclockwise from the
first quadrant.
"""
from dataclasses import dataclass, field

import numpy as np

from . import hyperbolic_core as hc
from .errors import ImaginaryLPrime, NoIntersection, UnsupportedCase, WrongAngle

ZERO = None


@dataclass(frozen=True)
class QuadrangleSpec:
    L: float
    n: int | None = 4
    t: float = 0.0

    def __post_init__(self):
        if not self.L > 1:
            raise ImaginaryLPrime(f"L = {self.L} must exceed 1")
        if self.n is not None and self.n < 3:
            raise ImaginaryLPrime("angle denominator must be at least 3")

    @property
    def angle(self):
        return 0.0 if self.n is None else np.pi / self.n


def l_prime(L, n):
    """L' of the vertical median; ``n=None`` is the zero-angle case."""
    if L <= 1:
        raise ImaginaryLPrime(f"L = {L} must exceed 1")
    c2 = 1.0 if n is None else np.cos(np.pi / n) ** 2
    val = (c2 + L * L - 1) / (L * L - 1)
    if val <= 1:
        raise ImaginaryLPrime(f"L' is not real for L = {L}, n = {n}")
    return float(np.sqrt(val))


def twist_factor(L, t):
    """Tw = cosh(t arccosh L) together with the signed sinh(t arccosh L)."""
    a = t * np.arccosh(L)
    return float(np.cosh(a)), float(np.sinh(a))


def translation_matrix(L):
    """Hyperbolic map along the real diameter with trace 2L."""
    s = np.sqrt(L * L - 1)
    return np.array([[L, s], [s, L]], dtype=complex)


def vertical_matrix(Lp):
    """Hyperbolic map along the imaginary diameter with trace 2L'."""
    s = np.sqrt(Lp * Lp - 1)
    return np.array([[Lp, 1j * s], [-1j * s, Lp]], dtype=complex)


def twist_matrix(L, t):
    """Translation along the real diameter by t times the translation of A."""
    ch, sh = twist_factor(L, t)
    return np.array([[ch, sh], [sh, ch]], dtype=complex)


E1_BASE = np.array([[1j, 0], [0, -1j]])


@dataclass(frozen=True)
class GeneratorPair:
    A: np.ndarray
    B: np.ndarray
    T: np.ndarray = field(default_factory=lambda: np.eye(2, dtype=complex))
    e1: np.ndarray = field(default_factory=lambda: E1_BASE.copy())
    B0: np.ndarray | None = None

    @property
    def B1(self):
        return self.B


def build_generators(spec):
    """A, B (twisted to T.B when t != 0), T and the center involution e1.

    ``B0`` keeps the untwisted vertical generator.
    """
    L = spec.L
    Lp = l_prime(L, spec.n)
    A = translation_matrix(L)
    B0 = vertical_matrix(Lp)
    T = twist_matrix(L, spec.t)
    # half of T, used to move the center involution to the sheared domain
    T_half = twist_matrix(L, spec.t / 2)
    e1 = T_half @ E1_BASE @ hc.inverse(T_half)
    return GeneratorPair(A=A, B=T @ B0, T=T, e1=e1, B0=B0)


def square_L(n):
    """L of the square equiquadrangle; forces L' = L."""
    c = 1.0 if n is None else np.cos(np.pi / n)
    return float(np.sqrt(c + 1))


def hexagonal_L(n):
    c = 1.0 if n is None else np.cos(2 * np.pi / (3 * n))
    return 0.5 + c


def special_generators(case, n):
    """Generators of the square, hexagonal and half-period quadrangles.

    ``case`` is one of "square", "hexagonal" or "half"; ``n=None`` is the
    zero angle.
    """
    if case == "square":
        return build_generators(QuadrangleSpec(square_L(n), n))
    if case == "hexagonal":
        c = 1.0 if n is None else np.cos(2 * np.pi / (3 * n))
        L = 0.5 + c
        theta = np.arccos((2 * c + 1) / (2 * c + 3))
        A = translation_matrix(L)
        R = np.diag([np.exp(0.5j * theta), np.exp(-0.5j * theta)])
        return GeneratorPair(A=A, B=R @ A @ hc.inverse(R))
    if case == "half":
        if n is None:
            raise UnsupportedCase("the half-period case needs a finite angle")
        L = square_L(n)
        beta = np.arcsin(1 / np.sqrt(L * L + 1))
        s2 = np.sqrt(L ** 4 - 1)
        s1 = np.sqrt(L * L - 1)
        A = np.array([[L * L, s2], [s2, L * L]], dtype=complex)
        B = np.array([[L, np.exp(1j * beta) * s1], [np.exp(-1j * beta) * s1, L]], dtype=complex)
        return GeneratorPair(A=A, B=B)
    raise UnsupportedCase(f"unknown special case {case!r}")


@dataclass(frozen=True)
class QuadrangleGeometry:
    """Midpoints p1..p4 and vertices q1..q4 (twisted images where relevant).

    Vertices follow the layout convention: q1 upper right, q2 upper left,
    q3 lower left, q4 lower right.  For t != 0 the upper side is the image
    under T of the untwisted upper side.
    """

    p: tuple
    q: tuple
    spec: QuadrangleSpec

    @property
    def corners(self):
        """Corner points keyed by BL, BR, TR, TL."""
        return {"TR": self.q[0], "TL": self.q[1], "BL": self.q[2], "BR": self.q[3]}

    def edges(self):
        c = self.corners
        return {
            "bottom": hc.geodesic_through(c["BL"], c["BR"]),
            "right": hc.geodesic_through(c["BR"], c["TR"]),
            "top": hc.geodesic_through(c["TR"], c["TL"]),
            "left": hc.geodesic_through(c["TL"], c["BL"]),
        }

    def center(self):
        """Center of the half-turn symmetry of the (possibly sheared) domain."""
        T_half = twist_matrix(self.spec.L, self.spec.t / 2)
        return complex(hc.apply(T_half, 0))


def _base_vertex(L, Lp, n):
    x = np.tanh(np.arccosh(L) / 2)
    y = np.tanh(np.arccosh(Lp) / 2)
    if n is None:
        # ideal vertex: the side geodesic through x ends at angle phi with cos(phi) = 2x/(1+x^2)
        phi = np.arccos(2 * x / (1 + x * x))
        return complex(np.exp(1j * phi))
    c1, r1 = hc.orthogonal_geodesic_center(x)
    c2, r2 = hc.orthogonal_geodesic_center(1j * y)
    pts = [z for z in hc.circle_intersections(c1, r1, c2, r2) if abs(z) < 1]
    if not pts:
        raise NoIntersection("the side geodesics do not meet inside the disk")
    return complex(pts[0])


def vertex_geometry(spec):
    L = spec.L
    Lp = l_prime(L, spec.n)
    x = np.tanh(np.arccosh(L) / 2)
    y = np.tanh(np.arccosh(Lp) / 2)
    q1 = _base_vertex(L, Lp, spec.n)
    q = [q1, -np.conj(q1), -q1, np.conj(q1)]
    p = [complex(x), 1j * y, complex(-x), -1j * y]
    if spec.t != 0:
        T = twist_matrix(L, spec.t)
        q[0] = complex(hc.apply(T, q[0]))
        q[1] = complex(hc.apply(T, q[1]))
        p[1] = complex(hc.apply(T, p[1]))
    return QuadrangleGeometry(p=tuple(p), q=tuple(q), spec=spec)


def interior_angles(geom):
    """Interior angles at TR, TL, BL, BR (zero at ideal vertices)."""
    c = geom.corners
    out = {}
    nbrs = {"TR": ("BR", "TL"), "TL": ("TR", "BL"), "BL": ("TL", "BR"), "BR": ("BL", "TR")}
    for k, (a, b) in nbrs.items():
        if abs(c[k]) >= 1 - 1e-12:
            out[k] = 0.0
        else:
            out[k] = hc.angle_at(c[k], c[a], c[b])
    return out


def side_half_length(spec):
    """Hyperbolic length from the midpoint of the upper side to a vertex.

    cosh of this length is L / sin(pi/n); the full upper side is twice it.
    """
    if spec.n is None:
        return np.inf
    return float(np.arccosh(spec.L / np.sin(np.pi / spec.n)))


def lambert_lengths(spec):
    """Length relations of the right-angled quadrangle for angle pi/4.

    Returns the cosh values L1..L4 of the untwisted domain and L2', L4' of
    the twisted one, together with the measured half side length.
    """
    if spec.n != 4:
        raise WrongAngle("the relations hold for angle pi/4 only")
    L = spec.L
    Tw, _ = twist_factor(L, spec.t)
    L1 = 2 * L * L - 1
    L2 = (L1 + 1) / (L1 - 1)
    L3 = 2 * L1 + 1
    L4 = 2 * L2 + 1
    L2t = Tw * Tw * (L2 + 1) - 1
    L4t = 2 * L2t + 1
    return {
        "L1": L1,
        "L2": L2,
        "L3": L3,
        "L4": L4,
        "L2_twisted": L2t,
        "L4_twisted": L4t,
        "side_half_length": side_half_length(spec),
    }


def measured_lambert_lengths(spec):
    """The same cosh values measured from vertex positions."""
    base = vertex_geometry(QuadrangleSpec(spec.L, spec.n, 0.0))
    tw = vertex_geometry(spec)
    p1, p2, p3, p4 = base.p
    q1, q2, q3, q4 = base.q
    return {
        "L1": hc.cosh_distance(p1, p3),
        "L2": hc.cosh_distance(p2, p4),
        "L3": hc.cosh_distance(q1, q2),
        "L4": hc.cosh_distance(q1, q4),
        "L2_twisted": hc.cosh_distance(p4, tw.p[1]),
        "L4_twisted": hc.cosh_distance(q4, tw.q[0]),
        "side_half_length": hc.disk_distance(p2, q1),
    }
