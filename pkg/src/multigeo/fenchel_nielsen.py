"""Fenchel-Nielsen coordinates of square-tiled orbits, fractional twists,
half twists of tilings and trace triples of one-holed torus groups.

Twists are measured in units of a full Dehn twist.  Exact increments are
kept as ``fractions.Fraction``; unknown twists are the ``UNCOMPUTED``
marker.
"""
import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np
from scipy import optimize

from . import fuchsian as fx
from . import hyperbolic_core as hc
from . import tiling as tl
from .equiquadrangle import QuadrangleSpec, build_generators, l_prime
from .errors import (AngleConditionViolated, DomainError, MissingMarkers, NoSolution,
                     NotApplicable, NotBalanced)

log = logging.getLogger(__name__)


class _Uncomputed:
    def __repr__(self):
        return "UNCOMPUTED"

    def __add__(self, other):
        return self

    __radd__ = __add__


UNCOMPUTED = _Uncomputed()


def _exact(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float) and x.is_integer():
        return Fraction(int(x))
    return x


@dataclass(frozen=True)
class FNCoordinates:
    """Ordered (length, twist) pairs with cylinder markers.

    ``widths[k]`` is the cylinder width of entry k or None for other curves;
    ``direction`` says which cylinder decomposition the markers refer to.
    """

    pairs: tuple
    widths: tuple
    direction: str = "horizontal"
    names: tuple = ()

    @property
    def lengths(self):
        return tuple(p[0] for p in self.pairs)

    @property
    def twists(self):
        return tuple(p[1] for p in self.pairs)

    def to_json(self):
        def tw(x):
            if x is UNCOMPUTED:
                return "UNCOMPUTED"
            if isinstance(x, _Offset):
                return repr(x)
            if isinstance(x, Fraction):
                return str(x)
            return float(x)
        return {
            "direction": self.direction,
            "entries": [
                {"name": n, "length": float(l), "twist": tw(t), "width": w}
                for n, (l, t), w in zip(self.names or [None] * len(self.pairs), self.pairs, self.widths)
            ],
        }


def gamma3_length(ell):
    """l' with cosh(l'/2) = 2 cosh(l/2) + 1."""
    return 2 * math.acosh(2 * math.cosh(ell / 2) + 1)


CASE_TWISTS = {
    "A": (Fraction(0), Fraction(0), Fraction(0)),
    "B": (Fraction(0), Fraction(0), Fraction(1, 2)),
    "C": (Fraction(1, 2), Fraction(0), Fraction(0)),
    "D": (Fraction(1, 2), Fraction(0), Fraction(1, 2)),
}


def fn_for_family(family, ell, tw=0):
    """Coordinates (l, tw + s1, l, tw, l', s3) of the four genus-two cases.

    l is the length of either width-two cylinder median; the first entry is
    the cylinder whose half twist separates A from C and B from D.
    """
    family = family.upper()
    if family not in CASE_TWISTS:
        raise DomainError(f"unknown case {family!r}")
    if not ell > 0:
        raise DomainError("length must be positive")
    tw = _exact(tw)
    s1, s2, s3 = CASE_TWISTS[family]
    pairs = ((ell, tw + s1), (ell, tw + s2), (gamma3_length(ell), s3))
    return FNCoordinates(pairs, (2, 2, None), "horizontal", ("upper", "lower", "gamma3"))


def case_ell(L):
    """Width-two cylinder length for the half median cosh L."""
    return 2 * math.acosh(2 * L * L - 1)


def fn_for_orbit(t, spec, extra_curves=(), direction="horizontal"):
    """Partial coordinates of the orbit surface with parameters ``spec``.

    Cylinder entries get length n_i l and twist UNCOMPUTED + t/n_i; extra
    curves are words in h, v, r and get their lengths from the group.
    """
    va = tl.vertex_analysis(t)
    g = tl.genus(t)
    if g < 2:
        return FNCoordinates((), (), direction, ())
    if not va["balanced"]:
        raise NotBalanced("the tiling is not balanced")
    if spec.n != va["m"]:
        raise AngleConditionViolated(f"the smooth metric needs n = {va['m']}, got {spec.n}")
    if direction == "horizontal":
        ell = 2 * math.acosh(spec.L)
        cyl = tl.cylinders(tl.horizontal_normal_form(t), "horizontal")
    else:
        ell = 2 * math.acosh(l_prime(spec.L, spec.n))
        cyl = tl.cylinders(t, "vertical")
    shift = _exact(spec.t)
    pairs, widths, names = [], [], []
    for k, c in enumerate(cyl):
        n = len(c)
        pairs.append((n * ell, UNCOMPUTED if shift is UNCOMPUTED else _Offset(shift / n)))
        widths.append(n)
        names.append(f"cylinder{k}")
    for w in extra_curves:
        pairs.append((fx.word_geodesic_length(w, spec), UNCOMPUTED))
        widths.append(None)
        names.append(w if isinstance(w, str) else fx.format_word(w))
    if len(pairs) > 3 * g - 3:
        raise DomainError("more curves than a pants decomposition has")
    return FNCoordinates(tuple(pairs), tuple(widths), direction, tuple(names))


@dataclass(frozen=True)
class _Offset:
    """Twist known only up to an additive unknown: UNCOMPUTED + shift."""

    shift: object

    def __add__(self, other):
        return _Offset(self.shift + other)

    def __repr__(self):
        return f"UNCOMPUTED+{self.shift}"


def twist_shift(x):
    """Known part of a twist entry."""
    return x.shift if isinstance(x, _Offset) else x


def fractional_twist(fn, which="horizontal", inverse=False):
    """Add 1/n_i (or subtract) to every marked twist in the chosen direction."""
    if which not in ("horizontal", "vertical"):
        raise DomainError(f"unknown direction {which!r}")
    if fn.direction != which or not any(w for w in fn.widths):
        raise MissingMarkers(f"no {which} cylinder markers")
    sgn = -1 if inverse else 1
    pairs = tuple(
        (l, tw + Fraction(sgn, w)) if w else (l, tw)
        for (l, tw), w in zip(fn.pairs, fn.widths)
    )
    return replace(fn, pairs=pairs)


# -- half twists of tilings -------------------------------------------------------------

EDGE_START = (0, "T")


def half_twist_tiling(t, along="gamma"):
    """Half Dehn twist of a family-shaped tiling.

    "gamma" and "gamma3" cut along the edge geodesic through the top of the
    first square; "gamma1" and "gamma2" use the medians of the lower and
    upper horizontal cylinders.
    """
    if along in ("gamma", "gamma3"):
        return tl.half_twist_along_edges(t, EDGE_START)
    if along in ("gamma1", "gamma2"):
        if t.arrangement is None:
            raise NotApplicable("an arrangement is needed to locate the cylinders")
        sq = 0 if along == "gamma1" else len(t.arrangement) - 1
        return tl.half_twist_cylinder(t, tl.cylinder_of(t, sq), "horizontal")
    raise NotApplicable(f"unknown curve {along!r}")


def gamma3_measured(case, L):
    """cosh(l/2) and cosh(l'/2) from the group of a case tiling with angle pi/4."""
    t = tl.case_tiling(case)
    spec = QuadrangleSpec(L, 4)
    layout = fx.layout_fundamental_domain(t, spec)
    M3, _ = fx.edge_holonomy(layout, EDGE_START)
    top = tl.cylinder_of(t, len(t.arrangement) - 1)
    M1 = fx.cylinder_holonomy(layout, top)
    def half_cosh(M):
        M = M / np.sqrt(np.linalg.det(M))
        return abs(np.trace(M).real) / 2
    return half_cosh(M1), half_cosh(M3)


# -- trace triples ----------------------------------------------------------------------

@dataclass(frozen=True)
class TraceTriple:
    x2: float
    y2: float
    z2: float

    def as_tuple(self):
        return (self.x2, self.y2, self.z2)


def zero_twist_triple(L, n):
    Lp = l_prime(L, n)
    return TraceTriple(4 * L * L, 4 * Lp * Lp, 4 * L * L * Lp * Lp)


def trace_triple(spec):
    """(tr A)^2, (tr B)^2, (tr A B^-1)^2 from the generator matrices."""
    g = build_generators(spec)
    x = np.trace(g.A)
    y = np.trace(g.B)
    z = np.trace(g.A @ hc.inverse(g.B))
    return TraceTriple(float((x * x).real), float((y * y).real), float((z * z).real))


def fricke_residual(triple, n):
    """x^2 + y^2 + z^2 - xyz - 2 + 2 cos(2 pi / n) for positive traces."""
    x, y, z = (math.sqrt(v) for v in triple.as_tuple())
    return x * x + y * y + z * z - x * y * z - 2 + 2 * math.cos(2 * math.pi / n)


def solve_triple(target, n, L_range=(1.0, 10.0), grid=8):
    """(L, t) candidates whose x^2, y^2 match the target.

    Damped Gauss-Newton runs (scipy least squares, bounded to the search
    box) start from a coarse grid; each candidate
    carries the resulting z^2 and its residual against the target.  The
    best candidate comes first.
    """
    if not (target.x2 > 4 and target.y2 > 4):
        raise DomainError("x^2 and y^2 must exceed 4")

    def resid(p):
        L, t = p
        tt = trace_triple(QuadrangleSpec(L, n, t))
        return [tt.x2 - target.x2, tt.y2 - target.y2]

    lo, hi = L_range[0] + 1e-9, L_range[1]
    found = []
    for L0 in np.linspace(lo + 0.05, hi - 1e-6, grid):
        for t0 in np.linspace(0.0, 0.95, grid):
            sol = optimize.least_squares(resid, [L0, t0], bounds=([lo, 0.0], [hi, 1.0]),
                                         xtol=1e-15, ftol=1e-15, gtol=1e-15)
            L, t = sol.x
            if t >= 1 or max(abs(v) for v in resid(sol.x)) > 1e-9:
                continue
            if any(abs(L - c["L"]) < 1e-7 and abs(t - c["t"]) < 1e-7 for c in found):
                continue
            z2 = trace_triple(QuadrangleSpec(L, n, t)).z2
            found.append({"L": float(L), "t": float(t), "z2": z2, "residual": abs(z2 - target.z2)})
    if not found:
        raise NoSolution("no (L, t) in the search box reproduces x^2 and y^2")
    found.sort(key=lambda c: c["residual"])
    for c in found:
        log.debug("candidate L=%.12g t=%.12g z2=%.12g", c["L"], c["t"], c["z2"])
    return found


TWISTED_TRIPLES = {
    3: [
        ("3+sqrt(7)", "4+sqrt(7)", "5+sqrt(7)"),
        ("3+2*sqrt(2)", "4+2*sqrt(2)", "4+2*sqrt(2)"),
        ("9", "6", "6"),
        ("1+4*cos(2*pi/9)+4*cos(2*pi/9)**2",) * 3,
    ],
    4: [
        ("9", "7", "7"),
        ("4+2*sqrt(3)",) * 3,
        ("3/2+sqrt(2)", "4+2*sqrt(2)", "4+2*sqrt(2)"),
        ("3+sqrt(6)", "5+2*sqrt(6)", "6+2*sqrt(6)"),
    ],
    6: [
        ("9", "8", "8"),
        ("7/2+3*sqrt(5)/2", "5+2*sqrt(5)", "5+2*sqrt(5)"),
        ("3+2*sqrt(2)", "6+4*sqrt(2)", "6+4*sqrt(2)"),
        ("7+4*sqrt(3)", "4+2*sqrt(3)", "4+2*sqrt(3)"),
        ("(1+2*cos(pi/9))**2",) * 3,
    ],
}


def tabulated_triple(n, k):
    from .module_solver import parse_expr
    return TraceTriple(*(parse_expr(s) for s in TWISTED_TRIPLES[n][k]))
