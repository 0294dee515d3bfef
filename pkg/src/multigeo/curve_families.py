"""Hyperelliptic equations of the staircase and escalator families and of the
four balanced genus-two cases, with their parameter transformations.

Polynomials are numpy coefficient arrays, highest degree first.  All
identities are checked numerically through residuals.
"""
import cmath
import math
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import BadParity, DegenerateParameter, DomainError, InvalidTiling

SQUAREFREE_TOL = 1e-9


@dataclass(frozen=True)
class HyperellipticCurve:
    """y^2 = P(x) with P given by coefficients (highest degree first)."""

    family: str
    genus: int
    coefficients: tuple
    parameters: dict = field(default_factory=dict)
    differential: str = ""

    @property
    def degree(self):
        return len(self.coefficients) - 1

    @property
    def roots(self):
        return np.roots(np.asarray(self.coefficients, dtype=complex))

    def evaluate(self, x):
        return np.polyval(np.asarray(self.coefficients, dtype=complex), x)

    def is_squarefree(self, tol=SQUAREFREE_TOL):
        r = self.roots
        if len(r) < 2:
            return True
        d = np.abs(r[:, None] - r[None, :]) + np.eye(len(r))
        return bool(d.min() > tol)

    def to_json(self):
        return {
            "family": self.family,
            "genus": self.genus,
            "parameters": {k: _jsonable(v) for k, v in self.parameters.items()},
            "coefficients": [[float(c.real), float(c.imag)] for c in np.asarray(self.coefficients, dtype=complex)],
            "differential": self.differential,
        }


def _jsonable(v):
    v = complex(v)
    return v.real if v.imag == 0 else [v.real, v.imag]


def integer_coefficients(curve, tol=1e-9):
    """Coefficients as Python ints if every one is an integer within tol, else None."""
    out = []
    for c in np.asarray(curve.coefficients, dtype=complex):
        k = round(c.real)
        if abs(c - k) > tol * max(1.0, abs(c)):
            return None
        out.append(int(k))
    return out


def a_from_mu(mu):
    """a = (2 mu - 4) / mu."""
    mu = complex(mu)
    if mu == 0:
        raise DegenerateParameter("mu = 0")
    a = (2 * mu - 4) / mu
    if abs(a - 2) < 1e-12 or abs(a + 2) < 1e-12:
        raise DegenerateParameter("a = +-2 gives a singular curve")
    return a


def mu_from_a(a):
    return 4 / (2 - complex(a))


def _real_if_close(c, tol=1e-12):
    c = np.asarray(c, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(c))))
    if np.all(np.abs(c.imag) < tol * scale):
        return c.real.astype(complex)
    return c


def _parity(family, g):
    f = family.lower()
    if g < 1:
        raise BadParity("genus must be positive")
    if f in ("esc1", "esc2") and g % 2 == 0:
        raise BadParity(f"{family} needs odd genus")
    if f in ("escb1", "escb2") and g % 2:
        raise BadParity(f"{family} needs even genus")
    if f in ("st1", "st2") and g < 2:
        raise BadParity(f"{family} needs genus at least 2")


def _t_squares(a, k):
    """t^2 for the roots x of x^(2k) + a x^k + 1, one per pair (x, 1/x)."""
    poly = np.zeros(2 * k + 1, dtype=complex)
    poly[0], poly[k], poly[-1] = 1, a, 1
    xs = np.roots(poly)
    t2 = (1j * (1 + xs) / (1 - xs)) ** 2
    # x and 1/x give opposite t, hence equal t^2; keep one of each pair
    t2 = sorted(t2, key=lambda z: (round(z.real, 8), round(z.imag, 8)))
    return np.array(t2[::2])


def family_equation(family, g, mu=None, a=None):
    """Equation of the family member of genus g with elementary invariant mu (or a)."""
    _parity(family, g)
    f = family.lower()
    if a is None:
        a = a_from_mu(mu)
    a = complex(a)
    if abs(a - 2) < 1e-12 or abs(a + 2) < 1e-12:
        raise DegenerateParameter("a = +-2 gives a singular curve")
    params = {"a": a}
    if mu is not None:
        params["mu"] = complex(mu)
    if f in ("esc1", "escb1"):
        n = 2 * g + 2
        c = np.zeros(n + 1, dtype=complex)
        c[0], c[g + 1], c[-1] = 1, a, 1
        diff = f"x^{(g - 1) // 2} dx / y" if f == "esc1" else f"x^{g - 1} dx^2 / y^2"
    elif f in ("esc2", "escb2"):
        c = np.zeros(2 * g + 2, dtype=complex)
        c[0], c[g], c[2 * g] = 1, a, 1
        diff = f"x^{(g - 1) // 2} dx / y" if f == "esc2" else f"x^{g - 1} dx^2 / y^2"
    elif f == "st1":
        t2 = _t_squares(a, 2 * g)
        c = np.poly(np.concatenate([[0], t2]))
        diff = f"(x+1)^{g - 1} dx / y"
    elif f == "st2":
        t2 = _t_squares(a, 2 * g - 1)
        c = np.poly(np.concatenate([[0, -1], t2]))
        diff = f"(x+1)^{g - 1} dx / y"
    else:
        raise InvalidTiling(f"unknown family {family!r}")
    return HyperellipticCurve(f, g, tuple(_real_if_close(c)), params, diff)


def square_tiled_closed_form(family, g):
    """Closed forms of the square-tiled members (integer coefficients)."""
    f = family.lower()
    _parity(f, g)
    if f in ("esc1", "escb1"):
        c = [0] * (2 * g + 3)
        c[0] = c[-1] = 1
    elif f in ("esc2", "escb2"):
        c = [0] * (2 * g + 2)
        c[0] = c[2 * g] = 1
    elif f == "st1":
        inner = [(-1) ** k * comb(4 * g, 2 * k) for k in range(2 * g + 1)]
        c = list(np.polymul(inner[::-1], [1, 0]).astype(int))
    elif f == "st2":
        inner = [(-1) ** (k + 1) * comb(4 * g - 2, 2 * k) for k in range(2 * g)]
        c = list(np.polymul(inner[::-1], [1, 1, 0]).astype(int))
    else:
        raise InvalidTiling(f"unknown family {family!r}")
    return [int(v) for v in c]


def quotient_map_residual(g, a, samples=10, seed=0):
    """(x, y) -> (x^2, x y) from y^2 = x^(4g) + a x^(2g) + 1 onto y^2 = x (x^(2g) + a x^g + 1)."""
    rng = np.random.default_rng(seed)
    k = 2 * g - 1
    worst = 0.0
    for _ in range(samples):
        x = complex(*rng.normal(size=2))
        y = cmath.sqrt(x ** (2 * k + 2) + a * x ** (k + 1) + 1)
        X, Y = x * x, x * y
        res = Y * Y - X * (X ** (2 * g) + a * X ** g + 1)
        worst = max(worst, abs(res) / max(1.0, abs(Y * Y)))
    return worst


def elementary_isomorphism_residual(a):
    """Check that x -> 2 x1 (x - x1) / ((1 + x1^2)(x1 x - 1)) sends the roots of
    x^4 + a x^2 + 1 to {0, 1, 4/(2-a), infinity}; returns the largest mismatch.
    """
    a = complex(a)
    x1 = cmath.sqrt((-a + cmath.sqrt(a * a - 4)) / 2)
    roots = [x1, -x1, 1 / x1, -1 / x1]
    targets = [0, 1, 4 / (2 - a)]
    images = []
    for r in roots:
        den = (1 + x1 * x1) * (x1 * r - 1)
        images.append(np.inf if abs(den) < 1e-12 else 2 * x1 * (r - x1) / den)
    finite = [z for z in images if z is not np.inf]
    if len(finite) != 3:
        return np.inf
    return max(min(abs(z - t) for z in finite) for t in targets)


def st1_real_coefficients(g, a):
    c = np.asarray(family_equation("st1", g, a=a).coefficients, dtype=complex)
    return float(np.max(np.abs(c.imag)))


# -- case A -----------------------------------------------------------------------------

def nu_orbit(nu):
    """The six values of nu on the orbit of case A."""
    nu = complex(nu)
    return [nu, 2 * (6 - nu) / (2 + nu), -nu,
            2 * (nu + 6) / (nu - 2), 2 * (nu - 6) / (nu + 2), 2 * (6 + nu) / (2 - nu)]


NU_MAPS = (
    lambda v: -v,
    lambda v: 2 * (6 - v) / (2 + v),
    lambda v: 2 * (v + 6) / (v - 2),
    lambda v: 2 * (v - 6) / (v + 2),
    lambda v: 2 * (6 + v) / (2 - v),
)


def caseA_data(a=None, nu=None):
    """Curve (x^2-a^2)(x^2-1)(x^2-a^2-1), its mu, and the covering map to the genus one curve."""
    if a is None:
        if nu is None:
            raise DomainError("give a or nu")
        # a^2 solves s^2 - nu s + 1 = 0
        s = (nu + cmath.sqrt(nu * nu - 4)) / 2
        a = cmath.sqrt(s)
    a = complex(a)
    a2 = a * a
    if abs(a) < 1e-12 or abs(a2 - 1) < 1e-12:
        raise DegenerateParameter("a must differ from 0 and +-1")
    b = cmath.sqrt(a2 + 1)
    mu = (a2 + 1) ** 2 / (a2 - 1) ** 2
    poly = np.polymul(np.polymul([1, 0, -a2], [1, 0, -1]), [1, 0, -a2 - 1])

    def cover(x, y):
        X = (2 * x * x - a2 - 1) ** 2 / (a2 - 1) ** 2
        Y = y * 4 * x * (2 * x * x - a2 - 1) / (a2 - 1) ** 3
        return X, Y

    nu_val = a2 + 1 / a2
    return {
        "a": a,
        "b": b,
        "mu": mu,
        "nu": nu_val,
        "curve": HyperellipticCurve("A", 2, tuple(_real_if_close(poly)), {"a": a, "mu": mu}, "dx / y"),
        "cover": cover,
        "target": lambda X: X * (X - 1) * (X - mu),
        "orbit": nu_orbit(nu_val),
    }


def cover_residual(data, samples=10, seed=0):
    """Largest |Y^2 - target(X)| over random points of the curve, relative."""
    rng = np.random.default_rng(seed)
    curve = data["curve"]
    worst = 0.0
    for _ in range(samples):
        x = complex(*rng.normal(size=2))
        y = cmath.sqrt(curve.evaluate(x))
        X, Y = data["cover"](x, y)
        worst = max(worst, abs(Y * Y - data["target"](X)) / max(1.0, abs(Y * Y)))
    return worst


def a_for_mu_caseA(mu):
    """Solutions a^2 of (a^2+1)^2 = mu (a^2-1)^2."""
    mu = complex(mu)
    # (1 - mu) s^2 + (2 + 2 mu) s + (1 - mu) = 0
    return list(np.roots([1 - mu, 2 + 2 * mu, 1 - mu]))


# -- case B -----------------------------------------------------------------------------

def caseB_data(mu):
    """Parameter a of y^2 = x (x^4 + a x^2 + 1) and its orbit companions."""
    a = a_from_mu(mu)
    poly = np.array([1, 0, a, 0, 1, 0], dtype=complex)
    return {
        "mu": complex(mu),
        "a": a,
        "curve": HyperellipticCurve("B", 2, tuple(_real_if_close(poly)), {"a": a, "mu": complex(mu)}, "x dx^2 / y^2"),
        # companions as printed; they equal a(1 - mu) and a(1/mu)
        "companions": (2 * (6 - a) / (a + 2), 2 * (6 + a) / (a - 2)),
    }


def caseB_orbit(a):
    """Orbit values as roots of the cubic; the companions enter with opposite sign.

    a and -a describe isomorphic curves (x -> i x), and only the sign-flipped
    companions make the cubic's x coefficient equal to -36.
    """
    a = complex(a)
    return [a, 2 * (a - 6) / (a + 2), 2 * (a + 6) / (2 - a)]


# -- case C -----------------------------------------------------------------------------

def caseC_companions(t):
    t = complex(t)
    return [t, 2 / t, -(t + 2) / (t + 1), -2 * (t + 1) / (t + 2)]


def caseC_lambda(t):
    t = complex(t)
    num = (t * t - 2) ** 2 * (3 * t * t + 4 * t + 2) ** 3 * (t * t + 4 * t + 6) ** 3
    den = 1024 * t ** 3 * (t * t + 2 * t + 2) ** 2 * (t + 2) ** 3 * (t + 1) ** 3
    return -num / den


def caseC_data(t):
    t = complex(t)
    if abs(t) < 1e-12 or abs(t + 1) < 1e-12 or abs(t + 2) < 1e-12 or abs(t * t + 2 * t + 2) < 1e-12:
        raise DegenerateParameter(f"t = {t} is excluded")
    q2 = t * t + 2 * t + 2
    a = -(3 * t * t + 4 * t + 2) * (t + 2) / (t * q2)
    c = -(t * t + 4 * t + 6) * (t + 1) / q2
    b = -(t * t + 3 * t + 2) / t
    lam = caseC_lambda(t)
    r2 = math.sqrt(2)
    base = (t * t - 2) / (4 * t * q2)
    d1 = (t * t - 2 + (t * t + 4 * t + 2) * 1j * r2) * base
    d2 = (t * t - 2 - (t * t + 4 * t + 2) * 1j * r2) * base
    mu = lam / (lam - 1)
    p = -(t * t + 4 * t + 6) * (3 * t * t + 4 * t + 2) / (4 * t * q2)
    q = -2 * (t * t + 3 * t + 2) / q2
    fpoly = np.polymul([1, 0, 0], np.polymul([1, -a], [1, -c])) / ((1 - a) * (1 - c))
    curve_poly = np.poly([1, a, b, c, d1, d2])
    return {
        "t": t, "a": a, "b": b, "c": c, "lambda": lam, "d1": d1, "d2": d2, "mu": mu,
        "p": p, "q": q, "f": fpoly,
        "companions": caseC_companions(t),
        "quartic": caseC_quartic(mu),
        "curve": HyperellipticCurve("C", 2, tuple(curve_poly), {"t": t, "mu": mu}, "dx / y"),
    }


def caseC_quartic(mu):
    mu = complex(mu)
    return np.array([1, 2 - 8 * mu, 12 * mu, -(2 + 6 * mu), mu - 1], dtype=complex)


def double_root_residual(poly, value):
    """Smallest |poly - value| over the critical points of poly, relative.

    Zero exactly when poly - value has a multiple root.
    """
    p = np.array(poly, dtype=complex)
    p[-1] -= value
    crit = np.roots(np.polyder(p))
    scale = max(1.0, float(np.max(np.abs(p))))
    return float(min(abs(np.polyval(p, z)) for z in crit) / scale)


def caseC_certificates(data):
    """Residuals of the defining identities of a case C parameter record."""
    f = data["f"]
    fv = lambda x: np.polyval(f, x)
    return {
        "f(1)=1": abs(fv(1) - 1),
        "f(b)=1": abs(fv(data["b"]) - 1),
        "f-1 double root": double_root_residual(f, 1),
        "f(d1)=lambda": abs(fv(data["d1"]) - data["lambda"]) / max(1, abs(data["lambda"])),
        "f(d2)=lambda": abs(fv(data["d2"]) - data["lambda"]) / max(1, abs(data["lambda"])),
        "f-lambda double root": double_root_residual(f, data["lambda"]),
        "f(p)=lambda": abs(fv(data["p"]) - data["lambda"]) / max(1, abs(data["lambda"])),
        "f(q)=1": abs(fv(data["q"]) - 1),
    }


def w_from_t(t):
    """The quartic root attached to t (constant on the companion class)."""
    t = complex(t)
    r2 = math.sqrt(2)
    # invert t = sqrt2 (u + 1 + sqrt2) / (u - 1 - sqrt2)
    u = (1 + r2) * (t + r2) / (t - r2)
    return ((u * u + 1) / (u * u - 1)) ** 2


def caseC_candidates(mu):
    """All parameters t for a given mu, grouped by quartic root.

    Real mu > 1 gets the labels C1 (root > 2), C4 (root in (0, 1/2)) and
    the unordered pair C2/C3 (complex roots).
    """
    mu = complex(mu)
    r2 = math.sqrt(2)
    out = []
    for w in np.roots(caseC_quartic(mu)):
        ts = []
        for sgn in (1, -1):
            s = sgn * cmath.sqrt(w)
            u2 = (s + 1) / (s - 1)
            for u in (cmath.sqrt(u2), -cmath.sqrt(u2)):
                ts.append(r2 * (u + 1 + r2) / (u - 1 - r2))
        label = None
        if abs(mu.imag) < 1e-14 and mu.real > 1:
            if abs(w.imag) < 1e-9 and w.real > 2:
                label = "C1"
            elif abs(w.imag) < 1e-9 and 0 < w.real < 0.5:
                label = "C4"
            else:
                label = "C2/C3"
        out.append({"w": complex(w), "t": ts, "label": label})
    return out


# -- case D -----------------------------------------------------------------------------

def caseD_data(mu):
    """Branches of a, b and lambda for case D, and the two explicit sextics."""
    mu = complex(mu)
    if abs(mu) < 1e-14 or abs(mu - 1) < 1e-14:
        raise DegenerateParameter("mu must differ from 0 and 1")
    real = abs(mu.imag) < 1e-15
    if real and mu.real <= 1:
        raise DomainError("the branch classification needs real mu > 1")
    root = cmath.sqrt(mu * mu - mu)
    a1_sq = 2 * mu - 2 + 2 * root
    a3_sq = 2 * mu - 2 - 2 * root
    branches = {}
    for name, a2, sgn in (("D1", a1_sq, 1), ("D3", a3_sq, -1)):
        a = cmath.sqrt(a2)
        b = 1j / cmath.sqrt(a2 + 2)
        lam = -a2 * a2 / (4 * (a2 + 1))
        sextic = np.polymul(np.polymul([1, 0, 1], [1, 0, -2 * (mu - 1 + sgn * root)]),
                            [1, 0, (mu - sgn * root) / (2 * mu)])
        from_roots = np.polymul(np.polymul([1, 0, -a2], [1, 0, 1]), [1, 0, -b * b])
        branches[name] = {
            "a": a, "a_squared": a2, "b": b, "lambda": lam,
            "curve": HyperellipticCurve(name, 2, tuple(_real_if_close(sextic)), {"mu": mu}, "dx / y"),
            "curve_from_roots": tuple(from_roots),
        }
    return {"mu": mu, "classified": real, "branches": branches}


def caseD_certificates(data):
    mu = data["mu"]
    out = {}
    for name, br in data["branches"].items():
        a2, b = br["a_squared"], br["b"]
        f = lambda x: x * x * (x * x - a2) / (x * x + 1) ** 2
        fpoly_num = np.polymul([1, 0, 0], [1, 0, -a2])
        fpoly_den = np.polymul([1, 0, 1], [1, 0, 1])
        # double root of f - lambda: numerator - lambda * denominator
        num = np.polysub(fpoly_num, br["lambda"] * fpoly_den)
        crit = np.roots(np.polyder(num))
        out[name] = {
            "lambda+mu=1": abs(br["lambda"] + mu - 1),
            "f(b)=1": abs(f(b) - 1),
            "f(-b)=1": abs(f(-b) - 1),
            "double root": float(min(abs(np.polyval(num, z)) for z in crit)),
            "sextic": float(np.max(np.abs(np.asarray(br["curve"].coefficients) - np.asarray(br["curve_from_roots"])))),
        }
    return out


# -- orbit polynomials --------------------------------------------------------------------

def orbit_polynomial(case, value):
    """Orbit value set, fitted alpha, the polynomial and the largest residual.

    case "B": value is a, cubic x^3 - alpha x^2 - 36 x + 4 alpha.
    case "A": value is nu, sextic x^6 - (alpha+72) x^4 + (8 alpha+1296) x^2 - 16 alpha.
    case "C": value is t, quartic x^4 + (2-8 alpha) x^3 + 12 alpha x^2 - (2+6 alpha) x + alpha - 1
    on the quartic roots w of the four companion classes with the same lambda.
    """
    case = case.upper()
    if case == "B":
        vals = caseB_orbit(value)
        alpha = sum(vals)
        poly = np.array([1, -alpha, -36, 4 * alpha], dtype=complex)
    elif case == "A":
        vals = nu_orbit(value)
        alpha = sum(v * v for v in vals) / 2 - 72
        poly = np.array([1, 0, -(alpha + 72), 0, 8 * alpha + 1296, 0, -16 * alpha], dtype=complex)
    elif case == "C":
        vals = caseC_orbit_roots(value)
        alpha = (sum(vals) + 2) / 8
        poly = caseC_quartic(alpha)
    else:
        raise DomainError(f"unknown case {case!r}")
    scale = np.max(np.abs(poly))
    res = max(abs(np.polyval(poly, v)) / (scale * max(1.0, abs(v)) ** (len(poly) - 1)) for v in vals)
    return {"values": vals, "alpha": alpha, "polynomial": poly, "residual": float(res)}


def caseC_orbit_roots(t):
    """Quartic roots w of the four companion classes sharing lambda(t).

    The sixteen solutions of lambda(s) = lambda(t) are found as roots of a
    degree 16 polynomial and grouped by w.
    """
    lam = caseC_lambda(t)
    num = np.polymul(np.polymul(np.polymul([1, 0, -2], [1, 0, -2]),
                                np.polymul(np.polymul([3, 4, 2], [3, 4, 2]), [3, 4, 2])),
                     np.polymul(np.polymul([1, 4, 6], [1, 4, 6]), [1, 4, 6]))
    den = np.polymul(np.polymul(np.polymul([1024, 0, 0, 0], np.polymul([1, 2, 2], [1, 2, 2])),
                                np.polymul(np.polymul([1, 2], [1, 2]), [1, 2])),
                     np.polymul(np.polymul([1, 1], [1, 1]), [1, 1]))
    eq = np.polyadd(-num, -lam * den)
    ws = []
    for s in np.roots(eq):
        w = w_from_t(s)
        if not any(abs(w - x) < 1e-5 * max(1, abs(w)) for x in ws):
            ws.append(w)
    return ws
