"""Genus-one invariants: the half-period ratio tau and the Legendre-type mu.

``mu_from_tau`` evaluates an infinite product of Jacobi type, and
``tau_from_mu`` goes back through the period integrals of
y^2 = x (x - 1) (x - mu).  The two directions share no code, so each one
serves as an oracle for the other.
"""
import itertools

import numpy as np
from scipy import integrate

from .errors import BranchUnsupported, ConvergenceFailure, DomainError

MIN_IM_TAU = 0.05
MAX_FACTORS = 100000


def _nome(tau):
    tau = complex(tau)
    if tau.imag < MIN_IM_TAU:
        raise ConvergenceFailure(f"Im tau = {tau.imag} is below {MIN_IM_TAU}")
    zeta = np.exp(1j * np.pi * tau)
    if abs(zeta) >= 1 - 1e-6:
        raise ConvergenceFailure("nome too close to the unit circle")
    return zeta


def product_constant(tau, max_factors=MAX_FACTORS):
    """K = 4 prod_{k>=1} ((1 + zeta^(2k)) / (1 + zeta^(2k-1)))^4."""
    zeta = _nome(tau)
    K = 4.0 + 0j
    for k in range(1, max_factors):
        f = ((1 + zeta ** (2 * k)) / (1 + zeta ** (2 * k - 1))) ** 4
        K *= f
        # the factor differs from 1 by about 4 |zeta|^(2k-1)
        if 4 * abs(zeta) ** (2 * k - 1) < 1e-16:
            return K
    raise ConvergenceFailure("product for K did not converge")


def jacobi_value(tau, z, max_factors=MAX_FACTORS):
    """J_tau(z), normalized so that J(0) = 0, J(1) = 1 and J(tau) = infinity."""
    zeta = _nome(tau)
    w = np.exp(1j * np.pi * complex(z))
    out = -w / product_constant(tau, max_factors)
    for k in range(max_factors):
        z2k = zeta ** (2 * k)
        z2k1 = zeta ** (2 * k + 1)
        num = (w - z2k) ** 2 * (1 - z2k * zeta * zeta * w) ** 2
        den = (w - z2k1) ** 2 * (1 - z2k1 * w) ** 2
        f = num / den
        out *= f
        # bound on |f - 1| from the leading terms of the four binomials
        if k > 0 and 4 * abs(z2k) * (1 / abs(w) + abs(w)) < 1e-16:
            return complex(out)
    raise ConvergenceFailure("Jacobi product did not converge")


def mu_from_tau(tau, max_factors=MAX_FACTORS):
    """mu = J_tau(1 + tau)."""
    return jacobi_value(tau, 1 + complex(tau), max_factors)


def _real_periods(mu):
    """|I1| and |I2| for real mu > 1 after the x = sin^2 substitutions."""
    f1 = lambda th: 2.0 / np.sqrt(mu - np.sin(th) ** 2)
    f2 = lambda th: 2.0 / np.sqrt(1.0 + (mu - 1.0) * np.sin(th) ** 2)
    i1, _ = integrate.quad(f1, 0.0, np.pi / 2, epsabs=1e-13, epsrel=1e-12)
    i2, _ = integrate.quad(f2, 0.0, np.pi / 2, epsabs=1e-13, epsrel=1e-12)
    return i1, i2


def _segment_integral(a, b, c):
    """Integral of dx / sqrt((x - a)(x - b)(x - c)) along the segment [a, b].

    With x = a + (b - a) sin^2(theta) the endpoint singularities disappear
    and the integrand becomes 2 / sqrt(c - x) up to a constant sign, with a
    square root branch kept continuous along the path.
    """
    u0, u1 = c - a, c - b
    if abs(u0) == 0 or abs(u1) == 0:
        raise BranchUnsupported("repeated root")
    bis = u0 / abs(u0) + u1 / abs(u1)
    if abs(bis) < 1e-12:
        raise BranchUnsupported("third root lies on the integration segment")
    rot = bis / abs(bis)

    def f(th):
        x = a + (b - a) * np.sin(th) ** 2
        return 2.0 / (np.sqrt(rot) * np.sqrt((c - x) / rot))

    val, _ = integrate.quad(f, 0.0, np.pi / 2, complex_func=True, epsabs=1e-13, epsrel=1e-12)
    return complex(val)


def _on_segment(a, b, c, tol=1e-12):
    d = b - a
    s = ((c - a) / d)
    return abs(s.imag) < tol and -tol < s.real < 1 + tol


def _periods(mu):
    """Two independent half periods taken along root-to-root segments."""
    roots = [0.0, 1.0, mu]
    segs = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
    good = [(roots[i], roots[j], roots[k]) for i, j, k in segs
            if not _on_segment(complex(roots[i]), complex(roots[j]), complex(roots[k]))]
    i1 = _segment_integral(*good[0])
    i2 = _segment_integral(*good[1])
    return i1, i2


def _small_modular_matrices(bound=3):
    rng = range(-bound, bound + 1)
    for a, b, c, d in itertools.product(rng, repeat=4):
        if a * d - b * c == 1:
            yield a, b, c, d


def tau_from_mu(mu, tol=1e-8):
    """tau with mu_from_tau(tau) = mu.

    Real mu > 1 uses the real period integrals directly (tau is then purely
    imaginary).  Other values use complex period integrals and then pick,
    among small modular images, the representative whose mu matches; if
    none matches, BranchUnsupported is raised.
    """
    mu = complex(mu)
    if abs(mu) < 1e-14 or abs(mu - 1) < 1e-14:
        raise DomainError("mu must differ from 0 and 1")
    if abs(mu.imag) < 1e-15 and mu.real > 1:
        i1, i2 = _real_periods(mu.real)
        return 1j * i2 / i1
    i1, i2 = _periods(mu)
    tau0 = i2 / i1
    if abs(tau0.imag) < 1e-14:
        raise BranchUnsupported("degenerate period ratio")
    if tau0.imag < 0:
        tau0 = -tau0
    best = None
    for a, b, c, d in _small_modular_matrices():
        t = (a * tau0 + b) / (c * tau0 + d)
        if t.imag < 0.2:
            continue
        # reduce modulo 2, which leaves mu unchanged
        t = complex((t.real + 1) % 2 - 1, t.imag)
        try:
            m = mu_from_tau(t)
        except ConvergenceFailure:
            continue
        if abs(m - mu) < tol * max(1.0, abs(mu)):
            key = (-round(t.imag, 9), round(abs(t.real), 9))
            if best is None or key < best[0]:
                best = (key, t)
    if best is None:
        raise BranchUnsupported(f"no period normalization reproduces mu = {mu}")
    return best[1]


MODULAR_OPS = {
    "S": lambda m: m / (m - 1),
    "Tm": lambda m: 1 - m,
    "U": lambda m: 1 / m,
}

TAU_OPS = {
    "S": lambda t: -1 / t,
    "Tm": lambda t: t - 1,
    "U": lambda t: t / (1 + t),
}


def modular_mu(mu, op):
    """mu of the transformed lattice: S (tau -> -1/tau), Tm (tau -> tau - 1), U (tau -> tau/(1+tau))."""
    mu = complex(mu)
    if abs(mu) < 1e-14 or abs(mu - 1) < 1e-14:
        raise DomainError("mu must differ from 0 and 1")
    try:
        return MODULAR_OPS[op](mu)
    except KeyError:
        raise DomainError(f"unknown modular operation {op!r}") from None
