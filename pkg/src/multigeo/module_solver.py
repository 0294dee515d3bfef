"""Conformal module of an equiquadrangle by piecewise-linear finite elements.

The quarter domain has corners 0, p1, q1, p2: a segment of the real
diameter, half of the right side, half of the upper side and a segment of
the imaginary diameter.  With u = 0 on [0, p1], u = 1 on the upper arc and
zero normal derivative elsewhere, the Dirichlet energy E gives Im tau = 1/E.
The Dirichlet problem is conformally invariant, so it is solved directly in
Euclidean coordinates of the disk.
"""
import csv
import io
import math
from dataclasses import dataclass

import numpy as np
import sympy
from scipy.sparse import coo_matrix
from scipy.sparse.linalg import spsolve

from . import elliptic_invariants as ei
from . import hyperbolic_core as hc
from .equiquadrangle import QuadrangleSpec, l_prime, vertex_geometry
from .errors import DomainError, MeshFailure, NotConverged, UnsupportedCase


@dataclass(frozen=True)
class SolverConfig:
    levels: int = 4
    tol: float = 1e-5
    grading: float = 1.5
    base: int = 16
    cusp_depths: tuple = (0.08, 0.04, 0.02)

    def __post_init__(self):
        if self.levels < 2:
            raise DomainError("at least two refinement levels are needed")


@dataclass(frozen=True)
class ArcQuadDomain:
    """Quarter domain with boundary curves as callables on [0, 1].

    bottom: 0 -> p1, right: p1 -> q1, top: p2 -> q1, left: 0 -> p2.
    For an ideal vertex the top curve ends with a short cut back to the
    right arc, at Euclidean distance ``cut`` from the ideal point.
    """

    corners: tuple
    bottom: object
    right: object
    top: object
    left: object
    cut: float = 0.0

    def interior_angles(self):
        z0, p1, q1, p2 = self.corners
        h = 1e-6
        def tangent(curve, at_start):
            a, b = (curve(0.0), curve(h)) if at_start else (curve(1.0), curve(1 - h))
            return b - a
        def ang(u, v):
            return float(abs(np.angle(v / u)))
        return (
            ang(tangent(self.bottom, True), tangent(self.left, True)),
            ang(tangent(self.bottom, False), tangent(self.right, True)),
            ang(tangent(self.right, False), tangent(self.top, False)),
            ang(tangent(self.top, True), tangent(self.left, False)),
        )


def _arc(center, start, end):
    """Parametrized circular arc with the given center, by angle."""
    a0 = np.angle(start - center)
    a1 = np.angle(end - center)
    d = (a1 - a0 + np.pi) % (2 * np.pi) - np.pi
    r = abs(start - center)

    def f(s):
        return center + r * np.exp(1j * (a0 + d * np.asarray(s)))
    return f


def _segment(a, b):
    return lambda s: a + (b - a) * np.asarray(s)


def _joined(f, g, split):
    """f on [0, split] and g on [split, 1], each rescaled to [0, 1]."""
    def h(s):
        s = np.asarray(s, dtype=float)
        return np.where(s <= split, f(np.minimum(s / split, 1.0)),
                        g(np.maximum((s - split) / (1 - split), 0.0)))
    return h


def build_domain(spec, cut=0.04):
    """Quarter domain of an untwisted quadrangle; ``cut`` only matters for ideal vertices."""
    if spec.t != 0:
        raise UnsupportedCase("only untwisted quadrangles are uniformized")
    geom = vertex_geometry(spec)
    p1, p2, q1 = geom.p[0], geom.p[1], geom.q[0]
    c1, _ = hc.orthogonal_geodesic_center(p1)
    c2, _ = hc.orthogonal_geodesic_center(p2)
    bottom = _segment(0j, p1)
    left = _segment(0j, p2)
    if spec.n is not None:
        return ArcQuadDomain((0j, p1, q1, p2), bottom, _arc(c1, p1, q1), _arc(c2, p2, q1), left)
    # stop each arc at distance ``cut`` from the ideal point and close with a chord
    def stop(center, start):
        r = abs(start - center)
        ang = 2 * np.arcsin(cut / (2 * r))
        a_end = np.angle(q1 - center)
        a_start = np.angle(start - center)
        sgn = np.sign((a_start - a_end + np.pi) % (2 * np.pi) - np.pi)
        return center + r * np.exp(1j * (a_end + sgn * ang))
    r_end, t_end = stop(c1, p1), stop(c2, p2)
    right = _arc(c1, p1, r_end)
    arc_top = _arc(c2, p2, t_end)
    top = _joined(arc_top, _segment(t_end, r_end), 0.98)
    return ArcQuadDomain((0j, p1, r_end, p2), bottom, right, top, left, cut=cut)


def _graded(N, beta):
    """Nodes on [0, 1] refined toward 1."""
    s = np.linspace(0.0, 1.0, N + 1)
    return 1.0 - (1.0 - s) ** beta


def coons_mesh(dom, N, beta):
    """Nodes (complex) and triangles of a transfinite interpolation mesh."""
    s = _graded(N, beta)
    S, T = np.meshgrid(s, s, indexing="xy")
    B, Tp = dom.bottom(s), dom.top(s)
    Lf, R = dom.left(s), dom.right(s)
    z00, z10, z11, z01 = dom.bottom(0.0), dom.bottom(1.0), dom.top(1.0), dom.top(0.0)
    Z = ((1 - T) * B[None, :] + T * Tp[None, :] + (1 - S) * Lf[:, None] + S * R[:, None]
         - ((1 - S) * (1 - T) * z00 + S * (1 - T) * z10 + S * T * z11 + (1 - S) * T * z01))
    nodes = Z.ravel()
    idx = np.arange((N + 1) ** 2).reshape(N + 1, N + 1)
    a, b = idx[:-1, :-1].ravel(), idx[:-1, 1:].ravel()
    c, d = idx[1:, 1:].ravel(), idx[1:, :-1].ravel()
    # split each cell along its shorter diagonal
    short = np.abs(nodes[a] - nodes[c]) <= np.abs(nodes[b] - nodes[d])
    tri = np.concatenate([
        np.stack([a, b, c], 1)[short], np.stack([a, c, d], 1)[short],
        np.stack([a, b, d], 1)[~short], np.stack([b, c, d], 1)[~short],
    ])
    return nodes, tri, idx


def _stiffness(nodes, tri):
    x, y = nodes.real, nodes.imag
    i, j, k = tri[:, 0], tri[:, 1], tri[:, 2]
    # gradients of barycentric coordinates
    bx = np.stack([y[j] - y[k], y[k] - y[i], y[i] - y[j]], 1)
    by = np.stack([x[k] - x[j], x[i] - x[k], x[j] - x[i]], 1)
    area2 = (x[j] - x[i]) * (y[k] - y[i]) - (x[k] - x[i]) * (y[j] - y[i])
    if np.any(area2 <= 0):
        raise MeshFailure("mesh has inverted or degenerate triangles")
    local = (bx[:, :, None] * bx[:, None, :] + by[:, :, None] * by[:, None, :]) / (2 * area2[:, None, None])
    rows = np.repeat(tri, 3, axis=1).ravel()
    cols = np.tile(tri, (1, 3)).ravel()
    n = len(nodes)
    return coo_matrix((local.ravel(), (rows, cols)), shape=(n, n)).tocsr()


def dirichlet_energy(dom, N, beta, dual=False):
    """Discrete energy of the mixed problem on an N x N mesh.

    dual=False: u = 0 on the bottom, u = 1 on the top.
    dual=True: u = 0 on the right, u = 1 on the left.
    """
    nodes, tri, idx = coons_mesh(dom, N, beta)
    K = _stiffness(nodes, tri)
    n = len(nodes)
    val = np.full(n, np.nan)
    if dual:
        val[idx[:, -1]] = 0.0
        val[idx[:, 0]] = 1.0
    else:
        val[idx[0, :]] = 0.0
        val[idx[-1, :]] = 1.0
    fixed = ~np.isnan(val)
    free = ~fixed
    u = np.where(fixed, val, 0.0)
    rhs = -K[free][:, fixed] @ u[fixed]
    u[free] = spsolve(K[free][:, free].tocsc(), rhs)
    return float(u @ (K @ u))


def _richardson(levels):
    """Extrapolate energies at meshes N, 2N, 4N assuming an h^2 leading error."""
    ext = [(4 * levels[k] - levels[k - 1]) / 3 for k in range(1, len(levels))]
    return ext[-1], (abs(ext[-1] - ext[-2]) if len(ext) > 1 else abs(ext[-1] - levels[-1]))


def module_energy(dom, cfg=SolverConfig(), dual=False):
    Ns = [cfg.base * 2 ** k for k in range(cfg.levels)]
    energies = [dirichlet_energy(dom, N, cfg.grading, dual) for N in Ns]
    value, spread = _richardson(energies)
    return {"energies": energies, "meshes": Ns, "energy": value, "spread": spread}


def _im_tau(spec, cfg, dual):
    if spec.n is not None:
        res = module_energy(build_domain(spec), cfg, dual)
        return res, res["spread"]
    # ideal vertex: deepen the cut until the module stabilizes
    prev = None
    for cut in cfg.cusp_depths:
        res = module_energy(build_domain(spec, cut), cfg, dual)
        if prev is not None and abs(res["energy"] - prev["energy"]) < cfg.tol / 10:
            res["cut"] = cut
            return res, max(res["spread"], abs(res["energy"] - prev["energy"]))
        prev = res
    raise NotConverged("cusp truncation did not stabilize")


def tau_from_quadrangle(spec, cfg=SolverConfig()):
    """Purely imaginary tau of an untwisted quadrangle."""
    res, err = _im_tau(spec, cfg, dual=False)
    im = 1.0 / res["energy"]
    if err * im * im > cfg.tol:
        raise NotConverged(f"extrapolation spread {err * im * im:.3g} exceeds {cfg.tol}")
    return 1j * im


def duality_product(spec, cfg=SolverConfig()):
    """Product of the module and its dual, equal to 1 up to discretization."""
    a, _ = _im_tau(spec, cfg, dual=False)
    b, _ = _im_tau(spec, cfg, dual=True)
    return a["energy"] * b["energy"]


def mu_from_quadrangle(spec, cfg=SolverConfig()):
    return ei.mu_from_tau(tau_from_quadrangle(spec, cfg)).real


# -- tables ------------------------------------------------------------------------------

MU_TABLES = {
    3: [
        ("sqrt(2+sqrt(2))", "(837+1107*sqrt(2))/2401"),
        ("sqrt(7+sqrt(17))/2", "(23+sqrt(17))/27"),
        ("sqrt(6+2*sqrt(3))/2", "27-15*sqrt(3)"),
        ("sqrt(2)", "27/25"),
        ("sqrt(5+sqrt(5))/2", "32/27"),
        ("sqrt(4+2*sqrt(2))/2", "(1564+1107*sqrt(2))/2401"),
        ("(1+sqrt(17))/4", "(621+27*sqrt(17))/512"),
        ("sqrt(6)/2", "2"),
        ("sqrt(14+2*sqrt(17))/4", "-108+27*sqrt(17)"),
        ("sqrt(4+sqrt(2))/2", "(58+41*sqrt(2))/27"),
        ("(sqrt(2)+sqrt(10))/4", "32/5"),
        ("sqrt(5)/2", "27/2"),
        ("sqrt(3+sqrt(3))/2", "27+15*sqrt(3)"),
        ("sqrt(10+2*sqrt(17))/4", "109+27*sqrt(17)"),
        ("sqrt(3+sqrt(2))/2", "(1566+1107*sqrt(2))/2"),
    ],
    4: [
        ("sqrt(10+2*sqrt(17))/2", "(1151-217*sqrt(17))/256"),
        ("(sqrt(2)+sqrt(6))/2", "(12+7*sqrt(3))/24"),
        ("sqrt(3)", "128/125"),
        ("(1+sqrt(5))/2", "(2+sqrt(5))/4"),
        ("sqrt(5+sqrt(17))/2", "(897-217*sqrt(17))/2"),
        ("sqrt(2)", "4/3"),
        ("sqrt(18+2*sqrt(33))/4", "(283+21*sqrt(33))/256"),
        ("sqrt(4+2*sqrt(2))/2", "2"),
        ("(sqrt(3)+sqrt(11))/4", "(9+7*sqrt(33))/18"),
        ("sqrt(6)/2", "4"),
        ("sqrt(14+2*sqrt(17))/4", "(1151+217*sqrt(17))/256"),
        ("(sqrt(2)+sqrt(10))/4", "9+4*sqrt(5)"),
        ("sqrt(5)/2", "128/3"),
        ("sqrt(3+sqrt(3))/2", "97+56*sqrt(3)"),
        ("sqrt(10+2*sqrt(17))/4", "(897+217*sqrt(17))/2"),
    ],
    5: [
        ("sqrt(8+2*sqrt(5))/2", "(65+29*sqrt(5))/125"),
        ("sqrt(5+sqrt(5))/2", "2"),
        ("(sqrt(2)+sqrt(10))/4", "(1621+725*sqrt(5))/121"),
    ],
    6: [
        ("(sqrt(3)+sqrt(7))/2", "128-48*sqrt(7)"),
        ("2", "81/80"),
        ("(3*sqrt(2)+sqrt(10))/4", "(4096-1216*sqrt(10))/243"),
        ("sqrt(6+2*sqrt(7))/2", "(512-160*sqrt(7))/81"),
        ("sqrt(10)/2", "32/27"),
        ("sqrt(2)", "81/49"),
        ("(1+sqrt(3))/2", "2"),
        ("sqrt(7)/2", "81/32"),
        ("sqrt(6)/2", "32/5"),
        ("sqrt(3+sqrt(7))/2", "(512+160*sqrt(7))/81"),
        ("(sqrt(2)+sqrt(10))/4", "(4096+1216*sqrt(10))/243"),
        ("sqrt(5)/2", "81"),
        ("(sqrt(3)+sqrt(7))/4", "128+48*sqrt(7)"),
    ],
    8: [
        ("sqrt(2+sqrt(2))", "(-4+8*sqrt(2))/7"),
        ("sqrt(6+2*sqrt(2))/2", "(3+2*sqrt(2))/4"),
        ("sqrt(cos(pi/8)+1)", "2"),
        ("sqrt(4+2*sqrt(2))/2", "(11+8*sqrt(2))/7"),
        ("sqrt(4+sqrt(2))/2", "12+8*sqrt(2)"),
    ],
    None: [
        ("sqrt(5)", "(125-55*sqrt(5))/2"),
        ("sqrt(3)", "9/8"),
        ("sqrt(2)", "2"),
        ("sqrt(6)/2", "9"),
        ("sqrt(5)/2", "(125+55*sqrt(5))/2"),
    ],
}


def parse_expr(text):
    """Closed-form real number from a string such as 'sqrt(6)/2'."""
    try:
        val = float(sympy.sympify(text, rational=True).evalf(30))
    except (sympy.SympifyError, TypeError) as exc:
        raise DomainError(f"cannot parse {text!r}") from exc
    return val


def angle_label(n):
    return "0" if n is None else f"pi/{n}"


def reproduce_mu_table(angle, rows=None, cfg=SolverConfig(), tol=1e-3):
    """Recompute mu for each (L, mu) row; returns a list of dicts."""
    rows = MU_TABLES[angle] if rows is None else rows
    out = []
    for L_text, mu_text in rows:
        L = parse_expr(L_text)
        mu_tab = parse_expr(mu_text)
        rec = {"angle": angle_label(angle), "L_expr": L_text, "L": L, "mu_table": mu_tab}
        try:
            l_prime(L, angle)
            mu = mu_from_quadrangle(QuadrangleSpec(L, angle), cfg)
            rec.update(mu_computed=mu, delta=abs(mu - mu_tab))
            rec["status"] = "pass" if rec["delta"] <= tol else "finding"
        except (ArithmeticError, ValueError) as exc:
            rec.update(mu_computed=math.nan, delta=math.nan, status=f"error: {exc}")
        out.append(rec)
    return out


CSV_COLUMNS = ("angle", "L_expr", "L", "mu_table", "mu_computed", "delta", "status")


def table_csv(records):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow([r[c] if isinstance(r[c], str) else f"{r[c]:.12g}" for c in CSV_COLUMNS])
    return buf.getvalue()
