"""Side-pairing words of tiled surfaces, their matrices and fundamental domains.

Words are tuples over the letters "h", "H", "v", "V" and "r", where capitals
denote inverses and "r" is an involution.  They are evaluated at

* h: the horizontal generator A,
* v: the upward generator B (T.B0 for a twisted quadrangle),
* r: the half-turn about the center of the base quadrangle.

Copy i of the base quadrangle R0 is g_i(R0), where g_i is the product of
elementary moves along a spanning tree of the arrangement.  The pairing of
side s of copy i with side s' of copy j is g_i E(s, s') g_j^-1, where
E(s, s') maps side s' of R0 onto side s of R0 with R0 landing outside.
"""
import math
import re
from dataclasses import dataclass, field

import numpy as np

from . import hyperbolic_core as hc
from . import tiling as tl
from .equiquadrangle import build_generators, vertex_geometry
from .errors import AngleConditionViolated, BadParity, InvalidTiling, NotHyperbolic

INVERSE = {"h": "H", "H": "h", "v": "V", "V": "v", "r": "r"}
EDGE_TOL = 1e-8
ANGLE_TOL = 1e-8

# elementary move E(s, s') as a word
ELEMENTARY = {
    ("R", "L"): ("h",),
    ("L", "R"): ("H",),
    ("T", "B"): ("v",),
    ("B", "T"): ("V",),
    ("R", "R"): ("h", "r"),
    ("L", "L"): ("H", "r"),
    ("T", "T"): ("v", "r"),
    ("B", "B"): ("V", "r"),
}

CONVENTION = {
    "h": "A, translation to the right",
    "v": "B (T.B0 when twisted), translation upward; equals e2.e1 with e2 the half-turn about the top-side midpoint",
    "r": "e1, half-turn about the center of the base quadrangle",
    "pairing": "g_i E(s, s') g_j^-1 maps side s' of copy j onto side s of copy i",
}


def reduce_word(word):
    out = []
    for x in word:
        if out and out[-1] == INVERSE[x]:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def invert(word):
    return tuple(INVERSE[x] for x in reversed(word))


def power(word, k):
    word = tuple(word)
    if k < 0:
        return invert(word) * (-k)
    return word * k


def word(*parts):
    """Concatenate letters, strings and tuples, then reduce."""
    out = []
    for p in parts:
        out.extend(p if isinstance(p, tuple) else tuple(p))
    return reduce_word(out)


def format_word(w):
    """Readable form with exponents, e.g. ("h", "h", "v", "H") -> "h^2 v h^-1"."""
    if not w:
        return "1"
    out = []
    k = 0
    while k < len(w):
        x = w[k]
        j = k
        while j < len(w) and w[j] == x:
            j += 1
        n = j - k
        base = x.lower()
        e = n if x.islower() else -n
        if x == "r":
            out.extend(["r"] * n)
        elif e == 1:
            out.append(base)
        else:
            out.append(f"{base}^{e}")
        k = j
    return " ".join(out)


_TOKEN = re.compile(r"\s*([hvr])(?:\^(-?\d+))?")


def parse_word(s):
    """Inverse of format_word."""
    s = s.strip()
    if s == "1":
        return ()
    out = []
    pos = 0
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m:
            raise InvalidTiling(f"cannot parse word {s!r} at position {pos}")
        letter, e = m.group(1), int(m.group(2) or 1)
        out.extend(power((letter,), e) if letter != "r" else ("r",) * abs(e))
        pos = m.end()
    return reduce_word(out)


# -- word derivation ---------------------------------------------------------------

def _paths(t):
    paths = {0: ()}
    tree = tl.tree_edges(t)
    for i, s, j, s2 in tree:
        paths[j] = word(paths[i], ELEMENTARY[(s, s2)])
    return paths, tree


def _orient(a, b):
    """Write a pairing from the higher-index square (ties: top and right first)."""
    pref = {"T": 0, "R": 1, "B": 2, "L": 3}
    ka = (-a[0], pref[a[1]])
    kb = (-b[0], pref[b[1]])
    return (a, b) if ka <= kb else (b, a)


def pairing_word(paths, a, b):
    return word(paths[a[0]], ELEMENTARY[(a[1], b[1])], invert(paths[b[0]]))


@dataclass(frozen=True)
class PairingWords:
    words: tuple
    pairings: tuple
    paths: dict = field(compare=False)


def derive_pairing_words(t):
    """One word per exterior pairing (those not crossed by the spanning tree)."""
    if t.arrangement is None:
        t = tl.arranged(t)
    if t.arrangement is None:
        raise InvalidTiling("the tiling has no admissible arrangement")
    paths, tree = _paths(t)
    in_tree = {tuple(sorted(((i, s), (j, s2)))) for i, s, j, s2 in tree}
    words, pairs = [], []
    for a, b in t.gluing:
        if (a, b) in in_tree:
            continue
        a, b = _orient(a, b)
        words.append(pairing_word(paths, a, b))
        pairs.append((a, b))
    return PairingWords(tuple(words), tuple(pairs), paths)


# -- literal family words -----------------------------------------------------------

def _hv(k):
    return power(("h", "v"), k)


def _conj(k, w):
    return word(_hv(k), w, _hv(-k))


def family_words(family, g, corrected=False):
    """Literal pairing words of the staircase and escalator families.

    For the half-turn escalators the printed word (hv)^(k-1) h r does not
    pair two sides; ``corrected=True`` replaces it by (hv)^(k-1) h v^-1 r,
    the pairing of the two bottom sides.
    """
    family = family.lower()
    if g < 1 or (family in ("st1", "st2") and g < 2):
        raise BadParity(f"genus {g} is too small for {family}")
    if family == "st1":
        out = [("v",), _conj(g - 1, ("h", "v", "H"))]
        out += [_conj(j, ("h", "h")) for j in range(g)]
        out += [_conj(i, ("h", "v", "v", "H")) for i in range(g - 1)]
        return out
    if family == "st2":
        out = [("v",), _conj(g - 1, ("h",))]
        out += [_conj(j, ("h", "h")) for j in range(g - 1)]
        out += [_conj(j, ("h", "v", "v", "H")) for j in range(g - 1)]
        return out
    if family in ("esc1", "esc2", "escb1", "escb2"):
        half = family.startswith("escb")
        if half and g % 2:
            raise BadParity("half-turn escalators need even genus")
        if not half and g % 2 == 0:
            raise BadParity("escalators need odd genus")
        k = g + 1 if family.endswith("1") else g
        if half:
            second = ("h", "V", "r") if corrected else ("h", "r")
            out = [word(_hv(k), "r"), word(_hv(k - 1), second)]
        else:
            out = [_hv(k), word(_hv(k - 1), "h", "V")]
        out += [_conj(j, ("h", "h")) for j in range(k)]
        out += [_conj(i, ("h", "v", "v", "H")) for i in range(k - 1)]
        return out
    raise InvalidTiling(f"unknown family {family!r}")


# -- matrices -------------------------------------------------------------------------

def letter_matrices(spec):
    gens = build_generators(spec)
    A, V, e1 = gens.A, gens.B, gens.e1
    return {"h": A, "H": hc.inverse(A), "v": V, "V": hc.inverse(V), "r": e1}


def evaluate(w, spec=None, letters=None):
    if letters is None:
        letters = letter_matrices(spec)
    out = hc.IDENTITY
    for x in w:
        out = out @ letters[x]
    return out


def check_angle_condition(n, m):
    if n is not None and (n % m):
        raise AngleConditionViolated(f"n = {n} is not a multiple of m = {m}")


@dataclass(frozen=True)
class FuchsianPresentation:
    words: tuple
    matrices: tuple
    spec: object
    flavor: str
    pairings: tuple = ()
    convention: dict = field(default_factory=lambda: dict(CONVENTION))


def instantiate(words, spec, flavor="abelian", m=None, pairings=()):
    """Evaluate words at the generators of ``spec``; m is the tiling's angle lcm."""
    if m is not None:
        check_angle_condition(spec.n, m)
    letters = letter_matrices(spec)
    mats = tuple(evaluate(w, letters=letters) for w in words)
    return FuchsianPresentation(tuple(tuple(w) for w in words), mats, spec, flavor, tuple(pairings))


def presentation_for(t, spec):
    """Derived words of a tiling, instantiated after checking the angle condition."""
    va = tl.vertex_analysis(t)
    pw = derive_pairing_words(t)
    return instantiate(pw.words, spec, va["stratum"].flavor, va["m"], pw.pairings)


# -- fundamental domain -------------------------------------------------------------

@dataclass(frozen=True)
class DomainLayout:
    tiling: object
    spec: object
    placements: tuple
    corners: dict  # (copy, corner) -> point
    edges: dict    # (copy, side) -> GeodesicArc, oriented counterclockwise around the copy
    midpoints: dict


BASE_CORNERS = ("BL", "BR", "TR", "TL")
BASE_MID = {"R": 0, "T": 1, "L": 2, "B": 3}


def layout_fundamental_domain(t, spec):
    if t.arrangement is None:
        t = tl.arranged(t)
    paths, _ = _paths(t)
    letters = letter_matrices(spec)
    geom = vertex_geometry(spec)
    base = geom.corners
    placements = tuple(evaluate(paths[i], letters=letters) for i in range(t.count))
    corners, edges, mids = {}, {}, {}
    for i, g in enumerate(placements):
        for c in BASE_CORNERS:
            corners[(i, c)] = complex(hc.apply(g, base[c]))
        for s in tl.SIDES:
            a, b = tl.ENDS[s]
            edges[(i, s)] = hc.geodesic_through(corners[(i, a)], corners[(i, b)])
            mids[(i, s)] = complex(hc.apply(g, geom.p[BASE_MID[s]]))
    return DomainLayout(t, spec, placements, corners, edges, mids)


def pairing_matrix(layout, a, b, letters=None):
    """Map of side b of its copy onto side a of its copy."""
    if letters is None:
        letters = letter_matrices(layout.spec)
    E = evaluate(ELEMENTARY[(a[1], b[1])], letters=letters)
    return layout.placements[a[0]] @ E @ hc.inverse(layout.placements[b[0]])


def _base_inside(spec):
    """Membership test for the interior of the base quadrangle."""
    geom = vertex_geometry(spec)
    center = geom.center()
    tests = []
    for arc in geom.edges().values():
        if arc.kind == "diameter":
            d = arc.end - arc.start
            side = np.sign((np.conj(d) * (center - arc.start)).imag)
            tests.append(("line", arc.start, d, side))
        else:
            side = np.sign(abs(center - arc.center) - arc.radius)
            tests.append(("circle", arc.center, arc.radius, side))

    def inside(z, margin=1e-9):
        z = np.asarray(z, dtype=complex)
        ok = np.abs(z) < 1 - margin
        for kind, p, q, side in tests:
            if kind == "line":
                val = (np.conj(q) * (z - p)).imag / abs(q)
            else:
                val = np.abs(z - p) - q
            ok &= side * val > margin
        return ok

    return inside


def _sample_base(spec, k=24):
    geom = vertex_geometry(spec)
    inside = _base_inside(spec)
    xs = np.linspace(-1, 1, k)
    grid = (xs[:, None] + 1j * xs[None, :]).ravel()
    pts = grid[inside(grid, 1e-6)]
    return np.concatenate([pts, [geom.center()]])


def _cycle_class_map(t):
    """Corner -> class index for the vertex classes of t."""
    out = {}
    for k, cls in enumerate(tl.vertex_classes(t)):
        for c in cls:
            out[c] = k
    return out


def vertex_cycle_transformation(layout, corner, letters=None):
    """Product of pairings met while turning once around the vertex at ``corner``."""
    t = layout.tiling
    partner = t.partner
    M = hc.IDENTITY
    cur = corner
    for c in tl.vertex_link(t, corner):
        i, cc = c
        side = tl._side_ending_at(cc)
        j, s2 = partner[(i, side)]
        M = M @ pairing_matrix(layout, (i, side), (j, s2), letters)
    return M / np.sqrt(np.linalg.det(M))


def verify_poincare(p, d):
    """Check edge matching, vertex cycles and disjointness; never raises.

    Returns a dict with the failures of each check and an overall flag.
    """
    t = d.tiling
    letters = letter_matrices(d.spec)
    report = {"edge_failures": [], "vertex_cycles": [], "overlaps": 0, "convention": dict(CONVENTION)}
    pairs = list(p.pairings) if p.pairings else [tl_pair for tl_pair in t.gluing]
    mats = list(p.matrices) if p.pairings else [pairing_matrix(d, a, b, letters) for a, b in pairs]
    inside = _base_inside(d.spec)
    for (a, b), g in zip(pairs, mats):
        ea, eb = d.edges[a], d.edges[b]
        src = np.array([eb.start, eb.end, d.midpoints[b]])
        dst = np.array([ea.end, ea.start, d.midpoints[a]])
        err = float(np.max(np.abs(hc.apply(g, src) - dst)))
        outside = True
        probe = complex(hc.apply(g @ d.placements[b[0]], vertex_geometry(d.spec).center()))
        if inside(hc.apply(hc.inverse(d.placements[a[0]]), probe)):
            outside = False
        if err > EDGE_TOL or not outside:
            report["edge_failures"].append({"pairing": (a, b), "endpoint_error": err, "lands_outside": outside})
    # interior pairings of the layout must also match
    for i, s, j, s2 in tl.tree_edges(t):
        ea, eb = d.edges[(i, s)], d.edges[(j, s2)]
        err = max(abs(ea.start - eb.end), abs(ea.end - eb.start))
        if err > EDGE_TOL:
            report["edge_failures"].append({"pairing": ((i, s), (j, s2)), "endpoint_error": err, "lands_outside": True})
    for cls in tl.vertex_classes(t):
        total = 0.0
        for (i, c) in cls:
            nb = {"TR": ("BR", "TL"), "TL": ("TR", "BL"), "BL": ("TL", "BR"), "BR": ("BL", "TR")}[c]
            q = d.corners[(i, c)]
            if abs(q) >= 1 - 1e-9:
                continue
            total += hc.angle_at(q, d.corners[(i, nb[0])], d.corners[(i, nb[1])])
        ideal = all(abs(d.corners[x]) >= 1 - 1e-9 for x in cls)
        M = vertex_cycle_transformation(d, cls[0], letters)
        entry = {"corners": len(cls), "angle_sum": total, "ideal": ideal}
        if ideal:
            # a cusp needs a parabolic cycle transformation
            entry["ok"] = abs(abs(hc.normalized_trace(M)) - 2) < 1e-6
            entry["p"] = None
        else:
            ratio = 2 * math.pi / total if total > 0 else float("inf")
            pint = round(ratio)
            entry["p"] = pint
            fixed = abs(complex(hc.apply(M, d.corners[cls[0]])) - d.corners[cls[0]]) < 1e-7
            entry["ok"] = pint >= 1 and abs(total - 2 * math.pi / pint) < ANGLE_TOL and fixed
        report["vertex_cycles"].append(entry)
    pts = _sample_base(d.spec)
    inv = [hc.inverse(g) for g in d.placements]
    for i, g in enumerate(d.placements):
        img = hc.apply(g, pts)
        for j in range(t.count):
            if j == i:
                continue
            report["overlaps"] += int(np.count_nonzero(inside(hc.apply(inv[j], img))))
    report["ok"] = (not report["edge_failures"] and report["overlaps"] == 0
                    and all(v["ok"] for v in report["vertex_cycles"]))
    return report


def check_tiling(t, spec):
    """Derive, instantiate, lay out and verify in one call."""
    pres = presentation_for(t, spec)
    lay = layout_fundamental_domain(t, spec)
    return pres, lay, verify_poincare(pres, lay)


# -- lengths -----------------------------------------------------------------------------

def word_geodesic_length(w, spec):
    """Translation length of the evaluated word; raises NotHyperbolic otherwise."""
    if isinstance(w, str):
        w = parse_word(w)
    g = evaluate(w, spec)
    return float(hc.translation_length(g))


def edge_holonomy(layout, start):
    """Element translating along the closed edge geodesic through half-edge ``start``.

    The lift is developed across each vertex, turning halfway round its
    link, and the product of the crossed pairings is returned together with
    the edge of copy ``start[0]`` that lies on its axis.
    """
    t = layout.tiling
    partner = t.partner
    letters = letter_matrices(layout.spec)
    path = tl.edge_geodesic(t, start)
    M = hc.IDENTITY
    for i, s in path:
        link = tl.vertex_link(t, (i, tl.ENDS[s][1]))
        for c in link[: len(link) // 2 + 1]:
            ci, cc = c
            side = tl._side_ending_at(cc)
            M = M @ pairing_matrix(layout, (ci, side), partner[(ci, side)], letters)
    return M, layout.edges[tuple(start)]


def cylinder_holonomy(layout, index, direction="horizontal"):
    """Element translating along the median of a cylinder."""
    t = layout.tiling
    partner = t.partner
    letters = letter_matrices(layout.spec)
    fwd, back = ("R", "L") if direction == "horizontal" else ("T", "B")
    cyc = tl.cylinders(t, direction)[index]
    M = hc.IDENTITY
    for sq, dirn in cyc:
        side = fwd if dirn == 1 else back
        M = M @ pairing_matrix(layout, (sq, side), partner[(sq, side)], letters)
    return M


# -- SVG ------------------------------------------------------------------------------------

PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
           "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def _arc_path(arc):
    s, e = arc.start, arc.end
    if arc.kind == "diameter":
        return f"M {s.real:.9f} {s.imag:.9f} L {e.real:.9f} {e.imag:.9f}"
    c, r = arc.center, arc.radius
    cross = ((s - c).conjugate() * (e - c)).imag
    sweep = 1 if cross > 0 else 0
    return f"M {s.real:.9f} {s.imag:.9f} A {r:.9f} {r:.9f} 0 0 {sweep} {e.real:.9f} {e.imag:.9f}"


def layout_svg(layout):
    """SVG of the domain; paired edges share a color, interior edges are thin gray."""
    t = layout.tiling
    tree = {tuple(sorted(((i, s), (j, s2)))) for i, s, j, s2 in tl.tree_edges(t)}
    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="-1.05 -1.05 2.1 2.1" width="600" height="600">',
        '<g transform="scale(1,-1)">',
        '<circle cx="0" cy="0" r="1" fill="none" stroke="black" stroke-width="0.004"/>',
    ]
    k = 0
    for a, b in t.gluing:
        if (a, b) in tree:
            for h in (a,):
                lines.append(f'<path d="{_arc_path(layout.edges[h])}" fill="none" stroke="#bbbbbb" stroke-width="0.003"/>')
            continue
        color = PALETTE[k % len(PALETTE)]
        k += 1
        for h in (a, b):
            lines.append(f'<path d="{_arc_path(layout.edges[h])}" fill="none" stroke="{color}" stroke-width="0.006"/>')
    lines += ["</g>", "</svg>"]
    return "\n".join(lines) + "\n"
