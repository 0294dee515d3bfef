"""Surfaces glued from unit squares by translations and half-turns.

A tiling is stored as a fixed-point-free involution on half-edges
``(square, side)`` with sides "R", "T", "L", "B".  Gluing a side to the
opposite side (R to L, T to B) is a translation, gluing a side to the same
side (T to T, ...) is a half-turn.  Optional integer grid positions record
a planar arrangement; squares adjacent in the arrangement are glued
across their shared edge.
"""
import itertools
import json
import math
from collections import deque
from dataclasses import dataclass

from .errors import InvalidTiling

SIDES = ("R", "T", "L", "B")
OPP = {"R": "L", "L": "R", "T": "B", "B": "T"}
ROT90 = {"R": "T", "T": "L", "L": "B", "B": "R"}
LONG = {"R": "right", "T": "top", "L": "left", "B": "bottom"}
SHORT = {v: k for k, v in LONG.items()}
# endpoints of each side, traversed counterclockwise around the square
ENDS = {"B": ("BL", "BR"), "R": ("BR", "TR"), "T": ("TR", "TL"), "L": ("TL", "BL")}
CORNERS = ("BL", "BR", "TR", "TL")
STEP = {"R": (1, 0), "L": (-1, 0), "T": (0, 1), "B": (0, -1)}


def kind_of(s1, s2):
    if s2 == OPP[s1]:
        return "translation"
    if s2 == s1:
        return "half_turn"
    raise InvalidTiling(f"sides {s1} and {s2} cannot be glued")


@dataclass(frozen=True)
class RectTiling:
    count: int
    gluing: tuple  # sorted tuple of ((i, s), (j, s')) pairs, each pair sorted
    arrangement: tuple | None = None

    def __post_init__(self):
        seen = set()
        for a, b in self.gluing:
            if a == b:
                raise InvalidTiling(f"edge {a} glued to itself")
            kind_of(a[1], b[1])
            for h in (a, b):
                if h in seen:
                    raise InvalidTiling(f"edge {h} glued twice")
                if not (0 <= h[0] < self.count and h[1] in SIDES):
                    raise InvalidTiling(f"bad half-edge {h}")
                seen.add(h)
        if len(seen) != 4 * self.count:
            raise InvalidTiling("every side must be glued exactly once")
        if self.arrangement is not None and len(self.arrangement) != self.count:
            raise InvalidTiling("arrangement size differs from the square count")

    @property
    def partner(self):
        out = {}
        for a, b in self.gluing:
            out[a] = b
            out[b] = a
        return out


def make_tiling(count, pairs, arrangement=None):
    """Tiling from an iterable of half-edge pairs."""
    norm = sorted(tuple(sorted((tuple(a), tuple(b)))) for a, b in pairs)
    arr = None if arrangement is None else tuple(tuple(p) for p in arrangement)
    return RectTiling(count, tuple(norm), arr)


def from_partner(count, partner, arrangement=None):
    pairs = {tuple(sorted((a, b))) for a, b in partner.items()}
    return make_tiling(count, pairs, arrangement)


def from_permutations(r, u):
    """Translation-only tiling: square r[i] is right of i, u[i] is above i."""
    n = len(r)
    pairs = [((i, "R"), (r[i], "L")) for i in range(n)]
    pairs += [((i, "T"), (u[i], "B")) for i in range(n)]
    return make_tiling(n, pairs)


def torus():
    return from_permutations([0], [0])


def adjacency_pairs(arrangement):
    """Gluings implied by grid adjacency of an arrangement."""
    pos = {tuple(p): i for i, p in enumerate(arrangement)}
    pairs = []
    for i, (x, y) in enumerate(arrangement):
        if (x + 1, y) in pos:
            pairs.append(((i, "R"), (pos[(x + 1, y)], "L")))
        if (x, y + 1) in pos:
            pairs.append(((i, "T"), (pos[(x, y + 1)], "B")))
    return pairs


def from_arrangement(arrangement, exterior):
    """Tiling from grid positions plus explicit pairings of the remaining sides.

    Explicitly listed sides take precedence over adjacency.
    """
    listed = {h for pair in exterior for h in pair}
    implicit = [p for p in adjacency_pairs(arrangement) if p[0] not in listed and p[1] not in listed]
    return make_tiling(len(arrangement), list(exterior) + implicit, arrangement)


def to_json_dict(t):
    if t.arrangement is None:
        t = arranged(t)
    arr = t.arrangement
    if arr is None:
        raise InvalidTiling("no admissible arrangement found for JSON output")
    implicit = set(tuple(sorted(p)) for p in adjacency_pairs(arr))
    pairings = []
    for a, b in t.gluing:
        if (a, b) in implicit:
            continue
        pairings.append({
            "edge": [a[0], LONG[a[1]]],
            "partner": [b[0], LONG[b[1]]],
            "kind": kind_of(a[1], b[1]),
        })
    return {"squares": t.count, "arrangement": [list(p) for p in arr], "pairings": pairings}


def from_json_dict(d):
    try:
        arr = [tuple(p) for p in d["arrangement"]]
        ext = []
        for p in d["pairings"]:
            a = (int(p["edge"][0]), SHORT[p["edge"][1]])
            b = (int(p["partner"][0]), SHORT[p["partner"][1]])
            if "kind" in p and p["kind"] != kind_of(a[1], b[1]):
                raise InvalidTiling(f"pairing {p} has the wrong kind")
            ext.append((a, b))
    except (KeyError, TypeError, IndexError) as exc:
        raise InvalidTiling(f"malformed tiling JSON: {exc}") from None
    t = from_arrangement(arr, ext)
    if t.count != d.get("squares", t.count):
        raise InvalidTiling("square count does not match the arrangement")
    return t


def dumps(t):
    return json.dumps(to_json_dict(t), sort_keys=True)


def loads(s):
    return from_json_dict(json.loads(s))


# -- structure ---------------------------------------------------------------

def is_connected(t):
    nbrs = {i: set() for i in range(t.count)}
    for a, b in t.gluing:
        nbrs[a[0]].add(b[0])
        nbrs[b[0]].add(a[0])
    seen, todo = {0}, [0]
    while todo:
        i = todo.pop()
        for j in nbrs[i] - seen:
            seen.add(j)
            todo.append(j)
    return len(seen) == t.count


def vertex_classes(t):
    """Corner classes as sorted lists of (square, corner)."""
    parent = {(i, c): (i, c) for i in range(t.count) for c in CORNERS}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in t.gluing:
        s_a, e_a = ENDS[a[1]]
        s_b, e_b = ENDS[b[1]]
        for x, y in (((a[0], s_a), (b[0], e_b)), ((a[0], e_a), (b[0], s_b))):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry
    classes = {}
    for x in parent:
        classes.setdefault(find(x), []).append(x)
    return sorted(sorted(v) for v in classes.values())


def orientation_classes(t):
    """Per-square orientation making every gluing a translation, or None."""
    rho = {0: 0}
    todo = [0]
    partner = t.partner
    while todo:
        i = todo.pop()
        for s in SIDES:
            j, s2 = partner[(i, s)]
            flip = 0 if s2 == OPP[s] else 1
            want = rho[i] ^ flip
            if j not in rho:
                rho[j] = want
                todo.append(j)
            elif rho[j] != want:
                return None
    return rho


def flavor(t):
    return "abelian" if orientation_classes(t) is not None else "quadratic"


@dataclass(frozen=True)
class Stratum:
    flavor: str
    zero_orders: tuple

    def __str__(self):
        letter = "H" if self.flavor == "abelian" else "Q"
        return f"{letter}({','.join(str(d) for d in self.zero_orders)})"


def vertex_analysis(t):
    """Cone angles, stratum, the lcm m of the orders plus two, and balancedness.

    Orders are those of the quadratic differential (angle (d + 2) pi); for
    the abelian flavor the stratum reports the orders of the abelian
    differential, d / 2.
    """
    if not is_connected(t):
        raise InvalidTiling("tiling is not connected")
    classes = vertex_classes(t)
    quad_orders = [len(c) // 2 - 2 for c in classes]
    fl = flavor(t)
    if fl == "abelian":
        zeros = tuple(sorted((d // 2 for d in quad_orders if d != 0), reverse=True))
    else:
        zeros = tuple(sorted((d for d in quad_orders if d != 0), reverse=True))
    m = 1
    for d in quad_orders:
        m = m * (d + 2) // math.gcd(m, d + 2)
    return {
        "cone_angles": [len(c) * math.pi / 2 for c in classes],
        "classes": classes,
        "quad_orders": quad_orders,
        "stratum": Stratum(fl, zeros),
        "m": m,
        "balanced": len(set(quad_orders)) == 1,
    }


def genus(t):
    v = len(vertex_classes(t))
    chi = v - 2 * t.count + t.count
    return (2 - chi) // 2


def _cylinder_cycles(t, forward, backward):
    partner = t.partner
    seen = set()
    cycles = []
    for i in range(t.count):
        if i in seen:
            continue
        cyc = []
        cur, d = i, 1
        while True:
            cyc.append((cur, d))
            out = forward if d == 1 else backward
            j, s2 = partner[(cur, out)]
            d = 1 if s2 == backward else -1
            cur = j
            # each square lies on exactly one core curve, so the walk closes up at the start
            if (cur, d) == (i, 1):
                break
        squares = [c for c, _ in cyc]
        seen.update(squares)
        cycles.append(cyc)
    return cycles


def cylinders(t, direction="horizontal"):
    """Cylinders as ordered lists of (square, direction) states."""
    if direction == "horizontal":
        return _cylinder_cycles(t, "R", "L")
    if direction == "vertical":
        return _cylinder_cycles(t, "T", "B")
    raise ValueError(f"unknown direction {direction!r}")


def cylinder_decomposition(t, direction="horizontal"):
    widths = sorted(len(c) for c in cylinders(t, direction))
    return {"direction": direction, "widths": widths}


# -- canonical forms -----------------------------------------------------------

def _rot(side, r):
    return OPP[side] if r else side


def _relabel(t, start, r0):
    """BFS relabeling from (start square, orientation); returns code and maps."""
    partner = t.partner
    label = {start: 0}
    rho = {start: r0}
    order = [start]
    k = 0
    while k < len(order):
        i = order[k]
        k += 1
        for fs in SIDES:
            j, s2 = partner[(i, _rot(fs, rho[i]))]
            if j not in label:
                label[j] = len(order)
                rho[j] = 0 if s2 == OPP[fs] else 1
                order.append(j)
    code = []
    for i in order:
        for fs in SIDES:
            j, s2 = partner[(i, _rot(fs, rho[i]))]
            code.append(4 * label[j] + SIDES.index(_rot(s2, rho[j])))
    return tuple(code), label, rho


def canonical_code(t):
    if not is_connected(t):
        raise InvalidTiling("tiling is not connected")
    return min(_relabel(t, s, r)[0] for s in range(t.count) for r in (0, 1))


def from_code(code):
    n = len(code) // 4
    pairs = set()
    for idx, v in enumerate(code):
        a = (idx // 4, SIDES[idx % 4])
        b = (v // 4, SIDES[v % 4])
        pairs.add(tuple(sorted((a, b))))
    return arranged(make_tiling(n, pairs))


def canonical(t):
    """Canonical representative, laid out on an admissible arrangement when one exists."""
    return from_code(canonical_code(t))


def is_isomorphic(a, b):
    return a.count == b.count and canonical_code(a) == canonical_code(b)


def arranged(t):
    """An isomorphic tiling carrying an admissible grid arrangement.

    Depth-first search over spanning trees: each new square is turned by
    0 or pi so that its tree gluing becomes a translation and is placed in
    the neighboring cell.  Returns the tiling unchanged (without
    arrangement) when no admissible arrangement is found.
    """
    partner = t.partner
    n = t.count

    def glued(i, ri, s, j, rj):
        # is frame side s of i glued to the opposite frame side of j?
        return partner[(i, _rot(s, ri))] == (j, _rot(OPP[s], rj))

    def search(pos, rho, cells):
        if len(pos) == n:
            arr = tuple(pos[i] for i in range(n))
            cand = RectTiling(n, _reorient(t, rho).gluing, arr)
            return cand if validate_tiling(cand)["ok"] else None
        for i in sorted(pos):
            for fs in SIDES:
                j, s2 = partner[(i, _rot(fs, rho[i]))]
                if j in pos:
                    continue
                rj = 0 if s2 == OPP[_rot(fs, rho[i])] else 1
                dx, dy = STEP[fs]
                cell = (pos[i][0] + dx, pos[i][1] + dy)
                if cell in cells:
                    continue
                ok = True
                for side, (ex, ey) in STEP.items():
                    k = cells.get((cell[0] + ex, cell[1] + ey))
                    if k is not None and not glued(j, rj, side, k, rho[k]):
                        ok = False
                        break
                if not ok:
                    continue
                pos[j], rho[j], cells[cell] = cell, rj, j
                found = search(pos, rho, cells)
                if found is not None:
                    return found
                del pos[j], rho[j], cells[cell]
        return None

    found = search({0: (0, 0)}, {0: 0}, {(0, 0): 0})
    return found if found is not None else RectTiling(t.count, t.gluing, None)


def spanning_arrangement(t):
    """Arrangement of ``arranged(t)``; None if the search fails."""
    return arranged(t).arrangement


def tree_edges(t):
    """Spanning tree of the arrangement adjacency, or of the gluing graph.

    Returns (parent map, ordered list of (parent, side, child, child side)).
    BFS visits sides in the order R, T, L, B.
    """
    partner = t.partner
    arr = t.arrangement
    pos = None if arr is None else {tuple(p): i for i, p in enumerate(arr)}
    seen = {0}
    order = []
    todo = deque([0])
    while todo:
        i = todo.popleft()
        for s in SIDES:
            j, s2 = partner[(i, s)]
            if j in seen:
                continue
            if pos is not None:
                dx, dy = STEP[s]
                p = (arr[i][0] + dx, arr[i][1] + dy)
                if pos.get(p) != j or s2 != OPP[s]:
                    continue
            seen.add(j)
            order.append((i, s, j, s2))
            todo.append(j)
    if len(seen) < t.count:
        raise InvalidTiling("arrangement is not connected")
    return order


# -- admissibility ----------------------------------------------------------------

def validate_tiling(t):
    """Check the arrangement and the pairings; returns a diagnostics dict."""
    problems = []
    if not is_connected(t):
        problems.append(("c", "gluing graph is not connected"))
    if t.arrangement is not None:
        arr = [tuple(p) for p in t.arrangement]
        cells = set(arr)
        if len(cells) != len(arr):
            problems.append(("a", "two squares occupy the same cell"))
        adj = {c: [] for c in cells}
        for (x, y) in cells:
            for dx, dy in STEP.values():
                if (x + dx, y + dy) in cells:
                    adj[(x, y)].append((x + dx, y + dy))
        start = arr[0]
        seen, todo = {start}, [start]
        while todo:
            c = todo.pop()
            for d in adj[c]:
                if d not in seen:
                    seen.add(d)
                    todo.append(d)
        if seen != cells:
            problems.append(("a", "arrangement is not edge-connected"))
        n_edges = sum(len(v) for v in adj.values()) // 2
        for (x, y) in cells:
            block = {(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)}
            if block <= cells:
                problems.append(("b", f"four squares meet at interior vertex {(x + 1, y + 1)}"))
            for dx in (1, -1):
                diag = (x + dx, y + 1)
                if diag in cells and (x + dx, y) not in cells and (x, y + 1) not in cells:
                    problems.append(("b", f"squares at {(x, y)} and {diag} meet only at a corner"))
        if seen == cells and n_edges != len(cells) - 1 and not any(p[0] == "b" for p in problems):
            problems.append(("a", "arrangement is not simply connected"))
        partner = t.partner
        for a, b in adjacency_pairs(arr):
            if partner.get(a) != b:
                problems.append(("c", f"adjacent sides {a} and {b} are not glued to each other"))
    return {"ok": not problems, "violations": problems}


# -- SL(2, Z) action -------------------------------------------------------------

def horizontal_normal_form(t):
    """Reorient squares so that every left-right gluing is a translation."""
    rho = {}
    for cyc in cylinders(t, "horizontal"):
        for sq, d in cyc:
            rho[sq] = 0 if d == 1 else 1
    return _reorient(t, rho)


def _reorient(t, rho):
    pairs = []
    for (i, s), (j, s2) in t.gluing:
        pairs.append(((i, _rot(s, rho[i])), (j, _rot(s2, rho[j]))))
    return make_tiling(t.count, pairs)


def _shear(t, inverse=False):
    h = horizontal_normal_form(t)
    partner = h.partner
    right = {i: partner[(i, "R")][0] for i in range(h.count)}
    left = {j: i for i, j in right.items()}
    move = left if inverse else right

    def new(hedge):
        i, s = hedge
        return (move[i], "T") if s == "T" else hedge

    pairs = []
    for a, b in h.gluing:
        if a[1] in "LR":
            pairs.append((a, b))
        else:
            pairs.append((new(a), new(b)))
    return canonical(make_tiling(h.count, pairs))


def act_T(t):
    """Image under the horizontal shear (1 1; 0 1)."""
    return _shear(t)


def act_T_inv(t):
    return _shear(t, inverse=True)


def act_S(t):
    """Image under the quarter turn (0 -1; 1 0)."""
    pairs = [((i, ROT90[s]), (j, ROT90[s2])) for (i, s), (j, s2) in t.gluing]
    return canonical(make_tiling(t.count, pairs))


def orbit_partition(tilings):
    """Orbits under T, T^-1 and S; each orbit is a sorted list of canonical codes.

    Orbits are closed under the action even when they leave the input list.
    """
    remaining = {canonical_code(t): t for t in tilings}
    orbits = []
    while remaining:
        code = min(remaining)
        start = from_code(code)
        orbit = {code: start}
        todo = [start]
        while todo:
            cur = todo.pop()
            for f in (act_T, act_T_inv, act_S):
                img = f(cur)
                c = canonical_code(img)
                if c not in orbit:
                    orbit[c] = img
                    todo.append(img)
        for c in orbit:
            remaining.pop(c, None)
        orbits.append(sorted(orbit))
    return orbits


# -- enumeration --------------------------------------------------------------------

def _matchings(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for k in range(len(rest)):
        for m in _matchings(rest[:k] + rest[k + 1:]):
            yield [(first, rest[k])] + m


def enumerate_surfaces(count, keep):
    """All connected tilings with ``count`` squares passing ``keep``, up to isomorphism.

    Left-right gluings are enumerated as a permutation (every horizontal
    cylinder can be oriented so these are translations), top and bottom
    sides by all perfect matchings.
    """
    horiz = [(i, s) for i in range(count) for s in ("T", "B")]
    found = {}
    matchings = list(_matchings(horiz))
    for perm in itertools.permutations(range(count)):
        lr = [((i, "R"), (perm[i], "L")) for i in range(count)]
        for m in matchings:
            t = make_tiling(count, lr + m)
            if not is_connected(t) or not keep(t):
                continue
            code = canonical_code(t)
            if code not in found:
                found[code] = from_code(code)
    return [found[c] for c in sorted(found)]


def _balanced_two_points(t):
    classes = vertex_classes(t)
    return len(classes) == 2 and all(len(c) == 8 for c in classes)


def enumerate_balanced_four():
    """The balanced 4-square surfaces with two cone points of angle 4 pi."""
    return enumerate_surfaces(4, _balanced_two_points)


# -- named families ------------------------------------------------------------------

def staircase(k):
    """Positions of a staircase of k squares: right, up, right, up, ..."""
    pos = [(0, 0)]
    for i in range(1, k):
        x, y = pos[-1]
        pos.append((x + 1, y) if i % 2 else (x, y + 1))
    return pos


def _staircase_tiling(k, ends):
    """Staircase of k squares closed up row by row and column by column.

    ``ends`` decides how the free horizontal sides of the first and last
    column are glued: "stairs" (each column to itself), "escalator"
    (top of the first to bottom of the last and vice versa) or
    "escalator_half" (top to top and bottom to bottom by half-turns).
    """
    pos = staircase(k)
    rows, cols = {}, {}
    for i, (x, y) in enumerate(pos):
        rows.setdefault(y, []).append(i)
        cols.setdefault(x, []).append(i)
    ext = []
    for y, sq in rows.items():
        sq = sorted(sq, key=lambda i: pos[i][0])
        ext.append(((sq[-1], "R"), (sq[0], "L")))
    first, last = 0, k - 1
    for x, sq in cols.items():
        sq = sorted(sq, key=lambda i: pos[i][1])
        if ends != "stairs" and (first in sq or last in sq) and len(sq) == 1:
            continue
        ext.append(((sq[-1], "T"), (sq[0], "B")))
    if ends == "escalator":
        ext += [((first, "T"), (last, "B")), ((first, "B"), (last, "T"))]
    elif ends == "escalator_half":
        ext += [((first, "T"), (last, "T")), ((first, "B"), (last, "B"))]
    return from_arrangement(pos, ext)


FAMILIES = ("st1", "st2", "esc1", "esc2", "escb1", "escb2")


def family_tiling(family, g):
    """Tilings of the staircase and escalator families in genus g."""
    from .errors import BadParity

    family = family.lower()
    if family == "st1":
        return _staircase_tiling(2 * g, "stairs")
    if family == "st2":
        return _staircase_tiling(2 * g - 1, "stairs")
    if family in ("esc1", "esc2"):
        if g % 2 == 0:
            raise BadParity("escalator families need odd genus")
        return _staircase_tiling(2 * g + 2 if family == "esc1" else 2 * g, "escalator")
    if family in ("escb1", "escb2"):
        if g % 2 == 1:
            raise BadParity("half-turn escalator families need even genus")
        return _staircase_tiling(2 * g + 2 if family == "escb1" else 2 * g, "escalator_half")
    raise InvalidTiling(f"unknown family {family!r}")


def family_required_n(family, g):
    return {"st1": 2 * g, "st2": 4 * g - 2, "esc1": g + 1, "esc2": 2 * g,
            "escb1": g + 1, "escb2": 2 * g}[family.lower()]


def numbered_row_tiling(count_bottom_top, glue):
    """Row of squares with bottoms numbered 1..k and tops k+1..2k, glued in pairs.

    Used to transcribe single-cylinder gluing lists written as "a-b".
    """
    k = count_bottom_top
    label = {}
    for i in range(k):
        label[i + 1] = (i, "B")
        label[k + i + 1] = (i, "T")
    arr = [(i, 0) for i in range(k)]
    ext = [((k - 1, "R"), (0, "L"))]
    ext += [(label[a], label[b]) for a, b in glue]
    return from_arrangement(arr, ext)


def labelled_tiling(arrangement, labels, glue, extra=()):
    """Tiling from grid positions, numbered sides and a list of "a-b" gluings.

    ``labels`` maps numbers to half-edges; ``extra`` holds further explicit
    pairings (for example row closures).
    """
    ext = list(extra) + [(labels[a], labels[b]) for a, b in glue]
    return from_arrangement(arrangement, ext)


# -- half twists ----------------------------------------------------------------------

def _side_ending_at(corner):
    return next(s for s, (a, b) in ENDS.items() if b == corner)


def vertex_link(t, corner):
    """Corners around the vertex of ``corner`` in counterclockwise order."""
    partner = t.partner
    out = [corner]
    cur = corner
    while True:
        i, c = cur
        j, s2 = partner[(i, _side_ending_at(c))]
        cur = (j, ENDS[s2][0])
        if cur == corner:
            return out
        out.append(cur)


def edge_geodesic(t, start):
    """Closed curve formed by edges, continuing straight through every vertex.

    ``start`` is a half-edge (i, s); it is traversed in the counterclockwise
    direction of square i, so square i lies on its left.  At a vertex with
    k corners the curve leaves along the ray k/2 corners further on, which
    is straight once all interior angles are equal.  Returns the list of
    half-edges lying on the left of the curve.
    """
    partner = t.partner
    path = [tuple(start)]
    while True:
        i, s = path[-1]
        link = vertex_link(t, (i, ENDS[s][1]))
        if len(link) % 2:
            raise InvalidTiling("odd number of corners at a vertex")
        i2, c2 = link[len(link) // 2]
        nxt = partner[(i2, _side_ending_at(c2))]
        if nxt == path[0]:
            return path
        if nxt in path or partner[nxt] in path:
            raise InvalidTiling("the edge curve is not simple")
        path.append(nxt)


def half_twist_along_edges(t, start):
    """Cut along the edge geodesic through ``start`` and reglue after half a turn."""
    from .errors import NotApplicable

    left = edge_geodesic(t, start)
    k = len(left)
    if k % 2:
        raise NotApplicable("the curve has an odd number of edges")
    partner = t.partner
    right = [partner[h] for h in left]
    on_curve = set(left) | set(right)
    pairs = [p for p in t.gluing if p[0] not in on_curve]
    pairs += [(left[j], right[(j + k // 2) % k]) for j in range(k)]
    return make_tiling(t.count, pairs, t.arrangement)


def half_twist_cylinder(t, index, direction="horizontal"):
    """Half Dehn twist along the median of one cylinder of even width."""
    from .errors import NotApplicable

    if direction == "vertical":
        rot = make_tiling(t.count, [((i, ROT90[s]), (j, ROT90[s2])) for (i, s), (j, s2) in t.gluing])
        back = half_twist_cylinder(rot, index, "horizontal")
        inv = {v: k for k, v in ROT90.items()}
        return make_tiling(t.count, [((i, inv[s]), (j, inv[s2])) for (i, s), (j, s2) in back.gluing])
    h = horizontal_normal_form(t)
    cyls = cylinders(h, "horizontal")
    if not 0 <= index < len(cyls):
        raise NotApplicable(f"no cylinder with index {index}")
    members = [sq for sq, _ in cyls[index]]
    w = len(members)
    if w % 2:
        raise NotApplicable("a half twist of an odd-width cylinder does not preserve the squares")
    partner = h.partner
    shift = {}
    for i in members:
        j = i
        for _ in range(w // 2):
            j = partner[(j, "R")][0]
        shift[i] = j

    def new(hedge):
        i, s = hedge
        return (shift[i], "T") if s == "T" and i in shift else hedge

    pairs = [(new(a), new(b)) if a[1] in "TB" else (a, b) for a, b in h.gluing]
    return make_tiling(h.count, pairs)


def cylinder_of(t, square, direction="horizontal"):
    """Index of the cylinder containing ``square``."""
    for k, cyc in enumerate(cylinders(horizontal_normal_form(t) if direction == "horizontal" else t, direction)):
        if any(sq == square for sq, _ in cyc):
            return k
    raise InvalidTiling(f"square {square} is in no cylinder")


def case_tiling(case):
    """Representatives of the four balanced genus-two cases A, B, C, D.

    A is the four-square staircase, B the half-turn escalator; C and D
    come from A and B by a half twist along the median of the upper
    horizontal cylinder.
    """
    case = case.upper()
    if case in ("A", "C"):
        base = family_tiling("st1", 2)
    elif case in ("B", "D"):
        base = family_tiling("escb2", 2)
    else:
        raise InvalidTiling(f"unknown case {case!r}")
    if case in ("A", "B"):
        return base
    top = len(base.arrangement) - 1
    return RectTiling(base.count, half_twist_cylinder(base, cylinder_of(base, top)).gluing, base.arrangement)
