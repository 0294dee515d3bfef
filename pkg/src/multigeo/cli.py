"""Command line front end.

Exit codes: 0 on success, 2 for rejected input, 3 when a numerical
routine fails to converge.
"""
import argparse
import configparser
import json
import math
import re
import sys
from pathlib import Path

import numpy as np
import sympy

from . import curve_families as cf
from . import elliptic_invariants as ei
from . import fenchel_nielsen as fn
from . import fuchsian as fx
from . import module_solver as ms
from . import tiling as tl
from .equiquadrangle import QuadrangleSpec, square_L
from .errors import NumericalError, ValidationError

CASES = ("A", "B", "C", "D")


def fmt(x):
    """Fixed %.12g formatting; complex values as a+bi."""
    def real(v):
        s = "%.12g" % v
        return s if any(ch in s for ch in ".enai") else s + ".0"
    z = complex(x)
    if abs(z.imag) <= 1e-13 * max(1.0, abs(z.real)):
        return real(z.real)
    sign = "+" if z.imag >= 0 else "-"
    return f"{real(z.real)}{sign}{real(abs(z.imag))}i"


def parse_complex(text):
    # a numeric literal directly followed by i or j is an imaginary literal
    text = re.sub(r"(\d\.?)\s*[ij]\b", r"\1*I", text)
    try:
        val = sympy.sympify(text, locals={"i": sympy.I, "j": sympy.I, "I": sympy.I})
        return complex(val.evalf(30))
    except (sympy.SympifyError, TypeError, AttributeError) as exc:
        raise ValidationError(f"cannot parse {text!r} as a number") from exc


def parse_angle(text):
    if text is None:
        return None
    if text.lower() in ("zero", "0"):
        return None
    try:
        n = int(text)
    except ValueError:
        raise ValidationError(f"angle must be an integer n (for pi/n) or 'zero', got {text!r}") from None
    if n < 3:
        raise ValidationError("angle denominator must be at least 3")
    return n


def _json_default(o):
    if isinstance(o, (np.bool_,)):
        return bool(o)
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating, float)):
        return float(o)
    if isinstance(o, complex) or isinstance(o, np.complexfloating):
        return [float(o.real), float(o.imag)]
    if isinstance(o, np.ndarray):
        return [_json_default(v) if np.iscomplexobj(v) else v for v in o.tolist()]
    if isinstance(o, tl.Stratum):
        return str(o)
    return str(o)


def _rounded(o):
    """Floats rounded through %.12g so that output is stable across platforms."""
    if isinstance(o, dict):
        return {k: _rounded(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_rounded(v) for v in o]
    if isinstance(o, (float, np.floating)):
        return o if not math.isfinite(o) else float("%.12g" % o)
    if isinstance(o, (complex, np.complexfloating)):
        return [_rounded(float(o.real)), _rounded(float(o.imag))]
    if isinstance(o, np.ndarray):
        return _rounded(o.tolist())
    if isinstance(o, (np.bool_,)):
        return bool(o)
    if isinstance(o, (np.integer,)):
        return int(o)
    return o


def emit(args, payload, text=None):
    """Write JSON (or preformatted text) to --out or stdout."""
    if text is None:
        payload = _rounded(payload)
    out = text if text is not None else json.dumps(payload, indent=2, sort_keys=True, default=_json_default)
    if args.out:
        Path(args.out).write_text(out + ("" if out.endswith("\n") else "\n"))
    else:
        sys.stdout.write(out + ("" if out.endswith("\n") else "\n"))


def _sibling(path, suffix):
    return str(Path(path).with_suffix(suffix))


# -- selection ---------------------------------------------------------------------------

def select_tiling(args):
    if getattr(args, "tiling", None):
        t = tl.loads(Path(args.tiling).read_text())
        return t, "tiling"
    if not args.family:
        raise ValidationError("give --family or --tiling")
    fam = args.family
    if fam.upper() in CASES:
        return tl.case_tiling(fam.upper()), fam.upper()
    if fam.lower() not in tl.FAMILIES:
        raise ValidationError(f"unknown family {fam!r}")
    if args.genus is None:
        raise ValidationError("--genus is required for the families")
    return tl.family_tiling(fam.lower(), args.genus), fam.lower()


def select_spec(args, t, name):
    if args.angle is not None:
        n = parse_angle(args.angle)
    elif name in CASES:
        n = 4
    elif name in tl.FAMILIES:
        n = tl.family_required_n(name, args.genus)
    else:
        n = tl.vertex_analysis(t)["m"]
    L = parse_complex(args.L).real if args.L else square_L(n)
    return QuadrangleSpec(L, n, args.twist or 0.0)


def load_config(args):
    cfg = ms.SolverConfig()
    kw = {}
    if getattr(args, "config", None):
        cp = configparser.ConfigParser()
        cp.read_string("[solver]\n" + Path(args.config).read_text())
        sec = cp["solver"]
        for key, conv in (("levels", int), ("tol", float), ("grading", float), ("base", int)):
            if key in sec:
                kw[key] = conv(sec[key])
    if getattr(args, "levels", None):
        kw["levels"] = args.levels
    if getattr(args, "tol", None):
        kw["tol"] = args.tol
    return ms.SolverConfig(**{**cfg.__dict__, **kw})


# -- commands ----------------------------------------------------------------------------

def cmd_enumerate(args):
    if args.squares == 4 and args.balanced:
        tilings = tl.enumerate_balanced_four()
    else:
        keep = (lambda t: tl.vertex_analysis(t)["balanced"]) if args.balanced else (lambda t: True)
        tilings = tl.enumerate_surfaces(args.squares, keep)
    rows = []
    for t in tilings:
        va = tl.vertex_analysis(t)
        rows.append({
            "code": tl.canonical_code(t),
            "stratum": str(va["stratum"]),
            "horizontal_widths": tl.cylinder_decomposition(t)["widths"],
            "tiling": tl.to_json_dict(t),
        })
    payload = {"squares": args.squares, "count": len(rows), "tilings": rows}
    if args.orbits:
        case_codes = {}
        if args.squares == 4:
            case_codes = {tl.canonical_code(tl.case_tiling(c)): c for c in CASES}
        orbits = []
        for orb in tl.orbit_partition(tilings):
            label = next((case_codes[c] for c in orb if c in case_codes), None)
            strata = sorted({str(tl.vertex_analysis(tl.from_code(c))["stratum"]) for c in orb})
            orbits.append({"case": label, "size": len(orb), "strata": strata, "members": orb})
        payload["orbits"] = orbits
    emit(args, payload)


def _matrix_json(M):
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(M)]


def cmd_group(args):
    t, name = select_tiling(args)
    spec = select_spec(args, t, name)
    pres, lay, rep = fx.check_tiling(t, spec)
    payload = {
        "tiling": name,
        "L": spec.L, "n": spec.n, "t": spec.t,
        "flavor": pres.flavor,
        "words": [fx.format_word(w) for w in pres.words],
        "pairings": [[list(a), list(b)] for a, b in pres.pairings],
        "matrices": [_matrix_json(M) for M in pres.matrices],
        "report": rep,
    }
    emit(args, payload)
    return 0 if rep["ok"] else 3


def domain_png(layout, path):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 5))
    th = np.linspace(0, 2 * np.pi, 400)
    ax.plot(np.cos(th), np.sin(th), color="black", lw=0.8)
    partner = layout.tiling.partner
    order = sorted({tuple(sorted(p)) for p in partner.items()})
    color = {}
    for k, (a, b) in enumerate(order):
        color[a] = color[b] = fx.PALETTE[k % len(fx.PALETTE)]
    tree = {(i, s) for i, s, _, _ in tl.tree_edges(layout.tiling)} | {(j, s2) for _, _, j, s2 in tl.tree_edges(layout.tiling)}
    for key, arc in layout.edges.items():
        z = arc.sample(48)
        if key in tree:
            ax.plot(z.real, z.imag, color="0.6", lw=0.6)
        else:
            ax.plot(z.real, z.imag, color=color.get(key, "black"), lw=1.6)
    ax.set_aspect("equal")
    ax.set_xlim(-1.05, 1.05)
    ax.set_ylim(-1.05, 1.05)
    ax.axis("off")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def cmd_domain(args):
    t, name = select_tiling(args)
    spec = select_spec(args, t, name)
    lay = fx.layout_fundamental_domain(t, spec)
    svg = fx.layout_svg(lay)
    if args.out:
        Path(args.out).write_text(svg)
        domain_png(lay, _sibling(args.out, ".png"))
    else:
        sys.stdout.write(svg)


def cmd_mu(args):
    if args.tau is None:
        raise ValidationError("--tau is required")
    mu = ei.mu_from_tau(parse_complex(args.tau))
    emit(args, None, fmt(mu))


def cmd_tau(args):
    if args.mu is None:
        raise ValidationError("--mu is required")
    tau = ei.tau_from_mu(parse_complex(args.mu))
    emit(args, None, fmt(tau))


def cmd_solve(args):
    if args.L is None:
        raise ValidationError("--L is required")
    n = parse_angle(args.angle or "4")
    spec = QuadrangleSpec(ms.parse_expr(args.L), n)
    cfg = load_config(args)
    tau = ms.tau_from_quadrangle(spec, cfg)
    mu = ei.mu_from_tau(tau)
    emit(args, {"L": spec.L, "n": n, "tau": fmt(tau), "mu": fmt(mu)})


def table_png(records, path):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for lab in sorted({r["angle"] for r in records}):
        rs = [r for r in records if r["angle"] == lab and not math.isnan(r["mu_computed"])]
        ax.scatter([r["mu_table"] for r in rs], [max(r["delta"], 1e-16) for r in rs], label=lab, s=14)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.axhline(1e-3, color="gray", ls="--", lw=0.8)
    ax.set_xlabel("tabulated mu")
    ax.set_ylabel("|computed - tabulated|")
    ax.legend(fontsize=7)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def cmd_table(args):
    cfg = load_config(args)
    if args.angle in (None, "all"):
        angles = list(ms.MU_TABLES)
    else:
        angles = [parse_angle(args.angle)]
    recs = []
    for a in angles:
        if a not in ms.MU_TABLES:
            raise ValidationError(f"no table for angle {args.angle}")
        recs += ms.reproduce_mu_table(a, cfg=cfg)
    text = ms.table_csv(recs)
    if args.out:
        Path(args.out).write_text(text)
        table_png(recs, _sibling(args.out, ".png"))
    else:
        sys.stdout.write(text)
    return 0


def cmd_equation(args):
    if not args.family or args.family.lower() not in tl.FAMILIES:
        raise ValidationError("--family must be one of " + ", ".join(tl.FAMILIES))
    if args.genus is None or args.mu is None:
        raise ValidationError("--genus and --mu are required")
    curve = cf.family_equation(args.family.lower(), args.genus, mu=parse_complex(args.mu))
    payload = curve.to_json()
    ints = cf.integer_coefficients(curve)
    if ints is not None:
        payload["integer_coefficients"] = ints
    emit(args, payload)


def cmd_fn(args):
    if args.family and args.family.upper() in CASES and args.tiling is None:
        L = parse_complex(args.L).real if args.L else square_L(4)
        coords = fn.fn_for_family(args.family.upper(), fn.case_ell(L), args.twist or 0)
    else:
        t, name = select_tiling(args)
        coords = fn.fn_for_orbit(t, select_spec(args, t, name))
    emit(args, coords.to_json())


def cmd_twist(args):
    along = args.along
    if along in ("phi1", "phi2"):
        L = parse_complex(args.L).real if args.L else square_L(4)
        if not args.family or args.family.upper() not in CASES:
            raise ValidationError("fractional twists need --family A, B, C or D")
        coords = fn.fn_for_family(args.family.upper(), fn.case_ell(L), args.twist or 0)
        coords = fn.fractional_twist(coords, "horizontal" if along == "phi1" else "vertical")
        emit(args, coords.to_json())
        return 0
    t, name = select_tiling(args)
    img = fn.half_twist_tiling(t, along)
    payload = {
        "source": name,
        "along": along,
        "code": tl.canonical_code(img),
        "stratum": str(tl.vertex_analysis(img)["stratum"]),
        "tiling": tl.to_json_dict(img),
    }
    if t.count == 4:
        for c in CASES:
            if tl.is_isomorphic(img, tl.case_tiling(c)):
                payload["case"] = c
    emit(args, payload)
    return 0


COMMANDS = {
    "enumerate": cmd_enumerate,
    "group": cmd_group,
    "domain": cmd_domain,
    "mu": cmd_mu,
    "tau": cmd_tau,
    "solve": cmd_solve,
    "table": cmd_table,
    "equation": cmd_equation,
    "fn": cmd_fn,
    "twist": cmd_twist,
}


def build_parser():
    p = argparse.ArgumentParser(prog="multigeo", description="Square-tiled surfaces, their Fuchsian groups and curves.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--squares", type=int, default=None)
        s.add_argument("--balanced", action="store_true")
        s.add_argument("--orbits", action="store_true")
        s.add_argument("--family")
        s.add_argument("--tiling", help="tiling JSON file")
        s.add_argument("--genus", type=int)
        s.add_argument("--angle", help="n for angle pi/n, or 'zero'")
        s.add_argument("--L")
        s.add_argument("--twist", type=float)
        s.add_argument("--mu")
        s.add_argument("--tau")
        s.add_argument("--along", default="gamma",
                       choices=("gamma", "gamma1", "gamma2", "gamma3", "phi1", "phi2"))
        s.add_argument("--out")
        s.add_argument("--format", choices=("json", "csv", "svg"))
        s.add_argument("--tol", type=float)
        s.add_argument("--levels", type=int)
        s.add_argument("--config", help="key=value file overriding solver defaults")
    return p


def run(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "enumerate" and args.squares is None:
        args.squares = 4
    try:
        code = COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (OSError, configparser.Error) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return code or 0


def main():
    sys.exit(run())
