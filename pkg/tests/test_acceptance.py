"""Acceptance criteria 1 to 8; each test prints one CRITERION line."""
import math
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest
import sympy

from multigeo import curve_families as cf
from multigeo import elliptic_invariants as ei
from multigeo import fenchel_nielsen as fn
from multigeo import fuchsian as fx
from multigeo import module_solver as ms
from multigeo import tiling as tl
from multigeo.equiquadrangle import QuadrangleSpec, square_L
from multigeo.errors import DomainError

STATE = {}


@contextmanager
def criterion(k, report, detail):
    notes = []
    try:
        yield notes
    except Exception as exc:
        report(f"CRITERION {k}: FAIL {detail} ({type(exc).__name__}: {exc})")
        raise
    extra = f" [{'; '.join(notes)}]" if notes else ""
    report(f"CRITERION {k}: PASS {detail}{extra}")


def test_criterion_1_enumeration(report):
    with criterion(1, report, "balanced four-square enumeration and orbits") as notes:
        t0 = time.perf_counter()
        tilings = tl.enumerate_balanced_four()
        orbits = tl.orbit_partition(tilings)
        elapsed = time.perf_counter() - t0
        assert len(tilings) == 19
        cases = {tl.canonical_code(tl.case_tiling(c)): c for c in "ABCD"}
        expected = {"A": (6, "H(1,1)"), "B": (3, "Q(2,2)"), "C": (4, "H(1,1)"), "D": (6, "Q(2,2)")}
        seen = {}
        for orb in orbits:
            (label,) = [cases[c] for c in orb if c in cases]
            strata = {str(tl.vertex_analysis(tl.from_code(c))["stratum"]) for c in orb}
            assert len(strata) == 1
            seen[label] = (len(orb), strata.pop())
        assert seen == expected
        assert elapsed < 10
        notes.append(f"19 tilings, orbits {seen}, {elapsed:.1f} s")


def test_criterion_2_invariants(report):
    STATE["c2"] = False
    assert abs(ei.mu_from_tau(1j) - 2) < 1e-10
    assert abs(ei.mu_from_tau(0.5 + 0.5j) - 0.5) < 1e-10
    worst = 0.0
    for im in np.linspace(0.5, 2.0, 20):
        tau = complex(0, im)
        worst = max(worst, abs(ei.tau_from_mu(ei.mu_from_tau(tau)) - tau))
    assert worst < 1e-8
    coh = 0.0
    for mu in (1.5, 2.0, 3.0, 10.0):
        tau = ei.tau_from_mu(mu)
        for op, f in ei.TAU_OPS.items():
            coh = max(coh, abs(ei.mu_from_tau(f(tau)) - ei.modular_mu(mu, op)))
    assert coh < 1e-7
    STATE["c2"] = True
    STATE["c2_notes"] = f"round trip {worst:.1e}, coherence {coh:.1e}"


@pytest.mark.xfail(strict=True, reason="the product gives the conjugate value (1 - i sqrt3)/2 at the hexagonal point")
def test_criterion_2_hexagonal_value(report):
    tau = (1 + 1j * math.sqrt(3)) / 2
    mu = ei.mu_from_tau(tau)
    target = (1 + 1j * math.sqrt(3)) / 2
    ok = abs(mu - target) < 1e-10
    other = STATE.get("c2_notes", "other checks did not run")
    status = "PASS" if ok and STATE.get("c2") else "FAIL"
    report(f"CRITERION 2: {status} genus-one invariants [mu((1+i sqrt3)/2) = {mu:.12g}, "
           f"expected {target:.12g}; i, (1+i)/2, round trip and coherence "
           f"{'pass' if STATE.get('c2') else 'fail'} ({other})]")
    assert ok


def test_criterion_3_tables(report):
    with criterion(3, report, "zero-twist tables") as notes:
        worst_sq = 0.0
        for n in (3, 4, 6, 8):
            worst_sq = max(worst_sq, abs(ms.mu_from_quadrangle(QuadrangleSpec(square_L(n), n)) - 2))
        assert worst_sq < 1e-4
        spots = [(4, "sqrt(2)", "4/3"), (4, "sqrt(6)/2", "4"), (None, "sqrt(3)", "9/8"),
                 (None, "sqrt(2)", "2"), (6, "(1+sqrt(3))/2", "2")]
        for n, L, mu in spots:
            got = ms.mu_from_quadrangle(QuadrangleSpec(ms.parse_expr(L), n))
            assert abs(got - ms.parse_expr(mu)) < 1e-3, (n, L)
        t0 = time.perf_counter()
        recs = [r for a in ms.MU_TABLES for r in ms.reproduce_mu_table(a)]
        elapsed = time.perf_counter() - t0
        assert elapsed < 600
        findings = [r for r in recs if r["status"] != "pass"]
        worst = max(recs, key=lambda r: r["delta"])
        notes.append(f"squares within {worst_sq:.1e}; {len(recs)} rows in {elapsed:.0f} s; "
                     f"{len(findings)} findings; largest delta {worst['delta']:.1e} at "
                     f"{worst['angle']}, L = {worst['L_expr']}")


def test_criterion_4_poincare(report):
    with criterion(4, report, "Poincare verification") as notes:
        cases = [(t, QuadrangleSpec(square_L(4), 4)) for t in tl.enumerate_balanced_four()]
        for fam, g in (("st1", 2), ("st2", 2), ("esc1", 3), ("escb1", 2)):
            cases.append((tl.family_tiling(fam, g), QuadrangleSpec(1.7, tl.family_required_n(fam, g))))
        worst_angle = 0.0
        for t, spec in cases:
            _, _, rep = fx.check_tiling(t, spec)
            assert rep["ok"] and not rep["edge_failures"]
            for cyc in rep["vertex_cycles"]:
                worst_angle = max(worst_angle, abs(cyc["angle_sum"] - 2 * math.pi))
        assert worst_angle < 1e-8
        notes.append(f"{len(cases)} surfaces, worst angle-sum error {worst_angle:.1e}")


def test_criterion_5_words(report):
    with criterion(5, report, "derived pairing words") as notes:
        for fam, g in (("st1", 2), ("st2", 2), ("esc1", 3), ("esc2", 3), ("escb1", 2), ("escb2", 2)):
            t = tl.family_tiling(fam, g)
            spec = QuadrangleSpec(1.7, tl.family_required_n(fam, g))
            pres, _, rep = fx.check_tiling(t, spec)
            assert rep["ok"], fam
            assert len(pres.words) == len(fx.family_words(fam, g)), fam
        notes.append("six families clean, generator counts match the literal lists")


def test_criterion_6_curves(report):
    with criterion(6, report, "curve algebra") as notes:
        for fam, g in (("esc1", 3), ("esc1", 5), ("escb2", 2), ("escb2", 4), ("st1", 2), ("st1", 3)):
            got = cf.integer_coefficients(cf.family_equation(fam, g, mu=2))
            assert got == cf.square_tiled_closed_form(fam, g), (fam, g)
        cover = max(cf.cover_residual(cf.caseA_data(a=a)) for a in (1.7, 2.5, 0.6 + 0.3j))
        assert cover < 1e-9
        assert max(cf.caseC_certificates(cf.caseC_data(1)).values()) < 1e-9
        mu = sympy.symbols("mu", positive=True)
        for s in (1, -1):
            a2 = 2 * mu - 2 + s * 2 * sympy.sqrt(mu ** 2 - mu)
            assert sympy.simplify(sympy.radsimp(-a2 ** 2 / (4 * (a2 + 1)) - (1 - mu))) == 0
        rng = np.random.default_rng(2024)
        worst = 0.0
        for t in rng.uniform(0.2, 4.0, 10):
            worst = max(worst, max(cf.caseC_certificates(cf.caseC_data(t)).values()))
        for m in rng.uniform(1.05, 20.0, 10):
            cert = cf.caseD_certificates(cf.caseD_data(m))
            worst = max(worst, max(max(v.values()) for v in cert.values()))
        assert worst < 1e-9
        orb = max(cf.orbit_polynomial("B", 1)["residual"], cf.orbit_polynomial("A", 3)["residual"],
                  cf.orbit_polynomial("C", 1)["residual"])
        assert orb < 1e-8
        notes.append(f"cover {cover:.1e}, random certificates {worst:.1e}, orbit polynomials {orb:.1e}")


def test_criterion_7_fenchel_nielsen(report):
    with criterion(7, report, "Fenchel-Nielsen relations") as notes:
        worst = 0.0
        for case in "ABCD":
            for L in (1.2, 1.7):
                c1, c3 = fn.gamma3_measured(case, L)
                ell = fn.case_ell(L)
                lp = fn.fn_for_family(case, ell).lengths[2]
                assert abs(math.cosh(lp / 2) - (2 * math.cosh(ell / 2) + 1)) < 1e-8 * math.cosh(lp / 2)
                worst = max(worst, abs(c3 - (2 * c1 + 1)) / c3, abs(c1 - math.cosh(ell / 2)) / c1)
        assert worst < 1e-8
        code = {c: tl.canonical_code(tl.case_tiling(c)) for c in "ABCD"}
        assert tl.canonical_code(fn.half_twist_tiling(tl.case_tiling("B"))) == code["A"]
        assert tl.canonical_code(fn.half_twist_tiling(tl.case_tiling("A"))) == code["B"]
        assert tl.canonical_code(fn.half_twist_tiling(tl.case_tiling("C"), "gamma3")) == code["D"]
        assert tl.canonical_code(fn.half_twist_tiling(tl.case_tiling("D"), "gamma3")) == code["C"]
        for case in "ABCD":
            t = tl.case_tiling(case)
            c0 = fn.fn_for_orbit(t, QuadrangleSpec(1.4, 4, 0))
            c1 = fn.fn_for_orbit(t, QuadrangleSpec(1.4, 4, 1))
            for (_, a), (_, b), w in zip(c0.pairs, c1.pairs, c0.widths):
                assert fn.twist_shift(b) - fn.twist_shift(a) == Fraction(1, w)
        tw = fn.fractional_twist(fn.fn_for_family("A", 1.0)).twists
        assert tw == (Fraction(1, 2), Fraction(1, 2), 0)
        notes.append(f"measured relative error {worst:.1e}")


def test_criterion_8_trace_triples(report):
    with criterion(8, report, "trace triples") as notes:
        worst = 0.0
        for L, n in ((1.5, 3), (1.3, 4), (2.2, 6), (1.8, 8), (1.7, None)):
            a = fn.trace_triple(QuadrangleSpec(L, n)).as_tuple()
            b = fn.zero_twist_triple(L, n).as_tuple()
            worst = max(worst, max(abs(x - y) / max(1.0, abs(y)) for x, y in zip(a, b)))
        assert worst < 1e-12
        solved = {}
        skipped = []
        for n, rows in fn.TWISTED_TRIPLES.items():
            for k in range(len(rows)):
                target = fn.tabulated_triple(n, k)
                try:
                    best = fn.solve_triple(target, n)[0]
                except DomainError:
                    skipped.append(f"pi/{n} row {k + 1}")
                    continue
                if best["residual"] < 1e-6:
                    solved[n] = solved.get(n, 0) + 1
        assert all(solved.get(n, 0) >= 3 for n in fn.TWISTED_TRIPLES)
        notes.append(f"closed form {worst:.1e}; solved per angle {solved}; "
                     f"rejected (x^2 < 4): {', '.join(skipped) or 'none'}")
