import cmath
import json
import math

import numpy as np
import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from multigeo import curve_families as cf
from multigeo.elliptic_invariants import modular_mu
from multigeo.errors import BadParity, DegenerateParameter, DomainError


def binomial_st1(g):
    """Independent closed form: expand x * sum (-1)^k C(4g, 2k) x^k with sympy."""
    x = sympy.symbols("x")
    expr = x * sum((-1) ** k * sympy.binomial(4 * g, 2 * k) * x ** k for k in range(2 * g + 1))
    return [int(c) for c in sympy.Poly(expr, x).all_coeffs()]


def test_mu_a_conversion():
    assert cf.a_from_mu(2) == 0
    assert abs(cf.mu_from_a(cf.a_from_mu(3.7)) - 3.7) < 1e-12
    with pytest.raises(DegenerateParameter):
        cf.a_from_mu(0)


@pytest.mark.parametrize("g", [2, 3])
def test_stairs_closed_form(g):
    c = cf.integer_coefficients(cf.family_equation("st1", g, mu=2))
    assert c == binomial_st1(g)
    assert c == cf.square_tiled_closed_form("st1", g)


def test_known_coefficients():
    assert cf.integer_coefficients(cf.family_equation("st1", 2, mu=2)) == [1, -28, 70, -28, 1, 0]
    assert cf.integer_coefficients(cf.family_equation("st2", 2, mu=2)) == [1, -14, 0, 14, -1, 0]
    assert cf.integer_coefficients(cf.family_equation("st2", 3, mu=2)) == [1, -44, 165, 0, -165, 44, -1, 0]
    assert cf.integer_coefficients(cf.family_equation("esc1", 3, mu=2)) == [1, 0, 0, 0, 0, 0, 0, 0, 1]
    assert cf.integer_coefficients(cf.family_equation("escb2", 2, mu=2)) == [1, 0, 0, 0, 1, 0]
    for fam, g in (("st2", 2), ("st2", 3), ("esc1", 3), ("escb2", 2), ("esc2", 3), ("escb1", 2)):
        assert cf.integer_coefficients(cf.family_equation(fam, g, mu=2)) == cf.square_tiled_closed_form(fam, g)


def test_family_equation_shapes():
    c = cf.family_equation("esc1", 3, a=0.5)
    assert c.degree == 8 and c.coefficients[4] == 0.5
    c = cf.family_equation("esc2", 3, a=0.5)
    assert c.degree == 7 and c.coefficients[3] == 0.5 and c.coefficients[-1] == 0
    assert cf.family_equation("st2", 3, a=0.3).differential == "(x+1)^2 dx / y"
    assert c.is_squarefree()
    d = json.loads(json.dumps(c.to_json()))
    assert set(d) == {"family", "genus", "parameters", "coefficients", "differential"}


def test_family_equation_errors():
    with pytest.raises(BadParity):
        cf.family_equation("esc1", 2, mu=2)
    with pytest.raises(BadParity):
        cf.family_equation("escb2", 3, mu=2)
    with pytest.raises(DegenerateParameter):
        cf.family_equation("esc1", 3, a=2)


@settings(max_examples=20, deadline=None)
@given(st.floats(-1.9, 1.9), st.sampled_from([2, 3, 4]))
def test_quotient_map(a, g):
    assert cf.quotient_map_residual(g, a) < 1e-9


@settings(max_examples=20, deadline=None)
@given(st.floats(-1.9, 1.9))
def test_elementary_isomorphism(a):
    assume(abs(a) > 1e-3)
    assert cf.elementary_isomorphism_residual(a) < 1e-9


@settings(max_examples=20, deadline=None)
@given(st.floats(-1.95, 1.95), st.sampled_from([2, 3]))
def test_stairs_real_coefficients(a, g):
    assert cf.st1_real_coefficients(g, a) < 1e-9


def test_case_a_cover():
    rng = np.random.default_rng(0)
    for a in [1.7, 0.6 + 0.3j, 2.5] + list(rng.uniform(1.1, 3, 5)):
        assert cf.cover_residual(cf.caseA_data(a=a)) < 1e-9
    d = cf.caseA_data(nu=3)
    assert abs(d["nu"] - 3) < 1e-12


def test_case_a_mu_two():
    roots = cf.a_for_mu_caseA(2)
    assert any(abs(r - (3 + 2 * math.sqrt(2))) < 1e-9 for r in roots)
    d = cf.caseA_data(a=cmath.sqrt(3 + 2 * math.sqrt(2)))
    assert abs(d["mu"] - 2) < 1e-12
    with pytest.raises(DegenerateParameter):
        cf.caseA_data(a=1)


@pytest.mark.parametrize("nu", [3.0, 0.7, 5 + 1j])
def test_nu_orbit_closed(nu):
    orbit = cf.nu_orbit(nu)
    for f in cf.NU_MAPS:
        images = [f(v) for v in orbit]
        for z in images:
            assert min(abs(z - w) for w in orbit) < 1e-9 * max(1, abs(z))


def test_case_b():
    d = cf.caseB_data(2)
    assert d["a"] == 0
    for mu in (1.5, 3.0, 7.0):
        d = cf.caseB_data(mu)
        c1, c2 = d["companions"]
        assert abs(c1 - cf.a_from_mu(modular_mu(mu, "Tm"))) < 1e-10
        assert abs(c2 - cf.a_from_mu(modular_mu(mu, "U"))) < 1e-10


def test_case_c_companions_of_one():
    assert np.allclose(cf.caseC_companions(1), [1, 2, -1.5, -4 / 3])
    lam = cf.caseC_lambda(1)
    for s in cf.caseC_companions(1):
        assert abs(cf.caseC_lambda(s) - lam) < 1e-12 * abs(lam)
        assert abs(cf.w_from_t(s) - cf.w_from_t(1)) < 1e-9


def test_case_c_certificates_at_one():
    cert = cf.caseC_certificates(cf.caseC_data(1))
    assert max(cert.values()) < 1e-9
    with pytest.raises(DegenerateParameter):
        cf.caseC_data(-1)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1, 5.0) | st.floats(-5.0, -0.1))
def test_case_c_certificates_random(t):
    assume(min(abs(t + 1), abs(t + 2), abs(t * t - 2)) > 0.05)
    assert max(cf.caseC_certificates(cf.caseC_data(t)).values()) < 1e-9


def test_case_c_quartic_roots_at_two():
    roots = np.roots(cf.caseC_quartic(2))
    real = sorted(r.real for r in roots if abs(r.imag) < 1e-9)
    cplx = [r for r in roots if abs(r.imag) >= 1e-9]
    assert len(real) == 2 and len(cplx) == 2
    assert real[1] > 2 and 0 < real[0] < 0.5
    labels = sorted(c["label"] for c in cf.caseC_candidates(2))
    assert labels == ["C1", "C2/C3", "C2/C3", "C4"]


def test_case_c_candidates_reproduce_mu():
    for mu in (2.0, 3.5):
        for cand in cf.caseC_candidates(mu):
            for t in cand["t"]:
                assert abs(cf.caseC_data(t)["mu"] - mu) < 1e-8 * mu


def test_case_d():
    d = cf.caseD_data(2)
    assert abs(d["branches"]["D1"]["a_squared"] - (2 + 2 * math.sqrt(2))) < 1e-12
    with pytest.raises(DomainError):
        cf.caseD_data(0.5)
    assert not cf.caseD_data(0.5 + 0.5j)["classified"]


def test_case_d_lambda_identity():
    rng = np.random.default_rng(1)
    for mu in rng.uniform(1.05, 20, 10):
        data = cf.caseD_data(mu)
        for br in data["branches"].values():
            assert abs(br["lambda"] - (1 - mu)) < 1e-9 * mu
        cert = cf.caseD_certificates(data)
        assert max(max(v.values()) for v in cert.values()) < 1e-9


def test_orbit_polynomials():
    b = cf.orbit_polynomial("B", 0)
    assert sorted(v.real for v in b["values"]) == [-6, 0, 6] and b["alpha"] == 0
    assert cf.orbit_polynomial("B", 1)["residual"] < 1e-9
    assert cf.orbit_polynomial("A", 3)["residual"] < 1e-8
    c = cf.orbit_polynomial("C", 1)
    assert len(c["values"]) == 4 and c["residual"] < 1e-8
    with pytest.raises(DomainError):
        cf.orbit_polynomial("E", 1)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.3, 5.0))
def test_orbit_polynomial_b_random(a):
    assume(abs(a - 2) > 0.05)
    assert cf.orbit_polynomial("B", a)["residual"] < 1e-8
