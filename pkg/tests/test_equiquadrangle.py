import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from multigeo import hyperbolic_core as hc
from multigeo.equiquadrangle import (QuadrangleSpec, build_generators, hexagonal_L, interior_angles,
                                     l_prime, lambert_lengths, measured_lambert_lengths,
                                     side_half_length, special_generators, square_L,
                                     vertex_geometry)
from multigeo.errors import ImaginaryLPrime, UnsupportedCase, WrongAngle


def test_square_case_has_equal_medians():
    for n in (3, 4, 5, 6, 8, None):
        L = square_L(n)
        assert l_prime(L, n) == pytest.approx(L, abs=1e-12)
    assert square_L(None) == pytest.approx(math.sqrt(2), abs=1e-15)


def test_zero_angle_l_prime():
    assert l_prime(math.sqrt(2), None) == pytest.approx(math.sqrt(2), abs=1e-14)
    L = 1.7
    assert l_prime(L, None) == pytest.approx(L / math.sqrt(L * L - 1), abs=1e-14)


def test_third_angle_traces():
    g = build_generators(QuadrangleSpec(1.5, 3))
    assert np.trace(g.A).real == pytest.approx(3.0, abs=1e-12)
    Lp = np.trace(g.B).real / 2
    assert Lp * Lp == pytest.approx(6 / 5, abs=1e-12)


def test_generator_axes():
    g = build_generators(QuadrangleSpec(1.4, 5))
    a = hc.axis_of(g.A)
    b = hc.axis_of(g.B)
    assert abs(a.start.imag) < 1e-10 and abs(a.end.imag) < 1e-10
    assert abs(b.start.real) < 1e-10 and abs(b.end.real) < 1e-10


def test_invalid_specs():
    with pytest.raises(ImaginaryLPrime):
        QuadrangleSpec(0.5, 4)
    with pytest.raises(ImaginaryLPrime):
        QuadrangleSpec(1.5, 2)
    with pytest.raises(UnsupportedCase):
        special_generators("half", None)
    with pytest.raises(UnsupportedCase):
        special_generators("pentagon", 4)


def test_hexagonal_zero_matrices():
    g = special_generators("hexagonal", None)
    s5 = math.sqrt(5)
    assert np.allclose(g.A, [[1.5, s5 / 2], [s5 / 2, 1.5]], atol=1e-12)
    assert abs(g.B[0, 0] - 1.5) < 1e-12
    assert abs(g.B[0, 1] - (3 + 4j) * s5 / 10) < 1e-12
    assert abs(g.B[1, 0] - (3 - 4j) * s5 / 10) < 1e-12
    assert hexagonal_L(None) == 1.5


def test_half_period_traces():
    L = square_L(4)
    g = special_generators("half", 4)
    assert np.trace(g.A).real == pytest.approx(2 * L * L, abs=1e-12)
    assert np.trace(g.B).real == pytest.approx(2 * L, abs=1e-12)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 8])
def test_interior_angles(n):
    for L in (square_L(n), 1.3, 2.5):
        if L * L <= 1 - math.cos(math.pi / n) ** 2:
            continue
        angles = interior_angles(vertex_geometry(QuadrangleSpec(L, n)))
        for a in angles.values():
            assert a == pytest.approx(math.pi / n, abs=1e-8)


def test_ideal_vertices_at_zero_angle():
    geom = vertex_geometry(QuadrangleSpec(math.sqrt(2), None))
    assert all(abs(abs(q) - 1) < 1e-12 for q in geom.q)
    assert all(v == 0.0 for v in interior_angles(geom).values())


@settings(max_examples=30, deadline=None)
@given(st.floats(1.05, 4.0), st.sampled_from([3, 4, 5, 6, 8]))
def test_vertex_symmetries(L, n):
    geom = vertex_geometry(QuadrangleSpec(L, n))
    q1, q2, q3, q4 = geom.q
    assert abs(q4 - np.conj(q1)) < 1e-12
    assert abs(q2 + np.conj(q1)) < 1e-12
    p1 = geom.p[0]
    assert hc.disk_distance(p1, -p1) == pytest.approx(2 * math.acosh(L), rel=1e-10)
    # the vertex lies on both orthogonal geodesics
    assert hc.cosh_distance(geom.p[1], q1) == pytest.approx(L / math.sin(math.pi / n), rel=1e-9)


def test_lambert_relations_small_values():
    L = math.sqrt(1.5)  # L1 = 2
    ll = lambert_lengths(QuadrangleSpec(L, 4))
    assert ll["L1"] == pytest.approx(2)
    assert ll["L2"] == pytest.approx(3)
    assert ll["L3"] == pytest.approx(5)
    assert ll["L4"] == pytest.approx(7)
    # without a twist the sheared values reduce to the plain ones
    assert ll["L2_twisted"] == pytest.approx(ll["L2"])
    assert ll["L4_twisted"] == pytest.approx(ll["L4"])


@pytest.mark.parametrize("L", [1.1, 1.5, 2.0, 3.0])
@pytest.mark.parametrize("t", [0.0, 0.25, 0.5, -0.3])
def test_lambert_relations_match_measurement(L, t):
    spec = QuadrangleSpec(L, 4, t)
    formula = lambert_lengths(spec)
    measured = measured_lambert_lengths(spec)
    for key, value in formula.items():
        assert measured[key] == pytest.approx(value, rel=1e-9), key


def test_lambert_needs_right_angle_case():
    with pytest.raises(WrongAngle):
        lambert_lengths(QuadrangleSpec(1.5, 3))


def test_side_half_length():
    assert side_half_length(QuadrangleSpec(2.0, 4)) == pytest.approx(math.acosh(2 * math.sqrt(2)))
    assert side_half_length(QuadrangleSpec(2.0, None)) == math.inf


@pytest.mark.parametrize("n", [3, 4, 5, 6, 8, None])
@pytest.mark.parametrize("t", [0.0, 0.3])
def test_commutator_trace(n, t):
    g = build_generators(QuadrangleSpec(1.6, n, t))
    C = g.A @ g.B @ hc.inverse(g.A) @ hc.inverse(g.B)
    expected = -2.0 if n is None else -2 * math.cos(2 * math.pi / n)
    assert abs(np.trace(C).real - expected) < 1e-10 or abs(np.trace(C).real + expected) < 1e-10
    assert abs(np.trace(C).imag) < 1e-10


def test_twist_keeps_horizontal_generator():
    g0 = build_generators(QuadrangleSpec(1.6, 4))
    g1 = build_generators(QuadrangleSpec(1.6, 4, 0.4))
    assert np.allclose(g0.A, g1.A)
    assert np.allclose(g1.B, g1.T @ g1.B0)
    # e1 is an involution
    assert hc.same_map(g1.e1 @ g1.e1, -hc.IDENTITY, 1e-10) or hc.same_map(g1.e1 @ g1.e1, hc.IDENTITY, 1e-10)
