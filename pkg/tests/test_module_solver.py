import csv
import io
import math

import pytest

from multigeo import module_solver as ms
from multigeo.equiquadrangle import QuadrangleSpec, square_L
from multigeo.errors import DomainError, UnsupportedCase


def rectangle(a, b):
    return ms.ArcQuadDomain((0, a, a + 1j * b, 1j * b), ms._segment(0, a), ms._segment(a, a + 1j * b),
                            ms._segment(1j * b, a + 1j * b), ms._segment(0, 1j * b))


@pytest.mark.parametrize("a,b", [(1.0, 1.0), (2.0, 0.5), (0.7, 1.9)])
def test_rectangle_energy_is_exact(a, b):
    dom = rectangle(a, b)
    assert ms.dirichlet_energy(dom, 8, 1.0) == pytest.approx(a / b, rel=1e-12)
    assert ms.dirichlet_energy(dom, 8, 1.0, dual=True) == pytest.approx(b / a, rel=1e-12)
    assert ms.module_energy(dom)["energy"] == pytest.approx(a / b, rel=1e-10)


@pytest.mark.parametrize("n", [3, 4, 6, 8])
def test_quarter_domain_angles(n):
    dom = ms.build_domain(QuadrangleSpec(1.6, n))
    angles = dom.interior_angles()
    expected = (math.pi / 2, math.pi / 2, math.pi / n, math.pi / 2)
    for got, want in zip(angles, expected):
        assert got == pytest.approx(want, abs=1e-4)


def test_twisted_domain_rejected():
    with pytest.raises(UnsupportedCase):
        ms.build_domain(QuadrangleSpec(1.6, 4, 0.2))


@pytest.mark.parametrize("n", [3, 4, 6, 8])
def test_square_case_is_two(n):
    spec = QuadrangleSpec(square_L(n), n)
    assert abs(ms.tau_from_quadrangle(spec) - 1j) < 1e-5
    assert ms.mu_from_quadrangle(spec) == pytest.approx(2, abs=1e-4)


@pytest.mark.parametrize("n,L,mu", [
    (4, "sqrt(2)", "4/3"),
    (4, "sqrt(6)/2", "4"),
    (None, "sqrt(3)", "9/8"),
    (None, "sqrt(2)", "2"),
    (6, "(1+sqrt(3))/2", "2"),
])
def test_spot_rows(n, L, mu):
    got = ms.mu_from_quadrangle(QuadrangleSpec(ms.parse_expr(L), n))
    assert got == pytest.approx(ms.parse_expr(mu), abs=1e-3)


@pytest.mark.parametrize("L,n", [(1.4, 4), (2.0, 3), (math.sqrt(3), None)])
def test_duality(L, n):
    assert ms.duality_product(QuadrangleSpec(L, n)) == pytest.approx(1, abs=1e-6)


def test_mu_decreases_with_L():
    values = [ms.mu_from_quadrangle(QuadrangleSpec(L, 4)) for L in (1.2, 1.4, 1.7, 2.1)]
    assert all(x > y > 1 for x, y in zip(values, values[1:]))


def test_config_validation():
    with pytest.raises(DomainError):
        ms.SolverConfig(levels=1)


def test_parse_expr():
    assert ms.parse_expr("sqrt(6)/2") == pytest.approx(math.sqrt(6) / 2, abs=1e-15)
    assert ms.parse_expr("sqrt(cos(pi/8)+1)") == pytest.approx(square_L(8), abs=1e-15)
    with pytest.raises(DomainError):
        ms.parse_expr("sqrt(")


def test_table_rows_and_csv():
    rows = ms.reproduce_mu_table(8, rows=ms.MU_TABLES[8][2:3] + [("1/2", "3")])
    assert rows[0]["status"] == "pass"
    assert rows[1]["status"].startswith("error")
    text = ms.table_csv(rows)
    parsed = list(csv.reader(io.StringIO(text)))
    assert tuple(parsed[0]) == ms.CSV_COLUMNS
    assert len(parsed) == 3
    assert ms.angle_label(None) == "0" and ms.angle_label(4) == "pi/4"


def test_table_finding_reported():
    rows = ms.reproduce_mu_table(4, rows=[("sqrt(2)", "5/3")])
    assert rows[0]["status"] == "finding" and rows[0]["delta"] > 0.3
