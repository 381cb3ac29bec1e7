from __future__ import annotations

import math

import numpy as np
import pytest

from wlab.curvature import (
    QuadratureError,
    _density,
    _integrate_polar,
    gauss_curvature,
    spherical_derivative,
    total_curvature_closed_form,
    total_curvature_quadrature,
)
from wlab.rational import RationalFunction
from wlab.weierstrass import WeierstrassData

Z = RationalFunction.variable()
ONE = RationalFunction.constant(1)
ZERO = RationalFunction.constant(0)


def test_spherical_derivative_identity_map():
    # |1| / (1 + |z|^2)
    assert spherical_derivative(Z, 0.0) == pytest.approx(1.0)
    assert spherical_derivative(Z, 1.0) == pytest.approx(0.5)
    assert spherical_derivative(Z, 3j) == pytest.approx(0.1)


def test_spherical_derivative_finite_at_pole():
    g = 1 / (Z - 1)
    assert spherical_derivative(g, 1.0) == pytest.approx(1.0)


def test_gauss_curvature_known_values():
    both = WeierstrassData(h=ONE, g1=Z, g2=Z, punctures=("inf",))
    assert gauss_curvature(both, 0.0) == pytest.approx(-4.0)
    single = WeierstrassData(h=ONE, g1=Z, g2=ZERO, punctures=("inf",))
    assert gauss_curvature(single, 0.0) == pytest.approx(-2.0)


def test_gauss_curvature_flat():
    flat = WeierstrassData(h=ONE, g1=ZERO, g2=RationalFunction.constant(2j), punctures=("inf",))
    for z in (0.0, 1.5 - 2j, 40.0):
        assert gauss_curvature(flat, z) == 0.0


def test_gauss_curvature_nonpositive_everywhere():
    fixtures = [
        WeierstrassData(h=1 / ((Z - 1) * (Z - 2) * (Z - 3)), g1=Z, g2=Z, punctures=("1", "2", "3", "inf")),
        WeierstrassData(h=1 / (Z * (Z - 1)), g1=Z, g2=ZERO, punctures=("0", "1", "inf")),
        WeierstrassData(h=1 / Z**3, g1=Z, g2=ONE, punctures=("0", "inf")),
        WeierstrassData(h=ONE, g1=Z**2, g2=(Z**2 + 1) / (Z - 1), punctures=("inf",)),
    ]
    rng = np.random.default_rng(23)
    for data in fixtures:
        z = rng.normal(size=250) + 1j * rng.normal(size=250)
        k = gauss_curvature(data, z)
        k = k[np.isfinite(k)]
        assert np.all(k <= 1e-15)


def test_gauss_curvature_finite_at_compensated_pole():
    data = WeierstrassData(h=(Z - 1) ** 2, g1=1 / (Z - 1), g2=1 / (Z - 1), punctures=("inf",))
    assert gauss_curvature(data, 1.0) == pytest.approx(-4.0)


def test_gauss_curvature_errors():
    data = WeierstrassData(h=1 / Z, g1=Z, g2=ZERO, punctures=("0", "inf"))
    with pytest.raises(ValueError):
        gauss_curvature(data, 0.0)
    branchy = WeierstrassData(h=Z, g1=ZERO, g2=ZERO, punctures=("inf",))
    with pytest.raises(ValueError):
        gauss_curvature(branchy, 0.0)


# ---------------------------------------------------------------------------
# total curvature


def test_total_curvature_quadrature_degree_one():
    data = WeierstrassData(h=ONE, g1=Z, g2=ZERO, punctures=("inf",))
    tau = total_curvature_quadrature(data)
    assert tau == pytest.approx(-2 * math.pi, rel=0.01)


def test_total_curvature_quadrature_degree_two():
    data = WeierstrassData(h=ONE, g1=Z, g2=Z, punctures=("inf",))
    assert total_curvature_quadrature(data) == pytest.approx(-4 * math.pi, rel=0.01)


def test_total_curvature_quadrature_degree_four():
    data = WeierstrassData(h=ONE, g1=Z**2, g2=(Z**2 + 1) / (Z - 1), punctures=("inf",))
    assert total_curvature_quadrature(data) == pytest.approx(-8 * math.pi, rel=0.01)


def test_total_curvature_quadrature_flat_zero():
    data = WeierstrassData(h=ONE, g1=ZERO, g2=ZERO, punctures=("inf",))
    assert total_curvature_quadrature(data) == pytest.approx(0.0, abs=1e-12)


def test_quadrature_cell_budget_diagnostic():
    import dataclasses

    from wlab.tolerances import Tolerances

    data = WeierstrassData(h=ONE, g1=Z**2, g2=(Z**2 + 1) / (Z - 1), punctures=("inf",))
    impossible = dataclasses.replace(Tolerances(), quad_rtol=1e-16)
    with pytest.raises(QuadratureError) as err:
        total_curvature_quadrature(data, tol=impossible, max_cells=64)
    assert err.value.cells >= 64


def test_chart_independence_on_overlap():
    # the image of the annulus 0.5 <= |z| <= 1 under z = 1/w is 1 <= |w| <= 2
    g1, g2 = Z**2, 1 / (Z - 3)
    direct = _integrate_polar(_density(g1, g2), 0.5, 1.0, 1e-4, 20000)
    flipped = _integrate_polar(
        _density(g1.reciprocal_argument(), g2.reciprocal_argument()), 1.0, 2.0, 1e-4, 20000
    )
    assert direct == pytest.approx(flipped, rel=1e-3)


def test_closed_form_universal_cover():
    data = WeierstrassData(h=1 / ((Z - 1) * (Z - 2) * (Z - 3)), g1=Z, g2=Z,
                           punctures=("1", "2", "3", "inf"))
    report = total_curvature_closed_form(data)
    assert report.basic_domain_value == pytest.approx(-4 * math.pi)
    assert not report.period_ok
    assert report.surface_verdict == "infinite-universal-cover"
    assert report.surface_value == -math.inf


def test_closed_form_algebraic():
    data = WeierstrassData(h=1 / Z**3, g1=Z, g2=ONE, punctures=("0", "inf"))
    report = total_curvature_closed_form(data)
    assert report.basic_domain_value == pytest.approx(-2 * math.pi)
    assert report.period_ok
    assert report.surface_verdict == "finite-algebraic"
    assert report.surface_value == pytest.approx(-2 * math.pi)
    assert (report.d1, report.d2) == (1, 0)


def test_closed_form_flat():
    data = WeierstrassData(h=ONE, g1=ZERO, g2=ZERO, punctures=("inf",))
    report = total_curvature_closed_form(data)
    assert report.surface_verdict == "flat"
    assert report.surface_value == 0.0


def test_quadrature_matches_closed_form_across_fixtures():
    fixtures = [
        WeierstrassData(h=1 / ((Z - 1) * (Z - 2) * (Z - 3)), g1=Z, g2=Z, punctures=("1", "2", "3", "inf")),
        WeierstrassData(h=1 / (Z * (Z - 1)), g1=Z, g2=ZERO, punctures=("0", "1", "inf")),
        WeierstrassData(h=1 / Z**3, g1=Z, g2=ONE, punctures=("0", "inf")),
    ]
    for data in fixtures:
        expect = total_curvature_closed_form(data).basic_domain_value
        assert total_curvature_quadrature(data) == pytest.approx(expect, rel=0.01)
