import math

import numpy as np
import pytest

from starburst import (
    BivariatePolynomial,
    CapabilityError,
    MAX_RADIAL_ORDER,
    WaveAberration,
    ZernikeTerm,
)


def all_valid_terms(max_order):
    for n in range(max_order + 1):
        for m in range(-n, n + 1):
            if (n - abs(m)) % 2 == 0:
                yield n, m


class TestTermValidation:
    @pytest.mark.parametrize("n,m", [(2, 1), (3, 2), (1, -2), (4, 3), (5, 0)])
    def test_parity_or_range_violations_rejected(self, n, m):
        with pytest.raises(ValueError):
            ZernikeTerm(n, m, 0.1)

    def test_radial_order_cap(self):
        ZernikeTerm(MAX_RADIAL_ORDER, 0, 0.1)
        with pytest.raises(CapabilityError):
            ZernikeTerm(MAX_RADIAL_ORDER + 2, 0, 0.1)

    def test_negative_order_rejected(self):
        with pytest.raises(ValueError):
            ZernikeTerm(-2, 0, 0.1)


class TestKnownValues:
    def test_defocus_at_center(self):
        poly = ZernikeTerm(2, 0, 1.0).to_polynomial()
        assert poly(0.0, 0.0) == pytest.approx(-math.sqrt(3.0), abs=1e-14)

    def test_defocus_zero_crossing(self):
        poly = ZernikeTerm(2, 0, 1.0).to_polynomial()
        assert poly(0.5, 0.5) == pytest.approx(0.0, abs=1e-14)

    def test_trefoil_at_origin(self):
        assert ZernikeTerm(3, 3, 1.0).to_polynomial()(0.0, 0.0) == 0.0

    def test_trefoil_on_axis(self):
        # theta = 0 lies along +y, where rho^3 cos(3 theta) peaks
        poly = ZernikeTerm(3, 3, 1.0).to_polynomial()
        assert poly(0.0, 1.0) == pytest.approx(math.sqrt(8.0), rel=1e-14)

    def test_spherical_at_rim(self):
        poly = ZernikeTerm(4, 0, 1.0).to_polynomial()
        assert poly(0.0, 1.0) == pytest.approx(math.sqrt(5.0), rel=1e-14)

    def test_zero_polynomial_evaluates_to_zero(self):
        zero = BivariatePolynomial(np.zeros((1, 1)))
        assert zero(0.3, -0.7) == 0.0
        assert zero.degree == -1


class TestPolarAgreement:
    def test_cartesian_matches_polar_form(self):
        rng = np.random.default_rng(42)
        rho = np.sqrt(rng.uniform(0.0, 1.0, 10_000))
        theta = rng.uniform(0.0, 2.0 * np.pi, 10_000)
        x, y = rho * np.sin(theta), rho * np.cos(theta)
        for n, m in all_valid_terms(8):
            term = ZernikeTerm(n, m, 1.0)
            trig = np.cos(abs(m) * theta) if m >= 0 else np.sin(abs(m) * theta)
            reference = term.normalization * term.radial_polynomial(rho) * trig
            np.testing.assert_allclose(
                term.to_polynomial()(x, y), reference, rtol=1e-12, atol=1e-12
            )

    def test_degree_is_exactly_n(self):
        for n, m in all_valid_terms(MAX_RADIAL_ORDER):
            assert ZernikeTerm(n, m, 0.7).to_polynomial().degree == n


class TestDifferentiation:
    def test_constant_derivative_is_zero(self):
        const = BivariatePolynomial(np.array([[3.5]]))
        assert const.differentiate("x").is_zero
        assert const.differentiate("y").is_zero

    def test_power_rule(self):
        # d/dx (x^2 y) = 2 x y
        poly = BivariatePolynomial(np.array([[0.0, 0.0], [0.0, 0.0], [0.0, 1.0]]))
        dx = poly.differentiate("x")
        np.testing.assert_array_equal(dx.coeffs, np.array([[0.0, 0.0], [0.0, 2.0]]))

    def test_mixed_partials_commute(self):
        rng = np.random.default_rng(3)
        poly = BivariatePolynomial(rng.normal(size=(7, 7)))
        xy = poly.differentiate("x").differentiate("y")
        yx = poly.differentiate("y").differentiate("x")
        # coefficient maps agree to the last couple of ulps (the two orders
        # round the integer scalings differently)
        np.testing.assert_allclose(xy.coeffs, yx.coeffs, rtol=1e-14, atol=0.0)
        # and exactly for integer-coefficient polynomials
        ipoly = BivariatePolynomial(rng.integers(-9, 9, size=(6, 6)).astype(float))
        np.testing.assert_array_equal(
            ipoly.differentiate("x").differentiate("y").coeffs,
            ipoly.differentiate("y").differentiate("x").coeffs,
        )

    def test_degree_drops_by_one(self):
        poly = ZernikeTerm(6, 6, 0.19).to_polynomial()
        assert poly.differentiate("x").degree == poly.degree - 1

    def test_matches_central_differences(self):
        rng = np.random.default_rng(7)
        rho = np.sqrt(rng.uniform(0.0, 1.0, 200))
        theta = rng.uniform(0.0, 2.0 * np.pi, 200)
        x, y = rho * np.sin(theta), rho * np.cos(theta)
        h = 1e-6
        for n, m in all_valid_terms(8):
            poly = ZernikeTerm(n, m, 1.0).to_polynomial()
            fd_x = (poly(x + h, y) - poly(x - h, y)) / (2.0 * h)
            fd_y = (poly(x, y + h) - poly(x, y - h)) / (2.0 * h)
            np.testing.assert_allclose(poly.differentiate("x")(x, y), fd_x, atol=1e-6)
            np.testing.assert_allclose(poly.differentiate("y")(x, y), fd_y, atol=1e-6)

    def test_invalid_axis_rejected(self):
        with pytest.raises(ValueError):
            ZernikeTerm(2, 0, 1.0).to_polynomial().differentiate("z")


class TestPolynomialAlgebra:
    def test_product_against_pointwise(self):
        rng = np.random.default_rng(11)
        a = BivariatePolynomial(rng.normal(size=(4, 3)))
        b = BivariatePolynomial(rng.normal(size=(3, 5)))
        x = rng.uniform(-1, 1, 50)
        y = rng.uniform(-1, 1, 50)
        np.testing.assert_allclose((a * b)(x, y), a(x, y) * b(x, y), rtol=1e-12)

    def test_rescale_domain(self):
        poly = ZernikeTerm(4, 4, 0.3).to_polynomial()
        scaled = poly.rescale_domain(2.0)
        x, y = 0.37, -0.81
        assert scaled(2.0 * x, 2.0 * y) == pytest.approx(poly(x, y), rel=1e-13)

    def test_immutability(self):
        poly = ZernikeTerm(2, 0, 1.0).to_polynomial()
        with pytest.raises(ValueError):
            poly.coeffs[0, 0] = 99.0


class TestOrthogonalitySmoke:
    def test_defocus_spherical_disk_integral_small(self):
        z20 = ZernikeTerm(2, 0, 1.0).to_polynomial()
        z40 = ZernikeTerm(4, 0, 1.0).to_polynomial()
        xs = np.linspace(-1.0, 1.0, 1024)
        X, Y = np.meshgrid(xs, xs, indexing="ij")
        inside = X**2 + Y**2 <= 1.0
        cell = (xs[1] - xs[0]) ** 2
        integral = np.sum(z20(X, Y)[inside] * z40(X, Y)[inside]) * cell / np.pi
        assert abs(integral) < 1e-3


class TestWaveAberration:
    def test_duplicate_indices_rejected(self):
        with pytest.raises(ValueError):
            WaveAberration((ZernikeTerm(2, 0, 0.1), ZernikeTerm(2, 0, 0.2)))

    def test_pupil_radius_positive(self):
        with pytest.raises(ValueError):
            WaveAberration((ZernikeTerm(2, 0, 0.1),), pupil_radius=0.0)

    def test_degree(self):
        w = WaveAberration((ZernikeTerm(4, 0, 0.2), ZernikeTerm(3, 3, 0.2)))
        assert w.degree() == 4
        assert WaveAberration(()).degree() == 0

    def test_sum_matches_terms(self):
        terms = (ZernikeTerm(2, 0, 0.1), ZernikeTerm(4, 0, 0.2), ZernikeTerm(5, 5, 0.05))
        w = WaveAberration(terms)
        total = w.to_polynomial()
        x, y = 0.21, -0.55
        expected = sum(t.to_polynomial()(x, y) for t in terms)
        assert total(x, y) == pytest.approx(expected, rel=1e-13)
