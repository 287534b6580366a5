"""Sparse polynomials and truncated multivariate power series."""

from fractions import Fraction

import pytest

from strata.errors import NotInvertibleError, ShapeError, ValidationError
from strata.polynomials import Poly, poly_from_terms
from strata.scalars import ComplexRational
from strata.series import SeriesMatrix, SeriesRing, TruncatedSeries


def X(d, a):
    return Poly.variable(d, a, exact=True)


class TestPoly:
    def test_arithmetic_and_eval(self):
        x, y = X(2, 0), X(2, 1)
        p = (x + y) * (x - y)
        assert p.coeffs.get((2, 0)) == 1 and p.coeffs.get((0, 2)) == -1
        assert (1, 1) not in p.coeffs
        v = p.eval([Fraction(3), Fraction(2)])
        assert v == ComplexRational(5, 0)

    def test_zero_coefficients_dropped(self):
        x = X(1, 0)
        p = x - x
        assert p.is_zero() and p.coeffs == {}

    def test_pow_and_diff(self):
        x, y = X(2, 0), X(2, 1)
        p = (x + y) ** 3
        assert p.coeffs.get((2, 1)) == 3
        assert p.diff(0).coeffs.get((1, 1)) == 6

    def test_mixed_exactness_rejected(self):
        with pytest.raises(ValidationError):
            X(1, 0) + Poly.variable(1, 0, exact=False)
        with pytest.raises(ShapeError):
            X(1, 0) + X(2, 0)

    def test_subs_univariate(self):
        x, y = X(2, 0), X(2, 1)
        t = X(1, 0)
        p = x * y + x
        q = p.subs_univariate([t, t * t])
        assert q.coeffs.get((3,)) == 1 and q.coeffs.get((1,)) == 1

    def test_poly_from_terms(self):
        p = poly_from_terms(2, [((1, 0), "2", 0), ((0, 0), 1, 0)])
        assert p.exact
        assert p.coeffs.get((1, 0)) == 2 and p.coeffs.get((0, 0)) == 1

    def test_to_float(self):
        p = X(1, 0).to_float()
        assert not p.exact
        assert abs(p.eval([0.5]) - 0.5) < 1e-15


class TestSeriesRing:
    def test_var_includes_center(self):
        ring = SeriesRing(2, 3, ["1", "2"], exact=True)
        s = ring.var(0)
        assert s.constant_term() == 1
        assert s.coeff((1, 0)) == 1

    def test_from_poly_expands_about_center(self):
        ring = SeriesRing(1, 4, ["2"], exact=True)
        p = X(1, 0) * X(1, 0)
        s = ring.from_poly(p)
        # (u+2)^2 = u^2 + 4u + 4 in the local coordinate u = x - 2
        assert s.constant_term() == 4
        assert s.coeff((1,)) == 4
        assert s.coeff((2,)) == 1
        assert s.valid == ring.K

    def test_compatibility_is_structural(self):
        r1 = SeriesRing(2, 3, ["0", "1"], exact=True)
        r2 = SeriesRing(2, 3, ["0", "1"], exact=True)
        assert r1.compatible(r2)
        assert not r1.compatible(SeriesRing(2, 4, ["0", "1"], exact=True))
        assert not r1.compatible(SeriesRing(2, 3, ["0", "0"], exact=True))
        s = r1.var(0) + r2.var(1)
        assert s.coeff((1, 0)) == 1 and s.coeff((0, 1)) == 1


class TestTruncatedSeries:
    def setup_method(self):
        self.ring = SeriesRing(2, 4, ["0", "0"], exact=True)

    def test_truncation_in_products(self):
        x = self.ring.var(0)
        p = (x * x) * (x * x) * x  # degree 5 > K = 4
        assert p.is_zero()

    def test_valid_tracking_through_division(self):
        one_plus = self.ring.one() + self.ring.var(0)
        inv = one_plus.invert()
        # geometric series 1 - x + x^2 - ...
        assert inv.coeff((3, 0)) == -1
        prod = one_plus * inv
        assert (prod - self.ring.one()).is_zero()

    def test_invert_requires_unit(self):
        with pytest.raises(NotInvertibleError):
            self.ring.var(0).invert()

    def test_diff_lowers_valid(self):
        x = self.ring.var(0)
        s = (x * x).diff(0)
        assert s.coeff((1, 0)) == 2
        assert s.valid == self.ring.K - 1

    def test_eval_at_center_offset(self):
        ring = SeriesRing(1, 5, ["1"], exact=True)
        s = ring.var(0) * ring.var(0)
        v = s.eval([Fraction(3, 2)])
        assert v == ComplexRational(Fraction(9, 4), 0)

    def test_scale_and_subtraction(self):
        x = self.ring.var(0)
        s = x.scale(Fraction(2, 3)) - x.scale(Fraction(2, 3))
        assert s.is_zero()


class TestSeriesMatrix:
    def setup_method(self):
        self.ring = SeriesRing(1, 3, ["0"], exact=True)

    def test_matmul_and_commutator(self):
        t = self.ring.var(0)
        z = self.ring.zero()
        a = self.ring.matrix([[z, t], [z, z]])
        b = self.ring.matrix([[self.ring.one(), z], [z, -self.ring.one()]])
        c = a.commutator(b)
        assert (c.entry(0, 1) + t.scale(2)).is_zero()
        assert c.entry(0, 0).is_zero() and c.entry(1, 1).is_zero()

    def test_identity_and_shape(self):
        i2 = self.ring.identity_matrix(2)
        a = self.ring.matrix([[self.ring.var(0), self.ring.zero()]])
        assert a.shape == (1, 2)
        assert (i2 @ i2 - i2).is_zero()
        with pytest.raises(ShapeError):
            a @ a

    def test_min_valid(self):
        t = self.ring.var(0)
        m = self.ring.matrix([[t.diff(0), t], [t, t]])
        assert m.min_valid() == self.ring.K - 1

    def test_max_abs_through(self):
        t = self.ring.var(0)
        m = self.ring.matrix([[t.scale(Fraction(5, 2))]])
        assert m.max_abs() == 2.5
        assert m.max_abs(through=0) == 0.0
