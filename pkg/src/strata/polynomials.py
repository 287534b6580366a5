"""Sparse multivariate polynomials over exact or floating complex scalars.

Exponent keys are tuples of length d; coefficients are ComplexRational in
exact mode and Python complex otherwise.  Zero coefficients are dropped on
construction, so ``not p.coeffs`` is the zero test.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ShapeError, ValidationError
from .scalars import ComplexRational, is_exact_scalar, to_complex, to_exact


class Poly:
    __slots__ = ("d", "coeffs", "exact")

    def __init__(self, d: int, coeffs: dict | None = None, exact: bool = False):
        self.d = int(d)
        self.exact = bool(exact)
        self.coeffs = {}
        if coeffs:
            for exps, c in coeffs.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != self.d or any(e < 0 for e in exps):
                    raise ValidationError(f"bad exponent tuple {exps} for d={self.d}")
                c = to_exact(c) if self.exact else complex(c)
                if c == 0 or (not self.exact and c == 0j):
                    continue
                if exps in self.coeffs:
                    c = self.coeffs[exps] + c
                    if c == 0:
                        del self.coeffs[exps]
                        continue
                self.coeffs[exps] = c

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def constant(d: int, value, exact: bool = False) -> "Poly":
        return Poly(d, {(0,) * d: value}, exact)

    @staticmethod
    def variable(d: int, a: int, exact: bool = False) -> "Poly":
        if not 0 <= a < d:
            raise ValidationError(f"variable index {a} out of range for d={d}")
        e = [0] * d
        e[a] = 1
        return Poly(d, {tuple(e): 1}, exact)

    # -- structure -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        return max((sum(e) for e in self.coeffs), default=-1)

    def _check(self, other: "Poly"):
        if self.d != other.d:
            raise ShapeError(f"polynomials in {self.d} and {other.d} variables")
        if self.exact != other.exact:
            raise ShapeError("mixed exact and floating polynomials")

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.d == other.d and self.coeffs == other.coeffs

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        terms = ", ".join(f"{e}:{c}" for e, c in sorted(self.coeffs.items()))
        return f"Poly({terms})"

    # -- algebra ----------------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(self.d, other, self.exact)
        self._check(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e, None)
            s = c if s is None else s + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        p = Poly(self.d, None, self.exact)
        p.coeffs = out
        return p

    __radd__ = __add__

    def __neg__(self):
        p = Poly(self.d, None, self.exact)
        p.coeffs = {e: -c for e, c in self.coeffs.items()}
        return p

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(self.d, other, self.exact)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = to_exact(other) if self.exact else complex(other)
            if c == 0:
                return Poly(self.d, None, self.exact)
            p = Poly(self.d, None, self.exact)
            p.coeffs = {e: v * c for e, v in self.coeffs.items()}
            return p
        self._check(other)
        out: dict = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, None)
                v = c1 * c2
                s = v if s is None else s + v
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        p = Poly(self.d, None, self.exact)
        p.coeffs = out
        return p

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValidationError("negative polynomial power")
        result = Poly.constant(self.d, 1, self.exact)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def diff(self, a: int) -> "Poly":
        out: dict = {}
        for e, c in self.coeffs.items():
            if e[a] == 0:
                continue
            ne = list(e)
            ne[a] -= 1
            out[tuple(ne)] = c * e[a]
        p = Poly(self.d, None, self.exact)
        p.coeffs = out
        return p

    def eval(self, point):
        """Evaluate at a point; exact when self and the point are exact."""
        if len(point) != self.d:
            raise ShapeError(f"point of length {len(point)} for d={self.d}")
        if self.exact and all(is_exact_scalar(x) or isinstance(x, ComplexRational) for x in point):
            pt = [to_exact(x) for x in point]
            acc = ComplexRational(0)
            for e, c in self.coeffs.items():
                term = c
                for x, k in zip(pt, e):
                    for _ in range(k):
                        term = term * x
                acc = acc + term
            return acc
        pt = [to_complex(x) for x in point]
        acc = 0j
        for e, c in self.coeffs.items():
            term = to_complex(c)
            for x, k in zip(pt, e):
                if k:
                    term *= x ** k
            acc += term
        return acc

    def subs_univariate(self, curves: list["Poly"]) -> "Poly":
        """Compose with d univariate polynomials t -> (c_1(t), ..., c_d(t))."""
        if len(curves) != self.d:
            raise ShapeError("need one curve component per variable")
        for c in curves:
            if c.d != 1:
                raise ShapeError("curve components must be univariate")
            if c.exact != self.exact:
                raise ShapeError("mixed exact and floating composition")
        acc = Poly(1, None, self.exact)
        for e, coef in self.coeffs.items():
            term = Poly.constant(1, coef, self.exact)
            for comp, k in zip(curves, e):
                if k:
                    term = term * comp ** k
            acc = acc + term
        return acc

    def to_float(self) -> "Poly":
        if not self.exact:
            return self
        p = Poly(self.d, None, False)
        p.coeffs = {e: to_complex(c) for e, c in self.coeffs.items()}
        return p

    def to_sympy(self, symbols):
        import sympy

        expr = sympy.Integer(0)
        for e, c in self.coeffs.items():
            if self.exact:
                cc = sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(
                    c.im.numerator, c.im.denominator
                )
            else:
                z = to_complex(c)
                cc = sympy.Float(z.real) + sympy.I * sympy.Float(z.imag)
            mono = sympy.Integer(1)
            for s, k in zip(symbols, e):
                mono *= s ** k
            expr += cc * mono
        return expr


def poly_from_terms(d: int, terms, exact: bool | None = None) -> Poly:
    """Build a Poly from [(exps, re, im), ...] or [{"exps":..,"re":..,"im":..}].

    Exactness is auto-detected: if every re/im is an int or a fraction
    string, the result is exact; any genuine float makes it floating.
    """
    norm = []
    sawfloat = False
    for t in terms:
        if isinstance(t, dict):
            exps, re, im = t["exps"], t.get("re", 0), t.get("im", 0)
        else:
            exps, re, im = t
        for v in (re, im):
            if isinstance(v, float) and not float(v).is_integer():
                sawfloat = True
        norm.append((tuple(int(e) for e in exps), re, im))
    if exact is None:
        exact = not sawfloat
    coeffs: dict = {}
    for exps, re, im in norm:
        if exact:
            c = ComplexRational(Fraction(re) if not isinstance(re, float) else Fraction(int(re)),
                                Fraction(im) if not isinstance(im, float) else Fraction(int(im)))
        else:
            c = complex(float(re if not isinstance(re, str) else Fraction(re)),
                        float(im if not isinstance(im, str) else Fraction(im)))
        if exps in coeffs:
            coeffs[exps] = coeffs[exps] + c
        else:
            coeffs[exps] = c
    return Poly(d, coeffs, exact)
