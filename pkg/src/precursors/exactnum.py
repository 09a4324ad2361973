"""
Exact rationals and the field Q(N) of rational functions in the matrix size.

Rationals are :class:`fractions.Fraction`.  Rational functions are stored as a
pair of ``flint.fmpq_poly`` in canonical form: coprime numerator and
denominator, monic denominator, zero represented as ``0/1``.  Canonical form
makes equality a representational comparison.
"""

from __future__ import annotations

from fractions import Fraction
import math

import flint

__all__ = [
    "RatFuncN",
    "PoleError",
    "DivergenceError",
    "as_fraction",
    "fraction_text",
    "invert_matrix",
]

_Poly = flint.fmpq_poly
_ZERO = _Poly([])
_ONE = _Poly([1])


class PoleError(ZeroDivisionError):
    """Evaluation hit a zero of the denominator."""


class DivergenceError(ArithmeticError):
    """Numerator degree exceeds denominator degree at N -> infinity."""


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions, fmpq and rational strings (``"p/q"``, ``"0.25"``)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, flint.fmpq):
        return Fraction(int(x.p), int(x.q))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def fraction_text(q) -> str:
    q = as_fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _fmpq(x):
    if isinstance(x, flint.fmpq):
        return x
    q = as_fraction(x)
    return flint.fmpq(q.numerator, q.denominator)


def _as_poly(x):
    if isinstance(x, _Poly):
        return x
    if isinstance(x, (list, tuple)):
        return _Poly([_fmpq(c) for c in x])
    return _Poly([_fmpq(x)])


def _canon(num, den):
    if num.is_zero():
        return _ZERO, _ONE
    g = num.gcd(den)
    if not g.is_one():
        num = num // g
        den = den // g
    lc = den.leading_coefficient()
    if lc != 1:
        num = num / lc
        den = den / lc
    return num, den


class RatFuncN:
    """
    Element of Q(N), kept in lowest terms with a monic denominator.

    Parameters
    ----------
    num, den : int, Fraction, str, list of coefficients, or fmpq_poly
        Coefficient lists run from the constant term upward.

    Examples
    --------
    >>> N = RatFuncN.gen()
    >>> str(N**2 / (N**2 - 1) - 1)
    '1/(N^2-1)'
    """

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=1):
        num = _as_poly(num)
        den = _as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self.num, self.den = _canon(num, den)

    @classmethod
    def _raw(cls, num, den):
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        return obj

    @classmethod
    def gen(cls) -> "RatFuncN":
        """The indeterminate N."""
        return cls._raw(_Poly([0, 1]), _ONE)

    @classmethod
    def const(cls, c) -> "RatFuncN":
        return cls._raw(_Poly([_fmpq(c)]) if c else _ZERO, _ONE)

    # ---- coercion -------------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, RatFuncN):
            return x
        if isinstance(x, (int, Fraction, flint.fmpq)):
            return RatFuncN.const(x)
        return None

    # ---- predicates -----------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_constant(self) -> bool:
        return self.den.is_one() and self.num.degree() <= 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return Fraction(0) if self.num.is_zero() else as_fraction(self.num[0])

    # ---- arithmetic -----------------------------------------------------

    def __neg__(self):
        return RatFuncN._raw(-self.num, self.den)

    def __pos__(self):
        return self

    def __add__(self, other):
        o = RatFuncN._coerce(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        a, b, c, d = self.num, self.den, o.num, o.den
        if b == d:
            if b.is_one():
                return RatFuncN._raw(a + c, _ONE) if not (a + c).is_zero() else RatFuncN._raw(_ZERO, _ONE)
            return RatFuncN._raw(*_canon(a + c, b))
        g = b.gcd(d)
        if g.is_one():
            return RatFuncN._raw(a * d + b * c, b * d)
        b1 = b // g
        d1 = d // g
        num = a * d1 + c * b1
        if num.is_zero():
            return RatFuncN._raw(_ZERO, _ONE)
        h = num.gcd(g)
        if not h.is_one():
            num = num // h
            g = g // h
        return RatFuncN._raw(num, b1 * d1 * g)

    __radd__ = __add__

    def __sub__(self, other):
        o = RatFuncN._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = RatFuncN._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return RatFuncN._raw(_ZERO, _ONE)
            return RatFuncN._raw(self.num * _fmpq(other), self.den)
        o = RatFuncN._coerce(other)
        if o is None:
            return NotImplemented
        if self.num.is_zero() or o.num.is_zero():
            return RatFuncN._raw(_ZERO, _ONE)
        a, b, c, d = self.num, self.den, o.num, o.den
        if b.is_one() and d.is_one():
            return RatFuncN._raw(a * c, _ONE)
        g1 = a.gcd(d)
        g2 = c.gcd(b)
        if not g1.is_one():
            a = a // g1
            d = d // g1
        if not g2.is_one():
            c = c // g2
            b = b // g2
        num, den = a * c, b * d
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        return RatFuncN._raw(num, den)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        num, den = self.den, self.num
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        return RatFuncN._raw(num, den)

    def __truediv__(self, other):
        o = RatFuncN._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = RatFuncN._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        return RatFuncN._raw(self.num ** k, self.den ** k)

    # ---- comparison -----------------------------------------------------

    def __eq__(self, other):
        o = RatFuncN._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self.den.is_one() and self.num.degree() <= 0:
            return hash(self.constant_value())
        return hash((tuple(self.num.coeffs()), tuple(self.den.coeffs())))

    # ---- evaluation and asymptotics --------------------------------------

    def eval_at(self, n0) -> Fraction:
        """Exact value at ``N = n0``; raises :class:`PoleError` at a pole."""
        x = _fmpq(n0)
        d = self.den(x)
        if d == 0:
            raise PoleError(f"{self} has a pole at N={n0}")
        return as_fraction(self.num(x) / d)

    def __call__(self, n0):
        return self.eval_at(n0)

    def degrees(self):
        """Degrees of (numerator, denominator); the zero function has numerator degree -1."""
        return self.num.degree(), self.den.degree()

    def limit_at_infinity(self) -> Fraction:
        dn, dd = self.degrees()
        if dn < dd:
            return Fraction(0)
        if dn == dd:
            return as_fraction(self.num.leading_coefficient())
        raise DivergenceError(f"{self} diverges as N -> infinity")

    def series_in_inverse_N(self, order: int) -> list:
        """Coefficients of N^0, N^-1, ..., N^-order of the expansion at infinity."""
        dn, dd = self.degrees()
        if dn > dd:
            raise DivergenceError(f"{self} diverges as N -> infinity")
        # substitute x = 1/N: f = rev(num)(x) / rev(den)(x), rev(den)(0) = 1
        a = [Fraction(0)] * (dd + 1)
        for i, c in enumerate(self.num.coeffs()):
            a[dd - i] = as_fraction(c)
        b = [Fraction(0)] * (dd + 1)
        for i, c in enumerate(self.den.coeffs()):
            b[dd - i] = as_fraction(c)
        out = []
        for k in range(order + 1):
            s = a[k] if k < len(a) else Fraction(0)
            for j in range(1, min(k, dd) + 1):
                s -= b[j] * out[k - j]
            out.append(s)
        return out

    # ---- serialisation ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "num": [fraction_text(c) for c in self.num.coeffs()] or ["0"],
            "den": [fraction_text(c) for c in self.den.coeffs()],
        }

    @classmethod
    def from_json(cls, obj) -> "RatFuncN":
        return cls([as_fraction(c) for c in obj["num"]], [as_fraction(c) for c in obj["den"]])

    def integer_parts(self):
        """Integer coefficient lists (num, den), jointly primitive, den leading coefficient > 0."""
        nc = [as_fraction(c) for c in self.num.coeffs()]
        dc = [as_fraction(c) for c in self.den.coeffs()]
        lcm = 1
        for c in nc + dc:
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        ni = [int(c * lcm) for c in nc]
        di = [int(c * lcm) for c in dc]
        g = 0
        for c in ni + di:
            g = math.gcd(g, c)
        return [c // g for c in ni], [c // g for c in di]

    def __str__(self):
        if self.num.is_zero():
            return "0"
        ni, di = self.integer_parts()
        num = _poly_text(ni)
        if di == [1]:
            return num
        den = _poly_text(di)
        if sum(1 for c in ni if c) > 1:
            num = f"({num})"
        if sum(1 for c in di if c) > 1 or (di[-1] != 1 and len(di) > 1):
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"RatFuncN({self})"


def _poly_text(coeffs) -> str:
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = str(a)
        else:
            mono = "N" if k == 1 else f"N^{k}"
            body = mono if a == 1 else f"{a}*{mono}"
        parts.append((sign, body))
    if not parts:
        return "0"
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += sign + body
    return text


def invert_matrix(rows):
    """
    Exact Gauss-Jordan inverse of a square matrix over a field.

    Entries may be RatFuncN or Fraction; the list of rows is not modified.
    """
    n = len(rows)
    a = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        inv = Fraction(1, p) if isinstance(p, int) else 1 / p
        a[col] = [x * inv if x != 0 else x for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y if y != 0 else x for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]
