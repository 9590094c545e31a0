"""Exact scalars: rationals and Gaussian rationals, plus string parsing."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Union

from .errors import DomainError

Exact = Union[int, Fraction, "GaussianRational"]


class GaussianRational:
    """An element re + im*i of Q(i), with Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) + other
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) - other
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return other - complex(self)
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) * other
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) / other
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * o.conjugate()
        return GaussianRational(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return other / complex(self)
        return o / self

    def __pow__(self, k):
        if not isinstance(k, int):
            return complex(self) ** k
        if k < 0:
            return 1 / (self ** (-k))
        out = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __abs__(self):
        return abs(complex(self))

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __float__(self):
        if self.im != 0:
            raise TypeError("non-real Gaussian rational has no float value")
        return float(self.re)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({format_exact(self)!r})"

    def __str__(self):
        return format_exact(self)


def simplify(x):
    """Collapse a real GaussianRational to a Fraction; leave others alone."""
    if isinstance(x, GaussianRational) and x.im == 0:
        return x.re
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    return x


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, GaussianRational)) and not isinstance(x, bool)


def is_real_exact(x) -> bool:
    if isinstance(x, GaussianRational):
        return x.im == 0
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def is_integer(x) -> bool:
    """True for exact or floating integers (real, with zero imaginary part)."""
    if isinstance(x, GaussianRational):
        return x.im == 0 and x.re.denominator == 1
    if isinstance(x, Fraction):
        return x.denominator == 1
    if isinstance(x, int):
        return True
    if isinstance(x, complex):
        return x.imag == 0 and float(x.real).is_integer()
    if isinstance(x, float):
        return x.is_integer()
    return False


def is_nonpositive_integer(x) -> bool:
    return is_integer(x) and _real(x) <= 0


def _real(x):
    if isinstance(x, (GaussianRational, complex)):
        return x.real
    return x


def _parse_real(s: str) -> Fraction:
    if s in ("", "+"):
        return Fraction(1)
    if s == "-":
        return Fraction(-1)
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"cannot parse number {s!r}") from exc


def parse_exact(text) -> Exact:
    """Parse "7/2", "-3", "0.25", "1+1i", "1-i", "2i" into exact numbers.

    Real inputs come back as Fraction, non-real ones as GaussianRational.
    """
    if isinstance(text, (int, Fraction, GaussianRational)) and not isinstance(text, bool):
        return simplify(text)
    if not isinstance(text, str):
        raise DomainError(f"expected an exact string, got {type(text).__name__}")
    s = text.replace(" ", "").replace("j", "i")
    if not s:
        raise DomainError("empty number")
    if not s.endswith("i"):
        return _parse_real(s)
    body = s[:-1]
    split = max(body.rfind("+", 1), body.rfind("-", 1))
    if split <= 0:
        return simplify(GaussianRational(0, _parse_real(body)))
    re_part, im_part = body[:split], body[split:]
    if re_part.endswith("/"):
        raise DomainError(f"cannot parse number {text!r}")
    return simplify(GaussianRational(_parse_real(re_part), _parse_real(im_part)))


def as_rational(x) -> Fraction:
    """Coerce an exact real (int, Fraction, exact string) to Fraction."""
    if isinstance(x, str):
        x = parse_exact(x)
    if isinstance(x, GaussianRational):
        if x.im != 0:
            raise DomainError(f"expected a real rational, got {x}")
        return x.re
    if isinstance(x, bool) or not isinstance(x, Rational):
        raise DomainError(f"expected an exact rational, got {x!r}")
    return Fraction(x)


def as_gaussian(x) -> GaussianRational:
    if isinstance(x, str):
        x = parse_exact(x)
    if isinstance(x, GaussianRational):
        return x
    return GaussianRational(as_rational(x), 0)


def to_complex(x) -> complex:
    return complex(x)


def to_numeric(x):
    """Float for real inputs, complex otherwise (used by floating paths)."""
    if isinstance(x, GaussianRational):
        return float(x.re) if x.im == 0 else complex(x)
    if isinstance(x, complex):
        return x
    return float(x)


def format_fraction(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_exact(x) -> str:
    """Render an exact number as a parseable string ("7/2", "1+1i")."""
    if isinstance(x, GaussianRational):
        if x.im == 0:
            return format_fraction(x.re)
        im = format_fraction(abs(x.im))
        sign = "-" if x.im < 0 else "+"
        if x.re == 0:
            return f"{'-' if x.im < 0 else ''}{im}i"
        return f"{format_fraction(x.re)}{sign}{im}i"
    return format_fraction(Fraction(x))


def rising(x, n: int):
    """Rising factorial (x)_n = x(x+1)...(x+n-1) in the arithmetic of x."""
    out = 1
    for k in range(n):
        out = out * (x + k)
    return out
