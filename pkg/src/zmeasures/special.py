"""Gamma-function helpers: floating Gamma via scipy, exact ratios when possible."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from scipy import special as sp

from .exact import GaussianRational, is_nonpositive_integer, rising, to_numeric


def _num(x):
    if isinstance(x, (Fraction, int, GaussianRational)):
        return to_numeric(x)
    return x


def gamma(x):
    """Gamma at real or complex x; raises ZeroDivisionError at poles."""
    if is_nonpositive_integer(x):
        raise ZeroDivisionError(f"Gamma has a pole at {x}")
    v = _num(x)
    if isinstance(v, complex) and v.imag != 0:
        return complex(sp.gamma(v))
    return float(sp.gamma(float(np.real(v))))


def rgamma(x):
    """1/Gamma(x), exactly 0 at the poles."""
    if is_nonpositive_integer(x):
        return 0.0
    v = _num(x)
    if isinstance(v, complex) and v.imag != 0:
        return complex(sp.rgamma(v))
    return float(sp.rgamma(float(np.real(v))))


def loggamma(x):
    v = _num(x)
    if isinstance(v, complex) and v.imag != 0:
        return complex(sp.loggamma(v))
    return float(sp.gammaln(float(np.real(v))))


def gamma_ratio(x, y):
    """Gamma(x)/Gamma(y).

    Exact (a Pochhammer product) when x - y is an integer and the inputs are
    exact; a pole of the denominator gives 0 and a pole of the numerator
    raises ZeroDivisionError.
    """
    d = x - y
    exact = isinstance(d, (int, Fraction)) or (isinstance(d, GaussianRational) and d.im == 0)
    if exact:
        d = Fraction(d.re if isinstance(d, GaussianRational) else d)
    if exact and d.denominator == 1 and isinstance(x, (int, Fraction, GaussianRational)):
        k = int(d)
        if k >= 0:
            if is_nonpositive_integer(y):
                # Gamma(y + k)/Gamma(y) = (y)_k stays finite as a limit only if
                # the numerator is also a pole; treat a lone pole explicitly
                if is_nonpositive_integer(x):
                    return rising(y, k)
                return 0
            return rising(y, k)
        if is_nonpositive_integer(x):
            if is_nonpositive_integer(y):
                return 1 / rising(x, -k)
            raise ZeroDivisionError(f"Gamma has a pole at {x}")
        return 1 / rising(x, -k)
    if is_nonpositive_integer(y):
        return 0.0
    if is_nonpositive_integer(x):
        raise ZeroDivisionError(f"Gamma has a pole at {x}")
    v = np.exp(loggamma(x) - loggamma(y))
    if isinstance(v, complex) or np.iscomplexobj(v):
        return complex(v)
    # gammaln drops signs; recover them from the Gamma values themselves
    sign = np.sign(sp.gamma(float(_num(x)))) * np.sign(sp.gamma(float(_num(y))))
    return float(sign * v)
