"""Multivariate hypergeometric series with Jack-polynomial coefficients.

All series are sums over partitions lam with at most l rows, grouped in
shells of equal |lam|. With P_lam the Jack polynomial and H(lam, nu) the
hook product, C_lam(x) / |lam|! = P_lam(x) / H(lam, nu), so every series
here has terms of the form coef(lam) * P_lam(x) [* P_lam(y) / P_lam(1^l)].

Analytic continuation is done only through the transformation of the
two-set 1F0 (x -> x/(x-1), y -> 1-y) inside the Euler-type simplex
integral, and through the gamma-mixing integral defining 2F0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from .errors import CapabilityError, DomainError, NumericError, PoleError
from .exact import GaussianRational, as_rational, is_exact, to_numeric
from .jack import JackEvaluator, evaluate, jack_P, principal_specialization
from .partitions import Partition, hook_products, partitions_with_length
from .policy import DEFAULT_POLICY, NumericPolicy, SeriesResult
from .quadrature import cone_rule, simplex_rule
from .special import gamma, rgamma


@dataclass(frozen=True)
class HyperParams:
    a: object
    b: object
    c: object
    nu: object
    l: int

    def __post_init__(self):
        object.__setattr__(self, "nu", as_rational(self.nu))
        if self.nu <= 0:
            raise DomainError("nu must be positive")
        if int(self.l) != self.l or self.l < 1:
            raise DomainError("l must be a positive integer")


# scalar helpers -------------------------------------------------------------

def _num(x):
    if isinstance(x, (Fraction, int, GaussianRational)) and not isinstance(x, bool):
        return to_numeric(x)
    if isinstance(x, np.generic):
        return x.item()
    return x


def _is_nonpos_int(x) -> bool:
    v = _num(x)
    if isinstance(v, complex):
        if v.imag != 0:
            return False
        v = v.real
    return float(v).is_integer() and v <= 0


def _re(x) -> float:
    v = _num(x)
    return float(v.real) if isinstance(v, complex) else float(v)


def _poch(a, lam: Partition, nu: float):
    """(a)_{lam,nu} in floating arithmetic."""
    out = 1.0
    for i, j in lam.boxes():
        out = out * (a + (j - 1) - (i - 1) * nu)
    return out


def _poch_exact(a, lam: Partition, nu: Fraction):
    out = Fraction(1)
    for i, j in lam.boxes():
        out = out * (a + (j - 1) - (i - 1) * nu)
    return out


@lru_cache(maxsize=None)
def _ps_float(lam: Partition, nu: Fraction, l: int) -> float:
    return float(principal_specialization(lam, nu, l))


@lru_cache(maxsize=None)
def _hook_factors(lam: Partition, nu: Fraction) -> Tuple[float, ...]:
    conj = lam.conjugate
    nf = float(nu)
    return tuple((lam[i - 1] - j) + (conj[j - 1] - i) * nf + 1 for i, j in lam.boxes())


def _balanced_coef(lam: Partition, nu: Fraction, nums: Sequence, c=None, reg: bool = False):
    """prod (num)_{lam,nu} / H(lam) [/ (c)_{|lam|} or / Gamma(c + |lam|)] box by box.

    Interleaving numerator and denominator factors keeps every partial
    product near the size of the final coefficient, so high shells do not
    overflow. With ``reg`` and c = -m a nonpositive integer, the shells
    |lam| <= m vanish and the remaining Gamma(c + n) = (n - m - 1)!.
    """
    nf = float(nu)
    n = lam.n
    if reg and c is not None and _is_nonpos_int(c):
        m = int(-_re(c))
        if n <= m:
            return 0.0
        out = 1.0
        skip = m + 1
    else:
        out = rgamma(c) if (reg and c is not None) else 1.0
        skip = 0
    for k, ((i, j), h) in enumerate(zip(lam.boxes(), _hook_factors(lam, nu))):
        cont = (j - 1) - (i - 1) * nf
        f = 1.0 / h
        for a in nums:
            f = f * (a + cont)
        if c is not None and k >= skip:
            f = f / (c + k)
        out = out * f
    return out


def _as_points(x) -> np.ndarray:
    arr = np.asarray([_num(v) for v in x]) if not isinstance(x, np.ndarray) else x
    if np.iscomplexobj(arr) and np.all(arr.imag == 0):
        arr = arr.real
    return np.asarray(arr, dtype=complex if np.iscomplexobj(arr) else float)


# shell summation engine ---------------------------------------------------

def _terminating_degree(params: Sequence, l: int) -> Optional[int]:
    """Largest |lam| with nonzero (p)_{lam} for some nonpositive integer p."""
    best = None
    for p in params:
        if _is_nonpos_int(p):
            m = int(-_re(p))
            deg = m * l
            best = deg if best is None else min(best, deg)
    return best


def _shells(l: int, nu: Fraction, D: int, coef: Callable, point_sets: List[np.ndarray],
            normalize: bool) -> np.ndarray:
    """shell[d, k] = sum_{lam |- d, l(lam) <= l} coef(lam) prod_s P_lam(X_s[k])."""
    ev = JackEvaluator(nu, l)
    vals = [ev.values(X, D) for X in point_sets]
    npts = max(X.shape[0] for X in point_sets)
    dtype = complex if any(np.iscomplexobj(X) for X in point_sets) else float
    out = np.zeros((D + 1, npts), dtype=complex)
    for d in range(D + 1):
        acc = np.zeros(npts, dtype=complex)
        for lam in partitions_with_length(d, l):
            c = coef(lam)
            if c == 0:
                continue
            term = np.full(npts, c, dtype=complex)
            for v in vals:
                term = term * v[lam]
            if normalize:
                term = term / _ps_float(lam, nu, l)
            acc += term
        out[d] = acc
    if dtype is float and np.all(out.imag == 0):
        return out
    return out


def _tail_from_shells(mags: np.ndarray) -> Tuple[float, float]:
    """(ratio, tail) from the last three shell magnitudes.

    Shells that cancel to rounding level (e.g. odd shells at x = (t, -t))
    are skipped along with exact zeros.
    """
    top = float(np.max(mags)) if len(mags) else 0.0
    nz = [m for m in mags if m > 1e-12 * top]
    if len(nz) < 2:
        return 0.0, 0.0
    last = nz[-3:] if len(nz) >= 3 else nz
    ratios = [last[i + 1] / last[i] for i in range(len(last) - 1)]
    r = max(ratios)
    if r >= 1:
        return r, math.inf
    return r, last[-1] * r / (1 - r)


def _sum_series(l, nu, coef, point_sets, policy: NumericPolicy, degree=None, term_deg=None,
                normalize=False, what="series"):
    """Returns (values ndarray, tail, degree_used)."""
    if term_deg is not None and (degree is None or term_deg <= degree):
        sh = _shells(l, nu, term_deg, coef, point_sets, normalize)
        return sh.sum(axis=0), 0.0, term_deg
    if degree is not None:
        sh = _shells(l, nu, degree, coef, point_sets, normalize)
        mags = np.max(np.abs(sh), axis=1)
        r, tail = _tail_from_shells(mags)
        total = np.max(np.abs(sh.sum(axis=0)))
        if not math.isfinite(tail) and np.max(mags[-3:]) <= 1e-15 * max(total, 1e-300):
            # shells at rounding level: the ratio of noise says nothing
            tail = float(np.max(mags[-3:]))
        if not math.isfinite(tail):
            raise NumericError(f"{what}: shell ratio test failed at degree {degree}",
                               diagnostics={"ratio": r, "last_shells": mags[-3:].tolist()})
        return sh.sum(axis=0), tail, degree
    D = policy.start_degree
    while True:
        sh = _shells(l, nu, D, coef, point_sets, normalize)
        partial = np.cumsum(sh, axis=0)
        mags = np.max(np.abs(sh), axis=1)
        scale = np.max(np.abs(partial), axis=1)
        for d in range(2, D + 1):
            if all(mags[d - k] <= policy.tol * max(scale[d], 1e-300) for k in range(3)):
                r, tail = _tail_from_shells(mags[: d + 1])
                if not math.isfinite(tail):
                    tail = float(mags[d])
                return partial[d], tail, d
        if D >= policy.max_degree:
            r, tail = _tail_from_shells(mags)
            raise NumericError(f"{what}: shell ratio test did not terminate by degree {D}",
                               diagnostics={"ratio": r, "last_shells": mags[-3:].tolist()})
        D = min(2 * D, policy.max_degree)


def _scalar(v):
    v = np.asarray(v).reshape(-1)[0]
    if isinstance(v, (complex, np.complexfloating)):
        return complex(v) if v.imag != 0 else float(v.real)
    return float(v)


# binomial series -------------------------------------------------------------

def f10(a, nu, x: Sequence, policy: NumericPolicy = DEFAULT_POLICY, degree: int = 30) -> SeriesResult:
    """Product form prod (1 - x_i)^{-a}, with the series residual recorded."""
    nu = as_rational(nu)
    X = _as_points(x)
    l = len(X)
    if l == 0 or np.all(X == 0):
        return SeriesResult(1.0, 0.0, 0, policy, path="product", residual=0.0)
    if np.any(X == 1):
        raise PoleError("f10 has a pole at x_i = 1")
    av = _num(a)
    prod = 1.0
    for xi in X:
        prod = prod * (1 - xi) ** (-av)
    prod = _scalar(prod)
    coef = lambda lam: _balanced_coef(lam, nu, (av,))
    term = _terminating_degree([a], l)
    vals, tail, deg = _sum_series(l, nu, coef, [X[None, :]], policy, degree=degree, term_deg=term, what="1F0")
    series = _scalar(vals)
    return SeriesResult(prod, tail, deg, policy, path="product", residual=abs(series - prod))


def f10_series(a, nu, x, policy: NumericPolicy = DEFAULT_POLICY, degree: Optional[int] = None) -> SeriesResult:
    nu = as_rational(nu)
    X = _as_points(x)
    l = len(X)
    av = _num(a)
    coef = lambda lam: _balanced_coef(lam, nu, (av,))
    vals, tail, deg = _sum_series(l, nu, coef, [X[None, :]], policy, degree=degree,
                                  term_deg=_terminating_degree([a], l), what="1F0")
    return SeriesResult(_scalar(vals), tail, deg, policy)


def _f10_two_array(a, nu: Fraction, x: np.ndarray, Y: np.ndarray, policy, path="auto", degree=None):
    """Two-set 1F0 at fixed x and many y (rows of Y). Returns (values, tail, degree, path)."""
    l = x.shape[0]
    av = _num(a)
    if path == "auto":
        if l == 1:
            return (1 - x[0] * Y[:, 0]) ** (-av), 0.0, 0, "closed-form l=1"
        if np.all(x == x[0]):
            return np.prod((1 - x[0] * Y) ** (-av), axis=1), 0.0, 0, "closed-form equal x"
        if np.all(Y == Y[:, :1]):
            return np.prod((1 - Y[:, :1] * x[None, :]) ** (-av), axis=1), 0.0, 0, "closed-form equal y"
        if not np.any(x):
            return np.ones(Y.shape[0]), 0.0, 0, "trivial"
    coef = lambda lam: _balanced_coef(lam, nu, (av,))
    vals, tail, deg = _sum_series(l, nu, coef, [x[None, :], Y], policy, degree=degree,
                                  term_deg=_terminating_degree([a], l), normalize=True, what="two-set 1F0")
    # x enters as a single point broadcast against the rows of Y
    return vals, tail, deg, "series"


def f10_two(a, nu, x: Sequence, y: Sequence, policy: NumericPolicy = DEFAULT_POLICY,
            path: str = "auto", degree: Optional[int] = None) -> SeriesResult:
    """Two-set binomial series sum (a)_lam C_lam(x) C_lam(y) / (C_lam(1^l) |lam|!).

    ``path="series"`` forces the truncated series even where a closed form
    (l = 1, or all x equal, or all y equal) is available.
    """
    nu = as_rational(nu)
    X = _as_points(x)
    Y = _as_points(y)
    if X.shape != Y.shape:
        raise DomainError("x and y must have the same length")
    vals, tail, deg, used = _f10_two_array(a, nu, X, Y[None, :], policy, path=path, degree=degree)
    return SeriesResult(_scalar(vals), tail, deg, policy, path=used)


def _f10_two_transformed_array(a, nu, x: np.ndarray, Y: np.ndarray, policy, degree=None):
    av = _num(a)
    if np.any(np.real(x) >= 0.5):
        raise DomainError("the transformed two-set series needs Re x_i < 1/2")
    pref = np.prod((1 - x) ** (-av))
    xt = x / (x - 1)
    vals, tail, deg, used = _f10_two_array(a, nu, xt, 1 - Y, policy, path="auto", degree=degree)
    return pref * vals, abs(pref) * tail, deg, "transformed " + used


def f10_two_transformed(a, nu, x, y, policy: NumericPolicy = DEFAULT_POLICY,
                        degree: Optional[int] = None) -> SeriesResult:
    """prod (1 - x_j)^{-a} * 1F0(a; x/(x-1), 1-y): continuation to Re x_i < 1/2."""
    nu = as_rational(nu)
    X = _as_points(x)
    Y = _as_points(y)
    if X.shape != Y.shape:
        raise DomainError("x and y must have the same length")
    vals, tail, deg, used = _f10_two_transformed_array(a, nu, X, Y[None, :], policy, degree=degree)
    return SeriesResult(_scalar(vals), tail, deg, policy, path=used)


def _f10_two_best(a, nu, x: np.ndarray, Y: np.ndarray, policy):
    """Two-set 1F0 choosing the direct or transformed series by convergence factor."""
    l = x.shape[0]
    if l == 1 or np.all(x == x[0]) or _terminating_degree([a], l) is not None:
        return _f10_two_array(a, nu, x, Y, policy)
    direct = np.max(np.abs(x)) * np.max(np.abs(Y))
    if np.all(np.real(x) < 0.5):
        trans = np.max(np.abs(x / (x - 1))) * np.max(np.abs(1 - Y))
        if trans < direct:
            return _f10_two_transformed_array(a, nu, x, Y, policy)
    return _f10_two_array(a, nu, x, Y, policy)


# Gauss-type series -------------------------------------------------------------

def _check_x(x, l):
    X = _as_points(x)
    if X.shape[0] != l:
        raise DomainError(f"expected {l} variables, got {X.shape[0]}")
    return X


def f21hat(hp: HyperParams, x: Sequence, policy: NumericPolicy = DEFAULT_POLICY,
           degree: Optional[int] = None) -> SeriesResult:
    """sum (a)_lam (b)_lam C_lam(x) / ((c)_{|lam|} |lam|!) over l(lam) <= l."""
    if _is_nonpos_int(hp.c):
        raise PoleError("c is a nonpositive integer: use f21hat_reg for the normalized series")
    X = _check_x(x, hp.l)
    if np.any(np.abs(X) >= 1):
        raise DomainError("the defining series needs max |x_i| < 1")
    a, b, c = _num(hp.a), _num(hp.b), _num(hp.c)

    def coef(lam):
        return _balanced_coef(lam, hp.nu, (a, b), c)

    vals, tail, deg = _sum_series(hp.l, hp.nu, coef, [X[None, :]], policy, degree=degree,
                                  term_deg=_terminating_degree([hp.a, hp.b], hp.l), what="2F1hat")
    return SeriesResult(_scalar(vals), tail, deg, policy)


def _rising(c, n):
    out = 1.0
    for k in range(n):
        out = out * (c + k)
    return out


def _f21hat_reg_array(hp: HyperParams, X: np.ndarray, policy, degree=None):
    a, b, c = _num(hp.a), _num(hp.b), _num(hp.c)

    def coef(lam):
        return _balanced_coef(lam, hp.nu, (a, b), c, reg=True)

    return _sum_series(hp.l, hp.nu, coef, [X], policy, degree=degree,
                       term_deg=_terminating_degree([hp.a, hp.b], hp.l), what="2F1hat/Gamma(c)")


def f21hat_reg(hp: HyperParams, x: Sequence, policy: NumericPolicy = DEFAULT_POLICY,
               degree: Optional[int] = None) -> SeriesResult:
    """sum (a)_lam (b)_lam C_lam(x) / (Gamma(c + |lam|) |lam|!); defined for every c."""
    X = _check_x(x, hp.l)
    term = _terminating_degree([hp.a, hp.b], hp.l)
    if term is None and np.any(np.abs(X) >= 1):
        raise DomainError("the defining series needs max |x_i| < 1")
    vals, tail, deg = _f21hat_reg_array(hp, X[None, :], policy, degree)
    return SeriesResult(_scalar(vals), tail, deg, policy)


def euler_prefactor(b, c, nu, l):
    """1/Gamma(c - l b) * prod_j Gamma(nu + 1) / (Gamma(b - (j-1) nu) Gamma(j nu + 1))."""
    nf = float(as_rational(nu))
    b, c = _num(b), _num(c)
    out = rgamma(c - l * b)
    for j in range(1, l + 1):
        out = out * gamma(nf + 1) * rgamma(b - (j - 1) * nf) / gamma(j * nf + 1)
    return out


def _euler_domain(b, c, nu, l) -> List[str]:
    failed = []
    if not _re(b) > (l - 1) * float(nu):
        failed.append("Re b > (l-1) nu")
    if not _re(c) > l * _re(b):
        failed.append("Re c > l Re b")
    return failed


def _cone_integral(integrand: Callable[[np.ndarray], np.ndarray], l: int, A, nu: Fraction,
                   radial: str, policy: NumericPolicy, gamma_exp=1.0):
    """int prod tau^{A-1} |Delta|^{2nu} R(|tau|) integrand(tau) dtau with node doubling.

    Complex parts of A and gamma_exp are moved into the integrand.
    Returns (value, last relative change, nodes).
    """
    A_re, A_im = _re(A), (complex(_num(A)).imag if isinstance(_num(A), complex) else 0.0)
    g_re = _re(gamma_exp)
    g_im = complex(_num(gamma_exp)).imag if isinstance(_num(gamma_exp), complex) else 0.0
    nf = float(nu)

    def run(n):
        pts, w = cone_rule(l, A_re, nf, n, radial, g_re)
        vals = integrand(pts)
        if A_im:
            vals = vals * np.prod(pts.astype(complex) ** (1j * A_im), axis=1)
        if g_im and radial == "beta":
            vals = vals * (1 - pts.sum(axis=1)).astype(complex) ** (1j * g_im)
        return np.sum(w * vals)

    n = policy.quad_nodes
    prev = run(n)
    change = math.inf
    while n < policy.max_quad_nodes:
        n2 = min(2 * n, policy.max_quad_nodes)
        cur = run(n2)
        change = abs(cur - prev) / max(abs(cur), 1e-300)
        n, prev = n2, cur
        if change < policy.quad_tol:
            break
    return prev, change, n


def _euler_reg(hp: HyperParams, x: np.ndarray, policy):
    """The Euler-type simplex integral: 2F1hat(a,b;c;x)/Gamma(c)."""
    failed = _euler_domain(hp.b, hp.c, hp.nu, hp.l)
    if failed:
        raise DomainError("Euler integral parameter domain violated: " + ", ".join(failed))
    l, nu = hp.l, hp.nu
    b, c = _num(hp.b), _num(hp.c)
    A = b - (l - 1) * float(nu)
    tails = []

    def integrand(pts):
        vals, tail, _, _ = _f10_two_best(hp.a, nu, x, pts, policy)
        tails.append(tail)
        return vals

    val, change, n = _cone_integral(integrand, l, A, nu, "beta", policy, gamma_exp=c - l * b)
    pref = euler_prefactor(b, c, nu, l)
    return pref * val, abs(pref * val) * change + max(tails, default=0.0), n


def euler_f21(hp: HyperParams, x: Sequence, policy: NumericPolicy = DEFAULT_POLICY) -> SeriesResult:
    """2F1hat(a,b;c;x) from its Euler-type simplex integral (times Gamma(c))."""
    X = _check_x(x, hp.l)
    if np.any(np.real(X) >= 0.5) and not np.all(np.abs(X) < 1):
        raise DomainError("Euler integral evaluated for Re x_i < 1/2 or inside the unit polydisk")
    val, err, n = _euler_reg(hp, X, policy)
    g = gamma(_num(hp.c))
    return SeriesResult(_scalar(g * val), abs(g) * err, 0, policy, nodes=n, path="euler")


def pochhammer_ratio_exact(lam, b, c, nu):
    """(b)_{lam,nu} / Gamma(c + |lam|)."""
    lam = Partition(lam)
    nf = float(as_rational(nu))
    return _poch(_num(b), lam, nf) * rgamma(_num(c) + lam.n)


def pochhammer_ratio_integral(lam, b, c, nu, l: int, policy: NumericPolicy = DEFAULT_POLICY) -> SeriesResult:
    """Quadrature of the simplex integral for (b)_{lam,nu} / Gamma(c + |lam|)."""
    lam = Partition(lam)
    nu = as_rational(nu)
    failed = _euler_domain(b, c, nu, l)
    if failed:
        raise DomainError("parameter domain violated: " + ", ".join(failed))
    if lam.length > l:
        return SeriesResult(0.0, 0.0, lam.n, policy, path="quadrature", residual=0.0)
    ev = JackEvaluator(nu, l)
    norm = _ps_float(lam, nu, l)

    def integrand(pts):
        return ev.values(pts, lam.n)[lam] / norm

    bv, cv = _num(b), _num(c)
    A = bv - (l - 1) * float(nu)
    val, change, n = _cone_integral(integrand, l, A, nu, "beta", policy, gamma_exp=cv - l * bv)
    val = _scalar(euler_prefactor(bv, cv, nu, l) * val)
    exact = pochhammer_ratio_exact(lam, b, c, nu)
    return SeriesResult(val, abs(val) * change, lam.n, policy, nodes=n, path="quadrature",
                        residual=abs(val - exact))


def selberg_closed_form(lam, A, nu, l: int):
    """prod_j Gamma(lam_j + A + (l-j)nu) Gamma(j nu + 1)/Gamma(nu + 1) / Gamma(|lam| + A l + l(l-1)nu)."""
    lam = Partition(lam)
    nf = float(as_rational(nu))
    Av = _num(A)
    out = rgamma(lam.n + Av * l + l * (l - 1) * nf)
    for j in range(1, l + 1):
        out = out * gamma(lam.part(j) + Av + (l - j) * nf) * gamma(j * nf + 1) / gamma(nf + 1)
    return out


def selberg_simplex(lam, A, nu, l: int, policy: NumericPolicy = DEFAULT_POLICY):
    """(quadrature, closed form) for the simplex Selberg-type integral with C_lam/C_lam(1^l)."""
    lam = Partition(lam)
    nu = as_rational(nu)
    if _re(A) <= 0:
        raise DomainError("need Re A > 0")
    closed = selberg_closed_form(lam, A, nu, l)
    if lam.length > l:
        return 0.0, closed
    ev = JackEvaluator(nu, l)
    norm = _ps_float(lam, nu, l)
    nf = float(nu)

    def run(n):
        pts, w = simplex_rule(l, _re(A), nf, n)
        vals = ev.values(pts, lam.n)[lam] / norm
        return float(np.sum(w * vals))

    n = policy.quad_nodes
    prev = run(n)
    while n < policy.max_quad_nodes:
        n2 = min(2 * n, policy.max_quad_nodes)
        cur = run(n2)
        done = abs(cur - prev) <= policy.quad_tol * abs(cur)
        n, prev = n2, cur
        if done:
            break
    return prev, closed


# 2F0 --------------------------------------------------------------------------

def _f20_terminating(a, b, nu: Fraction, X: np.ndarray, policy) -> np.ndarray:
    l = X.shape[1]
    av, bv = _num(a), _num(b)
    coef = lambda lam: _balanced_coef(lam, nu, (av, bv))
    vals, _, deg = _sum_series(l, nu, coef, [X], policy, term_deg=_terminating_degree([a, b], l), what="2F0")
    return vals, deg


def _reg_inner(a, b, c, nu, l, X: np.ndarray, policy):
    """2F1hat(a,b;c;x)/Gamma(c) at each row of X along a paper-backed path."""
    hp = HyperParams(a, b, c, nu, l)
    if _terminating_degree([a, b], l) is not None:
        vals, _, _ = _f21hat_reg_array(hp, X, policy)
        return vals, "terminating"
    if l == 1:
        av, bv, cv = (mpmath.mpmathify(_num(v)) for v in (a, b, c))
        out = []
        for xi in X[:, 0]:
            out.append(complex(mpmath.hyp2f1(av, bv, cv, xi) * mpmath.rgamma(cv)))
        return np.asarray(out), "classical l=1"
    for first, second in ((a, b), (b, a)):
        if not _euler_domain(second, c, nu, l):
            hp2 = HyperParams(first, second, c, nu, l)
            return np.asarray([_euler_reg(hp2, row, policy)[0] for row in X]), "euler"
    raise CapabilityError("no continuation path for 2F1hat/Gamma(c) at these parameters",
                          conditions=("a or b a nonpositive integer", "l = 1",
                                      "Re b > (l-1) nu and Re c > l Re b (or a<->b)"))


def f20(a, b, nu, x: Sequence, c_choice=None, policy: NumericPolicy = DEFAULT_POLICY,
        path: str = "auto") -> SeriesResult:
    """2F0(a,b;x) for x_i < 0.

    ``path``: "terminating" (finite sum; needs a or b in {0,-1,...}),
    "integral" (gamma-mixing over s of 2F1hat(a,b;c;s x)/Gamma(c), any
    c_choice > 0), or "auto" (terminating when possible).
    """
    nu = as_rational(nu)
    X = _as_points(x)
    l = X.shape[0]
    if np.any(np.real(X) >= 0) or np.any(np.imag(X) != 0):
        raise DomainError("2F0 is evaluated at negative real arguments")
    term = _terminating_degree([a, b], l)
    if path in ("auto", "terminating") and term is not None:
        vals, deg = _f20_terminating(a, b, nu, X[None, :], policy)
        return SeriesResult(_scalar(vals), 0.0, deg, policy, path="terminating")
    if path == "terminating":
        raise CapabilityError("terminating path needs a or b in {0, -1, -2, ...}",
                              conditions=("a or b a nonpositive integer",))
    c = 1 if c_choice is None else c_choice
    if _re(c) <= 0:
        raise DomainError("the mixing exponent c must be positive")
    cv = _num(c)
    if isinstance(cv, complex):
        raise DomainError("c_choice must be real")

    def run(n):
        from .quadrature import laguerre

        s, w = laguerre(n, cv - 1)
        vals, used = _reg_inner(a, b, c, nu, l, s[:, None] * X[None, :], policy)
        return np.sum(w * vals), used

    n = policy.quad_nodes
    prev, used = run(n)
    change = math.inf
    while n < policy.max_quad_nodes:
        n2 = min(2 * n, policy.max_quad_nodes)
        cur, used = run(n2)
        change = abs(cur - prev) / max(abs(cur), 1e-300)
        n, prev = n2, cur
        if change < policy.quad_tol:
            break
    return SeriesResult(_scalar(prev), abs(prev) * change, 0, policy, nodes=n, path=f"integral ({used})")


def f20_laguerre_form(a, b, nu, x: Sequence, policy: NumericPolicy = DEFAULT_POLICY) -> SeriesResult:
    """The orthant integral with weight prod tau^{b-nu(l-1)-1} e^{-tau} |Delta|^{2nu} and two-set 1F0."""
    nu = as_rational(nu)
    X = _as_points(x)
    l = X.shape[0]
    if not _re(b) > (l - 1) * float(nu):
        raise DomainError("need Re b > (l-1) nu")
    bv = _num(b)
    nf = float(nu)
    pref = 1.0
    for j in range(1, l + 1):
        pref = pref * gamma(nf + 1) * rgamma(bv - (j - 1) * nf) / gamma(j * nf + 1)
    tails = []

    def integrand(pts):
        vals, tail, _, _ = _f10_two_best(a, nu, X, pts, policy)
        tails.append(tail)
        return vals

    val, change, n = _cone_integral(integrand, l, bv - (l - 1) * nf, nu, "laguerre", policy)
    val = _scalar(pref * val)
    return SeriesResult(val, abs(val) * change + abs(pref) * max(tails, default=0.0), 0, policy,
                        nodes=n, path="laguerre form")


# terminating 1F1 and the 2F0 <-> 1F1 identity ----------------------------------

def f11_terminating(m: int, c, nu, x: Sequence):
    """sum_{lam_1 <= m} (-m)_lam / (c)_lam C_lam(x) / |lam|!  (standard Jack 1F1).

    Exact when c, nu and x are exact rationals and the degree fits the
    exact Jack bound; floating otherwise.
    """
    if int(m) != m or m < 0:
        raise DomainError("m must be a nonnegative integer")
    m = int(m)
    nu = as_rational(nu)
    l = len(x)
    exact = all(is_exact(v) for v in x) and is_exact(c) and m * l <= 12
    total = Fraction(0) if exact else 0.0
    for d in range(m * l + 1):
        for lam in partitions_with_length(d, l):
            if lam.part(1) > m:
                continue
            h = hook_products(lam, nu)[0]
            if exact:
                den = _poch_exact(as_rational(c), lam, nu)
                if den == 0:
                    raise PoleError("(c)_lam vanishes")
                total += _poch_exact(Fraction(-m), lam, nu) / den * evaluate(jack_P(lam, nu), list(x)) / h
            else:
                den = _poch(_num(c), lam, float(nu))
                if den == 0:
                    raise PoleError("(c)_lam vanishes")
                pv = JackEvaluator(nu, l).values(_as_points(x)[None, :], d)[lam][0]
                total += _poch(-m, lam, float(nu)) / den * pv / float(h)
    return total


def remark26_sides(m: int, b, nu, x: Sequence, policy: NumericPolicy = DEFAULT_POLICY):
    """(lhs, rhs) of 2F0(-m,b; 1/x) = prod (b-(i-1)nu)_m prod(-x_i)^{-m} 1F1(-m; -b-m+1+(l-1)nu; -x)."""
    nu = as_rational(nu)
    X = _as_points(x)
    if np.any(X >= 0):
        raise DomainError("x_i must be negative")
    l = X.shape[0]
    nf = float(nu)
    bv = _num(b)
    lhs = f20(-m, b, nu, 1 / X, policy=policy, path="terminating").scalar
    pref = 1.0
    for i in range(1, l + 1):
        pref = pref * _rising(bv - (i - 1) * nf, m)
    pref = pref * np.prod((-X) ** (-float(m)))
    rhs = pref * f11_terminating(m, -bv - m + 1 + (l - 1) * nf, nu, list(-X))
    return lhs, _scalar(rhs)


def remark26_residual(m: int, b, nu, x: Sequence, policy: NumericPolicy = DEFAULT_POLICY) -> float:
    lhs, rhs = remark26_sides(m, b, nu, x, policy)
    return abs(lhs - rhs)
