"""Boundary-cone observables: E_theta, power-sum specialization, lifting."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from .errors import DomainError, NumericError
from .exact import as_rational, is_exact
from .lattice import e_star
from .omega import OmegaPoint
from .partitions import Partition, embed_iota, theta_duplicate
from .policy import DEFAULT_POLICY, NumericPolicy
from .quadrature import laguerre
from .special import rgamma


def _is_real(u) -> bool:
    return not isinstance(u, complex) or u.imag == 0


def _real(u):
    return u.real if isinstance(u, complex) else u


def E_theta(omega: OmegaPoint, theta, u):
    """e^{gamma/u} prod(1 + alpha_i/u) / prod(1 - theta beta_i/u)^{1/theta}.

    Exact for exact inputs when gamma = 0 and 1/theta is an integer;
    otherwise floating with the principal branch of the 1/theta power.
    """
    theta = as_rational(theta)
    if u == 0:
        raise DomainError("u = 0 is a pole")
    g = omega.gamma
    exact = is_exact(u) and all(is_exact(v) for v in omega.alpha + omega.beta + (omega.delta,))
    inv = 1 / theta
    if exact and g == 0 and inv.denominator == 1:
        out = Fraction(1)
        for a in omega.alpha:
            out *= 1 + Fraction(a) / u
        for b in omega.beta:
            base = 1 - theta * Fraction(b) / u
            if base == 0:
                raise DomainError("pole of E_theta")
            out /= base ** int(inv)
        return out
    # a rational function in the exact case; elsewhere the branch needs u off [0, inf)
    if _is_real(u) and _real(u) >= 0:
        raise DomainError("E_theta is defined for u off [0, inf)")
    uc = complex(u) if not _is_real(u) else float(_real(u))
    out = cmath.exp(float(g) / uc) if isinstance(uc, complex) else math.exp(float(g) / uc)
    for a in omega.alpha:
        out *= 1 + float(a) / uc
    for b in omega.beta:
        base = 1 - float(theta) * float(b) / uc
        if isinstance(base, complex):
            if base.imag == 0 and base.real <= 0:
                raise DomainError("branch cut of (1 - theta beta/u)^{1/theta}")
            out /= base ** float(inv)
        else:
            if base <= 0:
                raise DomainError("branch cut of (1 - theta beta/u)^{1/theta}")
            out /= base ** float(inv)
    return out


def E_theta_power(omega: OmegaPoint, theta: int, u):
    """E_theta(omega;u)^theta for integer theta; exact when gamma = 0 and inputs exact."""
    th = as_rational(theta)
    if th.denominator != 1:
        raise DomainError("integer theta expected")
    th = int(th)
    g = omega.gamma
    if g == 0 and is_exact(u) and all(is_exact(v) for v in omega.alpha + omega.beta):
        out = Fraction(1)
        for a in omega.alpha:
            out *= (1 + Fraction(a) / u) ** th
        for b in omega.beta:
            out /= 1 - th * Fraction(b) / u
        return out
    return E_theta(omega, th, u) ** th


def power_sums(omega: OmegaPoint, theta, k_max: int) -> List:
    """[p_1, ..., p_kmax] with p_1 = delta, p_k = sum alpha^k + (-theta)^{k-1} sum beta^k."""
    theta = as_rational(theta)
    out = []
    for k in range(1, k_max + 1):
        if k == 1:
            out.append(omega.delta)
        else:
            out.append(sum((a ** k for a in omega.alpha), Fraction(0))
                       + (-theta) ** (k - 1) * sum((b ** k for b in omega.beta), Fraction(0)))
    return out


def elementary_from_power_sums(p: Sequence, K: int) -> List:
    """e_0..e_K by Newton's identities k e_k = sum_i (-1)^{i-1} e_{k-i} p_i."""
    e = [Fraction(1)]
    for k in range(1, K + 1):
        s = 0
        for i in range(1, k + 1):
            s = s + (-1) ** (i - 1) * e[k - i] * p[i - 1]
        e.append(s / k)
    return e


def _series_mul(a: List, b: List, K: int) -> List:
    return [sum((a[i] * b[k - i] for i in range(k + 1)), 0) for k in range(K + 1)]


def E_taylor_coefficients(omega: OmegaPoint, theta, K: int) -> List:
    """Coefficients of w^0..w^K in E_theta at u = 1/w, from the product form.

    Each alpha contributes 1 + alpha w, gamma contributes exp(gamma w), and each
    beta the binomial series (1 - theta beta w)^{-1/theta}.
    """
    theta = as_rational(theta)
    out = [Fraction(1)] + [Fraction(0)] * K
    for a in omega.alpha:
        out = _series_mul(out, [Fraction(1), a] + [0] * (K - 1), K)
    g = omega.gamma
    if g != 0:
        ser = [g ** k / math.factorial(k) for k in range(K + 1)]
        out = _series_mul(out, ser, K)
    inv = 1 / theta
    for b in omega.beta:
        ser = []
        coef = Fraction(1)
        for k in range(K + 1):
            ser.append(coef * (theta * b) ** k)
            coef = coef * (inv + k) / (k + 1)
        out = _series_mul(out, ser, K)
    return out


def newton_residual(omega: OmegaPoint, theta, K: int):
    """max_k |e_k(power sums) - [w^k] E_theta|; exact zero for rational omega."""
    e = elementary_from_power_sums(power_sums(omega, theta, K), K)
    c = E_taylor_coefficients(omega, theta, K)
    diffs = [abs(x - y) for x, y in zip(e, c)]
    return max(diffs)


def omega_theta(omega: OmegaPoint, theta: int) -> OmegaPoint:
    """(alpha repeated theta times, theta beta, theta delta)."""
    th = int(theta)
    alpha = tuple(a for a in omega.alpha for _ in range(th))
    return OmegaPoint(alpha, tuple(th * b for b in omega.beta), th * omega.delta)


def prop51_residuals(lam, theta: int, u) -> Tuple:
    """Residuals of the three identities linking E*_theta, E_theta and the theta = 1 versions."""
    lam = Partition(lam)
    th = as_rational(theta)
    if th.denominator != 1 or th < 1:
        raise DomainError("theta must be a positive integer")
    th = int(th)
    u = as_rational(u)
    lhs = Fraction(1)
    for s in range(th):
        lhs *= e_star(lam, th, u - s)
    a = lhs - e_star(theta_duplicate(lam, th), 1, u)
    omega = embed_iota(lam)
    b = E_theta_power(omega, th, u) - E_theta(omega_theta(omega, th), 1, u)
    c = e_star(lam, 1, u) - E_theta(omega, 1, u + Fraction(1, 2))
    return a, b, c


def lemma53_check(omega: OmegaPoint, u, theta=1) -> bool:
    """|E(omega;u)| <= e^{delta/|u|} for theta = 1 and u < 0.

    Only the theta = 1 function is bounded directly; other theta go through
    E_theta^theta = E(omega_theta; u).
    """
    if theta != 1:
        raise DomainError("the bound is checked for theta = 1 only")
    if not u < 0:
        raise DomainError("u must be negative")
    val = abs(complex(E_theta(omega, 1, u)))
    return val <= math.exp(float(omega.delta) / abs(float(u))) * (1 + 1e-12)


@dataclass(frozen=True)
class CorrelationQuery:
    """k disjoint intervals inside (0, inf)."""

    boxes: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        boxes = tuple((float(lo), float(hi)) for lo, hi in self.boxes)
        for lo, hi in boxes:
            if not 0 < lo < hi:
                raise DomainError("boxes must be intervals (lo, hi) with 0 < lo < hi")
        srt = sorted(boxes)
        for (lo1, hi1), (lo2, hi2) in zip(srt, srt[1:]):
            if hi1 > lo2:
                raise DomainError("boxes must be pairwise disjoint")
        object.__setattr__(self, "boxes", boxes)

    @property
    def k(self) -> int:
        return len(self.boxes)


@dataclass(frozen=True)
class SurfaceAtom:
    """A correlation density with a singular part on the face |x| = 1.

    As a distribution: rho(x) = surface(x) delta(1 - |x|) + density(x).
    ``surface`` is evaluated on points of the face; ``density`` may be None.
    """

    surface: Callable[[np.ndarray], float]
    density: Optional[Callable[[np.ndarray], float]] = None

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return 0.0 if self.density is None else self.density(x)


def lift_density_transform(rho, t, x: Sequence[float], policy: NumericPolicy = DEFAULT_POLICY,
                           edge_exponent: Optional[float] = None) -> float:
    """int_0^inf s^{t-1} e^{-s} / Gamma(t) rho(x/s) s^{-k} ds for rho supported on |x| <= 1.

    The substitution s = |x| + sigma moves the support edge to sigma = 0.
    With ``edge_exponent`` = e (rho ~ (1 - |y|)^e near the face) the sigma
    integral uses a generalized Gauss-Laguerre rule with that exponent;
    otherwise scipy's adaptive quadrature. A ``SurfaceAtom`` part contributes
    |x|^{t-k} e^{-|x|} surface(x/|x|) / Gamma(t) in closed form.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("points must be positive")
    k = x.shape[0]
    X = float(x.sum())
    tf = float(t)
    rg = rgamma(tf)
    total = 0.0
    if isinstance(rho, SurfaceAtom):
        total += X ** (tf - k) * math.exp(-X) * rho.surface(x / X) * rg
        if rho.density is None:
            return total
        dens = rho.density
    else:
        dens = rho

    def f(sigma):
        s = X + sigma
        return s ** (tf - 1 - k) * math.exp(-X) * dens(x / s) * rg

    if edge_exponent is not None:
        e = float(edge_exponent)
        prev = None
        n = policy.quad_nodes
        while True:
            nodes, w = laguerre(n, e)
            val = sum(wi * f(si) / si ** e for si, wi in zip(nodes, w))
            if prev is not None and abs(val - prev) <= policy.quad_tol * max(abs(val), 1e-300):
                break
            if n >= policy.max_quad_nodes:
                if prev is not None and abs(val - prev) > 1e-6 * max(abs(val), 1e-300):
                    raise NumericError("lifting quadrature did not settle",
                                       diagnostics={"nodes": n, "last": val, "previous": prev})
                break
            prev = val
            n = min(2 * n, policy.max_quad_nodes)
        return total + val
    val, err = integrate.quad(lambda sg: f(sg) * math.exp(-sg), 0, np.inf, limit=200, epsabs=0, epsrel=1e-11)
    if not math.isfinite(val):
        raise NumericError("lifting integral is not finite", diagnostics={"estimate": val, "error": err})
    return total + val
