"""Exact z-measures on partitions, their coherency kernels and mixtures."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Optional, Tuple

from .errors import DomainError, PoleError
from .exact import GaussianRational, as_gaussian, as_rational, format_exact, rising, simplify
from .partitions import (
    Partition,
    added_box,
    enumerate_partitions,
    fat_hook_contains,
    hook_products,
)


@dataclass(frozen=True)
class Series:
    """Classification tag of a parameter triple.

    kind is one of "principal", "complementary", "degenerate", "nonpositive".
    For degenerate triples exactly one of ``max_rows``, ``max_cols``,
    ``hook`` is set and ``supports`` predicts the set where the measure is
    strictly positive.
    """

    kind: str
    detail: str = ""
    max_rows: Optional[int] = None
    max_cols: Optional[int] = None
    hook: Optional[Tuple[int, int]] = None

    @property
    def admissible(self) -> bool:
        return self.kind != "nonpositive"

    def supports(self, lam: Partition) -> bool:
        lam = Partition(lam)
        if self.kind in ("principal", "complementary"):
            return True
        if self.max_rows is not None:
            return lam.length <= self.max_rows
        if self.max_cols is not None:
            return lam.part(1) <= self.max_cols
        if self.hook is not None:
            return fat_hook_contains(lam, *self.hook)
        raise DomainError("no support prediction for nonpositive parameters")

    def __str__(self):
        return f"{self.kind} ({self.detail})" if self.detail else self.kind


def _in_negative_cone(x: Fraction, theta: Fraction) -> bool:
    """True iff x lies in Z_{<=0} + Z_{>=0} theta."""
    r = theta.denominator
    b0 = max(0, math.ceil(x / theta))
    for b in range(b0, b0 + r):
        a = b * theta - x
        if a.denominator == 1 and a >= 0:
            return True
    return False


def _positive_int(x: Fraction) -> Optional[int]:
    if x.denominator == 1 and x >= 1:
        return int(x)
    return None


def classify(z, zp, theta) -> Series:
    """Series tag of (z, z', theta) for rational theta > 0."""
    z = as_gaussian(z)
    zp = as_gaussian(zp)
    theta = as_rational(theta)
    if theta <= 0:
        raise DomainError("theta must be positive")
    if zp == z.conjugate():
        if not z.is_real or not _in_negative_cone(z.re, theta):
            return Series("principal", "z' = conj(z)")
    if not (z.is_real and zp.is_real):
        return Series("nonpositive", "non-real parameters off the principal series")
    x, y = z.re, zp.re
    r = theta.denominator
    if (x * r).denominator != 1 and (y * r).denominator != 1 and math.floor(x * r) == math.floor(y * r):
        lo = Fraction(math.floor(x * r), r)
        return Series("complementary", f"both in the lattice gap ({lo}, {lo + Fraction(1, r)})")
    for u, v in ((x, y), (y, x)):
        m = _positive_int(u / theta)
        if m is not None and v > (m - 1) * theta:
            return Series("degenerate", f"at most {m} rows", max_rows=m)
        m = _positive_int(-u)
        if m is not None and v < -m + 1:
            return Series("degenerate", f"at most {m} columns", max_cols=m)
    for u, v in ((x, y), (y, x)):
        hook = _fat_hook(u, v, theta)
        if hook is not None:
            k, l = hook
            return Series("degenerate", f"fat hook Gamma({k},{l})", hook=hook)
    return Series("nonpositive")


def _fat_hook(u: Fraction, v: Fraction, theta: Fraction):
    """Fat-hook degenerate case: u = q theta - p with p, q >= 1.

    The first vanishing factor of (u)_{lam,theta} is the box (q+1, p+1), so
    the support is the hook {i <= q or j <= p}; returned as (k, l) = (q, p).
    With theta = s/r the solution is unique under "q < r or p < s".
    """
    if u == 0 or u == v or theta == 1:
        return None
    s, r = theta.numerator, theta.denominator
    ur = u * r
    if ur.denominator != 1:
        return None
    ur = int(ur)
    q_max = r + max(0, -(-ur // s)) + 1
    for q in range(1, q_max + 1):
        p_r = q * s - ur
        if p_r <= 0 or p_r % r:
            continue
        p = p_r // r
        if q < r or p < s:
            if abs(u - v) < min(Fraction(1, r), abs(u)):
                return q, p
            return None
    return None


@dataclass(frozen=True)
class ZParams:
    """Parameters (z, z', theta); z, z' Gaussian rationals, theta rational > 0."""

    z: object
    zp: object
    theta: object = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "z", simplify(as_gaussian(self.z)))
        object.__setattr__(self, "zp", simplify(as_gaussian(self.zp)))
        object.__setattr__(self, "theta", as_rational(self.theta))
        if self.theta <= 0:
            raise DomainError("theta must be positive")

    @property
    def zz(self):
        return simplify(as_gaussian(self.z) * as_gaussian(self.zp))

    @property
    def zsum(self):
        return simplify(as_gaussian(self.z) + as_gaussian(self.zp))

    @property
    def t(self):
        return simplify(as_gaussian(self.zz) / self.theta)

    @cached_property
    def series(self) -> Series:
        return classify(self.z, self.zp, self.theta)

    def dual(self) -> "ZParams":
        return ZParams(simplify(-as_gaussian(self.z) / self.theta), simplify(-as_gaussian(self.zp) / self.theta), 1 / self.theta)

    def shifted(self, k: int) -> "ZParams":
        """(z - k theta, z' - k theta, theta)."""
        d = k * self.theta
        return ZParams(simplify(as_gaussian(self.z) - d), simplify(as_gaussian(self.zp) - d), self.theta)

    def to_json(self) -> dict:
        return {"z": format_exact(self.z), "zp": format_exact(self.zp), "theta": format_exact(self.theta)}


@dataclass(frozen=True)
class MixedParams:
    base: ZParams
    xi: object

    def __post_init__(self):
        object.__setattr__(self, "xi", as_rational(self.xi))
        if not 0 < self.xi < 1:
            raise DomainError("xi must lie in (0, 1)")

    @property
    def weight_precision(self) -> str:
        """"exact" when (1 - xi)^t is rational, else the floating format used."""
        t = self.base.t
        return "exact" if isinstance(t, Fraction) and t.denominator == 1 else "float64"

    def to_json(self) -> dict:
        d = self.base.to_json()
        d["xi"] = format_exact(self.xi)
        return d


def _box_factor(q, s, c):
    return q + c * s + c * c


@lru_cache(maxsize=200_000)
def _measure_cached(lam: Partition, z, zp, theta: Fraction):
    n = lam.n
    zg, zpg = as_gaussian(z), as_gaussian(zp)
    q = simplify(zg * zpg)
    s = simplify(zg + zpg)
    t = simplify(as_gaussian(q) / theta)
    den_t = rising(t, n)
    if den_t == 0:
        raise PoleError(f"(t)_n = 0 for t = {format_exact(t)}, n = {n}")
    num = 1
    for i, j in lam.boxes():
        c = (j - 1) - (i - 1) * theta
        num = num * _box_factor(q, s, c)
        if num == 0:
            return Fraction(0)
    h, hp = hook_products(lam, theta)
    val = simplify(as_gaussian(math.factorial(n) * num) / as_gaussian(den_t * h * hp))
    return val


def measure(lam, p: ZParams):
    """M^(n)(lam) as an exact number.

    Principal and complementary parameters give Fractions. Other complex
    parameters give a GaussianRational (the formula is still evaluated).
    """
    return _measure_cached(Partition(lam), p.z, p.zp, p.theta)


def duality_check(lam, p: ZParams) -> bool:
    lam = Partition(lam)
    return measure(lam, p) == measure(lam.conjugate, p.dual())


def plancherel(lam, theta) -> Fraction:
    lam = Partition(lam)
    theta = as_rational(theta)
    h, hp = hook_products(lam, theta)
    return math.factorial(lam.n) * theta ** lam.n / (h * hp)


def kappa(mu, lam, theta) -> Fraction:
    """Pieri coefficient; 0 unless lam = mu + one box."""
    mu, lam = Partition(mu), Partition(lam)
    theta = as_rational(theta)
    box = added_box(mu, lam)
    if box is None:
        return Fraction(0)
    _, j = box
    conj = mu.conjugate
    out = Fraction(1)
    for i in range(1, conj.part(j) + 1):
        a = mu[i - 1] - j
        l = conj[j - 1] - i
        out *= (a + (l + 2) * theta) * (a + 1 + l * theta)
        out /= (a + (l + 1) * theta) * (a + 1 + (l + 1) * theta)
    return out


def q_down(mu, lam, theta) -> Fraction:
    mu, lam = Partition(mu), Partition(lam)
    theta = as_rational(theta)
    if added_box(mu, lam) is None:
        return Fraction(0)
    h_lam, _ = hook_products(lam, theta)
    h_mu, _ = hook_products(mu, theta)
    return h_lam / (lam.n * h_mu) * kappa(mu, lam, theta)


def coherency_residual(mu, p: ZParams):
    mu = Partition(mu)
    total = 0
    for lam in mu.children():
        total = total + q_down(mu, lam, p.theta) * measure(lam, p)
    return simplify(as_gaussian(measure(mu, p)) - as_gaussian(total))


def up_transition(lam, big, p: ZParams):
    lam, big = Partition(lam), Partition(big)
    if added_box(lam, big) is None:
        return Fraction(0)
    m = measure(lam, p)
    if m == 0:
        raise DomainError(f"cannot condition on the null state {tuple(lam)}")
    return simplify(as_gaussian(measure(big, p) * q_down(lam, big, p.theta)) / as_gaussian(m))


def up_transitions(lam, p: ZParams):
    """[(child, probability)] for all one-box extensions, in row order."""
    lam = Partition(lam)
    return [(c, up_transition(lam, c, p)) for c in lam.children()]


def nb_weight(n: int, t, xi):
    """Negative binomial weight (1-xi)^t (t)_n xi^n / n!.

    Exact Fraction when t is an integer, float otherwise.
    """
    xi = as_rational(xi)
    poch = rising(t, n) * xi ** n / math.factorial(n)
    if isinstance(t, Fraction) and t.denominator == 1:
        return (1 - xi) ** int(t) * poch
    if isinstance(t, int):
        return (1 - xi) ** t * poch
    base = (1 - float(xi)) ** complex(t) if isinstance(t, GaussianRational) else (1 - float(xi)) ** float(t)
    if isinstance(poch, GaussianRational):
        return base * complex(poch)
    return base * float(poch)


def nb_tail(N: int, t, xi):
    """Sum over n > N of the negative binomial weights (exact when t is integer)."""
    total = 0
    for n in range(N + 1):
        total = total + nb_weight(n, t, xi)
    return 1 - total


def mixed_measure(lam, mp: MixedParams):
    lam = Partition(lam)
    t = mp.base.t
    if isinstance(t, Fraction) and t.denominator == 1 and t <= 0:
        raise PoleError(f"mixing parameter t = {t} is a nonpositive integer")
    m = measure(lam, mp.base)
    w = nb_weight(lam.n, t, mp.xi)
    if isinstance(m, GaussianRational):
        m = complex(m)
    return w * m


def jack_moment(lam, p: ZParams):
    """(z)_{lam}(z')_{lam} / ((t)_n H'(lam)): the average of P_lam over the boundary measure."""
    lam = Partition(lam)
    zg, zpg = as_gaussian(p.z), as_gaussian(p.zp)
    q, s = simplify(zg * zpg), simplify(zg + zpg)
    num = 1
    for i, j in lam.boxes():
        c = (j - 1) - (i - 1) * p.theta
        num = num * _box_factor(q, s, c)
    den = rising(p.t, lam.n)
    if den == 0:
        raise PoleError("(t)_n = 0")
    _, hp = hook_products(lam, p.theta)
    return simplify(as_gaussian(num) / as_gaussian(den * hp))


def total_mass(n: int, p: ZParams):
    total = 0
    for lam in enumerate_partitions(n):
        total = total + measure(lam, p)
    return simplify(as_gaussian(total))
