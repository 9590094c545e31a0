"""Integer-theta lattice picture: point configurations, point removal, and
the correlation identity for the negative-binomial mixed measures.

For a diagram lam the configuration is l_i = lam_i - i theta (i >= 1).
Removing points A and shifting by k theta maps the event {L(lam) contains A}
onto diagrams mu = D_A(lam); the identity relates the mixed-measure mass of
that event to an average of products of E* over the measure with shifted
parameters (z - k theta, z' - k theta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import mpmath

from .errors import DomainError, PoleError
from .exact import GaussianRational, as_gaussian, as_rational, rising, simplify, to_numeric
from .partitions import Partition, enumerate_partitions, hook_products, gen_pochhammer
from .policy import SeriesResult
from .special import rgamma
from .zmeasure import MixedParams, ZParams, nb_tail


def _int_theta(theta) -> int:
    th = as_rational(theta)
    if th.denominator != 1 or th < 1:
        raise DomainError("the lattice picture needs a positive integer theta")
    return int(th)


@dataclass(frozen=True)
class LatticeConfig:
    """Points l_1 > l_2 > ... with l_i = stable - i theta for i > len(heads)."""

    heads: Tuple[int, ...]
    theta: int
    stable: int = 0

    def __post_init__(self):
        object.__setattr__(self, "heads", tuple(int(h) for h in self.heads))
        object.__setattr__(self, "theta", _int_theta(self.theta))

    def point(self, i: int) -> int:
        """l_i, 1-based."""
        if i <= len(self.heads):
            return self.heads[i - 1]
        return self.stable - i * self.theta

    def points(self, count: int) -> List[int]:
        return [self.point(i) for i in range(1, count + 1)]

    def __contains__(self, a: int) -> bool:
        r = len(self.heads)
        if a in self.heads:
            return True
        first_tail = self.stable - (r + 1) * self.theta
        return a <= first_tail and (self.stable - a) % self.theta == 0

    def violations(self) -> List[str]:
        out = []
        th = self.theta
        pts = self.points(len(self.heads) + 1)
        if any(pts[i] - pts[i + 1] < th for i in range(len(pts) - 1)):
            out.append("(i) consecutive gaps must be at least theta")
        if self.stable != 0:
            out.append("(iii) the stable value of l_i + i theta must be 0")
        return out

    def to_json(self) -> dict:
        return {"heads": list(self.heads), "theta": self.theta, "stable": self.stable}


def to_lattice(lam, theta) -> LatticeConfig:
    lam = Partition(lam)
    th = _int_theta(theta)
    return LatticeConfig(tuple(p - i * th for i, p in enumerate(lam, start=1)), th)


def from_lattice(cfg: LatticeConfig) -> Partition:
    bad = cfg.violations()
    if bad:
        raise DomainError("not the configuration of a diagram: " + "; ".join(bad))
    return Partition(l + i * cfg.theta for i, l in enumerate(cfg.heads, start=1))


def _check_A(A: Sequence[int], theta: int) -> Tuple[int, ...]:
    A = tuple(sorted((int(a) for a in A), reverse=True))
    if len(set(A)) != len(A):
        raise DomainError("points of A must be distinct")
    if any(A[i] - A[i + 1] < theta for i in range(len(A) - 1)):
        raise DomainError("points of A must be at least theta apart")
    return A


def remove_points(lam, A: Sequence[int], theta) -> Partition:
    """D_A(lam): drop A from L(lam), shift the rest by k theta."""
    lam = Partition(lam)
    th = _int_theta(theta)
    A = _check_A(A, th)
    if not A:
        return lam
    cfg = to_lattice(lam, th)
    for a in A:
        if a not in cfg:
            raise DomainError(f"point {a} is not in the configuration of {tuple(lam)}")
    k = len(A)
    deepest = max([lam.length] + [-(a // th) for a in A])
    R = deepest + k + 1
    kept = [p for p in cfg.points(R) if p not in A]
    mu = Partition(p + k * th + i * th for i, p in enumerate(kept, start=1))
    expected = lam.n - sum(A) - k * (k + 1) * th // 2
    assert mu.n == expected, "size law violated"
    return mu


def in_image(mu, A: Sequence[int], theta) -> bool:
    """True iff L(mu) avoids the windows [a_j + (k-1)theta + 1, a_j + (k+1)theta - 1]."""
    th = _int_theta(theta)
    A = tuple(int(a) for a in A)
    k = len(A)
    cfg = to_lattice(mu, th)
    for a in A:
        for p in range(a + (k - 1) * th + 1, a + (k + 1) * th):
            if p in cfg:
                return False
    return True


def e_star(lam, theta, u):
    """prod_{i <= l(lam)} (u + l_i + theta) / (u - i theta + theta)."""
    lam = Partition(lam)
    th = as_rational(theta)
    out = 1
    for i, p in enumerate(lam, start=1):
        den = u - i * th + th
        if den == 0:
            raise PoleError(f"E* has a pole at u = {u}")
        out = out * (u + p - i * th + th) / den
    return simplify(out) if isinstance(out, (int, GaussianRational)) else out


def e_sharp(lam, theta, u):
    """E*(lam;u)/Gamma(-u/theta) in the pole-free form prod(-u/th - l_i/th - 1)/Gamma(-u/th + r)."""
    lam = Partition(lam)
    th = as_rational(theta)
    r = lam.length
    prod = 1
    for i, p in enumerate(lam, start=1):
        l_i = p - i * th
        prod = prod * (-u / th - l_i / th - 1)
    arg = -u / th + r
    g = rgamma(arg)
    if prod == 0 or g == 0:
        return 0.0
    return to_numeric(prod) * g if isinstance(prod, (Fraction, GaussianRational, int)) else prod * g


def u_points(A: Sequence[int], theta) -> List[Tuple[int, int]]:
    """All (u+, u-) pairs: u = -a_j +- sigma - (k+1) theta, sigma = 0..theta-1."""
    th = _int_theta(theta)
    k = len(A)
    return [(-a + s - (k + 1) * th, -a - s - (k + 1) * th) for a in A for s in range(th)]


def _weight(lam: Partition, z, zp, theta: Fraction):
    """(z)_lam (z')_lam / (H H'): the mixed measure without (1-xi)^t xi^n."""
    h, hp = hook_products(lam, theta)
    num = as_gaussian(gen_pochhammer(as_gaussian(z), lam, theta)) * as_gaussian(gen_pochhammer(as_gaussian(zp), lam, theta))
    return num / (h * hp)


def c_prime_exact(A: Sequence[int], p: ZParams, xi):
    """C' without its (1-xi)^{k(z+z') - k^2 theta} factor; exact Gaussian rational."""
    th = _int_theta(p.theta)
    A = tuple(int(a) for a in A)
    if any(a < 0 for a in A):
        raise DomainError("the E* form needs A inside the nonnegative integers")
    k = len(A)
    xi = as_rational(xi)
    out = as_gaussian(xi ** (sum(A) + k * (k + 1) * th // 2))
    z, zp = as_gaussian(p.z), as_gaussian(p.zp)
    for j, a in enumerate(A, start=1):
        out = out * Fraction(math.factorial(th - 1), math.factorial(a + k * th) * math.factorial(a + k * th + th - 1))
        # Gamma(z + a + th)/Gamma(z - j th + th) with integer spacing a + j th
        out = out * rising(z - j * th + th, a + j * th) * rising(zp - j * th + th, a + j * th)
    for j in range(k):
        for jj in range(j + 1, k):
            for s in range(th):
                out = out * ((A[j] - A[jj]) ** 2 - s * s)
    return simplify(out)


def _one_minus_xi_power(xi, e):
    base = 1 - float(as_rational(xi))
    if isinstance(e, GaussianRational):
        return complex(base ** complex(e))
    if isinstance(e, Fraction) and e.denominator == 1:
        return (1 - as_rational(xi)) ** int(e)
    return base ** float(e)


def c_prime(A, p: ZParams, xi):
    k = len(A)
    e = simplify(k * as_gaussian(p.zsum) - k * k * p.theta)
    return to_numeric(c_prime_exact(A, p, xi)) * to_numeric(_one_minus_xi_power(xi, e))


def c_theorem(A: Sequence[int], p: ZParams, xi, dps: int = 40):
    """The E#-form prefactor C (multiprecision)."""
    th = _int_theta(p.theta)
    A = tuple(int(a) for a in A)
    k = len(A)
    with mpmath.workdps(dps):
        z, zp = mpmath.mpmathify(complex(p.z)), mpmath.mpmathify(complex(p.zp))
        xi = mpmath.mpf(as_rational(xi).numerator) / as_rational(xi).denominator
        out = (2 * mpmath.pi) ** (k * (th - 1)) * mpmath.gamma(th) ** k
        out *= mpmath.mpf(th) ** (-2 * sum(A) - th * k * (2 * k + 1))
        out *= (1 - xi) ** (k * (z + zp) - k * k * th) * xi ** (sum(A) + mpmath.mpf(k * (k + 1) * th) / 2)
        for j, a in enumerate(A, start=1):
            out *= mpmath.gamma(z + a + th) * mpmath.gamma(zp + a + th)
            out /= mpmath.gamma(z - j * th + th) * mpmath.gamma(zp - j * th + th)
        for j in range(k):
            for jj in range(j + 1, k):
                for s in range(th):
                    out *= (A[j] - A[jj]) ** 2 - s * s
        return complex(out)


def prefactor_relation_residual(A: Sequence[int], p: ZParams, xi, dps: int = 40) -> float:
    """Relative gap between C and C' * prod Gamma(-u/theta) over all u+-, in multiprecision.

    The two sides differ only through the Gauss multiplication formula.
    """
    th = _int_theta(p.theta)
    with mpmath.workdps(dps):
        k = len(A)
        xi_q = as_rational(xi)
        e = k * mpmath.mpmathify(complex(p.zsum)) - k * k * th
        cp = mpmath.mpmathify(complex(to_numeric(c_prime_exact(A, p, xi_q)))) * (1 - mpmath.mpf(xi_q.numerator) / xi_q.denominator) ** e
        g = mpmath.mpf(1)
        for up, um in u_points(A, th):
            g *= mpmath.gamma(mpmath.mpf(-up) / th) * mpmath.gamma(mpmath.mpf(-um) / th)
        lhs = mpmath.mpmathify(c_theorem(A, p, xi, dps))
        rhs = cp * g
        return float(abs(lhs - rhs) / abs(lhs))


@lru_cache(maxsize=4096)
def _lhs_shell(A: Tuple[int, ...], z, zp, theta: Fraction, n: int):
    th = int(theta)
    s = GaussianRational(0)
    for lam in enumerate_partitions(n):
        cfg = to_lattice(lam, th)
        if all(a in cfg for a in A):
            s = s + _weight(lam, z, zp, theta)
    return s


def _lhs_sum(A, p: ZParams, xi: Fraction, N: int):
    """Exact sum over |lam| <= N with A in L(lam) of xi^|lam| (z)(z')/(HH'), by shell."""
    _int_theta(p.theta)
    A = tuple(A)
    return [_lhs_shell(A, p.z, p.zp, p.theta, n) * xi ** n for n in range(N + 1)]


@lru_cache(maxsize=4096)
def _rhs_shell(A: Tuple[int, ...], z, zp, theta: Fraction, n: int, form: str):
    th = int(theta)
    k = len(A)
    q = ZParams(z, zp, theta).shifted(k)
    us = u_points(A, th)
    s = GaussianRational(0) if form == "star" else 0j
    for mu in enumerate_partitions(n):
        w = _weight(mu, q.z, q.zp, theta)
        if w == 0:
            continue
        if form == "star":
            f = GaussianRational(1)
            for up, um in us:
                f = f * e_star(mu, th, Fraction(up)) * e_star(mu, th, Fraction(um))
            s = s + f * w
        else:
            f = 1.0
            for up, um in us:
                f = f * e_sharp(mu, th, Fraction(up)) * e_sharp(mu, th, Fraction(um))
            s = s + f * complex(w)
    return s


def _rhs_sum(A, p: ZParams, xi: Fraction, N: int, form: str = "star"):
    """Sum over |mu| <= N of prod E(mu; u+-) xi^|mu| w(mu; z - k th, z' - k th), by shell."""
    _int_theta(p.theta)
    A = tuple(A)
    x = xi if form == "star" else float(xi)
    return [_rhs_shell(A, p.z, p.zp, p.theta, n, form) * x ** n for n in range(N + 1)]


def _real_if(x):
    x = complex(x)
    return x.real if abs(x.imag) <= 1e-14 * max(1.0, abs(x.real)) else x


def corr_lhs(A: Sequence[int], mp: MixedParams, N: int) -> SeriesResult:
    """Mixed-measure mass of {L(lam) contains A}, truncated at |lam| <= N."""
    p = mp.base
    th = _int_theta(p.theta)
    A = _check_A(A, th)
    shells = _lhs_sum(A, p, mp.xi, N)
    total = sum(shells, GaussianRational(0))
    scale = _one_minus_xi_power(mp.xi, p.t)
    tail = nb_tail(N, p.t, mp.xi)
    value = _real_if(complex(to_numeric(simplify(total))) * complex(scale))
    return SeriesResult(value, abs(float(_real_if(tail))) if not isinstance(tail, complex) else abs(tail),
                        N, path="enumeration")


def corr_rhs(A: Sequence[int], mp: MixedParams, N: int) -> SeriesResult:
    """C' times the E*-product average over the shifted mixed measure, |mu| <= N."""
    p = mp.base
    th = _int_theta(p.theta)
    A = _check_A(A, th)
    if any(a < 0 for a in A):
        raise DomainError("the E* form needs A inside the nonnegative integers")
    shells = _rhs_sum(A, p, mp.xi, N)
    total = sum(shells, GaussianRational(0))
    q = p.shifted(len(A))
    scale = complex(_one_minus_xi_power(mp.xi, q.t)) * complex(c_prime(A, p, mp.xi))
    mags = [abs(complex(to_numeric(simplify(s)))) for s in shells[-3:]]
    value = _real_if(complex(to_numeric(simplify(total))) * scale)
    return SeriesResult(value, abs(scale) * sum(mags), N, path="enumeration")


@dataclass(frozen=True)
class CorrelationCheck:
    A: Tuple[int, ...]
    lhs: complex
    rhs_star: complex
    rhs_sharp: complex
    exact_residual: object
    residual: float
    relative: float
    forms_gap: float
    prefactor_gap: float
    N_used: int
    N_rhs: int
    nb_tail: float
    shifted_series: str = ""
    shifted_is_probability: bool = True

    def to_json(self) -> dict:
        from .io import json_scalar

        return {
            "A": list(self.A),
            "lhs": json_scalar(self.lhs),
            "rhs": json_scalar(self.rhs_star),
            "rhs_sharp_form": json_scalar(self.rhs_sharp),
            "exact_residual": json_scalar(self.exact_residual),
            "residual": json_scalar(self.residual),
            "relative_residual": json_scalar(self.relative),
            "forms_gap": json_scalar(self.forms_gap),
            "prefactor_gap": json_scalar(self.prefactor_gap),
            "N_used": self.N_used,
            "N_rhs": self.N_rhs,
            "tails": {"nb_tail": json_scalar(self.nb_tail)},
            # the E* average runs over (z - k theta, z' - k theta); outside the
            # admissible series those weights are signed and only the identity of sums holds
            "shifted_series": self.shifted_series,
            "shifted_is_probability": self.shifted_is_probability,
        }


def theorem34_check(A: Sequence[int], mp: MixedParams, N: Optional[int] = None, tol: float = 1e-6,
                    max_N: int = 34) -> CorrelationCheck:
    """Both sides with matched cutoffs N and N - sum(A) - k(k+1)theta/2.

    Without an explicit N the cutoff grows until the negative-binomial tail
    and the last three shells of the E* sum fall below tol times the value.
    """
    p = mp.base
    th = _int_theta(p.theta)
    A = _check_A(A, th)
    k = len(A)
    shift = sum(A) + k * (k + 1) * th // 2
    if N is None:
        N = shift + 6
        while True:
            tail = abs(complex(nb_tail(N, p.t, mp.xi)))
            lhs = _lhs_sum(A, p, mp.xi, N)
            cur = abs(complex(to_numeric(simplify(sum(lhs, GaussianRational(0))))))
            last = sum(abs(complex(to_numeric(simplify(s)))) for s in lhs[-3:])
            if (tail <= tol * max(cur, 1e-300) and last <= tol * cur) or N >= max_N:
                break
            N += 1
    n_rhs = N - shift
    if n_rhs < 0:
        raise DomainError("cutoff too small for this A")
    lhs_sh = _lhs_sum(A, p, mp.xi, N)
    rhs_sh = _rhs_sum(A, p, mp.xi, n_rhs)
    s_l = sum(lhs_sh, GaussianRational(0))
    s_r = sum(rhs_sh, GaussianRational(0))
    cpx = c_prime_exact(A, p, mp.xi)
    exact_residual = simplify(as_gaussian(s_l) - as_gaussian(cpx) * as_gaussian(s_r))
    scale = complex(_one_minus_xi_power(mp.xi, p.t))
    lhs = complex(to_numeric(simplify(s_l))) * scale
    rhs = complex(to_numeric(simplify(as_gaussian(cpx) * as_gaussian(s_r)))) * scale
    sharp = sum(_rhs_sum(A, p, mp.xi, n_rhs, form="sharp"))
    q = p.shifted(k)
    rhs_sharp = complex(c_theorem(A, p, mp.xi)) * complex(_one_minus_xi_power(mp.xi, q.t)) * sharp
    residual = abs(lhs - rhs)
    return CorrelationCheck(
        A=A,
        lhs=_real_if(lhs),
        rhs_star=_real_if(rhs),
        rhs_sharp=_real_if(rhs_sharp),
        exact_residual=exact_residual,
        residual=residual,
        relative=residual / abs(lhs) if lhs else residual,
        forms_gap=abs(rhs_sharp - rhs) / max(abs(rhs), 1e-300),
        prefactor_gap=prefactor_relation_residual(A, p, mp.xi),
        N_used=N,
        N_rhs=n_rhs,
        nb_tail=abs(complex(nb_tail(N, p.t, mp.xi))),
        shifted_series=q.series.kind,
        shifted_is_probability=bool(q.series.admissible),
    )


def theorem34_residual(A: Sequence[int], mp: MixedParams, N: Optional[int] = None) -> float:
    return theorem34_check(A, mp, N).relative
