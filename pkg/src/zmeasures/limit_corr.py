"""Limit correlation functions of the boundary measures and their scaling limit at the origin."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .boundary import SurfaceAtom, lift_density_transform
from .errors import CapabilityError, DomainError, PoleError
from .exact import GaussianRational, as_gaussian, is_nonpositive_integer, simplify, to_numeric
from .hypergeom import _reg_inner, f20
from .jack import JackEvaluator, principal_specialization
from .partitions import Partition
from .policy import DEFAULT_POLICY, NumericPolicy, SeriesResult
from .quadrature import jacobi01, laguerre, simplex_rule
from .special import gamma, rgamma
from .zmeasure import ZParams


def _real_if(v, tol: float = 1e-12):
    if isinstance(v, complex) and abs(v.imag) <= tol * max(1.0, abs(v.real)):
        return v.real
    return v


@dataclass(frozen=True)
class LimitCorrParams:
    """(z, z', theta) with theta a positive integer, and the correlation order k."""

    p: ZParams
    k: int

    def __post_init__(self):
        if self.p.theta.denominator != 1:
            raise DomainError("limit correlation formulas need theta a positive integer")
        if int(self.k) != self.k or self.k < 1:
            raise DomainError("k must be a positive integer")

    @property
    def theta(self) -> int:
        return int(self.p.theta)

    @property
    def a(self):
        return simplify((-as_gaussian(self.p.z) + self.k * self.p.theta) / self.p.theta)

    @property
    def b(self):
        return simplify((-as_gaussian(self.p.zp) + self.k * self.p.theta) / self.p.theta)

    @property
    def c(self):
        return simplify(as_gaussian(self.a) * as_gaussian(self.b) * self.p.theta)

    @property
    def nu(self) -> Fraction:
        return 1 / self.p.theta

    @property
    def l(self) -> int:
        return 2 * self.k * self.theta

    def to_json(self) -> dict:
        d = self.p.to_json()
        d["k"] = self.k
        return d


def gamma_prefactor(lp: LimitCorrParams):
    """prod_j Gamma(theta) / (Gamma(z - (j-1)theta) Gamma(z' - (j-1)theta)); exact 0 at a pole."""
    th = lp.p.theta
    out = 1.0
    for j in range(1, lp.k + 1):
        u = simplify(as_gaussian(lp.p.z) - (j - 1) * th)
        v = simplify(as_gaussian(lp.p.zp) - (j - 1) * th)
        if is_nonpositive_integer(u) or is_nonpositive_integer(v):
            return Fraction(0)
        out = out * gamma(th) * rgamma(u) * rgamma(v)
    return out


def _points(x, k: int) -> np.ndarray:
    X = np.asarray(x, dtype=float).ravel()
    if X.shape[0] != k:
        raise DomainError(f"expected {k} points, got {X.shape[0]}")
    if np.any(X <= 0):
        raise DomainError("points must be positive")
    return X


def _common_factor(lp: LimitCorrParams, X: np.ndarray):
    """(prod x)^{z+z'+theta-1-2k theta} prod_{i<j} (x_i - x_j)^{2 theta}."""
    th = lp.theta
    e = to_numeric(simplify(as_gaussian(lp.p.zsum) + th - 1 - 2 * lp.k * th))
    base = float(np.prod(X))
    out = base ** e
    for i in range(lp.k):
        for j in range(i + 1, lp.k):
            out = out * (X[i] - X[j]) ** (2 * th)
    return out


def _repeated(values: Sequence[float], times: int) -> List[float]:
    return [v for v in values for _ in range(times)]


def rho_tilde(x: Sequence[float], lp: LimitCorrParams, policy: NumericPolicy = DEFAULT_POLICY) -> SeriesResult:
    """Correlation function of the lifted boundary measure at the points x.

    Gamma prefactor times the elementary factor times 2F0(a, b; -theta/x_i,
    each repeated 2 theta times) with parameter 1/theta. The 2F0 is taken
    only along its terminating or integral paths (capability error otherwise).
    """
    X = _points(x, lp.k)
    pref = gamma_prefactor(lp)
    if pref == 0:
        return SeriesResult(Fraction(0), 0.0, 0, policy, path="gamma prefactor vanishes")
    args = _repeated((-lp.theta / X).tolist(), 2 * lp.theta)
    F = f20(lp.a, lp.b, lp.nu, args, policy=policy)
    val = pref * _common_factor(lp, X) * math.exp(-float(X.sum())) * F.scalar
    val = _real_if(complex(val)) if isinstance(val, complex) else val
    scale = abs(val / F.scalar) if F.scalar != 0 else 0.0
    return SeriesResult(val, scale * F.tail_estimate, F.degree_used, policy, nodes=F.nodes, path=F.path)


@dataclass(frozen=True)
class AtomicValue:
    """rho at x when the measure has a delta on the face |x| = 1.

    As a distribution rho = surface * delta(1 - |x|) + density, with both
    coefficients evaluated at x.
    """

    surface: float
    density: float

    def to_json(self) -> dict:
        return {"surface": self.surface, "density": self.density}


def _check_c(lp: LimitCorrParams):
    c = as_gaussian(lp.c)
    if c.im != 0:
        if c.re <= 0:
            raise CapabilityError("Re c <= 0 with non-real c is not represented", conditions=("Re c > 0 or c = 0",))
        return c
    if c.re < 0:
        raise CapabilityError(f"c = {c} < 0 gives a distribution of positive order, not represented",
                              conditions=("Re c > 0 or c = 0",))
    return c


def _rho_parts(lp: LimitCorrParams, policy: NumericPolicy):
    """(pref, density(x), surface(x)) as float callables; surface is None unless c = 0."""
    c = _check_c(lp)
    pref = gamma_prefactor(lp)
    th = lp.theta
    t = to_numeric(lp.p.t)
    gt = gamma(t) if not is_nonpositive_integer(lp.p.t) else None
    if gt is None:
        raise PoleError("Gamma(zz'/theta) has a pole")
    cn = to_numeric(simplify(c))

    def density(X: np.ndarray):
        if pref == 0:
            return 0.0
        y = 1.0 - float(X.sum())
        if y <= 0:
            return 0.0
        args = np.asarray(_repeated((-th * y / X).tolist(), 2 * th))
        vals, _ = _reg_inner(lp.a, lp.b, lp.c, lp.nu, lp.l, args[None, :], policy)
        v = gt * pref * _common_factor(lp, X) * y ** (cn - 1) * vals[0]
        return _real_if(complex(v))

    def atom(X: np.ndarray):
        if pref == 0:
            return 0.0
        return _real_if(complex(gt * pref * _common_factor(lp, X)))

    surface = atom if c == 0 else None

    return pref, density, surface


def rho(x: Sequence[float], lp: LimitCorrParams, policy: NumericPolicy = DEFAULT_POLICY):
    """Correlation function of the boundary measure at x.

    Returns exact 0 when |x| > 1 or a gamma prefactor vanishes, a float density
    when Re c > 0, and an ``AtomicValue`` when c = 0.
    """
    X = _points(x, lp.k)
    if float(X.sum()) > 1 or gamma_prefactor(lp) == 0:
        return Fraction(0)
    pref, density, surface = _rho_parts(lp, policy)
    if pref == 0:
        return Fraction(0)
    if surface is None:
        return density(X)
    return AtomicValue(float(np.real(surface(X))), float(np.real(density(X))) if X.sum() < 1 else 0.0)


def rho_measure(lp: LimitCorrParams, policy: NumericPolicy = DEFAULT_POLICY):
    """The correlation function as an object accepted by the lifting transform."""
    _, density, surface = _rho_parts(lp, policy)
    if surface is None:
        return lambda X: float(np.real(density(np.asarray(X, dtype=float))))
    dens = lambda X: float(np.real(density(np.asarray(X, dtype=float))))
    return SurfaceAtom(lambda X: float(np.real(surface(np.asarray(X, dtype=float)))), dens)


def lifting_residual(lp: LimitCorrParams, x: Sequence[float], policy: NumericPolicy = DEFAULT_POLICY) -> dict:
    """Gamma-mix the boundary correlation function and compare with the lifted one."""
    X = _points(x, lp.k)
    c = _check_c(lp)
    meas = rho_measure(lp, policy)
    edge = None if c == 0 else float(to_numeric(simplify(c)).real) - 1
    lifted = lift_density_transform(meas, to_numeric(lp.p.t), X, policy, edge_exponent=edge)
    direct = float(np.real(rho_tilde(X, lp, policy).scalar))
    res = abs(lifted - direct)
    return {"x": X.tolist(), "lifted": lifted, "direct": direct, "residual": res,
            "relative": res / abs(direct) if direct else res}


# Laguerre-ensemble oracles ---------------------------------------------------

def _ensemble_weight_exponent(m: int, zp, theta) -> float:
    e = float(to_numeric(as_gaussian(zp))) - (m - 1) * float(theta) - 1
    if e <= -1:
        raise DomainError("need z' > (m-1) theta")
    return e


def laguerre_oracle(m: int, zp, theta, k: int, x: Sequence[float], policy: NumericPolicy = DEFAULT_POLICY,
                    simplex: bool = False) -> float:
    """k-th correlation function of the m-particle ensemble with density proportional to

        prod a_i^{z'-(m-1)theta-1} e^{-sum a} prod |a_i - a_j|^{2 theta}

    on the orthant (or, with ``simplex``, without the exponential on the face
    sum a = 1). The normalization is computed by quadrature as well.
    """
    if m > 2:
        raise CapabilityError("the quadrature oracle is implemented for m <= 2", conditions=("m <= 2",))
    if k > m:
        return 0.0
    X = _points(x, k)
    e = _ensemble_weight_exponent(m, zp, theta)
    th = float(theta)
    n = max(policy.quad_nodes, 64)
    if m == 1:
        if simplex:
            raise CapabilityError("the one-particle simplex measure is an atom at 1",
                                  conditions=("m = 2 for a simplex density",))
        # int_0^inf a^e e^{-a} da by Gauss-Laguerre with the weight itself
        _, w = laguerre(n, e)
        return float(X[0] ** e * math.exp(-X[0]) / w.sum())
    if simplex:
        t, w = simplex_rule(2, e + 1, th, n)
        Z = float(w.sum())
        if k == 2:
            if abs(X.sum() - 1) > 1e-12:
                return 0.0
            raise CapabilityError("the two-point function lives on the face |x| = 1", conditions=("k = 1",))
        u = X[0]
        if u >= 1:
            return 0.0
        f = (u * (1 - u)) ** e * abs(2 * u - 1) ** (2 * th)
        return float(2 * f / Z)
    # normalization over the orthant: cone rule with radial Laguerre weight
    from .quadrature import cone_rule

    _, w = cone_rule(2, e + 1, th, n, "laguerre")
    Z = float(w.sum())
    if k == 2:
        f = (X[0] * X[1]) ** e * math.exp(-X.sum()) * abs(X[0] - X[1]) ** (2 * th)
        return float(2 * f / Z)
    xv = X[0]
    # int_0^inf y^e e^{-y} |x - y|^{2 theta} dy split at y = x
    t1, w1 = jacobi01(n, e, 2 * th)
    left = xv ** (e + 2 * th + 1) * float(np.sum(w1 * np.exp(-xv * t1)))
    u2, w2 = laguerre(n, 2 * th)
    right = math.exp(-xv) * float(np.sum(w2 * (xv + u2) ** e))
    marg = xv ** e * math.exp(-xv) * (left + right)
    return float(2 * marg / Z)


# bulk scaling limit ----------------------------------------------------------

@dataclass(frozen=True)
class BulkParams:
    p: ZParams
    k: int

    def __post_init__(self):
        if self.p.theta.denominator != 1:
            raise DomainError("theta must be a positive integer")
        if int(self.k) != self.k or self.k < 1:
            raise DomainError("k must be a positive integer")

    @property
    def theta(self) -> int:
        return int(self.p.theta)

    @property
    def s(self) -> Tuple:
        """(s'_1..s'_{k theta}, s''_1..s''_{k theta}), exact."""
        z, zp = as_gaussian(self.p.z), as_gaussian(self.p.zp)
        th = self.theta
        n = self.k * th
        s1 = tuple(simplify((zp - z - 2 * j + th + 1) / (2 * th)) for j in range(1, n + 1))
        s2 = tuple(simplify((z - zp - 2 * j + th + 1) / (2 * th)) for j in range(1, n + 1))
        return s1 + s2

    @property
    def s_sum(self):
        return simplify(sum((as_gaussian(v) for v in self.s), GaussianRational(0)))

    @property
    def homogeneity_degree(self):
        """Scaling degree of the limit density in x: |s| + k(k-1) theta."""
        return simplify(as_gaussian(self.s_sum) + self.k * (self.k - 1) * self.theta)

    def to_json(self) -> dict:
        d = self.p.to_json()
        d["k"] = self.k
        return d


def bulk_constant(bp: BulkParams):
    """The Gamma-product constant of the scaling limit; exact 0 when a denominator Gamma has a pole."""
    z, zp = as_gaussian(bp.p.z), as_gaussian(bp.p.zp)
    th, k = bp.theta, bp.k
    num_args, den_args = [], []
    for j in range(k):
        jt = j * th
        num_args += [jt + 1, th, simplify(z - zp + jt + 1), simplify(zp - z + jt + 1)]
        den_args += [jt + k + 1, simplify(jt - z + 1), simplify(jt - zp + 1), simplify(z - jt), simplify(zp - jt)]
    den_pole = any(is_nonpositive_integer(a) for a in den_args)
    num_pole = any(is_nonpositive_integer(a) for a in num_args)
    if num_pole:
        raise PoleError("a numerator Gamma factor has a pole")
    if den_pole:
        return Fraction(0)
    out = 1.0
    for a in num_args:
        out = out * gamma(a)
    for a in den_args:
        out = out * rgamma(a)
    return _real_if(complex(out))


def _groups(values: Sequence) -> List[Tuple[object, int]]:
    out: List[List] = []
    for v in values:
        for g in out:
            if g[0] == v:
                g[1] += 1
                break
        else:
            out.append([v, 1])
    return [(g[0], g[1]) for g in out]


def _falling_poly(p: int) -> np.poly1d:
    poly = np.poly1d([1.0])
    for i in range(p):
        poly = poly * np.poly1d([1.0, -float(i)])
    return poly


def _entry(x: float, s, p: int, q: int):
    """d^p/dx^p d^q/ds^q x^s / (p! q!)."""
    lx = math.log(x)
    f = _falling_poly(p)
    total = 0
    for r in range(q + 1):
        fr = np.polyder(f, r)(s) if r <= f.order else 0.0
        total = total + math.comb(q, r) * fr * lx ** (q - r)
    return total * x ** (s - p) / (math.factorial(p) * math.factorial(q))


def spherical_phi_theta1(s: Sequence, x: Sequence[float]):
    """0!1!...(l-1)! (prod x)^{(l-1)/2} det[x_i^{s_j}] / prod_{i<j} (x_i - x_j)(s_i - s_j).

    Repeated x (or s) values are handled by the confluent limit: derivative
    rows (columns) in both the determinant and the matching Vandermonde.
    """
    s = [to_numeric(v) if not isinstance(v, (float, complex)) else v for v in s]
    x = [float(v) for v in x]
    l = len(s)
    if len(x) != l:
        raise DomainError("s and x must have the same length")
    if any(v <= 0 for v in x):
        raise DomainError("x must be positive")
    xg, sg = _groups(x), _groups(s)
    rows = [(xv, p) for xv, r in xg for p in range(r)]
    cols = [(sv, q) for sv, r in sg for q in range(r)]
    A = np.array([[_entry(xv, sv, p, q) for sv, q in cols] for xv, p in rows], dtype=complex)
    # confluent Vandermonde in x: rows d^p/dx^p x^{j-1}/p!
    Vx = np.array([[math.comb(j, p) * xv ** (j - p) if j >= p else 0.0 for j in range(l)] for xv, p in rows])
    # confluent Vandermonde in s: columns d^q/ds^q s^{i-1}/q!
    Vs = np.array([[math.comb(i, q) * sv ** (i - q) if i >= q else 0.0 for sv, q in cols] for i in range(l)],
                  dtype=complex)
    const = 1.0
    for i in range(l):
        const *= math.factorial(i)
    val = const * float(np.prod(x)) ** ((l - 1) / 2) * np.linalg.det(A) / (np.linalg.det(Vx) * np.linalg.det(Vs))
    return _real_if(complex(val), 1e-10)


def _jack_point(s: Sequence, nu: Fraction) -> Optional[Partition]:
    """lam with s = lam + rho (up to order), or None."""
    l = len(s)
    try:
        sv = sorted((as_gaussian(v) for v in s), key=lambda g: (g.re, g.im), reverse=True)
    except Exception:
        return None
    lam = []
    for i, g in enumerate(sv):
        rho_i = nu * Fraction(l - 1 - 2 * i, 2)
        d = g - rho_i
        if d.im != 0 or d.re.denominator != 1 or d.re < 0:
            return None
        lam.append(int(d.re))
    if any(a < b for a, b in zip(lam, lam[1:])):
        return None
    return Partition(lam)


def bulk_limit_density(y: Sequence[float], bp: BulkParams):
    """C prod_{i<j} (e^{-y_i} - e^{-y_j})^{2 theta} phi_s(e^{-y} each repeated 2 theta times)."""
    Y = np.asarray(y, dtype=float).ravel()
    if Y.shape[0] != bp.k:
        raise DomainError(f"expected {bp.k} points")
    C = bulk_constant(bp)
    if C == 0:
        return Fraction(0)
    th = bp.theta
    ex = np.exp(-Y)
    vand = 1.0
    for i in range(bp.k):
        for j in range(i + 1, bp.k):
            vand *= (ex[i] - ex[j]) ** (2 * th)
    xs = _repeated(ex.tolist(), 2 * th)
    if th == 1:
        phi = spherical_phi_theta1(bp.s, xs)
    else:
        lam = _jack_point(bp.s, Fraction(1, th))
        if lam is None:
            raise CapabilityError("phi_s for theta != 1 is available only at s = lam + rho",
                                  conditions=("theta = 1", "s - rho a partition"))
        nu = Fraction(1, th)
        phi = _jack_normalized(lam, nu, xs)
    return _real_if(complex(C * vand * phi), 1e-10)


def _jack_normalized(lam: Partition, nu: Fraction, xs: Sequence[float]) -> float:
    vals = JackEvaluator(nu, len(xs)).values(np.asarray([xs]), lam.n)
    return float(vals[lam][0]) / float(principal_specialization(lam, nu, len(xs)))


def bulk_convergence_audit(bp: BulkParams, T_list: Sequence[float], y_grid: Sequence[Sequence[float]],
                           policy: NumericPolicy = DEFAULT_POLICY, lifted: bool = False) -> List[dict]:
    """Rescaled correlation function rho_k(e^{-y-T}) prod e^{-y_i-T} versus the limit density.

    Each row records the value, the limit and the gap, or the capability error
    that prevented evaluation at that T.
    """
    lp = LimitCorrParams(bp.p, bp.k)
    rows = []
    for T in T_list:
        for y in y_grid:
            Y = np.asarray(y, dtype=float)
            try:
                limit = bulk_limit_density(Y, bp)
            except CapabilityError as exc:
                limit = None
                lim_err = str(exc)
            else:
                lim_err = None
            X = np.exp(-Y - T)
            row = {"T": float(T), "y": Y.tolist(), "limit": None if limit is None else float(np.real(limit))}
            try:
                if lifted:
                    v = rho_tilde(X, lp, policy).scalar
                else:
                    v = rho(X, lp, policy)
                    if isinstance(v, AtomicValue):
                        v = v.density
                val = float(np.real(v)) * float(np.prod(X))
                row["value"] = val
                row["gap"] = None if limit is None else abs(val - float(np.real(limit)))
                row["status"] = "ok"
            except CapabilityError as exc:
                row["value"] = None
                row["gap"] = None
                row["status"] = f"capability: {exc}"
            if lim_err:
                row["limit_status"] = f"capability: {lim_err}"
            rows.append(row)
    return rows


def bulk_monte_carlo(p: ZParams, n: int, samples: int, seed: int, window: Tuple[float, float] = (2.0, 5.0),
                     points: str = "frobenius") -> dict:
    """Density of {-ln alpha_i} in a y-window from growth-chain samples of M^(n).

    Points are the positive modified Frobenius row coordinates divided by n
    (or the lattice convention); the density is count / (samples * width).
    """
    from .sampler import rescaled_points, sample_partition, stream

    lo, hi = window
    if not 0 <= lo < hi:
        raise DomainError("window must satisfy 0 <= lo < hi")
    counts = np.empty(samples)
    for i in range(samples):
        lam = sample_partition(n, p, stream(seed, i))
        pts = rescaled_points(lam, p.theta, 1.0 / n, points)
        yv = -np.log(pts)
        counts[i] = np.count_nonzero((yv > lo) & (yv <= hi))
    width = hi - lo
    est = float(counts.mean() / width)
    err = float(counts.std(ddof=1) / math.sqrt(samples) / width) if samples > 1 else float("inf")
    return {"n": n, "samples": samples, "seed": seed, "window": [lo, hi], "points": points,
            "density": est, "stderr": err}
