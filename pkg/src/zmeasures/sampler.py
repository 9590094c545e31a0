"""Monte Carlo for z-measures: growth chain, negative binomial mixing, empirical correlations."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import special as sp

from .boundary import CorrelationQuery, power_sums
from .errors import DomainError
from .exact import as_gaussian, as_rational, format_exact, rising, simplify
from .jack import evaluate_power_sums, jack_P, to_power_sums
from .partitions import Partition, embed_iota_n, enumerate_partitions
from .zmeasure import MixedParams, ZParams, jack_moment, measure

CODE_VERSION = "zmeasures-sampler-1"


def stream(seed: int, index: int) -> np.random.Generator:
    """Independent PCG64 stream for sample ``index`` of a run seeded by ``seed``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(int(index),))))


class _Chain:
    """Growth chain state kept as blocks of equal rows [(length, multiplicity), ...].

    The up-transition probability of adding the box with content c at an
    addable corner is (z + c)(z' + c) mu_c / (zz' + theta n), where mu is the
    transition measure of the diagram in theta-anisotropic profile coordinates:
    minima x_k (contents of addable boxes) and maxima y_k = L_b - theta(last row
    of block b).
    """

    def __init__(self, p: ZParams):
        series = p.series
        if not series.admissible:
            raise DomainError(f"parameters are not admissible: {series}")
        self.p = p
        self.theta = p.theta
        self.th = float(p.theta)
        self.q = float(as_gaussian(p.zz).re)
        self.s = float(as_gaussian(p.zsum).re)
        # for degenerate parameters some factors vanish; detect those exactly
        self.exact_zero = series.kind == "degenerate"
        self.z = as_gaussian(p.z)
        self.zp = as_gaussian(p.zp)
        self.blocks: List[List[int]] = []
        self.n = 0
        self.rows = 0

    def _corners(self):
        th = self.th
        xs, ys, exact_c = [], [], []
        start = 1
        for L, m in self.blocks:
            xs.append(L - (start - 1) * th)
            ys.append(L - (start + m - 1) * th)
            if self.exact_zero:
                exact_c.append(L - (start - 1) * self.theta)
            start += m
        xs.append(-self.rows * th)
        if self.exact_zero:
            exact_c.append(-self.rows * self.theta)
        return xs, ys, exact_c

    def weights(self) -> List[float]:
        """Unnormalized transition weights, one per addable corner (top to bottom)."""
        x, y, exact_c = self._corners()
        q, s = self.q, self.s
        out = []
        for k, xk in enumerate(x):
            # mu_k = prod_i (x_k - y_i) / prod_{i != k} (x_k - x_i), paired as ratios in (0, 1)
            mu = 1.0
            for i, yi in enumerate(y):
                xo = x[i] if i < k else x[i + 1]
                mu *= (xk - yi) / (xk - xo)
            w = (q + s * xk + xk * xk) * mu
            out.append(w if w > 0 else 0.0)
        if self.exact_zero:
            for k, c in enumerate(exact_c):
                if self.z + c == 0 or self.zp + c == 0:
                    out[k] = 0.0
        return out

    def probabilities(self) -> np.ndarray:
        w = np.array(self.weights())
        return w / w.sum()

    def add(self, k: int) -> None:
        b = self.blocks
        if k == len(b):
            if b and b[-1][0] == 1:
                b[-1][1] += 1
            else:
                b.append([1, 1])
            self.rows += 1
        else:
            L = b[k][0] + 1
            if k > 0 and b[k - 1][0] == L:
                b[k - 1][1] += 1
            else:
                b.insert(k, [L, 1])
                k += 1
            b[k][1] -= 1
            if b[k][1] == 0:
                del b[k]
        self.n += 1

    def partition(self) -> Partition:
        return Partition([L for L, m in self.blocks for _ in range(m)])


def transition_probabilities(lam, p: ZParams) -> List[Tuple[Partition, float]]:
    """Float up-transition probabilities from ``lam``, children in row order."""
    lam = Partition(lam)
    ch = _Chain(p)
    for L, m in sorted(lam.multiplicities().items(), reverse=True):
        ch.blocks.append([L, m])
    ch.n, ch.rows = lam.n, lam.length
    probs = ch.probabilities()
    return list(zip(lam.children(), probs.tolist()))


def sample_partition(n: int, p: ZParams, rng: np.random.Generator) -> Partition:
    """One draw from M^(n) by running the growth chain for n steps."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    series = p.series
    if series.max_rows == 1:
        return Partition((n,)) if n else Partition(())
    if series.max_cols == 1:
        return Partition((1,) * n)
    ch = _Chain(p)
    uniforms = rng.random(n)
    for step in range(n):
        w = ch.weights()
        target = uniforms[step] * sum(w)
        acc = 0.0
        k = len(w) - 1
        for i, wi in enumerate(w):
            acc += wi
            if target < acc:
                k = i
                break
        while w[k] == 0:
            k -= 1
        ch.add(k)
    return ch.partition()


def _nb_partial_exact(t: Fraction, xi: Fraction, n: int) -> Fraction:
    w = (1 - xi) ** int(t)
    acc = w
    for j in range(n):
        w = w * (t + j) * xi / (j + 1)
        acc += w
    return acc


def nb_draw(t, xi, rng: np.random.Generator) -> int:
    """Negative binomial draw by inverse CDF.

    Partial sums run in floating point; when t is an integer and the uniform
    lands within 1e-9 of a partial sum, that comparison is redone with the
    exact rational partial sums.
    """
    xi = as_rational(xi)
    u = rng.random()
    tg = as_gaussian(t)
    if tg.im != 0 or tg.re <= 0:
        raise DomainError("the mixing parameter t must be positive")
    t = tg.re
    exact = t.denominator == 1
    tf, xf = float(t), float(xi)
    logw = tf * math.log1p(-xf)
    acc = math.exp(logw)
    n = 0
    while True:
        if abs(acc - u) < 1e-9 and exact:
            if _nb_partial_exact(t, xi, n) > Fraction(u):
                return n
        elif acc > u:
            return n
        logw += math.log((tf + n) * xf / (n + 1))
        n += 1
        acc += math.exp(logw)
        if n > 10 ** 9:
            raise DomainError("negative binomial inverse CDF did not terminate")


def sample_mixed(mp: MixedParams, rng: np.random.Generator) -> Partition:
    n = nb_draw(mp.base.t, mp.xi, rng)
    return sample_partition(n, mp.base, rng)


@dataclass
class SampleRun:
    seed: int
    params: ZParams
    samples: int
    n_target: Optional[int] = None
    xi: Optional[Fraction] = None
    records: List[Partition] = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    @property
    def mode(self) -> str:
        return "n" if self.n_target is not None else "xi"

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "params": self.params.to_json(),
            "mode": self.mode,
            "n": self.n_target,
            "xi": None if self.xi is None else format_exact(self.xi),
            "samples": self.samples,
            "records": [list(r) for r in self.records],
            "provenance": self.provenance,
        }


def run_samples(p: ZParams, samples: int, seed: int, n: Optional[int] = None, xi=None) -> SampleRun:
    """``samples`` independent draws, sample i from stream(seed, i).

    Exactly one of n (fixed size) and xi (negative binomial mixing) is given.
    """
    if (n is None) == (xi is None):
        raise DomainError("give exactly one of n and xi")
    xi_q = None if xi is None else as_rational(xi)
    mp = None if xi is None else MixedParams(p, xi_q)
    recs = []
    for i in range(samples):
        rng = stream(seed, i)
        recs.append(sample_partition(n, p, rng) if mp is None else sample_mixed(mp, rng))
    prov = {"code": CODE_VERSION, "rng": "PCG64, SeedSequence(seed, spawn_key=(index,))"}
    return SampleRun(seed=seed, params=p, samples=samples, n_target=n, xi=xi_q, records=recs, provenance=prov)


def rescaled_points(lam, theta, scale: float, points: str = "lattice") -> np.ndarray:
    """Nonzero rescaled points of a diagram.

    "lattice": max(l_i - i theta, 0) * scale with l_i = lambda_i - i theta.
    "frobenius": modified Frobenius row coordinates lambda_i - i + 1/2 (positive ones) * scale.
    """
    lam = Partition(lam)
    rows = np.asarray(lam, dtype=float)
    i = np.arange(1, len(rows) + 1, dtype=float)
    if points == "lattice":
        v = rows - 2 * i * float(theta)
    elif points == "frobenius":
        v = rows - i + 0.5
    else:
        raise DomainError(f"unknown point convention {points!r}")
    v = v[v > 0]
    return v * scale


@dataclass(frozen=True)
class EmpiricalCorrelation:
    k: int
    boxes: Tuple[Tuple[float, float], ...]
    estimate: float
    stderr: float
    samples: int

    def to_json(self) -> dict:
        return {"k": self.k, "boxes": [list(b) for b in self.boxes], "estimate": self.estimate,
                "stderr": self.stderr, "samples": self.samples}


def empirical_corr(run: SampleRun, query: CorrelationQuery, scaling: str = "by_n",
                   points: str = "lattice") -> EmpiricalCorrelation:
    """Mean over samples of the number of ordered k-tuples of distinct points, one per box.

    Boxes are disjoint, so the count is the product of per-box counts.
    """
    if scaling == "by_n" and run.mode != "n":
        raise DomainError("by_n scaling needs a fixed-n run")
    if scaling == "by_(1-xi)" and run.mode != "xi":
        raise DomainError("by_(1-xi) scaling needs a mixed run")
    if scaling not in ("by_n", "by_(1-xi)"):
        raise DomainError(f"unknown scaling {scaling!r}")
    vals = np.empty(len(run.records))
    for r, lam in enumerate(run.records):
        if scaling == "by_n":
            scale = 1.0 / run.n_target if run.n_target else 0.0
        else:
            scale = 1.0 - float(run.xi)
        pts = rescaled_points(lam, run.params.theta, scale, points)
        prod = 1.0
        for lo, hi in query.boxes:
            prod *= float(np.count_nonzero((pts > lo) & (pts <= hi)))
        vals[r] = prod
    N = len(vals)
    est = float(vals.mean()) if N else 0.0
    err = float(vals.std(ddof=1) / math.sqrt(N)) if N > 1 else float("inf")
    return EmpiricalCorrelation(query.k, query.boxes, est, err, N)


def nb_moment(t, xi, m: int) -> Fraction:
    """E[(n(1 - xi))^m] for n ~ NB(t, xi), exact.

    Uses the factorial moments E[n(n-1)...(n-j+1)] = (t)_j (xi/(1-xi))^j and
    Stirling numbers of the second kind.
    """
    xi = as_rational(xi)
    t = as_rational(t)
    r = xi / (1 - xi)
    total = Fraction(0)
    for j in range(m + 1):
        total += _stirling2(m, j) * rising(t, j) * r ** j
    return total * (1 - xi) ** m


def _stirling2(m: int, j: int) -> int:
    if m == j:
        return 1
    if j == 0 or j > m:
        return 0
    return j * _stirling2(m - 1, j) + _stirling2(m - 1, j - 1)


def nb_moment_truncated(t, xi, m: int, N: int) -> Tuple[Fraction, Fraction]:
    """Direct sum over n <= N of NB weights times (n(1 - xi))^m, and the exact remainder."""
    xi = as_rational(xi)
    t = as_rational(t)
    if t.denominator != 1:
        raise DomainError("exact truncated sums need integer t")
    w = (1 - xi) ** int(t)
    s = Fraction(0)
    for n in range(N + 1):
        s += w * (n * (1 - xi)) ** m
        w = w * (t + n) * xi / (n + 1)
    return s, nb_moment(t, xi, m) - s


def nb_gamma_moments(t, xi, m_max: int) -> List[Tuple[Fraction, Fraction, Fraction]]:
    """[(moment, limit (t)_m, |gap|)] for m = 0..m_max."""
    t = as_rational(t)
    out = []
    for m in range(m_max + 1):
        mom = nb_moment(t, xi, m)
        lim = rising(t, m)
        out.append((mom, lim, abs(mom - lim)))
    return out


def nb_histogram_gap(t, xi, width: float = 0.1, lo: float = 0.1, hi: float = 10.0) -> float:
    """Sup over bins in [lo, hi] of |NB mass of the bin / width - Gamma(t) bin average density|.

    n(1 - xi) is binned; NB masses come from the regularized incomplete beta
    CDF, and the Gamma density is averaged over each bin through its CDF.
    """
    tf, xf = float(as_rational(t)), float(as_rational(xi))
    edges = np.arange(lo, hi + width / 2, width)
    # n(1-xi) <= s  <=>  n <= floor(s/(1-xi))
    def nb_cdf(s):
        k = np.floor(s / (1 - xf) + 1e-9)
        return sp.betainc(tf, k + 1, 1 - xf)
    nb_mass = np.diff(nb_cdf(edges))
    g_mass = np.diff(sp.gammainc(tf, edges))
    return float(np.max(np.abs(nb_mass - g_mass)) / width)


def moment_convergence_audit(lam, p: ZParams, N_list: Sequence[int]) -> List[dict]:
    """Exact average of P_lam(iota_N(mu)) over mu ~ M^(N) versus the limit moment."""
    lam = Partition(lam)
    limit = jack_moment(lam, p)
    P = to_power_sums(jack_P(lam, p.theta))
    rows = []
    for N in N_list:
        total = 0
        for mu in enumerate_partitions(N):
            m = measure(mu, p)
            if m == 0:
                continue
            ps = [None] + power_sums(embed_iota_n(mu), p.theta, max(lam.n, 1))
            total = total + as_gaussian(m) * as_gaussian(evaluate_power_sums(P, ps))
        avg = simplify(as_gaussian(total))
        gap = abs(complex(as_gaussian(avg) - as_gaussian(limit)))
        rows.append({"N": N, "average": avg, "limit": limit, "gap": gap})
    return rows
