"""Jack polynomials P_lam^(nu) with Macdonald's alpha = 1/nu.

Two independent constructions live here:

* ``jack_P``: exact monomial expansion by Gram-Schmidt on monomials under
  <p_lam, p_mu> = delta z_lam nu^{-l(lam)}, processed along reverse
  lexicographic order (a linear extension of dominance).
* ``JackEvaluator``: numerical values in l variables through the branching
  rule P_lam(x_1..x_k) = sum_mu psi_{lam/mu} x_k^{|lam/mu|} P_mu(x_1..x_{k-1}).

The tests cross-check one against the other.
"""

from __future__ import annotations

import itertools
import json
import math
import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, ResourceError
from .exact import as_rational, format_fraction
from .partitions import EMPTY, Partition, enumerate_partitions, hook_products, partitions_with_length
from .zmeasure import kappa

JACK_BOUND = 12
CACHE_VERSION = 1
CACHE_ENV = "ZMEASURES_CACHE_DIR"


@dataclass(frozen=True)
class SymmetricPolynomial:
    """Exact expansion sum c_mu m_mu; every mu has |mu| = degree."""

    degree: int
    items: Tuple[Tuple[Partition, Fraction], ...]

    @classmethod
    def from_terms(cls, degree: int, terms: Mapping) -> "SymmetricPolynomial":
        clean = []
        for mu, c in terms.items():
            mu = Partition(mu)
            if c == 0:
                continue
            if mu.n != degree:
                raise DomainError(f"monomial {tuple(mu)} has the wrong degree")
            clean.append((mu, c))
        clean.sort(key=lambda kv: tuple(kv[0]), reverse=True)
        return cls(degree, tuple(clean))

    @property
    def terms(self) -> Dict[Partition, Fraction]:
        return dict(self.items)

    def coefficient(self, mu) -> Fraction:
        return self.terms.get(Partition(mu), Fraction(0))

    def is_zero(self) -> bool:
        return not self.items

    def __add__(self, other: "SymmetricPolynomial") -> "SymmetricPolynomial":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if other.degree != self.degree:
            raise DomainError("cannot add polynomials of different degree")
        out = self.terms
        for mu, c in other.items:
            out[mu] = out.get(mu, 0) + c
        return SymmetricPolynomial.from_terms(self.degree, out)

    def __neg__(self):
        return SymmetricPolynomial(self.degree, tuple((mu, -c) for mu, c in self.items))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SymmetricPolynomial":
        return SymmetricPolynomial.from_terms(self.degree, {mu: c * v for mu, v in self.items})

    def times_p1(self) -> "SymmetricPolynomial":
        """Multiply by m_(1) = p_1.

        The coefficient of m_lam in m_mu * p_1 counts the rows i of lam with
        lam - e_i (sorted) equal to mu; summing over mu gives the product.
        """
        out: Dict[Partition, Fraction] = {}
        for mu, c in self.items:
            parts = list(mu) + [0]
            seen = set()
            for i in range(len(parts)):
                new = parts.copy()
                new[i] += 1
                lam = Partition(sorted(new, reverse=True))
                if lam in seen:
                    continue
                seen.add(lam)
                # number of rows of lam whose decrement gives back mu
                mult = sum(1 for r in range(len(lam)) if Partition(sorted(
                    [p - (1 if k == r else 0) for k, p in enumerate(lam)], reverse=True)) == mu)
                out[lam] = out.get(lam, 0) + c * mult
        return SymmetricPolynomial.from_terms(self.degree + 1, out)

    def to_json(self) -> dict:
        return {",".join(map(str, mu)): format_fraction(c) for mu, c in self.items}


def monomial(mu) -> SymmetricPolynomial:
    mu = Partition(mu)
    return SymmetricPolynomial(mu.n, ((mu, Fraction(1)),))


def _distinct_permutations(seq: Sequence[int]):
    counts: Dict[int, int] = {}
    for v in seq:
        counts[v] = counts.get(v, 0) + 1
    keys = sorted(counts)
    n = len(seq)
    out: List[int] = []

    def rec():
        if len(out) == n:
            yield tuple(out)
            return
        for k in keys:
            if counts[k]:
                counts[k] -= 1
                out.append(k)
                yield from rec()
                out.pop()
                counts[k] += 1

    yield from rec()


def monomial_value(mu, x: Sequence):
    """m_mu(x_1..x_l); zero when l(mu) > l."""
    mu = Partition(mu)
    l = len(x)
    if mu.length > l:
        return 0
    padded = list(mu) + [0] * (l - mu.length)
    total = 0
    for perm in _distinct_permutations(padded):
        term = 1
        for xi, e in zip(x, perm):
            if e:
                term = term * xi ** e
        total = total + term
    return total


def evaluate(f: SymmetricPolynomial, x: Sequence):
    """sum c_mu m_mu(x); exact when x is exact."""
    total = 0
    for mu, c in f.items:
        v = monomial_value(mu, x)
        if v != 0:
            total = total + c * v
    return total


# power sums <-> monomials ------------------------------------------------

def z_lambda(lam) -> int:
    out = 1
    for part, mult in Partition(lam).multiplicities().items():
        out *= part ** mult * math.factorial(mult)
    return out


def _count_assignments(parts: Tuple[int, ...], targets: Tuple[int, ...]) -> int:
    @lru_cache(maxsize=None)
    def rec(idx: int, remaining: Tuple[int, ...]) -> int:
        if idx == len(parts):
            return 1 if not any(remaining) else 0
        p = parts[idx]
        total = 0
        for r, rem in enumerate(remaining):
            if rem >= p:
                nxt = remaining[:r] + (rem - p,) + remaining[r + 1:]
                total += rec(idx + 1, nxt)
        return total

    return rec(0, targets)


@lru_cache(maxsize=None)
def power_to_monomial(n: int):
    """(order, R) with p_lam = sum_mu R[lam][mu] m_mu over partitions of n."""
    order = enumerate_partitions(n, bound=JACK_BOUND)
    R = {}
    for lam in order:
        row = {}
        for mu in order:
            c = _count_assignments(tuple(lam), tuple(mu))
            if c:
                row[mu] = c
        R[lam] = row
    return tuple(order), R


@lru_cache(maxsize=None)
def monomial_to_power(n: int):
    """m_mu = sum_lam Rinv[mu][lam] p_lam, from triangularity of R."""
    order, R = power_to_monomial(n)
    # R[lam][mu] != 0 only if mu dominates lam, i.e. mu comes no later in order.
    idx = {lam: k for k, lam in enumerate(order)}
    # solve m_mu: p_mu = R[mu][mu] m_mu + sum_{nu before mu} R[mu][nu] m_nu
    Rinv: Dict[Partition, Dict[Partition, Fraction]] = {}
    for mu in order:
        row = {mu: Fraction(1, R[mu][mu])}
        for nu, c in R[mu].items():
            if nu == mu:
                continue
            assert idx[nu] < idx[mu]
            for kap, d in Rinv[nu].items():
                row[kap] = row.get(kap, 0) - Fraction(c, R[mu][mu]) * d
        Rinv[mu] = {k: v for k, v in row.items() if v != 0}
    return Rinv


def to_power_sums(f: SymmetricPolynomial) -> Dict[Partition, Fraction]:
    if f.degree == 0:
        return {EMPTY: f.coefficient(EMPTY)} if f.items else {}
    Rinv = monomial_to_power(f.degree)
    out: Dict[Partition, Fraction] = {}
    for mu, c in f.items:
        for lam, d in Rinv[mu].items():
            out[lam] = out.get(lam, 0) + c * d
    return {k: v for k, v in out.items() if v != 0}


def evaluate_power_sums(coeffs: Mapping, p_values: Sequence):
    """sum c_lam prod p_{lam_i} given p_values[k] = p_k (index 0 unused)."""
    total = 0
    for lam, c in coeffs.items():
        term = c
        for part in lam:
            term = term * p_values[part]
        total = total + term
    return total


# Gram-Schmidt ---------------------------------------------------------------

def _gram_schmidt(n: int, nu: Fraction) -> Dict[Partition, SymmetricPolynomial]:
    order, _ = power_to_monomial(n)
    Rinv = monomial_to_power(n)
    weight = {lam: z_lambda(lam) * nu ** (-lam.length) for lam in order}

    def inner(f_p: Mapping, g_p: Mapping) -> Fraction:
        return sum((c * g_p[k] * weight[k] for k, c in f_p.items() if k in g_p), Fraction(0))

    done: List[Tuple[Dict, Dict, Fraction]] = []  # (m-coords, p-coords, norm)
    result = {}
    for lam in reversed(order):
        m_coords = {lam: Fraction(1)}
        p_coords = dict(Rinv[lam])
        base_p = Rinv[lam]
        for prev_m, prev_p, norm in done:
            c = inner(base_p, prev_p) / norm
            if c == 0:
                continue
            for k, v in prev_m.items():
                m_coords[k] = m_coords.get(k, 0) - c * v
            for k, v in prev_p.items():
                p_coords[k] = p_coords.get(k, 0) - c * v
        m_coords = {k: v for k, v in m_coords.items() if v != 0}
        p_coords = {k: v for k, v in p_coords.items() if v != 0}
        done.append((m_coords, p_coords, inner(p_coords, p_coords)))
        result[lam] = SymmetricPolynomial.from_terms(n, m_coords)
    return result


class JackCache:
    """Memo of Jack expansions keyed by (n, nu), optionally persisted as JSON.

    One file per (n, nu); coefficients stored as "p/q" strings. A file with a
    different version number is ignored and overwritten.
    """

    def __init__(self, directory: Optional[os.PathLike] = None, use_env: bool = True):
        self._mem: Dict[Tuple[int, Fraction], Dict[Partition, SymmetricPolynomial]] = {}
        self._locks: Dict[Tuple[int, Fraction], threading.Lock] = {}
        self._guard = threading.Lock()
        self._directory = Path(directory) if directory is not None else None
        self._use_env = use_env

    @property
    def directory(self) -> Optional[Path]:
        if self._directory is not None:
            return self._directory
        if self._use_env:
            env = os.environ.get(CACHE_ENV)
            if env:
                return Path(env)
        return None

    def _path(self, n: int, nu: Fraction) -> Optional[Path]:
        d = self.directory
        if d is None:
            return None
        return d / f"jack_v{CACHE_VERSION}_n{n}_nu{nu.numerator}_{nu.denominator}.json"

    def _load(self, path: Path, n: int, nu: Fraction):
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, ValueError):
            return None
        if data.get("version") != CACHE_VERSION or data.get("n") != n or data.get("nu") != format_fraction(nu):
            return None
        out = {}
        for key, terms in data["polys"].items():
            lam = Partition(int(p) for p in key.split(",") if p)
            out[lam] = SymmetricPolynomial.from_terms(
                n, {Partition(int(p) for p in k.split(",") if p): Fraction(v) for k, v in terms.items()})
        return out

    def _store(self, path: Path, n: int, nu: Fraction, polys) -> None:
        payload = {
            "version": CACHE_VERSION,
            "n": n,
            "nu": format_fraction(nu),
            "polys": {",".join(map(str, lam)): f.to_json() for lam, f in polys.items()},
        }
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(f".tmp{os.getpid()}_{threading.get_ident()}")
        tmp.write_text(json.dumps(payload, sort_keys=True) + "\n", encoding="utf-8")
        os.replace(tmp, path)

    def get(self, n: int, nu: Fraction) -> Dict[Partition, SymmetricPolynomial]:
        key = (n, nu)
        hit = self._mem.get(key)
        if hit is not None:
            return hit
        with self._guard:
            lock = self._locks.setdefault(key, threading.Lock())
        with lock:
            hit = self._mem.get(key)
            if hit is not None:
                return hit
            path = self._path(n, nu)
            polys = self._load(path, n, nu) if path is not None and path.exists() else None
            if polys is None:
                polys = _gram_schmidt(n, nu)
                if path is not None:
                    try:
                        self._store(path, n, nu, polys)
                    except OSError:
                        pass
            self._mem[key] = polys
            return polys

    def clear_memory(self) -> None:
        with self._guard:
            self._mem.clear()


DEFAULT_CACHE = JackCache()


def jack_P(lam, nu, bound: int = JACK_BOUND, cache: Optional[JackCache] = None) -> SymmetricPolynomial:
    lam = Partition(lam)
    nu = as_rational(nu)
    if nu <= 0:
        raise DomainError("nu must be positive")
    if lam.n > bound:
        raise ResourceError(f"|lambda| = {lam.n} exceeds the Jack bound {bound}")
    if lam.n == 0:
        return SymmetricPolynomial(0, ((EMPTY, Fraction(1)),))
    return (cache or DEFAULT_CACHE).get(lam.n, nu)[lam]


def principal_specialization(lam, nu, l: int) -> Fraction:
    """P_lam(1^l) = prod ((l-i+1) nu + j - 1) / (a + (leg+1) nu)."""
    lam = Partition(lam)
    nu = as_rational(nu)
    conj = lam.conjugate
    out = Fraction(1)
    for i, j in lam.boxes():
        a = lam[i - 1] - j
        leg = conj[j - 1] - i
        out *= ((l - i + 1) * nu + j - 1) / (a + (leg + 1) * nu)
    return out


def jack_C_factor(lam, nu) -> Fraction:
    """|lam|! / H(lam, nu), so that C_lam = factor * P_lam."""
    lam = Partition(lam)
    h, _ = hook_products(lam, as_rational(nu))
    return math.factorial(lam.n) / h


def jack_C(lam, nu, x: Sequence):
    lam = Partition(lam)
    if lam.n == 0:
        return 1
    return jack_C_factor(lam, nu) * evaluate(jack_P(lam, nu), x)


def pieri_residual(mu, nu) -> SymmetricPolynomial:
    """P_mu * P_(1) - sum kappa(mu, lam) P_lam; identically zero."""
    mu = Partition(mu)
    nu = as_rational(nu)
    lhs = jack_P(mu, nu).times_p1()
    rhs = SymmetricPolynomial(mu.n + 1, ())
    for lam in mu.children():
        rhs = rhs + jack_P(lam, nu).scale(kappa(mu, lam, nu))
    return lhs - rhs


def dual_cauchy_check(l: int, theta, u: Sequence, omega, N: int):
    """E_theta(omega;u_1)...E_theta(omega;u_l) minus the dual Cauchy sum up to degree N."""
    from .boundary import E_theta, power_sums

    theta = as_rational(theta)
    lhs = 1
    for ui in u:
        lhs = lhs * E_theta(omega, theta, ui)
    p_vals = [None] + list(power_sums(omega, theta, max(N, 1)))
    inv_u = [1 / Fraction(ui) if isinstance(ui, (int, Fraction)) else 1 / ui for ui in u]
    total = 0
    for deg in range(N + 1):
        for lam in partitions_with_length(deg, l):
            if deg == 0:
                total = total + 1
                continue
            left = evaluate_power_sums(to_power_sums(jack_P(lam.conjugate, theta)), p_vals)
            right = evaluate(jack_P(lam, 1 / theta), inv_u)
            total = total + left * right
    if isinstance(lhs, (int, Fraction)) and isinstance(total, (int, Fraction)):
        return lhs - total
    return complex(lhs) - complex(total) if isinstance(lhs, complex) or isinstance(total, complex) else float(lhs) - float(total)


# branching-rule evaluator ------------------------------------------------

def _b_ratio(a: int, leg: int, nu: Fraction) -> Fraction:
    """b(s) = (a + nu (leg + 1)) / (a + 1 + nu leg)."""
    return (a + nu * (leg + 1)) / (a + 1 + nu * leg)


@lru_cache(maxsize=None)
def branching_coefficient(lam: Partition, mu: Partition, nu: Fraction) -> Fraction:
    """psi_{lam/mu} for a horizontal strip lam/mu.

    Product over boxes in rows meeting the strip but not in columns meeting
    it, of b_mu(s)/b_lam(s).
    """
    lam_c, mu_c = lam.conjugate, mu.conjugate
    strip_cols = set()
    rows = []
    for i in range(1, lam.length + 1):
        if lam.part(i) > mu.part(i):
            rows.append(i)
            strip_cols.update(range(mu.part(i) + 1, lam.part(i) + 1))
    out = Fraction(1)
    for i in rows:
        for j in range(1, mu.part(i) + 1):
            if j in strip_cols:
                continue
            b_mu = _b_ratio(mu.part(i) - j, mu_c.part(j) - i, nu)
            b_lam = _b_ratio(lam.part(i) - j, lam_c.part(j) - i, nu)
            out *= b_mu / b_lam
    return out


@lru_cache(maxsize=None)
def _branching_float(lam: Partition, mu: Partition, nu: Fraction) -> float:
    nf = float(nu)
    mu_c = mu.conjugate
    strip_cols = set()
    rows = []
    for i in range(1, lam.length + 1):
        if lam.part(i) > mu.part(i):
            rows.append(i)
            strip_cols.update(range(mu.part(i) + 1, lam.part(i) + 1))
    out = 1.0
    for i in rows:
        mi, li = mu.part(i), lam.part(i)
        for j in range(1, mi + 1):
            if j in strip_cols:
                continue
            leg = mu_c.part(j) - i
            am, al = mi - j, li - j
            out *= (am + nf * (leg + 1)) * (al + 1 + nf * leg) / ((am + 1 + nf * leg) * (al + nf * (leg + 1)))
    return out


def horizontal_strips(lam: Partition, max_len: int) -> Iterable[Partition]:
    """All mu with lam/mu a horizontal strip and l(mu) <= max_len."""
    if lam.length > max_len + 1:
        return
    ranges = [range(lam.part(i + 1), lam.part(i) + 1) for i in range(1, max_len + 1)]
    for parts in itertools.product(*ranges):
        yield Partition(parts)


class JackEvaluator:
    """Values of P_lam^(nu) for all lam with l(lam) <= l, |lam| <= N, at many points."""

    def __init__(self, nu, l: int):
        self.nu = as_rational(nu)
        self.l = int(l)
        if self.l < 1:
            raise DomainError("need at least one variable")

    def partitions(self, degree: int) -> Tuple[Partition, ...]:
        return partitions_with_length(degree, self.l)

    def values(self, X, max_degree: int) -> Dict[Partition, np.ndarray]:
        """X: array of shape (npts, l). Returns lam -> P_lam(X) of shape (npts,)."""
        X = np.asarray(X)
        if X.ndim == 1:
            X = X[None, :]
        npts, l = X.shape
        if l != self.l:
            raise DomainError(f"expected {self.l} variables, got {l}")
        one = np.ones(npts, dtype=X.dtype)
        prev: Dict[Partition, np.ndarray] = {}
        # one variable: P_(m)(x) = x^m
        x1 = X[:, 0]
        pw = [one]
        for m in range(1, max_degree + 1):
            pw.append(pw[-1] * x1)
        for m in range(max_degree + 1):
            prev[Partition((m,)) if m else EMPTY] = pw[m]
        for k in range(2, l + 1):
            xk = X[:, k - 1]
            pw = [one]
            for m in range(1, max_degree + 1):
                pw.append(pw[-1] * xk)
            cur: Dict[Partition, np.ndarray] = {}
            for deg in range(max_degree + 1):
                for lam in partitions_with_length(deg, k):
                    acc = None
                    for mu in horizontal_strips(lam, k - 1):
                        pm = prev.get(mu)
                        if pm is None:
                            continue
                        if X.dtype == object:
                            coef = branching_coefficient(lam, mu, self.nu)
                        else:
                            coef = _branching_float(lam, mu, self.nu)
                        term = pm * pw[deg - mu.n] * coef
                        acc = term if acc is None else acc + term
                    cur[lam] = acc if acc is not None else 0 * one
            prev = cur
        return prev
