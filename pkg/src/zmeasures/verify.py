"""Verification suites: module-level identity checks with residual budgets.

Every case produces a residual and a budget. A case fails when the residual
exceeds the budget or when it raises an unexpected error; a capability error
turns into a capability-skip carrying the unmet conditions.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from .errors import CapabilityError
from .exact import GaussianRational, parse_exact
from .policy import DEFAULT_POLICY, NumericPolicy

SUITES = (
    "normalization", "duality", "coherency", "pieri", "dual_cauchy", "binomial", "selberg", "euler",
    "f20_consistency", "lattice_identity", "prop51", "lemma53", "laguerre", "lifting", "bulk",
)

PASS, FAIL, SKIP = "pass", "fail", "capability-skip"


def _magnitude(r) -> float:
    if isinstance(r, GaussianRational):
        return math.hypot(float(r.re), float(r.im))
    return abs(complex(r)) if isinstance(r, complex) else abs(float(r))


@dataclass
class CaseResult:
    id: str
    status: str
    residual: Optional[float]
    budget: float
    detail: str = ""

    def to_json(self) -> dict:
        out = {"id": self.id, "status": self.status, "residual": self.residual, "budget": self.budget}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class SuiteReport:
    suite: str
    cases: List[CaseResult] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def failed(self) -> bool:
        return any(c.status == FAIL for c in self.cases)

    def to_json(self) -> dict:
        return {"suite": self.suite, "wall_time": self.wall_time, "cases": [c.to_json() for c in self.cases]}


@dataclass
class VerificationReport:
    suites: List[SuiteReport] = field(default_factory=list)

    @property
    def cases(self) -> List[Tuple[str, CaseResult]]:
        return [(s.suite, c) for s in self.suites for c in s.cases]

    @property
    def failed(self) -> bool:
        return any(s.failed for s in self.suites)

    @property
    def capability_only(self) -> bool:
        """True when cases exist but none could be executed."""
        cs = self.cases
        return bool(cs) and all(c.status == SKIP for _, c in cs)

    @property
    def exit_code(self) -> int:
        if self.failed:
            return 1
        if self.capability_only:
            return 3
        return 0

    def to_json(self) -> dict:
        counts = {PASS: 0, FAIL: 0, SKIP: 0}
        for _, c in self.cases:
            counts[c.status] += 1
        return {"suites": [s.to_json() for s in self.suites], "counts": counts}

    def rows(self) -> List[dict]:
        """Flat rows for CSV output."""
        return [{"suite": s, **c.to_json()} for s, c in self.cases]


CSV_COLUMNS = ("suite", "id", "status", "residual", "budget", "detail")


class _Collector:
    def __init__(self):
        self.cases: List[CaseResult] = []

    def check(self, case_id: str, budget: float, fn: Callable[[], object]) -> None:
        try:
            r = fn()
        except CapabilityError as exc:
            detail = "; ".join(exc.conditions) if getattr(exc, "conditions", None) else str(exc)
            self.cases.append(CaseResult(case_id, SKIP, None, budget, detail))
            return
        except Exception as exc:  # a crash is recorded as a failure, never propagated
            self.cases.append(CaseResult(case_id, FAIL, None, budget, f"{type(exc).__name__}: {exc}"))
            return
        res = _magnitude(r)
        ok = res <= budget
        self.cases.append(CaseResult(case_id, PASS if ok else FAIL, res, budget))


# shipped parameter sets ---------------------------------------------------

def _p(z, zp, theta):
    from .zmeasure import ZParams

    return ZParams(parse_exact(z), parse_exact(zp), parse_exact(theta))


def measure_sets():
    return {
        "principal": _p("1+1i", "1-1i", "1"),
        "complementary": _p("3/10", "2/5", "1/2"),
        "degenerate": _p("4", "7/2", "2"),
    }


def _rel(a, b) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


# suites ---------------------------------------------------------------------

def _normalization(c: _Collector, policy, quick):
    from .zmeasure import total_mass

    for name, p in measure_sets().items():
        for n in range(0, 9):
            c.check(f"{name}/n={n}", 0.0, lambda p=p, n=n: total_mass(n, p) - 1)


def _duality(c: _Collector, policy, quick):
    from .partitions import gen_pochhammer, hook_products, partitions_up_to
    from .zmeasure import duality_check

    for name, p in measure_sets().items():
        def run(p=p):
            bad = sum(1 for lam in partitions_up_to(7) if not duality_check(lam, p))
            return bad
        c.check(f"{name}/measure n<=7", 0.0, run)
    z, zp = parse_exact("1+1i"), parse_exact("3/10")
    for th in (Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3)):
        def termwise(th=th):
            worst = 0.0
            for lam in partitions_up_to(6):
                n = lam.n
                lhs = gen_pochhammer(z, lam.conjugate, th) * gen_pochhammer(zp, lam.conjugate, th)
                rhs = th ** (2 * n) * gen_pochhammer(-z / th, lam, 1 / th) * gen_pochhammer(-zp / th, lam, 1 / th)
                worst = max(worst, _magnitude(lhs - rhs))
                h1 = hook_products(lam.conjugate, th)[1]
                h2 = hook_products(lam, 1 / th)[0]
                worst = max(worst, _magnitude(h1 - th ** n * h2))
            return worst
        c.check(f"termwise/theta={th}", 0.0, termwise)


def _coherency(c: _Collector, policy, quick):
    from .partitions import partitions_up_to
    from .zmeasure import coherency_residual

    for name, p in measure_sets().items():
        def run(p=p):
            return max((_magnitude(coherency_residual(mu, p)) for mu in partitions_up_to(6)), default=0.0)
        c.check(f"{name}/n<=7", 0.0, run)


def _pieri(c: _Collector, policy, quick):
    from .jack import pieri_residual
    from .partitions import partitions_up_to

    for nu in (Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3)):
        def run(nu=nu):
            return sum(0 if pieri_residual(mu, nu).is_zero() else 1 for mu in partitions_up_to(6))
        c.check(f"nu={nu}", 0.0, run)


def _dual_cauchy(c: _Collector, policy, quick):
    from .jack import dual_cauchy_check
    from .omega import OmegaPoint
    from .partitions import embed_iota_n

    alpha_only = OmegaPoint((Fraction(1, 2), Fraction(1, 4)), (), Fraction(3, 4))
    for th in (Fraction(1), Fraction(1, 2), Fraction(2)):
        c.check(f"terminating/theta={th}", 0.0,
                lambda th=th: dual_cauchy_check(2, th, [Fraction(-3), Fraction(-5, 2)], alpha_only, 6))
    mixed = OmegaPoint((Fraction(1, 3),), (Fraction(1, 5),), Fraction(8, 15))
    c.check("alpha-beta/theta=1", 1e-8, lambda: dual_cauchy_check(2, 1, [Fraction(-4), Fraction(-5)], mixed, 10))
    c.check("iota(2,2)/theta=1", 1e-8,
            lambda: dual_cauchy_check(2, 1, [Fraction(-6), Fraction(-7)], embed_iota_n((2, 2)), 10))
    fl = OmegaPoint((0.3,), (0.2,), 0.6)
    c.check("float/theta=2", 1e-8, lambda: dual_cauchy_check(2, 2, [-4.0, -5.0], fl, 10))


def _binomial(c: _Collector, policy, quick):
    from .hypergeom import f10

    grids = ([0.3], [0.3, -0.2], [0.3, -0.25, 0.1])
    for nu in (Fraction(1, 2), Fraction(1), Fraction(2)):
        for x in grids:
            c.check(f"nu={nu}/l={len(x)}", 1e-8, lambda nu=nu, x=x: f10(2.5, nu, x, policy, degree=30).residual)
    c.check("product/closed form", 1e-14,
            lambda: _rel(f10(2, 1, [Fraction(1, 10), Fraction(1, 5)], policy).scalar, 625 / 324))


def _selberg(c: _Collector, policy, quick):
    from .hypergeom import selberg_simplex

    for lam in ((), (1,), (2,), (1, 1)):
        for nu in (Fraction(1, 2), Fraction(1), Fraction(2)):
            for A in (Fraction(1), Fraction(3, 2)):
                def run(lam=lam, nu=nu, A=A):
                    q, cl = selberg_simplex(lam, A, nu, 2, policy)
                    return _rel(q, float(cl))
                c.check(f"lam={list(lam)}/nu={nu}/A={A}", 1e-6, run)
    c.check("hand value 1/3", 1e-6, lambda: abs(selberg_simplex((), 1, 1, 2, policy)[0] - 1 / 3) * 3)


def _euler(c: _Collector, policy, quick):
    from .hypergeom import HyperParams, euler_f21, f21hat_reg, pochhammer_ratio_integral
    from .special import gamma

    cases = [
        ("l=1/(1,1;3)/x=1/4", HyperParams(1, 1, 3, 1, 1), [0.25]),
        ("l=2/nu=1/2/x=(1/4,-3/10)", HyperParams(0.7, 1.3, 4.1, Fraction(1, 2), 2), [0.25, -0.3]),
        ("l=2/nu=1/terminating", HyperParams(-1, 2, 5, 1, 2), [0.3, -0.2]),
    ]
    for cid, hp, x in cases:
        def run(hp=hp, x=x):
            e = euler_f21(hp, x, policy).scalar
            s = gamma(hp.c) * f21hat_reg(hp, x, policy).scalar
            return _rel(e, s)
        c.check(cid, 1e-6, run)
    c.check("ratio/l=2/lam=(1)", 1e-6,
            lambda: _rel(pochhammer_ratio_integral((1,), 3, 8, 1, 2, policy).scalar, 3 / math.factorial(8)))


def _f20_consistency(c: _Collector, policy, quick):
    from .hypergeom import f20, f20_laguerre_form, remark26_residual

    for b in (Fraction(3), Fraction(7, 3)):
        for x in (-0.5, -2.0):
            c.check(f"classical/b={b}/x={x}", 1e-10,
                    lambda b=b, x=x: _rel(f20(-1, b, 1, [x], policy=policy).scalar, 1 - float(b) * x))
    def c_indep():
        v2 = f20(-2, 3, 1, [-0.5], c_choice=2, policy=policy, path="integral").scalar
        v5 = f20(-2, 3, 1, [-0.5], c_choice=5, policy=policy, path="integral").scalar
        return abs(v2 - v5) / abs(v5)
    c.check("c-independence/c=2,5", 1e-8, c_indep)
    c.check("integral vs terminating/l=1", 1e-8,
            lambda: _rel(f20(-2, 3, 1, [-0.5], c_choice=5, policy=policy, path="integral").scalar,
                         f20(-2, 3, 1, [-0.5], policy=policy).scalar))
    for nu in (Fraction(1), Fraction(1, 2)):
        c.check(f"laguerre form/l=2/nu={nu}", 1e-6,
                lambda nu=nu: _rel(f20_laguerre_form(-1, 3, nu, [-0.5, -0.2], policy).scalar,
                                   f20(-1, 3, nu, [-0.5, -0.2], policy=policy).scalar))
    c.check("remark/m=1/l=1", 1e-12, lambda: remark26_residual(1, 2.3, 1, [-1.5], policy))
    c.check("remark/m=1/l=2/nu=1/2", 1e-8, lambda: remark26_residual(1, 2.3, Fraction(1, 2), [-1.5, -0.7], policy))
    # a non-terminating 2F0 outside the integral domain: reported, not evaluated
    c.check("non-terminating/outside domain", 1e-8, lambda: f20(0.5, 0.3, 1, [-0.5, -0.2], policy=policy).scalar)


def _lattice_identity(c: _Collector, policy, quick):
    from .lattice import prefactor_relation_residual, theorem34_check
    from .zmeasure import MixedParams

    xi = Fraction(1, 2)
    cases = [([0], 1), ([1, 3], 1), ([0], 2)]
    if quick:
        cases = [([0], 2)]
    for A, th in cases:
        p = _p("1+1i", "1-1i", str(th))
        mp = MixedParams(p, xi)
        label = f"theta={th}/A={A}"
        c.check(f"{label}/identity", 1e-4, lambda A=A, mp=mp: theorem34_check(A, mp).relative)
        c.check(f"{label}/prefactor relation", 1e-10, lambda A=A, p=p: prefactor_relation_residual(A, p, xi))


def _prop51(c: _Collector, policy, quick):
    from .boundary import newton_residual, prop51_residuals
    from .omega import OmegaPoint
    from .partitions import partitions_up_to

    us = (Fraction(-1, 3), Fraction(-5, 2), Fraction(-7))
    for th in (1, 2, 3):
        def run(th=th):
            worst = 0.0
            for lam in partitions_up_to(6):
                for u in us:
                    worst = max([worst] + [_magnitude(r) for r in prop51_residuals(lam, th, u)])
            return worst
        c.check(f"theta={th}", 0.0, run)
    om = OmegaPoint((Fraction(1, 2), Fraction(1, 5)), (Fraction(1, 7),), Fraction(1))
    for th in (Fraction(1), Fraction(1, 2), Fraction(3)):
        c.check(f"newton/theta={th}", 0.0, lambda th=th: newton_residual(om, th, 8))


def _lemma53(c: _Collector, policy, quick):
    import numpy as np

    from .boundary import lemma53_check
    from .omega import OmegaPoint

    rng = np.random.default_rng(53)
    for trial in range(20):
        a = np.sort(rng.random(3))[::-1] * rng.random()
        b = np.sort(rng.random(2))[::-1] * rng.random()
        delta = float(a.sum() + b.sum() + rng.random())
        om = OmegaPoint(tuple(a.tolist()), tuple(b.tolist()), delta)
        for u in (-0.3, -1.0, -4.0):
            c.check(f"trial={trial}/u={u}", 0.0, lambda om=om, u=u: 0.0 if lemma53_check(om, u) else 1.0)


def _laguerre(c: _Collector, policy, quick):
    from .limit_corr import LimitCorrParams, laguerre_oracle, rho_tilde
    from .special import gamma
    from .zmeasure import ZParams

    for th in (1, 2):
        zp = Fraction(5, 2) + th
        lp = LimitCorrParams(ZParams(th, zp, th), 1)
        for x in (0.3, 0.8, 1.5, 2.5, 4.0):
            c.check(f"z=theta/theta={th}/x={x}", 1e-8,
                    lambda lp=lp, x=x, zp=zp: _rel(rho_tilde([x], lp, policy).scalar,
                                                   x ** (float(zp) - 1) * math.exp(-x) / gamma(float(zp))))
        for k, pts in ((1, [0.5]), (1, [1.5]), (2, [0.5, 1.3])):
            lp2 = LimitCorrParams(ZParams(2 * th, zp, th), k)
            c.check(f"z=2theta/theta={th}/k={k}/x={pts}", 1e-4,
                    lambda lp2=lp2, pts=pts, zp=zp, th=th, k=k: _rel(rho_tilde(pts, lp2, policy).scalar,
                                                                     laguerre_oracle(2, zp, th, k, pts, policy)))
        for m in (1, 2):
            lp3 = LimitCorrParams(ZParams(m * th, zp, th), m + 1)
            pts = [0.4, 1.1, 2.3][: m + 1]
            c.check(f"vanishing/theta={th}/m={m}", 0.0,
                    lambda lp3=lp3, pts=pts: rho_tilde(pts, lp3, policy).scalar)


def _lifting(c: _Collector, policy, quick):
    from .limit_corr import LimitCorrParams, lifting_residual
    from .zmeasure import ZParams

    lp = LimitCorrParams(ZParams(2, Fraction(7, 2), 1), 1)
    for x in (0.2, 0.6, 1.5):
        c.check(f"z=2/z'=7/2/x={x}", 1e-6, lambda x=x: lifting_residual(lp, [x], policy)["relative"])
    # c = 0: boundary measure with an atom on the face
    lp0 = LimitCorrParams(ZParams(1, Fraction(7, 2), 1), 1)
    c.check("atom/z=1/x=0.7", 1e-6, lambda: lifting_residual(lp0, [0.7], policy)["relative"])


BULK_MC = {"n": 10_000, "samples": 400, "seed": 2024, "window": (2.0, 5.0)}


def _bulk(c: _Collector, policy, quick):
    import numpy as np

    from .limit_corr import BulkParams, bulk_constant, bulk_limit_density, bulk_monte_carlo

    p = _p("1+1i", "1-1i", "1")
    c.check("s sum/k=1", 0.0, lambda: BulkParams(p, 1).s_sum)
    for k in (1, 2, 3):
        c.check(f"homogeneity degree/k={k}", 0.0, lambda k=k: BulkParams(p, k).homogeneity_degree)
    c.check("constant/theta=1", 1e-12, lambda: _rel(bulk_constant(BulkParams(p, 1)), math.tanh(math.pi) / math.pi))
    for k, y in ((1, [0.7]), (2, [0.4, 1.3]), (2, [-0.2, 0.9])):
        bp = BulkParams(p, k)
        def shift(bp=bp, y=y):
            base = bulk_limit_density(y, bp)
            return max(_rel(bulk_limit_density(np.asarray(y) + d, bp), base) for d in (0.5, -1.1, 2.7))
        c.check(f"translation/k={k}/y={y}", 1e-10, shift)
    for m in (1, 2):
        for th in (1, 2):
            c.check(f"degenerate C/theta={th}/z={m}theta", 0.0,
                    lambda m=m, th=th: bulk_constant(BulkParams(_p(str(m * th), "7/2", str(th)), 1)))
    if not quick:
        def mc():
            r = bulk_monte_carlo(p, BULK_MC["n"], BULK_MC["samples"], BULK_MC["seed"], BULK_MC["window"])
            C = float(bulk_constant(BulkParams(p, 1)))
            return abs(r["density"] - C) / C
        c.check("monte carlo/n=10000/seed=2024", 0.10, mc)


_RUNNERS: Dict[str, Callable] = {
    "normalization": _normalization, "duality": _duality, "coherency": _coherency, "pieri": _pieri,
    "dual_cauchy": _dual_cauchy, "binomial": _binomial, "selberg": _selberg, "euler": _euler,
    "f20_consistency": _f20_consistency, "lattice_identity": _lattice_identity, "prop51": _prop51,
    "lemma53": _lemma53, "laguerre": _laguerre, "lifting": _lifting, "bulk": _bulk,
}


def run_suite(name: str, policy: NumericPolicy = DEFAULT_POLICY, quick: bool = False) -> SuiteReport:
    if name not in _RUNNERS:
        raise KeyError(f"unknown suite {name!r}")
    col = _Collector()
    t0 = time.perf_counter()
    _RUNNERS[name](col, policy, quick)
    return SuiteReport(name, col.cases, time.perf_counter() - t0)


def run_verify(suites: Optional[Iterable[str]] = None, policy: NumericPolicy = DEFAULT_POLICY,
               quick: bool = False) -> VerificationReport:
    """Run the named suites (all when None) and merge them in canonical order.

    ``quick`` drops the two most expensive cases: the theta = 1 lattice
    identities and the bulk Monte Carlo run.
    """
    chosen = SUITES if suites is None else tuple(suites)
    unknown = [s for s in chosen if s not in _RUNNERS]
    if unknown:
        raise KeyError(f"unknown suites: {', '.join(unknown)}")
    ordered = [s for s in SUITES if s in set(chosen)]
    return VerificationReport([run_suite(s, policy, quick) for s in ordered])
