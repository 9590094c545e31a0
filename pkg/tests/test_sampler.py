import math
from collections import Counter
from fractions import Fraction as F

import numpy as np
import pytest
from scipy import special, stats

from zmeasures.boundary import CorrelationQuery
from zmeasures.errors import DomainError
from zmeasures.exact import parse_exact, to_numeric
from zmeasures.partitions import Partition, enumerate_partitions
from zmeasures.sampler import (
    empirical_corr, moment_convergence_audit, nb_draw, nb_gamma_moments, nb_histogram_gap, nb_moment,
    nb_moment_truncated, rescaled_points, run_samples, sample_partition, stream, transition_probabilities,
)
from zmeasures.zmeasure import MixedParams, ZParams, measure, mixed_measure, up_transitions


@pytest.fixture(scope="module")
def principal():
    return ZParams(parse_exact("1+1i"), parse_exact("1-1i"), 1)


def fnum(x):
    return complex(to_numeric(x)).real


def test_size_one(principal):
    for i in range(20):
        assert sample_partition(1, principal, stream(3, i)) == Partition((1,))
    assert sample_partition(0, principal, stream(3, 0)) == Partition(())


@pytest.mark.parametrize("params", [("1+1i", "1-1i", "1"), ("3/10", "2/5", "1/2"), ("4", "7/2", "2")])
def test_transitions_match_measure_ratios(params):
    # the float chain against M(child) q(lam, child) / M(lam) computed exactly
    p = ZParams(*(parse_exact(v) for v in params))
    for lam in [Partition(()), Partition((1,)), Partition((2, 1)), Partition((3, 1, 1))]:
        if measure(lam, p) == 0:
            continue
        exact = dict(up_transitions(lam, p))
        for child, prob in transition_probabilities(lam, p):
            assert prob == pytest.approx(fnum(exact[child]), rel=1e-12, abs=1e-15)


def test_reproducible(principal):
    a = run_samples(principal, 200, 11, n=6)
    b = run_samples(principal, 200, 11, n=6)
    c = run_samples(principal, 200, 12, n=6)
    assert a.records == b.records
    assert a.records != c.records
    assert a.to_json() == b.to_json()


def test_exactly_one_mode(principal):
    with pytest.raises(DomainError):
        run_samples(principal, 10, 1)
    with pytest.raises(DomainError):
        run_samples(principal, 10, 1, n=3, xi=F(1, 2))


def test_degenerate_rows():
    p = ZParams(4, F(7, 2), 2)
    run = run_samples(p, 300, 5, n=9)
    assert all(lam.length <= 2 for lam in run.records)
    assert all(lam.n == 9 for lam in run.records)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_chi_square(principal, n):
    run = run_samples(principal, 20000, 100 + n, n=n)
    counts = Counter(run.records)
    parts = enumerate_partitions(n)
    expected = np.array([fnum(measure(lam, principal)) for lam in parts]) * run.samples
    observed = np.array([counts.get(lam, 0) for lam in parts])
    assert expected.sum() == pytest.approx(run.samples)
    chi2 = stats.chisquare(observed, expected)
    assert chi2.pvalue > 1e-3


def test_two_boxes_frequency(principal):
    assert fnum(measure(Partition((2,)), principal)) == pytest.approx(5 / 6)
    run = run_samples(principal, 20000, 9, n=2)
    freq = sum(1 for r in run.records if r == Partition((2,))) / run.samples
    sigma = math.sqrt(5 / 6 * 1 / 6 / run.samples)
    assert abs(freq - 5 / 6) < 3 * sigma


def test_nb_mean_and_small_xi():
    t, xi = F(3, 2), F(2, 3)
    draws = np.array([nb_draw(t, xi, stream(21, i)) for i in range(20000)])
    mean = float(t * xi / (1 - xi))
    var = float(t * xi / (1 - xi) ** 2)
    assert abs(draws.mean() - mean) < 3 * math.sqrt(var / len(draws))
    tiny = [nb_draw(2, F(1, 10 ** 6), stream(22, i)) for i in range(200)]
    assert sum(tiny) <= 1
    with pytest.raises(DomainError):
        nb_draw(parse_exact("1+1i"), F(1, 2), stream(1, 1))


def test_mixed_frequency_of_single_box(principal):
    mp = MixedParams(principal, F(1, 2))
    run = run_samples(principal, 20000, 33, xi=F(1, 2))
    p1 = fnum(mixed_measure(Partition((1,)), mp))
    freq = sum(1 for r in run.records if r == Partition((1,))) / run.samples
    assert abs(freq - p1) < 3 * math.sqrt(p1 * (1 - p1) / run.samples)


# empirical correlations ------------------------------------------------------------------

def test_rescaled_points():
    lam = Partition((5, 2, 1))
    assert list(rescaled_points(lam, 1, 1.0)) == [3.0]
    assert list(rescaled_points(lam, 1, 0.5, "frobenius")) == pytest.approx([2.25, 0.25])
    with pytest.raises(DomainError):
        rescaled_points(lam, 1, 1.0, "other")


def test_bound_and_symmetry(principal):
    run = run_samples(principal, 2000, 44, n=40)
    m = 4
    q1 = CorrelationQuery(((1 / m, 0.5), (0.5, 10.0)))
    q2 = CorrelationQuery(((0.5, 10.0), (1 / m, 0.5)))
    for pts in ("lattice", "frobenius"):
        e1 = empirical_corr(run, q1, points=pts)
        e2 = empirical_corr(run, q2, points=pts)
        assert e1.estimate == e2.estimate
        assert e1.estimate <= m ** 2
        single = empirical_corr(run, CorrelationQuery(((1 / m, 10.0),)), points=pts)
        assert single.estimate <= m


def test_scaling_mode_checks(principal):
    run = run_samples(principal, 10, 1, n=4)
    with pytest.raises(DomainError):
        empirical_corr(run, CorrelationQuery(((0.1, 1.0),)), scaling="by_(1-xi)")


def test_lifted_single_row_mass():
    # z = theta: only one-row diagrams; the lifted one-point mass of (1/2, 1] is a Gamma(z') mass
    zp = F(5, 2)
    p = ZParams(1, zp, 1)
    xi = F(99, 100)
    run = run_samples(p, 4000, 8, xi=xi)
    assert all(lam.length <= 1 for lam in run.records)
    est = empirical_corr(run, CorrelationQuery(((0.5, 1.0),)), scaling="by_(1-xi)")
    limit = special.gammainc(float(zp), 1.0) - special.gammainc(float(zp), 0.5)
    assert abs(est.estimate - limit) < 3 * est.stderr + 0.02


# negative binomial moments -----------------------------------------------------------------

def test_nb_moments_closed_forms():
    assert nb_moment(F(5, 2), F(1, 3), 0) == 1
    t, xi = F(5, 2), F(9, 10)
    assert nb_moment(t, xi, 1) == t * xi
    s, rem = nb_moment_truncated(3, F(1, 2), 2, 200)
    assert rem >= 0 and float(rem) < 1e-40
    # direct second moment: Var + mean^2 of n, scaled by (1-xi)^2
    mean, var = 3 * F(1, 2) / F(1, 2), 3 * F(1, 2) / F(1, 4)
    assert nb_moment(3, F(1, 2), 2) == (var + mean ** 2) * F(1, 4)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_nb_moment_gaps_shrink(m):
    t = F(2)
    gaps = [nb_gamma_moments(t, xi, m)[m][2] for xi in (F(9, 10), F(99, 100), F(999, 1000))]
    assert gaps[0] > gaps[1] > gaps[2]


def test_nb_gamma_limits_are_rising():
    rows = nb_gamma_moments(F(3, 2), F(1, 2), 3)
    assert [r[1] for r in rows] == [1, F(3, 2), F(15, 4), F(105, 8)]
    assert rows[0][2] == 0


def test_histogram_gap():
    assert nb_histogram_gap(2, F(999, 1000)) <= 0.02
    assert nb_histogram_gap(2, F(9, 10)) > nb_histogram_gap(2, F(999, 1000))


# moment convergence ------------------------------------------------------------------------

def test_moment_audit_single_box(principal):
    rows = moment_convergence_audit(Partition((1,)), principal, [1, 4, 8])
    for r in rows:
        assert complex(to_numeric(r["average"])) == pytest.approx(1)
        assert r["gap"] == pytest.approx(0, abs=1e-14)


@pytest.mark.parametrize("lam", [(2,), (1, 1)])
def test_moment_audit_trend(principal, lam):
    rows = moment_convergence_audit(Partition(lam), principal, [6, 12, 18])
    gaps = [r["gap"] for r in rows]
    assert gaps[0] > gaps[1] > gaps[2]
