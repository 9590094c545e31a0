import math
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import special

from zmeasures.boundary import (
    CorrelationQuery, E_taylor_coefficients, E_theta, SurfaceAtom, elementary_from_power_sums,
    lemma53_check, lift_density_transform, newton_residual, omega_theta, power_sums, prop51_residuals,
)
from zmeasures.errors import DomainError
from zmeasures.lattice import e_star
from zmeasures.omega import OmegaPoint, dist
from zmeasures.partitions import Partition, embed_iota, partitions_up_to


@st.composite
def rational_omega(draw, gamma=True):
    alpha = sorted(draw(st.lists(st.fractions(0, 1, max_denominator=9), max_size=3)), reverse=True)
    beta = sorted(draw(st.lists(st.fractions(0, 1, max_denominator=9), max_size=3)), reverse=True)
    g = draw(st.fractions(0, 1, max_denominator=9)) if gamma else F(0)
    return OmegaPoint(tuple(alpha), tuple(beta), sum(alpha, F(0)) + sum(beta, F(0)) + g)


def random_omega(rng, max_delta=5.0):
    delta = rng.uniform(0, max_delta)
    w = [rng.random() for _ in range(rng.randint(0, 6))]
    cut = rng.random()
    total = sum(w) + cut + 1e-9
    parts = [delta * x / total for x in w]
    na = rng.randint(0, len(parts))
    alpha = sorted(parts[:na], reverse=True)
    beta = sorted(parts[na:], reverse=True)
    return OmegaPoint(tuple(alpha), tuple(beta), delta)


# omega points -------------------------------------------------------------------

def test_omega_validation():
    with pytest.raises(DomainError):
        OmegaPoint((F(1, 2), F(1, 3)), (F(1, 2),), F(1))
    with pytest.raises(DomainError):
        OmegaPoint((F(1, 3), F(1, 2)), (), F(1))
    assert OmegaPoint((F(1, 2),), (F(1, 4),), F(1)).gamma == F(1, 4)


@given(rational_omega())
def test_ordering_bound(w):
    # alpha_{m+1} <= alpha_1 + ... over m terms gives alpha_{m+1} < delta / m
    if w.delta > 0:
        for m in range(1, len(w.alpha)):
            assert w.alpha[m] <= w.delta / m


# E_theta ----------------------------------------------------------------------------

@pytest.mark.parametrize("theta", [F(1, 2), F(1), F(2), F(3)])
def test_E_single_alpha(theta):
    w = OmegaPoint((F(1),), (), F(1))
    for u in (F(-1, 3), F(-5, 2), -0.7):
        assert E_theta(w, theta, u) == pytest.approx(float(1 + 1 / F(u)), rel=1e-14)


def test_E_gamma_only():
    w = OmegaPoint((), (), F(1))
    for u in (-0.5, -3.0, complex(1, 2)):
        assert E_theta(w, 2, u) == pytest.approx(np.exp(1 / u), rel=1e-14)


@given(rational_omega(gamma=False), st.sampled_from([F(1, 2), F(1, 3), F(1)]),
       st.fractions(-10, -F(1, 2), max_denominator=7))
def test_E_homogeneity_exact(w, theta, u):
    assert E_theta(w.scaled(3), theta, 3 * u) == E_theta(w, theta, u)


@given(rational_omega(), st.sampled_from([F(1, 2), F(1, 3), F(1)]),
       st.fractions(-10, -F(1, 2), max_denominator=7))
def test_E_homogeneity_with_gamma(w, theta, u):
    assert float(E_theta(w.scaled(3), theta, 3 * u)) == pytest.approx(float(E_theta(w, theta, u)), rel=1e-13)


@given(rational_omega(), st.sampled_from([F(2), F(3)]), st.floats(-10, -0.5))
def test_E_homogeneity_float(w, theta, u):
    assert E_theta(w.scaled(3), theta, 3 * u) == pytest.approx(E_theta(w, theta, u), rel=1e-12)


def test_E_domain():
    w = OmegaPoint((), (F(1, 2),), F(1))
    with pytest.raises(DomainError):
        E_theta(w, 2, 0)
    with pytest.raises(DomainError):
        E_theta(w, 2, 0.5)


# power sums and Newton ----------------------------------------------------------------

def test_power_sums_examples():
    assert power_sums(OmegaPoint((F(1),), (), F(1)), 2, 5) == [1] * 5
    b = F(1, 3)
    for theta in (1, 2, F(1, 2)):
        assert power_sums(OmegaPoint((), (b,), b), theta, 2)[1] == -theta * b * b


def test_gamma_only_coefficients():
    g = F(3, 2)
    w = OmegaPoint((), (), g)
    e = elementary_from_power_sums(power_sums(w, 1, 6), 6)
    assert e == [g ** k / math.factorial(k) for k in range(7)]


@given(rational_omega(), st.sampled_from([F(1, 2), F(1), F(2), F(3)]))
def test_newton_exact(w, theta):
    assert newton_residual(w, theta, 6) == 0


def test_newton_iota_theta2():
    assert newton_residual(embed_iota(Partition((2, 1))), 2, 4) <= 1e-12


def test_taylor_matches_function():
    w = OmegaPoint((F(1, 2),), (F(1, 4),), F(1))
    c = E_taylor_coefficients(w, 2, 30)
    u = -8.0
    series = sum(float(ck) * u ** -k for k, ck in enumerate(c))
    assert series == pytest.approx(E_theta(w, 2, u), rel=1e-13)


# structural identities ----------------------------------------------------------------

def test_prop51_examples():
    assert prop51_residuals(Partition(()), 2, F(-3)) == (0, 0, 0)
    assert e_star(Partition((1,)), 2, F(-3)) * e_star(Partition((1,)), 2, F(-4)) == F(1, 2)
    assert e_star(Partition((1, 1)), 1, F(-3)) == F(1, 2)
    assert prop51_residuals(Partition((1,)), 2, F(-3))[0] == 0
    assert prop51_residuals(Partition((2, 1)), 1, F(-7, 2))[2] == 0


@pytest.mark.parametrize("theta", [1, 2, 3])
def test_prop51_exhaustive(theta):
    us = [F(-1, 3), F(-5, 2), F(-7), F(-13, 4)]
    for lam in partitions_up_to(6):
        for u in us:
            assert prop51_residuals(lam, theta, u) == (0, 0, 0), (lam, u)


def test_omega_theta():
    w = OmegaPoint((F(1, 2),), (F(1, 4),), F(1))
    assert omega_theta(w, 2) == OmegaPoint((F(1, 2), F(1, 2)), (F(1, 2),), F(2))


def test_lemma53_audit():
    rng = random.Random(53)
    for _ in range(1000):
        w = random_omega(rng)
        assert lemma53_check(w, -rng.uniform(0.5, 10))


def test_lemma53_gamma_only_and_embeddings():
    w = OmegaPoint((), (), F(2))
    assert lemma53_check(w, F(-1))
    for lam in partitions_up_to(6):
        if lam.n:
            om = embed_iota(lam).scaled(F(1, lam.n))
            for u in (F(-1, 2), F(-3)):
                assert lemma53_check(om, u)
    with pytest.raises(DomainError):
        lemma53_check(w, F(-1), theta=2)


def test_continuity_audit():
    rng = random.Random(7)
    for _ in range(300):
        w = random_omega(rng, 3.0)
        eps = 1e-7
        w2 = OmegaPoint(tuple(a + eps for a in w.alpha), tuple(w.beta), w.delta + eps * (len(w.alpha) + 1))
        assert dist(w, w2) <= 1e-6
        u = -rng.uniform(0.5, 10)
        assert abs(E_theta(w, 1, u) - E_theta(w2, 1, u)) <= 1e-4


def test_dist():
    a = OmegaPoint((F(1, 2),), (), F(1))
    b = OmegaPoint((), (F(1, 2),), F(1))
    assert dist(a, b) == pytest.approx(0.5)


# lifting ---------------------------------------------------------------------------------

@pytest.mark.parametrize("t", [0.5, 1.0, 2.5])
def test_lift_point_mass(t):
    atom = SurfaceAtom(lambda y: 1.0)
    for x in (0.3, 1.0, 2.2):
        assert lift_density_transform(atom, t, [x]) == pytest.approx(
            x ** (t - 1) * math.exp(-x) / math.gamma(t), rel=1e-14)


def test_lift_uniform():
    uniform = lambda y: float(np.all((y > 0) & (y < 1)))
    for x in (0.2, 1.0, 3.0):
        # t = 1 gives the exponential integral, t = 2 gives e^{-x}
        assert lift_density_transform(uniform, 1, [x]) == pytest.approx(special.exp1(x), rel=1e-9)
        assert lift_density_transform(uniform, 2, [x]) == pytest.approx(math.exp(-x), rel=1e-9)


def test_lift_edge_exponent_rule():
    edge = lambda y: (1 - y[0]) ** 1.5 if y[0] < 1 else 0.0
    x = [0.7]
    a = lift_density_transform(edge, 1.5, x)
    b = lift_density_transform(edge, 1.5, x, edge_exponent=1.5)
    assert b == pytest.approx(a, rel=1e-8)


def test_lift_linearity():
    f = lambda y: y[0] * (1 - y[0]) if y[0] < 1 else 0.0
    g = lambda y: (1 - y[0]) ** 2 if y[0] < 1 else 0.0
    h = lambda y: 2 * f(y) - 3 * g(y)
    x = [0.4]
    lhs = lift_density_transform(h, 1.7, x)
    rhs = 2 * lift_density_transform(f, 1.7, x) - 3 * lift_density_transform(g, 1.7, x)
    assert lhs == pytest.approx(rhs, rel=1e-9)


def test_lift_rejects_nonpositive():
    with pytest.raises(DomainError):
        lift_density_transform(lambda y: 1.0, 1, [0.0])


def test_correlation_query():
    q = CorrelationQuery(((0.1, 0.2), (0.3, 0.5)))
    assert q.k == 2
    with pytest.raises(DomainError):
        CorrelationQuery(((0.1, 0.3), (0.2, 0.5)))
    with pytest.raises(DomainError):
        CorrelationQuery(((0.0, 0.3),))
