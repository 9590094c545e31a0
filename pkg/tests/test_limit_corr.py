import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from zmeasures.errors import CapabilityError, DomainError
from zmeasures.exact import parse_exact
from zmeasures.limit_corr import (
    AtomicValue, BulkParams, LimitCorrParams, bulk_constant, bulk_convergence_audit, bulk_limit_density,
    gamma_prefactor, laguerre_oracle, lifting_residual, rho, rho_tilde, spherical_phi_theta1,
)
from zmeasures.special import gamma
from zmeasures.zmeasure import ZParams


def rel(a, b):
    return abs(a - b) / abs(b)


def principal(theta=1):
    return ZParams(parse_exact("1+1i"), parse_exact("1-1i"), theta)


def test_params_validation():
    with pytest.raises(DomainError):
        LimitCorrParams(ZParams(1, 2, F(1, 2)), 1)
    with pytest.raises(DomainError):
        LimitCorrParams(ZParams(1, 2, 1), 0)
    lp = LimitCorrParams(ZParams(4, F(7, 2), 2), 1)
    assert (lp.a, lp.b, lp.nu, lp.l) == (-1, F(-3, 4), F(1, 2), 4)
    assert lp.c == lp.a * lp.b * 2


# lifted correlation functions --------------------------------------------------------

@pytest.mark.parametrize("theta", [1, 2, 3])
def test_rho_tilde_single_row(theta):
    zp = F(5, 2) + theta
    lp = LimitCorrParams(ZParams(theta, zp, theta), 1)
    for x in (0.3, 1.0, 2.5, 6.0):
        v = rho_tilde([x], lp).scalar
        assert v == pytest.approx(x ** (float(zp) - 1) * math.exp(-x) / gamma(float(zp)), rel=1e-10)


@pytest.mark.parametrize("theta", [1, 2])
@pytest.mark.parametrize("m", [1, 2])
def test_vanishing_beyond_m(theta, m):
    zp = F(7, 2) + theta
    for k in (m + 1, m + 2):
        lp = LimitCorrParams(ZParams(m * theta, zp, theta), k)
        assert gamma_prefactor(lp) == 0
        pts = [0.1, 0.25, 0.4, 0.55][:k]
        assert rho_tilde([3 * x for x in pts], lp).scalar == 0
        assert rho(pts, lp) == 0


@pytest.mark.parametrize("theta", [1, 2])
def test_two_particle_oracle(theta):
    zp = F(5, 2) + theta
    for k, pts in ((1, [0.5]), (1, [1.0]), (1, [2.0]), (2, [0.5, 1.3]), (2, [2.0, 0.7])):
        lp = LimitCorrParams(ZParams(2 * theta, zp, theta), k)
        assert rel(rho_tilde(pts, lp).scalar, laguerre_oracle(2, zp, theta, k, pts)) <= 1e-4


def test_one_particle_oracle():
    zp = F(5, 2)
    for x in (0.5, 1.0, 2.0):
        assert laguerre_oracle(1, zp, 1, 1, [x]) == pytest.approx(
            x ** 1.5 * math.exp(-x) / gamma(2.5), rel=1e-10)
    assert laguerre_oracle(1, zp, 1, 2, [0.5, 1.0]) == 0
    with pytest.raises(CapabilityError):
        laguerre_oracle(3, F(9, 2), 1, 1, [1.0])


def test_two_particle_oracle_against_scipy():
    # direct double integral for the normalization and one-dimensional marginal
    zp, th = F(5, 2), 1
    e = float(zp) - th - 1
    dens = lambda a, b: (a * b) ** e * math.exp(-a - b) * abs(a - b) ** (2 * th)
    Z = integrate.dblquad(lambda b, a: dens(a, b), 0, np.inf, 0, np.inf, epsrel=1e-11)[0]
    for x in (0.5, 1.0, 2.0):
        f = lambda b: dens(x, b)
        marg = (integrate.quad(f, 0, x, limit=200, epsrel=1e-12)[0]
                + integrate.quad(f, x, np.inf, limit=200, epsrel=1e-12)[0])
        assert laguerre_oracle(2, zp, th, 1, [x]) == pytest.approx(2 * marg / Z, rel=1e-8)


def test_rho_tilde_positive():
    for p in (principal(), ZParams(4, F(11, 2), 2)):
        for k in (1, 2):
            lp = LimitCorrParams(p, k)
            try:
                v = rho_tilde([0.7, 1.9][:k], lp).scalar
            except CapabilityError:
                continue
            assert np.real(v) >= 0


# boundary correlation functions ------------------------------------------------------

def test_rho_outside_simplex():
    lp = LimitCorrParams(ZParams(2, F(7, 2), 1), 1)
    assert rho([1.2], lp) == 0
    lp2 = LimitCorrParams(ZParams(4, F(15, 2), 1), 2)
    assert rho([0.6, 0.5], lp2) == 0


@pytest.mark.parametrize("theta", [1, 2])
def test_rho_atom(theta):
    lp = LimitCorrParams(ZParams(theta, F(7, 2) + theta, theta), 1)
    v = rho([1.0], lp)
    assert isinstance(v, AtomicValue)
    assert v.surface == pytest.approx(1.0, rel=1e-12)
    assert v.density == 0.0


@pytest.mark.parametrize("theta", [1, 2])
def test_rho_two_particle_simplex(theta):
    zp = F(5, 2) + theta
    lp = LimitCorrParams(ZParams(2 * theta, zp, theta), 1)
    for x in (0.15, 0.3, 0.45, 0.7, 0.9):
        v = rho([x], lp)
        assert v > 0
        assert rel(v, laguerre_oracle(2, zp, theta, 1, [x], simplex=True)) <= 1e-3


def test_rho_negative_c_is_capability():
    # z = 1/2, z' = 1/2, theta = 1: a = b = 1/2, c = 1/4 > 0; z = 3/2: a = -1/2, c < 0
    lp = LimitCorrParams(ZParams(F(3, 2), F(1, 2), 1), 1)
    with pytest.raises(CapabilityError):
        rho([0.5], lp)


@pytest.mark.parametrize("x", [0.2, 0.6, 1.5])
def test_lifting_consistency(x):
    lp = LimitCorrParams(ZParams(2, F(7, 2), 1), 1)
    assert lifting_residual(lp, [x])["relative"] <= 1e-6


def test_lifting_atom():
    lp = LimitCorrParams(ZParams(1, F(7, 2), 1), 1)
    r = lifting_residual(lp, [0.7])
    assert r["lifted"] == pytest.approx(0.7 ** 2.5 * math.exp(-0.7) / gamma(3.5), rel=1e-12)
    assert r["relative"] <= 1e-6


def test_lifting_stable_under_more_nodes():
    from zmeasures.policy import DEFAULT_POLICY

    lp = LimitCorrParams(ZParams(2, F(7, 2), 1), 1)
    a = lifting_residual(lp, [0.6])["lifted"]
    b = lifting_residual(lp, [0.6], DEFAULT_POLICY.with_(quad_nodes=48))["lifted"]
    assert a == pytest.approx(b, rel=1e-8)


# bulk limit ---------------------------------------------------------------------------

def test_s_vector_sums():
    p = principal()
    assert BulkParams(p, 1).s_sum == 0
    for k in (1, 2, 3):
        assert BulkParams(p, k).homogeneity_degree == 0
    # for k > 1 the s-vector alone does not sum to zero
    assert BulkParams(p, 2).s_sum == -2


def test_bulk_constant_principal():
    C = bulk_constant(BulkParams(principal(), 1))
    assert C == pytest.approx(math.tanh(math.pi) / math.pi, rel=1e-12)


def test_bulk_constant_symmetric():
    for z, zp, th in (("1+1i", "1-1i", "1"), ("1/3", "5/7", "1"), ("1/2+2i", "1/2-2i", "2")):
        a = bulk_constant(BulkParams(ZParams(parse_exact(z), parse_exact(zp), parse_exact(th)), 1))
        b = bulk_constant(BulkParams(ZParams(parse_exact(zp), parse_exact(z), parse_exact(th)), 1))
        assert complex(a) == pytest.approx(complex(b), rel=1e-13)


@pytest.mark.parametrize("m,theta", [(1, 1), (2, 1), (1, 2), (2, 2)])
def test_bulk_constant_degenerate(m, theta):
    assert bulk_constant(BulkParams(ZParams(m * theta, F(7, 2), theta), 1)) == 0


def test_phi_normalization():
    for s in ([F(1, 2), F(-1, 2)], [0.3, 1.7, -2.0], [1.0, 1.0, -0.5, 0.2]):
        assert spherical_phi_theta1(s, [1.0] * len(s)) == pytest.approx(1.0, rel=1e-8)


def test_phi_schur_point():
    # s = (2,1) + rho at two variables; s_(2,1)(x1, x2) = x1 x2 (x1 + x2), equal to 2 at (1, 1)
    v = spherical_phi_theta1([F(5, 2), F(1, 2)], [2.0, 3.0])
    assert v == pytest.approx(2 * 3 * 5 / 2, rel=1e-12)


@given(st.lists(st.floats(-2, 2), min_size=2, max_size=4, unique=True),
       st.lists(st.floats(0.3, 3.0), min_size=4, max_size=4, unique=True))
def test_phi_homogeneity(s, x):
    x = x[: len(s)]
    if min(abs(a - b) for i, a in enumerate(x) for b in x[i + 1:]) < 0.05:
        return
    if min(abs(a - b) for i, a in enumerate(s) for b in s[i + 1:]) < 0.05:
        return
    base = spherical_phi_theta1(s, x)
    scaled = spherical_phi_theta1(s, [2 * v for v in x])
    assert complex(scaled) == pytest.approx(complex(base) * 2 ** sum(s), rel=1e-6, abs=1e-9)


def test_phi_confluent_continuity():
    s = [0.8, -0.3]
    near = spherical_phi_theta1(s, [1.5, 1.5 + 1e-6])
    at = spherical_phi_theta1(s, [1.5, 1.5])
    assert near == pytest.approx(at, rel=1e-5)


def test_bulk_density_k1_constant():
    bp = BulkParams(principal(), 1)
    C = bulk_constant(bp)
    for y in (-1.0, 0.0, 2.5):
        assert bulk_limit_density([y], bp) == pytest.approx(C, rel=1e-9)


@pytest.mark.parametrize("y", [[0.4, 1.3], [-0.2, 0.9]])
def test_bulk_translation(y):
    bp = BulkParams(principal(), 2)
    base = bulk_limit_density(y, bp)
    assert base > 0
    for d in (0.5, -1.1, 2.7):
        assert bulk_limit_density(np.asarray(y) + d, bp) == pytest.approx(base, rel=1e-9)


def test_bulk_general_theta_capability():
    bp = BulkParams(principal(2), 1)
    with pytest.raises(CapabilityError):
        bulk_limit_density([0.5], bp)


def test_bulk_audit_degenerate():
    # C = 0 here; the rescaled one-point function decays toward it as T grows
    bp = BulkParams(ZParams(2, F(7, 2), 1), 1)
    rows = bulk_convergence_audit(bp, [2.0, 5.0, 8.0], [[0.3]])
    assert [r["limit"] for r in rows] == [0.0] * 3
    assert all(r["status"] == "ok" for r in rows)
    vals = [r["value"] for r in rows]
    assert vals[0] > vals[1] > vals[2] >= 0
    assert vals[2] < 1e-3


def test_bulk_audit_records_capability():
    bp = BulkParams(principal(), 1)
    rows = bulk_convergence_audit(bp, [3.0], [[0.5]])
    assert rows[0]["limit"] == pytest.approx(math.tanh(math.pi) / math.pi)
    # the principal series has no continuation path for rho at these points; the row says so
    assert rows[0]["status"].startswith("capability")
    assert rows[0]["value"] is None
