from fractions import Fraction as F

import pytest
from hypothesis import assume, given, strategies as st

from zmeasures.errors import DomainError, PoleError
from zmeasures.exact import parse_exact, to_numeric
from zmeasures.lattice import (
    LatticeConfig, corr_lhs, corr_rhs, c_prime, e_sharp, e_star, from_lattice, in_image,
    prefactor_relation_residual, remove_points, theorem34_check, to_lattice, u_points,
)
from zmeasures.partitions import Partition, partitions_up_to
from zmeasures.special import gamma
from zmeasures.zmeasure import MixedParams, ZParams, mixed_measure, nb_tail

from conftest import partitions_st


def config_set(lam, theta, depth=40):
    """First `depth` lattice points written out directly."""
    lam = list(lam) + [0] * depth
    return [lam[i - 1] - i * theta for i in range(1, depth + 1)]


# configurations ---------------------------------------------------------------

def test_to_lattice_examples():
    assert to_lattice(Partition(()), 2).points(4) == [-2, -4, -6, -8]
    assert to_lattice(Partition((2, 1)), 1).points(4) == [1, -1, -3, -4]
    assert to_lattice(Partition((3, 1)), 2).points(4) == [1, -3, -6, -8]


def test_from_lattice_examples():
    assert from_lattice(LatticeConfig((0,), 1)) == Partition((1,))
    with pytest.raises(DomainError, match=r"\(iii\)"):
        from_lattice(LatticeConfig((0,), 1, stable=1))
    with pytest.raises(DomainError, match=r"\(i\)"):
        from_lattice(LatticeConfig((0, 0), 1))


@pytest.mark.parametrize("theta", [1, 2, 3])
def test_round_trip(theta):
    for lam in partitions_up_to(8):
        cfg = to_lattice(lam, theta)
        assert cfg.violations() == []
        assert from_lattice(cfg) == lam
        assert cfg.points(lam.length + 5) == config_set(lam, theta, lam.length + 5)


def test_non_integer_theta_rejected():
    with pytest.raises(DomainError):
        to_lattice(Partition((1,)), F(1, 2))


# point removal -------------------------------------------------------------------

def direct_remove(lam, A, theta, depth=40):
    pts = [p for p in config_set(lam, theta, depth) if p not in A]
    k = len(A)
    parts = [p + k * theta + i * theta for i, p in enumerate(pts, start=1)]
    return Partition([x for x in parts if x > 0])


def test_remove_points_examples():
    assert remove_points(Partition((2, 1)), [1], 1) == Partition((1,))
    assert remove_points(Partition((3, 1)), [1], 2) == Partition((1,))
    assert remove_points(Partition((4, 2, 1)), [], 2) == Partition((4, 2, 1))
    with pytest.raises(DomainError):
        remove_points(Partition((2, 1)), [0], 1)


@st.composite
def admissible(draw):
    theta = draw(st.sampled_from([1, 2, 3]))
    lam = draw(partitions_st(max_n=10, max_parts=6))
    pts = config_set(lam, theta, lam.length + 4)
    A = draw(st.lists(st.sampled_from(pts), min_size=1, max_size=3, unique=True))
    A = sorted(A, reverse=True)
    assume(all(A[i] - A[i + 1] >= theta for i in range(len(A) - 1)))
    return lam, A, theta


@given(admissible())
def test_remove_points_size_and_direct(case):
    lam, A, theta = case
    mu = remove_points(lam, A, theta)
    k = len(A)
    assert mu.n == lam.n - sum(A) - k * (k + 1) * theta // 2
    assert mu == direct_remove(lam, A, theta)
    assert in_image(mu, A, theta)


@given(admissible(), st.randoms(use_true_random=False))
def test_remove_points_composition(case, rnd):
    lam, A, theta = case
    order = list(A)
    rnd.shuffle(order)
    cur = lam
    for j, a in enumerate(order):
        cur = remove_points(cur, [a + j * theta], theta)
    assert cur == remove_points(lam, A, theta)


def test_in_image_examples():
    assert in_image(Partition((1,)), [1], 1)
    # L((3)) = {2, -2, ...} hits the window [2, 2]
    assert not in_image(Partition((3,)), [1], 1)


# observables -----------------------------------------------------------------------

def test_e_star_examples():
    u = F(-7, 3)
    assert e_star(Partition(()), 2, u) == 1
    for theta in (1, 2, 3):
        assert e_star(Partition((1,)), theta, u) == (u + 1) / u
    assert e_star(Partition((2, 1)), 1, F(-3)) == F(1, 4)
    with pytest.raises(PoleError):
        e_star(Partition((1, 1)), 1, F(1))


def test_e_sharp_examples():
    u = F(-5, 2)
    assert e_sharp(Partition(()), 1, u) == pytest.approx(1 / gamma(float(-u)), rel=1e-14)
    assert e_sharp(Partition((1,)), 1, F(-1)) == 0
    assert e_sharp(Partition((1,)), 1, F(2)) == 0


@pytest.mark.parametrize("theta", [1, 2, 3])
def test_e_sharp_zero_set(theta):
    probes = [F(p, 2) for p in range(-40, 21)]
    for lam in partitions_up_to(6):
        # the tail points -i theta give the zeros u = (i - 1) theta, i > l(lam)
        zeros = {-l - theta for l in config_set(lam, theta, lam.length + 12)}
        for u in probes:
            assert (e_sharp(lam, theta, u) == 0) == (u in zeros), (lam, u)


@given(partitions_st(max_n=8), st.sampled_from([1, 2, 3]),
       st.fractions(min_value=-12, max_value=-F(1, 7), max_denominator=7))
def test_e_star_e_sharp_identity(lam, theta, u):
    poles = {i * theta - theta for i in range(1, lam.length + 1)}
    assume(u not in poles)
    star = float(to_numeric(e_star(lam, theta, u)))
    sharp = e_sharp(lam, theta, u) * gamma(float(-u / theta))
    assert sharp == pytest.approx(star, rel=1e-11, abs=1e-12)


def test_u_points():
    assert u_points([3], 1) == [(-5, -5)]
    assert u_points([0, 3], 2) == [(-6, -6), (-5, -7), (-9, -9), (-8, -10)]


# correlation identity ---------------------------------------------------------------

@pytest.fixture(scope="module")
def principal():
    return ZParams(parse_exact("1+1i"), parse_exact("1-1i"), 1)


def test_corr_lhs_empty_set(principal):
    mp = MixedParams(principal, F(1, 2))
    for N in (4, 8):
        r = corr_lhs([], mp, N)
        assert r.value == pytest.approx(1 - float(to_numeric(nb_tail(N, principal.t, F(1, 2)))), abs=1e-13)


def test_corr_lhs_against_enumeration(principal):
    mp = MixedParams(principal, F(1, 2))
    N = 8
    direct = sum(complex(to_numeric(mixed_measure(lam, mp))) for lam in partitions_up_to(N)
                 if 0 in config_set(lam, 1))
    assert corr_lhs([0], mp, N).value == pytest.approx(direct.real, rel=1e-12)
    vals = [corr_lhs([0], mp, n).value for n in range(0, 9)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_c_prime_single_point_theta1(principal):
    a, xi = 2, F(1, 2)
    z, zp = complex(principal.z), complex(principal.zp)
    import mpmath
    expect = (0.5 ** (z + zp - 1)) * 0.5 ** (a + 1) * complex(
        mpmath.gamma(z + a + 1) * mpmath.gamma(zp + a + 1)
        / (mpmath.gamma(a + 2) ** 2 * mpmath.gamma(z) * mpmath.gamma(zp)))
    assert complex(c_prime([a], principal, xi)) == pytest.approx(expect, rel=1e-12)


def test_corr_rhs_empty_set_is_mass(principal):
    mp = MixedParams(principal, F(1, 2))
    assert corr_rhs([], mp, 8).value == pytest.approx(corr_lhs([], mp, 8).value, rel=1e-13)


def test_identity_theta2():
    p = ZParams(parse_exact("1+1i"), parse_exact("1-1i"), 2)
    chk = theorem34_check([0], MixedParams(p, F(1, 2)))
    assert chk.relative <= 1e-4
    assert chk.exact_residual == 0 or abs(complex(to_numeric(chk.exact_residual))) < 1e-300
    assert chk.forms_gap < 1e-9
    assert chk.prefactor_gap < 1e-10


@pytest.mark.parametrize("A,theta", [([0], 1), ([1, 3], 1), ([0], 2), ([2], 2)])
def test_prefactor_relation(A, theta, principal):
    p = principal if theta == 1 else ZParams(parse_exact("1+1i"), parse_exact("1-1i"), 2)
    assert prefactor_relation_residual(A, p, F(1, 2)) < 1e-10


def test_shifted_weights_flagged():
    ok = theorem34_check([0], MixedParams(ZParams(F(1, 2), F(1, 3), 1), F(1, 2)), N=8)
    assert ok.shifted_is_probability and ok.to_json()["shifted_series"] == "complementary"
    bad = theorem34_check([0], MixedParams(ZParams(F(1, 2), F(3, 2), 1), F(1, 2)), N=8)
    assert not bad.shifted_is_probability and bad.relative < 1e-12
