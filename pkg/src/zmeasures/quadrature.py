"""Gauss rules on [0, 1], [0, inf) and the simplex with Vandermonde weights.

Endpoint exponents that must be real and > -1 go into the Gauss weight;
complex parts are left to the integrand by the callers.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy import special as sp

from .errors import CapabilityError, DomainError


@lru_cache(maxsize=256)
def jacobi01(n: int, a: float, b: float) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes/weights for int_0^1 t^a (1-t)^b f(t) dt."""
    if a <= -1 or b <= -1:
        raise DomainError(f"Jacobi exponents must exceed -1, got {a}, {b}")
    x, w = sp.roots_jacobi(n, b, a)
    t = (1 + x) / 2
    w = w / 2 ** (a + b + 1)
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


@lru_cache(maxsize=256)
def laguerre(n: int, a: float) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes/weights for int_0^inf s^a e^{-s} f(s) ds."""
    if a <= -1:
        raise DomainError(f"Laguerre exponent must exceed -1, got {a}")
    x, w = sp.roots_genlaguerre(n, a)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def simplex_rule(l: int, A: float, nu: float, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes (npts, l) and weights for

        int_{t_1+..+t_l = 1} prod t_j^{A-1} prod_{i<j} |t_i - t_j|^{2 nu} g(t) dt

    with dt Lebesgue measure on the projection to (t_1..t_{l-1}).
    The integrand g must be symmetric; only an ordered chamber is sampled.
    """
    if A <= 0:
        raise DomainError("simplex exponent A must be positive")
    if l == 1:
        return np.ones((1, 1)), np.ones(1)
    if l == 2:
        # t = (w/2, 1 - w/2) on the half t_1 < 1/2, doubled by symmetry
        w_nodes, w_w = jacobi01(n, A - 1, 2 * nu)
        t1 = w_nodes / 2
        t2 = 1 - t1
        weights = 2 * w_w * (0.5 ** A) * t2 ** (A - 1)
        return np.stack([t2, t1], axis=1), weights
    if l == 3:
        # chamber t1 > t2 > t3 = u, u in (0, 1/3); t2 = u + L w, L = (1 - 3u)/2
        u_n, u_w = jacobi01(n, A - 1, 6 * nu + 1)
        u = u_n / 3
        u_w = u_w * 3.0 ** (-(A - 1) - (6 * nu + 1) - 1)
        w_n, w_w = jacobi01(n, 2 * nu, 2 * nu)
        U, W = np.meshgrid(u, w_n, indexing="ij")
        UW, WW = np.meshgrid(u_w, w_w, indexing="ij")
        L = (1 - 3 * U) / 2
        t3 = U
        t2 = U + L * W
        t1 = 1 - t2 - t3
        # L^{6 nu + 1} = (3/2)^{6nu+1} (1/3 - u)^{6nu+1}, the latter in the u-rule
        smooth = (2 - W) ** (2 * nu) * (t1 * t2) ** (A - 1) * 1.5 ** (6 * nu + 1) * 2 ** (2 * nu)
        weights = 6 * UW * WW * smooth
        pts = np.stack([t1.ravel(), t2.ravel(), t3.ravel()], axis=1)
        return pts, weights.ravel()
    raise CapabilityError(f"simplex quadrature implemented for l <= 3, got l = {l}", conditions=("l <= 3",))


def cone_rule(l: int, A: float, nu: float, n: int, radial: str, gamma_exp: float = 1.0):
    """Nodes/weights for int over tau in the cone of

        prod tau_i^{A-1} |Vandermonde(tau)|^{2 nu} R(|tau|) f(tau) dtau

    where R(s) = (1-s)^{gamma_exp - 1} on the unit simplex ("beta") or
    e^{-s} on the whole orthant ("laguerre"). Uses tau = s t with the
    simplex rule in t and a Gauss rule in s with exponent l A + l(l-1)nu - 1.
    """
    s_exp = l * A + l * (l - 1) * nu - 1
    if radial == "beta":
        s, sw = jacobi01(n, s_exp, gamma_exp - 1)
    elif radial == "laguerre":
        s, sw = laguerre(n, s_exp)
    else:
        raise DomainError(f"unknown radial weight {radial!r}")
    t, tw = simplex_rule(l, A, nu, n)
    pts = (s[:, None, None] * t[None, :, :]).reshape(-1, l)
    weights = (sw[:, None] * tw[None, :]).ravel()
    return pts, weights
