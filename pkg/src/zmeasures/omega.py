"""Points of the boundary cone: finite-support (alpha, beta) plus scale delta."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from .errors import DomainError


@dataclass(frozen=True)
class OmegaPoint:
    """omega = (alpha, beta, delta); gamma = delta - sum(alpha) - sum(beta).

    Coordinates may be exact (Fraction) or float. Only finitely many nonzero
    alpha/beta coordinates are stored; the remainder is absorbed in gamma.
    """

    alpha: Tuple = ()
    beta: Tuple = ()
    delta: object = Fraction(0)

    def __post_init__(self):
        alpha = tuple(a for a in self.alpha if a != 0)
        beta = tuple(b for b in self.beta if b != 0)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        for name, seq in (("alpha", alpha), ("beta", beta)):
            if any(v < 0 for v in seq):
                raise DomainError(f"{name} coordinates must be nonnegative")
            if any(seq[i] < seq[i + 1] for i in range(len(seq) - 1)):
                raise DomainError(f"{name} must be nonincreasing")
        if self.delta < 0:
            raise DomainError("delta must be nonnegative")
        g = self.gamma
        # floats may undershoot by rounding
        tol = 0 if isinstance(g, Fraction) else 1e-12 * max(1.0, float(self.delta))
        if g < -tol:
            raise DomainError("sum of alpha and beta exceeds delta")

    @property
    def gamma(self):
        return self.delta - sum(self.alpha, Fraction(0)) - sum(self.beta, Fraction(0))

    def scaled(self, s) -> "OmegaPoint":
        return OmegaPoint(tuple(s * a for a in self.alpha), tuple(s * b for b in self.beta), s * self.delta)

    def to_json(self) -> dict:
        from .io import json_scalar

        return {
            "alpha": [json_scalar(a) for a in self.alpha],
            "beta": [json_scalar(b) for b in self.beta],
            "delta": json_scalar(self.delta),
        }


def dist(w1: OmegaPoint, w2: OmegaPoint) -> float:
    """|delta - delta'| + sum_i min(|d alpha_i|, 1)/2^i + same for beta."""
    total = abs(float(w1.delta) - float(w2.delta))
    for s1, s2 in ((w1.alpha, w2.alpha), (w1.beta, w2.beta)):
        n = max(len(s1), len(s2))
        for i in range(n):
            a = float(s1[i]) if i < len(s1) else 0.0
            b = float(s2[i]) if i < len(s2) else 0.0
            total += min(abs(a - b), 1.0) / 2 ** (i + 1)
    return total
