"""Partitions (Young diagrams) and their exact combinatorial statistics."""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterator, List, Tuple

from .errors import DomainError, ResourceError
from .exact import as_rational
from .omega import OmegaPoint

ENUMERATION_BOUND = 40


class Partition(tuple):
    """A weakly decreasing tuple of positive integers.

    Trailing zeros are stripped on construction, so ``Partition((2, 1, 0))``
    equals ``Partition((2, 1))``. Rows and columns are 1-based in the helpers
    below, matching the usual (i, j) box coordinates.
    """

    def __new__(cls, parts=()):
        if isinstance(parts, Partition):
            return parts
        ps = [int(p) for p in parts]
        while ps and ps[-1] == 0:
            ps.pop()
        for a, b in zip(ps, ps[1:]):
            if a < b:
                raise DomainError(f"parts must be weakly decreasing: {tuple(ps)}")
        if ps and ps[-1] < 0:
            raise DomainError("parts must be positive")
        return super().__new__(cls, ps)

    @cached_property
    def n(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def part(self, i: int) -> int:
        """lambda_i with 1-based index; zero beyond the length."""
        return self[i - 1] if 1 <= i <= len(self) else 0

    @cached_property
    def conjugate(self) -> "Partition":
        if not self:
            return self
        return Partition([sum(1 for p in self if p >= j) for j in range(1, self[0] + 1)])

    def transpose(self) -> "Partition":
        return self.conjugate

    def boxes(self) -> Iterator[Tuple[int, int]]:
        for i, row in enumerate(self, start=1):
            for j in range(1, row + 1):
                yield i, j

    def arm(self, i: int, j: int) -> int:
        return self[i - 1] - j

    def leg(self, i: int, j: int) -> int:
        return self.conjugate.part(j) - i

    def contains(self, other: "Partition") -> bool:
        other = Partition(other)
        return len(other) <= len(self) and all(o <= s for o, s in zip(other, self))

    def add_box(self, i: int) -> "Partition":
        """Add a box at the end of row i (1-based); error if not addable."""
        parts = list(self) + [0]
        if i < 1 or i > len(self) + 1 or (i > 1 and parts[i - 2] <= parts[i - 1]):
            raise DomainError(f"cannot add a box in row {i} of {tuple(self)}")
        parts[i - 1] += 1
        return Partition(parts)

    def addable_rows(self) -> List[int]:
        return [i for i in range(1, len(self) + 2) if i == 1 or self.part(i - 1) > self.part(i)]

    def removable_rows(self) -> List[int]:
        return [i for i in range(1, len(self) + 1) if self.part(i) > self.part(i + 1)]

    def children(self) -> List["Partition"]:
        """Diagrams obtained by adding one box, in row order."""
        return [self.add_box(i) for i in self.addable_rows()]

    def parents(self) -> List["Partition"]:
        """Diagrams obtained by removing one box, in row order."""
        out = []
        for i in self.removable_rows():
            parts = list(self)
            parts[i - 1] -= 1
            out.append(Partition(parts))
        return out

    def multiplicities(self) -> dict:
        out: dict = {}
        for p in self:
            out[p] = out.get(p, 0) + 1
        return out

    def __repr__(self):
        return f"Partition({tuple(self)!r})"


EMPTY = Partition(())


def added_box(mu: Partition, lam: Partition):
    """The box (i, j) with lam = mu + box, or None if lam does not cover mu."""
    if lam.n != mu.n + 1 or not lam.contains(mu):
        return None
    for i in range(1, len(lam) + 1):
        if lam.part(i) != mu.part(i):
            return i, lam.part(i)
    return None


@lru_cache(maxsize=None)
def _partitions(n: int, max_part: int) -> Tuple[Partition, ...]:
    if n == 0:
        return (EMPTY,)
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - first, first):
            out.append(Partition((first,) + tuple(rest)))
    return tuple(out)


def enumerate_partitions(n: int, bound: int = ENUMERATION_BOUND) -> List[Partition]:
    """All partitions of n in reverse lexicographic order: (n), (n-1,1), ..., (1^n)."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    if n > bound:
        raise ResourceError(f"enumeration of Y_{n} exceeds the configured bound {bound}")
    return list(_partitions(n, n))


def partitions_up_to(n_max: int, bound: int = ENUMERATION_BOUND) -> Iterator[Partition]:
    for n in range(n_max + 1):
        yield from enumerate_partitions(n, bound)


@lru_cache(maxsize=None)
def _bounded_partitions(n: int, max_part: int, max_len: int) -> Tuple[Partition, ...]:
    if n == 0:
        return (EMPTY,)
    if max_len == 0:
        return ()
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in _bounded_partitions(n - first, first, max_len - 1):
            out.append(Partition((first,) + tuple(rest)))
    return tuple(out)


def partitions_with_length(n: int, max_len: int) -> Tuple[Partition, ...]:
    """Partitions of n with at most max_len parts, reverse lexicographic."""
    return _bounded_partitions(n, n, max_len)


def dominates(lam: Partition, mu: Partition) -> bool:
    """lam >= mu in dominance order (same size assumed)."""
    s1 = s2 = 0
    for i in range(max(len(lam), len(mu))):
        s1 += lam.part(i + 1)
        s2 += mu.part(i + 1)
        if s1 < s2:
            return False
    return True


def content(i: int, j: int, theta) -> Fraction:
    """c_theta(i, j) = (j - 1) - (i - 1) theta."""
    return (j - 1) - (i - 1) * theta


@lru_cache(maxsize=None)
def _hooks(lam: Partition, theta: Fraction) -> Tuple[Fraction, Fraction]:
    conj = lam.conjugate
    h = Fraction(1)
    hp = Fraction(1)
    for i, j in lam.boxes():
        arm = lam[i - 1] - j
        leg = conj[j - 1] - i
        h *= arm + leg * theta + 1
        hp *= arm + leg * theta + theta
    return h, hp


def hook_products(lam, theta) -> Tuple[Fraction, Fraction]:
    """(H, H') with H = prod(a + l theta + 1), H' = prod(a + l theta + theta)."""
    return _hooks(Partition(lam), as_rational(theta))


def gen_pochhammer(z, lam, theta):
    """(z)_{lam,theta} = prod over boxes of z + (j-1) - (i-1) theta.

    Works in the arithmetic of z: exact for rational/Gaussian inputs,
    floating for float/complex inputs.
    """
    out = 1
    for i, j in Partition(lam).boxes():
        out = out * (z + ((j - 1) - (i - 1) * theta))
    return out


class FrobeniusCoords(tuple):
    """(a, b, n): modified Frobenius coordinates, half-integers as Fractions."""

    def __new__(cls, a, b, n):
        return super().__new__(cls, (tuple(a), tuple(b), n))

    @property
    def a(self):
        return self[0]

    @property
    def b(self):
        return self[1]

    @property
    def n(self):
        return self[2]


def frobenius(lam) -> FrobeniusCoords:
    lam = Partition(lam)
    conj = lam.conjugate
    d = sum(1 for i, p in enumerate(lam, start=1) if p >= i)
    half = Fraction(1, 2)
    a = [lam[i - 1] - i + half for i in range(1, d + 1)]
    b = [conj[i - 1] - i + half for i in range(1, d + 1)]
    return FrobeniusCoords(a, b, lam.n)


def embed_iota_n(lam, n: int = None) -> OmegaPoint:
    """iota_n: alpha = a/n, beta = b/n, delta = 1."""
    lam = Partition(lam)
    if n is None:
        n = lam.n
    if n == 0 or lam.n == 0:
        raise DomainError("the embedding iota_n needs a nonempty diagram")
    if n != lam.n:
        raise DomainError("n must equal |lambda|")
    fr = frobenius(lam)
    return OmegaPoint(tuple(x / n for x in fr.a), tuple(x / n for x in fr.b), Fraction(1))


def embed_iota(lam) -> OmegaPoint:
    """Unscaled embedding: alpha = a(lam), beta = b(lam), delta = |lam|."""
    fr = frobenius(lam)
    return OmegaPoint(fr.a, fr.b, Fraction(fr.n))


def fat_hook_contains(lam, k: int, l: int) -> bool:
    """True iff every box (i, j) of lam has i <= k or j <= l."""
    lam = Partition(lam)
    return lam.part(k + 1) <= l


def theta_duplicate(lam, theta: int) -> Partition:
    if int(theta) != theta or theta < 1:
        raise DomainError("theta must be a positive integer")
    return Partition([p for p in Partition(lam) for _ in range(int(theta))])
