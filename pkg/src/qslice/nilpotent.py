"""Nilpotent-matrix combinatorics: Jordan types, centralizers, dominance."""

from __future__ import annotations

from .errors import NotNilpotent, ShapeMismatch
from .linalg import RationalMatrix, rank
from ._backend import ZERO, ONE


class Partition:
    """Weakly decreasing tuple of positive integers (possibly empty)."""

    __slots__ = ("parts",)

    def __init__(self, parts):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    def __setattr__(self, name, value):
        raise AttributeError("Partition is immutable")

    @property
    def total(self) -> int:
        return sum(self.parts)

    def __eq__(self, other):
        return isinstance(other, Partition) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __repr__(self):
        return f"Partition({list(self.parts)})"

    def conjugate(self) -> "Partition":
        if not self.parts:
            return Partition(())
        return Partition(
            tuple(sum(1 for p in self.parts if p >= k) for k in range(1, self.parts[0] + 1))
        )


def dominance_leq(lam: Partition, mu: Partition) -> bool:
    """Dominance order: partial sums of lam never exceed those of mu.

    Both partitions must have the same total.
    """
    if lam.total != mu.total:
        raise ValueError("dominance compares partitions of the same total")
    acc_l = acc_m = 0
    for k in range(max(len(lam), len(mu))):
        acc_l += lam.parts[k] if k < len(lam) else 0
        acc_m += mu.parts[k] if k < len(mu) else 0
        if acc_l > acc_m:
            return False
    return True


def standard_nilpotent(lam: Partition) -> RationalMatrix:
    """Block-diagonal nilpotent with one Jordan block per part."""
    n = lam.total
    ent = [ZERO] * (n * n)
    off = 0
    for p in lam.parts:
        for t in range(p - 1):
            ent[(off + t) * n + off + t + 1] = ONE
        off += p
    return RationalMatrix(n, n, ent)


def jordan_type(u: RationalMatrix) -> Partition:
    """Jordan type of a nilpotent matrix.

    The number of parts >= k equals rank(u^(k-1)) - rank(u^k); the
    partition is the conjugate of that multiplicity sequence.  Raises
    NotNilpotent when u^N != 0.
    """
    if u.rows != u.cols:
        raise ShapeMismatch("jordan_type needs a square matrix")
    n = u.rows
    ranks = [n]
    power = u
    while ranks[-1] > 0:
        if len(ranks) > n:
            raise NotNilpotent(f"matrix of size {n} is not nilpotent")
        ranks.append(rank(power))
        power = power @ u
    mult = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    parts = []
    for size in range(len(mult), 0, -1):
        count = mult[size - 1] - (mult[size] if size < len(mult) else 0)
        parts.extend([size] * count)
    return Partition(parts)


def commutant_operator(u: RationalMatrix) -> RationalMatrix:
    """Matrix of m -> u m - m u on the n^2-dimensional space of matrices."""
    if u.rows != u.cols:
        raise ShapeMismatch("commutant of a non-square matrix")
    n = u.rows
    ent = [ZERO] * (n * n * n * n)
    width = n * n
    for i in range(n):
        for j in range(n):
            row = (i * n + j) * width
            for k in range(n):
                ent[row + k * n + j] += u[i, k]
            for l in range(n):
                ent[row + i * n + l] -= u[l, j]
    return RationalMatrix(n * n, n * n, ent)


def centralizer_dim(u: RationalMatrix) -> int:
    """Dimension of {m : um = mu}, by exact kernel of the commutator map."""
    n = u.rows
    return n * n - rank(commutant_operator(u))


def centralizer_dim_formula(lam: Partition) -> int:
    """Centralizer dimension of a nilpotent of type lam: sum of min(l_i, l_j)."""
    return sum(min(p, q) for p in lam.parts for q in lam.parts)
