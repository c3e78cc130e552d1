"""Dimension-vector combinatorics for the type A_{n-1} framed quiver.

Translates between the pair (d, v), the n-tuple a of flag step sizes,
and the partition attached to a; decides emptiness and computes
dimensions on both sides of the dictionary.  Entries of d and v may be
negative (the emptiness conventions cover that case); everything here
is pure integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyVariety, NegativeEntry, SumMismatch
from .nilpotent import Partition, centralizer_dim_formula


@dataclass(frozen=True)
class DimData:
    """Dimension vectors d (framing) and v (gauge), each of length n-1."""

    n: int
    d: tuple[int, ...]
    v: tuple[int, ...]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        object.__setattr__(self, "v", tuple(int(x) for x in self.v))
        if len(self.d) != self.n - 1 or len(self.v) != self.n - 1:
            raise ValueError("d and v must have length n-1")

    @property
    def N(self) -> int:
        return sum((i + 1) * di for i, di in enumerate(self.d))


def cartan_matrix(n: int) -> list[list[int]]:
    """Cartan matrix of type A_{n-1}: 2 on the diagonal, -1 off it."""
    size = n - 1
    return [
        [2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(size)]
        for i in range(size)
    ]


def a_of(dd: DimData) -> tuple[int, ...]:
    """Flag step sizes attached to (d, v); always sums to N = sum i*d_i."""
    n, d, v = dd.n, dd.d, dd.v
    a = []
    for i in range(1, n + 1):
        if i == 1:
            a.append(sum(d) - v[0])
        elif i == n:
            a.append(v[n - 2])
        else:
            a.append(sum(d[i - 1 :]) + v[i - 2] - v[i - 1])
    return tuple(a)


def v_of(d: tuple[int, ...], a: tuple[int, ...]) -> tuple[int, ...]:
    """Inverse of a_of for fixed d; requires sum(a) = sum i*d_i."""
    n = len(d) + 1
    if len(a) != n:
        raise SumMismatch(f"a must have length {n}")
    total = sum((i + 1) * di for i, di in enumerate(d))
    if sum(a) != total:
        raise SumMismatch(f"sum(a) = {sum(a)} but sum i*d_i = {total}")
    v = [0] * (n - 1)
    v[n - 2] = a[n - 1]
    for i in range(n - 2, 0, -1):
        # v_i = a_n + ... + a_{i+1} - d_{i+1} - 2 d_{i+2} - ...
        v[i - 1] = sum(a[i:]) - sum((k - i) * d[k - 1] for k in range(i + 1, n))
    return tuple(v)


def lambda_of(a: tuple[int, ...]) -> Partition:
    """Partition with alpha_k - alpha_{k+1} parts equal to k (alpha = sorted a)."""
    if any(x < 0 for x in a):
        raise NegativeEntry(f"a must be nonnegative: {a}")
    alpha = sorted(a, reverse=True)
    n = len(alpha)
    parts = []
    for k in range(n, 0, -1):
        count = alpha[k - 1] - (alpha[k] if k < n else 0)
        parts.extend([k] * count)
    return Partition(parts)


def dominant_form(dd: DimData) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Dominant representative of v under the Weyl action fixing d.

    Sorting a(d, v) weakly decreasing realizes the Weyl element making
    d - v dominant (a_i - a_{i+1} is the pairing of d - v with the i-th
    coroot).  Returns (v', perm) where perm is the stable argsort:
    sorted_a[k] = a[perm[k]].
    """
    a = a_of(dd)
    perm = tuple(sorted(range(len(a)), key=lambda i: (-a[i], i)))
    a_sorted = tuple(a[p] for p in perm)
    return v_of(dd.d, a_sorted), perm


def simple_reflection_on_v(dd: DimData, i: int) -> tuple[int, ...]:
    """Action of the i-th simple reflection (1-based) on v, fixing d.

    Computed on the lattice side: s_i shifts v_i by the pairing
    <d - v, coroot_i> = d_i - (C v)_i.  Used as the independent oracle
    for the permutation action on a-tuples.
    """
    C = cartan_matrix(dd.n)
    cv = sum(C[i - 1][j] * dd.v[j] for j in range(dd.n - 1))
    v = list(dd.v)
    v[i - 1] += dd.d[i - 1] - cv
    return tuple(v)


def quiver_nonempty(dd: DimData) -> bool:
    """Nonemptiness of the quiver side: the dominant form of v is >= 0."""
    v_prime, _ = dominant_form(dd)
    return all(x >= 0 for x in v_prime)


def slice_nonempty(d: tuple[int, ...], a: tuple[int, ...]) -> bool:
    """Nonemptiness of the slice side.

    Requires a >= 0 (empty by convention otherwise) and, for every k,
    sum_j min(j, k) d_j >= (the k largest entries of a summed); the
    subset inequalities reduce to top-k sums.
    """
    if any(x < 0 for x in a):
        return False
    n = len(a)
    a_sorted = sorted(a, reverse=True)
    top = 0
    for k in range(1, n + 1):
        top += a_sorted[k - 1]
        lhs = sum(min(j, k) * d[j - 1] for j in range(1, n))
        if lhs < top:
            return False
    return True


def quiver_dim(dd: DimData) -> int:
    """2 v.d - v^T C v for a nonempty quiver variety."""
    if not quiver_nonempty(dd):
        raise EmptyVariety(f"empty quiver variety for {dd}")
    C = cartan_matrix(dd.n)
    v, d = dd.v, dd.d
    vcv = sum(v[i] * C[i][j] * v[j] for i in range(dd.n - 1) for j in range(dd.n - 1))
    return 2 * sum(vi * di for vi, di in zip(v, d)) - vcv


def x_type_partition(d: tuple[int, ...]) -> Partition:
    """Jordan type 1^{d_1} 2^{d_2} ... (n-1)^{d_{n-1}} as a partition."""
    parts = []
    for j in range(len(d), 0, -1):
        parts.extend([j] * d[j - 1])
    return Partition(parts)


def slice_dim(d: tuple[int, ...], a: tuple[int, ...]) -> int:
    """Centralizer-dimension difference between the base nilpotent and type lambda_a.

    Centralizer dimensions come from the exact partition formula
    sum min(l_i, l_j); the commutant-kernel route in exact_linalg is
    held equal to it by the acceptance suite.
    """
    if not slice_nonempty(d, a):
        raise EmptyVariety(f"empty slice for d={d}, a={a}")
    return centralizer_dim_formula(x_type_partition(d)) - centralizer_dim_formula(
        lambda_of(a)
    )
