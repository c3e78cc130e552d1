"""Exact dense linear algebra over the rationals.

Everything here is exact: Gaussian elimination with the first nonzero
entry in column order as pivot (deterministic bases), unbounded integer
parts, no tolerances anywhere.  Degenerate shapes are first class: a
0xk or kx0 matrix is legal and multiplies as the zero map.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from ._backend import ONE, ZERO, Rational, rational, rational_from_str, rational_to_str
from .errors import (
    InconsistentSystem,
    NonUniqueSolution,
    RankTooHigh,
    ShapeMismatch,
)


def _coerce(x):
    if isinstance(x, Rational):
        return x
    if isinstance(x, int):
        return Rational(x)
    if isinstance(x, str):
        return rational_from_str(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to a rational")


class RationalMatrix:
    """Immutable dense matrix of exact rationals, row-major storage."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence):
        if rows < 0 or cols < 0:
            raise ShapeMismatch("negative dimensions")
        entries = tuple(_coerce(x) for x in entries)
        if len(entries) != rows * cols:
            raise ShapeMismatch(
                f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}"
            )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("RationalMatrix is immutable")

    @classmethod
    def _raw(cls, rows: int, cols: int, entries: tuple) -> "RationalMatrix":
        # trusted fast path: entries already canonical scalars
        m = object.__new__(cls)
        object.__setattr__(m, "rows", rows)
        object.__setattr__(m, "cols", cols)
        object.__setattr__(m, "entries", entries)
        return m

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(rows: int, cols: int) -> "RationalMatrix":
        return RationalMatrix._raw(rows, cols, (ZERO,) * (rows * cols))

    @staticmethod
    def identity(n: int) -> "RationalMatrix":
        ent = [ZERO] * (n * n)
        for i in range(n):
            ent[i * n + i] = ONE
        return RationalMatrix._raw(n, n, tuple(ent))

    @staticmethod
    def from_rows(rows: Iterable[Iterable]) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        r = len(rows)
        c = len(rows[0]) if rows else 0
        if any(len(row) != c for row in rows):
            raise ShapeMismatch("ragged rows")
        return RationalMatrix(r, c, [x for row in rows for x in row])

    @staticmethod
    def column(values: Iterable) -> "RationalMatrix":
        vals = list(values)
        return RationalMatrix(len(vals), 1, vals)

    # -- access -------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row_list(self, i: int) -> list:
        c = self.cols
        return list(self.entries[i * c : (i + 1) * c])

    def to_lists(self) -> list:
        return [self.row_list(i) for i in range(self.rows)]

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "RationalMatrix":
        c = self.cols
        ent = tuple(self.entries[i * c + j] for i in row_idx for j in col_idx)
        return RationalMatrix._raw(len(row_idx), len(col_idx), ent)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return all(x == ZERO for x in self.entries)

    # -- algebra ------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, RationalMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise ShapeMismatch(f"add {self.shape} vs {other.shape}")
        return RationalMatrix._raw(
            self.rows,
            self.cols,
            tuple(a + b for a, b in zip(self.entries, other.entries)),
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise ShapeMismatch(f"sub {self.shape} vs {other.shape}")
        return RationalMatrix._raw(
            self.rows,
            self.cols,
            tuple(a - b for a, b in zip(self.entries, other.entries)),
        )

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix._raw(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c) -> "RationalMatrix":
        c = _coerce(c)
        return RationalMatrix._raw(self.rows, self.cols, tuple(c * a for a in self.entries))

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ShapeMismatch(f"matmul {self.shape} @ {other.shape}")
        n, k, m = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        out = [ZERO] * (n * m)
        for i in range(n):
            arow = a[i * k : (i + 1) * k]
            orow = i * m
            for t in range(k):
                x = arow[t]
                if x == ZERO:
                    continue
                brow = t * m
                for j in range(m):
                    y = b[brow + j]
                    if y != ZERO:
                        out[orow + j] += x * y
        return RationalMatrix._raw(n, m, tuple(out))

    def transpose(self) -> "RationalMatrix":
        r, c, e = self.rows, self.cols, self.entries
        return RationalMatrix._raw(
            c, r, tuple(e[i * c + j] for j in range(c) for i in range(r))
        )

    def power(self, k: int) -> "RationalMatrix":
        if self.rows != self.cols:
            raise ShapeMismatch("power of a non-square matrix")
        acc = RationalMatrix.identity(self.rows)
        for _ in range(k):
            acc = acc @ self
        return acc

    def hstack(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.rows != other.rows:
            raise ShapeMismatch("hstack row mismatch")
        rows = [self.row_list(i) + other.row_list(i) for i in range(self.rows)]
        return RationalMatrix._raw(
            self.rows, self.cols + other.cols, tuple(x for r in rows for x in r)
        )

    def vstack(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.cols:
            raise ShapeMismatch("vstack col mismatch")
        return RationalMatrix._raw(
            self.rows + other.rows, self.cols, self.entries + other.entries
        )

    def trace(self):
        if self.rows != self.cols:
            raise ShapeMismatch("trace of a non-square matrix")
        return sum((self[i, i] for i in range(self.rows)), ZERO)

    def __repr__(self):
        return f"RationalMatrix({self.rows}x{self.cols}, {self.to_lists()!r})"

    # -- serialization ------------------------------------------------

    def to_json(self) -> list:
        return [[rational_to_str(x) for x in self.row_list(i)] for i in range(self.rows)]

    @staticmethod
    def from_json(data: list, rows: int | None = None, cols: int | None = None) -> "RationalMatrix":
        r = len(data)
        c = len(data[0]) if data else (cols if cols is not None else 0)
        if rows is not None and rows != r:
            raise ShapeMismatch(f"expected {rows} rows, got {r}")
        if cols is not None and r > 0 and c != cols:
            raise ShapeMismatch(f"expected {cols} cols, got {c}")
        return RationalMatrix(r, c, [rational_from_str(x) for row in data for x in row])


def hstack_all(mats: Sequence[RationalMatrix], rows: int) -> RationalMatrix:
    """Concatenate columns; `rows` disambiguates the empty list."""
    acc = RationalMatrix.zero(rows, 0)
    for m in mats:
        acc = acc.hstack(m)
    return acc


def from_blocks(grid: Sequence[Sequence[RationalMatrix]]) -> RationalMatrix:
    """Assemble a block matrix from a rectangular grid of blocks."""
    rows = None
    for block_row in grid:
        strip = block_row[0]
        for b in block_row[1:]:
            strip = strip.hstack(b)
        rows = strip if rows is None else rows.vstack(strip)
    if rows is None:
        return RationalMatrix.zero(0, 0)
    return rows


# -- elimination ------------------------------------------------------


def rref(m: RationalMatrix) -> tuple[RationalMatrix, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns.

    Pivot choice is the first nonzero entry in column order, so the
    result (and everything derived from it) is deterministic.
    """
    r, c = m.rows, m.cols
    a = [m.row_list(i) for i in range(r)]
    pivots: list[int] = []
    pr = 0
    for pc in range(c):
        pivot_row = None
        for i in range(pr, r):
            if a[i][pc] != ZERO:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        a[pr], a[pivot_row] = a[pivot_row], a[pr]
        inv = ONE / a[pr][pc]
        a[pr] = [x * inv for x in a[pr]]
        for i in range(r):
            if i != pr and a[i][pc] != ZERO:
                f = a[i][pc]
                arow, prow = a[i], a[pr]
                a[i] = [x - f * y for x, y in zip(arow, prow)]
        pivots.append(pc)
        pr += 1
        if pr == r:
            break
    return RationalMatrix(r, c, [x for row in a for x in row]), tuple(pivots)


def rank(m: RationalMatrix) -> int:
    """Exact rank over the rationals."""
    return len(rref(m)[1])


def kernel_basis(m: RationalMatrix) -> list[RationalMatrix]:
    """Deterministic basis of the right kernel, as column vectors.

    Empty iff the matrix is injective; always cols - rank vectors.
    """
    red, pivots = rref(m)
    c = m.cols
    pivot_set = set(pivots)
    free = [j for j in range(c) if j not in pivot_set]
    basis = []
    for fj in free:
        vec = [ZERO] * c
        vec[fj] = ONE
        for pi, pj in enumerate(pivots):
            vec[pj] = -red[pi, fj]
        basis.append(RationalMatrix.column(vec))
    return basis


def kernel_matrix(m: RationalMatrix) -> RationalMatrix:
    """Kernel basis vectors side by side (cols x nullity matrix)."""
    return hstack_all(kernel_basis(m), m.cols)


def solve_right(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    """Unique X with a @ X = b; raises if non-unique or inconsistent."""
    if a.rows != b.rows:
        raise ShapeMismatch(f"solve {a.shape} X = {b.shape}")
    aug = a.hstack(b)
    red, pivots = rref(aug)
    if any(p >= a.cols for p in pivots):
        raise InconsistentSystem("no solution")
    if len(pivots) < a.cols:
        raise NonUniqueSolution(f"solution space has dimension {a.cols - len(pivots)}")
    x = [[ZERO] * b.cols for _ in range(a.cols)]
    for pi, pj in enumerate(pivots):
        for j in range(b.cols):
            x[pj][j] = red[pi, a.cols + j]
    return RationalMatrix.from_rows(x) if x else RationalMatrix.zero(0, b.cols)


def inverse(m: RationalMatrix) -> RationalMatrix:
    if m.rows != m.cols:
        raise ShapeMismatch("inverse of a non-square matrix")
    return solve_right(m, RationalMatrix.identity(m.rows))


def is_invertible(m: RationalMatrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def rank_factorize(m: RationalMatrix, r: int) -> tuple[RationalMatrix, RationalMatrix]:
    """Exact factorization m = g @ d with g rows x r and d r x cols.

    Succeeds iff rank(m) <= r: g takes the pivot columns of m (padded
    with zero columns up to r), d the nonzero rows of the rref.
    """
    red, pivots = rref(m)
    rho = len(pivots)
    if rho > r:
        raise RankTooHigh(f"rank {rho} > budget {r}")
    g = m.submatrix(range(m.rows), pivots).hstack(RationalMatrix.zero(m.rows, r - rho))
    d = red.submatrix(range(rho), range(m.cols)).vstack(RationalMatrix.zero(r - rho, m.cols))
    return g, d


# -- affine systems of matrix unknowns with scalar coefficients -------


def solve_affine(
    equations: Sequence[tuple[Sequence[tuple[object, str]], RationalMatrix]],
    shapes: dict[str, tuple[int, int]],
) -> dict[str, RationalMatrix]:
    """Solve a system of equations  sum_k c_k * X_k = RHS  exactly.

    Each equation is (linear combination, RHS): the combination is a
    list of (scalar coefficient, unknown name) pairs.  All unknowns and
    right-hand sides must share one shape.  The scalar coefficient
    matrix is eliminated once; matrix-valued right-hand sides ride
    along.  Raises NonUniqueSolution when the scalar system is singular
    (or underdetermined) and InconsistentSystem when overdetermined
    equations conflict.
    """
    names = sorted(shapes)
    if not names:
        return {}
    shape = shapes[names[0]]
    if any(shapes[n] != shape for n in names):
        raise ShapeMismatch("all unknowns must share one shape")
    index = {n: k for k, n in enumerate(names)}
    nvars = len(names)

    coeff_rows: list[list] = []
    rhs: list[RationalMatrix] = []
    for combo, b in equations:
        if b.shape != shape:
            raise ShapeMismatch(f"RHS shape {b.shape} != unknown shape {shape}")
        row = [ZERO] * nvars
        for c, name in combo:
            if name not in index:
                raise ShapeMismatch(f"unknown symbol {name!r}")
            row[index[name]] += rational(c) if isinstance(c, (int, str)) else c
        coeff_rows.append(row)
        rhs.append(b)

    # forward elimination on [C | rhs], first-nonzero pivoting
    neq = len(coeff_rows)
    piv_of_col: list[int | None] = [None] * nvars
    pr = 0
    for pc in range(nvars):
        pivot = None
        for i in range(pr, neq):
            if coeff_rows[i][pc] != ZERO:
                pivot = i
                break
        if pivot is None:
            continue
        coeff_rows[pr], coeff_rows[pivot] = coeff_rows[pivot], coeff_rows[pr]
        rhs[pr], rhs[pivot] = rhs[pivot], rhs[pr]
        inv = ONE / coeff_rows[pr][pc]
        coeff_rows[pr] = [x * inv for x in coeff_rows[pr]]
        rhs[pr] = rhs[pr].scale(inv)
        for i in range(neq):
            if i != pr and coeff_rows[i][pc] != ZERO:
                f = coeff_rows[i][pc]
                coeff_rows[i] = [x - f * y for x, y in zip(coeff_rows[i], coeff_rows[pr])]
                rhs[i] = rhs[i] - rhs[pr].scale(f)
        piv_of_col[pc] = pr
        pr += 1
    if any(p is None for p in piv_of_col):
        raise NonUniqueSolution("scalar coefficient matrix is singular")
    for i in range(pr, neq):
        if not rhs[i].is_zero():
            raise InconsistentSystem("over-determined equations conflict")

    return {n: rhs[piv_of_col[index[n]]] for n in names}
