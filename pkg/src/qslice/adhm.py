"""ADHM representation data for the doubled type-A quiver.

Holds the tuple (A, B, gamma, delta) of exact rational matrices over
the framed double quiver, checks the ADHM relations and the two
stability criteria, applies the gauge group action, evaluates the
invariant signature, and generates seeded sample data.
"""

from __future__ import annotations

from .errors import NotAdmissible, ShapeMismatch, Unsatisfiable
from .linalg import (
    RationalMatrix,
    hstack_all,
    inverse,
    is_invertible,
    rank,
    rank_factorize,
    rref,
)
from .prng import Stream, stream
from .weights import DimData

MAX_DRAWS = 64


class ADHMData:
    """One point of the representation space: maps

    A_i : V_i -> V_{i+1}   B_i : V_{i+1} -> V_i   (i = 1..n-2)
    gamma_i : D_i -> V_i   delta_i : V_i -> D_i   (i = 1..n-1)

    All tuples are indexed 0-based internally; the 1-based vertex
    numbering of the quiver shows up only in method arguments.
    """

    __slots__ = ("dims", "A", "B", "gamma", "delta")

    def __init__(self, dims: DimData, A, B, gamma, delta):
        if any(x < 0 for x in dims.d) or any(x < 0 for x in dims.v):
            raise ShapeMismatch("ADHM data needs nonnegative dimension vectors")
        n, d, v = dims.n, dims.d, dims.v
        A, B, gamma, delta = tuple(A), tuple(B), tuple(gamma), tuple(delta)
        if len(A) != n - 2 or len(B) != n - 2 or len(gamma) != n - 1 or len(delta) != n - 1:
            raise ShapeMismatch("wrong number of maps for this quiver")
        for i in range(n - 2):
            if A[i].shape != (v[i + 1], v[i]):
                raise ShapeMismatch(f"A_{i+1} must be {v[i+1]}x{v[i]}")
            if B[i].shape != (v[i], v[i + 1]):
                raise ShapeMismatch(f"B_{i+1} must be {v[i]}x{v[i+1]}")
        for i in range(n - 1):
            if gamma[i].shape != (v[i], d[i]):
                raise ShapeMismatch(f"gamma_{i+1} must be {v[i]}x{d[i]}")
            if delta[i].shape != (d[i], v[i]):
                raise ShapeMismatch(f"delta_{i+1} must be {d[i]}x{v[i]}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "delta", delta)

    def __setattr__(self, name, value):
        raise AttributeError("ADHMData is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, ADHMData)
            and self.dims == other.dims
            and self.A == other.A
            and self.B == other.B
            and self.gamma == other.gamma
            and self.delta == other.delta
        )

    def __hash__(self):
        return hash((self.dims, self.A, self.B, self.gamma, self.delta))

    @staticmethod
    def zero(dims: DimData) -> "ADHMData":
        v, d, n = dims.v, dims.d, dims.n
        return ADHMData(
            dims,
            [RationalMatrix.zero(v[i + 1], v[i]) for i in range(n - 2)],
            [RationalMatrix.zero(v[i], v[i + 1]) for i in range(n - 2)],
            [RationalMatrix.zero(v[i], d[i]) for i in range(n - 1)],
            [RationalMatrix.zero(d[i], v[i]) for i in range(n - 1)],
        )

    def to_json(self) -> dict:
        return {
            "n": self.dims.n,
            "d": list(self.dims.d),
            "v": list(self.dims.v),
            "A": [m.to_json() for m in self.A],
            "B": [m.to_json() for m in self.B],
            "gamma": [m.to_json() for m in self.gamma],
            "delta": [m.to_json() for m in self.delta],
        }

    @staticmethod
    def from_json(data: dict) -> "ADHMData":
        dims = DimData(int(data["n"]), tuple(data["d"]), tuple(data["v"]))
        v, d, n = dims.v, dims.d, dims.n
        A = [
            RationalMatrix.from_json(m, v[i + 1], v[i]) for i, m in enumerate(data["A"])
        ]
        B = [RationalMatrix.from_json(m, v[i], v[i + 1]) for i, m in enumerate(data["B"])]
        gamma = [
            RationalMatrix.from_json(m, v[i], d[i]) for i, m in enumerate(data["gamma"])
        ]
        delta = [
            RationalMatrix.from_json(m, d[i], v[i]) for i, m in enumerate(data["delta"])
        ]
        return ADHMData(dims, A, B, gamma, delta)


def adhm_defect(z: ADHMData, i: int) -> RationalMatrix:
    """Defect of the ADHM relation at vertex i (1-based), as a map V_i -> V_i.

    gamma_i delta_i + A_{i-1} B_{i-1} - B_i A_i, with the off-range
    products read as zero; admissible data has every defect zero.
    """
    n, v = z.dims.n, z.dims.v
    acc = z.gamma[i - 1] @ z.delta[i - 1]
    if i >= 2:
        acc = acc + z.A[i - 2] @ z.B[i - 2]
    if i <= n - 2:
        acc = acc - z.B[i - 1] @ z.A[i - 1]
    return acc


def check_admissible(z: ADHMData) -> bool:
    """All ADHM relations hold exactly (for n = 2: gamma_1 delta_1 = 0)."""
    return all(adhm_defect(z, i).is_zero() for i in range(1, z.dims.n))


def composite_gamma(z: ADHMData, j: int, i: int) -> RationalMatrix:
    """B_i ... B_{j-1} gamma_j : D_j -> V_i, for i <= j."""
    if not 1 <= i <= j <= z.dims.n - 1:
        raise ShapeMismatch(f"composite_gamma needs 1 <= i <= j, got i={i}, j={j}")
    acc = z.gamma[j - 1]
    for t in range(j - 1, i - 1, -1):
        acc = z.B[t - 1] @ acc
    return acc


def composite_delta(z: ADHMData, j: int, i: int) -> RationalMatrix:
    """delta_i A_{i-1} ... A_j : V_j -> D_i, for j <= i."""
    if not 1 <= j <= i <= z.dims.n - 1:
        raise ShapeMismatch(f"composite_delta needs 1 <= j <= i, got j={j}, i={i}")
    acc = RationalMatrix.identity(z.dims.v[j - 1])
    for t in range(j, i):
        acc = z.A[t - 1] @ acc
    return z.delta[i - 1] @ acc


def _require_admissible(z: ADHMData):
    if not check_admissible(z):
        raise NotAdmissible("data does not satisfy the ADHM relations")


def check_stable_criterion(z: ADHMData) -> bool:
    """Surjectivity criterion: Im A_{i-1} + sum_j Im gamma_{j->i} = V_i for all i."""
    _require_admissible(z)
    n, v = z.dims.n, z.dims.v
    for i in range(1, n):
        if v[i - 1] == 0:
            continue
        mats = []
        if i >= 2:
            mats.append(z.A[i - 2])
        mats.extend(composite_gamma(z, j, i) for j in range(i, n))
        if rank(hstack_all(mats, v[i - 1])) < v[i - 1]:
            return False
    return True


def check_stable_definition(z: ADHMData) -> bool:
    """Closure definition of stability.

    Grows the smallest collection U_i containing every Im gamma_j and
    invariant under all A_i and B_i, by iterating span growth to a
    fixed point; stable iff U = V.
    """
    _require_admissible(z)
    n, v = z.dims.n, z.dims.v

    spans = [z.gamma[i] for i in range(n - 1)]

    def reduce(m: RationalMatrix) -> RationalMatrix:
        red, pivots = rref(m.transpose())
        return red.submatrix(range(len(pivots)), range(m.rows)).transpose()

    spans = [reduce(m) for m in spans]
    changed = True
    while changed:
        changed = False
        for i in range(n - 2):
            grown = reduce(spans[i + 1].hstack(z.A[i] @ spans[i]))
            if grown.cols != spans[i + 1].cols:
                spans[i + 1] = grown
                changed = True
            grown = reduce(spans[i].hstack(z.B[i] @ spans[i + 1]))
            if grown.cols != spans[i].cols:
                spans[i] = grown
                changed = True
    return all(spans[i].cols == v[i] for i in range(n - 1))


class GLVElement:
    """Tuple of invertible gauge transformations g_i on the V_i."""

    __slots__ = ("g", "g_inv")

    def __init__(self, g):
        g = tuple(g)
        for m in g:
            if not is_invertible(m):
                raise ShapeMismatch("every g_i must be square and invertible")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "g_inv", tuple(inverse(m) for m in g))

    def __setattr__(self, name, value):
        raise AttributeError("GLVElement is immutable")

    @staticmethod
    def identity(dims: DimData) -> "GLVElement":
        return GLVElement([RationalMatrix.identity(vi) for vi in dims.v])

    def compose(self, other: "GLVElement") -> "GLVElement":
        return GLVElement([a @ b for a, b in zip(self.g, other.g)])


def act(g: GLVElement, z: ADHMData) -> ADHMData:
    """Gauge action (g_{i+1} A_i g_i^-1, g_i B_i g_{i+1}^-1, g_i gamma_i, delta_i g_i^-1)."""
    n = z.dims.n
    if len(g.g) != n - 1 or any(
        gi.rows != vi for gi, vi in zip(g.g, z.dims.v)
    ):
        raise ShapeMismatch("group element does not match dimension vector")
    A = [g.g[i + 1] @ z.A[i] @ g.g_inv[i] for i in range(n - 2)]
    B = [g.g[i] @ z.B[i] @ g.g_inv[i + 1] for i in range(n - 2)]
    gamma = [g.g[i] @ z.gamma[i] for i in range(n - 1)]
    delta = [z.delta[i] @ g.g_inv[i] for i in range(n - 1)]
    return ADHMData(z.dims, A, B, gamma, delta)


def signature_index(n: int) -> list[tuple[int, int, int]]:
    """Lexicographic (i, j, l) triples with l <= min(i, j)."""
    return [
        (i, j, l)
        for i in range(1, n)
        for j in range(1, n)
        for l in range(1, min(i, j) + 1)
    ]


def invariant_signature(z: ADHMData) -> list[RationalMatrix]:
    """Evaluations delta_{l->j} gamma_{i->l} in lexicographic (i, j, l) order.

    These generate the invariant ring, so two admissible data points
    with different signatures sit in different closed-orbit fibers.
    """
    _require_admissible(z)
    return [
        composite_delta(z, l, j) @ composite_gamma(z, i, l)
        for (i, j, l) in signature_index(z.dims.n)
    ]


# -- seeded generators -------------------------------------------------


def _rand_matrix(rng: Stream, rows: int, cols: int, bound: int = 3) -> RationalMatrix:
    return RationalMatrix(
        rows, cols, [rng.randint(-bound, bound) for _ in range(rows * cols)]
    )


def gen_glv(dims: DimData, seed: int, bound: int = 2) -> GLVElement:
    """Random gauge element as L @ U with unit diagonals (always invertible)."""
    rng = stream(seed, 0x61C88647)
    mats = []
    for vi in dims.v:
        lower = [[0] * vi for _ in range(vi)]
        upper = [[0] * vi for _ in range(vi)]
        for i in range(vi):
            lower[i][i] = 1
            upper[i][i] = 1
            for j in range(i):
                lower[i][j] = rng.randint(-bound, bound)
                upper[j][i] = rng.randint(-bound, bound)
        mats.append(RationalMatrix.from_rows(lower) @ RationalMatrix.from_rows(upper))
    return GLVElement(mats)


def gen_lagrangian(dims: DimData, seed: int, require_stable: bool = True) -> ADHMData:
    """Sample with B = delta = 0 (admissible for any A, gamma).

    Retries fresh draws until the stability criterion holds; raises
    Unsatisfiable when stability is unreachable this way (for example
    v_i > v_{i-1} + d_i).  With require_stable=False returns the first
    draw, which is admissible but often unstable.
    """
    n, v, d = dims.n, dims.v, dims.d
    rng = stream(seed, 0x1A62)
    B = [RationalMatrix.zero(v[i], v[i + 1]) for i in range(n - 2)]
    delta = [RationalMatrix.zero(d[i], v[i]) for i in range(n - 1)]
    for _ in range(MAX_DRAWS):
        A = [_rand_matrix(rng, v[i + 1], v[i]) for i in range(n - 2)]
        gamma = [_rand_matrix(rng, v[i], d[i]) for i in range(n - 1)]
        z = ADHMData(dims, A, B, gamma, delta)
        if not require_stable or check_stable_criterion(z):
            return z
    raise Unsatisfiable(f"no stable B=0 data found for {dims} in {MAX_DRAWS} draws")


def gen_unstable(dims: DimData, seed: int) -> ADHMData:
    """Admissible data that is unstable whenever v != 0: B = delta = gamma_1 = 0."""
    z = gen_lagrangian(dims, seed, require_stable=False)
    gamma = list(z.gamma)
    first = next((i for i, vi in enumerate(dims.v) if vi > 0), None)
    if first is not None:
        gamma[first] = RationalMatrix.zero(dims.v[first], dims.d[first])
    return ADHMData(dims, z.A, z.B, gamma, z.delta)


def _rank_budgets(rng: Stream, dims: DimData) -> list[int]:
    """Ranks for the B_i keeping every relation's right-hand side factorable.

    The completion at vertex i has rank at most rank(B_i) + rank(B_{i-1}),
    so rank(B_i) must fit under both d_i (minus what B_{i-1} used) and
    d_{i+1} (reserving room for the next relation).
    """
    n, v, d = dims.n, dims.v, dims.d
    budgets = []
    prev = 0
    for i in range(1, n - 1):
        left = d[0] if i == 1 else d[i - 1] - prev
        cap = max(0, min(v[i - 1], v[i], left, d[i]))
        budgets.append(rng.randint(0, cap))
        prev = budgets[-1]
    return budgets


def _relation_completion(dims: DimData, A, B, i: int) -> RationalMatrix:
    """What gamma_i delta_i must equal for the relation at vertex i to hold."""
    n, v = dims.n, dims.v
    C = RationalMatrix.zero(v[i - 1], v[i - 1])
    if i <= n - 2:
        C = C + B[i - 1] @ A[i - 1]
    if i >= 2:
        C = C - A[i - 2] @ B[i - 2]
    return C


def gen_general(dims: DimData, seed: int, require_stable: bool = True) -> ADHMData:
    """Sample with nonzero B and delta.

    Draws random A and low-rank B (rank budgets chosen so every
    relation completion stays within rank d_i), then factors the
    completions as gamma_i delta_i via rank factorization: admissible
    by construction.  The factorization pads gamma with zero columns
    beyond rank(C_i); those columns (or the matching delta rows, one of
    the two per index) are refilled with random entries, which leaves
    the product untouched but lets stability be reached generically.
    Retries for stability like gen_lagrangian.
    """
    n, v, d = dims.n, dims.v, dims.d
    rng = stream(seed, 0x6E3A)
    for _ in range(MAX_DRAWS):
        A = [_rand_matrix(rng, v[i + 1], v[i]) for i in range(n - 2)]
        budgets = _rank_budgets(rng, dims)
        B = []
        for i in range(n - 2):
            r = budgets[i]
            B.append(_rand_matrix(rng, v[i], r, 2) @ _rand_matrix(rng, r, v[i + 1], 2))
        gamma, delta = [], []
        for i in range(1, n):
            C = _relation_completion(dims, A, B, i)
            g, dl = rank_factorize(C, d[i - 1])
            rho = rank(C)
            g_ent = [g.row_list(r_) for r_ in range(g.rows)]
            d_ent = [dl.row_list(r_) for r_ in range(dl.rows)]
            for t in range(rho, d[i - 1]):
                if rng.randint(0, 1):
                    for r_ in range(v[i - 1]):
                        g_ent[r_][t] = rng.randint(-2, 2)
                else:
                    d_ent[t] = [rng.randint(-2, 2) for _ in range(v[i - 1])]
            gamma.append(
                RationalMatrix(v[i - 1], d[i - 1], [x for row in g_ent for x in row])
            )
            delta.append(
                RationalMatrix(d[i - 1], v[i - 1], [x for row in d_ent for x in row])
            )
        z = ADHMData(dims, A, B, gamma, delta)
        if not require_stable or check_stable_criterion(z):
            return z
    raise Unsatisfiable(f"no stable general data found for {dims} in {MAX_DRAWS} draws")
