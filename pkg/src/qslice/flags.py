"""The single-framing case: quiver data as pairs (nilpotent, partial flag).

When the framing vector is (N, 0, ..., 0), stable admissible data is
the same thing as a nilpotent endomorphism u of the framing space
together with a partial flag it shifts down: u is delta_1 gamma_1 and
the flag steps are the kernels of the lengthening composites through
gamma_1.  Both directions are constructed explicitly and are exact
inverses of each other; the inverse realizes the quotients D/F_i on
deterministic complement bases, so it is validated purely by the
roundtrip, never assumed.
"""

from __future__ import annotations

from ._backend import ZERO
from .adhm import ADHMData, check_admissible, check_stable_criterion
from .errors import InvalidFlag, NotStable, WrongFraming
from .linalg import (
    RationalMatrix,
    hstack_all,
    inverse,
    kernel_matrix,
    rank,
    rref,
)
from .nilpotent import Partition, jordan_type
from .prng import stream
from .weights import DimData, a_of


class PartialFlag:
    """Increasing chain of subspaces with step sizes a_1, ..., a_n.

    bases[i] is an N x (a_1 + ... + a_{i+1}) matrix whose columns span
    the (i+1)-th space; the last equals the whole space.
    """

    __slots__ = ("N", "a", "bases")

    def __init__(self, N: int, a: tuple[int, ...], bases):
        bases = tuple(bases)
        if any(x < 0 for x in a) or sum(a) != N:
            raise InvalidFlag(f"step sizes {a} incompatible with N={N}")
        if len(bases) != len(a):
            raise InvalidFlag("need one basis matrix per step")
        expected = 0
        for k, m in enumerate(bases):
            expected += a[k]
            if m.shape != (N, expected):
                raise InvalidFlag(f"basis {k} must be {N}x{expected}")
            if rank(m) != expected:
                raise InvalidFlag(f"basis {k} does not have full column rank")
            if k > 0:
                prev = bases[k - 1]
                if rank(m.hstack(prev)) != expected:
                    raise InvalidFlag(f"space {k - 1} is not contained in space {k}")
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "a", tuple(a))
        object.__setattr__(self, "bases", bases)

    def __setattr__(self, name, value):
        raise AttributeError("PartialFlag is immutable")

    def dim(self, i: int) -> int:
        """Dimension of the i-th space, 1-based; dim(0) = 0."""
        return sum(self.a[:i])


class FlagPair:
    """A matrix u together with a flag it strictly shifts: u F_i <= F_{i-1}."""

    __slots__ = ("u", "flag")

    def __init__(self, u: RationalMatrix, flag: PartialFlag):
        if u.shape != (flag.N, flag.N):
            raise InvalidFlag(f"u must be {flag.N}x{flag.N}")
        if flag.N > 0 and not (u @ flag.bases[0]).is_zero():
            raise InvalidFlag("u must kill the first space")
        for k in range(1, len(flag.bases)):
            image = u @ flag.bases[k]
            prev = flag.bases[k - 1]
            if rank(prev.hstack(image)) != rank(prev):
                raise InvalidFlag(f"u does not map space {k + 1} into space {k}")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "flag", flag)

    def __setattr__(self, name, value):
        raise AttributeError("FlagPair is immutable")

    def to_json(self) -> dict:
        return {
            "N": self.flag.N,
            "a": list(self.flag.a),
            "u": self.u.to_json(),
            "flag": [m.to_json() for m in self.flag.bases],
        }

    @staticmethod
    def from_json(data: dict) -> "FlagPair":
        N = int(data["N"])
        a = tuple(int(x) for x in data["a"])
        u = RationalMatrix.from_json(data["u"], N, N)
        sizes = []
        total = 0
        for step in a:
            total += step
            sizes.append(total)
        bases = [
            RationalMatrix.from_json(m, N, sizes[k]) for k, m in enumerate(data["flag"])
        ]
        return FlagPair(u, PartialFlag(N, a, bases))


def _single_framing(dims: DimData) -> int:
    if any(x != 0 for x in dims.d[1:]):
        raise WrongFraming(f"framing vector must be (N, 0, ..., 0), got {dims.d}")
    return dims.d[0]


def flag_of_data(z: ADHMData) -> FlagPair:
    """(u, flag) of stable single-framing data.

    u = delta_1 gamma_1; the i-th space is the kernel of
    A_{i-1} ... A_1 gamma_1 (full space at the top).  Stability makes
    gamma_1 and every A_i surjective, so the step sizes come out as the
    a-tuple of the dimension data.
    """
    N = _single_framing(z.dims)
    if not check_admissible(z) or not check_stable_criterion(z):
        raise NotStable("flag extraction needs stable admissible data")
    n = z.dims.n
    u = z.delta[0] @ z.gamma[0]
    bases = []
    comp = z.gamma[0]
    for i in range(1, n):
        bases.append(kernel_matrix(comp))
        if i <= n - 2:
            comp = z.A[i - 1] @ comp
    bases.append(RationalMatrix.identity(N))
    a = a_of(z.dims)
    flag = PartialFlag(N, a, bases)
    return FlagPair(u, flag)


def _complement_columns(basis: RationalMatrix) -> list[int]:
    """Coordinate indices completing the column space to the whole space.

    The pivot columns of basis^T mark a set of coordinates on which the
    columns project isomorphically; the complementary coordinates give
    a deterministic complement.
    """
    _, pivots = rref(basis.transpose())
    pivot_set = set(pivots)
    return [k for k in range(basis.rows) if k not in pivot_set]


def data_of_flag(p: FlagPair) -> ADHMData:
    """Rebuild single-framing data from a flag pair.

    V_i realizes the quotient of the framing space by the i-th flag
    space: columns of the identity complete the flag basis to a square
    matrix T_i, and the quotient map q_i reads off the complement
    coordinates of T_i^{-1}.  All maps are induced by u and the natural
    projections; the roundtrip through flag_of_data is exact.
    """
    flag, u = p.flag, p.u
    N = flag.N
    n = len(flag.a)
    ident = RationalMatrix.identity(N)
    sections = []  # complement-basis columns, V_i -> D
    quotients = []  # q_i : D -> V_i
    for i in range(n - 1):
        basis = flag.bases[i]
        comp = _complement_columns(basis)
        section = ident.submatrix(range(N), comp)
        T = basis.hstack(section)
        T_inv = inverse(T)
        q = T_inv.submatrix(range(basis.cols, N), range(N))
        sections.append(section)
        quotients.append(q)
    v = tuple(N - flag.dim(i + 1) for i in range(n - 1))
    d = (N,) + (0,) * (n - 2)
    dims = DimData(n, d, v)
    A = [quotients[i + 1] @ sections[i] for i in range(n - 2)]
    B = [quotients[i] @ u @ sections[i + 1] for i in range(n - 2)]
    gamma = [quotients[0]] + [
        RationalMatrix.zero(v[i], 0) for i in range(1, n - 1)
    ]
    delta = [u @ sections[0]] + [
        RationalMatrix.zero(0, v[i]) for i in range(1, n - 1)
    ]
    return ADHMData(dims, A, B, gamma, delta)


def gen_flag_pair(a: tuple[int, ...], seed: int) -> FlagPair:
    """Seeded sample: a random change of basis applied to the coordinate
    flag, with u strictly block-upper-triangular in the adapted basis."""
    if any(x < 0 for x in a):
        raise InvalidFlag(f"step sizes must be nonnegative: {a}")
    N = sum(a)
    rng = stream(seed, 0xF1A6)
    while True:
        P = RationalMatrix(
            N, N, [rng.randint(-3, 3) for _ in range(N * N)]
        )
        if rank(P) == N:
            break
    block_of = []
    for k, step in enumerate(a):
        block_of.extend([k] * step)
    raw = [
        rng.randint(-3, 3) if block_of[r] < block_of[c] else 0
        for r in range(N)
        for c in range(N)
    ]
    u_adapted = RationalMatrix(N, N, raw)
    u = P @ u_adapted @ inverse(P)
    sizes = []
    total = 0
    for step in a:
        total += step
        sizes.append(total)
    bases = [P.submatrix(range(N), range(s)) for s in sizes]
    return FlagPair(u, PartialFlag(N, tuple(a), bases))


def generic_type_reached(a: tuple[int, ...], seeds) -> bool:
    """Whether some seed attains the maximal Jordan type for this step
    vector (the sorted-steps partition); true generically."""
    from .weights import lambda_of

    target = lambda_of(tuple(a))
    return any(jordan_type(gen_flag_pair(a, s).u) == target for s in seeds)
