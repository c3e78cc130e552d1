"""Block layout of the enlarged (one-framing) quiver.

The embedding rewrites data for (d, v) as data for the dimension pair
with a single framing space of dimension N = sum j*d_j.  Level i of the
enlarged gauge space is V_i plus one copy slot (j, k) of D_j for every
i+1 <= j <= n-1, 1 <= k <= j-i; level 0 is the framing space itself,
made of the slots (j, k) with k <= j.  This module owns slot ordering,
offsets, the two integer gradings on blocks, the derived slot families,
and the per-level sl2 triples; it knows nothing about solving.
"""

from __future__ import annotations

from functools import lru_cache

from ._backend import ZERO, rational
from .errors import ShapeMismatch
from .linalg import RationalMatrix
from .weights import DimData

# slots are ("V", level) or ("D", j, k)
Slot = tuple


def _d_slot_range(n: int, level: int) -> list[Slot]:
    lo = level + 1 if level > 0 else 1
    return [
        ("D", j, k)
        for j in range(lo, n)
        for k in range(1, j - level + 1)
    ]


class TildeLayout:
    """Slot lists, offsets and totals for every level of the enlarged quiver."""

    __slots__ = ("dims", "slots", "offsets", "slot_dims", "vtilde", "N")

    def __init__(self, dims: DimData):
        if any(x < 0 for x in dims.d) or any(x < 0 for x in dims.v):
            raise ShapeMismatch("layout needs nonnegative dimension vectors")
        n, d, v = dims.n, dims.d, dims.v
        slots: list[list[Slot]] = []
        offsets: list[dict] = []
        slot_dims: list[dict] = []
        vtilde: list[int] = []
        for level in range(n):
            lv: list[Slot] = []
            if level > 0:
                lv.append(("V", level))
            lv.extend(_d_slot_range(n, level))
            table, dims_here, off = {}, {}, 0
            for s in lv:
                size = v[level - 1] if s[0] == "V" else d[s[1] - 1]
                table[s] = off
                dims_here[s] = size
                off += size
            slots.append(lv)
            offsets.append(table)
            slot_dims.append(dims_here)
            vtilde.append(off)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "slots", tuple(tuple(x) for x in slots))
        object.__setattr__(self, "offsets", tuple(offsets))
        object.__setattr__(self, "slot_dims", tuple(slot_dims))
        object.__setattr__(self, "vtilde", tuple(vtilde))
        object.__setattr__(self, "N", dims.N)

    def __setattr__(self, name, value):
        raise AttributeError("TildeLayout is immutable")

    # -- slot families --------------------------------------------------

    def d_slots(self, level: int) -> list[Slot]:
        return [s for s in self.slots[level] if s[0] == "D"]

    def d_prime(self, level: int) -> list[Slot]:
        """All D-slots of the level (the complement of V_level)."""
        return self.d_slots(level)

    def d_plus(self, level: int) -> list[Slot]:
        return [s for s in self.d_slots(level) if s[1] >= level + 2 and s[2] >= 2]

    def d_minus(self, level: int) -> list[Slot]:
        return [
            s for s in self.d_slots(level) if s[1] >= level + 2 and s[2] <= s[1] - level - 1
        ]

    def filtration_slots(self, level: int, l: int, h: int) -> list[Slot]:
        """Slots of the invariant subspace indexed by (l, h): copies
        (j, j - level - h') with 0 <= h' <= h and j >= level + 1 + l + h'."""
        return [
            ("D", j, j - level - hp)
            for hp in range(0, h + 1)
            for j in range(level + 1 + l + hp, self.dims.n)
        ]

    # -- block access ----------------------------------------------------

    def dim_of(self, level: int, slot: Slot) -> int:
        return self.slot_dims[level][slot]

    def family_dim(self, level: int, family) -> int:
        return sum(self.dim_of(level, s) for s in family)

    def block(
        self,
        m: RationalMatrix,
        level_tgt: int,
        tgt: Slot,
        level_src: int,
        src: Slot,
    ) -> RationalMatrix:
        """Extract the (tgt, src) block of a map between two levels."""
        ro = self.offsets[level_tgt][tgt]
        co = self.offsets[level_src][src]
        rd = self.slot_dims[level_tgt][tgt]
        cd = self.slot_dims[level_src][src]
        return m.submatrix(range(ro, ro + rd), range(co, co + cd))

    def family_block(
        self, m: RationalMatrix, level_tgt: int, tgts, level_src: int, srcs
    ) -> RationalMatrix:
        rows = [
            r
            for s in tgts
            for r in range(
                self.offsets[level_tgt][s],
                self.offsets[level_tgt][s] + self.slot_dims[level_tgt][s],
            )
        ]
        cols = [
            c
            for s in srcs
            for c in range(
                self.offsets[level_src][s],
                self.offsets[level_src][s] + self.slot_dims[level_src][s],
            )
        ]
        return m.submatrix(rows, cols)

    def assemble(self, level_tgt: int, level_src: int, blocks: dict) -> RationalMatrix:
        """Build a full matrix from a {(tgt_slot, src_slot): block} dict."""
        rows, cols = self.vtilde[level_tgt], self.vtilde[level_src]
        ent = [ZERO] * (rows * cols)
        for (tgt, src), blk in blocks.items():
            ro = self.offsets[level_tgt][tgt]
            co = self.offsets[level_src][src]
            rd = self.slot_dims[level_tgt][tgt]
            cd = self.slot_dims[level_src][src]
            if blk.shape != (rd, cd):
                raise ShapeMismatch(f"block ({tgt}, {src}) must be {rd}x{cd}")
            for r in range(rd):
                base = (ro + r) * cols + co
                ent[base : base + cd] = blk.entries[r * cd : (r + 1) * cd]
        return RationalMatrix._raw(rows, cols, tuple(ent))


@lru_cache(maxsize=4096)
def tilde_dims(dd: DimData) -> TildeLayout:
    """Layout for (d, v): framing (N, 0, ..., 0), gauge totals
    v_i + sum_{j>i} (j-i) d_j.  Layouts are immutable and cached."""
    return TildeLayout(dd)


# -- the two integer gradings on blocks --------------------------------


def _check_slot(layout_n: int, level: int, j: int, h: int, shifted: bool):
    lo = level + (0 if not shifted else 1)
    if not (lo + 1 <= j <= layout_n - 1 and 1 <= h <= j - lo):
        raise ShapeMismatch(f"slot ({j},{h}) invalid at level {level} (shift {shifted})")


def deg_grad(kind: str, i: int, j: int, h: int, jp: int, hp: int, n: int | None = None):
    """The (deg, grad) pair of a block.

    kind "t": block of the forward map at level i, source copy (jp, hp)
    at level i, target copy (j, h) at level i+1.  kind "s": backward
    map, source at level i+1, target at level i.  When n is given the
    slot indices are validated against the layout ranges.
    """
    if kind == "t":
        if n is not None:
            _check_slot(n, i, jp, hp, False)
            _check_slot(n, i, j, h, True)
        return min(h - hp + 1, h - hp + 1 + jp - j), 2 * h - 2 * hp + 2 + jp - j
    if kind == "s":
        if n is not None:
            _check_slot(n, i, jp, hp, True)
            _check_slot(n, i, j, h, False)
        return min(h - hp, h - hp + jp - j), 2 * h - 2 * hp + jp - j
    raise ShapeMismatch(f"block kind must be 't' or 's', got {kind!r}")


def lm_deg_grad(i: int, j: int, h: int, jp: int, hp: int):
    """deg/grad of the product-map blocks used by the level equations."""
    return min(h - hp + 1, h - hp + 1 + jp - j), 2 * h - 2 * hp + 2 + jp - j


# -- per-level sl2 triples ---------------------------------------------


class SL2Triple:
    """Raising/lowering pair on the D-slots of one level, plus its bracket."""

    __slots__ = ("level", "x", "y", "h")

    def __init__(self, level: int, x: RationalMatrix, y: RationalMatrix):
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "h", x @ y - y @ x)

    def __setattr__(self, name, value):
        raise AttributeError("SL2Triple is immutable")

    def brackets_hold(self) -> bool:
        x, y, h = self.x, self.y, self.h
        return (h @ x - x @ h) == x.scale(2) and (h @ y - y @ h) == y.scale(-2)


def sl2_of_level(layout: TildeLayout, level: int) -> SL2Triple:
    """x lowers copy index by the identity, y raises it weighted by
    h(j - level - h); tops and bottoms map to zero."""
    return _sl2_cached(layout.dims, level)


@lru_cache(maxsize=8192)
def _sl2_cached(dims: DimData, level: int) -> SL2Triple:
    layout = tilde_dims(dims)
    fam = layout.d_prime(level)
    size = layout.family_dim(level, fam)
    offs = {}
    off = 0
    for s in fam:
        offs[s] = off
        off += layout.dim_of(level, s)
    x_ent = [ZERO] * (size * size)
    y_ent = [ZERO] * (size * size)
    for s in fam:
        _, j, h = s
        dj = layout.dim_of(level, s)
        if h >= 2:
            ro, co = offs[("D", j, h - 1)], offs[s]
            for t in range(dj):
                x_ent[(ro + t) * size + co + t] = rational(1)
        if h <= j - level - 1:
            ro, co = offs[("D", j, h + 1)], offs[s]
            w = rational(h * (j - level - h))
            for t in range(dj):
                y_ent[(ro + t) * size + co + t] = w
    return SL2Triple(
        level, RationalMatrix(size, size, x_ent), RationalMatrix(size, size, y_ent)
    )
