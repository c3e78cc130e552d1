"""Paths in the doubled quiver and their evaluation on ADHM data.

A B-path is a word in the arrows a_i : i -> i+1 and b_i : i+1 -> i.
An admissible path is a bracketed word [i_m^{r_m} seg ... seg i_1^{r_1}]
alternating vertex insertions (powers of gamma_i delta_i) with B-path
segments; it evaluates to a map D_source -> D_target by capping the
word with gamma at the source and delta at the target.  Admissible
polynomials are finite rational combinations of admissible paths; the
product concatenates brackets, merging junction powers r + r' + 1.
"""

from __future__ import annotations

from ._backend import ZERO, rational
from .adhm import ADHMData, adhm_defect
from .errors import ParseError, ShapeMismatch
from .linalg import RationalMatrix

# arrows are ("a", i): i -> i+1 and ("b", i): i+1 -> i, with 1 <= i <= n-2
Arrow = tuple[str, int]


def arrow_source(h: Arrow) -> int:
    return h[1] if h[0] == "a" else h[1] + 1


def arrow_target(h: Arrow) -> int:
    return h[1] + 1 if h[0] == "a" else h[1]


class BPath:
    """Composable word of arrows; the empty word sits at a single vertex."""

    __slots__ = ("source", "arrows")

    def __init__(self, source: int, arrows=()):
        arrows = tuple(arrows)
        at = source
        for h in arrows:
            if arrow_source(h) != at:
                raise ShapeMismatch(f"arrow {h} does not start at vertex {at}")
            at = arrow_target(h)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "arrows", arrows)

    def __setattr__(self, name, value):
        raise AttributeError("BPath is immutable")

    @property
    def target(self) -> int:
        return arrow_target(self.arrows[-1]) if self.arrows else self.source

    @property
    def degree(self) -> int:
        return len(self.arrows)

    def __eq__(self, other):
        return (
            isinstance(other, BPath)
            and self.source == other.source
            and self.arrows == other.arrows
        )

    def __hash__(self):
        return hash((self.source, self.arrows))

    def __repr__(self):
        word = " ".join(f"{k}{i}" for k, i in reversed(self.arrows)) or f"(e{self.source})"
        return f"BPath({word})"


def eval_bpath(path: BPath, z: ADHMData) -> RationalMatrix:
    """Composite of the arrow matrices; empty path gives the identity on V_i."""
    acc = RationalMatrix.identity(z.dims.v[path.source - 1])
    for kind, i in path.arrows:
        step = z.A[i - 1] if kind == "a" else z.B[i - 1]
        acc = step @ acc
    return acc


class AdmissiblePath:
    """Bracketed word, stored source-first.

    vertices = (i_1, ..., i_{m+1}), powers = (r_1, ..., r_{m+1}),
    segments = (s_1, ..., s_m) with s_j a B-path from i_j to i_{j+1}.
    """

    __slots__ = ("vertices", "powers", "segments")

    def __init__(self, vertices, powers, segments=()):
        vertices, powers, segments = tuple(vertices), tuple(powers), tuple(segments)
        if len(vertices) != len(powers) or len(segments) != len(vertices) - 1:
            raise ShapeMismatch("mismatched bracket components")
        if any(r < 0 for r in powers):
            raise ShapeMismatch("powers must be nonnegative")
        for j, seg in enumerate(segments):
            if seg.source != vertices[j] or seg.target != vertices[j + 1]:
                raise ShapeMismatch(
                    f"segment {j} runs {seg.source}->{seg.target}, "
                    f"expected {vertices[j]}->{vertices[j + 1]}"
                )
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "powers", powers)
        object.__setattr__(self, "segments", segments)

    def __setattr__(self, name, value):
        raise AttributeError("AdmissiblePath is immutable")

    @property
    def source(self) -> int:
        return self.vertices[0]

    @property
    def target(self) -> int:
        return self.vertices[-1]

    @property
    def degree(self) -> int:
        return 2 + sum(self.powers) + sum(s.degree for s in self.segments)

    def __eq__(self, other):
        return (
            isinstance(other, AdmissiblePath)
            and self.vertices == other.vertices
            and self.powers == other.powers
            and self.segments == other.segments
        )

    def __hash__(self):
        return hash((self.vertices, self.powers, self.segments))

    def __repr__(self):
        toks = []
        for k in range(len(self.vertices) - 1, -1, -1):
            toks.append(
                f"{self.vertices[k]}^{self.powers[k]}"
                if self.powers[k]
                else str(self.vertices[k])
            )
            if k > 0:
                seg = self.segments[k - 1]
                toks.extend(f"{kind}{i}" for kind, i in reversed(seg.arrows))
        return "[" + " ".join(toks) + "]"

    def concat(self, other: "AdmissiblePath") -> "AdmissiblePath":
        """Bracket of self . other (other applied first); merges junction powers."""
        if other.target != self.source:
            raise ShapeMismatch("endpoints do not chain")
        powers = (
            other.powers[:-1]
            + (other.powers[-1] + self.powers[0] + 1,)
            + self.powers[1:]
        )
        return AdmissiblePath(
            other.vertices + self.vertices[1:], powers, other.segments + self.segments
        )


def vertex_loop(z: ADHMData, i: int) -> RationalMatrix:
    return z.gamma[i - 1] @ z.delta[i - 1]


def eval_admissible(path: AdmissiblePath, z: ADHMData) -> RationalMatrix:
    """Map D_source -> D_target.

    delta_{i_{m+1}} (gamma delta)^{r_{m+1}} s_m ... s_1 (gamma delta)^{r_1} gamma_{i_1}.
    """
    acc = z.gamma[path.source - 1]
    for k, vtx in enumerate(path.vertices):
        loop = vertex_loop(z, vtx)
        for _ in range(path.powers[k]):
            acc = loop @ acc
        if k < len(path.segments):
            acc = eval_bpath(path.segments[k], z) @ acc
    return z.delta[path.target - 1] @ acc


class AdmissiblePolynomial:
    """Finite rational combination of admissible paths, optionally typed."""

    __slots__ = ("terms", "type")

    def __init__(self, terms: dict, ptype: tuple[int, int] | None = None):
        clean = {p: rational(c) if isinstance(c, (int, str)) else c for p, c in terms.items()}
        clean = {p: c for p, c in clean.items() if c != ZERO}
        if ptype is not None:
            for p in clean:
                if (p.source, p.target) != ptype:
                    raise ShapeMismatch(f"path {p} is not of type {ptype}")
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "type", ptype)

    def __setattr__(self, name, value):
        raise AttributeError("AdmissiblePolynomial is immutable")

    @staticmethod
    def of_path(path: AdmissiblePath, coeff=1) -> "AdmissiblePolynomial":
        return AdmissiblePolynomial({path: coeff}, (path.source, path.target))

    def __add__(self, other: "AdmissiblePolynomial") -> "AdmissiblePolynomial":
        terms = dict(self.terms)
        for p, c in other.terms.items():
            terms[p] = terms.get(p, ZERO) + c
        ptype = self.type if self.type == other.type else None
        return AdmissiblePolynomial(terms, ptype)

    def scale(self, c) -> "AdmissiblePolynomial":
        c = rational(c) if isinstance(c, (int, str)) else c
        return AdmissiblePolynomial({p: c * x for p, x in self.terms.items()}, self.type)

    def __eq__(self, other):
        return isinstance(other, AdmissiblePolynomial) and self.terms == other.terms

    def __repr__(self):
        return " + ".join(f"{c}*{p}" for p, c in self.terms.items()) or "0"


def multiply(f: AdmissiblePolynomial, g: AdmissiblePolynomial) -> AdmissiblePolynomial:
    """Bilinear extension of bracket concatenation; mismatched endpoints give 0."""
    terms: dict = {}
    for p, c in f.terms.items():
        for q, e in g.terms.items():
            if q.target != p.source:
                continue
            merged = p.concat(q)
            coeff = c * e
            terms[merged] = terms.get(merged, ZERO) + coeff
    ptype = None
    if f.type is not None and g.type is not None:
        ptype = (g.type[0], f.type[1])
    return AdmissiblePolynomial(terms, ptype)


def eval_polynomial(f: AdmissiblePolynomial, z: ADHMData) -> RationalMatrix:
    if f.type is None:
        raise ShapeMismatch("only typed polynomials evaluate to a single matrix")
    i, j = f.type
    acc = RationalMatrix.zero(z.dims.d[j - 1], z.dims.d[i - 1])
    for p, c in f.terms.items():
        acc = acc + eval_admissible(p, z).scale(c)
    return acc


def theta_residual(i: int, left: BPath, right: BPath, z: ADHMData) -> RationalMatrix:
    """ADHM defect at vertex i sandwiched by B-paths: left(z) defect_i right(z).

    left must start at i and right must end at i.  Identically zero on
    admissible data, which is what makes evaluation well defined on the
    relation ideal's quotient.
    """
    if left.source != i or right.target != i:
        raise ShapeMismatch(f"sandwich endpoints must meet at vertex {i}")
    return eval_bpath(left, z) @ adhm_defect(z, i) @ eval_bpath(right, z)


def generator_path(i: int, j: int, l: int) -> AdmissiblePath:
    """Admissible path evaluating to delta_{l->j} gamma_{i->l} (l <= min(i, j))."""
    if not (1 <= l <= min(i, j)):
        raise ShapeMismatch(f"need l <= min(i, j), got ({i}, {j}, {l})")
    arrows = [("b", t) for t in range(i - 1, l - 1, -1)]
    arrows += [("a", t) for t in range(l, j)]
    if not arrows:
        return AdmissiblePath((i,), (0,))
    return AdmissiblePath((i, j), (0, 0), (BPath(i, arrows),))


def generators_P(n: int) -> list[AdmissiblePath]:
    """Generating set of the algebra, in lexicographic (i, j, l) order.

    Matches the ordering of quiver_rep's invariant signature, so the
    two can be compared term by term.
    """
    from .adhm import signature_index

    return [generator_path(i, j, l) for (i, j, l) in signature_index(n)]


def enumerate_bpaths(n: int, source: int, max_degree: int) -> list[BPath]:
    """All B-paths out of a vertex up to the given degree, shortest first."""
    out = [BPath(source)]
    frontier = [BPath(source)]
    for _ in range(max_degree):
        nxt = []
        for p in frontier:
            at = p.target
            if at <= n - 2:
                nxt.append(BPath(source, p.arrows + (("a", at),)))
            if at >= 2:
                nxt.append(BPath(source, p.arrows + (("b", at - 1),)))
        out.extend(nxt)
        frontier = nxt
    return out


# -- textual path grammar (see README for the EBNF) --------------------


def parse_path(text: str):
    """Parse "[2 a1 1^1]" into an AdmissiblePath, or bare arrows into a BPath.

    Bracketed words are written target-first, like the algebra's
    notation; arrow runs between vertex tokens form the segments.
    """
    toks = text.replace("[", " ").replace("]", " ").split()
    if not toks:
        raise ParseError("empty path")
    bracketed = "[" in text

    def is_arrow(tok: str) -> bool:
        return len(tok) > 1 and tok[0] in "ab" and tok[1:].isdigit()

    if not bracketed:
        if not all(is_arrow(t) for t in toks):
            raise ParseError("bare paths must be arrow words like 'b1 a1'")
        arrows = [(t[0], int(t[1:])) for t in reversed(toks)]
        return BPath(arrow_source(arrows[0]), arrows)

    toks = list(reversed(toks))  # source-first from here on
    vertices: list[int] = []
    powers: list[int] = []
    segments: list[BPath] = []
    pending: list[Arrow] = []
    for tok in toks:
        if is_arrow(tok):
            if not vertices:
                raise ParseError("bracket must open with a vertex token")
            pending.append((tok[0], int(tok[1:])))
            continue
        if "^" in tok:
            vtx, _, pw = tok.partition("^")
        else:
            vtx, pw = tok, "0"
        if not vtx.isdigit() or not pw.isdigit():
            raise ParseError(f"bad vertex token {tok!r}")
        if vertices:
            if not pending:
                raise ParseError("two vertex tokens need arrows between them")
            segments.append(BPath(vertices[-1], pending))
            pending = []
        vertices.append(int(vtx))
        powers.append(int(pw))
    if pending:
        raise ParseError("bracket must close with a vertex token")
    try:
        return AdmissiblePath(vertices, powers, segments)
    except ShapeMismatch as exc:
        raise ParseError(str(exc)) from exc
