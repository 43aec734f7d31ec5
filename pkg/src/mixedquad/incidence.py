"""Bipartite incidence structures and the quadrangle notions built on them.

Points and lines carry dense ids from 0. Incidence is stored twice, as
per-point line bitsets and per-line point bitsets (Python ints). Collinearity
follows the convention that a point is collinear with itself, so ``x`` is in
``x^perp``.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .verdict import FAIL, PASS, Verdict, bits_to_list, iter_bits, lowest_bit


class IncidenceError(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class IncidenceStructure:
    def __init__(
        self,
        n_points: int,
        n_lines: int,
        line_points: Sequence[int],
        point_labels: Optional[Sequence[str]] = None,
        line_labels: Optional[Sequence[str]] = None,
        name: str = "",
    ):
        if len(line_points) != n_lines:
            raise IncidenceError("line_points must have one entry per line")
        self.n_points = n_points
        self.n_lines = n_lines
        self.line_points = list(line_points)
        pl = [0] * n_points
        for lid, pts in enumerate(self.line_points):
            if pts >> n_points:
                raise IncidenceError(f"line {lid} references a point id >= {n_points}")
            for p in iter_bits(pts):
                pl[p] |= 1 << lid
        self.point_lines = pl
        self.point_labels = list(point_labels) if point_labels is not None else None
        self.line_labels = list(line_labels) if line_labels is not None else None
        self.name = name
        self.all_points = (1 << n_points) - 1
        self.all_lines = (1 << n_lines) - 1

    @classmethod
    def from_flags(cls, n_points: int, n_lines: int, flags: Iterable[tuple[int, int]], **kw) -> "IncidenceStructure":
        lp = [0] * n_lines
        for p, l in flags:
            lp[l] |= 1 << p
        return cls(n_points, n_lines, lp, **kw)

    @classmethod
    def from_blocks(cls, n_points: int, blocks: Iterable[Iterable[int]], **kw) -> "IncidenceStructure":
        lp = []
        for b in blocks:
            bits = 0
            for p in b:
                bits |= 1 << p
            lp.append(bits)
        return cls(n_points, len(lp), lp, **kw)

    def __repr__(self):
        return f"IncidenceStructure({self.name or '?'}: {self.n_points} points, {self.n_lines} lines)"

    def __eq__(self, other):
        return (isinstance(other, IncidenceStructure) and self.n_points == other.n_points
                and self.line_points == other.line_points)

    def __hash__(self):
        return hash((self.n_points, tuple(self.line_points)))

    def flags(self) -> list[tuple[int, int]]:
        return [(p, l) for p in range(self.n_points) for l in iter_bits(self.point_lines[p])]

    def incident(self, p: int, l: int) -> bool:
        return bool(self.line_points[l] >> p & 1)

    def points_of(self, l: int) -> list[int]:
        return bits_to_list(self.line_points[l])

    def lines_of(self, p: int) -> list[int]:
        return bits_to_list(self.point_lines[p])

    @cached_property
    def nbrs(self) -> list[int]:
        """Per point: the bitset of points collinear with it (itself included)."""
        out = []
        for p in range(self.n_points):
            b = 0
            for l in iter_bits(self.point_lines[p]):
                b |= self.line_points[l]
            out.append(b | (1 << p))
        return out

    @cached_property
    def dual(self) -> "IncidenceStructure":
        return IncidenceStructure(self.n_lines, self.n_points, self.point_lines,
                                  point_labels=self.line_labels, line_labels=self.point_labels,
                                  name=f"dual({self.name})")

    @cached_property
    def cache(self) -> dict:
        """Scratch space for derived objects (dual nets, verdicts)."""
        return {}

    def collinear(self, x: int, y: int) -> bool:
        return bool(self.nbrs[x] >> y & 1)

    def opposite(self, x: int) -> int:
        return self.all_points & ~self.nbrs[x]

    def line_through(self, x: int, y: int) -> Optional[int]:
        common = self.point_lines[x] & self.point_lines[y]
        return lowest_bit(common) if common else None

    def meet(self, l: int, m: int) -> Optional[int]:
        common = self.line_points[l] & self.line_points[m]
        return lowest_bit(common) if common else None

    def point_label(self, p: int) -> str:
        return self.point_labels[p] if self.point_labels else str(p)

    def line_label(self, l: int) -> str:
        return self.line_labels[l] if self.line_labels else str(l)

    def point_id(self, label: str) -> int:
        if label.lstrip("-").isdigit() and not self.point_labels:
            return int(label)
        return self._point_index[label]

    def line_id(self, label: str) -> int:
        if label.lstrip("-").isdigit() and not self.line_labels:
            return int(label)
        return self._line_index[label]

    @cached_property
    def _point_index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.point_labels or [])}

    @cached_property
    def _line_index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.line_labels or [])}


# ---------------------------------------------------------------------------
# GQ verification
# ---------------------------------------------------------------------------

@dataclass
class Violation:
    axiom: str
    message: str
    witness: dict = field(default_factory=dict)


@dataclass
class GQCertificate:
    """Result of ``verify_gq``: the order when all axioms hold, else the first violation."""

    order: Optional[tuple[int, int]]
    pl: bool
    gq: bool
    thick: bool
    violation: Optional[Violation] = None

    @property
    def ok(self) -> bool:
        return self.violation is None

    def __bool__(self):
        return self.ok

    def verdict(self, name: str = "gq") -> Verdict:
        if self.ok:
            return Verdict(name, PASS, detail={"order": list(self.order)})
        v = self.violation
        return Verdict(name, FAIL, witness={"axiom": v.axiom, "message": v.message, **v.witness})


def verify_gq(S: IncidenceStructure) -> GQCertificate:
    """Check (PL), (GQ) and thickness, reporting the first violating witness."""

    def fail(axiom, msg, pl=False, gq=False, **w):
        return GQCertificate(None, pl, gq, False, Violation(axiom, msg, w))

    if S.n_points == 0 or S.n_lines == 0:
        return fail("PL", "empty structure")
    for l in range(S.n_lines):
        if S.line_points[l].bit_count() < 2:
            return fail("PL", "line with fewer than two points", line=l)
    for p in range(S.n_points):
        if S.point_lines[p].bit_count() < 2:
            return fail("PL", "point on fewer than two lines", point=p)
    lp = S.line_points
    for l in range(S.n_lines):
        a = lp[l]
        for m in range(l + 1, S.n_lines):
            common = a & lp[m]
            if common & (common - 1):
                return fail("PL", "two points on two lines", lines=[l, m], points=bits_to_list(common)[:2])
    nbrs = S.nbrs
    for x in range(S.n_points):
        nx = nbrs[x]
        off = S.all_lines & ~S.point_lines[x]
        for l in iter_bits(off):
            c = (nx & lp[l]).bit_count()
            if c != 1:
                return fail("GQ", f"anti-flag with {c} projections", pl=True, point=x, line=l,
                            projections=bits_to_list(nx & lp[l]))
    line_sizes = {lp[l].bit_count() for l in range(S.n_lines)}
    point_sizes = {S.point_lines[p].bit_count() for p in range(S.n_points)}
    if min(line_sizes) < 3 or min(point_sizes) < 3:
        bad_l = next((l for l in range(S.n_lines) if lp[l].bit_count() < 3), None)
        bad_p = next((p for p in range(S.n_points) if S.point_lines[p].bit_count() < 3), None)
        return fail("thick", "not thick", pl=True, gq=True, line=bad_l, point=bad_p)
    order = None
    if len(line_sizes) == 1 and len(point_sizes) == 1:
        order = (line_sizes.pop() - 1, point_sizes.pop() - 1)
    return GQCertificate(order, True, True, True)


# ---------------------------------------------------------------------------
# perps, spans, regularity, triads
# ---------------------------------------------------------------------------

class PointSet:
    """A set of point ids with a provenance tag (perp, span, centers, ...)."""

    __slots__ = ("bits", "tag")

    def __init__(self, bits: int, tag: str):
        self.bits = bits
        self.tag = tag

    def __len__(self):
        return self.bits.bit_count()

    def __iter__(self):
        return iter_bits(self.bits)

    def __contains__(self, p: int):
        return bool(self.bits >> p & 1)

    def __eq__(self, other):
        if isinstance(other, PointSet):
            return self.bits == other.bits
        return set(self) == set(other)

    def __repr__(self):
        return f"PointSet({self.tag}, {bits_to_list(self.bits)})"

    def tolist(self) -> list[int]:
        return bits_to_list(self.bits)


def _distinct(x: int, y: int):
    if x == y:
        raise IncidenceError(f"perp/span need two distinct points, got {x} twice")


def perp_bits(S: IncidenceStructure, x: int, y: int) -> int:
    return S.nbrs[x] & S.nbrs[y]


def span_bits(S: IncidenceStructure, x: int, y: int) -> int:
    return perp_of(S, S.nbrs[x] & S.nbrs[y])


def perp_of(S: IncidenceStructure, bits: int) -> int:
    """Points collinear with every point of ``bits``."""
    out = S.all_points
    nbrs = S.nbrs
    for z in iter_bits(bits):
        out &= nbrs[z]
    return out


def perp(S: IncidenceStructure, x: int, y: int) -> PointSet:
    _distinct(x, y)
    return PointSet(perp_bits(S, x, y), "perp")


def span(S: IncidenceStructure, x: int, y: int) -> PointSet:
    _distinct(x, y)
    return PointSet(span_bits(S, x, y), "span")


def regularity_witness(S: IncidenceStructure, x: int) -> Optional[dict]:
    """A pair showing x is not regular, or None.

    x is regular when every span {x,y}^perpperp (y opposite x) equals the perp
    {u,v}^perp of every pair of distinct points u, v of {x,y}^perp.
    """
    nbrs = S.nbrs
    nx = nbrs[x]
    for y in iter_bits(S.opposite(x)):
        pxy = nx & nbrs[y]
        sp = perp_of(S, pxy)
        members = bits_to_list(pxy)
        for i, u in enumerate(members):
            nu = nbrs[u]
            for v in members[i + 1:]:
                if nu & nbrs[v] != sp:
                    return {"point": x, "opposite": y, "u": u, "v": v,
                            "span": bits_to_list(sp), "perp_uv": bits_to_list(nu & nbrs[v])}
    return None


def is_regular_point(S: IncidenceStructure, x: int) -> bool:
    return regularity_witness(S, x) is None


def is_regular_line(S: IncidenceStructure, l: int) -> bool:
    return regularity_witness(S.dual, l) is None


def is_regular_point_bruteforce(S: IncidenceStructure, x: int) -> bool:
    """Literal definition: every span through x equals the perp of some opposite pair."""
    nbrs = S.nbrs
    perps = set()
    for u in range(S.n_points):
        for v in iter_bits(S.opposite(u)):
            if v > u:
                perps.add(nbrs[u] & nbrs[v])
    return all(span_bits(S, x, y) in perps for y in iter_bits(S.opposite(x)))


class TriadError(IncidenceError):
    pass


def triad_centers(S: IncidenceStructure, x: int, y: int, z: int) -> PointSet:
    for a, b in ((x, y), (x, z), (y, z)):
        if S.collinear(a, b):
            raise TriadError(f"not a triad: points {a} and {b} are collinear")
    nbrs = S.nbrs
    return PointSet(nbrs[x] & nbrs[y] & nbrs[z], "centers")


def acentric_triad(S: IncidenceStructure, x: int) -> Optional[tuple[int, int, int]]:
    """A triad through x without a center, or None.

    For fixed y opposite x, the triad {x,y,z} is centric exactly when z is
    collinear with some point of {x,y}^perp.
    """
    nbrs = S.nbrs
    ox = S.opposite(x)
    for y in iter_bits(ox):
        reach = 0
        for c in iter_bits(nbrs[x] & nbrs[y]):
            reach |= nbrs[c]
        bad = ox & S.opposite(y) & ~reach
        if bad:
            return (x, y, lowest_bit(bad))
    return None


def is_projective_point(S: IncidenceStructure, x: int, *, assume_regular: bool = False) -> bool:
    if not assume_regular and not is_regular_point(S, x):
        raise IncidenceError(f"point {x} is not regular")
    return acentric_triad(S, x) is None


# ---------------------------------------------------------------------------
# projective planes
# ---------------------------------------------------------------------------

@dataclass
class PerpPlane:
    plane: IncidenceStructure
    host_points: list[int]  # local point id -> host point id
    apex: int


def perp_plane(S: IncidenceStructure, x: int, *, assume_projective: bool = False) -> PerpPlane:
    """Points x^perp, blocks {x,y}^perp for all y != x."""
    if not assume_projective and not is_projective_point(S, x):
        raise IncidenceError(f"point {x} is not projective")
    host = bits_to_list(S.nbrs[x])
    local = {h: i for i, h in enumerate(host)}
    nx = S.nbrs[x]
    blocks = {}
    for y in range(S.n_points):
        if y != x:
            b = nx & S.nbrs[y]
            blocks.setdefault(b, y)
    lp = []
    for b in sorted(blocks):
        bits = 0
        for h in iter_bits(b):
            bits |= 1 << local[h]
        lp.append(bits)
    plane = IncidenceStructure(len(host), len(lp), lp,
                               point_labels=[S.point_label(h) for h in host], name=f"perp-plane({x})")
    return PerpPlane(plane, host, x)


@dataclass
class PlaneCertificate:
    order: Optional[int]
    violation: Optional[Violation] = None

    @property
    def ok(self):
        return self.violation is None

    def __bool__(self):
        return self.ok


def verify_projective_plane(P: IncidenceStructure) -> PlaneCertificate:
    """Two points on exactly one line, two lines meet exactly once, a quadrangle exists."""

    def fail(msg, **w):
        return PlaneCertificate(None, Violation("plane", msg, w))

    pl, lp = P.point_lines, P.line_points
    for a in range(P.n_points):
        for b in range(a + 1, P.n_points):
            if (pl[a] & pl[b]).bit_count() != 1:
                return fail("two points not on exactly one line", points=[a, b])
    for l in range(P.n_lines):
        for m in range(l + 1, P.n_lines):
            if (lp[l] & lp[m]).bit_count() != 1:
                return fail("two lines not meeting exactly once", lines=[l, m])
    quad = _find_quadrangle(P)
    if quad is None:
        return fail("no four points in general position")
    sizes = {b.bit_count() for b in lp}
    if len(sizes) != 1:
        return fail("lines of different sizes")
    n = sizes.pop() - 1
    if P.n_points != n * n + n + 1 or P.n_lines != P.n_points:
        return fail("point/line counts do not match the order", order=n)
    return PlaneCertificate(n)


def _find_quadrangle(P: IncidenceStructure) -> Optional[tuple[int, ...]]:
    if P.n_points < 4:
        return None
    a = 0
    for b in range(1, P.n_points):
        ab = P.line_points[P.line_through(a, b)]
        for c in range(P.n_points):
            if ab >> c & 1:
                continue
            ac = P.line_points[P.line_through(a, c)]
            bc = P.line_points[P.line_through(b, c)]
            rest = P.all_points & ~(ab | ac | bc)
            if rest:
                return (a, b, c, lowest_bit(rest))
    return None


# ---------------------------------------------------------------------------
# "GQ v1" text format
# ---------------------------------------------------------------------------

GQ_HEADER = "# GQ v1"


def dumps_gq(S: IncidenceStructure) -> str:
    out = io.StringIO()
    out.write(GQ_HEADER + "\n")
    if S.name:
        out.write(f"# name {S.name}\n")
    for p in range(S.n_points):
        lab = f" {S.point_labels[p]}" if S.point_labels else ""
        out.write(f"point {p}{lab}\n")
    for l in range(S.n_lines):
        lab = f" {S.line_labels[l]}" if S.line_labels else ""
        out.write(f"line {l}{lab}\n")
    for p, l in S.flags():
        out.write(f"flag {p} {l}\n")
    return out.getvalue()


def loads_gq(text: str) -> IncidenceStructure:
    points: dict[int, Optional[str]] = {}
    lines: dict[int, Optional[str]] = {}
    flags = []
    name = ""
    for lineno, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if not s:
            continue
        if s.startswith("#"):
            if s.startswith("# name "):
                name = s[len("# name "):]
            continue
        parts = s.split()
        kind = parts[0]
        try:
            if kind in ("point", "line"):
                if len(parts) not in (2, 3):
                    raise ParseError(lineno, f"expected '{kind} <id> [label]'")
                ident = int(parts[1])
                table = points if kind == "point" else lines
                if ident in table:
                    raise ParseError(lineno, f"duplicate {kind} id {ident}")
                table[ident] = parts[2] if len(parts) == 3 else None
            elif kind == "flag":
                if len(parts) != 3:
                    raise ParseError(lineno, "expected 'flag <pid> <lid>'")
                flags.append((int(parts[1]), int(parts[2]), lineno))
            else:
                raise ParseError(lineno, f"unknown record {kind!r}")
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(lineno, f"bad integer in {s!r}") from None
    for table, kind in ((points, "point"), (lines, "line")):
        if sorted(table) != list(range(len(table))):
            raise ParseError(0, f"{kind} ids are not dense from 0")
    lp = [0] * len(lines)
    for p, l, lineno in flags:
        if p not in points or l not in lines:
            raise ParseError(lineno, f"flag references unknown element ({p}, {l})")
        lp[l] |= 1 << p
    plabels = [points[i] for i in range(len(points))]
    llabels = [lines[i] for i in range(len(lines))]
    return IncidenceStructure(
        len(points), len(lines), lp,
        point_labels=plabels if all(x is not None for x in plabels) and plabels else None,
        line_labels=llabels if all(x is not None for x in llabels) and llabels else None,
        name=name,
    )
