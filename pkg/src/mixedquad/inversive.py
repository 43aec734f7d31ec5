"""Circle geometries (P, C, gnarl) from polarities of W(q), and their axioms.

Circles are bitsets over point ids. Two circles touch when they share
exactly one point. ``through[p]`` is the bitset of circles containing p,
``touch_at[c][p]`` the bitset of circles touching circle c at p.
"""

from __future__ import annotations

import io
import random
from bisect import bisect_right
from dataclasses import dataclass, field
from functools import cached_property
from itertools import accumulate
from typing import Callable, Optional

from .incidence import IncidenceStructure, ParseError
from .symmetry import Polarity, absolute_elements
from .verdict import FAIL, PASS, Verdict, bits_to_list, iter_bits, lowest_bit


class CircleGeometryError(ValueError):
    pass


@dataclass
class CircleGeometry:
    n_points: int
    circles: list[int]
    gnarl: list[int]
    point_labels: Optional[list[str]] = None
    host_points: Optional[list[int]] = None     # point id -> host point of the quadrangle
    host_centers: Optional[list[int]] = None    # circle id -> non-absolute host point
    strict: bool = True
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.gnarl) != len(self.circles):
            raise CircleGeometryError("one gnarl per circle is required")
        if self.strict:
            for c, bits in enumerate(self.circles):
                if bits.bit_count() < 3:
                    raise CircleGeometryError(f"circle {c} has fewer than 3 points")
                if not bits >> self.gnarl[c] & 1:
                    raise CircleGeometryError(f"gnarl of circle {c} is not on it")
            if len(set(self.circles)) != len(self.circles):
                raise CircleGeometryError("two circles have the same point set")

    @property
    def n_circles(self) -> int:
        return len(self.circles)

    @cached_property
    def through(self) -> list[int]:
        t = [0] * self.n_points
        for c, bits in enumerate(self.circles):
            for p in iter_bits(bits):
                t[p] |= 1 << c
        return t

    @cached_property
    def with_gnarl(self) -> list[int]:
        g = [0] * self.n_points
        for c, p in enumerate(self.gnarl):
            g[p] |= 1 << c
        return g

    @cached_property
    def touches(self) -> list[int]:
        """Per circle, the bitset of circles touching it."""
        out = [0] * self.n_circles
        for c in range(self.n_circles):
            for d in self._touch_pairs[c]:
                out[c] |= 1 << d
        return out

    @cached_property
    def _touch_pairs(self) -> list[dict[int, int]]:
        n = self.n_circles
        pairs: list[dict[int, int]] = [dict() for _ in range(n)]
        for c in range(n):
            bc = self.circles[c]
            cand = 0
            for p in iter_bits(bc):
                cand |= self.through[p]
            for d in iter_bits(cand & ~((1 << (c + 1)) - 1)):
                inter = bc & self.circles[d]
                if inter and not inter & (inter - 1):
                    p = lowest_bit(inter)
                    pairs[c][d] = p
                    pairs[d][c] = p
        return pairs

    def touch_point(self, c: int, d: int) -> Optional[int]:
        return self._touch_pairs[c].get(d)

    @cached_property
    def touch_at(self) -> list[dict[int, int]]:
        out: list[dict[int, int]] = []
        for c in range(self.n_circles):
            table: dict[int, int] = {}
            for d, p in self._touch_pairs[c].items():
                table[p] = table.get(p, 0) | (1 << d)
            out.append(table)
        return out

    def cocircular(self, *points: int) -> bool:
        acc = -1
        for p in points:
            acc &= self.through[p]
        return acc != 0

    def points_of(self, c: int) -> list[int]:
        return bits_to_list(self.circles[c])


def build_circle_geometry(S: IncidenceStructure, rho: Polarity) -> CircleGeometry:
    """One circle O & x^perp per non-absolute point x, gnarl on the line x^rho."""
    ovoid, _ = absolute_elements(S, rho)
    local = {h: i for i, h in enumerate(ovoid)}
    obits = 0
    for h in ovoid:
        obits |= 1 << h
    circles, gnarls, centers = [], [], []
    seen = {}
    for x in range(S.n_points):
        if obits >> x & 1:
            continue
        host_c = obits & S.nbrs[x]
        on_line = host_c & S.line_points[rho.point_to_line[x]]
        if on_line.bit_count() != 1:
            raise CircleGeometryError(f"circle of point {x} has {on_line.bit_count()} candidate gnarls")
        if host_c in seen:
            raise CircleGeometryError(f"points {seen[host_c]} and {x} give the same circle")
        seen[host_c] = x
        bits = 0
        for h in iter_bits(host_c):
            bits |= 1 << local[h]
        circles.append(bits)
        gnarls.append(local[lowest_bit(on_line)])
        centers.append(x)
    return CircleGeometry(len(ovoid), circles, gnarls, point_labels=[S.point_label(h) for h in ovoid],
                          host_points=list(ovoid), host_centers=centers)


# ---------------------------------------------------------------------------
# axioms
# ---------------------------------------------------------------------------

def _ok(name, tuples, exhaustive=True, **detail):
    return Verdict(name, PASS, tuples=tuples, exhaustive=exhaustive, detail=detail)


def _bad(name, tuples, exhaustive=True, **witness):
    return Verdict(name, FAIL, witness=witness, tuples=tuples, exhaustive=exhaustive)


def check_mp1(G: CircleGeometry) -> Verdict:
    """Three distinct points lie on at most one circle."""
    n = 0
    for c in range(G.n_circles):
        bc = G.circles[c]
        for d in range(c + 1, G.n_circles):
            n += 1
            common = bc & G.circles[d]
            if common.bit_count() >= 3:
                return _bad("MP1", n, points=bits_to_list(common)[:3], circles=[c, d])
    return _ok("MP1", n)


def check_mp1_prime(G: CircleGeometry) -> Verdict:
    """Three distinct points lie on exactly one circle."""
    v = check_mp1(G)
    if not v.passed:
        v.check = "MP1'"
        return v
    n = v.tuples
    allp = (1 << G.n_points) - 1
    for x in range(G.n_points):
        for y in range(x + 1, G.n_points):
            n += 1
            cov = 0
            for c in iter_bits(G.through[x] & G.through[y]):
                cov |= G.circles[c]
            missing = allp & ~cov & ~(1 << x) & ~(1 << y)
            if missing:
                return _bad("MP1'", n, points=[x, y, lowest_bit(missing)], circles=[])
    return _ok("MP1'", n)


def check_mp2(G: CircleGeometry) -> Verdict:
    """For x on C and y off C exactly one circle through y touches C at x."""
    n = 0
    allp = (1 << G.n_points) - 1
    for c in range(G.n_circles):
        bc = G.circles[c]
        table = G.touch_at[c]
        for x in iter_bits(bc):
            t = table.get(x, 0)
            for y in iter_bits(allp & ~bc):
                n += 1
                hits = t & G.through[y]
                if hits.bit_count() != 1:
                    return _bad("MP2", n, circle=c, x=x, y=y, touching=bits_to_list(hits))
    return _ok("MP2", n)


def check_ch1(G: CircleGeometry) -> Verdict:
    """No three circles touch pairwise in three pairwise distinct points."""
    n = 0
    for c1 in range(G.n_circles):
        t1 = G.touches[c1]
        for c2 in iter_bits(t1 & ~((1 << (c1 + 1)) - 1)):
            p12 = G.touch_point(c1, c2)
            for c3 in iter_bits(t1 & G.touches[c2] & ~((1 << (c2 + 1)) - 1)):
                n += 1
                p13, p23 = G.touch_point(c1, c3), G.touch_point(c2, c3)
                if len({p12, p13, p23}) == 3:
                    return _bad("CH1", n, circles=[c1, c2, c3], touch_points=[p12, p13, p23])
    return _ok("CH1", n)


def check_ch2(G: CircleGeometry) -> Verdict:
    """For x, y off C, the circles through x and y touching C number 0, 1 or all."""
    n = 0
    allp = (1 << G.n_points) - 1
    for c in range(G.n_circles):
        off = bits_to_list(allp & ~G.circles[c])
        tc = G.touches[c]
        for i, x in enumerate(off):
            tx = G.through[x]
            for y in off[i + 1:]:
                n += 1
                both = tx & G.through[y]
                k = (both & tc).bit_count()
                if k not in (0, 1, both.bit_count()):
                    return _bad("CH2", n, circle=c, x=x, y=y, through=bits_to_list(both),
                                touching=bits_to_list(both & tc))
    return _ok("CH2", n)


def check_st1(G: CircleGeometry) -> Verdict:
    """For distinct x, y exactly one circle contains x and has gnarl y."""
    n = 0
    for x in range(G.n_points):
        for y in range(G.n_points):
            if x == y:
                continue
            n += 1
            hits = G.through[x] & G.with_gnarl[y]
            if hits.bit_count() != 1:
                return _bad("ST1", n, x=x, y=y, circles=bits_to_list(hits))
    return _ok("ST1", n)


def _gnarls_on(G: CircleGeometry, c: int) -> int:
    out = 0
    for z in iter_bits(G.circles[c]):
        out |= G.with_gnarl[z]
    return out


def check_st2(G: CircleGeometry, *, literal: bool = False) -> Verdict:
    """For x off C, at most one circle C' through x and the gnarl of C has its
    gnarl on C and different from the gnarl of C.

    With ``literal=True`` the gnarl of C' may equal that of C; the circle with
    that gnarl through x then always counts as well, so the literal form fails
    on every geometry satisfying [ST1].
    """
    name = "ST2-literal" if literal else "ST2"
    n = 0
    allp = (1 << G.n_points) - 1
    for c in range(G.n_circles):
        g = G.gnarl[c]
        on = _gnarls_on(G, c)
        if not literal:
            on &= ~G.with_gnarl[g]
        for x in iter_bits(allp & ~G.circles[c]):
            n += 1
            hits = G.through[x] & G.through[g] & on
            if hits.bit_count() > 1:
                return _bad(name, n, circle=c, x=x, circles=bits_to_list(hits))
    return _ok(name, n)


def _tr_instances(G: CircleGeometry):
    """Per circle C: the ordered pairs (x, y) and the circles D for [TR]."""
    out = []
    for c in range(G.n_circles):
        g = G.gnarl[c]
        rest = [p for p in iter_bits(G.circles[c]) if p != g]
        pairs = [(x, y) for x in rest for y in rest if x != y]
        ds = [d for d in iter_bits(G.through[g]) if G.gnarl[d] != g]
        out.append((pairs, ds))
    return out


def _tr_prefix(G: CircleGeometry, c: int, x: int, d: int):
    """The part of a [TR] instance not depending on y: pairs (E, E* & E-free data)."""
    g = G.gnarl[c]
    bc, bd = G.circles[c], G.circles[d]
    tg = G.touch_at[c].get(g, 0)
    out = []
    for e in iter_bits(G.through[x] & G.through[g] & ~(1 << c)):
        inter = G.circles[e] & bd
        if inter.bit_count() != 2 or not inter >> g & 1:
            continue
        z = lowest_bit(inter & ~(1 << g))
        if bc >> z & 1:
            continue
        out.append((e, tg & G.through[z]))
    return out


def tr_instance(G: CircleGeometry, c: int, x: int, y: int, d: int, prefix=None) -> Optional[dict]:
    """Evaluate one [TR] instance; a dict describes the failure, None is a pass.

    E ranges over circles other than C through x and the gnarl g of C that
    meet D in exactly {g, z}. E* is the circle through z touching C at g,
    E** the circle through y touching E at g. Instances with z on C have no
    E* and contribute nothing. The union of all E* & E** must lie in one
    circle through g.
    """
    g = G.gnarl[c]
    if prefix is None:
        prefix = _tr_prefix(G, c, x, d)
    union = 0
    ty = G.through[y]
    for e, e1 in prefix:
        e2 = G.touch_at[e].get(g, 0) & ty
        if e1.bit_count() != 1 or e2.bit_count() != 1:
            return {"circle": c, "x": x, "y": y, "D": d, "E": e, "reason": "E* or E** not unique",
                    "E*": bits_to_list(e1), "E**": bits_to_list(e2)}
        union |= G.circles[lowest_bit(e1)] & G.circles[lowest_bit(e2)]
    if not union:
        return None
    common = G.through[g]
    for p in iter_bits(union):
        common &= G.through[p]
    if common:
        return None
    return {"circle": c, "x": x, "y": y, "D": d, "E": [e for e, _ in prefix], "union": bits_to_list(union),
            "reason": "no circle through the gnarl contains the union"}


def check_tr(G: CircleGeometry, *, budget: Optional[int] = None, seed: int = 0) -> Verdict:
    inst = _tr_instances(G)
    sizes = [len(p) * len(d) for p, d in inst]
    total = sum(sizes)

    starts = list(accumulate(sizes, initial=0))

    def decode(k):
        c = bisect_right(starts, k) - 1
        pairs, ds = inst[c]
        i, j = divmod(k - starts[c], len(ds))
        return c, pairs[i][0], pairs[i][1], ds[j]

    cache: dict = {}

    def run(c, x, y, d):
        key = (c, x, d)
        if key not in cache:
            if cache and next(iter(cache))[0] != c:
                cache.clear()
            cache[key] = _tr_prefix(G, c, x, d)
        return tr_instance(G, c, x, y, d, cache[key])

    if budget is None or total <= budget:
        n = 0
        for c, (pairs, ds) in enumerate(inst):
            for x, y in pairs:
                for d in ds:
                    n += 1
                    w = run(c, x, y, d)
                    if w is not None:
                        return _bad("TR", n, **w)
        return _ok("TR", n)
    rng = random.Random(seed)
    samples = sorted(rng.sample(range(total), budget))
    for k in samples:
        w = run(*decode(k))
        if w is not None:
            return _bad("TR", budget, exhaustive=False, **w)
    return _ok("TR", budget, exhaustive=False, population=total)


def f_instance(G: CircleGeometry, x: int, x1: int, x2: int, x3: int, y: int) -> bool:
    """False exactly when (x, x1, x2, x3, y) violates [F]."""
    cc = G.cocircular
    if not (cc(x, x1, x2) and cc(x, x1, x3) and cc(x, x2, x3)) or cc(x, x1, x2, x3):
        return True
    if not (cc(y, x, x1) and cc(y, x, x2)) or cc(y, x, x1, x2):
        return True
    return cc(y, x, x3)


def check_f(G: CircleGeometry, *, budget: Optional[int] = None, seed: int = 0) -> Verdict:
    """[F] over ordered 5-tuples of distinct points (x, x1, x2, x3, y)."""
    n = G.n_points
    total = n * (n - 1) * (n - 2) * (n - 3) * (n - 4) if n >= 5 else 0
    if budget is None or total <= budget:
        k = 0
        pts = range(n)
        for x in pts:
            for x1 in pts:
                if x1 == x:
                    continue
                for x2 in pts:
                    if x2 in (x, x1) or not G.cocircular(x, x1, x2):
                        k += (n - 3) * (n - 4)
                        continue
                    for x3 in pts:
                        if x3 in (x, x1, x2):
                            continue
                        for y in pts:
                            if y in (x, x1, x2, x3):
                                continue
                            k += 1
                            if not f_instance(G, x, x1, x2, x3, y):
                                return _bad("F", k, x=x, x1=x1, x2=x2, x3=x3, y=y)
        return _ok("F", total)
    rng = random.Random(seed)
    for _ in range(budget):
        x, x1, x2, x3, y = rng.sample(range(n), 5)
        if not f_instance(G, x, x1, x2, x3, y):
            return _bad("F", budget, exhaustive=False, x=x, x1=x1, x2=x2, x3=x3, y=y)
    return _ok("F", budget, exhaustive=False, population=total)


AXIOMS: dict[str, Callable[..., Verdict]] = {
    "MP1": check_mp1,
    "MP1'": check_mp1_prime,
    "MP2": check_mp2,
    "CH1": check_ch1,
    "CH2": check_ch2,
    "ST1": check_st1,
    "ST2": check_st2,
    "TR": check_tr,
    "F": check_f,
}


def check_axiom(G: CircleGeometry, axiom: str, *, budget: Optional[int] = None, seed: int = 0) -> Verdict:
    key = axiom.upper().replace("PRIME", "'")
    if key not in AXIOMS:
        raise KeyError(f"unknown axiom {axiom!r}; choose from {', '.join(AXIOMS)}")
    fn = AXIOMS[key]
    if key in ("TR", "F"):
        return fn(G, budget=budget, seed=seed)
    return fn(G)


# ---------------------------------------------------------------------------
# lemmas about touching circles and gnarls
# ---------------------------------------------------------------------------

def check_touch_transitivity(G: CircleGeometry) -> Verdict:
    """C and E touching D at the same point x touch each other at x."""
    n = 0
    for d in range(G.n_circles):
        for x, t in G.touch_at[d].items():
            members = bits_to_list(t)
            for c in members:
                for e in members:
                    if c < e:
                        n += 1
                        if G.touch_point(c, e) != x:
                            return _bad("touch-transitivity", n, C=c, D=d, E=e, x=x)
    return _ok("touch-transitivity", n)


def check_gnarl_link(G: CircleGeometry) -> Verdict:
    """For x off C: exactly one D through x and the gnarl of C with gnarl on C, gnarl D != gnarl C."""
    n = 0
    allp = (1 << G.n_points) - 1
    for c in range(G.n_circles):
        g = G.gnarl[c]
        on = _gnarls_on(G, c) & ~G.with_gnarl[g]
        for x in iter_bits(allp & ~G.circles[c]):
            n += 1
            hits = G.through[x] & G.through[g] & on
            if hits.bit_count() != 1:
                return _bad("gnarl-link", n, circle=c, x=x, circles=bits_to_list(hits))
    return _ok("gnarl-link", n)


def check_gnarl_touch(G: CircleGeometry) -> Verdict:
    """C touching D at the gnarl of D has the same gnarl."""
    n = 0
    for c in range(G.n_circles):
        for d, p in G._touch_pairs[c].items():
            n += 1
            if p == G.gnarl[d] and G.gnarl[c] != G.gnarl[d]:
                return _bad("gnarl-touch", n, C=c, D=d, point=p)
    return _ok("gnarl-touch", n)


def check_lemmas(G: CircleGeometry) -> list[Verdict]:
    return [check_touch_transitivity(G), check_gnarl_link(G), check_gnarl_touch(G)]


# ---------------------------------------------------------------------------
# mutations
# ---------------------------------------------------------------------------

def _copy(G: CircleGeometry, circles, gnarl, kind: str) -> CircleGeometry:
    return CircleGeometry(G.n_points, list(circles), list(gnarl), point_labels=G.point_labels,
                          strict=False, meta={"mutation": kind})


def reassign_gnarl(G: CircleGeometry, c: int, p: int) -> CircleGeometry:
    if not G.circles[c] >> p & 1 or G.gnarl[c] == p:
        raise CircleGeometryError("new gnarl must be another point of the circle")
    g = list(G.gnarl)
    g[c] = p
    return _copy(G, G.circles, g, f"gnarl {c}->{p}")


def remove_flag(G: CircleGeometry, c: int, p: int) -> CircleGeometry:
    if not G.circles[c] >> p & 1 or G.gnarl[c] == p:
        raise CircleGeometryError("can only remove a non-gnarl point of the circle")
    cs = list(G.circles)
    cs[c] &= ~(1 << p)
    return _copy(G, cs, G.gnarl, f"remove {p} from {c}")


def add_flag(G: CircleGeometry, c: int, p: int) -> CircleGeometry:
    if G.circles[c] >> p & 1:
        raise CircleGeometryError("point already on the circle")
    cs = list(G.circles)
    cs[c] |= 1 << p
    return _copy(G, cs, G.gnarl, f"add {p} to {c}")


def single_mutations(G: CircleGeometry) -> list[tuple[str, int, int]]:
    """Every gnarl reassignment, non-gnarl flag removal and flag addition."""
    out = []
    for c in range(G.n_circles):
        for p in range(G.n_points):
            on = G.circles[c] >> p & 1
            if on and p != G.gnarl[c]:
                out.append(("gnarl", c, p))
                out.append(("remove", c, p))
            elif not on:
                out.append(("add", c, p))
    return out


def apply_mutation(G: CircleGeometry, m: tuple[str, int, int]) -> CircleGeometry:
    kind, c, p = m
    return {"gnarl": reassign_gnarl, "remove": remove_flag, "add": add_flag}[kind](G, c, p)


# ---------------------------------------------------------------------------
# "CG v1" text format
# ---------------------------------------------------------------------------

CG_HEADER = "# CG v1"


def dumps_cg(G: CircleGeometry) -> str:
    out = io.StringIO()
    out.write(CG_HEADER + "\n")
    for p in range(G.n_points):
        lab = f" {G.point_labels[p]}" if G.point_labels else ""
        out.write(f"point {p}{lab}\n")
    for c, bits in enumerate(G.circles):
        pts = " ".join(str(p) for p in iter_bits(bits))
        out.write(f"circle {c} {pts} gnarl {G.gnarl[c]}\n")
    return out.getvalue()


def loads_cg(text: str, *, strict: bool = True) -> CircleGeometry:
    points: dict[int, Optional[str]] = {}
    circles: dict[int, tuple[int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        try:
            if parts[0] == "point":
                if len(parts) not in (2, 3):
                    raise ParseError(lineno, "expected 'point <id> [label]'")
                pid = int(parts[1])
                if pid in points:
                    raise ParseError(lineno, f"duplicate point id {pid}")
                points[pid] = parts[2] if len(parts) == 3 else None
            elif parts[0] == "circle":
                if len(parts) < 5 or parts[-2] != "gnarl":
                    raise ParseError(lineno, "expected 'circle <id> <pid>... gnarl <pid>'")
                cid = int(parts[1])
                if cid in circles:
                    raise ParseError(lineno, f"duplicate circle id {cid}")
                bits = 0
                for t in parts[2:-2]:
                    bits |= 1 << int(t)
                circles[cid] = (bits, int(parts[-1]))
            else:
                raise ParseError(lineno, f"unknown record {parts[0]!r}")
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(lineno, f"bad integer in {s!r}") from None
    if sorted(points) != list(range(len(points))) or sorted(circles) != list(range(len(circles))):
        raise ParseError(0, "ids are not dense from 0")
    labels = [points[i] for i in range(len(points))]
    for c, (bits, g) in circles.items():
        if bits >> len(points):
            raise ParseError(0, f"circle {c} references an unknown point")
    try:
        return CircleGeometry(
            len(points), [circles[i][0] for i in range(len(circles))], [circles[i][1] for i in range(len(circles))],
            point_labels=labels if labels and all(l is not None for l in labels) else None, strict=strict)
    except CircleGeometryError as exc:
        raise ParseError(0, str(exc)) from None
