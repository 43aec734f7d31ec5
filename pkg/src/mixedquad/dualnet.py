"""Dual nets at regular points, (VY) and (LD), the planes Delta_{L,M}, theta maps.

A dual net is kept as bitsets over its own dense point ids: one bitset per
block and one per vertical line (parallel class). The completed linear space
adds a point ``inf`` on every vertical line.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .coordinates import CoordPoint, InfinityPerp, meet_infinity_perps
from .incidence import IncidenceError, IncidenceStructure, is_regular_point, perp_of, perp_plane
from .verdict import FAIL, PASS, PASS_ON_PATCH, Verdict, bits_to_list, iter_bits, lowest_bit

NONE = -1   # blocks that do not meet
SAME = -2   # a block against itself


@dataclass
class DualNet:
    n_points: int
    blocks: list[int]
    verticals: list[int]
    point_labels: list[str]
    block_labels: list[str]
    host_points: Optional[list[int]] = None
    base: Optional[int] = None
    vertical_host_lines: Optional[list[int]] = None
    exact: bool = True
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        vo = [-1] * self.n_points
        for v, bits in enumerate(self.verticals):
            for p in iter_bits(bits):
                if vo[p] != -1:
                    raise IncidenceError(f"net point {p} lies on two vertical lines")
                vo[p] = v
        if -1 in vo:
            raise IncidenceError(f"net point {vo.index(-1)} lies on no vertical line")
        self.vertical_of = vo

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    @cached_property
    def point_blocks(self) -> list[int]:
        pb = [0] * self.n_points
        for b, bits in enumerate(self.blocks):
            for p in iter_bits(bits):
                pb[p] |= 1 << b
        return pb

    @cached_property
    def meet(self) -> np.ndarray:
        """Block x block -> common net point, NONE, or SAME on the diagonal."""
        nb = self.n_blocks
        M = np.full((nb, nb), NONE, dtype=np.int32)
        for i in range(nb):
            bi = self.blocks[i]
            M[i, i] = SAME
            for j in range(i + 1, nb):
                c = bi & self.blocks[j]
                if c:
                    if c & (c - 1):
                        raise IncidenceError(f"blocks {i} and {j} share two points")
                    M[i, j] = M[j, i] = lowest_bit(c)
        return M

    @cached_property
    def join(self) -> np.ndarray:
        """Point x point -> the block through both, or NONE."""
        n = self.n_points
        J = np.full((n, n), NONE, dtype=np.int32)
        for b, bits in enumerate(self.blocks):
            pts = bits_to_list(bits)
            idx = np.array(pts)
            J[np.ix_(idx, idx)] = b
        np.fill_diagonal(J, NONE)
        return J

    def is_dual_affine(self) -> bool:
        """Every two blocks meet (the net is a dual affine plane)."""
        M = self.meet
        return bool((M != NONE).all())

    def net_axiom_violation(self) -> Optional[dict]:
        """A point z and block B (z off B) without exactly one point of B parallel to z."""
        reach = []
        for z in range(self.n_points):
            r = 1 << z
            for b in iter_bits(self.point_blocks[z]):
                r |= self.blocks[b]
            reach.append(r)
        for z in range(self.n_points):
            for b, bits in enumerate(self.blocks):
                if not bits >> z & 1:
                    par = bits & ~reach[z]
                    if par.bit_count() != 1:
                        return {"point": z, "block": b, "parallel": bits_to_list(par)}
        return None

    def parallel_classes(self) -> list[int]:
        """Parallel classes recomputed from the blocks alone."""
        reach = []
        for z in range(self.n_points):
            r = 1 << z
            for b in iter_bits(self.point_blocks[z]):
                r |= self.blocks[b]
            reach.append(r)
        allp = (1 << self.n_points) - 1
        classes = set()
        for z in range(self.n_points):
            classes.add((allp & ~reach[z]) | (1 << z))
        return sorted(classes)

    def completion(self) -> IncidenceStructure:
        """Add inf (id n_points) and the vertical lines; lines are blocks then verticals."""
        inf = 1 << self.n_points
        lines = list(self.blocks) + [v | inf for v in self.verticals]
        labels = list(self.point_labels) + ["inf"]
        llabels = list(self.block_labels) + [f"V{i}" for i in range(len(self.verticals))]
        return IncidenceStructure(self.n_points + 1, len(lines), lines, point_labels=labels,
                                  line_labels=llabels, name="completed-net")

    def vertical_through_block_meet(self, block: int, vertical: int) -> Optional[int]:
        c = self.blocks[block] & self.verticals[vertical]
        return lowest_bit(c) if c else None


def extract_dual_net(S: IncidenceStructure, x: int, *, assume_regular: bool = False) -> DualNet:
    if not assume_regular and not is_regular_point(S, x):
        raise IncidenceError(f"point {x} is not regular")
    key = ("dualnet", x)
    if key in S.cache:
        return S.cache[key]
    nx = S.nbrs[x]
    host = [p for p in iter_bits(nx) if p != x]
    local = {h: i for i, h in enumerate(host)}

    def to_local(bits):
        out = 0
        for h in iter_bits(bits):
            out |= 1 << local[h]
        return out

    seen = {}
    for y in iter_bits(S.opposite(x)):
        seen.setdefault(nx & S.nbrs[y], y)
    blocks = [to_local(b) for b in sorted(seen)]
    vlines = S.lines_of(x)
    verticals = [to_local(S.line_points[l] & ~(1 << x)) for l in vlines]
    net = DualNet(
        len(host), blocks, verticals,
        point_labels=[S.point_label(h) for h in host],
        block_labels=[f"{{{S.point_label(x)},{S.point_label(seen[b])}}}^perp" for b in sorted(seen)],
        host_points=host, base=x, vertical_host_lines=vlines,
    )
    S.cache[key] = net
    return net


def vertical_of_line(net: DualNet, line: int) -> int:
    """Vertical id of a host line through the net's base point."""
    if net.vertical_host_lines is None or line not in net.vertical_host_lines:
        raise IncidenceError(f"line {line} is not incident with the base point")
    return net.vertical_host_lines.index(line)


# ---------------------------------------------------------------------------
# (VY)
# ---------------------------------------------------------------------------

def _space_meet(net: DualNet, include_vertical: bool) -> tuple[np.ndarray, list[str]]:
    """Meet matrix of the lines quantified over; point id n_points stands for inf."""
    M = net.meet
    labels = list(net.block_labels)
    if not include_vertical:
        return M, labels
    nb, nv = net.n_blocks, len(net.verticals)
    inf = net.n_points
    big = np.full((nb + nv, nb + nv), NONE, dtype=np.int32)
    big[:nb, :nb] = M
    for v in range(nv):
        for b in range(nb):
            p = net.vertical_through_block_meet(b, v)
            if p is not None:
                big[b, nb + v] = big[nb + v, b] = p
        for w in range(nv):
            big[nb + v, nb + w] = SAME if v == w else inf
    labels += [f"V{v}" for v in range(nv)]
    return big, labels


def triangles(M: np.ndarray) -> np.ndarray:
    """All i<j<k whose pairwise meets exist and are three distinct points."""
    n = M.shape[0]
    out = []
    for i in range(n):
        row = M[i]
        js = np.nonzero(row[i + 1:] >= 0)[0] + i + 1
        if len(js) < 2:
            continue
        sub = M[np.ix_(js, js)]
        pi = row[js]
        a, b = np.nonzero(np.triu(sub >= 0, 1))
        ok = (pi[a] != pi[b]) & (sub[a, b] != pi[a]) & (sub[a, b] != pi[b])
        if ok.any():
            out.append(np.stack([np.full(ok.sum(), i), js[a[ok]], js[b[ok]]], axis=1))
    if not out:
        return np.zeros((0, 3), dtype=np.int64)
    return np.concatenate(out)


def _vy_violations(M: np.ndarray, tri: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Boolean mask over paired (triangle, line) rows."""
    X = np.stack([M[d, tri[:, 0]], M[d, tri[:, 1]], M[d, tri[:, 2]]], axis=1)
    not_side = (X != SAME).all(axis=1)
    met = X >= 0
    two = met.sum(axis=1) == 2
    x0, x1, x2 = X[:, 0], X[:, 1], X[:, 2]
    m0, m1, m2 = met[:, 0], met[:, 1], met[:, 2]
    distinct = (m0 & m1 & (x0 != x1)) | (m0 & m2 & (x0 != x2)) | (m1 & m2 & (x1 != x2))
    return not_side & two & distinct


def check_vy(net: DualNet, *, include_vertical: bool = False, budget: Optional[int] = None,
             seed: int = 0, chunk: int = 1 << 20) -> Verdict:
    """(VY): a line meeting two sides of a triangle in distinct points meets the third.

    By default triangles and lines range over the blocks; ``include_vertical``
    also admits the vertical lines of the completion (inf may then be a vertex).
    """
    name = "VY+vertical" if include_vertical else "VY"
    M, labels = _space_meet(net, include_vertical)
    tri = triangles(M)
    nL = M.shape[0]
    total = len(tri) * nL
    exhaustive = budget is None or total <= budget
    if exhaustive:
        flat_iter = (np.arange(s, min(s + chunk, total), dtype=np.int64) for s in range(0, total, chunk))
        examined = total
    else:
        rng = np.random.default_rng(seed)
        sample = np.sort(rng.choice(total, size=budget, replace=False) if total < 50 * budget
                         else rng.integers(0, total, size=budget))
        flat_iter = (sample[s:s + chunk] for s in range(0, budget, chunk))
        examined = budget
    for flat in flat_iter:
        t, d = np.divmod(flat, nL)
        bad = _vy_violations(M, tri[t], d)
        if bad.any():
            k = int(np.argmax(bad))
            ti, di = int(t[k]), int(d[k])
            sides = [int(s) for s in tri[ti]]
            meets = [int(M[di, s]) for s in sides]
            missed = sides[[m < 0 for m in meets].index(True)]
            witness = {
                "triangle": sides, "triangle_labels": [labels[s] for s in sides],
                "vertices": [int(M[sides[0], sides[1]]), int(M[sides[0], sides[2]]), int(M[sides[1], sides[2]])],
                "line": di, "line_label": labels[di],
                "meets": meets, "missed_side": missed,
            }
            pair = net.detail.get("meets", {}).get((min(di, missed), max(di, missed)))
            if pair is not None:
                witness["missed_meet"] = pair
            return Verdict(name, FAIL, witness, tuples=int(flat[k]) + 1 if exhaustive else examined,
                           exhaustive=exhaustive)
    status = PASS if net.exact else PASS_ON_PATCH
    return Verdict(name, status, tuples=examined, exhaustive=exhaustive,
                   detail={"triangles": len(tri), "lines": nL})


# ---------------------------------------------------------------------------
# (LD)
# ---------------------------------------------------------------------------

@dataclass
class LDTriangles:
    """Triangles with vertices on three distinct vertical lines, grouped by those lines."""

    groups: list[tuple[int, int, int]]
    vertices: list[np.ndarray]   # per group: (n, 3) vertex ids ordered by vertical
    sides: list[np.ndarray]      # per group: (n, 3) side opposite each vertex


def ld_triangles(net: DualNet) -> LDTriangles:
    J = net.join
    nv = len(net.verticals)
    vpts = [np.array(bits_to_list(v), dtype=np.int64) for v in net.verticals]
    groups, verts, sides = [], [], []
    for va in range(nv):
        for vb in range(va + 1, nv):
            for vc in range(vb + 1, nv):
                A, B, C = np.meshgrid(vpts[va], vpts[vb], vpts[vc], indexing="ij")
                a, b, c = A.ravel(), B.ravel(), C.ravel()
                sa, sb, sc = J[b, c], J[a, c], J[a, b]
                ok = (sa >= 0) & (sb >= 0) & (sc >= 0) & (sa != sb) & (sa != sc) & (sb != sc)
                if ok.sum() < 2:
                    continue
                groups.append((va, vb, vc))
                verts.append(np.stack([a[ok], b[ok], c[ok]], axis=1))
                sides.append(np.stack([sa[ok], sb[ok], sc[ok]], axis=1))
    return LDTriangles(groups, verts, sides)


def _ld_bad(net_vert: np.ndarray, M: np.ndarray, V1: np.ndarray, V2: np.ndarray,
            S1: np.ndarray, S2: np.ndarray, vertical: Optional[int]) -> np.ndarray:
    m = np.stack([M[S1[:, 0], S2[:, 0]], M[S1[:, 1], S2[:, 1]], M[S1[:, 2], S2[:, 2]]], axis=1)
    distinct_sides = (m != SAME).all(axis=1) & (V1 != V2).all(axis=1)
    v = np.where(m >= 0, net_vert[np.clip(m, 0, None)], np.array([-10, -11, -12]))
    e01 = (v[:, 0] == v[:, 1]) & (v[:, 2] != v[:, 0])
    e02 = (v[:, 0] == v[:, 2]) & (v[:, 1] != v[:, 0])
    e12 = (v[:, 1] == v[:, 2]) & (v[:, 0] != v[:, 1])
    if vertical is not None:
        e01 &= v[:, 0] == vertical
        e02 &= v[:, 0] == vertical
        e12 &= v[:, 1] == vertical
    return distinct_sides & (e01 | e02 | e12)


_TRIU_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _triu(n: int):
    if n not in _TRIU_CACHE:
        _TRIU_CACHE[n] = np.triu_indices(n, 1)
    return _TRIU_CACHE[n]


def check_ld(net: DualNet, vertical: Optional[int] = None, *, budget: Optional[int] = None,
             seed: int = 0, chunk: int = 1 << 20) -> Verdict:
    """(LD) from inf, for one vertical line or (vertical=None) for every vertical line.

    Two triangles are in perspective from inf when their vertices correspond
    along three distinct vertical lines. Corresponding vertices must differ,
    as in Desargues' configuration; a shared vertex makes two pairs of sides
    meet there trivially. A violation is a pair whose corresponding sides
    meet on V twice but not a third time.
    """
    name = "LD" if vertical is None else f"LD@V{vertical}"
    tris = ld_triangles(net)
    M = net.meet
    vert = np.array(net.vertical_of, dtype=np.int64)
    sizes = np.array([len(v) for v in tris.vertices], dtype=np.int64)
    pairs = sizes * (sizes - 1) // 2
    total = int(pairs.sum())
    cum = np.concatenate([[0], np.cumsum(pairs)])
    exhaustive = budget is None or total <= budget
    if exhaustive:
        idx_iter = (np.arange(s, min(s + chunk, total), dtype=np.int64) for s in range(0, total, chunk))
        examined = total
    else:
        rng = np.random.default_rng(seed)
        sample = np.sort(rng.integers(0, total, size=budget))
        idx_iter = (sample[s:s + chunk] for s in range(0, budget, chunk))
        examined = budget
    for flat in idx_iter:
        g = np.searchsorted(cum, flat, side="right") - 1
        for gi in np.unique(g):
            sel = flat[g == gi]
            iu, ju = _triu(int(sizes[gi]))
            r = sel - cum[gi]
            i, j = iu[r], ju[r]
            S = tris.sides[gi]
            P = tris.vertices[gi]
            bad = _ld_bad(vert, M, P[i], P[j], S[i], S[j], vertical)
            if bad.any():
                k = int(np.argmax(bad))
                T1, T2 = tris.vertices[gi][i[k]], tris.vertices[gi][j[k]]
                s1, s2 = S[i[k]], S[j[k]]
                meets = [int(M[s1[c], s2[c]]) for c in range(3)]
                witness = {
                    "verticals": list(tris.groups[gi]),
                    "triangle1": [int(p) for p in T1], "triangle2": [int(p) for p in T2],
                    "sides1": [int(s) for s in s1], "sides2": [int(s) for s in s2],
                    "side_meets": meets,
                    "meet_verticals": [net.vertical_of[m] if m >= 0 else None for m in meets],
                    "labels1": [net.point_labels[p] for p in T1],
                    "labels2": [net.point_labels[p] for p in T2],
                }
                return Verdict(name, FAIL, witness, tuples=examined, exhaustive=exhaustive)
    status = PASS if net.exact else PASS_ON_PATCH
    return Verdict(name, status, tuples=examined, exhaustive=exhaustive,
                   detail={"triangle_groups": len(tris.groups)})


# ---------------------------------------------------------------------------
# Delta_{L,M}
# ---------------------------------------------------------------------------

class DeltaError(IncidenceError):
    def __init__(self, message: str, witness: Optional[dict] = None):
        super().__init__(message)
        self.witness = witness


@dataclass
class DeltaPlane:
    plane: IncidenceStructure
    points: list[int]        # net point ids; the last plane point is inf
    blocks: list[int]        # net block ids in B*, followed by the verticals
    n_star: int


def build_delta_plane(net: DualNet, L: int, M: int, *, vy: Optional[Verdict] = None) -> DeltaPlane:
    """Blocks meeting L and M in distinct points, blocks through L^M meeting one
    of those, and all vertical lines, on the points they cover plus inf."""
    if vy is None:
        vy = check_vy(net)
    if not vy.passed:
        raise DeltaError("the net does not satisfy (VY)", vy.witness)
    mt = net.meet
    x = int(mt[L, M])
    if L == M or x < 0:
        raise DeltaError(f"blocks {L} and {M} do not meet")
    nb = net.n_blocks
    crossing = [K for K in range(nb) if mt[K, L] >= 0 and mt[K, M] >= 0 and mt[K, L] != mt[K, M]]
    through = [K for K in range(nb) if net.blocks[K] >> x & 1 and any(mt[K, C] >= 0 for C in crossing)]
    star = sorted(set(crossing) | set(through))
    cover = 0
    for K in star:
        cover |= net.blocks[K]
    pts = bits_to_list(cover)
    local = {p: i for i, p in enumerate(pts)}
    inf = len(pts)

    def loc(bits):
        out = 0
        for p in iter_bits(bits & cover):
            out |= 1 << local[p]
        return out

    lines = [loc(net.blocks[K]) for K in star] + [loc(v) | (1 << inf) for v in net.verticals]
    plane = IncidenceStructure(len(pts) + 1, len(lines), lines,
                               point_labels=[net.point_labels[p] for p in pts] + ["inf"],
                               name=f"Delta({L},{M})")
    return DeltaPlane(plane, pts, star + [-(v + 1) for v in range(len(net.verticals))], len(star))


# ---------------------------------------------------------------------------
# theta maps between perp-planes
# ---------------------------------------------------------------------------

@dataclass
class ThetaIso:
    """theta_{p,q}: points of the perp-plane at p -> blocks of the perp-plane at q, and back."""

    p: int
    q: int
    point_to_block: dict[int, int]   # host point in p^perp -> host-point bitset of a block at q
    block_to_point: dict[int, int]   # block of Gamma_p (host bitset) -> host point in q^perp


def theta_iso(S: IncidenceStructure, p: int, q: int, *, verify: bool = True) -> ThetaIso:
    if S.collinear(p, q):
        raise IncidenceError(f"points {p} and {q} are not opposite")
    nbrs = S.nbrs
    nq = nbrs[q]
    pp = perp_plane(S, p)
    p2b = {x: nbrs[q] & nbrs[x] for x in pp.host_points}
    b2p = {}
    for blk in _host_blocks(S, pp):
        cand = perp_of(S, blk) & nq
        if cand.bit_count() != 1:
            raise IncidenceError(f"block of the plane at {p} has {cand.bit_count()} images at {q}")
        b2p[blk] = lowest_bit(cand)
    iso = ThetaIso(p, q, p2b, b2p)
    if verify:
        verify_theta(S, iso)
    return iso


def _host_blocks(S: IncidenceStructure, pp) -> list[int]:
    out = []
    for bits in pp.plane.line_points:
        h = 0
        for i in iter_bits(bits):
            h |= 1 << pp.host_points[i]
        out.append(h)
    return out


def verify_theta(S: IncidenceStructure, iso: ThetaIso):
    """Bijective onto the blocks/points at q, and x in alpha <=> alpha' in x'."""
    target_blocks = set(_host_blocks(S, perp_plane(S, iso.q)))
    images = set(iso.point_to_block.values())
    if images != target_blocks:
        raise IncidenceError("theta does not map points onto the blocks at q")
    if sorted(iso.block_to_point.values()) != bits_to_list(S.nbrs[iso.q]):
        raise IncidenceError("theta does not map blocks onto the points at q")
    for blk, y in iso.block_to_point.items():
        for x, img in iso.point_to_block.items():
            if bool(blk >> x & 1) != bool(img >> y & 1):
                raise IncidenceError(f"theta breaks incidence at point {x}")


def phi_map(S: IncidenceStructure, p1: int, p3: int, p2: int) -> dict[int, int]:
    """theta_{p1,p3} followed by theta_{p3,p2}: points at p1 -> points at p2."""
    t13 = theta_iso(S, p1, p3)
    t32 = theta_iso(S, p3, p2)
    return {x: t32.block_to_point[blk] for x, blk in t13.point_to_block.items()}


def tau_map(S: IncidenceStructure, p1: int, p2: int, p3: int, p3b: int) -> dict[int, int]:
    """phi^{-1} phi': a collineation of the perp-plane at p2."""
    phi = phi_map(S, p1, p3, p2)
    phi_b = phi_map(S, p1, p3b, p2)
    inv = {v: k for k, v in phi.items()}
    return {y: phi_b[inv[y]] for y in inv}


def is_plane_collineation(S: IncidenceStructure, p: int, mapping: dict[int, int]) -> bool:
    """Does a point map of p^perp send the blocks of the perp-plane at p to blocks?"""
    blocks = set(_host_blocks(S, perp_plane(S, p)))
    if sorted(mapping) != sorted(mapping.values()):
        return False
    for blk in blocks:
        img = 0
        for x in iter_bits(blk):
            img |= 1 << mapping[x]
        if img not in blocks:
            return False
    return True


# ---------------------------------------------------------------------------
# finite patches of the dual net at (inf) of a mixed quadrangle
# ---------------------------------------------------------------------------

def mixed_net_patch(desc, perps: Sequence[InfinityPerp]) -> DualNet:
    """The listed perps through (inf) with all their pairwise intersections.

    Every intersection is solved exactly, so meets inside the patch are the
    meets in the full quadrangle; quantifiers still range over the patch only.
    """
    F = desc.field
    perps = list(perps)
    if len(set(perps)) != len(perps):
        raise ValueError("repeated perp")
    points: list = []
    index: dict = {}

    def add(pt):
        if pt not in index:
            index[pt] = len(points)
            points.append(pt)
        return index[pt]

    for T in perps:
        add(CoordPoint((T.a,)))
    meets = {}
    for i, T in enumerate(perps):
        for j in range(i + 1, len(perps)):
            m = meet_infinity_perps(desc, T, perps[j])
            if m.point is not None:
                add(m.point)
            meets[(i, j)] = {
                "point": m.point.label(F) if m.point is not None else None,
                "x": F.pretty(m.x) if m.x is not None else None,
                "x_in_Lprime": m.x_in_Lprime,
            }
    blocks = []
    for T in perps:
        bits = 0
        for k, pt in enumerate(points):
            if T.contains(pt, desc):
                bits |= 1 << k
        blocks.append(bits)
    vkeys: dict = {}
    vbits: list[int] = []
    for k, pt in enumerate(points):
        key = "inf" if len(pt.coords) == 1 else pt.coords[0]
        if key not in vkeys:
            vkeys[key] = len(vbits)
            vbits.append(0)
        vbits[vkeys[key]] |= 1 << k
    return DualNet(
        len(points), blocks, vbits,
        point_labels=[pt.label(F) for pt in points],
        block_labels=[f"T[{F.pretty(T.a)};{F.pretty(T.a2)}]" for T in perps],
        exact=False,
        detail={"meets": meets},
    )


def net_fragment(net: DualNet, line_ids: Sequence[int]) -> IncidenceStructure:
    """The listed lines of the completed net (ids past the blocks are verticals)
    with every point on them, as a standalone incidence structure."""
    nb = net.n_blocks
    sets, labels = [], []
    for i in dict.fromkeys(line_ids):
        if i < nb:
            sets.append(net.blocks[i])
            labels.append(net.block_labels[i] if net.block_labels else f"B{i}")
        else:
            sets.append(net.verticals[i - nb])
            labels.append(f"V{i - nb}")
    cover = 0
    for b in sets:
        cover |= b
    pts = bits_to_list(cover)
    local = {p: k for k, p in enumerate(pts)}
    lp = []
    for b in sets:
        bits = 0
        for p in iter_bits(b):
            bits |= 1 << local[p]
        lp.append(bits)
    plabels = [net.point_labels[p] if net.point_labels else str(p) for p in pts]
    return IncidenceStructure(len(pts), len(lp), lp, point_labels=plabels, line_labels=labels,
                              name="counterexample")


def witness_lines(witness: dict) -> list[int]:
    """Line ids named in a (VY) or (LD) witness."""
    out = list(witness.get("triangle", []))
    if "line" in witness:
        out.append(witness["line"])
    out += witness.get("sides1", []) + witness.get("sides2", [])
    return out
