"""Collineations, polarities, symmetries about lines, ovoids."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .algebra import tits_endo
from .coordinates import CoordLine, CoordPoint, SymplecticQuadrangle
from .dualnet import check_ld, extract_dual_net, vertical_of_line
from .incidence import IncidenceError, IncidenceStructure, is_regular_line, span_bits, verify_gq
from .verdict import Verdict, bits_to_list, iter_bits, lowest_bit


class SymmetryError(RuntimeError):
    def __init__(self, message: str, witness: Optional[dict] = None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class Collineation:
    points: tuple[int, ...]
    lines: tuple[int, ...]

    @classmethod
    def identity(cls, S: IncidenceStructure) -> "Collineation":
        return cls(tuple(range(S.n_points)), tuple(range(S.n_lines)))

    def __mul__(self, other: "Collineation") -> "Collineation":
        """Apply self first, then other."""
        return Collineation(tuple(other.points[i] for i in self.points),
                            tuple(other.lines[i] for i in self.lines))

    def inverse(self) -> "Collineation":
        p = [0] * len(self.points)
        for i, j in enumerate(self.points):
            p[j] = i
        l = [0] * len(self.lines)
        for i, j in enumerate(self.lines):
            l[j] = i
        return Collineation(tuple(p), tuple(l))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.points)) and all(i == j for i, j in enumerate(self.lines))


def collineation_violation(S: IncidenceStructure, g: Collineation) -> Optional[dict]:
    if sorted(g.points) != list(range(S.n_points)) or sorted(g.lines) != list(range(S.n_lines)):
        return {"reason": "not a permutation"}
    for l in range(S.n_lines):
        img = 0
        for p in iter_bits(S.line_points[l]):
            img |= 1 << g.points[p]
        if img != S.line_points[g.lines[l]]:
            return {"reason": "line image mismatch", "line": l}
    return None


def is_collineation(S: IncidenceStructure, g: Collineation) -> bool:
    return collineation_violation(S, g) is None


def lines_from_points(S: IncidenceStructure, pmap: Sequence[int]) -> Optional[tuple[int, ...]]:
    out = []
    for l in range(S.n_lines):
        pts = bits_to_list(S.line_points[l])
        common = S.point_lines[pmap[pts[0]]] & S.point_lines[pmap[pts[1]]]
        if not common:
            return None
        out.append(lowest_bit(common))
    return tuple(out)


# ---------------------------------------------------------------------------
# direct search for collinearity-preserving point permutations
# ---------------------------------------------------------------------------

class _Search:
    """Backtracking over point images with boolean domain rows and forward checking."""

    def __init__(self, S: IncidenceStructure):
        self.S = S
        n = S.n_points
        A = np.zeros((n, n), dtype=bool)
        for p in range(n):
            for q in iter_bits(S.nbrs[p]):
                A[p, q] = True
        np.fill_diagonal(A, False)
        self.A = A

    def assign(self, D: np.ndarray, z: int, w: int) -> bool:
        A = self.A
        col = A[z]
        opp = ~col
        opp[z] = False
        D[col] &= A[w]
        D[opp] &= ~A[w]
        D[:, w] = False
        D[z] = False
        D[z, w] = True
        return bool(D.any(axis=1).all())

    def propagate(self, D: np.ndarray, done: np.ndarray) -> bool:
        while True:
            counts = D.sum(axis=1)
            if (counts == 0).any():
                return False
            forced = np.nonzero((counts == 1) & ~done)[0]
            if len(forced) == 0:
                return True
            for z in forced:
                w = int(np.argmax(D[z]))
                done[z] = True
                if not self.assign(D, int(z), w):
                    return False

    def solutions(self, D: np.ndarray, limit: Optional[int] = None) -> Iterator[list[int]]:
        done = np.zeros(D.shape[0], dtype=bool)
        found = 0
        stack = [(D.copy(), done)]
        while stack:
            D, done = stack.pop()
            if not self.propagate(D, done):
                continue
            counts = D.sum(axis=1)
            if (counts == 1).all():
                pm = [int(np.argmax(r)) for r in D]
                if len(set(pm)) == len(pm):
                    yield pm
                    found += 1
                    if limit is not None and found >= limit:
                        return
                continue
            open_rows = np.where(counts > 1, counts, np.iinfo(np.int64).max)
            z = int(np.argmin(open_rows))
            for w in reversed(np.nonzero(D[z])[0].tolist()):
                D2, d2 = D.copy(), done.copy()
                d2[z] = True
                if self.assign(D2, z, w):
                    stack.append((D2, d2))


def _axis_domains(S: IncidenceStructure, L: int) -> np.ndarray:
    """Fix L pointwise and every line meeting L: each point off L stays on its
    line towards L."""
    n = S.n_points
    D = np.zeros((n, n), dtype=bool)
    onL = S.line_points[L]
    for z in range(n):
        if onL >> z & 1:
            D[z, z] = True
            continue
        K = lowest_bit(S.point_lines[z] & _lines_meeting(S, L))
        for w in iter_bits(S.line_points[K] & ~onL):
            D[z, w] = True
    return D


def _lines_meeting(S: IncidenceStructure, L: int) -> int:
    out = 0
    for p in iter_bits(S.line_points[L]):
        out |= S.point_lines[p]
    return out


def search_symmetries(S: IncidenceStructure, L: int, *, send: Optional[tuple[int, int]] = None,
                      limit: Optional[int] = None) -> list[Collineation]:
    """All collineations fixing every line meeting L (optionally with a point image fixed)."""
    D = _axis_domains(S, L)
    srch = _Search(S)
    if send is not None:
        a, b = send
        if not D[a, b]:
            return []
        if not srch.assign(D, a, b):
            return []
    out = []
    for pm in srch.solutions(D, limit):
        lm = lines_from_points(S, pm)
        if lm is None:
            continue
        g = Collineation(tuple(pm), lm)
        if is_collineation(S, g):
            out.append(g)
    return out


def search_line_symmetry(S: IncidenceStructure, L: int, M: int, M2: int) -> Optional[Collineation]:
    """A collineation fixing every line meeting L and mapping line M to M2."""
    D = _axis_domains(S, L)
    srch = _Search(S)
    meeting = _lines_meeting(S, L)
    for m in iter_bits(S.line_points[M]):
        K = lowest_bit(S.point_lines[m] & meeting)
        tgt = S.line_points[K] & S.line_points[M2]
        if not tgt:
            return None
        w = lowest_bit(tgt)
        if not D[m, w] or not srch.assign(D, m, w):
            return None
    for pm in srch.solutions(D, limit=1):
        lm = lines_from_points(S, pm)
        if lm is not None:
            g = Collineation(tuple(pm), lm)
            if is_collineation(S, g):
                return g
    return None


def is_axis_of_symmetry(S: IncidenceStructure, L: int, *, witnesses: int = 2) -> bool:
    """Search-based test, independent of (LD): for ``witnesses`` lines M opposite L,
    every line of the span {L,M}^perpperp other than L is reached from M."""
    if not is_regular_line(S, L):
        raise IncidenceError(f"line {L} is not regular")
    D = S.dual
    opposite = bits_to_list(D.opposite(L))
    for M in opposite[:witnesses]:
        sp = span_bits(D, L, M)
        for M2 in iter_bits(sp & ~(1 << L)):
            if search_line_symmetry(S, L, M, M2) is None:
                return False
    return True


def is_center_of_symmetry(S: IncidenceStructure, x: int, *, witnesses: int = 2) -> bool:
    return is_axis_of_symmetry(S.dual, x, witnesses=witnesses)


# ---------------------------------------------------------------------------
# constructive symmetry from (LD)
# ---------------------------------------------------------------------------

def build_symmetry(S: IncidenceStructure, L: int, p: int, a: int, a2: int, *,
                   ld: Optional[Verdict] = None) -> Collineation:
    """The collineation fixing L pointwise and every line meeting L, with a -> a2.

    Points collinear with p are transported along blocks of the dual net at p
    (q goes to the meet of its line with the block through a2 and the point
    where the block through a and q meets L). Lines opposite L go to the line
    of the span {L,N}^perpperp through the image of their point nearest p, and
    the remaining points follow from their lines.
    """
    if not S.incident(p, L):
        raise IncidenceError("p is not on L")
    if a == p or a2 == p:
        raise IncidenceError("a and a2 must differ from p")
    M = S.line_through(a, a2) if a != a2 else None
    if a != a2 and (M is None or not S.incident(p, M)):
        raise IncidenceError("a and a2 are not on a common line through p")
    if S.incident(a, L):
        raise IncidenceError("a must not lie on L")
    if S.point_lines[p].bit_count() < 4:
        found = search_symmetries(S, L, send=(a, a2), limit=1)
        if not found:
            raise SymmetryError("no symmetry found by direct search", {"line": L, "from": a, "to": a2})
        return found[0]

    net = extract_dual_net(S, p)
    vL = vertical_of_line(net, L)
    if ld is None:
        ld = check_ld(net, vL)
    if not ld.passed:
        raise SymmetryError("the dual net fails (LD) at the vertical of L", ld.witness)

    host = net.host_points
    local = {h: i for i, h in enumerate(host)}
    J = net.join
    onL = S.line_points[L]
    Lbits = net.verticals[vL]

    def via(u, u_img, v):
        """Transport u -> v in the net: u, v on different verticals, both off L."""
        blk = J[local[u], local[v]]
        b = lowest_bit(net.blocks[blk] & Lbits)
        blk2 = J[local[u_img], b]
        if blk2 < 0:
            raise SymmetryError("transport block missing", {"from": u, "to": v})
        hit = net.blocks[blk2] & net.verticals[net.vertical_of[local[v]]]
        return host[lowest_bit(hit)]

    img = {}
    for z in iter_bits(onL):
        img[z] = z
    img[a] = a2
    off = [h for h in host if not onL >> h & 1]
    for v in off:
        if v == a:
            continue
        if net.vertical_of[local[v]] != net.vertical_of[local[a]]:
            img[v] = via(a, a2, v)
    first = next(v for v in off if net.vertical_of[local[v]] != net.vertical_of[local[a]])
    for v in off:
        if v not in img:
            img[v] = via(first, img[first], v)
    # well-definedness: every transport u -> v agrees with the chosen image
    for u in off:
        for v in off:
            if net.vertical_of[local[u]] != net.vertical_of[local[v]]:
                if via(u, img[u], v) != img[v]:
                    raise SymmetryError("transport is not well defined", {"from": u, "to": v})

    D = S.dual
    meeting = _lines_meeting(S, L)
    limg = {}
    for N in iter_bits(meeting):
        limg[N] = N
    for N in iter_bits(S.all_lines & ~meeting):
        q = lowest_bit(S.line_points[N] & S.nbrs[p])
        cand = span_bits(D, L, N) & S.point_lines[img[q]]
        if cand.bit_count() != 1:
            raise SymmetryError("line image is not unique", {"line": N})
        limg[N] = lowest_bit(cand)
    for t in range(S.n_points):
        if t in img:
            continue
        K = lowest_bit(S.point_lines[t] & meeting)
        images = set()
        for N in iter_bits(S.point_lines[t] & ~(1 << K)):
            c = S.line_points[limg[N]] & S.line_points[K]
            images.add(lowest_bit(c) if c else None)
        if len(images) != 1 or None in images:
            raise SymmetryError("point image is not well defined", {"point": t})
        img[t] = images.pop()
    g = Collineation(tuple(img[z] for z in range(S.n_points)), tuple(limg[l] for l in range(S.n_lines)))
    bad = collineation_violation(S, g)
    if bad is not None:
        raise SymmetryError("constructed map is not a collineation", bad)
    return g


def symmetries_about(S: IncidenceStructure, L: int, p: int, M: int) -> list[Collineation]:
    """One constructed symmetry for each point of M other than p (a fixed, a2 varying)."""
    pts = [x for x in S.points_of(M) if x != p]
    a = pts[0]
    ld = None
    if S.point_lines[p].bit_count() >= 4:
        net = extract_dual_net(S, p)
        ld = check_ld(net, vertical_of_line(net, L))
    return [build_symmetry(S, L, p, a, a2, ld=ld) for a2 in pts]


def acts_regularly(S: IncidenceStructure, group: Sequence[Collineation], L: int) -> bool:
    """The set acts regularly on the span {L,N}^perpperp minus L for some N opposite L."""
    D = S.dual
    N = lowest_bit(D.opposite(L))
    targets = span_bits(D, L, N) & ~(1 << L)
    images = sorted(g.lines[N] for g in group)
    return images == bits_to_list(targets)


def is_group(group: Sequence[Collineation]) -> bool:
    s = set(group)
    return all((g * h) in s for g in group for h in group)


# ---------------------------------------------------------------------------
# polarities of W(q)
# ---------------------------------------------------------------------------

class PolarityError(RuntimeError):
    pass


@dataclass(frozen=True)
class Polarity:
    point_to_line: tuple[int, ...]
    line_to_point: tuple[int, ...]
    theta_power: int


def polarity_violation(S: IncidenceStructure, rho: Polarity) -> Optional[dict]:
    if sorted(rho.point_to_line) != list(range(S.n_lines)):
        return {"reason": "point map is not a bijection"}
    if sorted(rho.line_to_point) != list(range(S.n_points)):
        return {"reason": "line map is not a bijection"}
    for p in range(S.n_points):
        if rho.line_to_point[rho.point_to_line[p]] != p:
            return {"reason": "not of order 2", "point": p}
    for l in range(S.n_lines):
        if rho.point_to_line[rho.line_to_point[l]] != l:
            return {"reason": "not of order 2", "line": l}
        img = 0
        for p in iter_bits(S.line_points[l]):
            img |= 1 << rho.point_to_line[p]
        if img != S.point_lines[rho.line_to_point[l]]:
            return {"reason": "incidence not preserved", "line": l}
    return None


def find_polarity(S: SymplecticQuadrangle) -> Optional[Polarity]:
    """The coordinate polarity built from a Tits automorphism, or None.

    Images: (a,l,a') -> [a^t, l^t', a'^t], [k,b,k'] -> (k^t', b^t, k'^t'),
    (a) -> [a^t], (k,b) -> [k^t', b^t], (inf) -> [inf], and dually
    [k] -> (k^t'), [a,l] -> (a^t, l^t'), [inf] -> (inf), where t is the Tits
    automorphism and t' its inverse. The exhaustive check below, not the
    formulas, is what makes the result trustworthy.
    """
    th = tits_endo(S.field)
    if th is None:
        return None
    f, g = th, th.inverse

    def pimg(c):
        if len(c) == 0:
            return CoordLine(())
        if len(c) == 1:
            return CoordLine((f(c[0]),))
        if len(c) == 2:
            return CoordLine((g(c[0]), f(c[1])))
        return CoordLine((f(c[0]), g(c[1]), f(c[2])))

    def limg(c):
        if len(c) == 0:
            return CoordPoint(())
        if len(c) == 1:
            return CoordPoint((g(c[0]),))
        if len(c) == 2:
            return CoordPoint((f(c[0]), g(c[1])))
        return CoordPoint((g(c[0]), f(c[1]), g(c[2])))

    p2l = tuple(S.line_index[pimg(p.coords)] for p in S.points)
    l2p = tuple(S.point_index[limg(m.coords)] for m in S.lines)
    rho = Polarity(p2l, l2p, th.power)
    bad = polarity_violation(S, rho)
    if bad is not None:
        raise PolarityError(f"coordinate polarity failed verification: {bad}")
    return rho


def absolute_elements(S: IncidenceStructure, rho: Polarity) -> tuple[list[int], list[int]]:
    pts = [p for p in range(S.n_points) if S.incident(p, rho.point_to_line[p])]
    lines = [l for l in range(S.n_lines) if S.incident(rho.line_to_point[l], l)]
    ov = 0
    for p in pts:
        ov |= 1 << p
    for l in range(S.n_lines):
        if (S.line_points[l] & ov).bit_count() != 1:
            raise PolarityError(f"absolute points are not an ovoid: line {l}")
    return pts, lines


# ---------------------------------------------------------------------------
# subquadrangles with centric triads
# ---------------------------------------------------------------------------

def check_centric_subquadrangle(S: IncidenceStructure, Sp: IncidenceStructure,
                                embed: tuple[Sequence[int], Sequence[int]]) -> bool:
    """Every triad of the embedded subquadrangle has a center in S."""
    pmap, lmap = embed
    if len(set(pmap)) != len(pmap) or len(set(lmap)) != len(lmap):
        raise IncidenceError("embedding is not injective")
    for l in range(Sp.n_lines):
        for p in iter_bits(Sp.line_points[l]):
            if not S.incident(pmap[p], lmap[l]):
                raise IncidenceError(f"embedding does not preserve the flag ({p}, {l})")
    cert = verify_gq(Sp)
    if not cert.ok:
        raise IncidenceError(f"not a subquadrangle: {cert.violation.axiom} ({cert.violation.message})")
    sub = 0
    for p in pmap:
        sub |= 1 << p
    nbrs = S.nbrs
    for x in pmap:
        ox = sub & ~nbrs[x]
        for y in iter_bits(ox):
            reach = 0
            for c in iter_bits(nbrs[x] & nbrs[y]):
                reach |= nbrs[c]
            if ox & ~nbrs[y] & ~reach:
                return False
    return True
