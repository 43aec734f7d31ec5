"""Rebuild a quadrangle with polarity from a circle geometry (P, C, gnarl).

Points and lines are both P + C. With n = |P|, point x has id x and circle
C has id n + C; line ids mirror point ids, so the polarity is the identity
on ids. Incidence:

    x_p I y_l  iff x = y
    x_p I C_l  iff C_p I x_l  iff gnarl(C) = x
    C_p I D_l  iff gnarl(C) in D, gnarl(D) in C and gnarl(C) != gnarl(D)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .coordinates import SymplecticQuadrangle, build_symplectic
from .dualnet import extract_dual_net
from .incidence import IncidenceStructure, is_regular_line, is_regular_point, span_bits
from .inversive import (CircleGeometry, build_circle_geometry, check_ch1, check_ch2, check_mp1, check_mp2, check_st1,
                        check_st2)
from .symmetry import Polarity, find_polarity, polarity_violation
from .verdict import FAIL, PASS, Verdict, bits_to_list, iter_bits, lowest_bit


class ReconstructionError(RuntimeError):
    def __init__(self, message: str, witness: Optional[dict] = None):
        super().__init__(message)
        self.witness = witness


REQUIRED_AXIOMS = (check_mp1, check_mp2, check_ch1, check_ch2, check_st1, check_st2)


@dataclass
class Reconstruction:
    quadrangle: IncidenceStructure
    polarity: Polarity
    geometry: CircleGeometry
    axioms: list[Verdict]

    @property
    def n_base(self) -> int:
        return self.geometry.n_points


def reconstruct(G: CircleGeometry, *, check_axioms: bool = True) -> Reconstruction:
    verdicts = []
    if check_axioms:
        for fn in REQUIRED_AXIOMS:
            v = fn(G)
            verdicts.append(v)
            if not v.passed:
                raise ReconstructionError(f"circle geometry fails {v.check}", v.witness)
    n, m = G.n_points, G.n_circles
    lines = []
    for y in range(n):
        bits = 1 << y
        for c in iter_bits(G.with_gnarl[y]):
            bits |= 1 << (n + c)
        lines.append(bits)
    gnarls_in = [0] * m     # circles whose gnarl lies on D
    for d in range(m):
        acc = 0
        for z in iter_bits(G.circles[d]):
            acc |= G.with_gnarl[z]
        gnarls_in[d] = acc
    for d in range(m):
        gd = G.gnarl[d]
        bits = 1 << gd
        cand = gnarls_in[d] & G.through[gd] & ~G.with_gnarl[gd]
        for c in iter_bits(cand):
            bits |= 1 << (n + c)
        lines.append(bits)
    labels = [f"P{x}" for x in range(n)] + [f"C{c}" for c in range(m)]
    Q = IncidenceStructure(n + m, n + m, lines, point_labels=labels, line_labels=list(labels),
                           name="reconstruction")
    rho = Polarity(tuple(range(n + m)), tuple(range(n + m)), 0)
    bad = polarity_violation(Q, rho)
    if bad is not None:
        raise ReconstructionError("identity on ids is not a polarity", bad)
    return Reconstruction(Q, rho, G, verdicts)


def absolute_points(R: Reconstruction) -> list[int]:
    Q = R.quadrangle
    return [p for p in range(Q.n_points) if Q.incident(p, R.polarity.point_to_line[p])]


def check_collinearity_lemma(R: Reconstruction) -> Verdict:
    """x_p ~ y_p iff x = y; x_p ~ C_p iff x in C; C_p ~ D_p iff C and D touch."""
    G, Q, n = R.geometry, R.quadrangle, R.n_base
    k = 0
    for u in range(Q.n_points):
        for v in range(u + 1, Q.n_points):
            k += 1
            col = Q.collinear(u, v)
            if v < n:
                want, clause = False, "i"
            elif u < n:
                want, clause = bool(G.circles[v - n] >> u & 1), "ii"
            else:
                want, clause = G.touch_point(u - n, v - n) is not None, "iii"
            if col != want:
                return Verdict("collinearity", FAIL, {"clause": clause, "points": [u, v], "collinear": col},
                               tuples=k)
    return Verdict("collinearity", PASS, tuples=k)


def check_triangle_free(Q: IncidenceStructure) -> Verdict:
    """Three pairwise collinear points always share a line."""
    k = 0
    for l in range(Q.n_lines):
        pts = bits_to_list(Q.line_points[l])
        for i, u in enumerate(pts):
            for v in pts[i + 1:]:
                k += 1
                extra = Q.nbrs[u] & Q.nbrs[v] & ~Q.line_points[l]
                if extra:
                    return Verdict("triangle-free", FAIL, {"points": [u, v, lowest_bit(extra)], "line": l}, tuples=k)
    return Verdict("triangle-free", PASS, tuples=k)


def check_distance_three(Q: IncidenceStructure) -> Verdict:
    """Every point-line pair is at distance at most 3 in the incidence graph."""
    k = 0
    for p in range(Q.n_points):
        np_ = Q.nbrs[p]
        for l in range(Q.n_lines):
            k += 1
            if not np_ & Q.line_points[l]:
                return Verdict("distance-3", FAIL, {"point": p, "line": l}, tuples=k)
    return Verdict("distance-3", PASS, tuples=k)


def check_absolute_regular(R: Reconstruction) -> Verdict:
    Q = R.quadrangle
    k = 0
    for x in absolute_points(R):
        k += 2
        if not is_regular_point(Q, x):
            return Verdict("absolute-regular", FAIL, {"point": x}, tuples=k)
        if not is_regular_line(Q, R.polarity.point_to_line[x]):
            return Verdict("absolute-regular", FAIL, {"line": R.polarity.point_to_line[x]}, tuples=k)
    return Verdict("absolute-regular", PASS, tuples=k)


def check_two_absolute(R: Reconstruction) -> Verdict:
    """Every span {x,y}^perpperp with x absolute (x, y opposite) has exactly two absolute points;
    dually for lines."""
    Q = R.quadrangle
    absp = absolute_points(R)
    abits = 0
    for x in absp:
        abits |= 1 << x
    labs = 0
    for x in absp:
        labs |= 1 << R.polarity.point_to_line[x]
    k = 0
    for S, A, kind in ((Q, abits, "point"), (Q.dual, labs, "line")):
        for x in iter_bits(A):
            for y in iter_bits(S.opposite(x)):
                k += 1
                c = (span_bits(S, x, y) & A).bit_count()
                if c != 2:
                    return Verdict("two-absolute", FAIL, {"kind": kind, "pair": [x, y], "absolute": c}, tuples=k)
    return Verdict("two-absolute", PASS, tuples=k)


def check_dual_net_description(R: Reconstruction) -> Verdict:
    """The dual net at x_p: points are the circles through x, blocks are the
    points y != x (circles through x and y), verticals include the circles with gnarl x."""
    G, Q, n = R.geometry, R.quadrangle, R.n_base
    for x in range(n):
        net = extract_dual_net(Q, x, assume_regular=True)
        host = net.host_points
        want_pts = sorted(n + c for c in iter_bits(G.through[x]))
        if sorted(host) != want_pts:
            return Verdict("dual-net", FAIL, {"point": x, "reason": "net points"})
        got = set()
        for b in net.blocks:
            got.add(frozenset(host[i] for i in iter_bits(b)))
        want = set()
        for y in range(n):
            if y != x:
                want.add(frozenset(n + c for c in iter_bits(G.through[x] & G.through[y])))
        if got != want:
            return Verdict("dual-net", FAIL, {"point": x, "reason": "blocks"})
        gn = frozenset(n + c for c in iter_bits(G.with_gnarl[x]))
        verts = {frozenset(host[i] for i in iter_bits(v)) for v in net.verticals}
        if gn not in verts:
            return Verdict("dual-net", FAIL, {"point": x, "reason": "gnarl vertical"})
    return Verdict("dual-net", PASS, tuples=n)


def natural_isomorphism(S: IncidenceStructure, rho_S: Polarity, R: Reconstruction) -> Verdict:
    """y -> y_p for absolute y, y -> (O & y^perp)_p otherwise; M -> the line
    whose id is the image of the point rho(M)."""
    G, Q, n = R.geometry, R.quadrangle, R.n_base
    if G.host_points is None or G.host_centers is None:
        raise ReconstructionError("circle geometry does not record its source quadrangle")
    psi = [-1] * S.n_points
    for i, h in enumerate(G.host_points):
        psi[h] = i
    for c, h in enumerate(G.host_centers):
        psi[h] = n + c
    if sorted(psi) != list(range(Q.n_points)):
        return Verdict("isomorphism", FAIL, {"reason": "point map is not a bijection"})
    lpsi = [psi[rho_S.line_to_point[m]] for m in range(S.n_lines)]
    k = 0
    for m in range(S.n_lines):
        for p in iter_bits(S.line_points[m]):
            k += 1
            if not Q.incident(psi[p], lpsi[m]):
                return Verdict("isomorphism", FAIL, {"flag": [p, m], "image": [psi[p], lpsi[m]]}, tuples=k)
    if sum(b.bit_count() for b in S.line_points) != sum(b.bit_count() for b in Q.line_points):
        return Verdict("isomorphism", FAIL, {"reason": "flag counts differ"}, tuples=k)
    return Verdict("isomorphism", PASS, tuples=k, detail={"points": psi, "lines": lpsi})


def symplectic_source(S: IncidenceStructure) -> SymplecticQuadrangle:
    """Identify a labelled structure with the coordinate W(q) of the same size.

    Labels must be the coordinate labels written by ``build``; the flags must
    then agree exactly.
    """
    n = S.n_points
    q = next((q for q in range(2, 1 << 12) if (q + 1) * (q * q + 1) >= n), None)
    if q is None or (q + 1) * (q * q + 1) != n or q & (q - 1):
        raise ReconstructionError(f"{n} points is not the size of W(q) for q a power of 2")
    W = build_symplectic(q)
    if S.point_labels is None or S.line_labels is None:
        raise ReconstructionError("structure has no coordinate labels")
    pidx = {W.point_label(i): i for i in range(W.n_points)}
    lidx = {W.line_label(i): i for i in range(W.n_lines)}
    try:
        pm = [pidx[lab] for lab in S.point_labels]
        lm = [lidx[lab] for lab in S.line_labels]
    except KeyError as exc:
        raise ReconstructionError(f"label {exc.args[0]} is not a coordinate of W({q})") from None
    for l in range(S.n_lines):
        img = 0
        for p in iter_bits(S.line_points[l]):
            img |= 1 << pm[p]
        if img != W.line_points[lm[l]]:
            raise ReconstructionError(f"line {l} differs from its coordinate line in W({q})")
    return W


def attach_host(G: CircleGeometry, W: SymplecticQuadrangle, rho: Optional[Polarity] = None) -> CircleGeometry:
    """Copy of G carrying host ids, after checking G is the circle geometry of (W, rho)."""
    rho = rho or find_polarity(W)
    if rho is None:
        raise ReconstructionError("source quadrangle has no polarity")
    G0 = build_circle_geometry(W, rho)
    if G.point_labels is None:
        raise ReconstructionError("circle geometry has no point labels")
    idx = {lab: i for i, lab in enumerate(G0.point_labels)}
    try:
        pm = [idx[lab] for lab in G.point_labels]
    except KeyError as exc:
        raise ReconstructionError(f"point {exc.args[0]} is not absolute in the source") from None
    if sorted(pm) != list(range(G0.n_points)) or G.n_circles != G0.n_circles:
        raise ReconstructionError("sizes differ from the source circle geometry")
    by_bits = {(bits, G0.gnarl[c]): c for c, bits in enumerate(G0.circles)}
    centers = []
    for c, bits in enumerate(G.circles):
        img = 0
        for p in iter_bits(bits):
            img |= 1 << pm[p]
        c0 = by_bits.get((img, pm[G.gnarl[c]]))
        if c0 is None:
            raise ReconstructionError(f"circle {c} with its gnarl does not occur in the source")
        centers.append(G0.host_centers[c0])
    return CircleGeometry(G.n_points, list(G.circles), list(G.gnarl), point_labels=G.point_labels,
                          host_points=[G0.host_points[i] for i in pm], host_centers=centers,
                          strict=G.strict, meta=dict(G.meta))
