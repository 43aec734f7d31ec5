"""Coordinatized symplectic and mixed quadrangles in characteristic 2.

Points are (inf), (a), (k,b), (a,l,a'); lines are [inf], [k], [a,l],
[k,b,k']. The chain

    (a,l,a') I [a,l] I (a) I [inf] I (inf) I [k] I (k,b) I [k,b,k']

holds for all coordinates, and (a,l,a') I [k,b,k'] exactly when

    a' = a k + b
    k' = a^2 k + l - 2 a a'      (the last term vanishes in characteristic 2)

In a mixed quadrangle a, a', b range over L and k, k', l over L'.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Optional, Sequence

from .algebra import DescriptorError, FiniteField, MixedDescriptor
from .incidence import IncidenceStructure

# coordinate name -> space it must lie in
_POINT_SPACES = {0: (), 1: ("L",), 2: ("L'", "L"), 3: ("L", "L'", "L")}
_LINE_SPACES = {0: (), 1: ("L'",), 2: ("L", "L'"), 3: ("L'", "L", "L'")}


@dataclass(frozen=True)
class CoordPoint:
    """(inf) for (), (a,), (k,b) or (a,l,a')."""

    coords: tuple = ()

    def __post_init__(self):
        if len(self.coords) > 3:
            raise ValueError("a point has at most three coordinates")

    def label(self, field) -> str:
        if not self.coords:
            return "(inf)"
        return "(" + ",".join(field.pretty(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class CoordLine:
    """[inf] for (), [k,], [a,l] or [k,b,k']."""

    coords: tuple = ()

    def __post_init__(self):
        if len(self.coords) > 3:
            raise ValueError("a line has at most three coordinates")

    def label(self, field) -> str:
        if not self.coords:
            return "[inf]"
        return "[" + ",".join(field.pretty(c) for c in self.coords) + "]"


def _as_descriptor(desc) -> MixedDescriptor:
    if isinstance(desc, MixedDescriptor):
        return desc
    return MixedDescriptor.full(desc)


def check_coordinates(elem, desc: MixedDescriptor):
    spaces = (_POINT_SPACES if isinstance(elem, CoordPoint) else _LINE_SPACES)[len(elem.coords)]
    for value, name in zip(elem.coords, spaces):
        if not desc.member(value, name):
            raise DescriptorError(f"coordinate {desc.field.pretty(value)} of {elem.label(desc.field)} is not in {name}")


def incident(p: CoordPoint, m: CoordLine, desc) -> bool:
    """Exact incidence test; ``desc`` is a MixedDescriptor or a field."""
    desc = _as_descriptor(desc)
    check_coordinates(p, desc)
    check_coordinates(m, desc)
    F = desc.field
    pc, mc = p.coords, m.coords
    np_, nm = len(pc), len(mc)
    if np_ == 0:
        return nm <= 1
    if np_ == 1:
        return nm == 0 or (nm == 2 and mc[0] == pc[0])
    if np_ == 2:
        return (nm == 1 and mc[0] == pc[0]) or (nm == 3 and mc[0] == pc[0] and mc[1] == pc[1])
    a, l, a2 = pc
    if nm == 2:
        return mc == (a, l)
    if nm == 3:
        k, b, k2 = mc
        return a2 == F.add(F.mul(a, k), b) and k2 == F.add(F.mul(F.square(a), k), l)
    return False


# ---------------------------------------------------------------------------
# finite enumeration
# ---------------------------------------------------------------------------

def symplectic_points(F: FiniteField) -> list[CoordPoint]:
    E = list(F.elements())
    pts = [CoordPoint(())]
    pts += [CoordPoint((a,)) for a in E]
    pts += [CoordPoint(c) for c in product(E, E)]
    pts += [CoordPoint(c) for c in product(E, E, E)]
    return pts


def symplectic_lines(F: FiniteField) -> list[CoordLine]:
    E = list(F.elements())
    lines = [CoordLine(())]
    lines += [CoordLine((k,)) for k in E]
    lines += [CoordLine(c) for c in product(E, E)]
    lines += [CoordLine(c) for c in product(E, E, E)]
    return lines


def points_on_line(F: FiniteField, m: CoordLine) -> list[CoordPoint]:
    """The q+1 points of a line, by solving the incidence equations."""
    E = F.elements()
    c = m.coords
    if len(c) == 0:
        return [CoordPoint(())] + [CoordPoint((a,)) for a in E]
    if len(c) == 1:
        return [CoordPoint(())] + [CoordPoint((c[0], b)) for b in E]
    if len(c) == 2:
        return [CoordPoint((c[0],))] + [CoordPoint((c[0], c[1], a2)) for a2 in E]
    k, b, k2 = c
    out = [CoordPoint((k, b))]
    for a in E:
        out.append(CoordPoint((a, F.add(k2, F.mul(F.square(a), k)), F.add(F.mul(a, k), b))))
    return out


class SymplecticQuadrangle(IncidenceStructure):
    """W(q) with its coordinate tables kept alongside the incidence bitsets."""

    def __init__(self, field: FiniteField):
        self.field = field
        self.points = symplectic_points(field)
        self.lines = symplectic_lines(field)
        self.point_index = {p: i for i, p in enumerate(self.points)}
        self.line_index = {m: i for i, m in enumerate(self.lines)}
        lp = []
        for m in self.lines:
            bits = 0
            for p in points_on_line(field, m):
                bits |= 1 << self.point_index[p]
            lp.append(bits)
        super().__init__(
            len(self.points), len(self.lines), lp,
            point_labels=[p.label(field) for p in self.points],
            line_labels=[m.label(field) for m in self.lines],
            name=f"W({field.order})",
        )

    def pid(self, *coords) -> int:
        return self.point_index[CoordPoint(tuple(coords))]

    def lid(self, *coords) -> int:
        return self.line_index[CoordLine(tuple(coords))]


def build_symplectic(field) -> SymplecticQuadrangle:
    if isinstance(field, int):
        field = FiniteField.of_order(field)
    if not getattr(field, "is_finite", False):
        raise DescriptorError("build_symplectic needs a finite field; use build_mixed_patch over F2(s,t)")
    return SymplecticQuadrangle(field)


# ---------------------------------------------------------------------------
# finite patches of mixed quadrangles over F2(s,t)
# ---------------------------------------------------------------------------

class PatchBudgetError(RuntimeError):
    def __init__(self, budget: int, reached: int, depth: int):
        super().__init__(f"patch closure exceeded budget of {budget} elements "
                         f"({reached} elements after round {depth})")
        self.budget = budget
        self.reached = reached
        self.depth = depth


def field_closure(F, generators: Iterable, depth: int, budget: int) -> list:
    """Generators plus 0 and 1, closed ``depth`` times under +, * and /."""
    elems = {F.zero, F.one}
    elems.update(F.check(g) for g in generators)
    for rnd in range(1, depth + 1):
        cur = list(elems)
        new = set(elems)
        for i, x in enumerate(cur):
            for y in cur[i:]:
                new.add(F.add(x, y))
                new.add(F.mul(x, y))
                if y:
                    new.add(F.div(x, y))
                if x:
                    new.add(F.div(y, x))
                if len(new) > budget:
                    raise PatchBudgetError(budget, len(new), rnd)
        elems = new
    return sorted(elems, key=lambda x: (len(F.format(x)), F.format(x)))


class MixedPatch:
    """The elements of W(K,K';L,L') whose coordinates lie in a finite closure.

    The patch is lazy: ``elements`` and the restricted coordinate lists are
    stored, incidence is evaluated on demand by ``incident``, and
    ``materialize`` builds an IncidenceStructure only when the counts fit.
    """

    def __init__(self, desc: MixedDescriptor, elements: Sequence, depth: int):
        self.desc = desc
        self.field = desc.field
        self.elements = list(elements)
        self.depth = depth
        self.in_L = [x for x in self.elements if desc.member(x, "L")]
        self.in_Lprime = [x for x in self.elements if desc.member(x, "L'")]
        self._set = set(self.elements)

    def __contains__(self, elem) -> bool:
        if not all(c in self._set for c in elem.coords):
            return False
        try:
            check_coordinates(elem, self.desc)
        except DescriptorError:
            return False
        return True

    def counts(self) -> tuple[int, int]:
        nl, nlp = len(self.in_L), len(self.in_Lprime)
        points = 1 + nl + nlp * nl + nl * nlp * nl
        lines = 1 + nlp + nl * nlp + nlp * nl * nlp
        return points, lines

    def incident(self, p: CoordPoint, m: CoordLine) -> bool:
        return incident(p, m, self.desc)

    def points(self) -> list[CoordPoint]:
        L, Lp = self.in_L, self.in_Lprime
        return ([CoordPoint(())] + [CoordPoint((a,)) for a in L] + [CoordPoint(c) for c in product(Lp, L)]
                + [CoordPoint(c) for c in product(L, Lp, L)])

    def lines(self) -> list[CoordLine]:
        L, Lp = self.in_L, self.in_Lprime
        return ([CoordLine(())] + [CoordLine((k,)) for k in Lp] + [CoordLine(c) for c in product(L, Lp)]
                + [CoordLine(c) for c in product(Lp, L, Lp)])

    def materialize(self, max_elements: int = 20000) -> IncidenceStructure:
        n_p, n_l = self.counts()
        if n_p + n_l > max_elements:
            raise PatchBudgetError(max_elements, n_p + n_l, self.depth)
        pts, lines = self.points(), self.lines()
        lp = []
        for m in lines:
            bits = 0
            for i, p in enumerate(pts):
                if incident(p, m, self.desc):
                    bits |= 1 << i
            lp.append(bits)
        F = self.field
        return IncidenceStructure(len(pts), len(lines), lp,
                                  point_labels=[p.label(F) for p in pts],
                                  line_labels=[m.label(F) for m in lines],
                                  name=f"patch(depth {self.depth})")


def build_mixed_patch(desc: MixedDescriptor, generators: Iterable, depth: int = 2,
                      budget: int = 10 ** 5) -> MixedPatch:
    if desc.field.is_finite:
        raise DescriptorError("over a finite field every mixed quadrangle is W(q); use build_symplectic")
    generators = list(generators)
    if not generators:
        raise DescriptorError("a patch needs at least one generator")
    return MixedPatch(desc, field_closure(desc.field, generators, depth, budget), depth)


# ---------------------------------------------------------------------------
# perps through (inf): the blocks of the dual net at (inf)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InfinityPerp:
    """T_{a,a'} = {(inf),(a,l,a')}^perp = {(a)} + {(x, a x + a') : x in L'}."""

    a: object
    a2: object

    def contains(self, p: CoordPoint, desc: MixedDescriptor) -> bool:
        F = desc.field
        c = p.coords
        if len(c) == 1:
            return c[0] == self.a
        if len(c) == 2:
            x, b = c
            return desc.member(x, "L'") and b == F.add(F.mul(self.a, x), self.a2)
        return False


@dataclass
class PerpMeet:
    """How two perps through (inf) meet; ``x`` is the solved abscissa when a != c."""

    point: Optional[CoordPoint]
    x: object = None
    x_in_Lprime: Optional[bool] = None


def meet_infinity_perps(desc: MixedDescriptor, T: InfinityPerp, U: InfinityPerp) -> PerpMeet:
    """Exact intersection of two distinct perps through (inf).

    Equal first parameters meet in (a). Otherwise a common point (x, b) needs
    a x + a' = c x + c', so x = (a' + c') / (a + c), and the point exists
    precisely when x lies in L'.
    """
    F = desc.field
    if T == U:
        raise ValueError("the two perps coincide")
    if T.a == U.a:
        return PerpMeet(CoordPoint((T.a,)))
    x = F.div(F.add(T.a2, U.a2), F.add(T.a, U.a))
    inside = desc.member(x, "L'")
    if not inside:
        return PerpMeet(None, x, False)
    return PerpMeet(CoordPoint((x, F.add(F.mul(T.a, x), T.a2))), x, True)


def vy_witness_perps(desc: MixedDescriptor, k, k2) -> list[InfinityPerp]:
    """T_{0,0}, T_{0,1}, T_{1,0} and T_{u,u k'} with u = (1/k + 1)^(-1).

    The first three form a triangle; the fourth meets T_{0,0} and T_{0,1} in
    distinct points, and meets T_{1,0} exactly when k k' lies in L'.
    """
    F = desc.field
    u = F.inv(F.add(F.inv(k), F.one))
    return [InfinityPerp(F.zero, F.zero), InfinityPerp(F.zero, F.one),
            InfinityPerp(F.one, F.zero), InfinityPerp(u, F.mul(u, k2))]
