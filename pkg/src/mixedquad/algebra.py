"""Exact arithmetic in characteristic 2.

Two kinds of field are supported:

* ``FiniteField`` -- GF(2^n) with elements stored as ints (bit i = coefficient
  of x^i in the polynomial basis).
* ``RationalField`` -- the rational function field F2(s,t), elements are
  ``RationalFunction`` values kept in reduced form.

Both expose the same small method set (``zero``, ``one``, ``add``, ``mul``,
``square``, ``inv``, ``elements`` where finite) so that the coordinate
incidence code can run over either of them.

``Subspace`` and ``MixedDescriptor`` describe the tower
K^2 <= K' <= K, K' <= L <= K, K^2 <= L' <= K' used by mixed quadrangles.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Optional, Sequence

# canonical irreducible moduli, as bit masks including the leading term
DEFAULT_MODULI = {1: 0b11, 2: 0b111, 3: 0b1011, 4: 0b10011, 5: 0b100101}


class FieldError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# carry-less arithmetic on GF(2)[x] bit masks
# ---------------------------------------------------------------------------

def clmul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def cldivmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    q = 0
    db = b.bit_length()
    while a and a.bit_length() >= db:
        shift = a.bit_length() - db
        q |= 1 << shift
        a ^= b << shift
    return q, a


def clgcd(a: int, b: int) -> int:
    while b:
        a, b = b, cldivmod(a, b)[1]
    return a


def is_irreducible(f: int) -> bool:
    """Trial division by every polynomial of degree <= deg(f)/2."""
    deg = f.bit_length() - 1
    if deg < 1:
        return False
    for g in range(2, 1 << (deg // 2 + 1)):
        if cldivmod(f, g)[1] == 0:
            return False
    return True


# ---------------------------------------------------------------------------
# GF(2^n)
# ---------------------------------------------------------------------------

class FiniteField:
    """GF(2^n) in the polynomial basis over a fixed irreducible modulus."""

    def __init__(self, degree: int, modulus: Optional[int] = None):
        if degree < 1:
            raise FieldError("degree must be >= 1")
        if modulus is None:
            if degree not in DEFAULT_MODULI:
                raise FieldError(f"no default modulus for degree {degree}")
            modulus = DEFAULT_MODULI[degree]
        if modulus.bit_length() - 1 != degree or not is_irreducible(modulus):
            raise FieldError(f"modulus {modulus:#b} is not irreducible of degree {degree}")
        self.degree = degree
        self.modulus = modulus
        self.order = 1 << degree
        self.zero = 0
        self.one = 1
        q = self.order
        self._mul = [[self._slow_mul(a, b) for b in range(q)] for a in range(q)]
        self._inv = [0] * q
        for a in range(1, q):
            row = self._mul[a]
            self._inv[a] = row.index(1)

    @classmethod
    def of_order(cls, q: int) -> "FiniteField":
        n = q.bit_length() - 1
        if q < 2 or q != 1 << n:
            raise FieldError(f"{q} is not a power of 2")
        return cls(n)

    def _slow_mul(self, a: int, b: int) -> int:
        return cldivmod(clmul(a, b), self.modulus)[1]

    def __repr__(self):
        return f"GF({self.order})"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.degree, self.modulus) == (other.degree, other.modulus)

    def __hash__(self):
        return hash((self.degree, self.modulus))

    @property
    def is_finite(self) -> bool:
        return True

    def elements(self) -> range:
        return range(self.order)

    def check(self, a: int) -> int:
        if not isinstance(a, int) or not 0 <= a < self.order:
            raise FieldError(f"{a!r} is not an element of {self}")
        return a

    def add(self, a: int, b: int) -> int:
        return a ^ b

    sub = add

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def square(self, a: int) -> int:
        return self._mul[a][a]

    frobenius = square

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in {self}")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self._mul[a][self.inv(b)]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        r = 1
        while e:
            if e & 1:
                r = self._mul[r][a]
            a = self._mul[a][a]
            e >>= 1
        return r

    def frobenius_power(self, a: int, k: int) -> int:
        """x -> x^(2^k)."""
        for _ in range(k % self.degree):
            a = self._mul[a][a]
        return a

    def sqrt(self, a: int) -> int:
        # Frobenius has order n, so its inverse is the (n-1)-th power
        return self.frobenius_power(a, self.degree - 1)

    def format(self, a: int) -> str:
        width = (self.degree + 3) // 4
        return format(a, f"0{width}x")

    pretty = format

    def parse(self, text: str) -> int:
        try:
            return self.check(int(text, 16))
        except ValueError:
            raise FieldError(f"bad element {text!r} for {self}") from None


@dataclass(frozen=True)
class TitsEndo:
    """A Tits endomorphism theta of GF(2^(2e+1)): theta(theta(x)) = x^2.

    ``power`` is k with theta(x) = x^(2^k); the inverse is x -> x^(2^(n-k)).
    """

    field: FiniteField
    power: int

    def __call__(self, x: int) -> int:
        return self.field.frobenius_power(x, self.power)

    def inverse(self, x: int) -> int:
        return self.field.frobenius_power(x, self.field.degree - self.power)

    @property
    def is_identity(self) -> bool:
        return self.power % self.field.degree == 0


def tits_endo(field: FiniteField) -> Optional[TitsEndo]:
    """The Tits automorphism of ``field``, or None if there is none.

    Every automorphism of GF(2^n) is x -> x^(2^k); theta^2 = Frobenius forces
    2k = 1 (mod n), solvable exactly when n is odd. The candidate is checked
    on every element before being returned.
    """
    n = field.degree
    if n % 2 == 0:
        return None
    theta = TitsEndo(field, ((n + 1) // 2) % n)
    for x in field.elements():
        if theta(theta(x)) != field.square(x) or theta.inverse(theta(x)) != x:
            raise FieldError(f"Tits endomorphism check failed at {x} in {field}")
    return theta


# ---------------------------------------------------------------------------
# GF(2)[s, t]: polynomials in t whose coefficients are GF(2)[s] bit masks
# ---------------------------------------------------------------------------

def _trim(coeffs: Sequence[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class Poly:
    """Bivariate polynomial over GF(2).

    ``coeffs[j]`` is the coefficient of t^j, itself a polynomial in s encoded
    as a bit mask. The representation is canonical (trailing zeros trimmed).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        self.coeffs = _trim(coeffs)

    @classmethod
    def monomial(cls, i: int, j: int) -> "Poly":
        return cls([0] * j + [1 << i])

    @classmethod
    def from_monomials(cls, monos: Iterable[tuple[int, int]]) -> "Poly":
        c: list[int] = []
        for i, j in monos:
            while len(c) <= j:
                c.append(0)
            c[j] ^= 1 << i
        return cls(c)

    def monomials(self) -> list[tuple[int, int]]:
        out = []
        for j, c in enumerate(self.coeffs):
            i = 0
            while c:
                if c & 1:
                    out.append((i, j))
                c >>= 1
                i += 1
        return sorted(out, reverse=True)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({format_poly(self)})"

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        c = list(a)
        for j, x in enumerate(b):
            c[j] ^= x
        return Poly(c)

    __sub__ = __add__

    def __mul__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        c = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        c[i + j] ^= clmul(x, y)
        return Poly(c)

    def square(self) -> "Poly":
        # Frobenius is additive: square each monomial
        c = [0] * (2 * len(self.coeffs))
        for j, x in enumerate(self.coeffs):
            c[2 * j] = clmul(x, x)
        return Poly(c)

    @property
    def tdeg(self) -> int:
        return len(self.coeffs) - 1

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1 and (not self.coeffs or self.coeffs[0] in (0, 1))

    def content(self) -> int:
        return reduce(clgcd, self.coeffs, 0)

    def divide_scalar(self, c: int) -> "Poly":
        out = []
        for x in self.coeffs:
            q, r = cldivmod(x, c)
            if r:
                raise FieldError("inexact scalar division")
            out.append(q)
        return Poly(out)

    def scale(self, c: int) -> "Poly":
        return Poly(clmul(x, c) for x in self.coeffs)

    def shift(self, k: int) -> "Poly":
        return Poly([0] * k + list(self.coeffs))

    def primitive_part(self) -> "Poly":
        if not self:
            return self
        return self.divide_scalar(self.content())

    def exact_div(self, other: "Poly") -> "Poly":
        """Quotient of an exact division in GF(2)[s][t]."""
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        a = list(self.coeffs)
        b = other.coeffs
        db, lb = len(b) - 1, b[-1]
        q = [0] * max(len(a) - db, 0)
        while len(a) - 1 >= db and any(a):
            k = len(a) - 1 - db
            c, r = cldivmod(a[-1], lb)
            if r:
                raise FieldError("inexact polynomial division")
            q[k] = c
            for j, y in enumerate(b):
                a[j + k] ^= clmul(y, c)
            while a and a[-1] == 0:
                a.pop()
        if any(a):
            raise FieldError("inexact polynomial division")
        return Poly(q)


def _prem(a: Poly, b: Poly) -> Poly:
    """Pseudo-remainder of a by b in GF(2)[s][t]."""
    r = a
    lb = b.coeffs[-1]
    while r and r.tdeg >= b.tdeg:
        lr = r.coeffs[-1]
        r = r.scale(lb) + b.scale(lr).shift(r.tdeg - b.tdeg)
    return r


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """gcd in GF(2)[s,t] via contents and a primitive remainder sequence."""
    if not a:
        return b
    if not b:
        return a
    c = clgcd(a.content(), b.content())
    a, b = a.primitive_part(), b.primitive_part()
    if a.tdeg < b.tdeg:
        a, b = b, a
    while b:
        a, b = b, _prem(a, b).primitive_part()
    return a.primitive_part().scale(c)


def parity_decompose(p: Poly) -> tuple[Poly, Poly, Poly, Poly]:
    """Split p = A^2 + B^2 s + C^2 t + D^2 st.

    Monomials s^i t^j are sorted by (i mod 2, j mod 2) and their exponents
    halved; the decomposition is unique.
    """
    parts: dict[tuple[int, int], list[tuple[int, int]]] = {(0, 0): [], (1, 0): [], (0, 1): [], (1, 1): []}
    for i, j in p.monomials():
        parts[(i % 2, j % 2)].append((i // 2, j // 2))
    return tuple(Poly.from_monomials(parts[k]) for k in ((0, 0), (1, 0), (0, 1), (1, 1)))  # type: ignore[return-value]


def format_poly(p: Poly) -> str:
    if not p:
        return "0"
    terms = []
    for i, j in p.monomials():
        parts = []
        if i:
            parts.append("s" if i == 1 else f"s^{i}")
        if j:
            parts.append("t" if j == 1 else f"t^{j}")
        terms.append("*".join(parts) or "1")
    return " + ".join(terms)


# ---------------------------------------------------------------------------
# F2(s, t)
# ---------------------------------------------------------------------------

class RationalFunction:
    """Element of F2(s,t) as a reduced fraction num/den, den != 0.

    Over GF(2) the only unit is 1, so the reduced form is unique and
    equality is structural.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Optional[Poly] = None, *, reduced: bool = False):
        if den is None:
            den = Poly([1])
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            den = Poly([1])
        elif not reduced:
            g = poly_gcd(num, den)
            if g != Poly([1]):
                num, den = num.exact_div(g), den.exact_div(g)
        self.num = num
        self.den = den

    @classmethod
    def const(cls, c: int) -> "RationalFunction":
        return cls(Poly([c & 1]))

    def __repr__(self):
        if self.den == Poly([1]):
            return f"RF({format_poly(self.num)})"
        return f"RF(({format_poly(self.num)})/({format_poly(self.den)}))"

    def __str__(self):
        return format_rational(self)

    def __eq__(self, other):
        if isinstance(other, int):
            other = RationalFunction.const(other)
        return isinstance(other, RationalFunction) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    def __add__(self, other):
        if isinstance(other, int):
            other = RationalFunction.const(other)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, int):
            other = RationalFunction.const(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if not self.num:
            raise ZeroDivisionError("inverse of zero in F2(s,t)")
        return RationalFunction(self.den, self.num, reduced=True)

    def __truediv__(self, other):
        if isinstance(other, int):
            other = RationalFunction.const(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RationalFunction.const(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        r = RationalFunction.const(1)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b.square()
            e >>= 1
        return r

    def square(self) -> "RationalFunction":
        return RationalFunction(self.num.square(), self.den.square(), reduced=True)

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den == Poly([1])


def _format_monos(p: Poly) -> str:
    if not p:
        return "0"
    return ";".join(f"{i},{j}:1" for i, j in p.monomials())


def format_rational(x: RationalFunction) -> str:
    """Sparse wire form: ``e1,e2:1;...`` for numerator and denominator."""
    return f"{_format_monos(x.num)}/{_format_monos(x.den)}"


def pretty_rational(x: RationalFunction) -> str:
    """Readable form without spaces, e.g. ``s*t`` or ``(1+s)/t``."""

    def side(p: Poly, bare: str) -> str:
        body = format_poly(p).replace(" ", "")
        return f"({body})" if any(c in body for c in bare) else body

    if x.den == Poly([1]):
        return format_poly(x.num).replace(" ", "")
    return f"{side(x.num, '+')}/{side(x.den, '+*^')}"


def _parse_monos(text: str) -> Poly:
    if text == "0":
        return Poly()
    monos = []
    for item in text.split(";"):
        exps, _, coeff = item.partition(":")
        i, j = exps.split(",")
        if coeff != "1":
            raise FieldError(f"bad coefficient in {item!r}")
        monos.append((int(i), int(j)))
    return Poly.from_monomials(monos)


def parse_rational(text: str) -> RationalFunction:
    try:
        num, den = text.split("/")
        return RationalFunction(_parse_monos(num), _parse_monos(den))
    except (ValueError, FieldError) as exc:
        raise FieldError(f"bad rational function {text!r}: {exc}") from None


S = RationalFunction(Poly.monomial(1, 0))
T = RationalFunction(Poly.monomial(0, 1))


def parse_expr(text: str) -> RationalFunction:
    """Evaluate an arithmetic expression in s, t over F2, e.g. ``s*t/(1+s)``.

    Accepts integers (reduced mod 2), ``+ - * /``, ``^`` or ``**`` with
    integer exponents, and parentheses.
    """
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError:
        raise FieldError(f"cannot parse {text!r}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return RationalFunction.const(node.value)
        if isinstance(node, ast.Name) and node.id in ("s", "t"):
            return S if node.id == "s" else T
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            return ev(node.operand)
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise FieldError("exponents must be integer literals")
                return ev(node.left) ** node.right.value
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, (ast.Add, ast.Sub)):
                return a + b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                return a / b
        raise FieldError(f"unsupported syntax in {text!r}")

    return ev(tree)


class RationalField:
    """F2(s,t) with the same method set as ``FiniteField``."""

    is_finite = False
    zero = RationalFunction.const(0)
    one = RationalFunction.const(1)
    s = S
    t = T

    def __repr__(self):
        return "F2(s,t)"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("F2(s,t)")

    def check(self, a):
        if isinstance(a, int):
            return RationalFunction.const(a)
        if not isinstance(a, RationalFunction):
            raise FieldError(f"{a!r} is not an element of F2(s,t)")
        return a

    def add(self, a, b):
        return a + b

    sub = add

    def mul(self, a, b):
        return a * b

    def square(self, a):
        return a.square()

    frobenius = square

    def inv(self, a):
        return a.inverse()

    def div(self, a, b):
        return a / b

    def format(self, a) -> str:
        return format_rational(a)

    def pretty(self, a) -> str:
        return pretty_rational(a)

    def parse(self, text: str):
        return parse_rational(text)


# ---------------------------------------------------------------------------
# subspaces of the tower
# ---------------------------------------------------------------------------

def square_coordinates(x: RationalFunction) -> tuple[RationalFunction, ...]:
    """Coordinates of x over K^2 in the basis 1, s, t, st, as square roots.

    x = N/D = N*D / D^2; parity_decompose(N*D) = (A, B, C, E) gives
    x = (A/D)^2 + (B/D)^2 s + (C/D)^2 t + (E/D)^2 st. Returning (A/D, ...)
    turns K^2-linear algebra on x into K-linear algebra on the vector.
    """
    parts = parity_decompose(x.num * x.den)
    return tuple(RationalFunction(p, x.den) for p in parts)


def _rf_rref(rows: list[list[RationalFunction]]) -> list[list[RationalFunction]]:
    basis: list[list[RationalFunction]] = []
    pivots: list[int] = []
    for row in rows:
        row = list(row)
        for b, pc in zip(basis, pivots):
            if row[pc]:
                f = row[pc]
                row = [x + f * y for x, y in zip(row, b)]
        nz = next((i for i, x in enumerate(row) if x), None)
        if nz is None:
            continue
        f = row[nz].inverse()
        row = [x * f for x in row]
        for k, (b, pc) in enumerate(zip(basis, pivots)):
            if b[nz]:
                g = b[nz]
                basis[k] = [x + g * y for x, y in zip(b, row)]
        basis.append(row)
        pivots.append(nz)
    return basis


class Subspace:
    """A subspace of K given by generators, viewed as a space over K^2.

    For F2(s,t) each element is a 4-vector over K (``square_coordinates``)
    and membership is linear algebra in K^4. When every generator lies in a
    single parity class the membership test reduces to a parity-support check,
    which is cached in ``parity_support``.

    For GF(2^n), K^2 = K, and the span is computed as a GF(2)-subspace of
    bit vectors.
    """

    def __init__(self, field, generators: Sequence, name: str = "V"):
        self.field = field
        self.name = name
        self.generators = tuple(field.check(g) for g in generators)
        if field.is_finite:
            self._init_finite()
        else:
            self._init_rational()

    def _init_finite(self):
        F = self.field
        vecs = [F.mul(g, 1 << i) for g in self.generators for i in range(F.degree)]
        self._gf2_basis = _gf2_basis(vecs)
        self.dimension = len(self._gf2_basis)
        self.parity_support = None

    def _init_rational(self):
        coords = [square_coordinates(g) for g in self.generators if g]
        self._rref = _rf_rref([list(c) for c in coords])
        self._pivots = [next(i for i, x in enumerate(r) if x) for r in self._rref]
        self.dimension = len(self._rref)
        support = set()
        pure = True
        for c in coords:
            nz = [i for i, x in enumerate(c) if x]
            if len(nz) != 1:
                pure = False
            support.update(nz)
        self.parity_support = frozenset(support) if pure else None

    def __repr__(self):
        return f"Subspace({self.name}, dim={self.dimension})"

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def contains(self, x) -> bool:
        x = self.field.check(x)
        if self.field.is_finite:
            return _gf2_reduce(self._gf2_basis, x) == 0
        if not x:
            return True
        c = square_coordinates(x)
        if self.parity_support is not None:
            return all(i in self.parity_support for i, v in enumerate(c) if v)
        row = list(c)
        for b, pc in zip(self._rref, self._pivots):
            if row[pc]:
                f = row[pc]
                row = [u + f * v for u, v in zip(row, b)]
        return not any(row)

    def spanning_set(self) -> list:
        """Generators of this space as a K^2-space (finite: GF(2) basis)."""
        if self.field.is_finite:
            return list(self._gf2_basis)
        basis = (RationalField.one, S, T, S * T)
        return [reduce(lambda a, b: a + b, (c.square() * e for c, e in zip(r, basis) if c), RationalField.zero)
                for r in self._rref]

    def is_closed_under_products(self) -> bool:
        span = self.spanning_set()
        return all(self.contains(self.field.mul(a, b)) for a in span for b in span)


def _gf2_basis(vecs: Iterable[int]) -> list[int]:
    basis: list[int] = []
    for v in vecs:
        v = _gf2_reduce(basis, v)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return basis


def _gf2_reduce(basis: list[int], v: int) -> int:
    for b in basis:
        v = min(v, v ^ b)
    return v


class DescriptorError(ValueError):
    pass


class MixedDescriptor:
    """The tower (K, K', L, L') with membership oracles.

    ``Kprime`` and ``Lprime`` are given by generators over K^2, ``L`` by
    generators over K'. Containments K^2 <= K' <= K, K' <= L and
    K^2 <= L' <= K' are checked here, at construction.
    """

    def __init__(self, field, Kprime: Sequence, L: Sequence, Lprime: Sequence):
        self.field = field
        self.Kprime = Subspace(field, Kprime, "K'")
        kp_span = self.Kprime.spanning_set()
        self.L = Subspace(field, [field.mul(g, b) for g in L for b in kp_span], "L")
        self.Lprime = Subspace(field, Lprime, "L'")
        self.squares = Subspace(field, [field.one], "K^2")
        self.whole = Subspace(field, [field.one] if field.is_finite else [RationalField.one, S, T, S * T], "K")
        self.generators = {"K'": tuple(Kprime), "L": tuple(L), "L'": tuple(Lprime)}
        self._validate(kp_span)

    @classmethod
    def full(cls, field) -> "MixedDescriptor":
        """W(K) itself: K' = L = L' = K."""
        gens = [field.one] if field.is_finite else [field.one, S, T, S * T]
        return cls(field, gens, [field.one], gens)

    def _validate(self, kp_span):
        one = self.field.one
        if not self.Kprime.contains(one):
            raise DescriptorError("K^2 is not contained in K'")
        if not self.Kprime.is_closed_under_products():
            raise DescriptorError("K' is not closed under multiplication")
        for b in kp_span:
            if not self.L.contains(b):
                raise DescriptorError("K' is not contained in L")
        if not self.Lprime.contains(one):
            raise DescriptorError("K^2 is not contained in L'")
        for b in self.Lprime.spanning_set():
            if not self.Kprime.contains(b):
                raise DescriptorError("L' is not contained in K'")

    def space(self, name: str) -> Subspace:
        return {"K^2": self.squares, "K2": self.squares, "K'": self.Kprime, "Kprime": self.Kprime,
                "L": self.L, "L'": self.Lprime, "Lprime": self.Lprime, "K": self.whole}[name]

    def member(self, x, name: str) -> bool:
        return self.space(name).contains(x)

    @property
    def is_full(self) -> bool:
        """True when K' = L = L' = K, i.e. the structure is W(K)."""
        return all(self.space(n).dimension == self.whole.dimension for n in ("K'", "L", "L'"))


def member(x, space: Subspace) -> bool:
    return space.contains(x)
