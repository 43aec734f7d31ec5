from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Poly as SPoly
from sympy import symbols

from mixedquad.algebra import (DescriptorError, FieldError, FiniteField, MixedDescriptor, Poly, RationalField,
                               RationalFunction, S, T, format_rational, parity_decompose, parse_expr,
                               parse_rational, poly_gcd, pretty_rational, square_coordinates, tits_endo)
from oracles import NaiveField

s_, t_ = symbols("s t")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_field_axioms_exhaustive(n):
    F = FiniteField(n)
    E = list(F.elements())
    for a, b in product(E, repeat=2):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.add(a, a) == 0
    for a, b, c in product(E, repeat=3):
        assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    for a in E[1:]:
        assert F.mul(a, F.inv(a)) == 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_multiplication_matches_sympy(n):
    F, N = FiniteField(n), NaiveField(n)
    for a, b in product(F.elements(), repeat=2):
        assert F.mul(a, b) == N.mul(a, b)


def test_gf8_generator_relation():
    F = FiniteField(3)
    x = 0b10
    assert F.mul(x, F.mul(x, x)) == F.add(x, 1)


def test_inverse_of_zero_raises():
    with pytest.raises((FieldError, ZeroDivisionError)):
        FiniteField(2).inv(0)


@pytest.mark.parametrize("q", [3, 6, 1])
def test_of_order_rejects_non_powers(q):
    with pytest.raises(FieldError):
        FiniteField.of_order(q)


@pytest.mark.parametrize("q", [2, 8, 32])
def test_tits_squares_to_frobenius(q):
    F = FiniteField.of_order(q)
    th = tits_endo(F)
    assert th is not None
    for x in F.elements():
        assert th(th(x)) == F.mul(x, x)
        assert th.inverse(th(x)) == x


@pytest.mark.parametrize("q", [4, 16])
def test_no_tits_in_even_degree(q):
    assert tits_endo(FiniteField.of_order(q)) is None


def test_finite_format_parse_round_trip():
    F = FiniteField(3)
    for a in F.elements():
        assert F.parse(F.format(a)) == a


# ---------------------------------------------------------------------------
# F2(s,t)
# ---------------------------------------------------------------------------

monos = st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), max_size=6)


def poly_of(ms):
    return Poly.from_monomials(ms)


rational = st.builds(lambda a, b: RationalFunction(poly_of(a), poly_of(b) or Poly([1])), monos, monos)


def sym(p: Poly):
    return SPoly(sum((s_ ** i * t_ ** j for i, j in p.monomials()), 0 * s_), s_, t_, modulus=2)


def test_parity_decompose_examples():
    # s^3 t^2 + s t + 1 = 1^2 + (s t)^2 s + 0 t + 1^2 st
    p = Poly.from_monomials([(3, 2), (1, 1), (0, 0)])
    A, B, C, D = parity_decompose(p)
    assert A == Poly([1])
    assert B == Poly.from_monomials([(1, 1)])
    assert not C
    assert D == Poly([1])
    assert parity_decompose(Poly.from_monomials([(0, 1)])) == (Poly(), Poly(), Poly([1]), Poly())


@settings(max_examples=1000, deadline=None)
@given(monos)
def test_parity_decompose_round_trip(ms):
    p = poly_of(ms)
    A, B, C, D = parity_decompose(p)
    s, t = Poly.monomial(1, 0), Poly.monomial(0, 1)
    assert A.square() + B.square() * s + C.square() * t + D.square() * s * t == p


@settings(max_examples=300, deadline=None)
@given(monos, monos, monos)
def test_gcd_matches_sympy(a, b, c):
    A, B, C = poly_of(a), poly_of(b), poly_of(c)
    x, y = A * C, B * C
    g = poly_gcd(x, y)
    if not x and not y:
        return
    want = sym(x).gcd(sym(y))
    assert sym(g) == want


def test_inverse_pair():
    F = RationalField()
    assert F.mul(F.div(S, T), F.div(T, S)) == F.one
    assert (S / T) * (T / S) == 1


@settings(max_examples=300, deadline=None)
@given(rational)
def test_rational_wire_round_trip(x):
    assert parse_rational(format_rational(x)) == x
    assert parse_expr(pretty_rational(x)) == x


def test_pretty_examples():
    assert pretty_rational(S * T / (S + 1)) == "s*t/(s+1)"
    assert pretty_rational(1 / (S * T)) == "1/(s*t)"
    assert parse_expr("s*t/(s+1)") == S * T / (S + 1)


def squares_up_to(deg):
    """Brute-force K^2 elements: squares of small rational functions."""
    out = []
    for a in range(1, 1 << 4):
        for b in range(1, 1 << 4):
            num = Poly.from_monomials([(i % 2, i // 2) for i in range(4) if a >> i & 1])
            den = Poly.from_monomials([(i % 2, i // 2) for i in range(4) if b >> i & 1])
            out.append(RationalFunction(num, den).square())
    return out


def test_square_membership_brute_force():
    D = MixedDescriptor.full(RationalField())
    K2 = D.space("K^2")
    for x in squares_up_to(1):
        assert K2.contains(x)
    for x in (S, T, S * T, S + T, S / (T + 1), S * S + T):
        assert not K2.contains(x)


def lprime_desc():
    F = RationalField()
    return MixedDescriptor(F, [F.one, S, T, S * T], [F.one], [F.one, S, T])


def test_member_examples():
    D = lprime_desc()
    assert D.member(S, "L'")
    assert D.member(T + S * S, "L'")
    assert D.member(S / (T * T + 1), "L'")
    assert not D.member(S * T, "L'")
    assert not D.member(S * T / (S + 1) ** 2, "L'")
    assert D.member(S * T, "K'")


@settings(max_examples=1000, deadline=None)
@given(rational, rational, st.integers(0, 3), st.integers(0, 3))
def test_lprime_is_k2_closed(a, b, i, j):
    """L' = K^2 + K^2 s + K^2 t is closed under sums and K^2-scaling, and st stays out."""
    D = lprime_desc()
    gens = [RationalFunction.const(1), S, T]
    x = a.square() * gens[i % 3] + b.square() * gens[j % 3]
    assert D.member(x, "L'")
    if a:
        assert not D.member(a.square() * S * T, "L'")


@settings(max_examples=300, deadline=None)
@given(rational)
def test_square_coordinates_reassemble(x):
    c = square_coordinates(x)
    assert c[0].square() + c[1].square() * S + c[2].square() * T + c[3].square() * S * T == x


def test_descriptor_validation():
    F = RationalField()
    with pytest.raises(DescriptorError):
        MixedDescriptor(F, [F.one, S], [F.one], [F.one, T])     # L' not inside K'
    with pytest.raises(DescriptorError):
        MixedDescriptor(F, [F.one, S, T], [F.one], [F.one])    # K' not closed: st missing
    assert MixedDescriptor.full(F).is_full
    assert not lprime_desc().is_full
