import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixedquad.algebra import DescriptorError, FiniteField, MixedDescriptor, Poly, RationalField, RationalFunction, S, T
from mixedquad.coordinates import (CoordLine, CoordPoint, InfinityPerp, PatchBudgetError, build_mixed_patch,
                                   build_symplectic, incident, meet_infinity_perps, vy_witness_perps)

F8 = FiniteField(3)
QF = RationalField()


def lprime_desc():
    return MixedDescriptor(QF, [QF.one, S, T, S * T], [QF.one], [QF.one, S, T])


def test_incidence_examples_gf8():
    a, k, l = 0b10, 0b11, 0b101
    b = 0b1
    a2 = F8.add(F8.mul(a, k), b)
    k2 = F8.add(F8.mul(F8.square(a), k), l)
    assert incident(CoordPoint((a, l, a2)), CoordLine((k, b, k2)), F8)
    assert not incident(CoordPoint((a, l, a2 ^ 1)), CoordLine((k, b, k2)), F8)
    assert incident(CoordPoint((a, l, a2)), CoordLine((a, l)), F8)
    assert incident(CoordPoint((k, b)), CoordLine((k, b, k2)), F8)
    assert incident(CoordPoint((k, b)), CoordLine((k,)), F8)
    assert incident(CoordPoint((a,)), CoordLine(()), F8)
    assert incident(CoordPoint(()), CoordLine(()), F8)
    assert incident(CoordPoint(()), CoordLine((k,)), F8)
    assert not incident(CoordPoint(()), CoordLine((a, l)), F8)


def test_incidence_over_rational_field():
    a, k, l = S, T, S + 1
    b = QF.one
    a2 = a * k + b
    k2 = a * a * k + l
    assert incident(CoordPoint((a, l, a2)), CoordLine((k, b, k2)), QF)


def test_coordinates_outside_the_subspaces_are_rejected():
    D = lprime_desc()
    with pytest.raises(DescriptorError):
        incident(CoordPoint((S * T, QF.one)), CoordLine((S * T,)), D)


def test_build_symplectic_rejects_infinite_field():
    with pytest.raises(DescriptorError):
        build_symplectic(QF)


def test_patch_needs_generators_and_infinite_field():
    with pytest.raises(DescriptorError):
        build_mixed_patch(lprime_desc(), [])
    with pytest.raises(DescriptorError):
        build_mixed_patch(MixedDescriptor.full(F8), [1])


def test_patch_budget():
    with pytest.raises(PatchBudgetError) as exc:
        build_mixed_patch(lprime_desc(), [S, T], depth=3, budget=50)
    assert exc.value.budget == 50


def test_patch_counts_and_partial_linear_space():
    P = build_mixed_patch(MixedDescriptor.full(QF), [S], depth=1)
    assert P.counts() == (259, 259)
    M = P.materialize()
    for i in range(M.n_lines):
        for j in range(i + 1, M.n_lines):
            assert (M.line_points[i] & M.line_points[j]).bit_count() <= 1


def test_mixed_patch_respects_lprime():
    P = build_mixed_patch(lprime_desc(), [S, T], depth=1)
    assert S * T in P.in_L and S * T not in P.in_Lprime
    assert len(P.in_Lprime) < len(P.in_L)
    assert CoordPoint((S * T, QF.one)) not in P
    assert CoordPoint((S, T)) in P


small = st.builds(lambda ms: RationalFunction(Poly.from_monomials(ms)),
                  st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2)), max_size=3))


@settings(max_examples=200, deadline=None)
@given(small, small, small, small)
def test_perp_meet_lies_on_both(a, a2, c, c2):
    D = lprime_desc()
    Tp, Up = InfinityPerp(a, a2), InfinityPerp(c, c2)
    if Tp == Up:
        return
    m = meet_infinity_perps(D, Tp, Up)
    if a == c:
        assert m.point == CoordPoint((a,))
        return
    assert m.x == (a2 + c2) / (a + c)
    assert m.x_in_Lprime == D.member(m.x, "L'")
    if m.point is None:
        assert not m.x_in_Lprime
    else:
        assert Tp.contains(m.point, D) and Up.contains(m.point, D)


def test_witness_perps_shape():
    D = lprime_desc()
    T00, T01, T10, Tu = vy_witness_perps(D, S, T)
    u = S / (S + 1)
    assert Tu == InfinityPerp(u, u * T)
    assert meet_infinity_perps(D, Tu, T00).x == T
    assert meet_infinity_perps(D, Tu, T01).x == T + 1 + 1 / S
    far = meet_infinity_perps(D, Tu, T10)
    assert far.x == S * T and far.point is None
