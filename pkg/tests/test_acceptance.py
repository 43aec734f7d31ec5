"""Acceptance suite: one test per criterion; the terminal summary prints one
PASS/FAIL line for each."""

import random
import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixedquad.algebra import MixedDescriptor, Poly, RationalField, RationalFunction, S, T
from mixedquad.coordinates import build_symplectic, meet_infinity_perps, vy_witness_perps
from mixedquad.dualnet import check_ld, check_vy, extract_dual_net, mixed_net_patch, vertical_of_line
from mixedquad.incidence import (is_projective_point, is_regular_line, is_regular_point, perp_plane, verify_gq,
                                 verify_projective_plane)
from mixedquad.inversive import AXIOMS, apply_mutation, check_axiom, check_lemmas, single_mutations
from mixedquad.reconstruction import (check_absolute_regular, check_collinearity_lemma, check_distance_three,
                                      check_dual_net_description, check_triangle_free, check_two_absolute,
                                      natural_isomorphism, reconstruct)
from mixedquad.symmetry import (absolute_elements, acts_regularly, find_polarity, is_axis_of_symmetry, is_group,
                                polarity_violation, symmetries_about)
from mixedquad.verdict import FAIL, PASS, PASS_ON_PATCH
from oracles import NAIVE_AXIOMS, confirm_witness, naive_absolute_points, naive_cg

QF = RationalField()
W8_NET_BUDGET = 10 ** 8          # total (VY) + (LD) tuples over all dual nets of W(8)
SEED = 20240


@pytest.mark.criterion(1, "W(q) construction, order (q,q), counts 15/85/585, < 5 s")
@pytest.mark.parametrize("q,n", [(2, 15), (4, 85), (8, 585)])
def test_c1_construction(q, n):
    t = time.perf_counter()
    W = build_symplectic(q)
    cert = verify_gq(W)
    elapsed = time.perf_counter() - t
    assert cert.ok and cert.order == (q, q)
    assert W.n_points == W.n_lines == n
    assert elapsed < 5.0


@pytest.mark.criterion(2, "all points/lines regular, all points projective, perp-planes of order q")
@pytest.mark.parametrize("q", [2, 4, 8])
def test_c2_regularity_suite(q):
    W = build_symplectic(q)
    for x in range(W.n_points):
        assert is_regular_point(W, x)
        assert is_regular_line(W, x)
        assert is_projective_point(W, x, assume_regular=True)
        cert = verify_projective_plane(perp_plane(W, x, assume_projective=True).plane)
        assert cert.ok and cert.order == q


@pytest.mark.criterion(3, "(VY)/(LD) on every dual net of W(2) exhaustively and W(8) within 1e8 tuples; Fano")
def test_c3_dual_net_suite(W2, W8):
    for x in range(W2.n_points):
        net = extract_dual_net(W2, x)
        vy, ld = check_vy(net), check_ld(net)
        assert vy.status == ld.status == PASS and vy.exhaustive and ld.exhaustive
        C = net.completion()
        cert = verify_projective_plane(C)
        assert C.n_points == C.n_lines == 7 and cert.ok and cert.order == 2
    per_check = W8_NET_BUDGET // (2 * W8.n_points)
    used = 0
    for x in range(W8.n_points):
        net = extract_dual_net(W8, x)
        vy = check_vy(net, budget=per_check, seed=SEED + x)
        ld = check_ld(net, budget=per_check, seed=SEED + x)
        assert vy.status == PASS, vy.witness
        assert ld.status == PASS, ld.witness
        used += vy.tuples + ld.tuples
    assert used <= W8_NET_BUDGET
    print(f"W(8) dual nets: {W8.n_points} nets, {used} tuples")


@pytest.mark.criterion(4, "LD at vertical(L) iff axis of symmetry; q symmetries acting regularly")
def test_c4_ld_iff_axis(W2, W8):
    for L in range(W2.n_lines):
        axis = is_axis_of_symmetry(W2, L, witnesses=W2.n_lines)
        for p in W2.points_of(L):
            net = extract_dual_net(W2, p)
            ld = check_ld(net, vertical_of_line(net, L)).passed
            assert ld == axis is True
            M = next(m for m in W2.lines_of(p) if m != L)
            group = symmetries_about(W2, L, p, M)
            assert len(group) == 2 and is_group(group) and acts_regularly(W2, group, L)
    for L in (0, 100, 584):
        p = W8.points_of(L)[0]
        net = extract_dual_net(W8, p)
        assert check_ld(net, vertical_of_line(net, L)).passed
        assert is_axis_of_symmetry(W8, L)
        M = next(m for m in W8.lines_of(p) if m != L)
        group = symmetries_about(W8, L, p, M)
        assert len(group) == 8 and is_group(group) and acts_regularly(W8, group, L)


@pytest.mark.criterion(5, "polarity for q in {2,8} with ovoid 5/65; none for q=4; ovoid of W(2)")
def test_c5_polarity_suite(W2, W4, W8):
    for W, n in ((W2, 1), (W8, 3)):
        q = W.field.order
        rho = find_polarity(W)
        assert rho is not None and polarity_violation(W, rho) is None
        pts, _ = absolute_elements(W, rho)
        assert len(pts) == q * q + 1
        assert {W.point_label(p) for p in pts} == naive_absolute_points(n)
    assert find_polarity(W4) is None
    pts, _ = absolute_elements(W2, find_polarity(W2))
    assert {W2.point_label(p) for p in pts} == {"(inf)", "(0,0,0)", "(0,1,1)", "(1,0,1)", "(1,1,0)"}


@pytest.mark.criterion(6, "inversive planes 10x3 / 520x9; axioms exhaustive, TR/F >= 1e6 at q=8; lemmas")
def test_c6_inversive_suite(G2, G8):
    for G, q in ((G2, 2), (G8, 8)):
        assert G.n_circles == q * (q * q + 1)
        assert {b.bit_count() for b in G.circles} == {q + 1}
        for name in ("MP1'", "MP2", "CH1", "CH2", "ST1", "ST2"):
            v = check_axiom(G, name)
            assert v.status == PASS and v.exhaustive, name
        for v in check_lemmas(G):
            assert v.status == PASS and v.exhaustive, v.check
    for name in ("TR", "F"):
        v = check_axiom(G2, name)
        assert v.status == PASS and v.exhaustive
        v = check_axiom(G8, name, budget=10 ** 6, seed=SEED)
        assert v.status == PASS and v.tuples >= 10 ** 6, v.witness


@pytest.mark.criterion(7, "reconstruction is a GQ(q,q), naturally isomorphic to W(q); lemma checks")
def test_c7_reconstruction(W2, W8, rho2, rho8, G2, G8):
    for W, rho, G, q in ((W2, rho2, G2, 2), (W8, rho8, G8, 8)):
        R = reconstruct(G)
        Q = R.quadrangle
        assert verify_gq(Q).order == (q, q)
        assert natural_isomorphism(W, rho, R).passed
        for v in (check_collinearity_lemma(R), check_triangle_free(Q), check_distance_three(Q),
                  check_absolute_regular(R), check_two_absolute(R), check_dual_net_description(R)):
            assert v.status == PASS and v.exhaustive, v.check


def _lprime_element(parts):
    a, b, c = (RationalFunction(Poly.from_monomials(p)) for p in parts)
    return a.square() + b.square() * S + c.square() * T


monos = st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2)), max_size=3)
lprime_elem = st.builds(lambda a, b, c: _lprime_element((a, b, c)), monos, monos, monos)


@pytest.mark.criterion(8, "mixed (VY) fails exactly because st is not in L'; L'=K' gives an intersection")
def test_c8_named_perps():
    Kp = [QF.one, S, T, S * T]
    small = MixedDescriptor(QF, Kp, [QF.one], [QF.one, S, T])
    full = MixedDescriptor(QF, Kp, [QF.one], Kp)
    T00, T01, T10, Tu = vy_witness_perps(small, S, T)
    u = S / (S + 1)
    assert (Tu.a, Tu.a2) == (u, u * T)
    assert meet_infinity_perps(small, Tu, T00).point is not None
    assert meet_infinity_perps(small, Tu, T01).point is not None
    far = meet_infinity_perps(small, Tu, T10)
    assert far.x == S * T and far.point is None
    assert small.member(S * T, "L'") is False
    v = check_vy(mixed_net_patch(small, [T00, T01, T10, Tu]))
    assert v.status == FAIL
    far_full = meet_infinity_perps(full, Tu, T10)
    assert far_full.x == S * T and far_full.point is not None
    assert check_vy(mixed_net_patch(full, vy_witness_perps(full, S, T))).status == PASS_ON_PATCH


@pytest.mark.criterion(8, "mixed (VY) fails exactly because st is not in L'; L'=K' gives an intersection")
@settings(max_examples=60, deadline=None)
@given(lprime_elem, lprime_elem)
def test_c8_vy_iff_membership(kinv, k2):
    """With 1/k and k' in L' the fourth perp meets the first two sides; (VY) fails iff kk' is not in L'."""
    small = MixedDescriptor(QF, [QF.one, S, T, S * T], [QF.one], [QF.one, S, T])
    if not kinv or kinv == QF.one:
        return
    k = kinv.inverse()
    perps = vy_witness_perps(small, k, k2)
    assert meet_infinity_perps(small, perps[3], perps[0]).point is not None
    assert meet_infinity_perps(small, perps[3], perps[1]).point is not None
    net = mixed_net_patch(small, perps)
    v = check_vy(net)
    inside = small.member(k * k2, "L'")
    assert (v.status == FAIL) == (not inside)


@pytest.mark.criterion(9, "each axiom checker catches >= 20 oracle-labelled single mutations at q=2")
def test_c9_mutation_sensitivity(G2):
    muts = single_mutations(G2)
    rng = random.Random(SEED)
    for name in AXIOMS:
        oracle = NAIVE_AXIOMS[name]
        violating = [m for m in muts if not oracle(naive_cg(apply_mutation(G2, m)))]
        assert len(violating) >= 20, name
        for m in rng.sample(violating, 20):
            H = apply_mutation(G2, m)
            v = check_axiom(H, name)
            assert v.status == FAIL, (name, m)
            assert confirm_witness(naive_cg(H), name, v.witness), (name, m, v.witness)
