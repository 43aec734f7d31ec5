import pytest

from mixedquad.coordinates import build_symplectic
from mixedquad.dualnet import check_ld, extract_dual_net, vertical_of_line
from mixedquad.incidence import IncidenceError
from mixedquad.symmetry import (Collineation, absolute_elements, acts_regularly, build_symmetry,
                                check_centric_subquadrangle, collineation_violation, find_polarity, is_axis_of_symmetry,
                                is_center_of_symmetry, is_group, polarity_violation, search_symmetries,
                                symmetries_about)
from oracles import naive_absolute_points


@pytest.mark.parametrize("q,n", [(2, 1), (8, 3)])
def test_polarity_and_ovoid_match_hand_formulas(q, n):
    W = build_symplectic(q)
    rho = find_polarity(W)
    assert rho is not None and polarity_violation(W, rho) is None
    pts, lines = absolute_elements(W, rho)
    assert len(pts) == len(lines) == q * q + 1
    assert {W.point_label(p) for p in pts} == naive_absolute_points(n)
    assert {rho.point_to_line[p] for p in pts} == set(lines)


def test_no_polarity_for_q4(W4):
    assert find_polarity(W4) is None


def test_broken_polarity_is_caught(W2, rho2):
    p2l = list(rho2.point_to_line)
    p2l[0], p2l[1] = p2l[1], p2l[0]
    bad = type(rho2)(tuple(p2l), rho2.line_to_point, rho2.theta_power)
    assert polarity_violation(W2, bad) is not None


def fixes_lines_meeting(W, g, L):
    pts = W.line_points[L]
    return all(g.lines[m] == m for m in range(W.n_lines) if W.line_points[m] & pts)


def test_symmetries_about_every_flag_q2(W2):
    for L in range(W2.n_lines):
        for p in W2.points_of(L):
            M = next(m for m in W2.lines_of(p) if m != L)
            group = symmetries_about(W2, L, p, M)
            assert len(group) == 2
            assert is_group(group)
            assert acts_regularly(W2, group, L)
            for g in group:
                assert collineation_violation(W2, g) is None
                assert fixes_lines_meeting(W2, g, L)


def test_symmetry_search_counts_q2(W2):
    assert len(search_symmetries(W2, 0)) == 2


def test_axis_iff_ld_q2(W2):
    for L in range(W2.n_lines):
        for p in W2.points_of(L):
            net = extract_dual_net(W2, p)
            ld = check_ld(net, vertical_of_line(net, L)).passed
            assert ld == is_axis_of_symmetry(W2, L, witnesses=10) is True


def test_center_of_symmetry(W2):
    assert all(is_center_of_symmetry(W2, x) for x in range(W2.n_points))


def test_build_symmetry_rejects_bad_input(W2):
    L = 0
    p = W2.points_of(L)[0]
    with pytest.raises(IncidenceError):
        build_symmetry(W2, L, p, p, p)


def test_composition_and_inverse(W2):
    L = 0
    p = W2.points_of(L)[0]
    M = next(m for m in W2.lines_of(p) if m != L)
    g = symmetries_about(W2, L, p, M)[1]
    assert (g * g.inverse()).is_identity()
    assert (g * Collineation.identity(W2)) == g


def test_centric_subquadrangle(W2, W4):
    pmap = [W4.point_id(W2.point_label(p)) for p in range(W2.n_points)]
    lmap = [W4.line_id(W2.line_label(l)) for l in range(W2.n_lines)]
    assert check_centric_subquadrangle(W4, W2, (pmap, lmap))
    with pytest.raises(IncidenceError):
        check_centric_subquadrangle(W4, W2, (pmap, lmap[::-1]))
