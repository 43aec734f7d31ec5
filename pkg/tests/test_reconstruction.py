import pytest

from mixedquad.incidence import dumps_gq, is_projective_point, loads_gq, verify_gq
from mixedquad.inversive import dumps_cg, loads_cg, remove_flag
from mixedquad.reconstruction import (ReconstructionError, absolute_points, attach_host, check_absolute_regular,
                                      check_collinearity_lemma, check_distance_three, check_dual_net_description,
                                      check_triangle_free, check_two_absolute, natural_isomorphism, reconstruct,
                                      symplectic_source)
from mixedquad.symmetry import polarity_violation
from oracles import naive_cg, naive_reconstruction_flags


@pytest.mark.parametrize("fixture,q", [("R2", 2), ("R8", 8)])
def test_counts_and_order(request, fixture, q):
    R = request.getfixturevalue(fixture)
    Q = R.quadrangle
    n = (q + 1) * (q * q + 1)
    assert Q.n_points == Q.n_lines == n
    assert verify_gq(Q).order == (q, q)
    assert polarity_violation(Q, R.polarity) is None
    assert absolute_points(R) == list(range(q * q + 1))


@pytest.mark.parametrize("fixture", ["R2", "R8"])
def test_flags_match_rules(request, fixture):
    R = request.getfixturevalue(fixture)
    assert set(R.quadrangle.flags()) == naive_reconstruction_flags(naive_cg(R.geometry))


@pytest.mark.parametrize("fixture", ["R2", "R8"])
def test_structural_lemmas(request, fixture):
    R = request.getfixturevalue(fixture)
    Q = R.quadrangle
    for v in (check_collinearity_lemma(R), check_triangle_free(Q), check_distance_three(Q),
              check_absolute_regular(R), check_two_absolute(R), check_dual_net_description(R)):
        assert v.passed, v.to_dict()


@pytest.mark.parametrize("q", [2, 8])
def test_natural_isomorphism(request, q):
    W = request.getfixturevalue(f"W{q}")
    rho = request.getfixturevalue(f"rho{q}")
    R = request.getfixturevalue(f"R{q}")
    v = natural_isomorphism(W, rho, R)
    assert v.passed
    assert sorted(v.detail["points"]) == list(range(W.n_points))


def test_isomorphism_needs_host(W2, rho2, G2):
    bare = loads_cg(dumps_cg(G2))
    with pytest.raises(ReconstructionError):
        natural_isomorphism(W2, rho2, reconstruct(bare))


def test_attach_host_restores_isomorphism(W8, rho8, G8):
    text = dumps_cg(G8)
    G = attach_host(loads_cg(text), symplectic_source(loads_gq(dumps_gq(W8))))
    assert natural_isomorphism(W8, rho8, reconstruct(G)).passed


def test_symplectic_source_rejects_other_sizes():
    from mixedquad.incidence import IncidenceStructure
    with pytest.raises(ReconstructionError):
        symplectic_source(IncidenceStructure.from_blocks(3, [[0, 1], [1, 2], [0, 2]]))


def test_non_absolute_points_projective_q8(R8):
    Q = R8.quadrangle
    for p in range(R8.n_base, Q.n_points, 37):
        assert is_projective_point(Q, p)


def test_bad_geometry_is_refused(G2):
    c = 0
    p = next(x for x in range(G2.n_points) if G2.circles[c] >> x & 1 and x != G2.gnarl[c])
    H = remove_flag(G2, c, p)
    with pytest.raises(ReconstructionError) as exc:
        reconstruct(H)
    assert exc.value.witness is not None

