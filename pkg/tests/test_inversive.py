import pytest

from mixedquad.dualnet import check_vy, extract_dual_net
from mixedquad.inversive import (AXIOMS, CircleGeometry, CircleGeometryError, add_flag, apply_mutation,
                                 check_axiom, check_lemmas, check_mp1, check_mp1_prime, check_st2, dumps_cg,
                                 loads_cg, reassign_gnarl, remove_flag, single_mutations)
from mixedquad.incidence import ParseError
from mixedquad.verdict import iter_bits
from oracles import NAIVE_AXIOMS, ax_st2, confirm_witness, naive_cg


@pytest.mark.parametrize("fixture,points,circles,size", [("G2", 5, 10, 3), ("G8", 65, 520, 9)])
def test_sizes(request, fixture, points, circles, size):
    G = request.getfixturevalue(fixture)
    assert G.n_points == points and G.n_circles == circles
    assert {bin(b).count("1") for b in G.circles} == {size}
    assert all(G.circles[c] >> G.gnarl[c] & 1 for c in range(G.n_circles))


def test_circles_per_point_and_pair(G8):
    assert {bin(t).count("1") for t in G8.through} == {72}
    for x in range(0, 65, 7):
        for y in range(x + 1, 65, 11):
            assert bin(G8.through[x] & G8.through[y]).count("1") == 9


def test_axioms_match_naive_oracle_q2(G2):
    N = naive_cg(G2)
    for name in AXIOMS:
        assert check_axiom(G2, name).passed == NAIVE_AXIOMS[name](N) is True
    assert check_st2(G2, literal=True).passed == ax_st2(N, literal=True) is False


@pytest.mark.parametrize("name", [n for n in AXIOMS if n not in ("TR", "F")])
def test_axioms_exhaustive_q8(G8, name):
    v = check_axiom(G8, name)
    assert v.passed and v.exhaustive


def test_st2_literal_fails(G2):
    v = check_st2(G2, literal=True)
    assert not v.passed and v.check == "ST2-literal"


def test_lemmas(G2, G8):
    for G in (G2, G8):
        assert all(v.passed for v in check_lemmas(G))


def test_every_single_mutation_against_oracle_q2(G2):
    muts = single_mutations(G2)
    assert len(muts) == 60
    for m in muts:
        H = apply_mutation(G2, m)
        N = naive_cg(H)
        for name in AXIOMS:
            v = check_axiom(H, name)
            assert v.passed == NAIVE_AXIOMS[name](N), (m, name)
            if not v.passed:
                assert confirm_witness(N, name, v.witness), (m, name, v.witness)


def test_mutation_helpers_reject_noops(G2):
    c = 0
    g = G2.gnarl[c]
    off = next(p for p in range(G2.n_points) if not G2.circles[c] >> p & 1)
    with pytest.raises(CircleGeometryError):
        reassign_gnarl(G2, c, g)
    with pytest.raises(CircleGeometryError):
        remove_flag(G2, c, g)
    with pytest.raises(CircleGeometryError):
        add_flag(G2, c, next(iter_bits(G2.circles[c])))
    assert add_flag(G2, c, off).circles[c] >> off & 1


def test_cg_text_round_trip(G2, G8):
    for G in (G2, G8):
        text = dumps_cg(G)
        H = loads_cg(text)
        assert dumps_cg(H) == text
        assert H.circles == G.circles and H.gnarl == G.gnarl


def test_cg_parse_errors():
    with pytest.raises(ParseError) as exc:
        loads_cg("# CG v1\npoint 0\ncircle 0 0 1\n")
    assert exc.value.lineno == 3
    with pytest.raises(ParseError):
        loads_cg("# CG v1\npoint 0\npoint 1\npoint 2\ncircle 0 0 1 2 gnarl 5\n")


def test_strict_geometry_rules():
    with pytest.raises(CircleGeometryError):
        CircleGeometry(4, [0b0011], [0])
    with pytest.raises(CircleGeometryError):
        CircleGeometry(4, [0b0111], [3])


def test_touch_is_symmetric(G8):
    for c in range(0, G8.n_circles, 13):
        for d in iter_bits(G8.touches[c]):
            assert G8.touches[d] >> c & 1
            assert G8.touch_point(c, d) == G8.touch_point(d, c)


def test_mp1_prime_implies_mp1(G2):
    for m in single_mutations(G2):
        H = apply_mutation(G2, m)
        if check_mp1_prime(H).passed:
            assert check_mp1(H).passed


def test_f_agrees_with_vy_on_nets_q2(W2, R2):
    """[F] holds on the circle geometry and (VY) on every dual net of the rebuilt quadrangle."""
    Q = R2.quadrangle
    assert check_axiom(R2.geometry, "F").passed
    for x in range(Q.n_points):
        assert check_vy(extract_dual_net(Q, x)).passed
