from itertools import product

import pytest

from mixedquad.algebra import MixedDescriptor, RationalField, S, T
from mixedquad.coordinates import build_symplectic, vy_witness_perps
from mixedquad.dualnet import (DeltaError, DualNet, build_delta_plane, check_ld, check_vy, extract_dual_net,
                               is_plane_collineation, mixed_net_patch, net_fragment, phi_map, tau_map, theta_iso,
                               verify_theta, vertical_of_line, witness_lines)
from mixedquad.incidence import IncidenceStructure, perp_plane, verify_projective_plane
from mixedquad.verdict import FAIL, PASS, PASS_ON_PATCH, iter_bits

QF = RationalField()


@pytest.mark.parametrize("q", [2, 4, 8])
def test_net_sizes(q):
    net = extract_dual_net(build_symplectic(q), 0)
    assert net.n_points == q * (q + 1)
    assert net.n_blocks == q * q
    assert len(net.verticals) == q + 1
    assert all(bin(b).count("1") == q + 1 for b in net.blocks)
    assert net.net_axiom_violation() is None


@pytest.mark.parametrize("q", [2, 4])
def test_parallel_classes_partition_points(q):
    net = extract_dual_net(build_symplectic(q), 0)
    classes = net.parallel_classes()
    assert sorted(classes) == sorted(net.verticals)
    acc = 0
    for c in classes:
        assert acc & c == 0
        acc |= c
    assert acc == (1 << net.n_points) - 1


def test_fano_completion(W2):
    for x in range(W2.n_points):
        C = extract_dual_net(W2, x).completion()
        assert C.n_points == C.n_lines == 7
        cert = verify_projective_plane(C)
        assert cert.ok and cert.order == 2


def test_vy_and_ld_every_net_of_w2(W2):
    for x in range(W2.n_points):
        net = extract_dual_net(W2, x)
        assert check_vy(net).status == PASS
        assert check_vy(net, include_vertical=True).status == PASS
        v = check_ld(net)
        assert v.status == PASS and v.exhaustive
        for L in W2.lines_of(x):
            assert check_ld(net, vertical_of_line(net, L)).passed


def test_vy_budget_samples(W8):
    net = extract_dual_net(W8, 0)
    v = check_vy(net, budget=10_000, seed=3)
    assert v.passed and not v.exhaustive and v.tuples == 10_000


@pytest.mark.parametrize("q", [2, 4])
def test_delta_planes(q):
    W = build_symplectic(q)
    net = extract_dual_net(W, 0)
    M = net.meet
    L = 0
    others = [K for K in range(1, net.n_blocks) if M[L, K] >= 0]
    for K in others[:3]:
        dp = build_delta_plane(net, L, K)
        cert = verify_projective_plane(dp.plane)
        assert cert.ok and cert.order == q


def test_delta_needs_meeting_blocks(W2):
    net = extract_dual_net(W2, 0)
    with pytest.raises(DeltaError):
        build_delta_plane(net, 0, 0)


@pytest.mark.parametrize("q", [2, 4])
def test_theta_phi_tau(q):
    W = build_symplectic(q)
    p1 = 0
    opp = [y for y in range(W.n_points) if not W.collinear(p1, y)]
    p2 = opp[0]
    iso = theta_iso(W, p1, p2)
    verify_theta(W, iso)
    assert len(iso.point_to_block) == len(perp_plane(W, p1).host_points)
    assert len(set(iso.block_to_point.values())) == len(iso.block_to_point)
    third = [z for z in range(W.n_points) if not W.collinear(z, p1) and not W.collinear(z, p2)]
    p3, p3b = third[0], third[-1]
    phi = phi_map(W, p1, p3, p2)
    assert sorted(phi) == sorted(perp_plane(W, p1).host_points)
    assert sorted(phi.values()) == sorted(perp_plane(W, p2).host_points)
    tau = tau_map(W, p1, p2, p3, p3b)
    assert is_plane_collineation(W, p2, tau)


def test_plane_collineation_rejects_bad_map(W2):
    host = perp_plane(W2, 0).host_points
    swap = {x: x for x in host}
    a, b = host[0], host[1]
    swap[a], swap[b] = b, a
    # every involution of the Fano plane moves four points, so no transposition is a collineation
    assert not is_plane_collineation(W2, 0, swap)


# ---------------------------------------------------------------------------
# sensitivity on a non-Desarguesian plane of order 9 (nearfield)
# ---------------------------------------------------------------------------

GF9 = [(a, b) for a in range(3) for b in range(3)]       # a + b i with i^2 = -1


def _add(x, y):
    return (x[0] + y[0]) % 3, (x[1] + y[1]) % 3


def _mul(x, y):
    return (x[0] * y[0] - x[1] * y[1]) % 3, (x[0] * y[1] + x[1] * y[0]) % 3


_SQUARES = {_mul(x, x) for x in GF9 if x != (0, 0)}


def _near(x, y):
    if y == (0, 0):
        return y
    return _mul(x, y) if y in _SQUARES else _mul(_mul(x, _mul(x, x)), y)


def plane9(mult):
    pts = [("a", x, y) for x in GF9 for y in GF9] + [("m", m) for m in GF9] + [("inf",)]
    idx = {p: i for i, p in enumerate(pts)}
    lines = [[idx[("a", x, _add(mult(x, m), b))] for x in GF9] + [idx[("m", m)]] for m, b in product(GF9, repeat=2)]
    lines += [[idx[("a", c, y)] for y in GF9] + [idx[("inf",)]] for c in GF9]
    lines.append([idx[("m", m)] for m in GF9] + [idx[("inf",)]])
    return IncidenceStructure.from_blocks(len(pts), lines)


def net_of_plane(P, x):
    """Dual net of a projective plane at x: blocks are the lines missing x."""
    host = [p for p in range(P.n_points) if p != x]
    loc = {h: i for i, h in enumerate(host)}

    def local(bits):
        return sum(1 << loc[h] for h in iter_bits(bits & ~(1 << x)))

    blocks = [local(b) for b in P.line_points if not b >> x & 1]
    verts = [local(b) for b in P.line_points if b >> x & 1]
    return DualNet(len(host), blocks, verts, [str(h) for h in host], [str(i) for i in range(len(blocks))])


def confirm_ld_witness(net, w):
    """Recheck an (LD) counterexample with plain set arithmetic."""
    vo = net.vertical_of
    T1, T2 = w["triangle1"], w["triangle2"]
    assert all(a != b and vo[a] == vo[b] for a, b in zip(T1, T2))
    assert len({vo[a] for a in T1}) == 3
    blocks = [frozenset(iter_bits(b)) for b in net.blocks]

    def side(a, b):
        return next(B for B in blocks if a in B and b in B)

    meets = []
    for i in range(3):
        a, b = [T1[j] for j in range(3) if j != i]
        c, d = [T2[j] for j in range(3) if j != i]
        common = side(a, b) & side(c, d)
        meets.append(vo[next(iter(common))] if common else None)
    on = [m for m in meets if m is not None]
    assert len(on) >= 2 and any(meets.count(v) == 2 for v in set(on)) and len(set(meets)) > 1


def test_ld_detects_nearfield_plane():
    P = plane9(_near)
    assert verify_projective_plane(P).order == 9
    net = net_of_plane(P, 0)
    v = check_ld(net)
    assert v.status == FAIL
    confirm_ld_witness(net, v.witness)


def test_ld_passes_on_desarguesian_plane_of_order_9():
    P = plane9(_mul)
    assert check_ld(net_of_plane(P, 0)).status == PASS


# ---------------------------------------------------------------------------
# finite patches over F2(s,t)
# ---------------------------------------------------------------------------

def mixed(Lprime):
    return MixedDescriptor(QF, [QF.one, S, T, S * T], [QF.one], Lprime)


def test_mixed_vy_fails_when_st_not_in_lprime():
    desc = mixed([QF.one, S, T])
    net = mixed_net_patch(desc, vy_witness_perps(desc, S, T))
    assert not net.exact
    v = check_vy(net)
    assert v.status == FAIL
    frag = net_fragment(net, witness_lines(v.witness))
    assert frag.n_lines >= 3
    with pytest.raises(DeltaError):
        build_delta_plane(net, 0, 1, vy=v)


def test_mixed_vy_passes_on_patch_when_st_in_lprime():
    desc = mixed([QF.one, S, T, S * T])
    net = mixed_net_patch(desc, vy_witness_perps(desc, S, T))
    assert check_vy(net).status == PASS_ON_PATCH
