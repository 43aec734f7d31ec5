"""The ``report`` subcommand: run the check suite on W(q) and write
verdicts.tsv plus PNG figures into one directory."""

from __future__ import annotations

import os
import random

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .algebra import FiniteField, tits_endo  # noqa: E402
from .cli import digest, row  # noqa: E402
from .coordinates import build_symplectic  # noqa: E402
from .dualnet import check_ld, check_vy, extract_dual_net  # noqa: E402
from .incidence import (dumps_gq, is_projective_point, is_regular_line, is_regular_point,  # noqa: E402
                        perp_plane, verify_gq, verify_projective_plane)
from .inversive import (AXIOMS, apply_mutation, build_circle_geometry, check_axiom, check_lemmas,  # noqa: E402
                        dumps_cg, single_mutations)
from .reconstruction import (check_absolute_regular, check_collinearity_lemma, check_distance_three,  # noqa: E402
                             check_dual_net_description, check_triangle_free, check_two_absolute,
                             natural_isomorphism, reconstruct)
from .symmetry import absolute_elements, find_polarity  # noqa: E402
from .verdict import FAIL, PASS, PASS_ON_PATCH, Verdict  # noqa: E402

TSV_HEADER = "check\tstatus\ttuples\tmode\twitness"
STATUS_COLORS = {PASS: "#3a7d44", PASS_ON_PATCH: "#d9a400", FAIL: "#b23a48"}
DEFAULT_BUDGET = 100_000


def _all(name, ok_iter, total):
    bad = next((w for w in ok_iter if w is not None), None)
    return Verdict(name, PASS if bad is None else FAIL, bad, tuples=total)


def mutation_matrix(G, per_axiom: int, seed: int):
    """Detection counts: rows are axioms, columns mutation kinds."""
    kinds = ["gnarl", "remove", "add"]
    muts = single_mutations(G)
    rng = random.Random(seed)
    by_kind = {k: [m for m in muts if m[0] == k] for k in kinds}
    names = list(AXIOMS)
    hits = np.zeros((len(names), len(kinds)), dtype=int)
    tried = np.zeros_like(hits)
    for j, k in enumerate(kinds):
        pool = by_kind[k]
        picks = rng.sample(pool, min(per_axiom, len(pool)))
        for m in picks:
            H = apply_mutation(G, m)
            for i, name in enumerate(names):
                tried[i, j] += 1
                if not check_axiom(H, name).passed:
                    hits[i, j] += 1
    return names, kinds, hits, tried


def plot_incidence(S, path):
    A = np.zeros((S.n_points, S.n_lines), dtype=bool)
    for p, l in S.flags():
        A[p, l] = True
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.spy(A, markersize=max(0.3, 60 / S.n_points), color="black")
    ax.set_title(f"{S.name}: point-line incidence")
    ax.set_xlabel("line id")
    ax.set_ylabel("point id")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_verdicts(verdicts, path):
    names = [v.check for v in verdicts]
    work = [max(v.tuples, 1) for v in verdicts]
    colors = [STATUS_COLORS.get(v.status, "grey") for v in verdicts]
    fig, ax = plt.subplots(figsize=(7, 0.28 * len(verdicts) + 1.2))
    y = np.arange(len(verdicts))
    ax.barh(y, work, color=colors)
    ax.set_yticks(y, names, fontsize=7)
    ax.invert_yaxis()
    ax.set_xscale("log")
    ax.set_xlabel("tuples examined")
    for i, v in enumerate(verdicts):
        if not v.exhaustive:
            ax.text(work[i], i, " sampled", va="center", fontsize=6)
    handles = [plt.Rectangle((0, 0), 1, 1, color=c) for c in STATUS_COLORS.values()]
    ax.legend(handles, list(STATUS_COLORS), fontsize=7, loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_mutations(names, kinds, hits, tried, path):
    rate = np.divide(hits, tried, out=np.zeros(hits.shape), where=tried > 0)
    fig, ax = plt.subplots(figsize=(4.5, 0.35 * len(names) + 1.2))
    im = ax.imshow(rate, vmin=0, vmax=1, cmap="viridis", aspect="auto")
    ax.set_xticks(range(len(kinds)), kinds)
    ax.set_yticks(range(len(names)), names)
    for i in range(len(names)):
        for j in range(len(kinds)):
            ax.text(j, i, f"{hits[i, j]}/{tried[i, j]}", ha="center", va="center", fontsize=7, color="white")
    ax.set_title("single mutations detected")
    fig.colorbar(im, ax=ax, fraction=0.05)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def run_report(args, run):
    q = args.q or 2
    budget = None if args.exhaustive else (args.budget or DEFAULT_BUDGET)
    out = args.out
    os.makedirs(out, exist_ok=True)
    S = build_symplectic(FiniteField.of_order(q))
    run.digests["gq"] = digest(dumps_gq(S))

    with run.phase("gq"):
        run.add(verify_gq(S).verdict("gq"))
    with run.phase("regular"):
        run.add(_all("regular-points", ({"point": x} for x in range(S.n_points) if not is_regular_point(S, x)),
                     S.n_points))
        run.add(_all("regular-lines", ({"line": l} for l in range(S.n_lines) if not is_regular_line(S, l)),
                     S.n_lines))
    with run.phase("projective"):
        run.add(_all("projective-points",
                     ({"point": x} for x in range(S.n_points) if not is_projective_point(S, x, assume_regular=True)),
                     S.n_points))
        cert = verify_projective_plane(perp_plane(S, 0).plane)
        run.add(Verdict("perp-plane[0]", PASS if cert.ok and cert.order == q else FAIL,
                        None if cert.ok else {"message": cert.violation.message}, detail={"order": cert.order}))
    with run.phase("dualnet"):
        net = extract_dual_net(S, 0)
        for v in (check_vy(net, budget=budget, seed=args.seed), check_ld(net, budget=budget, seed=args.seed)):
            v.check += "[0]"
            run.add(v)
        if q == 2:
            c = verify_projective_plane(net.completion())
            run.add(Verdict("completion[0]", PASS if c.ok and c.order == 2 else FAIL, detail={"order": c.order}))

    mutations = None
    if tits_endo(S.field) is None:
        v = Verdict("polarity", FAIL, {"reason": f"no Tits automorphism of GF({q})"})
        run.informational.add(v.check)
        run.add(v)
    else:
        with run.phase("polarity"):
            rho = find_polarity(S)
            ovoid, _ = absolute_elements(S, rho)
            ok = len(ovoid) == q * q + 1
            run.add(Verdict("ovoid", PASS if ok else FAIL, None if ok else {"size": len(ovoid)},
                            detail={"size": len(ovoid)}))
            G = build_circle_geometry(S, rho)
            run.digests["cg"] = digest(dumps_cg(G))
        with run.phase("inversive"):
            for name in AXIOMS:
                run.add(check_axiom(G, name, budget=budget, seed=args.seed))
            for v in check_lemmas(G):
                run.add(v)
        with run.phase("reconstruction"):
            R = reconstruct(G)
            Q = R.quadrangle
            run.add(verify_gq(Q).verdict("reconstruction-gq"))
            for v in (check_collinearity_lemma(R), check_triangle_free(Q), check_distance_three(Q),
                      check_absolute_regular(R), check_two_absolute(R), check_dual_net_description(R),
                      natural_isomorphism(S, rho, R)):
                run.add(v)
        if q == 2:
            with run.phase("mutations"):
                mutations = mutation_matrix(G, 20, args.seed)

    with open(os.path.join(out, "verdicts.tsv"), "w") as fh:
        fh.write(TSV_HEADER + "\n")
        for v in run.verdicts:
            fh.write(row(v) + "\n")
    if not args.no_figures:
        with run.phase("figures"):
            plot_incidence(S, os.path.join(out, "incidence.png"))
            plot_verdicts(run.verdicts, os.path.join(out, "verdicts.png"))
            if mutations is not None:
                plot_mutations(*mutations, os.path.join(out, "mutations.png"))
