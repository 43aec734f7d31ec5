"""Command-line front end.

Every subcommand prints one tab-separated verdict row per check
(check, status, tuples, mode, witness JSON) and can write a JSON run
manifest. Exit codes: 0 all checks pass, 1 some check fails, 2 parse or
usage error, 3 no Tits automorphism for the requested q, 4 budget exhausted.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import asdict
from typing import Optional

from .algebra import DescriptorError, FiniteField, FieldError, MixedDescriptor, RationalField, parse_expr, tits_endo
from .coordinates import PatchBudgetError, build_mixed_patch, build_symplectic, vy_witness_perps
from .dualnet import (DeltaError, build_delta_plane, check_ld, check_vy, extract_dual_net,
                      mixed_net_patch, net_fragment, vertical_of_line, witness_lines)
from .incidence import (IncidenceError, IncidenceStructure, ParseError, dumps_gq, is_projective_point,
                        is_regular_line, is_regular_point, loads_gq, perp_plane, verify_gq,
                        verify_projective_plane)
from .inversive import (AXIOMS, CircleGeometryError, build_circle_geometry, check_axiom, check_lemmas,
                        dumps_cg, loads_cg)
from .reconstruction import (ReconstructionError, attach_host, check_absolute_regular,
                             check_collinearity_lemma, check_distance_three, check_dual_net_description,
                             check_triangle_free, check_two_absolute, natural_isomorphism, reconstruct,
                             symplectic_source)
from .symmetry import (SymmetryError, absolute_elements, acts_regularly, build_symmetry,
                       collineation_violation, find_polarity, is_axis_of_symmetry, symmetries_about)
from .verdict import FAIL, PASS, PASS_ON_PATCH, Verdict

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NO_TITS, EXIT_BUDGET = 0, 1, 2, 3, 4


class NoTitsError(RuntimeError):
    pass


class BudgetExhausted(RuntimeError):
    pass


def row(v: Verdict) -> str:
    w = json.dumps(v.witness, sort_keys=True) if v.witness is not None else "-"
    return f"{v.line()}\t{w}"


def digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


class Run:
    """Collects verdicts, digests and phase timings for one invocation."""

    def __init__(self, args):
        self.args = args
        self.verdicts: list[Verdict] = []
        self.digests: dict[str, str] = {}
        self.timings: dict[str, float] = {}
        self.informational: set[str] = set()
        self.out = sys.stdout

    def phase(self, name):
        run = self

        class _Timer:
            def __enter__(self):
                self.t = time.perf_counter()

            def __exit__(self, *exc):
                run.timings[name] = run.timings.get(name, 0.0) + time.perf_counter() - self.t

        return _Timer()

    def add(self, v: Verdict, echo: bool = True):
        cap = self.args.budget
        if getattr(self.args, "exhaustive", False) and cap is not None and v.tuples > cap:
            raise BudgetExhausted(f"{v.check} needs {v.tuples} tuples, budget is {cap}")
        self.verdicts.append(v)
        if echo:
            print(row(v), file=self.out)

    def status(self) -> int:
        ok = {PASS, PASS_ON_PATCH} if self.args.allow_patch else {PASS}
        decisive = [v for v in self.verdicts if v.check not in self.informational]
        return EXIT_OK if all(v.status in ok for v in decisive) else EXIT_FAIL

    def manifest(self, code: int) -> dict:
        a = self.args
        return {
            "command": list(a.argv),
            "seed": a.seed,
            "budget": a.budget,
            "exhaustive": bool(getattr(a, "exhaustive", False)),
            "threads": a.threads,
            "digests": self.digests,
            "verdicts": [v.to_dict() for v in self.verdicts],
            "timings": {k: round(t, 6) for k, t in self.timings.items()},
            "exit": code,
        }


def check_budget(args) -> Optional[int]:
    """Budget handed to sampling checkers; None means enumerate everything."""
    return None if args.exhaustive else args.budget


# ---------------------------------------------------------------------------
# inputs
# ---------------------------------------------------------------------------

def read_text(path: Optional[str]) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def write_text(path: Optional[str], text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def field_for(q: int) -> FiniteField:
    try:
        return FiniteField.of_order(q)
    except FieldError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def load_gq(args, run: Run) -> IncidenceStructure:
    if getattr(args, "inp", None) is None and args.q is not None:
        S = build_symplectic(field_for(args.q))
        run.digests["gq"] = digest(dumps_gq(S))
        return S
    text = read_text(getattr(args, "inp", None))
    run.digests["gq"] = digest(text)
    return loads_gq(text)


def load_symplectic(args, run: Run):
    S = load_gq(args, run)
    if hasattr(S, "field"):
        return S
    return symplectic_source(S)


def require_polarity(S):
    if tits_endo(S.field) is None:
        raise NoTitsError(f"no Tits automorphism of GF({S.field.order})")
    return find_polarity(S)


def load_cg(args, run: Run):
    if getattr(args, "inp", None) is None and args.q is not None:
        S = build_symplectic(field_for(args.q))
        G = build_circle_geometry(S, require_polarity(S))
        run.digests["cg"] = digest(dumps_cg(G))
        return G
    text = read_text(getattr(args, "inp", None))
    run.digests["cg"] = digest(text)
    return loads_cg(text)


def point_arg(S, ref: Optional[str]) -> int:
    if ref is None:
        return 0
    if ref.lstrip("-").isdigit():
        return int(ref)
    return S.point_id(ref)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

DESC_KEYS = {"K'": "Kprime", "Kprime": "Kprime", "L": "L", "L'": "Lprime", "Lprime": "Lprime",
             "generators": "generators", "depth": "depth", "budget": "budget"}


def load_desc(text: str) -> dict:
    """Descriptor file: ``key: comma list`` lines for K', L, L' and the patch
    generators; optional ``depth`` and ``budget``; ``#`` comments."""
    out = {"Kprime": "1,s,t,s*t", "L": "1", "Lprime": "1,s,t,s*t", "generators": "0,1", "depth": "1",
           "budget": str(10 ** 5)}
    for lineno, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if not s:
            continue
        key, sep, value = s.partition(":")
        key = key.strip()
        if not sep or key not in DESC_KEYS:
            raise ParseError(lineno, f"expected one of {', '.join(DESC_KEYS)} followed by ':'")
        out[DESC_KEYS[key]] = value.strip()
    return out


def cmd_build(args, run: Run):
    if args.geometry == "mixed":
        if args.desc is None:
            raise argparse.ArgumentTypeError("build --geometry mixed needs --desc")
        text = read_text(args.desc)
        run.digests["desc"] = digest(text)
        d = load_desc(text)
        F = RationalField()
        try:
            desc = MixedDescriptor(F, parse_list(d["Kprime"]), parse_list(d["L"]), parse_list(d["Lprime"]))
            depth, budget = int(d["depth"]), int(d["budget"])
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
        with run.phase("build"):
            patch = build_mixed_patch(desc, parse_list(d["generators"]), depth=depth, budget=budget)
            S = patch.materialize(max_elements=budget)
            text = dumps_gq(S)
    else:
        if args.q is None:
            raise argparse.ArgumentTypeError("build --geometry symplectic needs --q")
        with run.phase("build"):
            S = build_symplectic(field_for(args.q))
            text = dumps_gq(S)
    run.digests["gq"] = digest(text)
    write_text(args.out, text)


def cmd_check(args, run: Run):
    S = load_gq(args, run)
    if args.what in ("gq", "all"):
        with run.phase("gq"):
            run.add(verify_gq(S).verdict("gq"))
    if args.what in ("regular", "all"):
        with run.phase("regular"):
            badp = next((x for x in range(S.n_points) if not is_regular_point(S, x)), None)
            badl = next((l for l in range(S.n_lines) if not is_regular_line(S, l)), None)
            w = None if badp is None and badl is None else {"point": badp, "line": badl}
            run.add(Verdict("regular", PASS if w is None else FAIL, w, tuples=S.n_points + S.n_lines))
    if args.what in ("projective", "all"):
        with run.phase("projective"):
            w = None
            for x in range(S.n_points):
                if not is_projective_point(S, x):
                    w = {"point": x}
                    break
                cert = verify_projective_plane(perp_plane(S, x, assume_projective=True).plane)
                if not cert.ok:
                    w = {"point": x, "plane": asdict(cert.violation)}
                    break
            run.add(Verdict("projective", PASS if w is None else FAIL, w, tuples=S.n_points))


DUALNET_CHECKS = ("vy", "ld", "completion", "delta")


def cmd_dualnet(args, run: Run):
    words = [w for w in args.words if w != "check"]
    if len(words) != 1 or words[0] not in DUALNET_CHECKS:
        raise argparse.ArgumentTypeError(f"dualnet expects one of {', '.join(DUALNET_CHECKS)}")
    args.axiom = words[0]
    S = load_gq(args, run)
    pts = range(S.n_points) if args.all_points else [point_arg(S, args.point)]
    budget = check_budget(args)
    for x in pts:
        with run.phase("extract"):
            net = extract_dual_net(S, x)
        tag = f"[{S.point_label(x)}]"
        with run.phase(args.axiom):
            if args.axiom == "vy":
                v = check_vy(net, include_vertical=args.include_vertical, budget=budget, seed=args.seed)
            elif args.axiom == "ld":
                vert = None if args.vertical is None else vertical_of_line(net, args.vertical)
                v = check_ld(net, vert, budget=budget, seed=args.seed)
            elif args.axiom == "completion":
                c = verify_projective_plane(net.completion())
                v = Verdict("completion", PASS if c.ok else FAIL,
                            None if c.ok else {"violation": asdict(c.violation)}, detail={"order": c.order})
            else:
                try:
                    d = build_delta_plane(net, 0, 1)
                    c = verify_projective_plane(d.plane)
                    v = Verdict("delta", PASS if c.ok else FAIL, None if c.ok else {"violation": asdict(c.violation)},
                                detail={"order": c.order})
                except DeltaError as exc:
                    v = Verdict("delta", FAIL, exc.witness or {"reason": str(exc)})
        v.check += tag
        if v.status == FAIL and args.witness_out and v.witness:
            write_text(args.witness_out, dumps_gq(net_fragment(net, witness_lines(v.witness))))
        run.add(v)


def cmd_one_symmetry(args, run: Run, S):
    L, a, a2 = args.line, point_arg(S, args.src), point_arg(S, args.dst)
    M = S.line_through(a, a2) if a != a2 else None
    p = S.meet(L, M) if M is not None else None
    if p is None:
        raise argparse.ArgumentTypeError("--from and --to must lie on a line meeting --line")
    with run.phase("symmetry"):
        try:
            g = build_symmetry(S, L, p, a, a2)
            w = collineation_violation(S, g)
            fixed = all(g.points[z] == z for z in S.points_of(L))
            ok = w is None and fixed and g.points[a] == a2
        except SymmetryError as exc:
            ok, w = False, exc.witness or {"reason": str(exc)}
    run.add(Verdict(f"symmetry[{S.line_label(L)}]", PASS if ok else FAIL, None if ok else w))
    if ok and args.out:
        write_text(args.out, json.dumps({"points": list(g.points), "lines": list(g.lines)}) + "\n")


def cmd_symmetry(args, run: Run):
    S = load_gq(args, run)
    if args.src is not None or args.dst is not None:
        if args.src is None or args.dst is None:
            raise argparse.ArgumentTypeError("--from and --to go together")
        return cmd_one_symmetry(args, run, S)
    lines = range(S.n_lines) if args.all_lines else [args.line]
    for L in lines:
        tag = f"[{S.line_label(L)}]"
        p = S.points_of(L)[0]
        with run.phase("ld"):
            net = extract_dual_net(S, p)
            ld = check_ld(net, vertical_of_line(net, L), budget=check_budget(args), seed=args.seed)
        ld.check = "LD-vertical" + tag
        run.add(ld)
        with run.phase("axis"):
            axis = is_axis_of_symmetry(S, L)
        run.add(Verdict("axis" + tag, PASS if axis else FAIL, None if axis else {"line": L}))
        run.add(Verdict("LD-iff-axis" + tag, PASS if axis == ld.passed else FAIL,
                        None if axis == ld.passed else {"ld": ld.passed, "axis": axis}))
        M = next(m for m in S.lines_of(p) if m != L)
        with run.phase("group"):
            try:
                group = symmetries_about(S, L, p, M)
                s = S.line_points[L].bit_count() - 1
                ok = len(set(group)) == s and acts_regularly(S, group, L)
                w = None if ok else {"count": len(set(group)), "s": s}
            except SymmetryError as exc:
                ok, w = False, exc.witness or {"reason": str(exc)}
        run.add(Verdict("symmetry-group" + tag, PASS if ok else FAIL, w, detail={"size": s if ok else None}))


def cmd_polarity(args, run: Run):
    S = load_symplectic(args, run)
    with run.phase("polarity"):
        rho = require_polarity(S)
    ovoid, _ = absolute_elements(S, rho)
    run.add(Verdict("polarity", PASS, detail={"theta_power": rho.theta_power, "absolute": len(ovoid)}))
    if args.out:
        body = {"theta_power": rho.theta_power, "point_to_line": list(rho.point_to_line),
                "line_to_point": list(rho.line_to_point)}
        write_text(args.out, json.dumps(body) + "\n")


def cmd_ovoid(args, run: Run):
    S = load_symplectic(args, run)
    rho = require_polarity(S)
    with run.phase("ovoid"):
        ovoid, _ = absolute_elements(S, rho)
    want = S.field.order ** 2 + 1
    run.add(Verdict("ovoid", PASS if len(ovoid) == want else FAIL, None if len(ovoid) == want else
                    {"size": len(ovoid), "expected": want}, detail={"size": len(ovoid)}))
    if args.list:
        for p in ovoid:
            print(S.point_label(p))


def cmd_inversive(args, run: Run):
    if args.action == "build":
        if args.q is None:
            raise argparse.ArgumentTypeError("inversive build needs --q")
        G = load_cg(args, run)
        write_text(args.out, dumps_cg(G))
        return
    G = load_cg(args, run)
    names = list(AXIOMS) if args.axioms == "all" else [a.strip() for a in args.axioms.split(",")]
    for name in names:
        if name not in AXIOMS:
            raise argparse.ArgumentTypeError(f"unknown axiom {name!r}; choose from {', '.join(AXIOMS)}")
        with run.phase(name):
            run.add(check_axiom(G, name, budget=check_budget(args), seed=args.seed))
    if args.lemmas:
        with run.phase("lemmas"):
            for v in check_lemmas(G):
                run.add(v)


def cmd_reconstruct(args, run: Run):
    G = load_cg(args, run)
    with run.phase("reconstruct"):
        R = reconstruct(G)
    for v in R.axioms:
        run.add(v)
    Q = R.quadrangle
    text = dumps_gq(Q)
    run.digests["reconstruction"] = digest(text)
    if args.out:
        write_text(args.out, text)
    with run.phase("lemmas"):
        run.add(verify_gq(Q).verdict("gq"))
        run.add(check_collinearity_lemma(R))
        run.add(check_triangle_free(Q))
        run.add(check_distance_three(Q))
        run.add(check_absolute_regular(R))
        run.add(check_two_absolute(R))
        run.add(check_dual_net_description(R))
    if args.check_iso:
        src_text = read_text(args.check_iso)
        run.digests["source"] = digest(src_text)
        with run.phase("isomorphism"):
            W = symplectic_source(loads_gq(src_text))
            rho = require_polarity(W)
            R.geometry = attach_host(G, W, rho)
            run.add(natural_isomorphism(W, rho, R))


def parse_list(text: str):
    return [parse_expr(t) for t in text.split(",") if t.strip()]


def cmd_mixed(args, run: Run):
    F = RationalField()
    Kp = parse_list(args.Kprime)
    desc = MixedDescriptor(F, Kp, parse_list(args.L), parse_list(args.Lprime))
    k, k2 = parse_expr(args.k), parse_expr(args.k2)
    kk2 = F.mul(k, k2)
    with run.phase("vy"):
        perps = vy_witness_perps(desc, k, k2)
        net = mixed_net_patch(desc, perps)
        v = check_vy(net)
    inside = desc.member(kk2, "L'")
    print("# perps\t" + "\t".join(f"T[{F.pretty(T.a)};{F.pretty(T.a2)}]" for T in perps), file=run.out)
    print(f"# kk'\t{F.pretty(kk2)}\tin L'\t{inside}", file=run.out)
    run.add(v)
    if v.status == FAIL and args.witness_out:
        write_text(args.witness_out, dumps_gq(net_fragment(net, witness_lines(v.witness))))
    agree = (v.status == FAIL) == (not inside)
    run.add(Verdict("vy-iff-membership", PASS if agree else FAIL,
                    None if agree else {"vy": v.status, "kk'_in_Lprime": inside},
                    detail={"kk'": F.pretty(kk2), "kk'_in_Lprime": inside}))
    # the (VY) outcome is the product of this command; only its agreement with membership sets the exit code
    run.informational.add(v.check)


def cmd_report(args, run: Run):
    from .report import run_report
    run_report(args, run)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, help="field order 2^n")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=None, help="max tuples per sampled check")
    common.add_argument("--exhaustive", action="store_true", help="never sample; exceeding --budget exits 4")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--allow-patch", action="store_true", help="count pass-on-patch as pass")
    common.add_argument("--manifest", help="write a JSON run manifest here")

    ap = argparse.ArgumentParser(prog="mixedquad", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("build", parents=[common], help="write W(q) in GQ v1 format")
    p.add_argument("--geometry", choices=["symplectic", "mixed"], default="symplectic")
    p.add_argument("--desc", help="descriptor file for --geometry mixed")
    p.add_argument("--out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("check", parents=[common], help="verify a GQ file (stdin by default)")
    p.add_argument("what", choices=["gq", "regular", "projective", "all"])
    p.add_argument("--in", dest="inp")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("dualnet", parents=[common], help="axioms of the dual net at a point")
    p.add_argument("words", nargs="+", metavar="[check] {vy,ld,completion,delta}")
    p.add_argument("--in", dest="inp")
    p.add_argument("--point", "--at", dest="point", help="point id or label (default 0)")
    p.add_argument("--all-points", action="store_true")
    p.add_argument("--include-vertical", action="store_true")
    p.add_argument("--vertical", type=int, help="host line through the point for (LD)")
    p.add_argument("--witness-out", help="write a failing configuration here as a GQ v1 fragment")
    p.set_defaults(func=cmd_dualnet)

    p = sub.add_parser("symmetry", parents=[common], help="axes of symmetry against (LD)")
    p.add_argument("--in", dest="inp")
    p.add_argument("--line", type=int, default=0)
    p.add_argument("--all-lines", action="store_true")
    p.add_argument("--from", dest="src", help="point moved by a single symmetry about --line")
    p.add_argument("--to", dest="dst", help="its image")
    p.add_argument("--out", help="write the single symmetry as JSON id arrays")
    p.set_defaults(func=cmd_symmetry)

    p = sub.add_parser("polarity", parents=[common], help="find the coordinate polarity of W(q)")
    p.add_argument("--find", action="store_true", help="accepted for clarity; finding is the only action")
    p.add_argument("--in", dest="inp")
    p.add_argument("--out")
    p.set_defaults(func=cmd_polarity)

    p = sub.add_parser("ovoid", parents=[common], help="absolute points of the polarity")
    p.add_argument("--in", dest="inp")
    p.add_argument("--list", action="store_true")
    p.set_defaults(func=cmd_ovoid)

    p = sub.add_parser("inversive", parents=[common], help="build or check a circle geometry")
    p.add_argument("action", choices=["build", "check"])
    p.add_argument("--in", dest="inp")
    p.add_argument("--out")
    p.add_argument("--axioms", "--axiom", dest="axioms", default="all", help=f"comma list from {','.join(AXIOMS)} or 'all'")
    p.add_argument("--lemmas", action="store_true")
    p.set_defaults(func=cmd_inversive)

    p = sub.add_parser("reconstruct", parents=[common], help="quadrangle from a circle geometry")
    p.add_argument("--in", dest="inp")
    p.add_argument("--out")
    p.add_argument("--check-iso", help="GQ file of the source W(q)")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("mixed", parents=[common], help="mixed quadrangles over F2(s,t)")
    p.add_argument("action", choices=["vy-witness"])
    p.add_argument("--Kprime", default="1,s,t,s*t", help="generators of K' over K^2")
    p.add_argument("--L", default="1", help="generators of L over K'")
    p.add_argument("--Lprime", default="1,s,t", help="generators of L' over K^2")
    p.add_argument("--k", default="s")
    p.add_argument("--k2", default="t")
    p.add_argument("--witness-out", help="write the failing configuration as a GQ v1 fragment")
    p.set_defaults(func=cmd_mixed)

    p = sub.add_parser("report", parents=[common], help="run the check suite, write TSV and figures")
    p.add_argument("--out", default="report", help="output directory")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    args.argv = argv
    run = Run(args)
    try:
        args.func(args, run)
        code = run.status()
    except (ParseError, argparse.ArgumentTypeError, FieldError, DescriptorError, CircleGeometryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_USAGE
    except NoTitsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_NO_TITS
    except (BudgetExhausted, PatchBudgetError) as exc:
        print(f"error: budget exhausted: {exc}", file=sys.stderr)
        code = EXIT_BUDGET
    except (IncidenceError, ReconstructionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_FAIL
    if args.manifest:
        with open(args.manifest, "w") as fh:
            json.dump(run.manifest(code), fh, indent=2, sort_keys=True, default=str)
            fh.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
