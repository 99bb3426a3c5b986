"""Command-line frontend: parse JSON inputs, run a subcommand, emit a report.

Exit codes: 0 decisive success, 1 input error, 2 decisive failure (with a
witness in the report), 3 Unknown.  Reports are deterministic byte-for-byte:
identical configuration yields identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import anodyne, cofinality, fixtures, freefib, gray, homotopy, laxlim
from .fincat import CatFunctor, FinCat
from .simplicial import DecoratedSSet
from .twocat import Marking2Cat, StrictTwoCat, TwoFunctor, scaled_nerve

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_FAIL = 2
EXIT_UNKNOWN = 3


class InputError(Exception):
    pass


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise InputError(f"{path}: no such file")
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}")


def parse_two_cat(path: str) -> StrictTwoCat:
    doc = _load_json(path)
    if doc.get("schema") != "laxfib/twocat-v1":
        raise InputError(f"{path}: expected schema laxfib/twocat-v1")
    try:
        C = StrictTwoCat.from_json_dict(doc)
    except KeyError as e:
        raise InputError(f"{path}: missing field {e}")
    bad = C.validate()
    if bad:
        raise InputError(f"{path}: 2-category laws fail, first witness: {bad[0]}")
    return C


def parse_category(path: str) -> FinCat:
    doc = _load_json(path)
    if doc.get("schema") != "laxfib/category-v1":
        raise InputError(f"{path}: expected schema laxfib/category-v1")
    try:
        C = FinCat.from_json_dict(doc)
    except KeyError as e:
        raise InputError(f"{path}: missing field {e}")
    bad = C.validate()
    if bad:
        raise InputError(f"{path}: category laws fail, first witness: {bad[0]}")
    return C


def parse_two_functor(path: str, src: StrictTwoCat, dst: StrictTwoCat) -> TwoFunctor:
    doc = _load_json(path)
    if doc.get("schema") != "laxfib/two-functor-v1":
        raise InputError(f"{path}: expected schema laxfib/two-functor-v1")
    F = TwoFunctor(src, dst, doc.get("objects", {}), doc.get("onecells", {}),
                   doc.get("twocells", {}))
    bad = F.validate()
    if bad:
        raise InputError(f"{path}: functor laws fail, first witness: {bad[0]}")
    return F


def parse_cat_functor(path: str, src: FinCat, dst: FinCat) -> CatFunctor:
    doc = _load_json(path)
    if doc.get("schema") != "laxfib/cat-functor-v1":
        raise InputError(f"{path}: expected schema laxfib/cat-functor-v1")
    F = CatFunctor(src, dst, doc.get("objects", {}), doc.get("morphisms", {}))
    bad = F.validate()
    if bad:
        raise InputError(f"{path}: functor laws fail, first witness: {bad[0]}")
    return F


def parse_sset(path: str) -> DecoratedSSet:
    doc = _load_json(path)
    try:
        X = DecoratedSSet.from_json_dict(doc)
        X.validate()
    except (KeyError, ValueError) as e:
        raise InputError(f"{path}: bad simplicial set: {e}")
    return X


def parse_marking(path, C: StrictTwoCat) -> Marking2Cat:
    if path is None:
        return Marking2Cat(C)
    doc = _load_json(path)
    marked = doc.get("marked1", [])
    unknown = [m for m in marked if m not in C.onecells]
    if unknown:
        raise InputError(f"{path}: marked 1-cells not in the 2-category: {unknown}")
    return Marking2Cat(C, frozenset(marked))


def _emit(report: dict, args) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _config(args) -> dict:
    cap = getattr(args, "cap", 4)
    budgets = {
        "collapse_states": getattr(args, "collapse_budget", 20000),
        "tietze_steps": getattr(args, "tietze_budget", 400),
        "max_degree": cap,
    }
    if cap < 3:
        raise InputError("cap must be at least 3")
    if any(v < 0 for v in budgets.values()):
        raise InputError("budgets must be positive")
    return {"cap": cap, "budgets": budgets, "n_max": getattr(args, "n_max", 4)}


def _sset_summary(X: DecoratedSSet) -> dict:
    return {
        "cells": list(X.n_cells),
        "marked": sorted(list(nd) for nd in X.marked),
        "thin": sorted(list(nd) for nd in X.thin),
        "lean": sorted(list(nd) for nd in X.lean),
        "kind": X.kind,
    }


# -- subcommand handlers -----------------------------------------------------


def cmd_nerve(args) -> int:
    cfg = _config(args)
    C = parse_two_cat(args.twocat)
    marking = parse_marking(args.marking, C)
    N = scaled_nerve(C, marking)
    _emit({"command": "nerve", "config": cfg, "nerve": N.to_json_dict()}, args)
    return EXIT_OK


def cmd_gray(args) -> int:
    cfg = _config(args)
    X, Y = parse_sset(args.x), parse_sset(args.y)
    G = gray.gray(X, Y, cap=cfg["cap"], truncate=args.truncate)
    _emit({"command": "gray", "config": cfg, "product": G.to_json_dict(),
           "provenance": {f"{k[0]},{k[1]}": v for k, v in sorted(G.gray_provenance.items())}},
          args)
    return EXIT_OK


def cmd_ext(args) -> int:
    cfg = _config(args)
    if not 0 <= args.j <= args.n:
        raise InputError("need 0 <= j <= n")
    if args.n + 1 > cfg["cap"]:
        raise InputError("extension exceeds the cap")
    f = gray.e_map(args.j, args.n)
    table = {f"{nd[0]},{nd[1]}": f.assign[nd].encode() for nd in sorted(f.assign)}
    _emit({"command": "ext", "config": cfg, "j": args.j, "n": args.n,
           "respects_scaling": gray.e_map_respects_scaling(args.j, args.n),
           "restriction_over_1_is_degeneracy":
               gray.restriction_to_one_is_degeneracy(args.j, args.n),
           "assignment": table}, args)
    return EXIT_OK


def _load_freefib(args) -> freefib.FreeFibration:
    C = parse_two_cat(args.source)
    D = parse_two_cat(args.target)
    F = parse_two_functor(args.functor, C, D)
    mc = parse_marking(getattr(args, "marking_src", None), C)
    md = parse_marking(getattr(args, "marking_dst", None), D)
    mode = "natural" if args.mode == "natural" else "dagger"
    try:
        return freefib.build_free_fibration(F, mc, md, mode=mode)
    except ValueError as e:
        raise InputError(str(e))


def cmd_freefib(args) -> int:
    cfg = _config(args)
    ff = _load_freefib(args)
    report = {
        "command": "freefib", "config": cfg, "mode": ff.mode,
        "total": _sset_summary(ff.total),
        "base": _sset_summary(ff.base),
        "tables": {"total": ff.total.to_json_dict(),
                   "projection": {f"{k[0]},{k[1]}": v.encode()
                                  for k, v in sorted(ff.proj.assign.items())}},
    }
    status = EXIT_OK
    if args.fiber is not None:
        fib, _ = ff.fiber(args.fiber)
        report["fiber"] = {"object": args.fiber, **_sset_summary(fib)}
        report["tables"]["fiber"] = fib.to_json_dict()
    if args.audit:
        audit = ff.filtration_audit()
        report["audit"] = {k: (sorted(map(list, v)) if isinstance(v, list) else v)
                           for k, v in audit.items()}
        if audit["unreachable"]:
            status = EXIT_FAIL
    _emit(report, args)
    return status


def cmd_check_fibration(args) -> int:
    cfg = _config(args)
    ff = _load_freefib(args)
    res = anodyne.certify_fibration(ff.proj, args.family, cfg["n_max"])
    report = {"command": "check-fibration", "config": cfg, **res.to_json_dict()}
    _emit(report, args)
    return EXIT_OK if res.ok else EXIT_FAIL


def cmd_check_cofinal(args) -> int:
    cfg = _config(args)
    C = parse_two_cat(args.source)
    D = parse_two_cat(args.target)
    F = parse_two_functor(args.functor, C, D)
    mc = parse_marking(args.marking_src, C)
    md = parse_marking(args.marking_dst, D)
    try:
        rep = cofinality.check_cofinal(F, mc, md, cfg["budgets"])
    except ValueError as e:
        raise InputError(str(e))
    _emit({"command": "check-cofinal", "config": cfg, **rep.to_json_dict()}, args)
    return {"yes": EXIT_OK, "no": EXIT_FAIL, "unknown": EXIT_UNKNOWN}[rep.verdict]


def cmd_joyal(args) -> int:
    cfg = _config(args)
    K = parse_category(args.source)
    S = parse_category(args.target)
    p = parse_cat_functor(args.functor, K, S)
    v = cofinality.joyal_cofinal(p, cfg["budgets"])
    _emit({"command": "joyal", "config": cfg, **v.to_json_dict()}, args)
    return {"yes": EXIT_OK, "no": EXIT_FAIL, "unknown": EXIT_UNKNOWN}[v.value]


def cmd_duality(args) -> int:
    cfg = _config(args)
    K = parse_category(args.source)
    S = parse_category(args.target)
    p = parse_cat_functor(args.functor, K, S)
    r = cofinality.two_bracket_duality(p, cfg["budgets"])
    report = {
        "command": "duality", "config": cfg, "status": r["status"],
        "two_categorical": r["two_categorical"],
        "one_categorical": r["one_categorical"],
        "report": r["report"].to_json_dict(),
        "oracle": r["oracle"].to_json_dict(),
    }
    _emit(report, args)
    if r["status"] == "AGREE":
        return EXIT_OK
    return EXIT_FAIL if r["status"] == "DISAGREE" else EXIT_UNKNOWN


def cmd_laxlim(args) -> int:
    cfg = _config(args)
    if args.shape == "delta1":
        A = parse_category(args.a)
        B = parse_category(args.b)
        E = parse_cat_functor(args.f, A, B)
        marked = args.marking in ("0->1", "both")
        cand = laxlim.arrow_limit(E, marked=marked)
        report = {"command": "laxlim", "config": cfg, "shape": "delta1",
                  "marking": args.marking,
                  "category": cand.category.to_json_dict()}
        status = EXIT_OK
        if args.oracle:
            diagram = laxlim.ArrowDiagram(
                E, frozenset({laxlim.ARROW_LEG}) if marked else frozenset())
            oracle = laxlim.arrow_cone_oracle(diagram, cand)
            report["oracle"] = oracle
            if not oracle["pass"]:
                status = EXIT_FAIL
        _emit(report, args)
        return status
    A = parse_category(args.a)
    B = parse_category(args.b)
    if args.c is None or args.g is None:
        raise InputError("the cospan shape needs categories a b c and functors f g")
    C = parse_category(args.c)
    F = parse_cat_functor(args.f, A, C)
    G = parse_cat_functor(args.g, B, C)
    marking = {"none": frozenset(), "0->2": frozenset({laxlim.G_LEG}),
               "1->2": frozenset({laxlim.F_LEG}),
               "both": frozenset({laxlim.F_LEG, laxlim.G_LEG})}.get(args.marking)
    if marking is None:
        raise InputError(f"marking {args.marking} does not name cospan legs")
    if marking == frozenset():
        cand = laxlim.lax_pullback(F, G)
    elif marking == frozenset({laxlim.F_LEG, laxlim.G_LEG}):
        cand = laxlim.pseudo_pullback(F, G)
    else:
        cand = laxlim.directed_pullback(F, G, next(iter(marking)))
    report = {"command": "laxlim", "config": cfg, "shape": "lambda22",
              "marking": args.marking,
              "category": cand.category.to_json_dict()}
    status = EXIT_OK
    if args.oracle:
        diagram = laxlim.ConeDiagram(F, G, marking)
        oracle = laxlim.cone_oracle(diagram, cand)
        report["oracle"] = oracle
        if not oracle["pass"]:
            status = EXIT_FAIL
    _emit(report, args)
    return status


def cmd_homology(args) -> int:
    cfg = _config(args)
    X = parse_sset(args.sset)
    H = homotopy.homology(X, cfg["cap"])
    _emit({"command": "homology", "config": cfg, **H.to_json_dict()}, args)
    return EXIT_OK


def cmd_contractible(args) -> int:
    cfg = _config(args)
    X = parse_sset(args.sset)
    v = homotopy.weakly_contractible(X, cfg["budgets"])
    _emit({"command": "contractible", "config": cfg, **v.to_json_dict()}, args)
    return {"yes": EXIT_OK, "no": EXIT_FAIL, "unknown": EXIT_UNKNOWN}[v.value]


def cmd_corpus(args) -> int:
    cfg = _config(args)
    report = {"command": "corpus", "config": cfg, "seed": args.seed}
    ok = True

    rows = []
    for name, p in fixtures.duality_corpus(args.seed):
        r = cofinality.two_bracket_duality(p, cfg["budgets"])
        rows.append({"item": name, "status": r["status"],
                     "two_categorical": r["two_categorical"],
                     "one_categorical": r["one_categorical"]})
        if r["status"] == "DISAGREE":
            ok = False
    report["duality"] = rows

    battery = []
    for name, F in fixtures.fixture_functors():
        ff = freefib.build_free_fibration(F)
        entry = {"fixture": name, "total_cells": list(ff.total.n_cells)}
        entry["face_identities"] = not freefib.face_identity_violations(ff)
        entry["degeneracy_lemmas"] = not freefib.degeneracy_lemma_violations(ff)
        audit = ff.filtration_audit()
        entry["audit_reachable"] = not audit["unreachable"]
        entry["comparison"] = freefib.compare_tame_fr(ff).ok
        cert = anodyne.certify_fibration(ff.proj, "MB", cfg["n_max"])
        entry["fibration_certified"] = cert.ok
        battery.append(entry)
        if not all(v for k, v in entry.items() if isinstance(v, bool)):
            ok = False
    report["fixtures"] = battery
    report["pass"] = ok
    _emit(report, args)
    return EXIT_OK if ok else EXIT_FAIL


# -- argument parsing ----------------------------------------------------------


def _common(sub):
    sub.add_argument("--output", "-o", help="write the JSON report here")
    sub.add_argument("--cap", type=int, default=4, help="dimension cap")
    sub.add_argument("--collapse-budget", type=int, default=20000)
    sub.add_argument("--tietze-budget", type=int, default=400)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="laxfib",
        description="Desk-scale engine for decorated simplicial sets, lax "
                    "slices, free fibrations and cofinality checks.")
    sp = ap.add_subparsers(dest="command", required=True)

    p = sp.add_parser("nerve", help="scaled nerve of a 2-category")
    p.add_argument("twocat")
    p.add_argument("--marking")
    _common(p)
    p.set_defaults(func=cmd_nerve)

    p = sp.add_parser("gray", help="Gray product of two scaled simplicial sets")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--truncate", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_gray)

    p = sp.add_parser("ext", help="extension map tables")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    _common(p)
    p.set_defaults(func=cmd_ext)

    p = sp.add_parser("freefib", help="the tame free fibration on a 2-functor")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("functor")
    p.add_argument("--marking-src")
    p.add_argument("--marking-dst")
    p.add_argument("--mode", choices=["natural", "dagger"], default="dagger")
    p.add_argument("--fiber")
    p.add_argument("--audit", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_freefib)

    p = sp.add_parser("check-fibration", help="certify the lifting property")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("functor")
    p.add_argument("--marking-src")
    p.add_argument("--marking-dst")
    p.add_argument("--mode", choices=["natural", "dagger"], default="dagger")
    p.add_argument("--family", choices=["MB", "MS"], default="MB")
    p.add_argument("--n-max", type=int, default=4)
    _common(p)
    p.set_defaults(func=cmd_check_fibration)

    p = sp.add_parser("check-cofinal", help="the cofinality criterion")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("functor")
    p.add_argument("--marking-src")
    p.add_argument("--marking-dst")
    _common(p)
    p.set_defaults(func=cmd_check_cofinal)

    p = sp.add_parser("joyal", help="classical cofinality of a functor")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("functor")
    _common(p)
    p.set_defaults(func=cmd_joyal)

    p = sp.add_parser("duality", help="two-object construction duality test")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("functor")
    _common(p)
    p.set_defaults(func=cmd_duality)

    p = sp.add_parser("laxlim", help="partially lax limits of a cospan or arrow")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("c", nargs="?")
    p.add_argument("f")
    p.add_argument("g", nargs="?")
    p.add_argument("--shape", choices=["lambda22", "delta1"], default="lambda22")
    p.add_argument("--marking", choices=["none", "0->2", "1->2", "0->1", "both"],
                   default="none")
    p.add_argument("--oracle", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_laxlim)

    p = sp.add_parser("homology", help="integral homology of a simplicial set")
    p.add_argument("sset")
    _common(p)
    p.set_defaults(func=cmd_homology)

    p = sp.add_parser("contractible", help="weak contractibility verdict")
    p.add_argument("sset")
    _common(p)
    p.set_defaults(func=cmd_contractible)

    p = sp.add_parser("corpus", help="run the bundled verification corpus")
    p.add_argument("--seed", type=int, default=fixtures.CORPUS_SEED)
    p.add_argument("--n-max", type=int, default=4)
    _common(p)
    p.set_defaults(func=cmd_corpus)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        sys.stderr.write(f"input error: {e}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
