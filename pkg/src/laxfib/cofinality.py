"""The cofinality criterion: per-object initiality conditions in localized lax
slices, the classical 1-categorical oracle, and the duality test for the
two-object construction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .fincat import CatFunctor, FinCat, comma_under
from .homotopy import Verdict, homology, initial_in_localization, weakly_contractible
from .twocat import (
    Marking2Cat,
    StrictTwoCat,
    TwoFunctor,
    fr,
    identity_two_functor,
    scaled_nerve,
    slice_fiber,
    two_bracket_functor,
)


@dataclass
class CofinalityReport:
    verdict: str                      # "yes" | "no" | "unknown"
    per_object: dict                  # d -> record with the three conditions
    counterexample: Optional[dict]
    budgets: dict

    def to_json_dict(self) -> dict:
        from .homotopy import _jsonable
        return {
            "verdict": self.verdict,
            "per_object": _jsonable(self.per_object),
            "counterexample": _jsonable(self.counterexample),
            "budgets": dict(self.budgets),
        }


def _slice_object_for(u: str, c: str, d: str) -> tuple:
    return ("o", d, c, u)


def _aggregate(values: list[str]) -> str:
    if any(v == "no" for v in values):
        return "no"
    if all(v == "yes" for v in values):
        return "yes"
    return "unknown"


def check_cofinal(f: TwoFunctor, src_marking: Optional[Marking2Cat] = None,
                  dst_marking: Optional[Marking2Cat] = None,
                  budgets: Optional[dict] = None) -> CofinalityReport:
    """Run the three per-object conditions of the cofinality criterion.

    For each object d of the target: (i) find a morphism g_d: d -> f(c)
    initial in both localized slices; (ii) every marked d -> f(c) is initial
    in the source slice; (iii) restriction along each marked d -> b sends the
    chosen initial object to an initial object.  Unknowns propagate and are
    never converted to decisive verdicts.
    """
    C, D = f.src, f.dst
    src_marking = src_marking or Marking2Cat(C)
    dst_marking = dst_marking or Marking2Cat(D)
    if not f.preserves_marking(src_marking, dst_marking):
        raise ValueError("functor does not preserve the markings")
    budgets = budgets or {}
    frC = fr(f, src_marking, dst_marking)
    frD = fr(identity_two_functor(D), dst_marking, dst_marking)

    per_object: dict = {}
    chosen: dict = {}
    counterexample = None

    c_slices = {d: slice_fiber(frC, d)[0] for d in D.objects}
    d_slices = {d: slice_fiber(frD, d)[0] for d in D.objects}

    for d in D.objects:
        c_slice = c_slices[d]
        d_slice = d_slices[d]
        record: dict = {}

        # condition (i): search candidates, marked morphisms first
        def cand_key(o):
            u = o[3]
            return (0 if u in dst_marking.marked1 else 1,
                    0 if u == D.id1[d] else 1, str(o))

        candidates = sorted(c_slice.base.objects, key=cand_key)
        cond_i = "no" if not candidates else None
        cand_records = []
        for o in candidates:
            v_src = initial_in_localization(c_slice, o, budgets)
            o_dst = ("o", d, f.omap[o[2]], o[3])
            v_dst = initial_in_localization(d_slices[d], o_dst, budgets)
            cand_records.append({"candidate": o, "in_source_slice": v_src,
                                 "in_target_slice": v_dst})
            if v_src.yes and v_dst.yes:
                cond_i = "yes"
                chosen[d] = o
                break
        if cond_i is None:
            decisive_no = all(r["in_source_slice"].no or r["in_target_slice"].no
                              for r in cand_records)
            cond_i = "no" if decisive_no else "unknown"
        record["condition_i"] = {"verdict": cond_i, "chosen": chosen.get(d),
                                 "candidates": cand_records}

        # condition (ii): marked morphisms d -> f(c) give initial objects
        checks_ii = []
        for u in sorted(dst_marking.marked1):
            if D.one_src(u) != d:
                continue
            b = D.one_tgt(u)
            for c in C.objects:
                if f.omap[c] != b:
                    continue
                o = _slice_object_for(u, c, d)
                v = initial_in_localization(c_slice, o, budgets)
                checks_ii.append({"object": o, "verdict": v})
        cond_ii = _aggregate([r["verdict"].value for r in checks_ii]) if checks_ii else "yes"
        record["condition_ii"] = {"verdict": cond_ii, "checks": checks_ii}
        per_object[d] = record

    # condition (iii): restriction along marked morphisms preserves the chosen
    # initial objects; quantified over the stored marked set only
    for d in D.objects:
        checks_iii = []
        for e in sorted(dst_marking.marked1):
            if D.one_src(e) != d:
                continue
            b = D.one_tgt(e)
            if b not in chosen:
                checks_iii.append({"edge": e, "verdict": Verdict(
                    "unknown", {"reason": "no chosen initial object over the target"})})
                continue
            g_b = chosen[b]
            restricted = ("o", d, g_b[2], D.hcomp1[(g_b[3], e)])
            v = initial_in_localization(c_slices[d], restricted, budgets)
            checks_iii.append({"edge": e, "restricted": restricted, "verdict": v})
        cond_iii = _aggregate([r["verdict"].value for r in checks_iii]) if checks_iii else "yes"
        per_object[d]["condition_iii"] = {"verdict": cond_iii, "checks": checks_iii}

    values = []
    for d in D.objects:
        rec = per_object[d]
        for cond in ("condition_i", "condition_ii", "condition_iii"):
            values.append(rec[cond]["verdict"])
            if rec[cond]["verdict"] == "no" and counterexample is None:
                counterexample = {"object": d, "condition": cond,
                                  "detail": rec[cond]}
    verdict = _aggregate(values) if values else "yes"
    return CofinalityReport(verdict, per_object, counterexample,
                            {"note": "conditions quantified over the stored marked set",
                             **budgets})


# ---------------------------------------------------------------------------
# the classical 1-categorical oracle
# ---------------------------------------------------------------------------


def joyal_cofinal(p: CatFunctor, budgets: Optional[dict] = None) -> Verdict:
    """Classical cofinality of a functor of finite categories: every comma
    category d/p must be weakly contractible."""
    per_object = {}
    values = []
    for d in p.dst.objects:
        comma = comma_under(p, d)
        v = weakly_contractible(comma.nerve(max_dim=4), budgets)
        per_object[d] = v
        values.append(v.value)
    value = _aggregate(values) if values else "yes"
    witness = next((d for d in p.dst.objects if per_object[d].no), None)
    return Verdict(value, {"per_object": per_object, "witness": witness})


def two_bracket_duality(p: CatFunctor, budgets: Optional[dict] = None) -> dict:
    """Consistency of the 2-categorical verdict on the two-object construction
    with the classical verdict for the opposite functor."""
    F = two_bracket_functor(p)
    left = check_cofinal(F, budgets=budgets)
    right = joyal_cofinal(p.opposite(), budgets)
    if left.verdict == "unknown" or right.value == "unknown":
        status = "UNDECIDED"
    elif left.verdict == right.value:
        status = "AGREE"
    else:
        status = "DISAGREE"
    return {
        "status": status,
        "two_categorical": left.verdict,
        "one_categorical": right.value,
        "report": left,
        "oracle": right,
    }


# ---------------------------------------------------------------------------
# localization comparison with everything marked
# ---------------------------------------------------------------------------


def theorem_a_localizations(f: TwoFunctor, only_sharp: bool = True,
                            budgets: Optional[dict] = None) -> dict:
    """With every 1-cell marked, a cofinal functor induces an equivalence of
    localizations; the homology of the nerves is a sound necessary check."""
    C, D = f.src, f.dst
    sharpC = Marking2Cat(C, frozenset(C.onecells))
    sharpD = Marking2Cat(D, frozenset(D.onecells))
    if only_sharp is not True:
        raise ValueError("the localization comparison requires the full marking")
    report = check_cofinal(f, sharpC, sharpD, budgets)
    out: dict = {"cofinality": report.verdict}
    if report.verdict != "yes":
        out["status"] = "hypothesis not established; consequence not asserted"
        return out
    HC = homology(scaled_nerve(C, sharpC), 4)
    HD = homology(scaled_nerve(D, sharpD), 4)
    hi = min(HC.sound_up_to, HD.sound_up_to)
    match = all(HC.group(k) == HD.group(k) for k in range(hi + 1))
    out["status"] = "hypothesis established"
    out["homology_match"] = match
    out["compared_up_to"] = hi
    out["source_homology"] = HC.to_json_dict()
    out["target_homology"] = HD.to_json_dict()
    return out


# ---------------------------------------------------------------------------
# terminality of the unit morphisms in mapping categories
# ---------------------------------------------------------------------------


def eta_terminal_check(D: StrictTwoCat, d: str, e: str) -> Verdict:
    """In the strict slice over d, the unit 1-cell onto e is terminal in the
    mapping category Map(id_d, e)."""
    if e not in D.onecells or D.one_src(e) != d:
        raise KeyError(f"{e} is not a 1-cell out of {d}")
    bundle = fr(identity_two_functor(D))
    marking, _ = slice_fiber(bundle, d)
    sub = marking.base
    o_id = ("o", d, d, D.id1[d])
    o_e = ("o", d, D.one_tgt(e), e)
    eta = ("m", o_id, o_e, D.id1[d], e, D.id2[e])
    mapping = sub.hom_cat(o_id, o_e)
    if eta not in mapping.objects:
        return Verdict("no", {"reason": "unit morphism missing"})
    bad = []
    for x in mapping.objects:
        arrows = mapping.hom(x, eta)
        if len(arrows) != 1:
            bad.append((x, len(arrows)))
    if bad:
        return Verdict("no", {"non_terminal_witness": bad[0]})
    return Verdict("yes", {"eta": eta, "objects_checked": len(mapping.objects)})


def is_terminal_in(mapping: FinCat, obj) -> bool:
    """Terminality in a finite category: unique morphism from every object."""
    return all(len(mapping.hom(x, obj)) == 1 for x in mapping.objects)
