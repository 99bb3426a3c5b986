"""Partially lax limits of cospan-shaped diagrams of finite categories.

The three flavours (lax, pseudo, directed) are computed strictly from their
explicit descriptions; a cone oracle then checks representability evidence on
a small probe set.  Morphisms of cones use strictly commuting squares.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .fincat import CatFunctor, FinCat, all_functors, terminal_cat, walking_arrow

F_LEG = "1->2"   # the leg carried by the functor F
G_LEG = "0->2"   # the leg carried by the functor G


class BudgetError(RuntimeError):
    pass


@dataclass
class ConeDiagram:
    """A cospan F: A -> C <- B : G with a set of marked legs."""

    F: CatFunctor
    G: CatFunctor
    marking: frozenset = frozenset()

    def __post_init__(self):
        if self.F.dst is not self.G.dst:
            raise ValueError("legs must share a target")
        bad = set(self.marking) - {F_LEG, G_LEG}
        if bad:
            raise ValueError(f"unknown marked legs {bad}")

    @property
    def A(self) -> FinCat:
        return self.F.src

    @property
    def B(self) -> FinCat:
        return self.G.src

    @property
    def C(self) -> FinCat:
        return self.F.dst


@dataclass
class Cone:
    """A marked-lax cone over a cospan with a given tip."""

    tip: FinCat
    pa: CatFunctor
    pb: CatFunctor
    pc: CatFunctor
    eta_f: dict          # object of tip -> morphism F(pa t) -> pc t in C
    eta_g: dict

    def key(self) -> tuple:
        return (
            tuple(sorted(self.pa.omap.items())), tuple(sorted(self.pa.mmap.items())),
            tuple(sorted(self.pb.omap.items())), tuple(sorted(self.pb.mmap.items())),
            tuple(sorted(self.pc.omap.items())), tuple(sorted(self.pc.mmap.items())),
            tuple(sorted(self.eta_f.items())), tuple(sorted(self.eta_g.items())),
        )

    def restrict(self, h: CatFunctor) -> "Cone":
        """Restriction along a functor into the tip."""
        comp = _compose_functors
        return Cone(h.src, comp(self.pa, h), comp(self.pb, h), comp(self.pc, h),
                    {t: self.eta_f[h.omap[t]] for t in h.src.objects},
                    {t: self.eta_g[h.omap[t]] for t in h.src.objects})


def _compose_functors(g: CatFunctor, f: CatFunctor) -> CatFunctor:
    return CatFunctor(f.src, g.dst,
                      {a: g.omap[f.omap[a]] for a in f.src.objects},
                      {m: g.mmap[f.mmap[m]] for m in f.src.morphisms})


@dataclass
class LimitCandidate:
    category: FinCat
    cone: Cone
    strictified: Optional[FinCat] = None


def lax_pullback(F: CatFunctor, G: CatFunctor) -> LimitCandidate:
    """Objects (a, b, c, alpha_a: F(a) -> c, alpha_b: G(b) -> c); morphisms are
    componentwise with both squares commuting strictly."""
    A, B, C = F.src, G.src, F.dst
    objs = []
    data = {}
    for a in A.objects:
        for b in B.objects:
            for c in C.objects:
                for aa in C.hom(F.omap[a], c):
                    for ab in C.hom(G.omap[b], c):
                        name = f"{a}|{b}|{c}|{aa}|{ab}"
                        objs.append(name)
                        data[name] = (a, b, c, aa, ab)
    mors, src, tgt, mdata = [], {}, {}, {}
    for o1 in objs:
        a1, b1, c1, aa1, ab1 = data[o1]
        for o2 in objs:
            a2, b2, c2, aa2, ab2 = data[o2]
            for fa in A.hom(a1, a2):
                for fb in B.hom(b1, b2):
                    for fc in C.hom(c1, c2):
                        if C.comp[(aa2, F.mmap[fa])] != C.comp[(fc, aa1)]:
                            continue
                        if C.comp[(ab2, G.mmap[fb])] != C.comp[(fc, ab1)]:
                            continue
                        name = f"{fa}|{fb}|{fc}|{o1}>{o2}"
                        mors.append(name)
                        src[name], tgt[name] = o1, o2
                        mdata[name] = (fa, fb, fc)
    comp = {}
    for m1 in mors:
        for m2 in mors:
            if tgt[m1] != src[m2]:
                continue
            fa = A.comp[(mdata[m2][0], mdata[m1][0])]
            fb = B.comp[(mdata[m2][1], mdata[m1][1])]
            fc = C.comp[(mdata[m2][2], mdata[m1][2])]
            comp[(m2, m1)] = f"{fa}|{fb}|{fc}|{src[m1]}>{tgt[m2]}"
    ident = {}
    for o in objs:
        a, b, c, _, _ = data[o]
        ident[o] = f"{A.ident[a]}|{B.ident[b]}|{C.ident[c]}|{o}>{o}"
    P = FinCat(objs, mors, src, tgt, comp, ident, name="laxpb")
    cone = Cone(
        P,
        CatFunctor(P, A, {o: data[o][0] for o in objs}, {m: mdata[m][0] for m in mors}),
        CatFunctor(P, B, {o: data[o][1] for o in objs}, {m: mdata[m][1] for m in mors}),
        CatFunctor(P, C, {o: data[o][2] for o in objs}, {m: mdata[m][2] for m in mors}),
        {o: data[o][3] for o in objs},
        {o: data[o][4] for o in objs},
    )
    return LimitCandidate(P, cone)


def _full_subcategory(L: LimitCandidate, keep: list) -> LimitCandidate:
    P, cone = L.category, L.cone
    keep_set = set(keep)
    mors = [m for m in P.morphisms if P.src[m] in keep_set and P.tgt[m] in keep_set]
    sub = FinCat(keep, mors, {m: P.src[m] for m in mors}, {m: P.tgt[m] for m in mors},
                 {(g, f): h for (g, f), h in P.comp.items() if g in set(mors) and f in set(mors)},
                 {o: P.ident[o] for o in keep}, name=P.name + "-sub")
    newcone = Cone(
        sub,
        CatFunctor(sub, cone.pa.dst, {o: cone.pa.omap[o] for o in keep},
                   {m: cone.pa.mmap[m] for m in mors}),
        CatFunctor(sub, cone.pb.dst, {o: cone.pb.omap[o] for o in keep},
                   {m: cone.pb.mmap[m] for m in mors}),
        CatFunctor(sub, cone.pc.dst, {o: cone.pc.omap[o] for o in keep},
                   {m: cone.pc.mmap[m] for m in mors}),
        {o: cone.eta_f[o] for o in keep},
        {o: cone.eta_g[o] for o in keep},
    )
    return LimitCandidate(sub, newcone)


def pseudo_pullback(F: CatFunctor, G: CatFunctor) -> LimitCandidate:
    """The full subcategory of the lax pullback on tuples with both legs
    invertible."""
    L = lax_pullback(F, G)
    C = F.dst
    keep = [o for o in L.category.objects
            if C.is_iso(L.cone.eta_f[o]) and C.is_iso(L.cone.eta_g[o])]
    return _full_subcategory(L, keep)


def directed_pullback(F: CatFunctor, G: CatFunctor,
                      marked_leg: str = G_LEG) -> LimitCandidate:
    """The partially lax limit with one pseudo leg.

    Returned as the full subcategory of the lax pullback on tuples whose
    marked leg is invertible, so that the strict cone bijection holds on the
    nose; the familiar one-arrow description (a, b, alpha: F(a) -> G(b)) is
    attached as ``strictified`` (an equivalent, generally smaller category).
    """
    if marked_leg not in (F_LEG, G_LEG):
        raise ValueError("marked_leg must name one of the two legs")
    L = lax_pullback(F, G)
    C = F.dst
    leg = L.cone.eta_g if marked_leg == G_LEG else L.cone.eta_f
    keep = [o for o in L.category.objects if C.is_iso(leg[o])]
    out = _full_subcategory(L, keep)
    out.strictified = _strictified_directed(F, G, marked_leg)
    return out


def _strictified_directed(F: CatFunctor, G: CatFunctor, marked_leg: str) -> FinCat:
    """The one-arrow model: objects (a, b, alpha) across the unmarked leg."""
    here, there = (F, G) if marked_leg == G_LEG else (G, F)
    C = F.dst
    objs, data = [], {}
    for a in here.src.objects:
        for b in there.src.objects:
            for al in C.hom(here.omap[a], there.omap[b]):
                name = f"{a}|{b}|{al}"
                objs.append(name)
                data[name] = (a, b, al)
    mors, src, tgt, mdata = [], {}, {}, {}
    for o1 in objs:
        a1, b1, al1 = data[o1]
        for o2 in objs:
            a2, b2, al2 = data[o2]
            for fa in here.src.hom(a1, a2):
                for fb in there.src.hom(b1, b2):
                    if C.comp[(there.mmap[fb], al1)] != C.comp[(al2, here.mmap[fa])]:
                        continue
                    name = f"{fa}|{fb}|{o1}>{o2}"
                    mors.append(name)
                    src[name], tgt[name] = o1, o2
                    mdata[name] = (fa, fb)
    comp = {}
    for m1 in mors:
        for m2 in mors:
            if tgt[m1] != src[m2]:
                continue
            fa = here.src.comp[(mdata[m2][0], mdata[m1][0])]
            fb = there.src.comp[(mdata[m2][1], mdata[m1][1])]
            comp[(m2, m1)] = f"{fa}|{fb}|{src[m1]}>{tgt[m2]}"
    ident = {o: f"{here.src.ident[data[o][0]]}|{there.src.ident[data[o][1]]}|{o}>{o}"
             for o in objs}
    return FinCat(objs, mors, src, tgt, comp, ident, name="dirpb")


# ---------------------------------------------------------------------------
# the cone oracle
# ---------------------------------------------------------------------------


def enumerate_cones(diagram: ConeDiagram, tip: FinCat,
                    budget: int = 200000) -> list[Cone]:
    """All marked-lax cones over the cospan with the given tip, brute force."""
    A, B, C = diagram.A, diagram.B, diagram.C
    F, G = diagram.F, diagram.G
    cones = []
    pas = all_functors(tip, A)
    pbs = all_functors(tip, B)
    pcs = all_functors(tip, C)
    if len(pas) * len(pbs) * len(pcs) > budget:
        raise BudgetError("cone enumeration exceeds the budget")
    for pa in pas:
        for pb in pbs:
            for pc in pcs:
                pools_f = []
                pools_g = []
                for t in tip.objects:
                    hf = C.hom(F.omap[pa.omap[t]], pc.omap[t])
                    hg = C.hom(G.omap[pb.omap[t]], pc.omap[t])
                    if F_LEG in diagram.marking:
                        hf = [m for m in hf if C.is_iso(m)]
                    if G_LEG in diagram.marking:
                        hg = [m for m in hg if C.is_iso(m)]
                    pools_f.append(hf)
                    pools_g.append(hg)
                for etas_f in itertools.product(*pools_f):
                    ef = dict(zip(tip.objects, etas_f))
                    if not _natural(tip, C, F, pa, pc, ef):
                        continue
                    for etas_g in itertools.product(*pools_g):
                        eg = dict(zip(tip.objects, etas_g))
                        if not _natural(tip, C, G, pb, pc, eg):
                            continue
                        cones.append(Cone(tip, pa, pb, pc, ef, eg))
    return cones


def _natural(tip: FinCat, C: FinCat, F: CatFunctor, p: CatFunctor, pc: CatFunctor,
             eta: dict) -> bool:
    for m in tip.morphisms:
        t0, t1 = tip.src[m], tip.tgt[m]
        lhs = C.comp[(pc.mmap[m], eta[t0])]
        rhs = C.comp[(eta[t1], F.mmap[p.mmap[m]])]
        if lhs != rhs:
            return False
    return True


def default_probes() -> tuple[list, list]:
    """Probe categories and the morphisms between them."""
    pt, arrow = terminal_cat(), walking_arrow()
    probes = [("pt", pt), ("arrow", arrow)]
    morphs = [
        ("i0", CatFunctor(pt, arrow, {"*": "0"}, {"id*": arrow.ident["0"]}), "pt", "arrow"),
        ("i1", CatFunctor(pt, arrow, {"*": "1"}, {"id*": arrow.ident["1"]}), "pt", "arrow"),
    ]
    return probes, morphs


def cone_oracle(diagram: ConeDiagram, candidate: LimitCandidate,
                probes=None, budget: int = 200000) -> dict:
    """Representability evidence: for each probe T, functors T -> P biject
    with marked-lax cones with tip T, naturally in the stored probe maps."""
    probe_list, probe_morphs = default_probes() if probes is None else probes
    P, cone = candidate.category, candidate.cone
    report = {"pass": True, "probes": {}, "budget": budget}
    images: dict = {}
    for name, T in probe_list:
        homs = all_functors(T, P)
        if len(homs) > budget:
            raise BudgetError("functor enumeration exceeds the budget")
        cones = enumerate_cones(diagram, T, budget)
        image = {}
        for h in homs:
            c = cone.restrict(h)
            image[c.key()] = h
        ok = len(image) == len(homs) and set(image) == {c.key() for c in cones}
        report["probes"][name] = {
            "functors": len(homs), "cones": len(cones), "bijective": ok,
        }
        images[name] = (homs, image)
        if not ok:
            report["pass"] = False
    for mname, m, src_name, dst_name in probe_morphs:
        if src_name not in images or dst_name not in images:
            continue
        homs_dst, _ = images[dst_name]
        natural = True
        for h in homs_dst:
            lhs = cone.restrict(_compose_functors(h, m)).key()
            rhs = cone.restrict(h).restrict(m).key()
            if lhs != rhs:
                natural = False
        report["probes"].setdefault("naturality", {})[mname] = natural
        if not natural:
            report["pass"] = False
    return report


# ---------------------------------------------------------------------------
# arrow-shaped diagrams
# ---------------------------------------------------------------------------

ARROW_LEG = "0->1"


@dataclass
class ArrowDiagram:
    """A single functor E: A -> B viewed as an interval-shaped diagram."""

    E: CatFunctor
    marking: frozenset = frozenset()

    def __post_init__(self):
        bad = set(self.marking) - {ARROW_LEG}
        if bad:
            raise ValueError(f"unknown marked legs {bad}")


@dataclass
class ArrowCone:
    """A cone over an arrow diagram: eta_t : E(pa t) -> pb t."""

    tip: FinCat
    pa: CatFunctor
    pb: CatFunctor
    eta: dict

    def key(self) -> tuple:
        return (
            tuple(sorted(self.pa.omap.items())), tuple(sorted(self.pa.mmap.items())),
            tuple(sorted(self.pb.omap.items())), tuple(sorted(self.pb.mmap.items())),
            tuple(sorted(self.eta.items())),
        )

    def restrict(self, h: CatFunctor) -> "ArrowCone":
        comp = _compose_functors
        return ArrowCone(h.src, comp(self.pa, h), comp(self.pb, h),
                         {t: self.eta[h.omap[t]] for t in h.src.objects})


def arrow_limit(E: CatFunctor, marked: bool = False) -> LimitCandidate:
    """The lax limit of a single functor: tuples (a, b, beta: E(a) -> b),
    restricted to invertible beta when the leg is marked."""
    A, B = E.src, E.dst
    objs, data = [], {}
    for a in A.objects:
        for b in B.objects:
            for beta in B.hom(E.omap[a], b):
                if marked and not B.is_iso(beta):
                    continue
                name = f"{a}|{b}|{beta}"
                objs.append(name)
                data[name] = (a, b, beta)
    mors, src, tgt, mdata = [], {}, {}, {}
    for o1 in objs:
        a1, b1, be1 = data[o1]
        for o2 in objs:
            a2, b2, be2 = data[o2]
            for fa in A.hom(a1, a2):
                for fb in B.hom(b1, b2):
                    if B.comp[(fb, be1)] != B.comp[(be2, E.mmap[fa])]:
                        continue
                    name = f"{fa}|{fb}|{o1}>{o2}"
                    mors.append(name)
                    src[name], tgt[name] = o1, o2
                    mdata[name] = (fa, fb)
    comp = {}
    for m1 in mors:
        for m2 in mors:
            if tgt[m1] != src[m2]:
                continue
            fa = A.comp[(mdata[m2][0], mdata[m1][0])]
            fb = B.comp[(mdata[m2][1], mdata[m1][1])]
            comp[(m2, m1)] = f"{fa}|{fb}|{src[m1]}>{tgt[m2]}"
    ident = {o: f"{A.ident[data[o][0]]}|{B.ident[data[o][1]]}|{o}>{o}" for o in objs}
    P = FinCat(objs, mors, src, tgt, comp, ident, name="arrowlim")
    pa = CatFunctor(P, A, {o: data[o][0] for o in objs}, {m: mdata[m][0] for m in mors})
    pb = CatFunctor(P, B, {o: data[o][1] for o in objs}, {m: mdata[m][1] for m in mors})
    cone = ArrowCone(P, pa, pb, {o: data[o][2] for o in objs})
    return LimitCandidate(P, cone)


def enumerate_arrow_cones(diagram: ArrowDiagram, tip: FinCat,
                          budget: int = 200000) -> list[ArrowCone]:
    A, B, E = diagram.E.src, diagram.E.dst, diagram.E
    pas = all_functors(tip, A)
    pbs = all_functors(tip, B)
    if len(pas) * len(pbs) > budget:
        raise BudgetError("cone enumeration exceeds the budget")
    cones = []
    for pa in pas:
        for pb in pbs:
            pools = []
            for t in tip.objects:
                h = B.hom(E.omap[pa.omap[t]], pb.omap[t])
                if ARROW_LEG in diagram.marking:
                    h = [m for m in h if B.is_iso(m)]
                pools.append(h)
            for etas in itertools.product(*pools):
                eta = dict(zip(tip.objects, etas))
                if _natural(tip, B, E, pa, pb, eta):
                    cones.append(ArrowCone(tip, pa, pb, eta))
    return cones


def arrow_cone_oracle(diagram: ArrowDiagram, candidate: LimitCandidate,
                      probes=None, budget: int = 200000) -> dict:
    probe_list, probe_morphs = default_probes() if probes is None else probes
    P, cone = candidate.category, candidate.cone
    report = {"pass": True, "probes": {}, "budget": budget}
    images = {}
    for name, T in probe_list:
        homs = all_functors(T, P)
        cones = enumerate_arrow_cones(diagram, T, budget)
        image = {cone.restrict(h).key(): h for h in homs}
        ok = len(image) == len(homs) and set(image) == {c.key() for c in cones}
        report["probes"][name] = {"functors": len(homs), "cones": len(cones),
                                  "bijective": ok}
        images[name] = homs
        if not ok:
            report["pass"] = False
    for mname, m, src_name, dst_name in probe_morphs:
        natural = all(
            cone.restrict(_compose_functors(h, m)).key()
            == cone.restrict(h).restrict(m).key()
            for h in images.get(dst_name, [])
        )
        report["probes"].setdefault("naturality", {})[mname] = natural
        if not natural:
            report["pass"] = False
    return report
