"""Finite strict 2-categories, 2-functors, scaled nerves and lax slices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .fincat import CatFunctor, FinCat
from .simplicial import Cell, DecMap, DecoratedSSet, SSetBuilder, add_coskeletal_top


class StrictTwoCat:
    """A strict 2-category with explicit composition tables.

    * ``onecells[name] = (src_obj, tgt_obj)``
    * ``twocells[name] = (src_onecell, tgt_onecell)`` within one hom-category
    * ``vcomp[(beta, alpha)]`` vertical composite (same hom-category)
    * ``hcomp1[(g, f)]`` composite 1-cell g o f
    * ``hcomp2[(beta, alpha)]`` horizontal composite 2-cell beta * alpha
    """

    def __init__(self, objects, onecells, id1, twocells, id2, vcomp, hcomp1, hcomp2,
                 name: str = ""):
        self.objects = tuple(objects)
        self.onecells = dict(onecells)
        self.id1 = dict(id1)
        self.twocells = dict(twocells)
        self.id2 = dict(id2)
        self.vcomp = dict(vcomp)
        self.hcomp1 = dict(hcomp1)
        self.hcomp2 = dict(hcomp2)
        self.name = name
        self._equiv_cache: dict[str, bool] = {}
        self._inv2_cache: dict[str, bool] = {}

    # -- basic access --------------------------------------------------------

    def one_src(self, f: str) -> str:
        return self.onecells[f][0]

    def one_tgt(self, f: str) -> str:
        return self.onecells[f][1]

    def hom1(self, a: str, b: str) -> list[str]:
        return [f for f, (s, t) in self.onecells.items() if s == a and t == b]

    def two_between(self, f: str, g: str) -> list[str]:
        return [t for t, (s, tg) in self.twocells.items() if s == f and tg == g]

    def twos_in_hom(self, a: str, b: str) -> list[str]:
        return [t for t, (s, _) in self.twocells.items()
                if self.one_src(s) == a and self.one_tgt(s) == b]

    def hom_cat(self, a: str, b: str) -> FinCat:
        """The hom-category: objects are 1-cells a -> b, morphisms are 2-cells."""
        objs = self.hom1(a, b)
        mors = self.twos_in_hom(a, b)
        return FinCat(
            objs, mors,
            src={t: self.twocells[t][0] for t in mors},
            tgt={t: self.twocells[t][1] for t in mors},
            comp={(u, v): self.vcomp[(u, v)] for (u, v) in self.vcomp
                  if u in set(mors) and v in set(mors)},
            ident={f: self.id2[f] for f in objs},
            name=f"hom({a},{b})",
        )

    def compose1(self, g: str, f: str) -> str:
        return self.hcomp1[(g, f)]

    def vcompose(self, beta: str, alpha: str) -> str:
        return self.vcomp[(beta, alpha)]

    def hcompose(self, beta: str, alpha: str) -> str:
        return self.hcomp2[(beta, alpha)]

    def whisker_r(self, sigma: str, f: str) -> str:
        """sigma * f for a 1-cell f into the source of sigma's boundary."""
        return self.hcomp2[(sigma, self.id2[f])]

    def whisker_l(self, g: str, sigma: str) -> str:
        return self.hcomp2[(self.id2[g], sigma)]

    def is_invertible2(self, t: str) -> bool:
        if t not in self._inv2_cache:
            f, g = self.twocells[t]
            a, b = self.onecells[f]
            inv = any(
                self.vcomp[(s, t)] == self.id2[f] and self.vcomp[(t, s)] == self.id2[g]
                for s in self.two_between(g, f)
            )
            self._inv2_cache[t] = inv
        return self._inv2_cache[t]

    def is_equivalence(self, f: str) -> bool:
        """True iff f admits a pseudo-inverse up to invertible 2-cells."""
        if f not in self._equiv_cache:
            a, b = self.onecells[f]
            found = False
            for g in self.hom1(b, a):
                gf = self.hcomp1[(g, f)]
                fg = self.hcomp1[(f, g)]
                if self._iso_to(gf, self.id1[a]) and self._iso_to(fg, self.id1[b]):
                    found = True
                    break
            self._equiv_cache[f] = found
        return self._equiv_cache[f]

    def _iso_to(self, f: str, g: str) -> bool:
        return any(self.is_invertible2(t) for t in self.two_between(f, g))

    # -- validation ------------------------------------------------------------

    def validate(self) -> list[tuple]:
        """Every violated law with a witness; empty iff all laws hold."""
        bad = []
        for a in self.objects:
            for b in self.objects:
                bad.extend(("hom", a, b) + v for v in self.hom_cat(a, b).validate())
        # unit laws for horizontal composition
        for f, (a, b) in self.onecells.items():
            if self.hcomp1.get((self.id1[b], f)) != f:
                bad.append(("left-unit-1", f))
            if self.hcomp1.get((f, self.id1[a])) != f:
                bad.append(("right-unit-1", f))
        # strict associativity of 1-cell composition
        for f, (a, b) in self.onecells.items():
            for g, (b2, c) in self.onecells.items():
                if b2 != b:
                    continue
                gf = self.hcomp1.get((g, f))
                for h, (c2, d) in self.onecells.items():
                    if c2 != c:
                        continue
                    hg = self.hcomp1.get((h, g))
                    lhs = self.hcomp1.get((h, gf)) if gf else None
                    rhs = self.hcomp1.get((hg, f)) if hg else None
                    if lhs is None or rhs is None or lhs != rhs:
                        bad.append(("assoc-1", h, g, f))
        # hcomp2 endpoints and functoriality (interchange law)
        for (beta, alpha), res in self.hcomp2.items():
            fb, gb = self.twocells[beta]
            fa, ga = self.twocells[alpha]
            want = (self.hcomp1[(fb, fa)], self.hcomp1[(gb, ga)])
            if self.twocells.get(res) != want:
                bad.append(("hcomp2-endpoints", beta, alpha))
        for f in self.onecells:
            for g in self.onecells:
                if self.one_src(g) != self.one_tgt(f):
                    continue
                if self.hcomp2.get((self.id2[g], self.id2[f])) != self.id2[self.hcomp1[(g, f)]]:
                    bad.append(("hcomp2-identity", g, f))
        # whiskering by identity 1-cells is the identity
        for t, (f, g) in self.twocells.items():
            a, bb = self.onecells[f]
            if self.hcomp2.get((self.id2[self.id1[bb]], t)) != t:
                bad.append(("left-unit-2", t))
            if self.hcomp2.get((t, self.id2[self.id1[a]])) != t:
                bad.append(("right-unit-2", t))
        bad.extend(self._interchange_violations())
        # associativity of horizontal 2-cell composition
        for alpha in self.twocells:
            for beta in self.twocells:
                if not self._hcomposable(beta, alpha):
                    continue
                for gamma in self.twocells:
                    if not self._hcomposable(gamma, beta):
                        continue
                    inner_l = self.hcomp2.get((beta, alpha))
                    inner_r = self.hcomp2.get((gamma, beta))
                    lhs = self.hcomp2.get((gamma, inner_l)) if inner_l else None
                    rhs = self.hcomp2.get((inner_r, alpha)) if inner_r else None
                    if lhs is None or rhs is None or lhs != rhs:
                        bad.append(("assoc-2", gamma, beta, alpha))
        return bad

    def _hcomposable(self, beta: str, alpha: str) -> bool:
        return self.one_src(self.twocells[beta][0]) == self.one_tgt(self.twocells[alpha][0])

    def _interchange_violations(self) -> list[tuple]:
        bad = []
        twos = list(self.twocells)
        for alpha in twos:
            fa, ga = self.twocells[alpha]
            for alpha2 in twos:
                if self.twocells[alpha2][0] != ga:
                    continue
                for beta in twos:
                    if not self._hcomposable(beta, alpha):
                        continue
                    fb, gb = self.twocells[beta]
                    for beta2 in twos:
                        if self.twocells[beta2][0] != gb:
                            continue
                        vb = self.vcomp.get((beta2, beta))
                        va = self.vcomp.get((alpha2, alpha))
                        h2 = self.hcomp2.get((beta2, alpha2))
                        h1 = self.hcomp2.get((beta, alpha))
                        v_then_h = self.hcomp2.get((vb, va)) if vb and va else None
                        h_then_v = self.vcomp.get((h2, h1)) if h2 and h1 else None
                        if v_then_h is None or h_then_v is None or v_then_h != h_then_v:
                            bad.append(("interchange", beta2, beta, alpha2, alpha))
        return bad

    # -- serialization ---------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "schema": "laxfib/twocat-v1",
            "objects": list(self.objects),
            "onecells": {f: list(st) for f, st in sorted(self.onecells.items())},
            "id1": dict(sorted(self.id1.items())),
            "twocells": {t: list(st) for t, st in sorted(self.twocells.items())},
            "id2": dict(sorted(self.id2.items())),
            "vcomp": [[b, a, c] for (b, a), c in sorted(self.vcomp.items())],
            "hcomp1": [[g, f, h] for (g, f), h in sorted(self.hcomp1.items())],
            "hcomp2": [[b, a, c] for (b, a), c in sorted(self.hcomp2.items())],
        }

    @staticmethod
    def from_json_dict(doc: dict) -> "StrictTwoCat":
        return StrictTwoCat(
            doc["objects"],
            {f: tuple(st) for f, st in doc["onecells"].items()},
            doc["id1"],
            {t: tuple(st) for t, st in doc["twocells"].items()},
            doc["id2"],
            {(b, a): c for b, a, c in doc["vcomp"]},
            {(g, f): h for g, f, h in doc["hcomp1"]},
            {(b, a): c for b, a, c in doc["hcomp2"]},
        )

    def __repr__(self):
        return (f"StrictTwoCat({len(self.objects)} objects, "
                f"{len(self.onecells)} 1-cells, {len(self.twocells)} 2-cells)")


@dataclass
class Marking2Cat:
    """A strict 2-category with a marking on 1-cells, completed so that all
    identities and equivalences are marked."""

    base: StrictTwoCat
    marked1: frozenset = frozenset()

    def __post_init__(self):
        marked = set(self.marked1)
        for a in self.base.objects:
            marked.add(self.base.id1[a])
        for f in self.base.onecells:
            if self.base.is_equivalence(f):
                marked.add(f)
        self.marked1 = frozenset(marked)

    def is_marked(self, f: str) -> bool:
        return f in self.marked1


@dataclass
class TwoFunctor:
    src: StrictTwoCat
    dst: StrictTwoCat
    omap: dict
    map1: dict
    map2: dict

    def validate(self) -> list[tuple]:
        bad = []
        C, D = self.src, self.dst
        for f, (a, b) in C.onecells.items():
            g = self.map1.get(f)
            if g is None or D.onecells.get(g) != (self.omap[a], self.omap[b]):
                bad.append(("1-cell", f))
        for a in C.objects:
            if self.map1.get(C.id1[a]) != D.id1[self.omap[a]]:
                bad.append(("id1", a))
        for (g, f), h in C.hcomp1.items():
            if self.map1.get(h) != D.hcomp1.get((self.map1[g], self.map1[f])):
                bad.append(("hcomp1", g, f))
        for t, (f, g) in C.twocells.items():
            u = self.map2.get(t)
            if u is None or D.twocells.get(u) != (self.map1[f], self.map1[g]):
                bad.append(("2-cell", t))
        for f in C.onecells:
            if self.map2.get(C.id2[f]) != D.id2[self.map1[f]]:
                bad.append(("id2", f))
        for (b, a), c in C.vcomp.items():
            if self.map2.get(c) != D.vcomp.get((self.map2[b], self.map2[a])):
                bad.append(("vcomp", b, a))
        for (b, a), c in C.hcomp2.items():
            if self.map2.get(c) != D.hcomp2.get((self.map2[b], self.map2[a])):
                bad.append(("hcomp2", b, a))
        return bad

    def preserves_marking(self, mC: Marking2Cat, mD: Marking2Cat) -> bool:
        return all(self.map1[f] in mD.marked1 for f in mC.marked1)

    def to_json_dict(self) -> dict:
        return {
            "schema": "laxfib/two-functor-v1",
            "objects": dict(sorted(self.omap.items())),
            "onecells": dict(sorted(self.map1.items())),
            "twocells": dict(sorted(self.map2.items())),
        }


def identity_two_functor(C: StrictTwoCat) -> TwoFunctor:
    return TwoFunctor(C, C, {a: a for a in C.objects},
                      {f: f for f in C.onecells}, {t: t for t in C.twocells})


def compose_two_functors(g: TwoFunctor, f: TwoFunctor) -> TwoFunctor:
    if g.src is not f.dst and (g.src.objects != f.dst.objects
                               or g.src.onecells != f.dst.onecells
                               or g.src.twocells != f.dst.twocells):
        raise ValueError("composition mismatch")
    return TwoFunctor(f.src, g.dst,
                      {a: g.omap[f.omap[a]] for a in f.omap},
                      {m: g.map1[f.map1[m]] for m in f.map1},
                      {t: g.map2[f.map2[t]] for t in f.map2})


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def terminal_twocat() -> StrictTwoCat:
    return StrictTwoCat(
        ["*"], {"1*": ("*", "*")}, {"*": "1*"}, {"2*": ("1*", "1*")}, {"1*": "2*"},
        {("2*", "2*"): "2*"}, {("1*", "1*"): "1*"}, {("2*", "2*"): "2*"},
        name="terminal",
    )


def from_fincat(C: FinCat) -> StrictTwoCat:
    """A 1-category viewed as a 2-category with only identity 2-cells."""
    onecells = {m: (C.src[m], C.tgt[m]) for m in C.morphisms}
    id1 = {a: C.ident[a] for a in C.objects}
    twocells = {f"i{m}": (m, m) for m in C.morphisms}
    id2 = {m: f"i{m}" for m in C.morphisms}
    vcomp = {(f"i{m}", f"i{m}"): f"i{m}" for m in C.morphisms}
    hcomp1 = {(g, f): h for (g, f), h in C.comp.items()}
    hcomp2 = {(f"i{g}", f"i{f}"): f"i{h}" for (g, f), h in C.comp.items()}
    return StrictTwoCat(C.objects, onecells, id1, twocells, id2, vcomp, hcomp1, hcomp2,
                        name=C.name)


def two_bracket(K: FinCat) -> StrictTwoCat:
    """The 2-category with objects 0, 1, hom(0,1) = K and trivial endo-homs."""
    objects = ["0", "1"]
    onecells = {"id0": ("0", "0"), "id1": ("1", "1")}
    for k in K.objects:
        onecells[f"o:{k}"] = ("0", "1")
    id1 = {"0": "id0", "1": "id1"}
    twocells = {"2id0": ("id0", "id0"), "2id1": ("id1", "id1")}
    for m in K.morphisms:
        twocells[f"m:{m}"] = (f"o:{K.src[m]}", f"o:{K.tgt[m]}")
    id2 = {"id0": "2id0", "id1": "2id1"}
    for k in K.objects:
        id2[f"o:{k}"] = f"m:{K.ident[k]}"
    vcomp = {("2id0", "2id0"): "2id0", ("2id1", "2id1"): "2id1"}
    for (g, f), h in K.comp.items():
        vcomp[(f"m:{g}", f"m:{f}")] = f"m:{h}"
    hcomp1 = {("id0", "id0"): "id0", ("id1", "id1"): "id1"}
    hcomp2 = {("2id0", "2id0"): "2id0", ("2id1", "2id1"): "2id1"}
    for k in K.objects:
        f = f"o:{k}"
        hcomp1[(f, "id0")] = f
        hcomp1[("id1", f)] = f
    for m in K.morphisms:
        t = f"m:{m}"
        hcomp2[(t, "2id0")] = t
        hcomp2[("2id1", t)] = t
    return StrictTwoCat(objects, onecells, id1, twocells, id2, vcomp, hcomp1, hcomp2,
                        name=f"2[{K.name}]")


def from_cat_functor(p: CatFunctor) -> TwoFunctor:
    """A functor of 1-categories as a strict 2-functor."""
    C, D = from_fincat(p.src), from_fincat(p.dst)
    return TwoFunctor(C, D, dict(p.omap), dict(p.mmap),
                      {f"i{m}": f"i{p.mmap[m]}" for m in p.src.morphisms})


def two_bracket_functor(p: CatFunctor) -> TwoFunctor:
    """The induced strict 2-functor 2[K] -> 2[S] of a functor p: K -> S."""
    TK, TS = two_bracket(p.src), two_bracket(p.dst)
    omap = {"0": "0", "1": "1"}
    map1 = {"id0": "id0", "id1": "id1"}
    for k in p.src.objects:
        map1[f"o:{k}"] = f"o:{p.omap[k]}"
    map2 = {"2id0": "2id0", "2id1": "2id1"}
    for m in p.src.morphisms:
        map2[f"m:{m}"] = f"m:{p.mmap[m]}"
    return TwoFunctor(TK, TS, omap, map1, map2)


# ---------------------------------------------------------------------------
# scaled nerve
# ---------------------------------------------------------------------------


class ScaledNerve(DecoratedSSet):
    """Scaled nerve of a strict 2-category.

    A 2-simplex is a quadruple (f, g, h, sigma) with sigma: h => g o f; it is
    thin when sigma is invertible.  3-simplices are the tetrahedra satisfying
    the pasting (cocycle) equation; the object is 3-coskeletal above.
    """

    def __init__(self, C: StrictTwoCat, kind, n_cells, faces, marked, thin, lean,
                 labels, cell_data):
        super().__init__(kind, n_cells, faces, marked, thin, lean, labels=labels,
                         coskeletal=3)
        self.twocat = C
        self.cell_data = cell_data

    def vertex_of(self, obj: str) -> Cell:
        return self.cell_by_label(0, ("obj", obj))

    def edge_of(self, onecell: str) -> Cell:
        """Edge (possibly degenerate) realizing a 1-cell."""
        C = self.twocat
        a, b = C.onecells[onecell]
        if onecell == C.id1[a]:
            return self.deg(self.vertex_of(a), 0)
        return self.cell_by_label(1, ("1cell", onecell))

    def onecell_of(self, edge: Cell) -> str:
        if edge.is_degenerate():
            obj = self.labels[edge.nd][1]
            return self.twocat.id1[obj]
        return self.labels[edge.nd][1]

    def tri_data(self, tri: Cell) -> tuple[str, str, str, str]:
        """(f, g, h, sigma) of any triangle, degenerate ones included."""
        C = self.twocat
        if not tri.is_degenerate():
            return self.cell_data[tri.nd]
        root = Cell(tri.dim, tri.idx)
        if tri.dim == 0:
            obj = self.labels[root.nd][1]
            f = C.id1[obj]
            return (f, f, f, C.id2[f])
        # degenerate over an edge: word is (0,) or (1,)
        e = self.onecell_of(root)
        a, b = C.onecells[e]
        j = tri.word[0]
        if j == 0:
            return (C.id1[a], e, e, C.id2[e])
        return (e, C.id1[b], e, C.id2[e])

    def triangle_cell(self, f: str, g: str, h: str, sigma: str) -> Cell:
        """Cell realizing a quadruple; normalizes the degenerate ones."""
        C = self.twocat
        a = C.one_src(f)
        b = C.one_tgt(f)
        if f == C.id1[a] and g == h and sigma == C.id2[g]:
            return self.deg(self.edge_of(g), 0)
        if g == C.id1[b] and f == h and sigma == C.id2[f]:
            return self.deg(self.edge_of(f), 1)
        return self.cell_by_label(2, ("tri", (f, g, h, sigma)))

    def is_identity_triangle(self, tri: Cell) -> bool:
        """Filler is an identity 2-cell: h = g o f and sigma = id."""
        C = self.twocat
        f, g, h, sigma = self.tri_data(tri)
        return h == C.hcomp1[(g, f)] and sigma == C.id2[h]

    def filler_of(self, tri: Cell) -> str:
        return self.tri_data(tri)[3]


def cocycle_holds(C: StrictTwoCat, data012, data013, data023, data123) -> bool:
    """Pasting equation for a tetrahedron of nerve triangles."""
    f01 = data012[0]
    f23 = data123[1]
    s012, s013, s023, s123 = data012[3], data013[3], data023[3], data123[3]
    lhs = C.vcomp[(C.whisker_r(s123, f01), s013)]
    rhs = C.vcomp[(C.whisker_l(f23, s012), s023)]
    return lhs == rhs


def scaled_nerve(C, marking: Optional[Marking2Cat] = None, *,
                 lean_flag=None, max_dim: int = 4) -> ScaledNerve:
    """Scaled nerve as a decorated simplicial set.

    ``marking`` (defaulting to identities-and-equivalences) gives the marked
    edges; ``lean_flag`` is an optional 2-cell predicate producing an MB object
    whose lean triangles are the flagged fillers.
    """
    if isinstance(C, Marking2Cat):
        marking = C
        C = marking.base
    if marking is None:
        marking = Marking2Cat(C)
    b = SSetBuilder()
    cell_data: dict = {}
    for a in C.objects:
        b.add(0, label=("obj", a))
    for f, (a, bb) in sorted(C.onecells.items()):
        if f == C.id1[a]:
            continue
        b.add(1, (b.by_label(0, ("obj", bb)), b.by_label(0, ("obj", a))), label=("1cell", f))

    def edge_cell(f: str) -> Cell:
        a = C.one_src(f)
        if f == C.id1[a]:
            v = b.by_label(0, ("obj", a))
            return Cell(v.dim, v.idx, (0,))
        return b.by_label(1, ("1cell", f))

    # 2-simplices: quadruples minus the two degenerate families
    for f, (a, a2) in sorted(C.onecells.items()):
        for g, (b2, c) in sorted(C.onecells.items()):
            if b2 != a2:
                continue
            gf = C.hcomp1[(g, f)]
            for h in sorted(C.hom1(a, c)):
                for sigma in sorted(C.two_between(h, gf)):
                    if f == C.id1[a] and g == h and sigma == C.id2[g]:
                        continue
                    if g == C.id1[a2] and f == h and sigma == C.id2[f]:
                        continue
                    quad = (f, g, h, sigma)
                    cell = b.add(2, (edge_cell(g), edge_cell(h), edge_cell(f)),
                                 label=("tri", quad))
                    cell_data[cell.nd] = quad

    # assemble the 2-truncation to compute spheres and degeneracies
    partial = ScaledNerve(C, "PLAIN", b.n_cells, b.faces, (), (), (), b.labels, cell_data)
    degenerate_spheres = set()
    for z in partial.all_cells(2):
        for j in range(3):
            s = partial.deg(z, j)
            degenerate_spheres.add(tuple(partial.face(s, i) for i in range(4)))
    from .simplicial import coskeletal_spheres
    tetra_count = 0
    for sphere in sorted(coskeletal_spheres(partial, 3)):
        if sphere in degenerate_spheres:
            continue
        d0, d1, d2, d3 = sphere
        if not cocycle_holds(C, partial.tri_data(d3), partial.tri_data(d2),
                             partial.tri_data(d1), partial.tri_data(d0)):
            continue
        nd = (3, tetra_count)
        b.faces[nd] = sphere
        b.labels[nd] = ("tet", sphere)
        tetra_count += 1
    n_cells = list(b.n_cells) + [tetra_count]

    marked = []
    for f in sorted(C.onecells):
        if f != C.id1[C.one_src(f)] and f in marking.marked1:
            marked.append(b.by_label(1, ("1cell", f)).nd)
    thin = [nd for nd, quad in cell_data.items() if C.is_invertible2(quad[3])]
    if lean_flag is None:
        kind, lean = "MS", thin
    else:
        kind = "MB"
        lean = [nd for nd, quad in cell_data.items() if lean_flag(quad[3])]

    X3 = ScaledNerve(C, kind, n_cells, b.faces, marked, thin, lean, b.labels, cell_data)
    if max_dim >= 4:
        ext = add_coskeletal_top(X3, 4)
        X4 = ScaledNerve(C, kind, ext.n_cells, ext.faces, marked, thin, lean,
                         ext.labels, cell_data)
        return X4
    return X3


def nerve_map(F: TwoFunctor, NC: ScaledNerve, ND: ScaledNerve) -> DecMap:
    """Induced map of scaled nerves."""
    C, D = F.src, F.dst
    assign: dict = {}
    for cell in NC.all_nondeg():
        kindlab = NC.labels[cell.nd][0]
        if kindlab == "obj":
            assign[cell.nd] = ND.vertex_of(F.omap[NC.labels[cell.nd][1]])
        elif kindlab == "1cell":
            assign[cell.nd] = ND.edge_of(F.map1[NC.labels[cell.nd][1]])
        elif kindlab == "tri":
            f, g, h, s = NC.cell_data[cell.nd]
            assign[cell.nd] = ND.triangle_cell(F.map1[f], F.map1[g], F.map1[h], F.map2[s])
        else:  # tetrahedra and coskeletal cells: determined by faces
            sphere = tuple(assign_cell(ND, assign, NC.face(cell, i))
                           for i in range(cell.dim + 1))
            assign[cell.nd] = _cell_with_faces(ND, cell.dim, sphere)
    return DecMap(NC, ND, assign)


def assign_cell(ND: DecoratedSSet, assign: dict, cell: Cell) -> Cell:
    return DecoratedSSet._apply_word(assign[cell.nd], cell.word)


def _cell_with_faces(X: DecoratedSSet, dim: int, sphere: tuple) -> Cell:
    hits = X.by_faces(dim).get(sphere)
    if not hits or len(hits) > 1:
        raise ValueError(f"expected a unique {dim}-cell with given boundary, got {hits}")
    return hits[0]


# ---------------------------------------------------------------------------
# the lax comma 2-category Fr and its slices
# ---------------------------------------------------------------------------


@dataclass
class FrBundle:
    """Fr(C) for a marked 2-functor, with its decorations and projection."""

    twocat: StrictTwoCat
    marked1: frozenset          # marked 1-cells of Fr(C)-dagger
    cartesian1: frozenset       # 1-cells flagged Cartesian
    cocartesian2: frozenset     # 2-cells flagged coCartesian
    proj: TwoFunctor            # projection to the target 2-category
    f: TwoFunctor
    src_marking: Marking2Cat
    dst_marking: Marking2Cat

    def marking(self) -> Marking2Cat:
        return Marking2Cat(self.twocat, self.marked1)


def fr(f: TwoFunctor, src_marking: Optional[Marking2Cat] = None,
       dst_marking: Optional[Marking2Cat] = None) -> FrBundle:
    """The comma 2-category of lax squares under the target of f.

    Objects are 1-cells u: d -> f(c); a 1-cell u -> v is (a, alpha,
    theta: f(alpha) o u => v o a); a 2-cell is a compatible pair (psi, zeta).
    """
    C, D = f.src, f.dst
    src_marking = src_marking or Marking2Cat(C)
    dst_marking = dst_marking or Marking2Cat(D)
    if not f.preserves_marking(src_marking, dst_marking):
        raise ValueError("functor does not preserve the markings")

    objects = []
    for d in D.objects:
        for c in C.objects:
            for u in sorted(D.hom1(d, f.omap[c])):
                objects.append(("o", d, c, u))
    onecells: dict = {}
    id1: dict = {}
    for o0 in objects:
        for o1 in objects:
            _, d0, c0, u0 = o0
            _, d1, c1, u1 = o1
            for a in sorted(D.hom1(d0, d1)):
                for alpha in sorted(C.hom1(c0, c1)):
                    lhs = D.hcomp1[(f.map1[alpha], u0)]
                    rhs = D.hcomp1[(u1, a)]
                    for theta in sorted(D.two_between(lhs, rhs)):
                        onecells[("m", o0, o1, a, alpha, theta)] = (o0, o1)
    for o in objects:
        _, d, c, u = o
        id1[o] = ("m", o, o, D.id1[d], C.id1[c], D.id2[u])
        assert id1[o] in onecells

    twocells: dict = {}
    id2: dict = {}
    by_pair: dict = {}
    for m in onecells:
        by_pair.setdefault(onecells[m], []).append(m)
    for (o0, o1), ms in by_pair.items():
        _, d0, c0, u0 = o0
        _, d1, c1, u1 = o1
        for m0 in ms:
            _, _, _, a0, alpha0, theta0 = m0
            for m1 in ms:
                _, _, _, a1, alpha1, theta1 = m1
                for psi in sorted(D.two_between(a0, a1)):
                    for zeta in sorted(C.two_between(alpha0, alpha1)):
                        left = D.vcomp[(theta1, D.hcomp2[(f.map2[zeta], D.id2[u0])])]
                        right = D.vcomp[(D.hcomp2[(D.id2[u1], psi)], theta0)]
                        if left == right:
                            twocells[("t", m0, m1, psi, zeta)] = (m0, m1)
    for m in onecells:
        _, _, _, a, alpha, theta = m
        id2[m] = ("t", m, m, D.id2[a], C.id2[alpha])
        assert id2[m] in twocells

    vcomp: dict = {}
    for t1 in twocells:
        _, m0, m1, psi1, zeta1 = t1
        for t2 in twocells:
            _, m1b, m2, psi2, zeta2 = t2
            if m1b != m1:
                continue
            vcomp[(t2, t1)] = ("t", m0, m2, D.vcomp[(psi2, psi1)], C.vcomp[(zeta2, zeta1)])

    hcomp1: dict = {}
    for m in onecells:
        _, o0, o1, a, alpha, theta = m
        for m2 in onecells:
            _, o1b, o2, a2, alpha2, theta2 = m2
            if o1b != o1:
                continue
            _, _, _, u0 = o0
            theta12 = D.vcomp[(
                D.hcomp2[(theta2, D.id2[a])],
                D.hcomp2[(D.id2[f.map1[alpha2]], theta)],
            )]
            hcomp1[(m2, m)] = ("m", o0, o2, D.hcomp1[(a2, a)],
                               C.hcomp1[(alpha2, alpha)], theta12)

    hcomp2: dict = {}
    for t in twocells:
        _, m0, m1, psi, zeta = t
        o0, o1 = onecells[m0]
        for t2 in twocells:
            _, n0, n1, psi2, zeta2 = t2
            if onecells[n0][0] != o1:
                continue
            hcomp2[(t2, t)] = ("t", hcomp1[(n0, m0)], hcomp1[(n1, m1)],
                               D.hcomp2[(psi2, psi)], C.hcomp2[(zeta2, zeta)])

    frcat = StrictTwoCat(objects, onecells, id1, twocells, id2, vcomp, hcomp1, hcomp2,
                         name=f"Fr({C.name})")

    cartesian = frozenset(
        m for m in onecells
        if C.is_equivalence(m[4]) and D.is_invertible2(m[5])
    )
    marked = frozenset(
        m for m in onecells
        if m[4] in src_marking.marked1 and D.is_invertible2(m[5])
    )
    cocart = frozenset(t for t in twocells if C.is_invertible2(t[4]))
    proj = TwoFunctor(
        frcat, D,
        omap={o: o[1] for o in objects},
        map1={m: m[3] for m in onecells},
        map2={t: t[3] for t in twocells},
    )
    return FrBundle(frcat, marked, cartesian, cocart, proj, f, src_marking, dst_marking)


def slice_fiber(bundle: FrBundle, d: str) -> tuple[Marking2Cat, FrBundle]:
    """The fiber of Fr(C) -> D over d: the strict model of the lax slice.

    Returns the marked sub-2-category on objects with source d, 1-cells over
    id_d and 2-cells over the identity.
    """
    Fr, D = bundle.twocat, bundle.f.dst
    if d not in D.objects:
        raise KeyError(f"unknown object {d}")
    objs = [o for o in Fr.objects if o[1] == d]
    keep1 = {m for m in Fr.onecells if m[3] == D.id1[d] and Fr.onecells[m][0][1] == d}
    keep2 = {t for t in Fr.twocells
             if t[3] == D.id2[D.id1[d]] and t[1] in keep1 and t[2] in keep1}
    sub = StrictTwoCat(
        objs,
        {m: Fr.onecells[m] for m in Fr.onecells if m in keep1},
        {o: Fr.id1[o] for o in objs},
        {t: Fr.twocells[t] for t in Fr.twocells if t in keep2},
        {m: Fr.id2[m] for m in keep1},
        {pair: r for pair, r in Fr.vcomp.items() if pair[0] in keep2 and pair[1] in keep2},
        {pair: r for pair, r in Fr.hcomp1.items() if pair[0] in keep1 and pair[1] in keep1},
        {pair: r for pair, r in Fr.hcomp2.items() if pair[0] in keep2 and pair[1] in keep2},
        name=f"{Fr.name}|{d}",
    )
    marking = Marking2Cat(sub, frozenset(m for m in bundle.marked1 if m in keep1))
    return marking, bundle
