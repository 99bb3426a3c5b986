"""The tame model of the free fibration on a 2-functor between 2-categories.

An n-simplex of the total space is a commuting pair

    phi : interval (x) Delta^n  ->  nerve(D)
    rho : Delta^n               ->  nerve(C)      with  nerve(f) o rho = phi|_{1}

that sends every contrary triangle (0,x) -> (1,x) -> (1,y) of the prism to an
identity triangle of nerve(D).  The object is materialized in dimensions <= 3
and is 3-coskeletal above.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .gray import delta, e_map, end_map, prism, prism_deg, prism_face, simplex_deg, simplex_face
from .simplicial import Cell, DecMap, DecoratedSSet, add_coskeletal_top, enumerate_maps
from .twocat import (
    FrBundle,
    Marking2Cat,
    ScaledNerve,
    StrictTwoCat,
    TwoFunctor,
    fr,
    nerve_map,
    scaled_nerve,
)

TOP_DIM = 3


@dataclass(frozen=True)
class PairSimplex:
    """A simplex of the total space in its (phi, rho) presentation."""

    n: int
    phi: DecMap
    rho: DecMap

    def key(self) -> tuple:
        return (self.n, self.phi.key(), self.rho.key())

    def face(self, i: int) -> "PairSimplex":
        return PairSimplex(self.n - 1,
                           self.phi.compose(prism_face(self.n, i)),
                           self.rho.compose(simplex_face(self.n, i)))

    def degeneracy(self, j: int) -> "PairSimplex":
        return PairSimplex(self.n + 1,
                           self.phi.compose(prism_deg(self.n, j)),
                           self.rho.compose(simplex_deg(self.n, j)))

    def extend(self, j: int) -> "PairSimplex":
        """The j-th extension: an (n+1)-simplex with phi-part phi o E_j and
        rho-part rho o s_j."""
        if not 0 <= j <= self.n:
            raise ValueError(f"extension index {j} out of range")
        return PairSimplex(self.n + 1,
                           self.phi.compose(e_map(j, self.n)),
                           self.rho.compose(simplex_deg(self.n, j)))

    def is_degenerate(self) -> bool:
        for j in range(self.n):
            if self.face(j).degeneracy(j).key() == self.key():
                return True
        return False

    def ell(self) -> DecMap:
        """The restriction over {1}, valued in nerve(C)."""
        return self.rho


def classifying_map(X: DecoratedSSet, x: Cell) -> DecMap:
    """The map Delta^n -> X classifying an n-cell."""
    n = x.total_dim
    D = delta(n)
    assign = {}
    for cell in D.all_nondeg():
        sub = set(D.labels[cell.nd])
        img = x
        for v in range(n, -1, -1):
            if v not in sub:
                img = X.face(img, v)
        assign[cell.nd] = img
    return DecMap(D, X, assign)


def gamma_pair(fN: DecMap, rho_cell: Cell) -> PairSimplex:
    """The unit: collapse the interval and project to the base."""
    NC, ND = fN.src, fN.dst
    n = rho_cell.total_dim
    rho = classifying_map(NC, rho_cell)
    phi = fN.compose(rho).compose(prism(n).proj_b())
    return PairSimplex(n, phi, rho)


class FreeFibration:
    """The tame total space of the free fibration, with its decorations."""

    def __init__(self, f: TwoFunctor, src_marking: Marking2Cat, dst_marking: Marking2Cat,
                 mode: str = "dagger"):
        if mode not in ("dagger", "natural"):
            raise ValueError("mode must be 'dagger' or 'natural'")
        self.f = f
        self.mode = mode
        self.src_marking = src_marking
        self.dst_marking = dst_marking
        self.nc: ScaledNerve = scaled_nerve(f.src, src_marking)
        self.nd: ScaledNerve = scaled_nerve(f.dst, dst_marking)
        self.fN = nerve_map(f, self.nc, self.nd)
        self.pairs: dict[tuple, PairSimplex] = {}       # total cell nd -> pair
        self.index: dict[tuple, Cell] = {}              # pair key -> total cell
        self.total: DecoratedSSet = self._build_total()
        self.base: DecoratedSSet = sharp_base(self.nd)
        self.proj: DecMap = self._projection()
        self.gamma: DecMap = self._unit()

    # -- construction --------------------------------------------------------

    def _tame_phis(self, n: int) -> list[DecMap]:
        P, ND = prism(n), self.nd

        def hook(cell: Cell, cand: Cell) -> bool:
            if cell.dim == 2 and cell.nd in P.thin:
                return ND.is_identity_triangle(cand)
            return True

        return enumerate_maps(P, ND, constraint=hook, respect_decorations=False)

    def _rhos_for(self, phi: DecMap, n: int) -> list[DecMap]:
        NC, fN = self.nc, self.fN
        inc1 = end_map(n, 1)

        def hook(cell: Cell, cand: Cell) -> bool:
            return fN.apply(cand) == phi.apply(inc1.assign[cell.nd])

        return enumerate_maps(delta(n), NC, constraint=hook, respect_decorations=False)

    def _build_total(self) -> DecoratedSSet:
        all_pairs: dict[int, list[PairSimplex]] = {}
        for n in range(TOP_DIM + 1):
            level = []
            for phi in self._tame_phis(n):
                for rho in self._rhos_for(phi, n):
                    level.append(PairSimplex(n, phi, rho))
            all_pairs[n] = sorted(level, key=lambda p: p.key())

        n_cells = []
        faces: dict = {}
        labels: dict = {}
        for n in range(TOP_DIM + 1):
            count = 0
            for pair in all_pairs[n]:
                if pair.is_degenerate():
                    continue
                nd = (n, count)
                self.pairs[nd] = pair
                self.index[pair.key()] = Cell(n, count)
                labels[nd] = ("pair", pair.key())
                count += 1
            n_cells.append(count)
        for nd, pair in self.pairs.items():
            if nd[0] == 0:
                continue
            faces[nd] = tuple(self.cell_of(pair.face(i)) for i in range(nd[0] + 1))

        marked = set()
        for nd in list(self.pairs):
            if nd[0] == 1 and self._edge_marked(self.pairs[nd], self.mode):
                marked.add(nd)
        thin, lean = set(), set()
        for nd in list(self.pairs):
            if nd[0] != 2:
                continue
            pair = self.pairs[nd]
            if self._triangle_lean(pair):
                lean.add(nd)
                if self._triangle_thin(pair):
                    thin.add(nd)

        X3 = DecoratedSSet("MB", n_cells, faces, marked, thin, lean, labels=labels,
                          coskeletal=TOP_DIM)
        X4 = add_coskeletal_top(X3, 4)
        return DecoratedSSet("MB", X4.n_cells, X4.faces, marked, thin, lean,
                             labels=X4.labels, coskeletal=TOP_DIM)

    def cell_of(self, pair: PairSimplex) -> Cell:
        """Total-space cell (possibly degenerate) realizing a pair."""
        key = pair.key()
        hit = self.index.get(key)
        if hit is not None:
            return hit
        for j in range(pair.n - 1, -1, -1):
            inner = pair.face(j)
            if inner.degeneracy(j).key() == key:
                base = self.cell_of(inner)
                return Cell(base.dim, base.idx, _insert(base.word, j))
        raise KeyError("pair does not belong to the total space")

    # -- decorations -----------------------------------------------------------

    def edge_data(self, pair: PairSimplex) -> tuple[str, str, str]:
        """(a, alpha, theta) of an edge pair: base 1-cell, fiber 1-cell, filler."""
        ND, NC = self.nd, self.nc
        a = ND.onecell_of(pair.phi.compose(end_map(1, 0)).assign[(1, 0)])
        alpha = NC.onecell_of(pair.rho.assign[(1, 0)])
        P1 = prism(1)
        lower = P1.ref_of_pair(_ivcell(P1, (0, 0, 1)), _dcell(P1, 1, (0, 1, 1)))
        theta = ND.filler_of(pair.phi.apply(lower))
        return a, alpha, theta

    def _edge_marked(self, pair: PairSimplex, mode: str) -> bool:
        a, alpha, theta = self.edge_data(pair)
        D, C = self.f.dst, self.f.src
        if not D.is_invertible2(theta):
            return False
        if mode == "natural":
            return C.is_equivalence(alpha)
        return alpha in self.src_marking.marked1

    def _triangle_lean(self, pair: PairSimplex) -> bool:
        rho_top = pair.rho.assign[(2, 0)]
        return self.nc.is_thin(rho_top)

    def _triangle_thin(self, pair: PairSimplex) -> bool:
        if not self._triangle_lean(pair):
            return False
        base_top = pair.phi.compose(end_map(2, 0)).assign[(2, 0)]
        return self.nd.is_thin(base_top)

    # -- structure maps ----------------------------------------------------------

    def _projection(self) -> DecMap:
        assign = {}
        for nd, pair in self.pairs.items():
            n = nd[0]
            assign[nd] = pair.phi.compose(end_map(n, 0)).assign[(n, 0)]
        for cell in self.total.nondeg(4):
            sphere = tuple(
                DecoratedSSet._apply_word(assign[f.nd], f.word)
                for f in self.total.faces[cell.nd]
            )
            hits = self.base.by_faces(4).get(sphere, [])
            if len(hits) != 1:
                raise ValueError("projection of a coskeletal cell is not unique")
            assign[cell.nd] = hits[0]
        return DecMap(self.total, self.base, assign)

    def _unit(self) -> DecMap:
        assign = {}
        for cell in self.nc.all_nondeg():
            if cell.dim <= TOP_DIM:
                pair = gamma_pair(self.fN, cell)
                assign[cell.nd] = self.cell_of(pair)
            else:
                sphere = tuple(
                    DecoratedSSet._apply_word(assign[f.nd], f.word)
                    for f in self.nc.faces[cell.nd]
                )
                hits = self.total.by_faces(cell.dim).get(sphere, [])
                if len(hits) != 1:
                    raise ValueError("unit image of a coskeletal cell is not unique")
                assign[cell.nd] = hits[0]
        return DecMap(self.nc, self.total, assign)

    # -- fibers -------------------------------------------------------------------

    def fiber(self, d: str) -> tuple[DecoratedSSet, DecMap]:
        """The marked-scaled fiber over an object of the target, with its inclusion."""
        if d not in self.f.dst.objects:
            raise KeyError(f"unknown object {d}")
        dvert = self.nd.vertex_of(d)
        keep = []
        for nd, pair in sorted(self.pairs.items()):
            img = self.proj.assign[nd]
            if img.nd == dvert.nd and len(img.word) == nd[0]:
                keep.append(nd)
        keep_set = set(keep)
        remap: dict = {}
        n_cells: list[int] = []
        faces: dict = {}
        labels: dict = {}
        for nd in keep:
            dim = nd[0]
            while len(n_cells) <= dim:
                n_cells.append(0)
            remap[nd] = Cell(dim, n_cells[dim])
            labels[remap[nd].nd] = ("pair", self.pairs[nd].key())
            n_cells[dim] += 1
        for nd in keep:
            if nd[0] == 0:
                continue
            fs = []
            for f in self.total.faces[nd]:
                assert f.nd in keep_set, "fiber is not closed under faces"
                mapped = remap[f.nd]
                fs.append(Cell(mapped.dim, mapped.idx, f.word))
            faces[remap[nd].nd] = tuple(fs)
        marked = {remap[nd].nd for nd in keep if nd in self.total.marked and nd[0] == 1}
        thin = {remap[nd].nd for nd in keep if nd in self.total.lean and nd[0] == 2}
        fib = DecoratedSSet("MS", n_cells, faces, marked, thin, thin, labels=labels,
                            coskeletal=TOP_DIM)
        incl = DecMap(fib, self.total, {remap[nd].nd: Cell(*nd) for nd in keep})
        return fib, incl

    # -- the filtration audit ------------------------------------------------------

    def filtration_audit(self) -> dict:
        """Classify every nondegenerate simplex (dims <= 3) of the total space.

        Every cell must be a unit image, an extension of a lower simplex, or a
        face of an extension; anything else is unreachable.
        """
        gamma_keys = {gamma_pair(self.fN, c).key() for c in self.nc.all_nondeg()
                      if c.dim <= TOP_DIM}
        extension_keys: set = set()
        extension_face_keys: set = set()
        for nd, tau in self.pairs.items():
            for j in range(nd[0] + 1):
                ext = tau.extend(j)
                extension_keys.add(ext.key())
                for s in range(ext.n + 1):
                    extension_face_keys.add(ext.face(s).key())
        report = {"unit": [], "extension": [], "face_of_extension": [], "unreachable": []}
        for nd in sorted(self.pairs):
            key = self.pairs[nd].key()
            if key in gamma_keys:
                report["unit"].append(nd)
            elif key in extension_keys:
                report["extension"].append(nd)
            elif key in extension_face_keys:
                report["face_of_extension"].append(nd)
            else:
                report["unreachable"].append(nd)
        report["total"] = sum(len(report[k]) for k in
                              ("unit", "extension", "face_of_extension", "unreachable"))
        report["reachable"] = report["total"] - len(report["unreachable"])
        return report


def _insert(word, j):
    from .simplicial import insert_degeneracy
    return insert_degeneracy(word, j)


def _ivcell(P, word):
    from .simplicial import vertex_cell
    return vertex_cell(P.factor_a, word)


def _dcell(P, n, word):
    from .simplicial import vertex_cell
    return vertex_cell(P.factor_b, word)


def sharp_base(ND: ScaledNerve) -> DecoratedSSet:
    """The base decorated as (S, sharp, T subset sharp)."""
    marked = {c.nd for c in ND.nondeg(1)}
    lean = {c.nd for c in ND.nondeg(2)}
    return DecoratedSSet("MB", ND.n_cells, ND.faces, marked, ND.thin, lean,
                         labels=ND.labels, coskeletal=ND.coskeletal)


def build_free_fibration(f: TwoFunctor, src_marking: Optional[Marking2Cat] = None,
                         dst_marking: Optional[Marking2Cat] = None,
                         mode: str = "dagger") -> FreeFibration:
    src_marking = src_marking or Marking2Cat(f.src)
    dst_marking = dst_marking or Marking2Cat(f.dst)
    if not f.preserves_marking(src_marking, dst_marking):
        raise ValueError("functor does not preserve the markings")
    return FreeFibration(f, src_marking, dst_marking, mode=mode)


# ---------------------------------------------------------------------------
# comparison of the tame total space with the nerve of the lax comma 2-category
# ---------------------------------------------------------------------------


@dataclass
class ComparisonReport:
    """Mutually inverse maps between the tame model and nerve(Fr), or diffs."""

    xi: Optional[DecMap]
    psi: Optional[DecMap]
    diffs: list

    @property
    def ok(self) -> bool:
        return not self.diffs


def fr_nerve(bundle: FrBundle, mode: str = "dagger") -> ScaledNerve:
    """Nerve of Fr with marked edges per mode and lean = coCartesian fillers."""
    marked = bundle.marked1 if mode == "dagger" else bundle.cartesian1
    return scaled_nerve(bundle.twocat, Marking2Cat(bundle.twocat, marked),
                        lean_flag=lambda t: t in bundle.cocartesian2)


def compare_tame_fr(ff: FreeFibration) -> ComparisonReport:
    """Build the isomorphism between the total space and nerve(Fr), verifying
    that it is decoration-preserving and mutually inverse in dims 0..4."""
    bundle = fr(ff.f, ff.src_marking, ff.dst_marking)
    N = fr_nerve(bundle, ff.mode)
    Fr = bundle.twocat
    diffs: list = []

    xi = _build_xi(ff, bundle, N, diffs)
    psi = _build_psi(ff, bundle, N, diffs)
    if diffs:
        return ComparisonReport(None, None, diffs)

    if not xi.commutes_with_faces():
        diffs.append(("xi", "faces"))
    if not psi.commutes_with_faces():
        diffs.append(("psi", "faces"))
    for cell in ff.total.all_nondeg():
        if psi.apply(xi.apply(cell)) != cell:
            diffs.append(("roundtrip-total", cell))
    for cell in N.all_nondeg():
        if xi.apply(psi.apply(cell)) != cell:
            diffs.append(("roundtrip-nerve", cell))
    for name, left, right in (("marked", ff.total.marked, N.marked),
                              ("thin", ff.total.thin, N.thin),
                              ("lean", ff.total.lean, N.lean)):
        image = {xi.assign[nd].nd for nd in left if not xi.assign[nd].is_degenerate()}
        if image != set(right):
            diffs.append(("decoration", name, sorted(image ^ set(right))))
    return ComparisonReport(xi, psi, diffs)


def _build_xi(ff: FreeFibration, bundle: FrBundle, N: ScaledNerve, diffs: list) -> DecMap:
    Fr = bundle.twocat
    NC, ND = ff.nc, ff.nd
    C, D = ff.f.src, ff.f.dst
    assign: dict = {}
    objects: dict = {}
    edges: dict = {}

    for nd in sorted(ff.pairs):
        n = nd[0]
        pair = ff.pairs[nd]
        if n == 0:
            d = ND.labels[ff.proj.assign[nd].nd][1]
            c = NC.labels[pair.rho.assign[(0, 0)].nd][1]
            u = ND.onecell_of(pair.phi.assign[(1, 0)])
            o = ("o", d, c, u)
            objects[nd] = o
            assign[nd] = N.vertex_of(o)
        elif n == 1:
            a, alpha, theta = ff.edge_data(pair)
            o0 = _object_of(ff, objects, pair.face(1))
            o1 = _object_of(ff, objects, pair.face(0))
            m = ("m", o0, o1, a, alpha, theta)
            if m not in Fr.onecells:
                diffs.append(("xi-edge-not-in-fr", nd, m))
                continue
            edges[nd] = m
            assign[nd] = N.edge_of(m)
        elif n == 2:
            psi2 = ND.filler_of(pair.phi.compose(end_map(2, 0)).assign[(2, 0)])
            zeta = NC.filler_of(pair.rho.assign[(2, 0)])
            fm = _edge_of(ff, Fr, objects, edges, pair.face(2))
            gm = _edge_of(ff, Fr, objects, edges, pair.face(0))
            hm = _edge_of(ff, Fr, objects, edges, pair.face(1))
            sigma = ("t", hm, Fr.hcomp1[(gm, fm)], psi2, zeta)
            if sigma not in Fr.twocells:
                diffs.append(("xi-filler-not-in-fr", nd, sigma))
                continue
            assign[nd] = N.triangle_cell(fm, gm, hm, sigma)
        else:
            sphere = tuple(
                DecoratedSSet._apply_word(assign[f.nd], f.word)
                for f in ff.total.faces[nd]
            )
            hits = N.by_faces(n).get(sphere, [])
            if len(hits) != 1:
                diffs.append(("xi-no-unique-filler", nd))
                continue
            assign[nd] = hits[0]
    for cell in ff.total.nondeg(4):
        sphere = tuple(
            DecoratedSSet._apply_word(assign[f.nd], f.word)
            for f in ff.total.faces[cell.nd]
        )
        hits = N.by_faces(4).get(sphere, [])
        if len(hits) != 1:
            diffs.append(("xi-no-unique-filler", cell.nd))
            continue
        assign[cell.nd] = hits[0]
    return DecMap(ff.total, N, assign)


def _object_of(ff: FreeFibration, objects: dict, pair: PairSimplex):
    return objects[ff.cell_of(pair).nd]


def _edge_of(ff: FreeFibration, Fr: StrictTwoCat, objects: dict, edges: dict,
             pair: PairSimplex):
    cell = ff.cell_of(pair)
    if cell.is_degenerate():
        # degenerate edge: the identity 1-cell on its vertex
        return Fr.id1[objects[cell.nd]]
    return edges[cell.nd]


def _build_psi(ff: FreeFibration, bundle: FrBundle, N: ScaledNerve, diffs: list) -> DecMap:
    Fr = bundle.twocat
    NC, ND = ff.nc, ff.nd
    C, D = ff.f.src, ff.f.dst
    f = ff.f
    from .gray import simplex_vertex_word
    assign: dict = {}

    def object_pair(o) -> PairSimplex:
        _, d, c, u = o
        P0 = prism(0)
        phi = DecMap(P0, ND, {
            (0, 0): ND.vertex_of(d),
            (0, 1): ND.vertex_of(f.omap[c]),
            (1, 0): ND.edge_of(u),
        })
        rho = DecMap(delta(0), NC, {(0, 0): NC.vertex_of(c)})
        return PairSimplex(0, phi, rho)

    def edge_pair(m) -> PairSimplex:
        _, o0, o1, a, alpha, theta = m
        _, d0, c0, u0 = o0
        _, d1, c1, u1 = o1
        g = D.hcomp1[(f.map1[alpha], u0)]
        P1 = prism(1)
        I, D1 = P1.factor_a, P1.factor_b
        phi_assign = {}
        for nd2, (x, y) in P1.pair_of.items():
            iw = simplex_vertex_word(I, x)
            dw = simplex_vertex_word(D1, y)
            if nd2[0] == 0:
                dd = (d0, d1)[dw[0]] if iw[0] == 0 else (f.omap[c0], f.omap[c1])[dw[0]]
                phi_assign[nd2] = ND.vertex_of(dd)
            elif nd2[0] == 1:
                if iw == (0, 0):
                    phi_assign[nd2] = ND.edge_of(a)
                elif iw == (1, 1):
                    phi_assign[nd2] = ND.edge_of(f.map1[alpha])
                elif dw == (0, 0):
                    phi_assign[nd2] = ND.edge_of(u0)
                elif dw == (1, 1):
                    phi_assign[nd2] = ND.edge_of(u1)
                else:
                    phi_assign[nd2] = ND.edge_of(g)
            else:
                if iw == (0, 1, 1):
                    phi_assign[nd2] = ND.triangle_cell(u0, f.map1[alpha], g, D.id2[g])
                else:
                    phi_assign[nd2] = ND.triangle_cell(a, u1, g, theta)
        rho = classifying_map(NC, NC.edge_of(alpha))
        return PairSimplex(1, DecMap(P1, ND, phi_assign), rho)

    def triangle_pair(quad) -> Optional[PairSimplex]:
        fm, gm, hm, sigma = quad
        os = (fm[1], fm[2], hm[2])
        ds = tuple(o[1] for o in os)
        cs = tuple(o[2] for o in os)
        us = tuple(o[3] for o in os)
        aa = {(0, 1): fm[3], (1, 2): gm[3], (0, 2): hm[3]}
        al = {(0, 1): fm[4], (1, 2): gm[4], (0, 2): hm[4]}
        th = {(0, 1): fm[5], (1, 2): gm[5], (0, 2): hm[5]}
        psi2, zeta = sigma[3], sigma[4]
        for r in range(3):
            aa[(r, r)] = D.id1[ds[r]]
            al[(r, r)] = C.id1[cs[r]]
        gg = {}
        for r in range(3):
            for s in range(r, 3):
                gg[(r, s)] = D.hcomp1[(f.map1[al[(r, s)]], us[r])]
        P2 = prism(2)
        I, D2 = P2.factor_a, P2.factor_b
        phi_assign: dict = {}
        diag_filler = D.hcomp2[(f.map2[zeta], D.id2[us[0]])]
        for nd2, (x, y) in sorted(P2.pair_of.items()):
            iw = simplex_vertex_word(I, x)
            dw = simplex_vertex_word(D2, y)
            dim = nd2[0]
            if dim == 0:
                dd = ds[dw[0]] if iw[0] == 0 else f.omap[cs[dw[0]]]
                phi_assign[nd2] = ND.vertex_of(dd)
            elif dim == 1:
                r, s = dw
                if iw == (0, 0):
                    phi_assign[nd2] = ND.edge_of(aa[(r, s)])
                elif iw == (1, 1):
                    phi_assign[nd2] = ND.edge_of(f.map1[al[(r, s)]])
                else:
                    phi_assign[nd2] = ND.edge_of(gg[(r, s)])
            elif dim == 2:
                if iw == (0, 0, 0):
                    phi_assign[nd2] = ND.triangle_cell(aa[(0, 1)], aa[(1, 2)], aa[(0, 2)], psi2)
                elif iw == (1, 1, 1):
                    phi_assign[nd2] = ND.triangle_cell(
                        f.map1[al[(0, 1)]], f.map1[al[(1, 2)]], f.map1[al[(0, 2)]],
                        f.map2[zeta])
                elif iw == (0, 1, 1):
                    if dw[0] == dw[1]:
                        r, s = dw[0], dw[2]
                        phi_assign[nd2] = ND.triangle_cell(
                            us[r], f.map1[al[(r, s)]], gg[(r, s)], D.id2[gg[(r, s)]])
                    else:
                        phi_assign[nd2] = ND.triangle_cell(
                            gg[(0, 1)], f.map1[al[(1, 2)]], gg[(0, 2)], diag_filler)
                else:  # iw == (0, 0, 1)
                    if dw[1] == dw[2]:
                        r, s = dw[0], dw[1]
                        phi_assign[nd2] = ND.triangle_cell(
                            aa[(r, s)], us[s], gg[(r, s)], th[(r, s)])
                    else:
                        mixed = D.vcomp[(
                            D.hcomp2[(D.id2[f.map1[al[(1, 2)]]], th[(0, 1)])],
                            diag_filler,
                        )]
                        phi_assign[nd2] = ND.triangle_cell(
                            aa[(0, 1)], gg[(1, 2)], gg[(0, 2)], mixed)
            else:
                sphere = tuple(
                    DecoratedSSet._apply_word(phi_assign[ff2.nd], ff2.word)
                    for ff2 in P2.faces[nd2]
                )
                hits = ND.by_faces(dim).get(sphere, [])
                if len(hits) != 1:
                    return None
                phi_assign[nd2] = hits[0]
        rho = classifying_map(NC, NC.triangle_cell(al[(0, 1)], al[(1, 2)], al[(0, 2)], zeta))
        return PairSimplex(2, DecMap(P2, ND, phi_assign), rho)

    for cell in N.all_nondeg():
        kindlab = N.labels[cell.nd][0]
        if kindlab == "obj":
            pair = object_pair(N.labels[cell.nd][1])
            assign[cell.nd] = ff.index.get(pair.key())
        elif kindlab == "1cell":
            pair = edge_pair(N.labels[cell.nd][1])
            assign[cell.nd] = ff.index.get(pair.key())
        elif kindlab == "tri":
            pair = triangle_pair(N.cell_data[cell.nd])
            assign[cell.nd] = ff.index.get(pair.key()) if pair else None
        else:
            if any(assign.get(f2.nd) is None for f2 in N.faces[cell.nd]):
                assign[cell.nd] = None
            else:
                sphere = tuple(
                    DecoratedSSet._apply_word(assign[f2.nd], f2.word)
                    for f2 in N.faces[cell.nd]
                )
                hits = ff.total.by_faces(cell.dim).get(sphere, [])
                assign[cell.nd] = hits[0] if len(hits) == 1 else None
        if assign[cell.nd] is None:
            diffs.append(("psi-missing", cell.nd, N.labels[cell.nd]))
    return DecMap(N, ff.total, assign)


# ---------------------------------------------------------------------------
# the extension lemmas as checkable identities
# ---------------------------------------------------------------------------


def expected_extension_face(ff: FreeFibration, sigma: PairSimplex, j: int, s: int):
    """The right-hand side of the face-of-extension identity for d_s E_j."""
    n = sigma.n
    if j == n and s == n + 1:
        return sigma
    if j + 1 < s <= n + 1:
        return sigma.face(s - 1).extend(j)
    if 0 <= s < j:
        return sigma.face(s).extend(j - 1)
    if s == j + 1:
        return sigma.extend(j + 1).face(j + 1)
    if s == j and s != 0:
        return sigma.extend(j - 1).face(j)
    # s == j == 0: the face collapses onto the unit image of the fibre part
    # (computing the vertex maps gives gamma of ell itself, of dimension n)
    return gamma_pair(ff.fN, sigma.rho.assign[(n, 0)])


def face_identity_violations(ff: FreeFibration, include_degenerate: bool = True) -> list:
    """Check all six face identities for every stored simplex and every j."""
    bad = []
    for sigma, label in _stored_pairs(ff, include_degenerate):
        n = sigma.n
        for j in range(n + 1):
            ext = sigma.extend(j)
            for s in range(n + 2):
                want = expected_extension_face(ff, sigma, j, s)
                # the s = j + 1 = n + 1 corner is covered by the first clause
                got = ext.face(s)
                if got.key() != want.key():
                    bad.append((label, j, s))
    return bad


def degeneracy_lemma_violations(ff: FreeFibration) -> list:
    """Extensions of degenerate simplices, and double extensions, degenerate."""
    bad = []
    for sigma, label in _stored_pairs(ff, include_degenerate=True):
        n = sigma.n
        if sigma.is_degenerate():
            for j in range(n + 1):
                if not sigma.extend(j).is_degenerate():
                    bad.append(("extension-of-degenerate", label, j))
        if n <= 2:
            for j in range(n + 1):
                ext = sigma.extend(j)
                for i in range(n + 2):
                    if not ext.extend(i).is_degenerate():
                        bad.append(("extension-of-extension", label, j, i))
    return bad


def _stored_pairs(ff: FreeFibration, include_degenerate: bool):
    out = []
    for nd in sorted(ff.pairs):
        out.append((ff.pairs[nd], nd))
    if include_degenerate:
        for nd in sorted(ff.pairs):
            n = nd[0]
            if n + 1 > TOP_DIM:
                continue
            for j in range(n + 1):
                out.append((ff.pairs[nd].degeneracy(j), (nd, "s", j)))
    return out


def three_coskeletal_violations(ff: FreeFibration) -> list:
    """Every boundary 4-sphere of the total space has exactly one filler."""
    from .simplicial import coskeletal_spheres
    X = ff.total
    degenerate = set()
    for z in X.all_cells(3):
        for j in range(4):
            s = X.deg(z, j)
            degenerate.add(tuple(X.face(s, i) for i in range(5)))
    spheres = [s for s in coskeletal_spheres(X, 4) if s not in degenerate]
    bad = []
    fillers = {tuple(X.faces[(4, k)]): k for k in range(X.num(4))}
    for sphere in spheres:
        if sphere not in fillers:
            bad.append(("unfilled", sphere))
    if len(spheres) != X.num(4):
        bad.append(("count", len(spheres), X.num(4)))
    return bad
