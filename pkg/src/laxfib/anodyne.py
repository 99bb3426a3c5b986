"""Generating anodyne inclusions, lifting problems and fibration certification.

The two generator catalogs (for the two-scaling and single-scaling theories)
are instantiated up to a size bound; certification of the right lifting
property is exhaustive relative to that bound and to a finite library of Kan
complexes for the marking-saturation generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .fincat import walking_iso
from .simplicial import (
    Cell,
    DecMap,
    DecoratedSSet,
    delta_map,
    enumerate_maps,
    horn,
    pushout,
    standard_simplex,
)

N_MAX_DEFAULT = 4


@dataclass
class GeneratorInstance:
    family: str                 # "MB" or "MS"
    tag: str                    # A1..A5, S1..S5, E, MS1..MS8, MSE, UI
    params: tuple
    incl: DecMap
    derived: bool = False
    note: str = ""

    @property
    def dom(self) -> DecoratedSSet:
        return self.incl.src

    @property
    def cod(self) -> DecoratedSSet:
        return self.incl.dst

    def describe(self) -> str:
        ps = ",".join(str(p) for p in self.params)
        return f"{self.family}:{self.tag}({ps})" + (" [derived]" if self.derived else "")


def _triangles(n: int) -> list[tuple[int, int, int]]:
    import itertools
    return list(itertools.combinations(range(n + 1), 3))


def _sharp_tris(n):
    return _triangles(n)


def _inclusion(dom: DecoratedSSet, cod: DecoratedSSet) -> DecMap:
    """Vertex-identity inclusion between two subset-labelled objects."""
    assign = {}
    for cell in dom.all_nondeg():
        assign[cell.nd] = cod.cell_by_label(cell.dim, dom.labels[cell.nd])
    return DecMap(dom, cod, assign)


def _collapse01(n: int, *, kind: str, marked, thin, lean,
                horn_index: Optional[int] = None):
    """The object Delta^n (or a horn) with the edge {0,1} crushed to a point.

    Decorations are given as vertex tuples in Delta^n and transported along
    the quotient.  Returns (object, original -> quotient map).
    """
    base = standard_simplex(n, kind="PLAIN") if horn_index is None \
        else horn(n, horn_index, kind="PLAIN")
    edge = standard_simplex(1, kind="PLAIN")
    pt = standard_simplex(0, kind="PLAIN")
    e01 = delta_map(edge, base, {0: 0, 1: 1})
    collapse = DecMap(edge, pt, {(0, 0): Cell(0, 0), (0, 1): Cell(0, 0),
                                 (1, 0): Cell(0, 0, (0,))})
    P, leg_b, _ = pushout(e01, collapse)

    def transported(group, dim):
        out = set()
        for verts in group:
            if not _has_cell(base, dim, tuple(verts)):
                continue
            img = leg_b.apply(base.cell_by_label(dim, tuple(verts)))
            if not img.is_degenerate():
                out.add(img.nd)
        return out

    deco = DecoratedSSet(
        kind, P.n_cells, P.faces,
        marked=transported(marked, 1),
        thin=transported(thin, 2),
        lean=transported(lean, 2) if kind == "MB" else transported(thin, 2),
        labels=P.labels,
    )
    leg = DecMap(base, deco, leg_b.assign)
    return deco, leg


def _has_cell(X: DecoratedSSet, dim, label) -> bool:
    try:
        X.cell_by_label(dim, label)
        return True
    except KeyError:
        return False


def _quotient_inclusion(n: int, horn_index: int, *, kind: str, marked, thin, lean,
                        cod_thin=None, cod_lean=None, cod_marked=None) -> DecMap:
    dom, leg_dom = _collapse01(n, kind=kind, marked=marked, thin=thin, lean=lean,
                               horn_index=horn_index)
    cod, leg_cod = _collapse01(n, kind=kind,
                               marked=cod_marked if cod_marked is not None else marked,
                               thin=cod_thin if cod_thin is not None else thin,
                               lean=cod_lean if cod_lean is not None else lean)
    hmap = _inclusion(horn(n, horn_index, kind="PLAIN"), standard_simplex(n, kind="PLAIN"))
    # transport the horn inclusion through the two quotients
    assign = {}
    base_horn = leg_dom.src
    for b in base_horn.all_nondeg():
        img = leg_dom.apply(b)
        if not img.is_degenerate():
            assign[img.nd] = leg_cod.apply(hmap.apply(b))
    return DecMap(dom, cod, assign)


def mb_generators(n_max: int = N_MAX_DEFAULT,
                  kan_library: Optional[list] = None) -> list[GeneratorInstance]:
    """The generating inclusions of the two-scaling theory, sizes <= n_max."""
    gens: list[GeneratorInstance] = []
    for n in range(2, n_max + 1):
        for i in range(1, n):
            tri = [(i - 1, i, i + 1)]
            d = horn(n, i, kind="MB", thin=tri, lean=tri)
            c = standard_simplex(n, kind="MB", thin=tri, lean=tri)
            gens.append(GeneratorInstance("MB", "A1", (n, i), _inclusion(d, c)))
    T = [(0, 2, 4), (1, 2, 3), (0, 1, 3), (1, 3, 4), (0, 1, 2)]
    T2 = T + [(0, 3, 4), (0, 1, 4)]
    if n_max >= 4:
        d = standard_simplex(4, kind="MB", thin=T, lean=T)
        c = standard_simplex(4, kind="MB", thin=T2, lean=T2)
        gens.append(GeneratorInstance("MB", "A2", (), _inclusion(d, c)))
    for n in range(2, n_max + 1):
        gens.append(GeneratorInstance(
            "MB", "A3", (n,),
            _quotient_inclusion(n, 0, kind="MB", marked=[], thin=[], lean=[(0, 1, n)])))
    for n in range(2, n_max + 1):
        deco = dict(marked=[(n - 1, n)], thin=[], lean=[(0, n - 1, n)])
        d = horn(n, n, kind="MB", **deco)
        c = standard_simplex(n, kind="MB", **deco)
        gens.append(GeneratorInstance("MB", "A4", (n,), _inclusion(d, c)))
    d = standard_simplex(0, kind="MB", marked="sharp", thin="sharp", lean="sharp")
    c = standard_simplex(1, kind="MB", marked="sharp", thin="sharp", lean="sharp")
    gens.append(GeneratorInstance("MB", "A5", (), delta_map(d, c, {0: 1})))
    # scaling generators
    d = standard_simplex(2, kind="MB", marked=[(0, 1), (1, 2)], thin="sharp", lean="sharp")
    c = standard_simplex(2, kind="MB", marked="sharp", thin="sharp", lean="sharp")
    gens.append(GeneratorInstance("MB", "S1", (), _inclusion(d, c)))
    d = standard_simplex(2, kind="MB", thin="flat", lean="sharp")
    c = standard_simplex(2, kind="MB", thin="sharp", lean="sharp")
    gens.append(GeneratorInstance("MB", "S2", (), _inclusion(d, c)))
    for i in (1, 2):
        tri = [(i - 1, i, i + 1)]
        ui = [t for t in _triangles(3) if t != _face_triangle(3, i)]
        d = standard_simplex(3, kind="MB", thin=tri, lean=ui)
        c = standard_simplex(3, kind="MB", thin=tri, lean="sharp")
        gens.append(GeneratorInstance("MB", "S3", (i,), _inclusion(d, c)))
    u0 = [t for t in _triangles(3) if t != _face_triangle(3, 0)]
    gens.append(GeneratorInstance(
        "MB", "S4", (),
        _full_quotient_inclusion(3, kind="MB", marked=[], thin=[], lean=u0,
                                 cod_lean=_sharp_tris(3))))
    u3 = [t for t in _triangles(3) if t != _face_triangle(3, 3)]
    d = standard_simplex(3, kind="MB", marked=[(2, 3)], thin=[], lean=u3)
    c = standard_simplex(3, kind="MB", marked=[(2, 3)], thin=[], lean="sharp")
    gens.append(GeneratorInstance("MB", "S5", (), _inclusion(d, c)))
    gens.extend(_kan_generators("MB", "E", kan_library))
    return gens


def _face_triangle(n: int, i: int) -> tuple:
    return tuple(v for v in range(n + 1) if v != i)


def _full_quotient_inclusion(n: int, *, kind, marked, thin, lean=None,
                             cod_thin=None, cod_lean=None) -> DecMap:
    """Decoration-increasing map on Delta^n with the {0,1}-edge crushed."""
    dom, leg_d = _collapse01(n, kind=kind, marked=marked, thin=thin, lean=lean)
    cod, leg_c = _collapse01(n, kind=kind, marked=marked,
                             thin=cod_thin if cod_thin is not None else thin,
                             lean=cod_lean if cod_lean is not None else lean)
    assign = {}
    for b in leg_d.src.all_nondeg():
        img = leg_d.apply(b)
        if not img.is_degenerate():
            assign[img.nd] = leg_c.apply(b)
    return DecMap(dom, cod, assign)


def _kan_generators(family: str, tag: str, kan_library=None) -> list[GeneratorInstance]:
    gens = []
    for name, K in kan_library if kan_library is not None else default_kan_library():
        flat = K
        sharp = K.with_decorations(marked={c.nd for c in K.nondeg(1)})
        assign = {c.nd: c for c in K.all_nondeg()}
        gens.append(GeneratorInstance(
            family, tag, (name,), DecMap(flat, sharp, assign),
            note="finite Kan library; quantification over all Kan complexes is truncated"))
    return gens


def default_kan_library() -> list[tuple[str, DecoratedSSet]]:
    """Finite stand-ins for 'every Kan complex': a point and the walking
    isomorphism, truncated at the cap."""
    pt = standard_simplex(0, kind="MB", thin="sharp", lean="sharp")
    J = walking_iso().nerve(max_dim=N_MAX_DEFAULT, kind="PLAIN")
    J = DecoratedSSet("MB", J.n_cells, J.faces, marked=(),
                      thin=[c.nd for c in J.nondeg(2)],
                      lean=[c.nd for c in J.nondeg(2)], labels=J.labels,
                      truncated_at=J.truncated_at)
    return [("point", pt), ("walking-iso", J)]


def ms_generators(n_max: int = N_MAX_DEFAULT,
                  kan_library: Optional[list] = None) -> list[GeneratorInstance]:
    """The generating inclusions of the single-scaling theory, sizes <= n_max,
    plus the derived scaling lemmas on Delta^3."""
    gens: list[GeneratorInstance] = []
    for n in range(2, n_max + 1):
        for i in range(1, n):
            tri = [(i - 1, i, i + 1)]
            d = horn(n, i, kind="MS", thin=tri)
            c = standard_simplex(n, kind="MS", thin=tri)
            gens.append(GeneratorInstance("MS", "MS1", (n, i), _inclusion(d, c)))
    T = [(0, 2, 4), (1, 2, 3), (0, 1, 3), (1, 3, 4), (0, 1, 2)]
    T2 = T + [(0, 3, 4), (0, 1, 4)]
    if n_max >= 4:
        d = standard_simplex(4, kind="MS", thin=T)
        c = standard_simplex(4, kind="MS", thin=T2)
        gens.append(GeneratorInstance("MS", "MS2", (), _inclusion(d, c)))
    for n in range(2, n_max + 1):
        gens.append(GeneratorInstance(
            "MS", "MS3", (n,),
            _quotient_inclusion(n, 0, kind="MS", marked=[], thin=[(0, 1, n)], lean=None)))
    for n in range(2, n_max + 1):
        deco = dict(marked=[(n - 1, n)], thin=[(0, n - 1, n)])
        d = horn(n, n, kind="MS", **deco)
        c = standard_simplex(n, kind="MS", **deco)
        gens.append(GeneratorInstance("MS", "MS4", (n,), _inclusion(d, c)))
    d = standard_simplex(0, kind="MS", marked="sharp", thin="sharp")
    c = standard_simplex(1, kind="MS", marked="sharp", thin="sharp")
    gens.append(GeneratorInstance("MS", "MS5", (), delta_map(d, c, {0: 1})))
    d = standard_simplex(2, kind="MS", marked=[(0, 1), (1, 2)], thin="sharp")
    c = standard_simplex(2, kind="MS", marked="sharp", thin="sharp")
    gens.append(GeneratorInstance("MS", "MS6", (), _inclusion(d, c)))
    u0 = [t for t in _triangles(3) if t != _face_triangle(3, 0)]
    gens.append(GeneratorInstance(
        "MS", "MS7", (),
        _full_quotient_inclusion(3, kind="MS", marked=[], thin=u0,
                                 cod_thin=_sharp_tris(3))))
    u3 = [t for t in _triangles(3) if t != _face_triangle(3, 3)]
    d = standard_simplex(3, kind="MS", marked=[(2, 3)], thin=u3)
    c = standard_simplex(3, kind="MS", marked=[(2, 3)], thin="sharp")
    gens.append(GeneratorInstance("MS", "MS8", (), _inclusion(d, c)))
    gens.extend(_kan_generators("MS", "MSE", kan_library))
    # derived: the inner scaling lemmas on Delta^3
    for i in (1, 2):
        ui = [t for t in _triangles(3) if t != _face_triangle(3, i)]
        d = standard_simplex(3, kind="MS", thin=ui)
        c = standard_simplex(3, kind="MS", thin="sharp")
        gens.append(GeneratorInstance("MS", "UI", (i,), _inclusion(d, c), derived=True,
                                      note="derived scaling lemma"))
    return gens


def generators(family: str, n_max: int = N_MAX_DEFAULT,
               kan_library: Optional[list] = None) -> list[GeneratorInstance]:
    if n_max > N_MAX_DEFAULT:
        raise ValueError(f"n_max={n_max} exceeds the dimension cap {N_MAX_DEFAULT}")
    if family == "MB":
        return mb_generators(n_max, kan_library)
    if family == "MS":
        return ms_generators(n_max, kan_library)
    raise ValueError("family must be 'MB' or 'MS'")


# ---------------------------------------------------------------------------
# lifting problems
# ---------------------------------------------------------------------------


@dataclass
class LiftingProblem:
    gen: GeneratorInstance
    top: DecMap
    bottom: DecMap
    p: DecMap

    def commutes(self) -> bool:
        for b in self.gen.dom.all_nondeg():
            if self.p.apply(self.top.apply(b)) != self.bottom.apply(self.gen.incl.apply(b)):
                return False
        return True


def solve(lp: LiftingProblem) -> Optional[DecMap]:
    """A decoration-preserving diagonal filler, or None (exhaustive search)."""
    if not lp.commutes():
        raise ValueError("lifting square does not commute")
    partial = {}
    for b in lp.gen.dom.all_nondeg():
        img = lp.gen.incl.apply(b)
        if not img.is_degenerate():
            partial[img.nd] = lp.top.apply(b)

    def over_base(cell: Cell, cand: Cell) -> bool:
        return lp.p.apply(cand) == lp.bottom.assign[cell.nd]

    lifts = enumerate_maps(lp.gen.cod, lp.top.dst, partial=partial,
                           constraint=over_base, first_only=True)
    return lifts[0] if lifts else None


@dataclass
class Certificate:
    family: str
    n_max: int
    counts: list            # (tag, params, squares_checked)
    library: list
    ok: bool = True

    def to_json_dict(self) -> dict:
        return {
            "result": "certificate",
            "family": self.family,
            "n_max": self.n_max,
            "counts": [[t, list(p), c] for t, p, c in self.counts],
            "kan_library": list(self.library),
        }


@dataclass
class Counterexample:
    gen: GeneratorInstance
    top: DecMap
    bottom: DecMap
    ok: bool = False

    def to_json_dict(self) -> dict:
        return {
            "result": "counterexample",
            "generator": self.gen.describe(),
            "top": [[list(k), v.encode()] for k, v in sorted(self.top.assign.items())],
            "bottom": [[list(k), v.encode()] for k, v in sorted(self.bottom.assign.items())],
        }


def certify_fibration(p: DecMap, family: str = "MB", n_max: int = N_MAX_DEFAULT,
                      kan_library: Optional[list] = None,
                      tags: Optional[Iterable[str]] = None):
    """Enumerate every lifting problem against the catalog and solve each.

    Returns a Certificate with per-generator counts, or the first failing
    square as a Counterexample (catalog order, deterministic).
    """
    gens = generators(family, n_max, kan_library)
    if tags is not None:
        tags = set(tags)
        gens = [g for g in gens if g.tag in tags]
    X, S = p.src, p.dst
    counts = []
    for gen in gens:
        squares = 0
        tops = enumerate_maps(gen.dom, X)
        for top in tops:
            pinned = {}
            for b in gen.dom.all_nondeg():
                img = gen.incl.apply(b)
                if not img.is_degenerate():
                    pinned[img.nd] = p.apply(top.apply(b))
            bottoms = enumerate_maps(gen.cod, S, partial=pinned)
            for bottom in bottoms:
                lp = LiftingProblem(gen, top, bottom, p)
                if not lp.commutes():
                    continue
                squares += 1
                if solve(lp) is None:
                    return Counterexample(gen, top, bottom)
        counts.append((gen.tag, gen.params, squares))
    library = [name for name, _ in (kan_library or default_kan_library())]
    return Certificate(family, n_max, counts, library)


# ---------------------------------------------------------------------------
# saturation: composites of pushouts of generators
# ---------------------------------------------------------------------------


@dataclass
class AnodyneStep:
    gen: GeneratorInstance
    attach: object              # DecMap gen.dom -> current, or callable(current)


def anodyne_compose(X: DecoratedSSet, steps: list[AnodyneStep]):
    """Compose pushouts of catalog generators starting from X.

    Each step attaches a generator domain to the current object, either by an
    explicit map or by a callable receiving the current object (intermediate
    objects only exist once the earlier pushouts ran).  Returns the composite
    inclusion X -> X_n and a replayable certificate.
    """
    current = X
    legs: list[DecMap] = []
    cert = []
    for step in steps:
        attach = step.attach(current) if callable(step.attach) else step.attach
        if attach.src is not step.gen.dom:
            raise ValueError("attaching map must start at the generator domain")
        if attach.dst is not current:
            raise ValueError("attaching map must land in the current object")
        P, leg_b, leg_c = pushout(step.gen.incl, attach)
        cert.append({
            "generator": step.gen.describe(),
            "attach": [[list(k), v.encode()] for k, v in sorted(attach.assign.items())],
        })
        legs.append(leg_c)
        current = P
    comp = DecMap.identity(X)
    for leg in legs:
        comp = leg.compose(comp)
    return comp, cert
