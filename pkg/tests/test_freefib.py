"""Free fibration totals: extensions, unit, fibers, comparison and audit."""

from __future__ import annotations

import pytest

from laxfib.anodyne import certify_fibration
from laxfib.fincat import terminal_cat, walking_arrow, CatFunctor
from laxfib.fixtures import fixture_functors, include_at
from laxfib.freefib import (
    build_free_fibration,
    compare_tame_fr,
    degeneracy_lemma_violations,
    face_identity_violations,
    gamma_pair,
    three_coskeletal_violations,
)
from laxfib.twocat import identity_two_functor, terminal_twocat, two_bracket_functor


@pytest.fixture(scope="module")
def small_ff():
    F = two_bracket_functor(CatFunctor(terminal_cat(), terminal_cat(),
                                       {"*": "*"}, {"id*": "id*"}))
    return build_free_fibration(F)


@pytest.fixture(scope="module")
def arrow_ff():
    S = walking_arrow()
    return build_free_fibration(two_bracket_functor(include_at(S, "0")))


def test_terminal_total_is_point():
    ff = build_free_fibration(identity_two_functor(terminal_twocat()))
    assert ff.total.n_cells == [1]
    assert ff.filtration_audit()["unreachable"] == []


def test_object_count_is_arrows_into_images(small_ff):
    # objects of the total space are pairs (d, c, u: d -> f(c))
    D = small_ff.f.dst
    expected = 0
    for d in D.objects:
        for c in small_ff.f.src.objects:
            expected += len(D.hom1(d, small_ff.f.omap[c]))
    assert small_ff.total.num(0) == expected == 3


def test_fiber_of_point_functor(small_ff):
    fib, incl = small_ff.fiber("0")
    assert fib.num(0) == 2  # the identity at 0 and the arrow 0 -> 1
    incl.validate
    assert incl.commutes_with_faces()
    fib1, _ = small_ff.fiber("1")
    assert fib1.num(0) == 1


def test_fiber_unknown_object(small_ff):
    with pytest.raises(KeyError):
        small_ff.fiber("zzz")


def test_unit_is_mono_and_over_base(small_ff):
    g = small_ff.gamma
    assert g.is_mono()
    assert g.commutes_with_faces()
    # gamma commutes with the projections: proj o gamma = nerve(f)
    for cell in small_ff.nc.all_nondeg():
        assert small_ff.proj.apply(g.apply(cell)) == small_ff.fN.apply(cell)


def test_unit_sends_objects_to_identities(small_ff):
    # an object c goes to the identity morphism on f(c)
    nc, nd = small_ff.nc, small_ff.nd
    for c in small_ff.f.src.objects:
        cell = g_obj = small_ff.gamma.apply(nc.vertex_of(c))
        pair = small_ff.pairs[g_obj.nd]
        u = nd.onecell_of(pair.phi.assign[(1, 0)])
        assert u == small_ff.f.dst.id1[small_ff.f.omap[c]]


def test_projection_is_decorated(small_ff):
    small_ff.proj.validate()


def test_face_identities_small(small_ff):
    assert face_identity_violations(small_ff) == []


def test_degeneracy_lemmas_small(small_ff):
    assert degeneracy_lemma_violations(small_ff) == []


def test_face_identities_arrow(arrow_ff):
    assert face_identity_violations(arrow_ff, include_degenerate=False) == []


def test_cartesian_edge_to_unit_image(small_ff):
    # E_0 of an object is an edge from the object to a unit image
    for nd, pair in small_ff.pairs.items():
        if nd[0] != 0:
            continue
        e = pair.extend(0)
        assert e.face(1).key() == pair.key()
        target = e.face(0)
        rho_cell = pair.rho.assign[(0, 0)]
        assert target.key() == gamma_pair(small_ff.fN, rho_cell).key()


def test_three_coskeletal(small_ff):
    assert three_coskeletal_violations(small_ff) == []


def test_compare_tame_fr(small_ff):
    rep = compare_tame_fr(small_ff)
    assert rep.ok
    rep.xi.validate()
    rep.psi.validate()


def test_compare_commutes_with_projection(small_ff):
    rep = compare_tame_fr(small_ff)
    # the comparison lives over the base: projections agree up to the nerve
    # identification of Fr objects with their base objects
    from laxfib.twocat import fr, scaled_nerve
    bundle = fr(small_ff.f, small_ff.src_marking, small_ff.dst_marking)
    for cell in small_ff.total.nondeg(0):
        o = bundle.twocat
        fr_vertex = rep.xi.apply(cell)
        d_of_fr = rep.xi.dst.labels[fr_vertex.nd][1][1]
        d_of_total = small_ff.nd.labels[small_ff.proj.assign[cell.nd].nd][1]
        assert d_of_fr == d_of_total


def test_filtration_audit_small(small_ff):
    report = small_ff.filtration_audit()
    assert report["unreachable"] == []
    assert report["reachable"] == report["total"]


def test_filtration_audit_arrow(arrow_ff):
    report = arrow_ff.filtration_audit()
    assert report["unreachable"] == []


def test_natural_mode_marks_cartesian_edges(small_ff):
    F = small_ff.f
    nat = build_free_fibration(F, mode="natural")
    # with the minimal marking natural and dagger modes agree
    assert nat.total.marked == small_ff.total.marked


def test_certify_small_fixture(small_ff):
    res = certify_fibration(small_ff.proj, "MB", n_max=3)
    assert res.ok


def test_fixture_battery_is_buildable():
    names = [name for name, _ in fixture_functors()]
    assert len(names) >= 5
    assert len(set(names)) == len(names)


def test_marked_edge_generation_replay(arrow_ff):
    # every dagger-marked edge is generated from the Cartesian lift of its
    # source and the unit image of its fibre part, as the marking replay says:
    # E_0 of the edge is a thin-and-lean triangle whose 2-face is the Cartesian
    # lift, whose 0-face is a unit image, and E_1 recovers the edge as d_2
    ff = arrow_ff
    from laxfib.freefib import gamma_pair
    nat = build_free_fibration(ff.f, ff.src_marking, ff.dst_marking, mode="natural")
    replayed = 0
    for nd in sorted(ff.total.marked):
        e = ff.pairs[nd]
        ext0 = e.extend(0)
        cell0 = ff.cell_of(ext0)
        if cell0.is_degenerate():
            # edges that are themselves extensions carry their marking already
            audit = ff.filtration_audit()
            assert nd in audit["extension"] or nd in audit["unit"]
            continue
        replayed += 1
        assert cell0.nd in ff.total.lean and cell0.nd in ff.total.thin
        lift = ext0.face(2)
        assert lift.key() == e.face(1).extend(0).key()
        assert ff.cell_of(lift).nd in nat.total.marked  # the Cartesian lift
        assert ext0.face(0).key() == gamma_pair(ff.fN, e.rho.assign[(1, 0)]).key()
        assert e.extend(1).face(2).key() == e.key()
    assert replayed + len(ff.total.marked) > 0


def test_fiber_matches_strict_slice_nerve(small_ff):
    # the fiber over d agrees with the nerve of the strict slice model
    from laxfib.twocat import fr, scaled_nerve, slice_fiber
    bundle = fr(small_ff.f, small_ff.src_marking, small_ff.dst_marking)
    for d in small_ff.f.dst.objects:
        fib, _ = small_ff.fiber(d)
        marking, _ = slice_fiber(bundle, d)
        N = scaled_nerve(marking)
        assert fib.n_cells == N.n_cells, d
        assert len(fib.marked) == len(N.marked), d
        assert len(fib.thin) == len(N.thin), d


def test_collapse_functor_fixture():
    # a functor that is not injective on objects: the arrow collapsed to a point
    from laxfib.fincat import CatFunctor, terminal_cat, walking_arrow
    from laxfib.twocat import from_cat_functor
    from laxfib.anodyne import certify_fibration
    S = walking_arrow()
    collapse = CatFunctor(S, terminal_cat(), {"0": "*", "1": "*"},
                          {m: "id*" for m in S.morphisms})
    ff = build_free_fibration(from_cat_functor(collapse))
    assert compare_tame_fr(ff).ok
    assert ff.filtration_audit()["unreachable"] == []
    assert face_identity_violations(ff) == []
    assert certify_fibration(ff.proj, "MB", n_max=3).ok


def test_groupoid_hom_fixture():
    # a two-object construction whose hom-category is a groupoid
    from laxfib.fincat import walking_iso
    from laxfib.twocat import two_bracket, identity_two_functor
    ff = build_free_fibration(identity_two_functor(two_bracket(walking_iso())))
    assert compare_tame_fr(ff).ok
    assert ff.filtration_audit()["unreachable"] == []
    # the 1-cells into object 1 are still not equivalences, but the invertible
    # 2-cell marks the corresponding slice edges
    assert len(ff.total.marked) > 0


def test_dagger_strictly_extends_natural_marking():
    # mark a non-equivalence: the dagger marking must strictly grow while the
    # natural marking stays at the Cartesian edges; both compare cleanly
    from laxfib.fincat import walking_arrow
    from laxfib.twocat import Marking2Cat, identity_two_functor, two_bracket
    T = two_bracket(walking_arrow())
    marking = Marking2Cat(T, frozenset({"o:0"}))
    F = identity_two_functor(T)
    dag = build_free_fibration(F, marking, marking, mode="dagger")
    nat = build_free_fibration(F, marking, marking, mode="natural")
    assert nat.total.marked < dag.total.marked
    assert compare_tame_fr(dag).ok
    assert compare_tame_fr(nat).ok


def test_build_rejects_nonpreserving_marking():
    from laxfib.fincat import walking_arrow
    from laxfib.twocat import Marking2Cat, identity_two_functor, two_bracket
    T = two_bracket(walking_arrow())
    marked = Marking2Cat(T, frozenset({"o:0"}))
    minimal = Marking2Cat(T)
    with pytest.raises(ValueError):
        build_free_fibration(identity_two_functor(T), marked, minimal)


def test_fiber_is_ms_fibrant(small_ff):
    # fibers of the free fibration are single-scaling fibrant objects: the map
    # to the point lifts against the single-scaling catalog
    from laxfib.anodyne import certify_fibration
    from laxfib.simplicial import DecMap, Cell, standard_simplex
    fib, _ = small_ff.fiber("0")
    base = standard_simplex(0, kind="MS", marked="sharp", thin="sharp")
    def const(c):
        n = c.total_dim
        return Cell(0, 0, tuple(range(n - 1, -1, -1)))
    p = DecMap(fib, base, {c.nd: const(c) for c in fib.all_nondeg()})
    res = certify_fibration(p, "MS", n_max=4)
    assert res.ok, res.to_json_dict()
