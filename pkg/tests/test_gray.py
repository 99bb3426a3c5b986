"""Gray products, the decorated interval product, and the extension maps."""

from __future__ import annotations

import pytest

from laxfib.gray import (
    decorated_gray,
    delta,
    e_map,
    e_map_respects_scaling,
    end_inclusion,
    gray,
    interval,
    prism,
    restrict_to_end,
    restriction_to_one_is_degeneracy,
    simplex_vertex_word,
)
from laxfib.simplicial import Cell, standard_simplex, vertex_cell


def test_vertex_words():
    D2 = delta(2)
    tri = vertex_cell(D2, (0, 1, 2))
    assert simplex_vertex_word(D2, tri) == (0, 1, 2)
    assert simplex_vertex_word(D2, D2.deg(tri, 1)) == (0, 1, 1, 2)
    edge = vertex_cell(D2, (0, 2))
    assert simplex_vertex_word(D2, edge) == (0, 2)


def test_gray_square_has_one_thin_triangle():
    G = gray(delta(1), delta(1))
    assert G.num(2) == 2
    assert len(G.thin) == 1
    nd = next(iter(G.thin))
    x, _ = G.pair_of[nd]
    # the thin shuffle is the one whose first projection collapses {1,2}
    assert G.factor_a.face(x, 0).is_degenerate()
    assert G.gray_provenance[nd] == "first-factor-collapses-12"


def test_gray_unit():
    # in Delta^0 x Y every triangle has degenerate first projection, so the
    # Gray scaling agrees with T_Y on the nose
    for Y in (delta(2), standard_simplex(2, kind="SC", thin="sharp")):
        G = gray(delta(0), Y)
        assert G.n_cells == Y.n_cells
        assert {G.pair_of[nd][1].nd for nd in G.thin} == set(Y.thin)


def test_gray_asymmetry():
    A, B = delta(1), delta(1)
    G1 = gray(A, B)
    G2 = gray(B, A)
    assert G1.n_cells == G2.n_cells
    # same underlying square, different scalings: the thin shuffles differ
    t1 = {G1.pair_of[nd] for nd in G1.thin}
    t2 = {G2.pair_of[nd] for nd in G2.thin}
    swapped = {(y, x) for (x, y) in t2}
    assert t1 != swapped


def test_gray_thinness_rule_matches_provenance():
    X = standard_simplex(2, kind="SC", thin="sharp")
    G = gray(X, delta(1))
    for cell in G.nondeg(2):
        x, y = G.pair_of[cell.nd]
        both_thin = (x.is_degenerate() or x.nd in X.thin) and y.is_degenerate()
        rule = X.face(x, 0).is_degenerate() or delta(1).face(y, 2).is_degenerate()
        assert (cell.nd in G.thin) == (both_thin and rule)
        if cell.nd in G.thin:
            assert cell.nd in G.gray_provenance


def test_decorated_gray_restrictions():
    X = standard_simplex(2, kind="MB", marked=[(0, 1)], thin="flat", lean="sharp")
    G = decorated_gray(X)
    end0 = restrict_to_end(G, 0)
    end1 = restrict_to_end(G, 1)
    # {0}: flat marking, thin = T_X ; {1}: marking M_X, thin = C_X
    assert end0.marked == frozenset()
    assert end0.thin == X.thin
    assert end1.marked == X.marked
    assert end1.thin == X.lean


def test_decorated_gray_marked_edges():
    X = standard_simplex(1, kind="MB", marked="sharp", thin="flat", lean="flat")
    G = decorated_gray(X)
    I = G.factor_a
    marked_pairs = {G.pair_of[nd] for nd in G.marked}
    for e1, ex in marked_pairs:
        word = simplex_vertex_word(I, e1)
        assert set(word) == {1}
    # the edge {1} x Delta^1 is marked, the edge {0} x Delta^1 is not
    inc1 = end_inclusion(X, G, 1)
    inc0 = end_inclusion(X, G, 0)
    e = vertex_cell(X, (0, 1))
    assert inc1.apply(e).nd in G.marked
    assert inc0.apply(e).nd not in G.marked


def test_decorated_gray_contrary_triangles():
    # over a flat object the only nondegenerate thin triangles are the contrary
    # ones (0,x) -> (1,x) -> (1,y)
    X = standard_simplex(2, kind="MB")
    G = decorated_gray(X)
    I = G.factor_a
    for nd in G.thin:
        s1, sx = G.pair_of[nd]
        assert simplex_vertex_word(I, s1) == (0, 1, 1)
        xw = simplex_vertex_word(G.factor_b, sx)
        assert xw[0] == xw[1]


def test_e_map_vertex_formula():
    f = e_map(0, 1)
    src, dst = prism(2), prism(1)
    for (m, r), target in [((0, 0), (0, 0)), ((0, 1), (1, 0)), ((0, 2), (1, 1)),
                           ((1, 0), (1, 0)), ((1, 1), (1, 0)), ((1, 2), (1, 1))]:
        v = src.ref_of_pair(vertex_cell(src.factor_a, (m,)), vertex_cell(src.factor_b, (r,)))
        got = f.apply(v)
        want = dst.ref_of_pair(vertex_cell(dst.factor_a, (target[0],)),
                               vertex_cell(dst.factor_b, (target[1],)))
        assert got == want


def test_e_map_fixes_low_vertices():
    n = 2
    f = e_map(n, n)
    src, dst = prism(n + 1), prism(n)
    for r in range(n + 1):
        v = src.ref_of_pair(vertex_cell(src.factor_a, (0,)), vertex_cell(src.factor_b, (r,)))
        w = dst.ref_of_pair(vertex_cell(dst.factor_a, (0,)), vertex_cell(dst.factor_b, (r,)))
        assert f.apply(v) == w


def test_e_map_commutes_with_faces():
    for n in range(0, 3):
        for j in range(n + 1):
            assert e_map(j, n).commutes_with_faces()


@pytest.mark.parametrize("n", range(0, 4))
def test_e_map_respects_scalings(n):
    for j in range(n + 1):
        assert e_map_respects_scaling(j, n)


@pytest.mark.parametrize("n", range(0, 4))
def test_e_map_restriction_to_one(n):
    for j in range(n + 1):
        assert restriction_to_one_is_degeneracy(j, n)


def test_e_map_bad_index():
    with pytest.raises(ValueError):
        e_map(3, 2)
