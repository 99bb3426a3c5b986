"""Gray tensor products, the decorated interval product, and extensions.

The Gray product of scaled simplicial sets has underlying set X x Y with an
asymmetric scaling: a 2-simplex (s_X, s_Y) is thin iff both components are
thin and either s_X collapses its {1,2}-edge or s_Y collapses its {0,1}-edge.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Optional

from .simplicial import (
    Cell,
    DecMap,
    DecoratedSSet,
    ProductSSet,
    delta_map,
    product,
    product_map,
    standard_simplex,
    vertex_cell,
)

CAP = 4


def gray(X: DecoratedSSet, Y: DecoratedSSet, *, cap: int = CAP,
         truncate: bool = False) -> ProductSSet:
    """Gray product of two scaled simplicial sets."""
    P = product(X, Y, cap=cap, truncate=truncate, kind="SC")
    thin = set()
    provenance = {}
    for cell in P.nondeg(2):
        x, y = P.pair_of[cell.nd]
        if not (_thin(X, x) and _thin(Y, y)):
            continue
        if X.face(x, 0).is_degenerate():
            thin.add(cell.nd)
            provenance[cell.nd] = "first-factor-collapses-12"
        elif Y.face(y, 2).is_degenerate():
            thin.add(cell.nd)
            provenance[cell.nd] = "second-factor-collapses-01"
    G = ProductSSet(X, Y, "SC", (), thin, thin, P.pair_of, P._cell_of,
                    P.n_cells, P.faces, P.labels, truncated_at=P.truncated_at)
    G.gray_provenance = provenance
    return G


def _thin(X: DecoratedSSet, cell: Cell) -> bool:
    return cell.is_degenerate() or cell.nd in X.thin


def _marked(X: DecoratedSSet, cell: Cell) -> bool:
    return cell.is_degenerate() or cell.nd in X.marked


def _lean(X: DecoratedSSet, cell: Cell) -> bool:
    return cell.is_degenerate() or cell.nd in X.lean


def interval(kind="SC") -> DecoratedSSet:
    return standard_simplex(1, kind=kind)


def simplex_vertex_word(X: DecoratedSSet, cell: Cell) -> tuple[int, ...]:
    """Vertex word of a cell of a vertex-labelled object (standard simplices)."""
    verts = []
    for i in range(cell.total_dim + 1):
        v = cell
        for k in range(cell.total_dim, i, -1):
            v = X.face(v, k)
        for _ in range(i):
            v = X.face(v, 0)
        verts.append(X.labels[v.nd][0])
    return tuple(verts)


def decorated_gray(X: DecoratedSSet, *, cap: int = CAP,
                   truncate: bool = False) -> ProductSSet:
    """The interval product of a two-scaling object, as a marked-scaled object.

    Extends the Gray scaling of the underlying product by the two lean-driven
    clauses, and marks the edges lying over {1} whose second component is
    marked.
    """
    if X.kind != "MB":
        raise ValueError("decorated interval product expects a two-scaling object")
    I = interval()
    P = product(I, X, cap=cap, truncate=truncate, kind="PLAIN")
    marked = set()
    thin = set()
    for cell in P.nondeg(1):
        e1, ex = P.pair_of[cell.nd]
        if _interval_constant(I, e1) == 1 and _marked(X, ex):
            marked.add(cell.nd)
    for cell in P.nondeg(2):
        s1, sx = P.pair_of[cell.nd]
        # (a) thin in the underlying Gray product
        if _thin(X, sx) and (I.face(s1, 0).is_degenerate() or X.face(sx, 2).is_degenerate()):
            thin.add(cell.nd)
            continue
        if not _lean(X, sx):
            continue
        # (b) the {1,2}-edge of the interval component is constant at 1
        if _interval_edge_at(I, I.face(s1, 0)) == 1:
            thin.add(cell.nd)
            continue
        # (c) the interval component is 0 -> 0 -> 1 and the {0,1}-edge is marked
        if _interval_word(I, s1) == (0, 0, 1) and _marked(X, X.face(sx, 2)):
            thin.add(cell.nd)
    G = ProductSSet(I, X, "MS", marked, thin, thin, P.pair_of, P._cell_of,
                    P.n_cells, P.faces, P.labels, truncated_at=P.truncated_at)
    return G


def _interval_word(I: DecoratedSSet, cell: Cell) -> tuple[int, ...]:
    return simplex_vertex_word(I, cell)


def _interval_constant(I: DecoratedSSet, cell: Cell) -> Optional[int]:
    """The constant value of a degenerate interval cell, else None."""
    word = _interval_word(I, cell)
    return word[0] if len(set(word)) == 1 else None


def _interval_edge_at(I: DecoratedSSet, edge: Cell) -> Optional[int]:
    return _interval_constant(I, edge)


def end_inclusion(X: DecoratedSSet, P: ProductSSet, eps: int) -> DecMap:
    """The inclusion {eps} x X -> interval x X."""
    I = P.factor_a
    v = vertex_cell(I, (eps,))
    assign = {}
    for cell in X.all_nondeg():
        const = v
        for _ in range(cell.dim):
            const = I.deg(const, 0)
        assign[cell.nd] = P.ref_of_pair(const, cell)
    return DecMap(X, P, assign)


def restrict_to_end(G: ProductSSet, eps: int) -> DecoratedSSet:
    """The marked-scaled object {eps} (x) X inside the decorated product."""
    X = G.factor_b
    inc = end_inclusion(X, G, eps)
    marked = set()
    thin = set()
    for cell in X.nondeg(1):
        img = inc.apply(cell)
        if not img.is_degenerate() and img.nd in G.marked:
            marked.add(cell.nd)
    for cell in X.nondeg(2):
        img = inc.apply(cell)
        if not img.is_degenerate() and img.nd in G.thin:
            thin.add(cell.nd)
    return DecoratedSSet("MS", X.n_cells, X.faces, marked, thin, thin,
                         labels=X.labels, coskeletal=X.coskeletal)


# ---------------------------------------------------------------------------
# cached prisms and structure maps
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def delta(n: int, kind: str = "SC") -> DecoratedSSet:
    return standard_simplex(n, kind=kind, cap=max(CAP, n))


@lru_cache(maxsize=None)
def prism(n: int) -> ProductSSet:
    """The Gray product interval (x) Delta^n, truncated at the cap."""
    return gray(delta(1), delta(n), cap=CAP, truncate=True)


@lru_cache(maxsize=None)
def simplex_face(n: int, i: int) -> DecMap:
    """delta_i : Delta^{n-1} -> Delta^n."""
    return delta_map(delta(n - 1), delta(n),
                     {k: (k if k < i else k + 1) for k in range(n)})


@lru_cache(maxsize=None)
def simplex_deg(n: int, j: int) -> DecMap:
    """sigma_j : Delta^{n+1} -> Delta^n."""
    return delta_map(delta(n + 1), delta(n),
                     {k: (k if k <= j else k - 1) for k in range(n + 2)})


@lru_cache(maxsize=None)
def prism_face(n: int, i: int) -> DecMap:
    return product_map(prism(n - 1), prism(n), DecMap.identity(delta(1)), simplex_face(n, i))


@lru_cache(maxsize=None)
def prism_deg(n: int, j: int) -> DecMap:
    return product_map(prism(n + 1), prism(n), DecMap.identity(delta(1)), simplex_deg(n, j))


@lru_cache(maxsize=None)
def end_map(n: int, eps: int) -> DecMap:
    """The inclusion {eps} x Delta^n -> interval x Delta^n."""
    return end_inclusion(delta(n), prism(n), eps)


@lru_cache(maxsize=None)
def e_map(j: int, n: int) -> DecMap:
    """The extension map interval x Delta^{n+1} -> interval x Delta^n.

    Vertices go by (m, r) -> (m, r) for r <= j and (m, r) -> (1, r-1) for
    r > j; it respects the Gray scalings and restricts over {1} to s_j.
    """
    if not 0 <= j <= n:
        raise ValueError(f"extension index {j} out of range for n={n}")
    src, dst = prism(n + 1), prism(n)
    I, Dn = dst.factor_a, dst.factor_b

    def image_vertex(m: int, r: int) -> tuple[int, int]:
        return (m, r) if r <= j else (1, r - 1)

    assign = {}
    for nd, (x, y) in src.pair_of.items():
        xw = _interval_word(src.factor_a, x)
        yw = _simplex_word(src.factor_b, y)
        pairs = [image_vertex(m, r) for m, r in zip(xw, yw)]
        new_x = _cell_from_word(I, tuple(p[0] for p in pairs))
        new_y = _cell_from_word(Dn, tuple(p[1] for p in pairs))
        assign[nd] = dst.ref_of_pair(new_x, new_y)
    return DecMap(src, dst, assign)


def _simplex_word(X: DecoratedSSet, cell: Cell) -> tuple[int, ...]:
    return simplex_vertex_word(X, cell)


def _cell_from_word(X: DecoratedSSet, word: tuple[int, ...]) -> Cell:
    return vertex_cell(X, word)


def e_map_respects_scaling(j: int, n: int) -> bool:
    """Thin triangles of the source prism land on thin triangles."""
    f = e_map(j, n)
    src, dst = prism(n + 1), prism(n)
    for nd in sorted(src.thin):
        img = f.apply(Cell(*nd))
        if not img.is_degenerate() and img.nd not in dst.thin:
            return False
    return True


def restriction_to_one_is_degeneracy(j: int, n: int) -> bool:
    """e_map over {1} agrees with the degeneracy s_j of the simplex factor."""
    f = e_map(j, n)
    inc1 = end_inclusion(delta(n + 1), prism(n + 1), 1)
    lhs = f.compose(inc1)
    rhs = end_inclusion(delta(n), prism(n), 1).compose(simplex_deg(n, j))
    return lhs.key() == rhs.key()
