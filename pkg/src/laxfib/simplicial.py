"""Finite simplicial sets with markings and one or two scalings.

Cells are kept in Eilenberg-Zilber normal form: every simplex is a
degeneracy word applied to a nondegenerate cell, with strictly decreasing
word indices.  Face and degeneracy operators are computed symbolically via
the simplicial identities, so an object only stores face tables for its
nondegenerate cells.

Decoration conventions:

* ``marked``    -- a set of nondegenerate edges; degenerate edges always count.
* ``thin``      -- a set of nondegenerate triangles; degenerate ones always count.
* ``lean``      -- a second triangle set containing ``thin`` (two-scaling objects).
* ``kind``      -- "MB" (marked + thin <= lean), "MS" (marked + thin), "SC"
  (thin only) or "PLAIN".
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

KINDS = ("MB", "MS", "SC", "PLAIN")


class DimensionCapError(ValueError):
    """A construction would exceed the configured dimension cap."""


class BadDecorationError(ValueError):
    """A decoration names a simplex that is not present."""


@dataclass(frozen=True, order=True)
class Cell:
    """A simplex: degeneracy word ``word`` applied to nondegenerate (dim, idx).

    ``word = (i1, ..., ik)`` with i1 > ... > ik encodes s_{i1} ... s_{ik}.
    """

    dim: int
    idx: int
    word: tuple[int, ...] = ()

    @property
    def total_dim(self) -> int:
        return self.dim + len(self.word)

    @property
    def nd(self) -> tuple[int, int]:
        return (self.dim, self.idx)

    def is_degenerate(self) -> bool:
        return bool(self.word)

    def encode(self) -> list:
        return [self.dim, self.idx, list(self.word)]

    @staticmethod
    def decode(data: list) -> "Cell":
        return Cell(data[0], data[1], tuple(data[2]))


def insert_degeneracy(word: tuple[int, ...], j: int) -> tuple[int, ...]:
    """Normal form of s_j composed on the outside of s_word."""
    if not word or j > word[0]:
        return (j,) + word
    # s_j s_i = s_{i+1} s_j for j <= i
    return (word[0] + 1,) + insert_degeneracy(word[1:], j)


def face_through_word(word: tuple[int, ...], i: int):
    """Push d_i through s_word.

    Returns ``(residual_word, face_index)`` where ``face_index`` is None when
    the face operator cancels against a degeneracy.
    """
    if not word:
        return (), i
    j, rest = word[0], word[1:]
    if i < j:
        w2, r = face_through_word(rest, i)
        return insert_degeneracy(w2, j - 1), r
    if i == j or i == j + 1:
        return rest, None
    w2, r = face_through_word(rest, i - 1)
    return insert_degeneracy(w2, j), r


class DecoratedSSet:
    """A finite (decorated) simplicial set given by face tables.

    ``faces[(n, k)]`` is the tuple (d_0 x, ..., d_n x) for the k-th
    nondegenerate n-cell.  ``labels`` carries optional provenance payloads.
    """

    def __init__(
        self,
        kind: str,
        n_cells: list[int],
        faces: dict[tuple[int, int], tuple[Cell, ...]],
        marked: Iterable[tuple[int, int]] = (),
        thin: Iterable[tuple[int, int]] = (),
        lean: Iterable[tuple[int, int]] = (),
        labels: Optional[dict] = None,
        coskeletal: Optional[int] = None,
        truncated_at: Optional[int] = None,
    ):
        if kind not in KINDS:
            raise ValueError(f"unknown kind {kind!r}")
        self.kind = kind
        self.n_cells = list(n_cells)
        while self.n_cells and self.n_cells[-1] == 0:
            self.n_cells.pop()
        self.faces = dict(faces)
        self.marked = frozenset(marked)
        self.thin = frozenset(thin)
        if kind == "MS":
            lean = set(thin)
        self.lean = frozenset(lean)
        self.labels = dict(labels or {})
        self.coskeletal = coskeletal
        self.truncated_at = truncated_at
        self._by_faces: dict[int, dict] = {}
        self._all_cells: dict[int, list[Cell]] = {}
        self._label_lookup: Optional[dict] = None
        self._check_decorations()

    # -- basic structure ---------------------------------------------------

    @property
    def top_dim(self) -> int:
        return len(self.n_cells) - 1

    def num(self, dim: int) -> int:
        if 0 <= dim <= self.top_dim:
            return self.n_cells[dim]
        return 0

    def nondeg(self, dim: int) -> list[Cell]:
        return [Cell(dim, k) for k in range(self.num(dim))]

    def all_nondeg(self) -> list[Cell]:
        out = []
        for d in range(self.top_dim + 1):
            out.extend(self.nondeg(d))
        return out

    def is_empty(self) -> bool:
        return not self.n_cells

    def face(self, cell: Cell, i: int) -> Cell:
        if not 0 <= i <= cell.total_dim:
            raise IndexError(f"face index {i} out of range for {cell}")
        if cell.word:
            w, r = face_through_word(cell.word, i)
            if r is None:
                return Cell(cell.dim, cell.idx, w)
            base = self.faces[cell.nd][r]
            return self._apply_word(base, w)
        return self.faces[cell.nd][i]

    def deg(self, cell: Cell, j: int) -> Cell:
        if not 0 <= j <= cell.total_dim:
            raise IndexError(f"degeneracy index {j} out of range for {cell}")
        return Cell(cell.dim, cell.idx, insert_degeneracy(cell.word, j))

    @staticmethod
    def _apply_word(cell: Cell, word: tuple[int, ...]) -> Cell:
        w = cell.word
        for j in reversed(word):
            w = insert_degeneracy(w, j)
        return Cell(cell.dim, cell.idx, w)

    def faces_tuple(self, cell: Cell) -> tuple[Cell, ...]:
        return tuple(self.face(cell, i) for i in range(cell.total_dim + 1))

    def all_cells(self, dim: int) -> list[Cell]:
        """All cells of total dimension ``dim``, degenerate ones included."""
        if dim < 0:
            return []
        if dim not in self._all_cells:
            out = []
            for base_dim in range(min(dim, self.top_dim) + 1):
                k = dim - base_dim
                for idx in range(self.num(base_dim)):
                    for word in _degeneracy_words(base_dim, k):
                        out.append(Cell(base_dim, idx, word))
            self._all_cells[dim] = sorted(out)
        return self._all_cells[dim]

    def cell_by_label(self, dim: int, label) -> Cell:
        if self._label_lookup is None:
            self._label_lookup = {}
            for nd, lab in self.labels.items():
                self._label_lookup[(nd[0], lab)] = Cell(*nd)
        return self._label_lookup[(dim, label)]

    def by_faces(self, dim: int) -> dict[tuple[Cell, ...], list[Cell]]:
        """Index of ``dim``-cells keyed by their face tuples."""
        if dim not in self._by_faces:
            index: dict = {}
            for cell in self.all_cells(dim):
                index.setdefault(self.faces_tuple(cell), []).append(cell)
            self._by_faces[dim] = index
        return self._by_faces[dim]

    # -- decorations -------------------------------------------------------

    def is_marked(self, cell: Cell) -> bool:
        if cell.total_dim != 1:
            raise ValueError("marking applies to edges")
        return cell.is_degenerate() or cell.nd in self.marked

    def is_thin(self, cell: Cell) -> bool:
        if cell.total_dim != 2:
            raise ValueError("thinness applies to triangles")
        return cell.is_degenerate() or cell.nd in self.thin

    def is_lean(self, cell: Cell) -> bool:
        if cell.total_dim != 2:
            raise ValueError("leanness applies to triangles")
        return cell.is_degenerate() or cell.nd in self.lean

    def _check_decorations(self):
        for nd in self.marked:
            if nd[0] != 1 or nd[1] >= self.num(1):
                raise BadDecorationError(f"marked edge {nd} not present")
        for name, group in (("thin", self.thin), ("lean", self.lean)):
            for nd in group:
                if nd[0] != 2 or nd[1] >= self.num(2):
                    raise BadDecorationError(f"{name} triangle {nd} not present")
        if self.kind == "MB" and not self.thin <= self.lean:
            raise BadDecorationError("thin triangles must be lean")
        if self.kind == "SC" and self.marked:
            raise BadDecorationError("SC objects carry no marking")
        if self.kind == "PLAIN" and (self.marked or self.thin or self.lean):
            raise BadDecorationError("PLAIN objects carry no decorations")

    def with_decorations(self, kind=None, marked=None, thin=None, lean=None) -> "DecoratedSSet":
        """Copy of the object with decorations replaced."""
        kind = kind or self.kind
        marked = self.marked if marked is None else marked
        thin = self.thin if thin is None else thin
        lean = self.lean if lean is None else lean
        if kind == "MS":
            lean = thin
        return DecoratedSSet(
            kind, self.n_cells, self.faces, marked, thin, lean,
            labels=self.labels, coskeletal=self.coskeletal, truncated_at=self.truncated_at,
        )

    # -- structural checks -------------------------------------------------

    def simplicial_identity_violations(self) -> list[tuple]:
        """All failures of d_i d_j = d_{j-1} d_i (i < j) on stored cells."""
        bad = []
        for dim in range(2, self.top_dim + 1):
            for cell in self.nondeg(dim):
                for j in range(1, dim + 1):
                    for i in range(j):
                        lhs = self.face(self.face(cell, j), i)
                        rhs = self.face(self.face(cell, i), j - 1)
                        if lhs != rhs:
                            bad.append((cell, i, j, lhs, rhs))
        return bad

    def validate(self):
        for d in range(1, self.top_dim + 1):
            for cell in self.nondeg(d):
                fs = self.faces.get(cell.nd)
                if fs is None or len(fs) != d + 1:
                    raise ValueError(f"missing/short face tuple for {cell}")
                for f in fs:
                    if f.total_dim != d - 1 or f.idx >= self.num(f.dim):
                        raise ValueError(f"bad face {f} of {cell}")
        bad = self.simplicial_identity_violations()
        if bad:
            raise ValueError(f"simplicial identities fail: {bad[:3]}")
        return self

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        doc = {
            "kind": self.kind,
            "dims": list(self.n_cells),
            "faces": {
                f"{d},{k}": [f.encode() for f in self.faces[(d, k)]]
                for d in range(1, self.top_dim + 1)
                for k in range(self.num(d))
            },
            "marked": sorted(list(nd) for nd in self.marked),
            "thin": sorted(list(nd) for nd in self.thin),
            "lean": sorted(list(nd) for nd in self.lean),
        }
        if self.coskeletal is not None:
            doc["coskeletal"] = self.coskeletal
        if self.truncated_at is not None:
            doc["truncated_at"] = self.truncated_at
        str_labels = {
            f"{d},{k}": self.labels[(d, k)]
            for (d, k) in sorted(self.labels)
            if isinstance(self.labels[(d, k)], str)
        }
        if str_labels:
            doc["labels"] = str_labels
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json_dict(doc: dict) -> "DecoratedSSet":
        faces = {}
        for key, fs in doc.get("faces", {}).items():
            d, k = (int(x) for x in key.split(","))
            faces[(d, k)] = tuple(Cell.decode(f) for f in fs)
        labels = {}
        for key, lab in doc.get("labels", {}).items():
            d, k = (int(x) for x in key.split(","))
            labels[(d, k)] = lab
        return DecoratedSSet(
            doc["kind"],
            list(doc["dims"]),
            faces,
            marked=[tuple(nd) for nd in doc.get("marked", [])],
            thin=[tuple(nd) for nd in doc.get("thin", [])],
            lean=[tuple(nd) for nd in doc.get("lean", [])],
            labels=labels,
            coskeletal=doc.get("coskeletal"),
            truncated_at=doc.get("truncated_at"),
        )

    @staticmethod
    def from_json(text: str) -> "DecoratedSSet":
        return DecoratedSSet.from_json_dict(json.loads(text))

    def __repr__(self):
        return f"DecoratedSSet(kind={self.kind}, cells={self.n_cells})"


def _degeneracy_words(base_dim: int, length: int) -> list[tuple[int, ...]]:
    """Strictly decreasing degeneracy words of given length on a base_dim cell."""
    if length == 0:
        return [()]
    # s_{i1}...s_{ik} applied to an n-cell: valid normal forms are the strictly
    # decreasing words with i1 <= n + k - 1.
    top = base_dim + length - 1
    return [tuple(sorted(c, reverse=True)) for c in itertools.combinations(range(top + 1), length)]


class SSetBuilder:
    """Incremental constructor for DecoratedSSet."""

    def __init__(self):
        self.n_cells: list[int] = []
        self.faces: dict = {}
        self.labels: dict = {}
        self._label_index: dict = {}

    def add(self, dim: int, faces: tuple[Cell, ...] = (), label=None) -> Cell:
        while len(self.n_cells) <= dim:
            self.n_cells.append(0)
        idx = self.n_cells[dim]
        self.n_cells[dim] += 1
        cell = Cell(dim, idx)
        if dim > 0:
            if len(faces) != dim + 1:
                raise ValueError("need dim+1 faces")
            self.faces[cell.nd] = tuple(faces)
        if label is not None:
            self.labels[cell.nd] = label
            self._label_index[(dim, label)] = cell
        return cell

    def by_label(self, dim: int, label) -> Cell:
        return self._label_index[(dim, label)]

    def has_label(self, dim: int, label) -> bool:
        return (dim, label) in self._label_index

    def build(self, kind="PLAIN", marked=(), thin=(), lean=(), coskeletal=None,
              truncated_at=None) -> DecoratedSSet:
        return DecoratedSSet(
            kind, self.n_cells, self.faces,
            marked=[c.nd for c in marked] if marked and isinstance(next(iter(marked)), Cell) else marked,
            thin=[c.nd for c in thin] if thin and isinstance(next(iter(thin)), Cell) else thin,
            lean=[c.nd for c in lean] if lean and isinstance(next(iter(lean)), Cell) else lean,
            labels=self.labels, coskeletal=coskeletal, truncated_at=truncated_at,
        )


# ---------------------------------------------------------------------------
# standard objects
# ---------------------------------------------------------------------------


def _subset_complex(subsets: list[tuple[int, ...]], kind, marked, thin, lean,
                    strict: bool = True) -> DecoratedSSet:
    """Simplicial set whose nondegenerate cells are vertex subsets of [n]."""
    b = SSetBuilder()
    for s in sorted(subsets, key=lambda s: (len(s), s)):
        dim = len(s) - 1
        faces = tuple(b.by_label(dim - 1, s[:i] + s[i + 1:]) for i in range(dim + 1)) if dim else ()
        b.add(dim, faces, label=s)
    def deco(group, expect_dim):
        out = []
        for verts in group:
            verts = tuple(verts)
            if not b.has_label(expect_dim, verts):
                if strict:
                    raise BadDecorationError(f"decoration names absent simplex {verts}")
                continue
            out.append(b.by_label(expect_dim, verts).nd)
        return out
    return b.build(kind, marked=deco(marked, 1), thin=deco(thin, 2), lean=deco(lean, 2))


def _expand_deco(spec, n, dim) -> list[tuple[int, ...]]:
    """Interpret a flat/sharp/explicit decoration spec as vertex tuples."""
    if spec in (None, "flat"):
        return []
    if spec == "sharp":
        return list(itertools.combinations(range(n + 1), dim + 1))
    return [tuple(v) for v in spec]


def standard_simplex(n: int, *, kind="MB", marked="flat", thin="flat", lean=None,
                     cap: int = 4) -> DecoratedSSet:
    """The n-simplex with flat/sharp/explicit decorations.

    ``lean=None`` means lean coincides with thin (the single-scaling notation).
    """
    if n > cap:
        raise DimensionCapError(f"n={n} exceeds cap {cap}")
    subsets = [tuple(s) for k in range(n + 1) for s in itertools.combinations(range(n + 1), k + 1)]
    m = _expand_deco(marked, n, 1)
    t = _expand_deco(thin, n, 2)
    l = t if lean is None else _expand_deco(lean, n, 2)
    return _subset_complex(subsets, kind, m, t, l)


def horn(n: int, i: int, *, kind="MB", marked="flat", thin="flat", lean=None,
         cap: int = 4) -> DecoratedSSet:
    """The horn missing the i-th facet and the interior.

    Decorations naming cells that fall outside the horn are dropped silently
    (the generator catalog relies on this for its low-dimensional instances).
    """
    if n > cap:
        raise DimensionCapError(f"n={n} exceeds cap {cap}")
    if not 0 <= i <= n:
        raise ValueError("horn index out of range")
    full = tuple(range(n + 1))
    missing = full[:i] + full[i + 1:]
    subsets = [
        tuple(s)
        for k in range(n + 1)
        for s in itertools.combinations(range(n + 1), k + 1)
        if tuple(s) not in (full, missing)
    ]
    m = _expand_deco(marked, n, 1)
    t = _expand_deco(thin, n, 2)
    l = t if lean is None else _expand_deco(lean, n, 2)
    return _subset_complex(subsets, kind, m, t, l, strict=False)


def boundary_simplex(n: int, *, kind="PLAIN", cap: int = 4) -> DecoratedSSet:
    if n > cap:
        raise DimensionCapError(f"n={n} exceeds cap {cap}")
    full = tuple(range(n + 1))
    subsets = [
        tuple(s)
        for k in range(n)
        for s in itertools.combinations(range(n + 1), k + 1)
    ]
    del full
    return _subset_complex(subsets, kind, (), (), ())


def empty_sset(kind="PLAIN") -> DecoratedSSet:
    return DecoratedSSet(kind, [], {})


def vertex_cell(X: DecoratedSSet, verts: tuple[int, ...]) -> Cell:
    """Cell of a vertex-labelled object from a monotone vertex word."""
    verts = tuple(verts)
    for t in range(len(verts) - 1):
        if verts[t] == verts[t + 1]:
            inner = vertex_cell(X, verts[:t + 1] + verts[t + 2:])
            return X.deg(inner, t)
        if verts[t] > verts[t + 1]:
            raise ValueError("vertex word must be monotone")
    return X.cell_by_label(len(verts) - 1, verts)


# ---------------------------------------------------------------------------
# maps
# ---------------------------------------------------------------------------


class DecMap:
    """A simplicial map given on nondegenerate cells of the source."""

    def __init__(self, src: DecoratedSSet, dst: DecoratedSSet,
                 assign: dict[tuple[int, int], Cell]):
        self.src = src
        self.dst = dst
        self.assign = dict(assign)

    def apply(self, cell: Cell) -> Cell:
        img = self.assign[cell.nd]
        return DecoratedSSet._apply_word(img, cell.word)

    def __eq__(self, other):
        return (
            isinstance(other, DecMap)
            and self.src is other.src
            and self.dst is other.dst
            and self.assign == other.assign
        )

    def __hash__(self):
        return hash((id(self.src), id(self.dst), tuple(sorted(self.assign.items()))))

    def key(self) -> tuple:
        """Structural key, independent of object identity."""
        return tuple(sorted(self.assign.items()))

    def compose(self, other: "DecMap") -> "DecMap":
        """self after other (other first)."""
        if other.dst is not self.src:
            raise ValueError("composition mismatch")
        assign = {nd: self.apply(img) for nd, img in other.assign.items()}
        return DecMap(other.src, self.dst, assign)

    @staticmethod
    def identity(X: DecoratedSSet) -> "DecMap":
        return DecMap(X, X, {c.nd: c for c in X.all_nondeg()})

    def commutes_with_faces(self) -> bool:
        for d in range(1, self.src.top_dim + 1):
            for cell in self.src.nondeg(d):
                img = self.assign[cell.nd]
                for i in range(d + 1):
                    if self.apply(self.src.face(cell, i)) != self.dst.face(img, i):
                        return False
        return True

    def decoration_violations(self) -> list[tuple]:
        bad = []
        for nd in sorted(self.src.marked):
            img = self.assign[nd]
            if not img.is_degenerate() and img.nd not in self.dst.marked:
                bad.append(("marked", nd))
        for nd in sorted(self.src.thin):
            img = self.assign[nd]
            if not img.is_degenerate() and img.nd not in self.dst.thin:
                bad.append(("thin", nd))
        if self.src.kind == "MB":
            for nd in sorted(self.src.lean):
                img = self.assign[nd]
                if not img.is_degenerate() and img.nd not in self.dst.lean:
                    bad.append(("lean", nd))
        return bad

    def validate(self) -> "DecMap":
        if set(self.assign) != {c.nd for c in self.src.all_nondeg()}:
            raise ValueError("assignment does not cover the source")
        for nd, img in self.assign.items():
            if img.total_dim != nd[0]:
                raise ValueError(f"image of {nd} has wrong dimension")
        if not self.commutes_with_faces():
            raise ValueError("map does not commute with faces")
        bad = self.decoration_violations()
        if bad:
            raise ValueError(f"decorations not preserved: {bad[:3]}")
        return self

    def is_mono(self) -> bool:
        for d in range(self.src.top_dim + 1):
            images = [self.apply(c) for c in self.src.all_cells(d)]
            if len(set(images)) != len(images):
                return False
        return True

    def __repr__(self):
        return f"DecMap({self.src!r} -> {self.dst!r})"


def enumerate_maps(
    A: DecoratedSSet,
    B: DecoratedSSet,
    *,
    partial: Optional[dict[tuple[int, int], Cell]] = None,
    constraint: Optional[Callable[[Cell, Cell], bool]] = None,
    respect_decorations: bool = True,
    first_only: bool = False,
) -> list[DecMap]:
    """All decoration-preserving simplicial maps A -> B, lexicographic order.

    ``partial`` pins images of some nondegenerate cells; ``constraint`` is an
    extra per-cell predicate.  With ``first_only`` the search stops at the
    first complete map.
    """
    cells = A.all_nondeg()
    if B.is_empty():
        return [] if cells else [DecMap(A, B, {})]
    assign: dict[tuple[int, int], Cell] = {}
    out: list[DecMap] = []
    partial = partial or {}

    def candidates(cell: Cell) -> list[Cell]:
        if cell.dim == 0:
            cands = B.all_cells(0)
        else:
            ftuple = tuple(
                DecoratedSSet._apply_word(assign[f.nd], f.word)
                for f in (A.faces[cell.nd])
            )
            cands = B.by_faces(cell.dim).get(ftuple, [])
        pin = partial.get(cell.nd)
        if pin is not None:
            cands = [c for c in cands if c == pin]
        if respect_decorations:
            if cell.dim == 1 and cell.nd in A.marked:
                cands = [c for c in cands if c.is_degenerate() or c.nd in B.marked]
            elif cell.dim == 2:
                if cell.nd in A.thin:
                    cands = [c for c in cands if c.is_degenerate() or c.nd in B.thin]
                if A.kind == "MB" and cell.nd in A.lean:
                    cands = [c for c in cands if c.is_degenerate() or c.nd in B.lean]
        if constraint is not None:
            cands = [c for c in cands if constraint(cell, c)]
        return cands

    def search(pos: int) -> bool:
        if pos == len(cells):
            out.append(DecMap(A, B, dict(assign)))
            return first_only
        cell = cells[pos]
        for cand in candidates(cell):
            assign[cell.nd] = cand
            if search(pos + 1):
                return True
            del assign[cell.nd]
        return False

    search(0)
    return out


# ---------------------------------------------------------------------------
# colimits and products
# ---------------------------------------------------------------------------


def pushout(f: DecMap, g: DecMap) -> tuple[DecoratedSSet, DecMap, DecMap]:
    """Pushout of the span B <-f- A -g-> C with f a monomorphism.

    Returns (P, leg_B, leg_C).  Decorations are unions of images.
    """
    if f.src is not g.src:
        raise ValueError("span legs must share a source")
    if not f.is_mono():
        raise ValueError("unsupported pushout: first leg is not a monomorphism")
    A, B, C = f.src, f.dst, g.dst
    b = SSetBuilder()
    cmap: dict[tuple[int, int], Cell] = {}
    bmap: dict[tuple[int, int], Cell] = {}
    image_of_f = {f.assign[a.nd]: a for a in A.all_nondeg()}

    def push_b(cell: Cell) -> Cell:
        """Image in P of an arbitrary cell of B."""
        root = Cell(cell.dim, cell.idx)
        if root in image_of_f:
            a = image_of_f[root]
            img = DecoratedSSet._apply_word(cmap_apply(g.assign[a.nd]), cell.word)
            return img
        return DecoratedSSet._apply_word(bmap[root.nd], cell.word)

    def cmap_apply(cell: Cell) -> Cell:
        return DecoratedSSet._apply_word(cmap[cell.nd], cell.word)

    top = max([C.top_dim, B.top_dim, 0])
    for dim in range(top + 1):
        for cell in C.nondeg(dim):
            faces = tuple(cmap_apply(C.face(cell, i)) for i in range(dim + 1)) if dim else ()
            cmap[cell.nd] = b.add(dim, faces, label=("C", C.labels.get(cell.nd, cell.nd)))
        for cell in B.nondeg(dim):
            if cell in image_of_f:
                continue
            faces = tuple(push_b(B.face(cell, i)) for i in range(dim + 1)) if dim else ()
            bmap[cell.nd] = b.add(dim, faces, label=("B", B.labels.get(cell.nd, cell.nd)))

    def pushed(group_b, group_c):
        out = set()
        for nd in group_b:
            img = push_b(Cell(*nd))
            if not img.is_degenerate():
                out.add(img.nd)
        for nd in group_c:
            img = cmap_apply(Cell(*nd))
            if not img.is_degenerate():
                out.add(img.nd)
        return out

    kind = B.kind if B.kind != "PLAIN" else C.kind
    P = b.build(
        kind,
        marked=pushed(B.marked, C.marked),
        thin=pushed(B.thin, C.thin),
        lean=pushed(B.lean, C.lean) if kind == "MB" else pushed(B.thin, C.thin),
    )
    leg_b = DecMap(B, P, {c.nd: push_b(c) for c in B.all_nondeg()})
    leg_c = DecMap(C, P, {c.nd: cmap_apply(c) for c in C.all_nondeg()})
    return P, leg_b, leg_c


class ProductSSet(DecoratedSSet):
    """Cartesian product with a pair index for its cells."""

    def __init__(self, A: DecoratedSSet, B: DecoratedSSet, kind, marked, thin, lean,
                 pair_of: dict, cell_of: dict, n_cells, faces, labels,
                 truncated_at=None):
        super().__init__(kind, n_cells, faces, marked, thin, lean, labels=labels,
                         truncated_at=truncated_at)
        self.factor_a = A
        self.factor_b = B
        self.pair_of = pair_of        # nondeg product cell nd -> (Cell in A, Cell in B)
        self._cell_of = cell_of       # (Cell in A, Cell in B) -> nondeg product Cell
        self.truncated = truncated_at is not None

    def ref_of_pair(self, x: Cell, y: Cell) -> Cell:
        """Product cell (possibly degenerate) for a pair of same-dim cells."""
        if x.total_dim != y.total_dim:
            raise ValueError("pair components must have equal dimension")
        return _pair_lookup(self._cell_of, self.factor_a, self.factor_b, x, y)

    def proj_a(self) -> DecMap:
        return DecMap(self, self.factor_a, {nd: self.pair_of[nd][0] for nd in self.pair_of})

    def proj_b(self) -> DecMap:
        return DecMap(self, self.factor_b, {nd: self.pair_of[nd][1] for nd in self.pair_of})


def product(A: DecoratedSSet, B: DecoratedSSet, *, cap: int = 4,
            truncate: bool = False, kind: Optional[str] = None) -> ProductSSet:
    """Cartesian product; decorations are taken pairwise.

    Nondegenerate n-cells are jointly nondegenerate pairs (x, y) of n-cells.
    """
    full_dim = A.top_dim + B.top_dim
    if full_dim > cap and not truncate:
        raise DimensionCapError(
            f"product dimension {full_dim} exceeds cap {cap}; pass truncate=True")
    top = min(full_dim, cap)
    b = SSetBuilder()
    cell_of: dict = {}
    pair_of: dict = {}

    def jointly_nondeg(x: Cell, y: Cell) -> bool:
        n = x.total_dim
        for j in range(n):
            if j in x.word and j in y.word:
                xa = A.face(x, j)
                ya = B.face(y, j)
                if A.deg(xa, j) == x and B.deg(ya, j) == y:
                    return False
        return True

    for dim in range(top + 1):
        for x in A.all_cells(dim):
            for y in B.all_cells(dim):
                if not jointly_nondeg(x, y):
                    continue
                if dim == 0:
                    faces = ()
                else:
                    faces = tuple(
                        _pair_lookup(cell_of, A, B, A.face(x, i), B.face(y, i))
                        for i in range(dim + 1)
                    )
                cell = b.add(dim, faces, label=(A.labels.get(x.nd, x.nd) if not x.word else x,
                                                B.labels.get(y.nd, y.nd) if not y.word else y))
                cell_of[(x, y)] = cell
                pair_of[cell.nd] = (x, y)

    marked, thin, lean = set(), set(), set()
    for nd, (x, y) in pair_of.items():
        if nd[0] == 1:
            if _deco(A, x, "marked") and _deco(B, y, "marked"):
                marked.add(nd)
        elif nd[0] == 2:
            if _deco(A, x, "thin") and _deco(B, y, "thin"):
                thin.add(nd)
            if _deco(A, x, "lean") and _deco(B, y, "lean"):
                lean.add(nd)
    if kind is None:
        kind = A.kind if A.kind == B.kind else "PLAIN"
    if kind == "PLAIN":
        marked, thin, lean = set(), set(), set()
    if kind == "SC":
        marked = set()
        lean = thin
    if kind == "MS":
        lean = thin
    P = ProductSSet(A, B, kind, marked, thin, lean, pair_of, cell_of,
                    b.n_cells, b.faces, b.labels,
                    truncated_at=top if full_dim > top else None)
    return P


def _deco(X: DecoratedSSet, cell: Cell, which: str) -> bool:
    if cell.is_degenerate():
        return True
    group = getattr(X, which)
    return cell.nd in group


def _pair_lookup(cell_of, A, B, x, y):
    """Cell (possibly degenerate) of the product for an arbitrary pair."""
    key = (x, y)
    if key in cell_of:
        return cell_of[key]
    n = x.total_dim
    for j in range(n - 1, -1, -1):
        ax, ay = A.face(x, j), B.face(y, j)
        if A.deg(ax, j) == x and B.deg(ay, j) == y:
            inner = _pair_lookup(cell_of, A, B, ax, ay)
            return Cell(inner.dim, inner.idx, insert_degeneracy(inner.word, j))
    raise KeyError(f"pair {key} not representable (beyond truncation?)")


def product_map(P: ProductSSet, Q: ProductSSet, f: DecMap, g: DecMap) -> DecMap:
    """The induced map f x g : P -> Q between product objects."""
    assign = {}
    for nd, (x, y) in P.pair_of.items():
        assign[nd] = Q.ref_of_pair(f.apply(x), g.apply(y))
    return DecMap(P, Q, assign)


def delta_map(X: DecoratedSSet, Y: DecoratedSSet, vertex_images: dict[int, int]) -> DecMap:
    """Map between vertex-labelled objects determined by a vertex assignment."""
    assign = {}
    for cell in X.all_nondeg():
        verts = X.labels[cell.nd]
        image_word = tuple(vertex_images[v] for v in verts)
        assign[cell.nd] = vertex_cell(Y, image_word)
    return DecMap(X, Y, assign)


def coskeletal_spheres(X: DecoratedSSet, dim: int) -> list[tuple[Cell, ...]]:
    """Boundary spheres: tuples (y_0, ..., y_dim) of (dim-1)-cells with
    d_i y_j = d_{j-1} y_i for i < j.
    """
    lower = X.all_cells(dim - 1)
    face_rows = {y: tuple(X.face(y, i) for i in range(dim)) for y in lower}
    # index cells by prefixes of their face tuples for fast slot filling
    prefix: list[dict] = [dict() for _ in range(dim + 1)]
    for y in lower:
        row = face_rows[y]
        for k in range(dim + 1):
            prefix[k].setdefault(row[:k], []).append(y)
    spheres = []

    def extend(tup):
        j = len(tup)
        if j == dim + 1:
            spheres.append(tuple(tup))
            return
        want = tuple(face_rows[tup[i]][j - 1] for i in range(min(j, dim)))
        for y in prefix[len(want)].get(want, ()):
            tup.append(y)
            extend(tup)
            tup.pop()

    extend([])
    return spheres


def add_coskeletal_top(X: DecoratedSSet, dim: int) -> DecoratedSSet:
    """Extend a (dim-1)-truncated object by its unique coskeletal dim-cells."""
    assert X.top_dim <= dim - 1
    degenerate_spheres = set()
    for z in X.all_cells(dim - 1):
        for j in range(dim):
            s = X.deg(z, j)
            degenerate_spheres.add(tuple(X.face(s, i) for i in range(dim + 1)))
    n_cells = list(X.n_cells)
    while len(n_cells) < dim:
        n_cells.append(0)
    faces = dict(X.faces)
    labels = dict(X.labels)
    count = 0
    for sphere in sorted(coskeletal_spheres(X, dim)):
        if sphere in degenerate_spheres:
            continue
        nd = (dim, count)
        faces[nd] = sphere
        labels[nd] = ("cosk", sphere)
        count += 1
    n_cells.append(count)
    return DecoratedSSet(X.kind, n_cells, faces, X.marked, X.thin, X.lean,
                         labels=labels, coskeletal=dim - 1)
