"""Finite categories, functors, nerves and comma constructions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .simplicial import Cell, DecoratedSSet, SSetBuilder


class FinCat:
    """A finite category given by explicit composition tables.

    Composition ``comp[(g, f)] = g âˆ˜ f`` is defined whenever tgt(f) = src(g).
    """

    def __init__(self, objects: Iterable[str], morphisms: Iterable[str],
                 src: dict, tgt: dict, comp: dict, ident: dict, name: str = ""):
        self.objects = tuple(objects)
        self.morphisms = tuple(morphisms)
        self.src = dict(src)
        self.tgt = dict(tgt)
        self.comp = dict(comp)
        self.ident = dict(ident)
        self.name = name
        self._iso_cache: dict[str, bool] = {}

    def hom(self, a: str, b: str) -> list[str]:
        return [m for m in self.morphisms if self.src[m] == a and self.tgt[m] == b]

    def compose(self, g: str, f: str) -> str:
        return self.comp[(g, f)]

    def is_identity(self, m: str) -> bool:
        return m == self.ident[self.src[m]]

    def nonidentity(self) -> list[str]:
        return [m for m in self.morphisms if not self.is_identity(m)]

    def is_iso(self, m: str) -> bool:
        if m not in self._iso_cache:
            a, b = self.src[m], self.tgt[m]
            self._iso_cache[m] = any(
                self.comp[(n, m)] == self.ident[a] and self.comp[(m, n)] == self.ident[b]
                for n in self.hom(b, a)
            )
        return self._iso_cache[m]

    def validate(self) -> list[tuple]:
        bad = []
        for m in self.morphisms:
            if self.src[m] not in self.objects or self.tgt[m] not in self.objects:
                bad.append(("endpoints", m))
        for a in self.objects:
            i = self.ident.get(a)
            if i is None or self.src.get(i) != a or self.tgt.get(i) != a:
                bad.append(("identity", a))
        for f in self.morphisms:
            for g in self.morphisms:
                if self.src[g] != self.tgt[f]:
                    continue
                h = self.comp.get((g, f))
                if h is None or self.src.get(h) != self.src[f] or self.tgt.get(h) != self.tgt[g]:
                    bad.append(("composition", g, f))
        for f in self.morphisms:
            if self.comp.get((f, self.ident[self.src[f]])) != f:
                bad.append(("right-unit", f))
            if self.comp.get((self.ident[self.tgt[f]], f)) != f:
                bad.append(("left-unit", f))
        for f in self.morphisms:
            for g in self.morphisms:
                if self.src[g] != self.tgt[f]:
                    continue
                for h in self.morphisms:
                    if self.src[h] != self.tgt[g]:
                        continue
                    if self.comp[(h, self.comp[(g, f)])] != self.comp[(self.comp[(h, g)], f)]:
                        bad.append(("associativity", h, g, f))
        return bad

    def opposite(self) -> "FinCat":
        return FinCat(
            self.objects, self.morphisms,
            src=self.tgt, tgt=self.src,
            comp={(f, g): h for (g, f), h in self.comp.items()},
            ident=self.ident,
            name=f"{self.name}^op" if self.name else "op",
        )

    def product(self, other: "FinCat") -> "FinCat":
        objs = [f"{a}|{b}" for a in self.objects for b in other.objects]
        mors = [f"{m}|{n}" for m in self.morphisms for n in other.morphisms]
        src = {f"{m}|{n}": f"{self.src[m]}|{other.src[n]}" for m in self.morphisms for n in other.morphisms}
        tgt = {f"{m}|{n}": f"{self.tgt[m]}|{other.tgt[n]}" for m in self.morphisms for n in other.morphisms}
        comp = {}
        for (g, f), h in self.comp.items():
            for (gg, ff), hh in other.comp.items():
                comp[(f"{g}|{gg}", f"{f}|{ff}")] = f"{h}|{hh}"
        ident = {f"{a}|{b}": f"{self.ident[a]}|{other.ident[b]}" for a in self.objects for b in other.objects}
        return FinCat(objs, mors, src, tgt, comp, ident)

    def nerve(self, max_dim: int = 4, kind: str = "PLAIN") -> DecoratedSSet:
        """Nerve with nondegenerate cells the chains of non-identity morphisms."""
        b = SSetBuilder()
        for i, a in enumerate(self.objects):
            b.add(0, label=("obj", a))

        def chain_cell(chain: tuple[str, ...], start: str) -> Cell:
            for t, m in enumerate(chain):
                if self.is_identity(m):
                    # inserting an identity at position t is the degeneracy s_t
                    inner = chain_cell(chain[:t] + chain[t + 1:], start)
                    return _deg(b, inner, t)
            if not chain:
                return b.by_label(0, ("obj", start))
            return b.by_label(len(chain), ("chain", chain))

        chains = {0: [((), a) for a in self.objects]}
        for n in range(1, max_dim + 1):
            level = []
            for chain, start in chains[n - 1]:
                tail = self.tgt[chain[-1]] if chain else start
                for m in self.nonidentity():
                    if self.src[m] == tail:
                        level.append((chain + (m,), start))
            chains[n] = level
            for chain, start in level:
                faces = []
                for i in range(n + 1):
                    if i == 0:
                        sub, st = chain[1:], self.tgt[chain[0]]
                    elif i == n:
                        sub, st = chain[:-1], start
                    else:
                        sub = chain[:i - 1] + (self.comp[(chain[i], chain[i - 1])],) + chain[i + 1:]
                        st = start
                    faces.append(chain_cell(sub, st))
                b.add(n, tuple(faces), label=("chain", chain))

        marked: list = []
        thin: list = []
        if kind in ("MS", "MB"):
            marked = [b.by_label(1, ("chain", (m,))).nd for m in self.nonidentity() if self.is_iso(m)]
        if kind in ("MS", "MB", "SC"):
            thin = [
                b.by_label(2, ("chain", c)).nd
                for c, _ in chains.get(2, [])
            ]  # in a 1-category every triangle commutes strictly: all thin
        # categories with loops have nondegenerate chains in every dimension;
        # record the truncation so homology stays sound at the boundary
        truncated = any(
            self.src[m] == (self.tgt[chain[-1]] if chain else start) and not self.is_identity(m)
            for chain, start in chains.get(max_dim, [])
            for m in self.morphisms
        )
        return b.build(kind, marked=marked, thin=thin, lean=thin,
                       truncated_at=max_dim if truncated else None)

    def to_json_dict(self) -> dict:
        return {
            "schema": "laxfib/category-v1",
            "objects": list(self.objects),
            "morphisms": [
                {"name": m, "src": self.src[m], "tgt": self.tgt[m]} for m in self.morphisms
            ],
            "identity": {a: self.ident[a] for a in self.objects},
            "composition": [[g, f, h] for (g, f), h in sorted(self.comp.items())],
        }

    @staticmethod
    def from_json_dict(doc: dict) -> "FinCat":
        objects = doc["objects"]
        morphisms = [m["name"] for m in doc["morphisms"]]
        src = {m["name"]: m["src"] for m in doc["morphisms"]}
        tgt = {m["name"]: m["tgt"] for m in doc["morphisms"]}
        comp = {(g, f): h for g, f, h in doc["composition"]}
        return FinCat(objects, morphisms, src, tgt, comp, doc["identity"])

    def __repr__(self):
        return f"FinCat({len(self.objects)} objects, {len(self.morphisms)} morphisms)"


def _deg(builder: SSetBuilder, cell: Cell, t: int) -> Cell:
    from .simplicial import insert_degeneracy
    return Cell(cell.dim, cell.idx, insert_degeneracy(cell.word, t))


@dataclass
class CatFunctor:
    src: FinCat
    dst: FinCat
    omap: dict
    mmap: dict

    def validate(self) -> list[tuple]:
        bad = []
        for a in self.src.objects:
            if self.omap.get(a) not in self.dst.objects:
                bad.append(("object", a))
        for m in self.src.morphisms:
            n = self.mmap.get(m)
            if n is None or self.dst.src[n] != self.omap[self.src.src[m]] \
                    or self.dst.tgt[n] != self.omap[self.src.tgt[m]]:
                bad.append(("morphism", m))
        for a in self.src.objects:
            if self.mmap.get(self.src.ident[a]) != self.dst.ident[self.omap[a]]:
                bad.append(("identity", a))
        for (g, f), h in self.src.comp.items():
            if self.mmap.get(h) != self.dst.comp.get((self.mmap.get(g), self.mmap.get(f))):
                bad.append(("composition", g, f))
        return bad

    def opposite(self) -> "CatFunctor":
        return CatFunctor(self.src.opposite(), self.dst.opposite(), self.omap, self.mmap)

    def to_json_dict(self) -> dict:
        return {
            "schema": "laxfib/cat-functor-v1",
            "objects": dict(sorted(self.omap.items())),
            "morphisms": dict(sorted(self.mmap.items())),
        }


def identity_functor(C: FinCat) -> CatFunctor:
    return CatFunctor(C, C, {a: a for a in C.objects}, {m: m for m in C.morphisms})


def comma_under(F: CatFunctor, d: str) -> FinCat:
    """The comma category d/F: objects (k, u: d -> F(k))."""
    K, S = F.src, F.dst
    objs = []
    for k in K.objects:
        for u in S.hom(d, F.omap[k]):
            objs.append(f"{k}:{u}")
    mors, src, tgt, comp, ident = [], {}, {}, {}, {}
    arrows = {}
    for k in K.objects:
        for u in S.hom(d, F.omap[k]):
            for k2 in K.objects:
                for u2 in S.hom(d, F.omap[k2]):
                    for g in K.hom(k, k2):
                        if S.comp[(F.mmap[g], u)] == u2:
                            name = f"{g}:{u}>{u2}"
                            mors.append(name)
                            src[name] = f"{k}:{u}"
                            tgt[name] = f"{k2}:{u2}"
                            arrows[name] = g
    for a in objs:
        k, u = a.split(":", 1)
        ident[a] = f"{K.ident[k]}:{u}>{u}"
    for m1 in mors:
        for m2 in mors:
            if tgt[m1] == src[m2]:
                g = K.comp[(arrows[m2], arrows[m1])]
                u0 = src[m1].split(":", 1)[1]
                u2 = tgt[m2].split(":", 1)[1]
                comp[(m2, m1)] = f"{g}:{u0}>{u2}"
    return FinCat(objs, mors, src, tgt, comp, ident, name=f"{d}/F")


def comma_over(F: CatFunctor, s: str) -> FinCat:
    """The comma category F/s: objects (k, u: F(k) -> s)."""
    return comma_under(F.opposite(), s).opposite()


# ---------------------------------------------------------------------------
# small standard categories
# ---------------------------------------------------------------------------


def terminal_cat() -> FinCat:
    return FinCat(["*"], ["id*"], {"id*": "*"}, {"id*": "*"},
                  {("id*", "id*"): "id*"}, {"*": "id*"}, name="pt")


def walking_arrow() -> FinCat:
    return poset_cat(["0", "1"], [("0", "1")], name="arrow")


def walking_iso() -> FinCat:
    objs = ["0", "1"]
    mors = ["id0", "id1", "u", "v"]
    src = {"id0": "0", "id1": "1", "u": "0", "v": "1"}
    tgt = {"id0": "0", "id1": "1", "u": "1", "v": "0"}
    comp = {}
    for m in mors:
        comp[(m, f"id{src[m]}")] = m
        comp[(f"id{tgt[m]}", m)] = m
    comp[("v", "u")] = "id0"
    comp[("u", "v")] = "id1"
    return FinCat(objs, mors, src, tgt, comp, {"0": "id0", "1": "id1"}, name="iso")


def discrete_cat(n: int) -> FinCat:
    objs = [str(i) for i in range(n)]
    return FinCat(objs, [f"id{o}" for o in objs],
                  {f"id{o}": o for o in objs}, {f"id{o}": o for o in objs},
                  {(f"id{o}", f"id{o}"): f"id{o}" for o in objs},
                  {o: f"id{o}" for o in objs}, name=f"discrete{n}")


def chain_poset(n: int) -> FinCat:
    objs = [str(i) for i in range(n + 1)]
    return poset_cat(objs, [(str(i), str(i + 1)) for i in range(n)], name=f"chain{n}")


def poset_cat(objects: list[str], covers: list[tuple[str, str]], name="poset") -> FinCat:
    """Finite poset category from a relation (transitively closed here)."""
    rel = {(a, a) for a in objects} | set(covers)
    changed = True
    while changed:
        changed = False
        for (a, b) in list(rel):
            for (c, d) in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    mors = [f"{a}<{b}" for (a, b) in sorted(rel)]
    src = {f"{a}<{b}": a for (a, b) in rel}
    tgt = {f"{a}<{b}": b for (a, b) in rel}
    comp = {}
    for (a, b) in rel:
        for (c, d) in rel:
            if b == c:
                comp[(f"{c}<{d}", f"{a}<{b}")] = f"{a}<{d}"
    ident = {a: f"{a}<{a}" for a in objects}
    return FinCat(objects, mors, src, tgt, comp, ident, name=name)


def all_functors(T: FinCat, C: FinCat) -> list[CatFunctor]:
    """All functors T -> C, deterministic order (brute force; T small)."""
    out = []
    nonid = T.nonidentity()
    for oimages in itertools.product(C.objects, repeat=len(T.objects)):
        omap = dict(zip(T.objects, oimages))
        pools = []
        for m in nonid:
            pools.append(C.hom(omap[T.src[m]], omap[T.tgt[m]]))
        for mimages in itertools.product(*pools):
            mmap = dict(zip(nonid, mimages))
            for a in T.objects:
                mmap[T.ident[a]] = C.ident[omap[a]]
            F = CatFunctor(T, C, omap, mmap)
            if not F.validate():
                out.append(F)
    return out
