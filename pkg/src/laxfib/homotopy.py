"""Homotopy-type verdicts: exact homology, collapsibility, edge-path groups,
and initiality in localizations of marked 2-categories.

All decisive verdicts are sound: a No always carries a concrete obstruction
(nonzero reduced homology, a missing component, an unreachable object), a Yes
always carries a replayable witness (a collapse sequence, a strict initiality
certificate).  Everything else is Unknown, with the budgets recorded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form

from .fincat import FinCat
from .simplicial import Cell, DecoratedSSet
from .twocat import Marking2Cat, StrictTwoCat

DEFAULT_BUDGETS = {
    "collapse_states": 20000,
    "tietze_steps": 400,
    "max_degree": 4,
}


@dataclass
class Verdict:
    value: str                   # "yes" | "no" | "unknown"
    evidence: dict = field(default_factory=dict)

    @property
    def yes(self) -> bool:
        return self.value == "yes"

    @property
    def no(self) -> bool:
        return self.value == "no"

    def to_json_dict(self) -> dict:
        return {"value": self.value, "evidence": _jsonable(self.evidence)}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, Cell):
        return x.encode()
    if isinstance(x, Verdict):
        return x.to_json_dict()
    return x


# ---------------------------------------------------------------------------
# homology
# ---------------------------------------------------------------------------


def boundary_matrices(X: DecoratedSSet, max_deg: int) -> list[list[list[int]]]:
    """Normalized boundary matrices d_k : C_k -> C_{k-1} for k = 1..max_deg+1.

    Degenerate faces contribute zero.
    """
    top = min(max_deg + 1, X.top_dim)
    mats = []
    for k in range(1, top + 1):
        rows = X.num(k - 1)
        cols = X.num(k)
        m = [[0] * cols for _ in range(rows)]
        for cell in X.nondeg(k):
            for i, f in enumerate(X.faces[cell.nd]):
                if not f.is_degenerate():
                    m[f.idx][cell.idx] += (-1) ** i
        mats.append(m)
    return mats


def _snf_diagonal(m: list[list[int]]) -> list[int]:
    if not m or not m[0]:
        return []
    M = smith_normal_form(Matrix(m))
    return [int(M[i, i]) for i in range(min(M.rows, M.cols))]


@dataclass
class HomologyResult:
    groups: dict            # degree -> (rank, tuple of torsion coefficients)
    max_degree: int
    sound_up_to: int        # degrees above this are affected by truncation

    def group(self, k: int):
        return self.groups.get(k, (0, ()))

    def reduced_rank(self, k: int) -> int:
        rank, _ = self.group(k)
        return rank - 1 if k == 0 and rank > 0 else rank

    def is_reduced_trivial(self, up_to: Optional[int] = None) -> bool:
        hi = self.sound_up_to if up_to is None else up_to
        for k in range(hi + 1):
            rank, tors = self.group(k)
            if self.reduced_rank(k) != 0 or tors:
                return False
        return True

    def to_json_dict(self) -> dict:
        return {
            "groups": {str(k): [r, list(t)] for k, (r, t) in sorted(self.groups.items())},
            "max_degree": self.max_degree,
            "sound_up_to": self.sound_up_to,
        }


def homology(X: DecoratedSSet, max_deg: int = 4) -> HomologyResult:
    """Integral simplicial homology via Smith normal form, exact arithmetic."""
    if X.is_empty():
        return HomologyResult({}, max_deg, max_deg)
    mats = boundary_matrices(X, max_deg)
    # boundary-of-boundary must vanish on the nose
    for k in range(len(mats) - 1):
        a, b = mats[k], mats[k + 1]
        if a and b and a[0] is not None:
            for j in range(len(b[0]) if b else 0):
                col = [sum(a[r][i] * b[i][j] for i in range(len(b))) for r in range(len(a))]
                assert all(v == 0 for v in col), "boundary squared is nonzero"
    groups = {}
    top = X.top_dim
    hi = min(max_deg, top)
    diag = {k: _snf_diagonal(mats[k - 1]) if k - 1 < len(mats) else [] for k in range(1, hi + 2)}
    for k in range(hi + 1):
        n_k = X.num(k)
        rank_in = sum(1 for d in diag.get(k, []) if d != 0)
        rank_out = sum(1 for d in diag.get(k + 1, []) if d != 0)
        rank = n_k - rank_in - rank_out
        torsion = tuple(abs(d) for d in diag.get(k + 1, []) if d not in (0, 1, -1))
        groups[k] = (rank, torsion)
    truncated = X.coskeletal is not None or X.truncated_at is not None
    sound = (top - 1) if truncated else hi
    return HomologyResult(groups, max_deg, min(hi, sound if truncated else hi))


# ---------------------------------------------------------------------------
# collapsibility
# ---------------------------------------------------------------------------


def _closure_roots(X: DecoratedSSet) -> dict:
    clos: dict = {}
    for dim in range(X.top_dim + 1):
        for cell in X.nondeg(dim):
            acc = {cell.nd}
            for f in X.faces.get(cell.nd, ()):  # dim 0 has no stored faces
                acc |= clos[(f.dim, f.idx)]
            clos[cell.nd] = acc
    return clos


def collapse_search(X: DecoratedSSet, budget: Optional[int] = None) -> Verdict:
    """Search for an elementary-collapse sequence down to a single vertex.

    Returns Yes with the sequence, or Unknown after the state budget; never No
    (failure to collapse does not refute contractibility).
    """
    budget = budget if budget is not None else DEFAULT_BUDGETS["collapse_states"]
    cells = [c.nd for c in X.all_nondeg()]
    if len(cells) == 1 and cells[0][0] == 0:
        return Verdict("yes", {"collapse": [], "budget": budget})
    if not cells:
        return Verdict("unknown", {"reason": "empty", "budget": budget})
    clos = _closure_roots(X)
    cofaces: dict = {nd: set() for nd in cells}
    for nd in cells:
        for other in clos[nd]:
            if other != nd:
                cofaces[other].add(nd)

    facet_rows = {nd: [ (f.nd, f.is_degenerate()) for f in X.faces.get(nd, ()) ] for nd in cells}

    def free_pairs(alive: frozenset):
        out = []
        for sigma in alive:
            if sigma[0] == 0:
                continue
            if any(o in alive for o in cofaces[sigma]):
                continue
            seen: dict = {}
            for f_nd, degen in facet_rows[sigma]:
                seen.setdefault((f_nd, degen), 0)
                seen[(f_nd, degen)] += 1
            for tau in {f_nd for f_nd, degen in facet_rows[sigma] if not degen}:
                if seen.get((tau, False)) != 1 or seen.get((tau, True)):
                    continue
                holders = [o for o in cofaces[tau] if o in alive and o != sigma]
                if holders:
                    continue
                out.append((tau, sigma))
        return sorted(out)

    state_count = [0]
    failed: set = set()

    def dfs(alive: frozenset, seq: list):
        if len(alive) == 1 and next(iter(alive))[0] == 0:
            return list(seq)
        if alive in failed:
            return None
        state_count[0] += 1
        if state_count[0] > budget:
            return None
        for tau, sigma in free_pairs(alive):
            seq.append((tau, sigma))
            res = dfs(alive - {tau, sigma}, seq)
            if res is not None:
                return res
            seq.pop()
            if state_count[0] > budget:
                return None
        failed.add(alive)
        return None

    seq = dfs(frozenset(cells), [])
    if seq is not None:
        return Verdict("yes", {"collapse": [[list(t), list(s)] for t, s in seq],
                               "budget": budget})
    reason = "budget exhausted" if state_count[0] > budget else "no collapse sequence found"
    return Verdict("unknown", {"reason": reason, "states": state_count[0],
                               "budget": budget})


def replay_collapse(X: DecoratedSSet, sequence: list) -> bool:
    """Apply an emitted collapse sequence and confirm it empties the complex."""
    alive = {c.nd for c in X.all_nondeg()}
    for tau, sigma in sequence:
        tau, sigma = tuple(tau), tuple(sigma)
        if tau not in alive or sigma not in alive:
            return False
        alive -= {tau, sigma}
    return len(alive) == 1 and next(iter(alive))[0] == 0


# ---------------------------------------------------------------------------
# fundamental group
# ---------------------------------------------------------------------------


def pi1(X: DecoratedSSet, basepoint: Optional[Cell] = None,
        budget: Optional[int] = None) -> tuple[dict, Verdict]:
    """Edge-path presentation at a basepoint and a triviality verdict."""
    budget = budget if budget is not None else DEFAULT_BUDGETS["tietze_steps"]
    if X.is_empty():
        raise ValueError("empty simplicial set has no fundamental group")
    verts = [c.nd for c in X.nondeg(0)]
    edges = [c.nd for c in X.nondeg(1)]
    adj: dict = {v: [] for v in verts}
    for e in edges:
        d0, d1 = X.faces[e][0], X.faces[e][1]
        adj[d1.nd].append((e, d0.nd))
        adj[d0.nd].append((e, d1.nd))
    base = basepoint.nd if basepoint is not None else verts[0]
    tree: set = set()
    seen = {base}
    queue = [base]
    while queue:
        v = queue.pop(0)
        for e, w in sorted(adj[v]):
            if w not in seen:
                seen.add(w)
                tree.add(e)
                queue.append(w)
    component = seen

    gens = [e for e in edges
            if e not in tree and X.faces[e][1].nd in component]
    gen_index = {e: i for i, e in enumerate(gens)}

    def letter(edge_cell: Cell):
        if edge_cell.is_degenerate():
            return ()
        nd = edge_cell.nd
        if nd in tree or nd not in gen_index:
            return ()
        return ((gen_index[nd], 1),)

    relations = []
    for t in X.nondeg(2):
        faces = X.faces[t.nd]
        if faces[2].is_degenerate() and faces[0].is_degenerate() and faces[1].is_degenerate():
            continue
        v0 = X.face(faces[2], 1)
        if v0.nd not in component:
            continue
        word = list(letter(faces[2])) + list(letter(faces[0])) + \
            [(g, -p) for (g, p) in reversed(letter(faces[1]))]
        word = _free_reduce(word)
        if word:
            relations.append(word)

    ngens, relations, steps = _tietze(len(gens), relations, budget)
    presentation = {"generators": ngens, "relations": [list(map(list, r)) for r in relations],
                    "tietze_steps": steps, "budget": budget}
    if ngens == 0:
        return presentation, Verdict("yes", {"presentation": presentation})
    # abelianization via Smith normal form
    mat = [[0] * len(relations) for _ in range(ngens)]
    for j, rel in enumerate(relations):
        for g, p in rel:
            mat[g][j] += p
    diag = _snf_diagonal(mat) if relations else []
    rank = ngens - sum(1 for d in diag if d != 0)
    torsion = [abs(d) for d in diag if d not in (0, 1, -1)]
    if rank > 0 or torsion:
        return presentation, Verdict(
            "no", {"abelianization": {"rank": rank, "torsion": torsion},
                   "presentation": presentation})
    return presentation, Verdict("unknown", {"presentation": presentation})


def _free_reduce(word):
    out = []
    for g, p in word:
        if p == 0:
            continue
        if out and out[-1][0] == g and out[-1][1] == -p:
            out.pop()
        else:
            out.append((g, p))
    return tuple(out)


def _tietze(ngens: int, relations: list, budget: int):
    rels = [tuple(r) for r in relations]
    alive = list(range(ngens))
    steps = 0
    changed = True
    while changed and steps < budget:
        changed = False
        rels = sorted({_free_reduce(r) for r in rels} - {()}, key=lambda r: (len(r), r))
        for rel in rels:
            counts: dict = {}
            for g, p in rel:
                counts[g] = counts.get(g, 0) + 1
            candidates = [(g, p) for (g, p) in rel if counts[g] == 1 and p in (1, -1)]
            if not candidates:
                continue
            g, p = candidates[0]
            idx = rel.index((g, p))
            rest = rel[idx + 1:] + rel[:idx]
            expr = tuple((h, -q) for (h, q) in reversed(rest)) if p == 1 else tuple(rest)
            new_rels = []
            for r in rels:
                if r == rel:
                    continue
                out = []
                for (h, q) in r:
                    if h == g:
                        seg = expr if q == 1 else tuple((a, -b) for (a, b) in reversed(expr))
                        out.extend(seg)
                    else:
                        out.append((h, q))
                new_rels.append(_free_reduce(tuple(out)))
            rels = new_rels
            alive.remove(g)
            steps += 1
            changed = True
            break
    # reindex surviving generators
    index = {g: i for i, g in enumerate(alive)}
    rels = [tuple((index[g], p) for g, p in r) for r in rels if r]
    return len(alive), sorted(set(rels)), steps


# ---------------------------------------------------------------------------
# combined contractibility verdict
# ---------------------------------------------------------------------------


def weakly_contractible(X: DecoratedSSet, budgets: Optional[dict] = None) -> Verdict:
    """Three-valued contractibility: collapse gives Yes, homology or the
    fundamental group give No, anything else is Unknown."""
    budgets = {**DEFAULT_BUDGETS, **(budgets or {})}
    if X.is_empty():
        return Verdict("no", {"obstruction": "empty"})
    H = homology(X, budgets["max_degree"])
    if H.reduced_rank(0) != 0:
        return Verdict("no", {"obstruction": "components", "h0_rank": H.group(0)[0],
                              "budgets": budgets})
    for k in range(1, H.sound_up_to + 1):
        rank, tors = H.group(k)
        if rank or tors:
            return Verdict("no", {"obstruction": "homology", "degree": k,
                                  "group": [rank, list(tors)], "budgets": budgets})
    c = collapse_search(X, budgets["collapse_states"])
    if c.yes:
        return Verdict("yes", {"witness": "collapse", "collapse": c.evidence["collapse"],
                               "budgets": budgets})
    _, p = pi1(X, budget=budgets["tietze_steps"])
    if p.no:
        return Verdict("no", {"obstruction": "pi1", "detail": p.evidence,
                              "budgets": budgets})
    return Verdict("unknown", {"reason": "inconclusive at cap", "budgets": budgets})


# ---------------------------------------------------------------------------
# initiality in a localization
# ---------------------------------------------------------------------------


def initial_in_localization(M: Marking2Cat, obj, budgets: Optional[dict] = None) -> Verdict:
    """Is the object initial after inverting the marked 1-cells?

    Yes via strict initiality or contractible mapping categories (possibly
    after moving along marked edges, which become equivalences); No via
    unreachability in the localization graph or, for objects equivalent to
    the candidate, a decisively non-contractible mapping category when the
    marking is trivial.  Everything else is Unknown.
    """
    budgets = {**DEFAULT_BUDGETS, **(budgets or {})}
    C = M.base
    if obj not in C.objects:
        raise KeyError(f"unknown object {obj}")
    # localization graph: arrows, with marked arrows invertible
    reach = {obj}
    frontier = [obj]
    while frontier:
        v = frontier.pop()
        for m, (a, b) in C.onecells.items():
            nxt = None
            if a == v:
                nxt = b
            elif b == v and m in M.marked1:
                nxt = a
            if nxt is not None and nxt not in reach:
                reach.add(nxt)
                frontier.append(nxt)
    missing = [x for x in C.objects if x not in reach]
    if missing:
        return Verdict("no", {"obstruction": "unreachable", "witness": missing[0],
                              "budgets": budgets})

    # objects connected to the candidate by marked zig-zags become equivalent
    # to it in the localization, so their verdicts transfer
    component = {obj}
    frontier = [obj]
    while frontier:
        v = frontier.pop()
        for m in M.marked1:
            a, b = C.onecells[m]
            for (x, y) in ((a, b), (b, a)):
                if x == v and y not in component:
                    component.add(y)
                    frontier.append(y)

    records = {}
    for j in sorted(component, key=str):
        v = _base_initial_verdict(M, j, budgets)
        records[j] = v
        if v.yes:
            ev = dict(v.evidence)
            if j != obj:
                ev["via_marked_equivalence_to"] = j
            return Verdict("yes", ev)
        if v.no:
            ev = dict(v.evidence)
            if j != obj:
                ev["via_marked_equivalence_to"] = j
            return Verdict("no", ev)
    return Verdict("unknown", {"component": records, "budgets": budgets})


def _base_initial_verdict(M: Marking2Cat, obj, budgets: dict) -> Verdict:
    C = M.base
    strict = True
    for x in C.objects:
        hom = C.hom1(obj, x)
        if len(hom) != 1 or len(C.two_between(hom[0], hom[0])) != 1:
            strict = False
            break
    if strict:
        return Verdict("yes", {"witness": "strictly-initial", "budgets": budgets})

    # when only identities are marked, localizing changes nothing beyond the
    # groupoidification of hom-categories, so a decisively non-contractible
    # mapping category refutes initiality
    trivial_marking = all(m == C.id1[C.one_src(m)] for m in M.marked1)

    per_object = {}
    all_yes = True
    for x in C.objects:
        mapping = C.hom_cat(obj, x)
        nerve = mapping.nerve(max_dim=budgets["max_degree"])
        v = weakly_contractible(nerve, budgets)
        per_object[x] = v
        if not v.yes:
            all_yes = False
        if v.no and trivial_marking:
            return Verdict("no", {"obstruction": "mapping-category", "witness": x,
                                  "detail": v, "budgets": budgets})
    marked_ok = True
    marked_witness = None
    for m in sorted(C.onecells, key=str):
        if m not in M.marked1:
            continue
        a, b = C.onecells[m]
        if a != obj:
            continue
        mapping = C.hom_cat(obj, b)
        anchor = mapping.objects[0]
        if not _invertibly_connected(C, mapping, anchor, m):
            marked_ok = False
            marked_witness = m
            break
    if all_yes and marked_ok:
        return Verdict("yes", {"witness": "mapping-categories-contractible",
                               "per_object": per_object, "budgets": budgets})
    ev = {"per_object": per_object, "budgets": budgets}
    if not marked_ok:
        ev["marked_edge_not_connected"] = marked_witness
    return Verdict("unknown", ev)


def _invertibly_connected(C: StrictTwoCat, mapping: FinCat, a, b) -> bool:
    """Connectivity of two 1-cells through invertible 2-cells."""
    reach = {a}
    frontier = [a]
    while frontier:
        v = frontier.pop()
        for t in mapping.morphisms:
            if not C.is_invertible2(t):
                continue
            s, tt = mapping.src[t], mapping.tgt[t]
            for (x, y) in ((s, tt), (tt, s)):
                if x == v and y not in reach:
                    reach.add(y)
                    frontier.append(y)
    return b in reach
