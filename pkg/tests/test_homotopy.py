"""Homology exactness, collapse search, edge-path groups, verdict soundness."""

from __future__ import annotations

import itertools
import math

import pytest
from sympy import Matrix

from laxfib.fincat import chain_poset, poset_cat, terminal_cat, walking_arrow
from laxfib.homotopy import (
    Verdict,
    boundary_matrices,
    collapse_search,
    homology,
    initial_in_localization,
    pi1,
    replay_collapse,
    weakly_contractible,
)
from laxfib.simplicial import boundary_simplex, empty_sset, standard_simplex
from laxfib.twocat import Marking2Cat, from_fincat


def smith_invariants_by_minors(m: list[list[int]]) -> list[int]:
    """Independent oracle: Smith invariants via gcds of k x k minors."""
    M = Matrix(m)
    r = M.rank()
    invariants = []
    prev = 1
    for k in range(1, r + 1):
        gs = 0
        for rows in itertools.combinations(range(M.rows), k):
            for cols in itertools.combinations(range(M.cols), k):
                gs = math.gcd(gs, int(M[rows, cols].det()))
        invariants.append(gs // prev)
        prev = gs
    return invariants


def betti_by_rank(X, k: int) -> int:
    """Independent oracle: Betti numbers from matrix ranks over Q."""
    mats = boundary_matrices(X, k + 1)
    n_k = X.num(k)
    rank_in = Matrix(mats[k - 1]).rank() if k >= 1 and k - 1 < len(mats) and mats[k - 1] else 0
    rank_out = Matrix(mats[k]).rank() if k < len(mats) and mats[k] and mats[k][0] else 0
    return n_k - rank_in - rank_out


def test_boundary_squared_is_zero():
    for X in (standard_simplex(3, kind="PLAIN"), boundary_simplex(3)):
        mats = boundary_matrices(X, 4)
        for k in range(len(mats) - 1):
            a, b = Matrix(mats[k]), Matrix(mats[k + 1])
            assert (a * b).is_zero_matrix


@pytest.mark.parametrize("n", range(5))
def test_simplex_is_acyclic(n):
    H = homology(standard_simplex(n, kind="PLAIN"), 4)
    assert H.group(0) == (1, ())
    for k in range(1, 5):
        assert H.group(k) == (0, ())
    assert H.is_reduced_trivial(4)


def test_circle_homology():
    H = homology(boundary_simplex(2), 4)
    assert H.group(0) == (1, ())
    assert H.group(1) == (1, ())
    assert H.group(2) == (0, ())


def test_sphere_homology():
    X = boundary_simplex(3)
    H = homology(X, 4)
    assert H.group(0) == (1, ())
    assert H.group(1) == (0, ())
    assert H.group(2) == (1, ())
    # cross-check Betti numbers against the rank oracle
    for k in range(3):
        assert H.group(k)[0] == betti_by_rank(X, k)
    # cross-check the elementary divisors of the 2-boundary by minors
    mats = boundary_matrices(X, 3)
    from laxfib.homotopy import _snf_diagonal
    diag = [d for d in _snf_diagonal(mats[1]) if d != 0]
    assert [abs(d) for d in diag] == smith_invariants_by_minors(mats[1])


def test_homology_of_empty():
    H = homology(empty_sset(), 3)
    assert H.groups == {}


def test_homology_invariant_under_relabeling():
    C = chain_poset(2)
    N1 = C.nerve(max_dim=4)
    N2 = C.opposite().nerve(max_dim=4)
    H1, H2 = homology(N1, 4), homology(N2, 4)
    assert H1.groups == H2.groups


def test_collapse_simplex():
    v = collapse_search(standard_simplex(2, kind="PLAIN"))
    assert v.yes
    assert replay_collapse(standard_simplex(2, kind="PLAIN"), v.evidence["collapse"])


def test_collapse_circle_unknown():
    v = collapse_search(boundary_simplex(2))
    assert v.value == "unknown"


def test_collapse_nerve_with_top_element():
    # the nerve of a poset with a greatest element collapses like a cone
    P = poset_cat(["a", "b", "t"], [("a", "t"), ("b", "t")])
    v = collapse_search(P.nerve(max_dim=4))
    assert v.yes
    assert replay_collapse(P.nerve(max_dim=4), v.evidence["collapse"])


def test_collapse_records_budget():
    v = collapse_search(standard_simplex(1, kind="PLAIN"), budget=5)
    assert "budget" in v.evidence


def test_pi1_simplex_trivial():
    for n in (1, 2, 3):
        _, v = pi1(standard_simplex(n, kind="PLAIN"))
        assert v.yes


def test_pi1_circle():
    pres, v = pi1(boundary_simplex(2))
    assert pres["generators"] == 1 and pres["relations"] == []
    assert v.no
    assert v.evidence["abelianization"]["rank"] == 1


def test_pi1_nerve_of_poset_with_top():
    P = poset_cat(["a", "b", "t"], [("a", "t"), ("b", "t")])
    _, v = pi1(P.nerve(max_dim=4))
    assert v.yes


def test_weakly_contractible_verdicts():
    # a nerve with an initial object is contractible; the circle is not
    assert weakly_contractible(chain_poset(2).nerve(max_dim=4)).yes
    v = weakly_contractible(boundary_simplex(2))
    assert v.no and v.evidence["obstruction"] == "homology"
    assert weakly_contractible(empty_sset()).no


def test_budget_exhaustion_is_unknown_not_yes():
    # an acyclic input with no collapse budget must come out Unknown
    v = weakly_contractible(standard_simplex(2, kind="PLAIN"),
                            {"collapse_states": 0, "tietze_steps": 0})
    assert v.value == "unknown"


def test_disconnected_is_no():
    from laxfib.fincat import discrete_cat
    v = weakly_contractible(discrete_cat(2).nerve(max_dim=2))
    assert v.no and v.evidence["obstruction"] == "components"


def test_initial_in_localization_strict():
    C = from_fincat(chain_poset(1))
    m = Marking2Cat(C)
    v = initial_in_localization(m, "0")
    assert v.yes and v.evidence["witness"] == "strictly-initial"


def test_initial_in_localization_unreachable():
    C = from_fincat(walking_arrow().opposite())
    m = Marking2Cat(C)  # nothing marked beyond identities
    v = initial_in_localization(m, "0")
    assert v.no and v.evidence["obstruction"] == "unreachable"


def test_initial_in_localization_marked_reversal():
    # with the arrow marked, every object becomes reachable; the verdict must
    # not be a (false) No even though hom(0, x) can be empty
    C = from_fincat(walking_arrow().opposite())
    arrow = [m for m in walking_arrow().opposite().nonidentity()][0]
    m = Marking2Cat(C, frozenset({arrow}))
    v = initial_in_localization(m, "0")
    assert not v.no


def test_initial_unknown_object():
    C = from_fincat(terminal_cat())
    with pytest.raises(KeyError):
        initial_in_localization(Marking2Cat(C), "nope")


def test_truncated_loop_nerve_is_not_a_false_obstruction():
    # the walking isomorphism has nondegenerate chains in every dimension; its
    # truncated nerve must not yield a decisive non-contractibility verdict
    from laxfib.fincat import walking_iso
    N = walking_iso().nerve(max_dim=4)
    assert N.truncated_at == 4
    H = homology(N, 4)
    assert H.sound_up_to < 4
    v = weakly_contractible(N)
    assert not v.no
