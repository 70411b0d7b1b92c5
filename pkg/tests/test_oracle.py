import random
from itertools import product

import pytest

from embedkit import linalg
from embedkit.gmodule import GModule, SizeBoundError, Submodule
from embedkit.oracle import (
    count_isomorphic, cyclic_closure, dimensions_present, enumerate_g_submodules,
)
from embedkit.pm_builder import artin_schreier_example, synthetic_module
from embedkit.solvability import ActionData, HShape, count_for_module, invariants_of

SHIFT3 = [[0, 0, 1], [1, 0, 0], [0, 1, 0]]


def brute_stable_subsets(M):
    """All subgroups, grown one plain vector at a time, then filtered for σ-stability."""
    N = M.modulus
    vecs = [v for v in product(range(N), repeat=M.rank) if any(v)]
    found = {M.zero().basis}
    frontier = list(found)
    while frontier:
        nxt = []
        for basis in frontier:
            for v in vecs:
                S = Submodule.span(M, list(basis) + [v]).basis
                if S not in found:
                    found.add(S)
                    nxt.append(S)
        frontier = nxt
    return {b for b in found if Submodule(M, b).is_sigma_stable()}


def test_trivial_f2_squared():
    M = GModule.trivial(3, 1, 2, 1, 2)
    inv = enumerate_g_submodules(M)
    assert len(inv) == 5
    assert count_isomorphic(inv, HShape.field_shape(2, 1)) == 3
    assert count_isomorphic(inv, HShape.field_shape(2, 1, ActionData.field(1, [[0]]))) == 3
    assert count_isomorphic(inv, HShape.field_shape(2, 3)) == 0


def test_zero_module():
    inv = enumerate_g_submodules(GModule.trivial(3, 1, 2, 1, 0))
    assert len(inv) == 1


def test_artin_schreier_irreducible():
    M = artin_schreier_example(3, 2).module
    inv = enumerate_g_submodules(M)
    assert len(inv) == 4
    assert count_isomorphic(inv, HShape.field_shape(2, 2, ActionData.field(0, [[1]]))) == 1
    assert dimensions_present(inv) == {0, 1, 2, 3}


def test_regular_f2_z7():
    reg7 = [[int(i == (j + 1) % 7) for j in range(7)] for i in range(7)]
    M = GModule.from_matrix(7, 1, 2, 1, reg7)
    inv = enumerate_g_submodules(M)
    assert len(inv) == 8
    assert count_isomorphic(inv, HShape.field_shape(2, 3)) == 2
    assert count_isomorphic(inv, HShape.field_shape(2, 3, ActionData.field(0, [[1, 0]]))) == 1


def test_q4_plane_has_five_lines():
    # two copies of F_4 = F_2[x]/(x^2+x+1): γ = 2, q = 4
    M = synthetic_module(3, 1, [3, 3], 2).module
    inv = enumerate_g_submodules(M)
    assert count_isomorphic(inv, HShape.field_shape(2, 2, ActionData.field(0, [[1]]))) == 5
    assert count_for_module(M, 0, [[1]]).value == 5


@pytest.mark.parametrize("M", [
    GModule.from_matrix(3, 1, 2, 1, SHIFT3),
    GModule.from_matrix(3, 1, 2, 2, SHIFT3),
    GModule.trivial(5, 1, 3, 1, 2),
    artin_schreier_example(2, 3).module,
    synthetic_module(2, 1, [2, 1], 9).module,
])
def test_inventory_matches_brute_force(M):
    assert set(enumerate_g_submodules(M).all_bases()) == brute_stable_subsets(M)


def test_inventory_z4_shift():
    inv = enumerate_g_submodules(GModule.from_matrix(3, 1, 2, 2, SHIFT3))
    assert len(inv) == 9
    assert count_isomorphic(inv, HShape.prime_power(2, [1, 0])) == 1
    assert count_isomorphic(inv, HShape.prime_power(2, [0, 1])) == 1


def test_lattice_closure_and_members_stable():
    M = synthetic_module(3, 1, [3, 3, 1], 2).module
    inv = enumerate_g_submodules(M)
    bases = set(inv.all_bases())
    subs = inv.submodules()
    assert M.zero().basis in bases and M.whole().basis in bases
    assert all(S.is_sigma_stable() for S in subs)
    assert len(bases) == len(inv)
    rng = random.Random(1)
    for _ in range(60):
        A, B = rng.choice(subs), rng.choice(subs)
        assert (A + B).basis in bases and (A & B).basis in bases


def test_count_symmetry():
    M = synthetic_module(3, 1, [3, 3, 1, 1], 2).module
    inv = enumerate_g_submodules(M)
    fi = invariants_of(M)
    for u in range(fi.n0 + 1):
        for g in range(fi.gamma[0][0] + 1):
            a = count_isomorphic(inv, HShape.field_shape(2, u + 2 * g, ActionData.field(u, [[g]])))
            b = count_isomorphic(inv, HShape.field_shape(
                2, fi.n0 - u + 2 * (fi.gamma[0][0] - g), ActionData.field(fi.n0 - u, [[fi.gamma[0][0] - g]])))
            assert a == b


def test_deterministic_order():
    M = synthetic_module(2, 2, [4], 3).module
    a = enumerate_g_submodules(M).all_bases()
    b = enumerate_g_submodules(M.conjugate(linalg.identity(M.rank))).all_bases()
    assert a == b == sorted(a)


def test_size_bound_refusal():
    M = GModule.trivial(3, 1, 2, 1, 12)
    with pytest.raises(SizeBoundError):
        enumerate_g_submodules(M, size_bound=2**10)


def test_cyclic_closure():
    M = GModule.from_matrix(3, 1, 2, 2, SHIFT3)
    assert cyclic_closure(M, [1, 0, 0]) == M.whole()
    assert cyclic_closure(M, [2, 2, 2]).log_size == 1


def test_squarefree_shape_rejected():
    inv = enumerate_g_submodules(GModule.trivial(3, 1, 2, 1, 1))
    with pytest.raises(ValueError):
        count_isomorphic(inv, HShape.squarefree(10, 1))
