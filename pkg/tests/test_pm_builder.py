import random

import pytest

from embedkit import linalg
from embedkit.gmodule import decompose, fixed_submodule, kernel_of_poly
from embedkit.modarith import Poly
from embedkit.pm_builder import (
    NotStableError, PuncturedCoverSpec, artin_schreier_example, build_pm_genus0, pm_inclusion,
    random_cover_spec, synthetic_module,
)
from embedkit.solvability import invariants_of


def degree_zero(pm, v):
    return sum(pm.ambient_vector(v).values()) % pm.module.modulus == 0


def pulled_back(pm, v):
    """σ applied to a coordinate vector, computed on the ambient divisor."""
    D = pm.ambient_vector(v)
    perm = pm.spec.perm
    return pm.coordinates({t: D[perm[t]] for t in pm.spec.punctures})


def test_trivial_two_points():
    pm = build_pm_genus0(PuncturedCoverSpec.make(3, 1, 5, ["a", "b"]))
    assert pm.rank == 1 and pm.module.sigma == ((1,),)
    assert pm.base_point == "a" and pm.labels == ("b",)


def test_artin_schreier_3_2():
    pm = artin_schreier_example(3, 2)
    assert pm.rank == 3
    inv = invariants_of(pm.module)
    assert (inv.n0, inv.nb, inv.gamma) == (1, (2,), ((1,),))


def test_artin_schreier_2_3():
    pm = artin_schreier_example(2, 3)
    assert pm.rank == 2
    inv = invariants_of(pm.module)
    assert (inv.n0, inv.nb) == (1, (1,))
    assert inv.d == (1,)


def test_artin_schreier_3_4_decomposition():
    d = decompose(artin_schreier_example(3, 4).module)
    assert d.trivial_part == {1: 0, 2: 1}
    assert d.components == {(1, 1, 1): 0, (1, 1, 2): 1}


@pytest.mark.parametrize("p,l", [(3, 2), (5, 2), (7, 2), (3, 7), (5, 11)])
def test_single_free_orbit(p, l):
    M = synthetic_module(p, 1, [p], l).module
    d = decompose(M)
    assert d.trivial_part == {1: 0}
    assert all(v == 1 for v in d.components.values())
    assert len(d.components) == (p - 1) // M.factorization.d[0]


def test_synthetic_examples():
    pm = synthetic_module(3, 2, [9], 2)
    assert pm.rank == 8
    Q9 = Poly([1, 0, 0, 1, 0, 0, 1], 2)
    assert kernel_of_poly(pm.module, Q9).log_size == 6 == pm.module.factorization.d[1]
    assert synthetic_module(2, 2, [4, 1], 3).rank == 4
    assert synthetic_module(5, 1, [1], 2).rank == 0


def test_basis_and_coordinates_roundtrip():
    pm = synthetic_module(3, 1, [3, 1], 4)
    N = pm.module.modulus
    for k, label in enumerate(pm.labels):
        e = [int(i == k) for i in range(pm.rank)]
        D = pm.ambient_vector(e)
        assert D[label] == 1 and D[pm.base_point] == N - 1
        assert pm.coordinates(D) == e
    with pytest.raises(ValueError):
        pm.coordinates({pm.base_point: 1})


def test_labels_compare_as_strings():
    spec = PuncturedCoverSpec.make(2, 1, 3, [10, 9, 2], {9: 10, 10: 9})
    pm = build_pm_genus0(spec)
    assert pm.base_point == "10" and pm.labels == ("2", "9")


@pytest.mark.parametrize("kwargs", [
    dict(p=3, a=1, m=5, punctures=[], permutation={}),
    dict(p=3, a=1, m=6, punctures=["x"], permutation={}),
    dict(p=3, a=1, m=5, punctures=["x", "y"], permutation={"x": "y", "y": "x"}),
    dict(p=3, a=1, m=5, punctures=["x", "y"], permutation={"x": "y"}),
    dict(p=4, a=1, m=5, punctures=["x"], permutation={}),
])
def test_spec_rejects(kwargs):
    with pytest.raises(ValueError):
        PuncturedCoverSpec.make(**kwargs)


def test_non_prime_power_m_rejected():
    with pytest.raises(ValueError):
        build_pm_genus0(PuncturedCoverSpec.make(5, 1, 6, ["x", "y"]))


def test_bad_orbit_size():
    with pytest.raises(ValueError):
        synthetic_module(3, 1, [2], 2)


def test_inclusion_examples():
    pm = artin_schreier_example(3, 2)
    W, cert = pm_inclusion(pm, ["inf"])
    assert W.basis == () and cert.verified
    W, cert = pm_inclusion(pm, ["0", "1", "2"])
    assert W.log_size == 2 and cert.verified and W.is_sigma_stable()
    W, cert = pm_inclusion(pm, pm.spec.punctures)
    assert W == pm.module.whole() and cert.verified
    with pytest.raises(NotStableError, match="'1'"):
        pm_inclusion(pm, ["1", "inf"])
    with pytest.raises(ValueError):
        pm_inclusion(pm, ["nowhere"])


@pytest.mark.parametrize("seed", range(20))
def test_random_specs_laws(seed):
    rng = random.Random(seed)
    p = rng.choice([2, 3, 5])
    a = rng.randint(1, 2)
    m = rng.choice([l**c for l in (2, 3, 5, 7) if l != p for c in (1, 2)])
    spec = random_cover_spec(rng, p, a, m)
    pm = build_pm_genus0(spec)
    M = pm.module
    assert M.rank == len(spec.punctures) - 1
    assert linalg.mat_pow(M.sigma, p**a, M.modulus) == linalg.identity(M.rank)
    for k in range(M.rank):
        e = [int(i == k) for i in range(M.rank)]
        assert degree_zero(pm, e)
        assert M.act(e) == pulled_back(pm, e)
    for orbit in spec.orbits():
        W, cert = pm_inclusion(pm, orbit)
        assert cert.verified
        assert W.log_size == max(len(orbit) - 1, 0) * M.c


def test_fixed_part_is_orbit_sums():
    # fixed degree-zero divisors on orbits [3, 3, 1] over F_2: spanned by orbit indicator sums
    pm = synthetic_module(3, 1, [3, 3, 1], 2)
    fx = fixed_submodule(pm.module)
    assert fx.log_size == 2
