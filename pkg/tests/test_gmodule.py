import math
import random
from itertools import product

import pytest

from embedkit import linalg
from embedkit.gmodule import (
    GModule, SizeBoundError, component, component_span, decompose, fixed_part,
    fixed_submodule, graded_dims, is_type_t1, kernel_of_poly,
)
from embedkit.modarith import ModulusError, Poly
from embedkit.pm_builder import artin_schreier_example, synthetic_module

SHIFT3 = [[0, 0, 1], [1, 0, 0], [0, 1, 0]]


def shift(n):
    return [[int(i == (j + 1) % n) for j in range(n)] for i in range(n)]


def random_invertible(rng, n, N, l):
    while True:
        a = [[rng.randrange(N) for _ in range(n)] for _ in range(n)]
        if len(linalg.howell_form(a, l, 1)) == n:
            return a


def torsion_profile(elements, l, c):
    """Multiplicity of Z/l^i in a finite abelian l-group, from l^i-torsion counts."""
    N = l**c
    k = [0]
    for i in range(1, c + 2):
        li = l**i
        count = sum(1 for v in elements if all(li * x % N == 0 for x in v))
        k.append(round(math.log(count, l)))
    return {i: (k[i] - k[i - 1]) - (k[i + 1] - k[i]) for i in range(1, c + 1)}


def brute_decompose(M):
    """Decomposition of a small GModule by enumerating kernels of lifted factors."""
    N = M.modulus
    cf = M.factorization
    vecs = list(product(range(N), repeat=M.rank))

    def kernel_elems(f):
        mat = M.poly_matrix(f)
        return [v for v in vecs if not any(linalg.matvec(mat, v, N))]

    trivial = torsion_profile(kernel_elems(Poly([-1, 1], N)), M.l, M.c)
    comps = {}
    for b, j in cf.indices():
        prof = torsion_profile(kernel_elems(cf.lifted(b, j)), M.l, M.c)
        for i, m in prof.items():
            assert m % cf.d[b - 1] == 0
            comps[(b, j, i)] = m // cf.d[b - 1]
    return trivial, comps


# -- kernels and fixed parts ---------------------------------------------------

def test_kernel_examples_f2_shift():
    M = GModule.from_matrix(3, 1, 2, 1, SHIFT3)
    k = kernel_of_poly(M, Poly([-1, 1], 2))
    assert k.basis == ((1, 1, 1),)
    assert kernel_of_poly(M, Poly([1], 2)).basis == ()
    k2 = kernel_of_poly(M, Poly([1, 1, 1], 2))
    assert k2.log_size == 2
    assert all(sum(r) % 2 == 0 for r in k2.basis)
    with pytest.raises(ModulusError):
        kernel_of_poly(M, Poly([1, 1], 4))


def test_fixed_submodule_examples():
    M = GModule.trivial(3, 1, 2, 2, 3)
    assert fixed_submodule(M) == M.whole()
    pm = artin_schreier_example(3, 2)
    fx = fixed_submodule(pm.module)
    assert fx.log_size == 1
    assert fx.contains([1, 1, 1])
    assert pm.ambient_vector([1, 1, 1]) == {"0": 1, "1": 1, "2": 1, "inf": 1}
    Z4 = GModule.from_matrix(3, 1, 2, 2, SHIFT3)
    f4 = fixed_submodule(Z4)
    assert f4.basis == ((1, 1, 1),) and f4.log_size == 2


@pytest.mark.parametrize("M", [
    GModule.from_matrix(3, 1, 2, 2, SHIFT3),
    GModule.from_matrix(3, 1, 7, 2, SHIFT3),
    synthetic_module(3, 2, [9, 3], 2).module,
    synthetic_module(2, 2, [4, 2, 1], 9).module,
])
def test_fixed_part_two_routes_agree(M):
    # kernel of sigma - 1 versus image of the x - 1 idempotent
    assert fixed_submodule(M) == fixed_part(M)


def test_kernel_is_sigma_stable():
    M = synthetic_module(3, 2, [9, 3, 1], 2).module
    for b in (1, 2):
        for f in M.factorization.factors_mod_l[b - 1]:
            assert kernel_of_poly(M, f).is_sigma_stable()


# -- components -----------------------------------------------------------------

def test_component_z4_shift():
    M = GModule.from_matrix(3, 1, 2, 2, SHIFT3)
    N = component(M, 1, 1)
    assert N.size == 16 and N.rank == 2
    phi = M.factorization.lifted(1, 1)
    assert linalg.poly_at_matrix(phi, N.sigma, 4) == linalg.zeros(2, 2)
    span = component_span(M, 1, 1)
    assert span.log_size == 4 and span.is_sigma_stable()
    with pytest.raises(IndexError):
        component(M, 1, 2)


def test_component_trivial_action_is_zero():
    M = GModule.trivial(5, 1, 2, 1, 4)
    for b, j in M.factorization.indices():
        assert component(M, b, j).rank == 0


def test_component_sizes_regular_f2():
    M = GModule.from_matrix(3, 1, 2, 1, SHIFT3)
    assert fixed_part(M).size == 2
    assert component_span(M, 1, 1).size == 4


def test_components_plus_fixed_recover_module():
    M = synthetic_module(7, 1, [7, 1, 1], 4).module
    total = fixed_part(M)
    logs = total.log_size
    for b, j in M.factorization.indices():
        C = component_span(M, b, j)
        logs += C.log_size
        total = total + C
    assert total == M.whole() and logs == M.log_size


# -- graded dimensions and decomposition ------------------------------------------

def test_graded_dims_examples():
    M = GModule.from_matrix(3, 1, 2, 2, SHIFT3)
    g = graded_dims(M)
    assert g.f_prime == (1, 1, 0)
    assert g.f[(1, 1)] == (1, 1, 0)
    Z = GModule.trivial(3, 1, 2, 2, 0)
    gz = graded_dims(Z)
    assert gz.f_prime == (0, 0, 0) and all(v == (0, 0, 0) for v in gz.f.values())
    AS = artin_schreier_example(3, 2).module
    ga = graded_dims(AS)
    assert ga.f_prime == (1, 0) and ga.f[(1, 1)] == (1, 0)


def test_decompose_examples():
    d = decompose(GModule.from_matrix(3, 1, 2, 2, SHIFT3))
    assert d.trivial_part == {1: 0, 2: 1}
    assert d.components == {(1, 1, 1): 0, (1, 1, 2): 1}
    assert 4 * 16 == 64 == 2 ** d.log_size()
    d = decompose(artin_schreier_example(3, 2).module)
    assert d.trivial_part == {1: 1} and d.components == {(1, 1, 1): 1}
    d = decompose(GModule.trivial(5, 2, 3, 3, 4))
    assert d.trivial_part == {1: 0, 2: 0, 3: 4}
    assert not any(d.components.values())


def test_decompose_non_free_submodule():
    M = GModule.from_matrix(3, 1, 2, 2, SHIFT3)
    W = M.whole().scaled(2)
    d = decompose(W)
    assert d.trivial_part == {1: 1, 2: 0}
    assert d.components[(1, 1, 1)] == 1 and d.components[(1, 1, 2)] == 0
    assert d.log_size() == W.log_size == 3


@pytest.mark.parametrize("M", [
    GModule.from_matrix(3, 1, 2, 2, SHIFT3),
    GModule.from_matrix(3, 1, 7, 2, SHIFT3),
    GModule.from_matrix(5, 1, 2, 2, shift(5)),
    GModule.from_matrix(2, 2, 3, 2, shift(4)),
    synthetic_module(3, 1, [3, 1], 8).module,
    synthetic_module(2, 1, [2, 2], 9).module,
])
def test_decompose_matches_brute_force(M):
    trivial, comps = brute_decompose(M)
    d = decompose(M)
    assert d.trivial_part == trivial
    assert d.components == comps


def test_decompose_invariant_under_basis_change():
    rng = random.Random(7)
    M = synthetic_module(3, 2, [9, 3, 1], 4).module
    ref = decompose(M).signature()
    for _ in range(5):
        P = random_invertible(rng, M.rank, M.modulus, M.l)
        assert decompose(M.conjugate(P)).signature() == ref


def test_semisimple_dimension_count():
    for M in (synthetic_module(7, 1, [7, 7, 1], 2).module, synthetic_module(5, 1, [5, 1, 1], 3).module):
        d = decompose(M)
        assert d.trivial_part[1] + sum(M.factorization.d[b - 1] * m
                                       for (b, _, _), m in d.components.items()) == M.rank


def test_graded_monotone():
    M = synthetic_module(2, 2, [4, 2, 1], 27).module
    g = graded_dims(M.whole().scaled(3) + M.whole().image(Poly([0, 9], 27)))
    assert list(g.f_prime) == sorted(g.f_prime, reverse=True)
    for row in g.f.values():
        assert list(row) == sorted(row, reverse=True)


def test_gmodule_validation():
    with pytest.raises(ValueError):
        GModule.from_matrix(3, 1, 2, 1, [[1, 1], [0, 1]])   # sigma^3 != 1
    with pytest.raises(ValueError):
        GModule.from_matrix(3, 1, 3, 1, [[1]])
    with pytest.raises(ValueError):
        GModule.from_matrix(3, 1, 2, 1, [[1, 0]])


def test_submodule_lattice_ops():
    M = GModule.from_matrix(3, 1, 2, 2, SHIFT3)
    A = fixed_submodule(M)
    B = component_span(M, 1, 1)
    assert (A & B) == M.zero()
    assert (A + B) == M.whole()
    assert A <= M.whole() and not (M.whole() <= A)


# -- type T1 --------------------------------------------------------------------

def test_t1_examples():
    assert is_type_t1([(1, 0), (0, 1)], [2, 2])
    assert not is_type_t1([(1,), (3,)], [4])
    assert not is_type_t1([(1, 0), (1, 1), (0, 1)], [2, 2])
    assert is_type_t1([(2, 0), (0, 3)], [4, 9])
    with pytest.raises(SizeBoundError):
        is_type_t1([(1,)], [2**20], size_bound=2**16)
    with pytest.raises(ValueError):
        is_type_t1([(1, 0)], [4])
