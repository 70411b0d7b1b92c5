"""Modules over Z/l^c with an action of the cyclic group G = Z/p^a.

A ``GModule`` is the free module (Z/l^c)^rank with the generator of G acting
by an invertible matrix ``sigma`` (on column vectors).  σ-stable subgroups are
``Submodule`` objects holding a Howell basis.  ``decompose`` works on both and
returns the multiplicities of the indecomposable summands Z/l^i (trivial
action) and Z[zeta_{p^b}]/Q_bj^i, where Q_bj is the prime matching the j-th
factor of Phi_{p^b} mod l.

Because l is unramified in Z[zeta_{p^b}], the Q_bj-adic filtration of a
component N_bj coincides with the l-adic one, so every graded dimension is an
F_l-dimension of l^i N / l^{i+1} N, i.e. a difference of span sizes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Sequence, Union

from . import linalg
from .cyclotomic import CycloFactorization, cyclo_factorization
from .modarith import ModulusError, Poly, check_prime
from .linalg import Basis


class InconsistencyError(AssertionError):
    """An internal invariant failed; indicates a bug rather than bad input."""


class SizeBoundError(RuntimeError):
    """An exhaustive computation was refused because the input is too large."""


@dataclass(frozen=True)
class GModule:
    p: int
    a: int
    l: int
    c: int
    sigma: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        check_prime(self.p, "p")
        check_prime(self.l, "l")
        if self.l == self.p:
            raise ValueError("l must differ from p")
        if self.a < 1 or self.c < 1:
            raise ValueError("a and c must be positive")
        N = self.l**self.c
        sig = tuple(tuple(int(x) % N for x in row) for row in self.sigma)
        if any(len(row) != len(sig) for row in sig):
            raise ValueError("sigma must be square")
        object.__setattr__(self, "sigma", sig)
        if linalg.mat_pow(sig, self.p**self.a, N) != linalg.identity(len(sig)):
            raise ValueError(f"sigma^{self.p ** self.a} is not the identity")

    @classmethod
    def from_matrix(cls, p, a, l, c, sigma: Sequence[Sequence[int]]) -> GModule:
        return cls(p, a, l, c, tuple(tuple(r) for r in sigma))

    @classmethod
    def trivial(cls, p, a, l, c, rank: int) -> GModule:
        return cls.from_matrix(p, a, l, c, linalg.identity(rank))

    @property
    def modulus(self) -> int:
        return self.l**self.c

    @property
    def rank(self) -> int:
        return len(self.sigma)

    @property
    def log_size(self) -> int:
        return self.rank * self.c

    @property
    def size(self) -> int:
        return self.l**self.log_size

    @property
    def factorization(self) -> CycloFactorization:
        return cyclo_factorization(self.p, self.a, self.l, self.c)

    def act(self, v: Sequence[int]) -> list[int]:
        return linalg.matvec(self.sigma, v, self.modulus)

    def poly_matrix(self, f: Poly) -> linalg.Matrix:
        if f.modulus != self.modulus:
            raise ModulusError(f"polynomial modulus {f.modulus} != {self.modulus}")
        return linalg.poly_at_matrix(f, self.sigma, self.modulus)

    @cached_property
    def idempotent_matrices(self) -> dict:
        """e(σ) for the fixed factor (key ``None``) and every (b, j)."""
        cf = self.factorization
        out = {None: self.poly_matrix(cf.fixed_idempotent)}
        for b, j in cf.indices():
            out[(b, j)] = self.poly_matrix(cf.idempotent(b, j))
        return out

    def whole(self) -> Submodule:
        return Submodule.span(self, linalg.identity(self.rank))

    def zero(self) -> Submodule:
        return Submodule(self, ())

    def conjugate(self, change: Sequence[Sequence[int]]) -> GModule:
        """The same module written in the basis given by ``change``."""
        N = self.modulus
        inv = linalg.mat_inverse(change, N)
        s = linalg.matmul(linalg.matmul(inv, self.sigma, N), change, N)
        return GModule.from_matrix(self.p, self.a, self.l, self.c, s)


@dataclass(frozen=True)
class Submodule:
    parent: GModule
    basis: Basis = field(compare=True)

    @classmethod
    def span(cls, parent: GModule, rows) -> Submodule:
        return cls(parent, linalg.howell_form([list(r) for r in rows], parent.l, parent.c, parent.rank))

    @cached_property
    def log_size(self) -> int:
        return linalg.log_size(self.basis, self.parent.l, self.parent.c)

    @property
    def size(self) -> int:
        return self.parent.l**self.log_size

    @cached_property
    def _pivot_cols(self) -> list[int]:
        return [j for j, _ in linalg.pivots(self.basis)]

    def contains(self, v: Sequence[int]) -> bool:
        return linalg.in_span(v, self.basis, self.parent.l, self.parent.c, self._pivot_cols)

    def is_sigma_stable(self) -> bool:
        return all(self.contains(self.parent.act(row)) for row in self.basis)

    def __le__(self, other: Submodule) -> bool:
        return all(other.contains(r) for r in self.basis)

    def __add__(self, other: Submodule) -> Submodule:
        M = self.parent
        return Submodule(M, linalg.span_sum(self.basis, other.basis, M.l, M.c, M.rank))

    def __and__(self, other: Submodule) -> Submodule:
        M = self.parent
        return Submodule(M, linalg.span_intersection(self.basis, other.basis, M.l, M.c, M.rank))

    def scaled(self, k: int) -> Submodule:
        M = self.parent
        return Submodule(M, linalg.scale_span(self.basis, k, M.l, M.c, M.rank))

    def image(self, f: Poly) -> Submodule:
        """f(σ) applied to this submodule."""
        M = self.parent
        rows = linalg.apply_poly_to_rows(f, M.sigma, [list(r) for r in self.basis], M.modulus)
        return Submodule.span(M, rows)

    def image_under(self, mat) -> Submodule:
        M = self.parent
        if not self.basis:
            return self
        rows = linalg.matmul(self.basis, linalg.transpose(mat), M.modulus)
        return Submodule.span(M, rows)


ModuleLike = Union[GModule, Submodule]


def _as_submodule(X: ModuleLike) -> Submodule:
    return X.whole() if isinstance(X, GModule) else X


def kernel_of_poly(M: GModule, f: Poly) -> Submodule:
    """``{v : f(σ) v = 0}`` as a canonical submodule."""
    return Submodule(M, linalg.kernel(M.poly_matrix(f), M.l, M.c, M.rank))


def fixed_submodule(M: GModule) -> Submodule:
    return kernel_of_poly(M, Poly([-1, 1], M.modulus))


def fixed_part(X: ModuleLike) -> Submodule:
    """X^G, computed as the image of the idempotent of the factor x - 1."""
    X = _as_submodule(X)
    return X.image_under(X.parent.idempotent_matrices[None])


def component_span(X: ModuleLike, b: int, j: int) -> Submodule:
    """The (b, j) component e_bj(σ)·X, inside the ambient module."""
    X = _as_submodule(X)
    cf = X.parent.factorization
    if (b, j) not in cf.indices():
        raise IndexError(f"no factor (b={b}, j={j}) for p={cf.p}, a={cf.a}, l={cf.l}")
    return X.image_under(X.parent.idempotent_matrices[(b, j)])


def free_submodule_as_gmodule(W: Submodule) -> GModule:
    """Rewrite a σ-stable submodule that is free over Z/l^c as a GModule."""
    M = W.parent
    N = M.modulus
    rows = [list(r) for r in W.basis]
    chosen, cols = linalg.independent_rows_mod_l(rows, M.l)
    if len(chosen) * M.c != W.log_size:
        raise ValueError("submodule is not free over Z/l^c")
    if not chosen:
        return GModule.from_matrix(M.p, M.a, M.l, M.c, [])
    # reduced pivots mod l pick an invertible minor; rebuild the basis on it
    free = [rows[i] for i in chosen]
    images = [M.act(w) for w in free]
    coords = linalg.solve_in_free_basis(free, cols, images, N)
    return GModule.from_matrix(M.p, M.a, M.l, M.c, linalg.transpose(coords))


def component(M: GModule, b: int, j: int) -> GModule:
    """The Q_bj-component N_bj of ``M`` as a GModule of its own."""
    return free_submodule_as_gmodule(component_span(M, b, j))


def _filtration_logs(W: Submodule) -> list[int]:
    """log_l |l^i W| for i = 0..c."""
    M = W.parent
    out, cur = [], W
    for _ in range(M.c + 1):
        out.append(cur.log_size)
        cur = cur.scaled(M.l)
    return out


@dataclass(frozen=True)
class GradedDims:
    """f'_i (i = 0..c) and f_{b,i,j} stored as ``f[(b, j)][i]``."""

    f_prime: tuple[int, ...]
    f: dict

    def as_table(self) -> dict:
        return {"fPrime": list(self.f_prime),
                "f": {f"{b},{j}": list(v) for (b, j), v in sorted(self.f.items())}}


def graded_dims(X: ModuleLike) -> GradedDims:
    X = _as_submodule(X)
    M = X.parent
    cf = M.factorization
    logs = _filtration_logs(fixed_part(X))
    f_prime = tuple(logs[i] - logs[i + 1] for i in range(M.c)) + (0,)
    f = {}
    for b, j in cf.indices():
        d = cf.d[b - 1]
        logs = _filtration_logs(component_span(X, b, j))
        row = []
        for i in range(M.c):
            raw = logs[i] - logs[i + 1]
            if raw % d:
                raise InconsistencyError(f"raw dimension {raw} not divisible by d_{b} = {d}")
            row.append(raw // d)
        f[(b, j)] = tuple(row) + (0,)
    return GradedDims(f_prime, f)


@dataclass(frozen=True)
class Decomposition:
    """Summand multiplicities.

    ``trivial_part[i]`` counts Z/l^i with trivial action (i = 1..c);
    ``components[(b, j, i)]`` counts Z[zeta_{p^b}]/Q_bj^i.  Zero entries are
    kept so every table has the same shape for a given (p, a, l, c).
    """

    p: int
    a: int
    l: int
    c: int
    d: tuple[int, ...]
    trivial_part: dict
    components: dict
    graded: GradedDims

    def signature(self) -> tuple:
        """Hashable isomorphism-type key (nonzero entries only)."""
        return (tuple(sorted((i, m) for i, m in self.trivial_part.items() if m)),
                tuple(sorted((k, m) for k, m in self.components.items() if m)))

    def log_size(self) -> int:
        total = sum(i * m for i, m in self.trivial_part.items())
        total += sum(i * self.d[b - 1] * m for (b, _, i), m in self.components.items())
        return total

    def group_exponents(self) -> dict:
        """Number of Z/l^i factors of the underlying abelian group."""
        out = {i: self.trivial_part.get(i, 0) for i in range(1, self.c + 1)}
        for (b, _, i), m in self.components.items():
            out[i] += self.d[b - 1] * m
        return out

    def per_level(self) -> dict:
        """Σ_j components[(b, j, i)] keyed by (b, i)."""
        out = {(b, i): 0 for b in range(1, self.a + 1) for i in range(1, self.c + 1)}
        for (b, _, i), m in self.components.items():
            out[(b, i)] += m
        return out

    def to_json(self) -> dict:
        return {
            "trivialPart": {str(i): m for i, m in sorted(self.trivial_part.items())},
            "components": [{"b": b, "j": j, "i": i, "multiplicity": m}
                           for (b, j, i), m in sorted(self.components.items())],
            **self.graded.as_table(),
        }


def decompose(X: ModuleLike) -> Decomposition:
    X = _as_submodule(X)
    M = X.parent
    cf = M.factorization
    g = graded_dims(X)
    trivial = {i: g.f_prime[i - 1] - g.f_prime[i] for i in range(1, M.c + 1)}
    comps = {}
    for (b, j), row in g.f.items():
        for i in range(1, M.c + 1):
            comps[(b, j, i)] = row[i - 1] - row[i]
    if any(v < 0 for v in trivial.values()) or any(v < 0 for v in comps.values()):
        raise InconsistencyError("negative multiplicity")
    dec = Decomposition(M.p, M.a, M.l, M.c, cf.d, trivial, comps, g)
    if dec.log_size() != X.log_size:
        raise InconsistencyError(f"summands have log-size {dec.log_size()}, module has {X.log_size}")
    return dec


# -- type T1 -----------------------------------------------------------------

def _generated_subgroup(gens, moduli) -> frozenset:
    zero = tuple(0 for _ in moduli)
    elems = {zero}
    for g in gens:
        if g in elems:
            continue
        multiples = [zero]
        cur = tuple(x % m for x, m in zip(g, moduli))
        while cur != zero:
            multiples.append(cur)
            cur = tuple((x + y) % m for x, y, m in zip(cur, g, moduli))
        elems = {tuple((x + y) % m for x, y, m in zip(s, k, moduli)) for s in elems for k in multiples}
    return frozenset(elems)


def is_type_t1(elements, invariant_factors: Sequence[int], size_bound: int = 2**16) -> bool:
    """Whether subgroups generated by disjoint parts of ``elements`` meet trivially.

    The ambient group is Z/n_1 x ... x Z/n_k.  Repeated elements count once.
    Only splittings of the whole set into two parts are tested: enlarging
    either part can only enlarge the intersection.
    """
    moduli = [int(n) for n in invariant_factors]
    if any(n < 1 for n in moduli):
        raise ValueError("invariant factors must be positive")
    order = 1
    for n in moduli:
        order *= n
    if order > size_bound:
        raise SizeBoundError(f"ambient group of order {order} exceeds bound {size_bound}")
    elems = []
    for e in elements:
        if len(e) != len(moduli):
            raise ValueError(f"element {e} does not match invariant factors {moduli}")
        t = tuple(int(x) % m for x, m in zip(e, moduli))
        if t not in elems:
            elems.append(t)
    if len(elems) < 2:
        return True
    zero = tuple(0 for _ in moduli)
    first, rest = elems[0], elems[1:]
    for mask in product((0, 1), repeat=len(rest)):
        side_a = [first] + [e for e, bit in zip(rest, mask) if bit == 0]
        side_b = [e for e, bit in zip(rest, mask) if bit == 1]
        if not side_b:
            continue
        common = _generated_subgroup(side_a, moduli) & _generated_subgroup(side_b, moduli)
        if common != {zero}:
            return False
    return True
