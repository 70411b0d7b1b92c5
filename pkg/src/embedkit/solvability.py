"""Solvability criteria and solution counts for prime-to-p embedding problems.

The dictionary underneath everything here: for a kernel H of order prime
to p, solutions with a given action of G on H correspond one-to-one to
G-submodules of P_m isomorphic to H, and since gcd(|H|, |G|) = 1 the only
extension of G by H with that action is the semidirect product.  So each
question below is a question about submodules of a GModule.

* ``solvable_field``       H = (Z/l)^n, exact (if and only if).
* ``solvable_squarefree``  H = (Z/m)^n, m square-free: one field test per prime.
* ``solvable_prime_power`` H = ⊕ (Z/l^i)^{e_i}: sufficient condition only, so a
  failed search reports ``unknown`` and never ``no``.
* ``count_nsext``          number of submodules with a prescribed action (c = 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Mapping, Sequence

from sympy import factorint

from .cyclotomic import cyclotomic_poly
from .gmodule import GModule, GradedDims, InconsistencyError, fixed_submodule, kernel_of_poly
from .modarith import check_prime, multiplicative_order

YES, NO, UNKNOWN = "yes", "no", "sufficient-only-unknown"

FIELD_CRITERION = "field-criterion"
SQUAREFREE_CRITERION = "squarefree-criterion"
PRIME_POWER_SUFFICIENT = "prime-power-sufficient"


@dataclass(frozen=True)
class FieldInvariants:
    """n_0, n_b and (optionally) the multiplicities gamma[b-1][i-1] of a c = 1 module."""

    p: int
    a: int
    l: int
    n0: int
    nb: tuple[int, ...]
    gamma: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        if len(self.nb) != self.a:
            raise ValueError(f"expected {self.a} values of n_b, got {len(self.nb)}")
        if self.n0 < 0 or any(x < 0 for x in self.nb):
            raise ValueError("dimensions must be non-negative")

    @property
    def d(self) -> tuple[int, ...]:
        return tuple(multiplicative_order(self.l, self.p, b) for b in range(1, self.a + 1))

    def to_json(self) -> dict:
        out = {"p": self.p, "a": self.a, "l": self.l, "n0": self.n0, "nb": list(self.nb),
               "d": list(self.d)}
        if self.gamma is not None:
            out["gamma"] = [list(g) for g in self.gamma]
        return out


@dataclass(frozen=True)
class ActionData:
    """Requested summand multiplicities pinning down the action on H.

    Same keys as ``Decomposition``: ``trivial`` maps i to the number of
    Z/l^i with trivial action, ``components`` maps (b, j, i) to the number
    of Z[zeta_{p^b}]/Q_bj^i.
    """

    trivial: tuple[tuple[int, int], ...] = ()
    components: tuple[tuple[tuple[int, int, int], int], ...] = ()

    @classmethod
    def make(cls, trivial: Mapping[int, int] | None = None,
             components: Mapping[tuple[int, int, int], int] | None = None) -> ActionData:
        t = tuple(sorted((int(i), int(m)) for i, m in (trivial or {}).items() if m))
        cs = tuple(sorted((tuple(int(x) for x in k), int(m)) for k, m in (components or {}).items() if m))
        if any(m < 0 for _, m in t) or any(m < 0 for _, m in cs):
            raise ValueError("multiplicities must be non-negative")
        return cls(t, cs)

    @classmethod
    def field(cls, u: int, gamma_prime: Sequence[Sequence[int]]) -> ActionData:
        """c = 1 data: u trivial lines and gamma_prime[b-1][j-1] copies of F_l[x]/P_bj."""
        comps = {(b, j, 1): g for b, row in enumerate(gamma_prime, start=1)
                 for j, g in enumerate(row, start=1)}
        return cls.make({1: u}, comps)

    def signature(self) -> tuple:
        return self.trivial, self.components


@dataclass(frozen=True)
class HShape:
    """Isomorphism type requested for the kernel H.

    ``kind`` is ``"field"`` (H = (Z/l)^n), ``"prime-power"``
    (H = ⊕ (Z/l^i)^{e_i}, ``exponents[i-1] = e_i``) or ``"squarefree"``
    (H = (Z/m)^n).
    """

    kind: str
    l: int = 0
    c: int = 1
    n: int = 0
    m: int = 0
    exponents: tuple[int, ...] = ()
    action: ActionData | None = None

    def __post_init__(self):
        if self.kind not in ("field", "prime-power", "squarefree"):
            raise ValueError(f"unknown shape kind {self.kind!r}")
        if self.n < 0 or any(e < 0 for e in self.exponents):
            raise ValueError("multiplicities must be non-negative")
        if self.kind == "squarefree":
            if self.m < 2 or any(e > 1 for e in factorint(self.m).values()):
                raise ValueError(f"m = {self.m} is not square-free")

    @classmethod
    def field_shape(cls, l: int, n: int, action: ActionData | None = None) -> HShape:
        return cls("field", l=l, c=1, n=n, exponents=(n,), action=action)

    @classmethod
    def prime_power(cls, l: int, exponents: Sequence[int], action: ActionData | None = None) -> HShape:
        return cls("prime-power", l=l, c=len(exponents), exponents=tuple(exponents), action=action)

    @classmethod
    def squarefree(cls, m: int, n: int) -> HShape:
        return cls("squarefree", m=m, n=n)

    def group_exponents(self) -> dict[int, int]:
        """Number of Z/l^i factors of H, for i = 1..c."""
        if self.kind == "squarefree":
            raise ValueError("a square-free shape spans several primes")
        return {i: e for i, e in enumerate(self.exponents, start=1)}


def invariants_of(M: GModule) -> FieldInvariants:
    if M.c != 1:
        raise ValueError("invariants_of needs c = 1; use graded_dims for c > 1")
    cf = M.factorization
    n0 = fixed_submodule(M).log_size
    nb, gamma = [], []
    for b in range(1, M.a + 1):
        d = cf.d[b - 1]
        n = kernel_of_poly(M, cyclotomic_poly(M.p, b).with_modulus(M.l)).log_size
        g = []
        for P in cf.factors_mod_l[b - 1]:
            dim = kernel_of_poly(M, P).log_size
            if dim % d:
                raise InconsistencyError(f"kernel dimension {dim} not divisible by d_{b} = {d}")
            g.append(dim // d)
        if sum(g) * d != n:
            raise InconsistencyError(f"n_{b} = {n} but factor kernels give {sum(g) * d}")
        nb.append(n)
        gamma.append(tuple(g))
    return FieldInvariants(M.p, M.a, M.l, n0, tuple(nb), tuple(gamma))


def bounded_representation(n: int, terms: Sequence[tuple[int, int]]) -> tuple[int, ...] | None:
    """Lexicographically least ``x`` with ``sum(w * x_k) == n`` and ``0 <= x_k <= bound_k``.

    ``terms`` lists ``(weight, bound)`` pairs.  Returns ``None`` if no
    representation exists.
    """
    if n < 0:
        return None
    # reach[k]: sums attainable with terms[k:]
    reach = [set() for _ in range(len(terms) + 1)]
    reach[-1] = {0}
    for k in range(len(terms) - 1, -1, -1):
        w, bound = terms[k]
        reach[k] = {s + w * x for s in reach[k + 1] for x in range(bound + 1) if s + w * x <= n}
    if n not in reach[0]:
        return None
    out, rest = [], n
    for k, (w, bound) in enumerate(terms):
        for x in range(bound + 1):
            if rest - w * x in reach[k + 1]:
                out.append(x)
                rest -= w * x
                break
    return tuple(out)


@dataclass(frozen=True)
class SolvabilityReport:
    verdict: str
    theorem: str
    witness: dict | None
    bounds: dict

    @property
    def solvable(self) -> bool:
        return self.verdict == YES

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "theorem": self.theorem,
               "witness": self.witness, "bounds": self.bounds}
        if self.verdict == UNKNOWN:
            out["note"] = ("the prime-power criterion is only sufficient; a failed search "
                           "does not show that the problem is unsolvable")
        return out


def solvable_field(n: int, inv: FieldInvariants) -> SolvabilityReport:
    """Is n = u + Σ v_b d_b with u <= n_0 and v_b <= n_b / d_b?"""
    if n < 0:
        raise ValueError("n must be non-negative")
    d = inv.d
    terms = [(1, inv.n0)] + [(d[b], inv.nb[b] // d[b]) for b in range(inv.a)]
    bounds = {"n0": inv.n0, "nbOverDb": [t[1] for t in terms[1:]], "d": list(d)}
    rep = bounded_representation(n, terms)
    if rep is None:
        return SolvabilityReport(NO, FIELD_CRITERION, None, bounds)
    return SolvabilityReport(YES, FIELD_CRITERION, {"u": rep[0], "v": list(rep[1:])}, bounds)


def solvable_squarefree(n: int, per_prime: Mapping[int, FieldInvariants], p: int) -> SolvabilityReport:
    """H = (Z/m)^n with m the product of the keys of ``per_prime``."""
    check_prime(p, "p")
    if not per_prime:
        raise ValueError("need invariants for at least one prime")
    for l, inv in per_prime.items():
        check_prime(l, "prime divisor of m")
        if l == p:
            raise ValueError("m must be prime to p")
        if inv.l != l or inv.p != p:
            raise ValueError(f"invariants for l = {l} describe l = {inv.l}, p = {inv.p}")
    m = prod(per_prime)
    reports = {l: solvable_field(n, inv) for l, inv in sorted(per_prime.items())}
    verdict = YES if all(r.solvable for r in reports.values()) else NO
    witness = {str(l): r.witness for l, r in reports.items()} if verdict == YES else None
    bounds = {"m": m, "perPrime": {str(l): dict(r.bounds, verdict=r.verdict) for l, r in reports.items()}}
    return SolvabilityReport(verdict, SQUAREFREE_CRITERION, witness, bounds)


def solvable_prime_power(exponents: Sequence[int], graded: GradedDims, d: Sequence[int]) -> SolvabilityReport:
    """Sufficient test for H = ⊕_{i=1..c} (Z/l^i)^{e_i}.

    ``exponents[i-1]`` is e_i.  Each level i is searched separately: e_i must
    equal e'_i + Σ_b d_b e''_{bi} with e'_i bounded by the trivial summands of
    exponent exactly l^i and e''_{bi} by the level-b summands of that exponent.
    """
    c = len(graded.f_prime) - 1
    a = len(d)
    if len(exponents) != c:
        raise ValueError(f"expected {c} exponents e_1..e_c, got {len(exponents)}")
    if any(e < 0 for e in exponents):
        raise ValueError("exponents must be non-negative")
    per_level = []
    witness = {"ePrime": [], "eDoublePrime": []}
    ok = True
    for i in range(1, c + 1):
        triv = graded.f_prime[i - 1] - graded.f_prime[i]
        comp = [sum(row[i - 1] - row[i] for (bb, _), row in graded.f.items() if bb == b)
                for b in range(1, a + 1)]
        per_level.append({"i": i, "trivial": triv, "perB": comp})
        rep = bounded_representation(exponents[i - 1], [(1, triv)] + list(zip(d, comp)))
        if rep is None:
            ok = False
            continue
        witness["ePrime"].append(rep[0])
        witness["eDoublePrime"].append(list(rep[1:]))
    bounds = {"levels": per_level, "d": list(d)}
    if not ok:
        return SolvabilityReport(UNKNOWN, PRIME_POWER_SUFFICIENT, None, bounds)
    return SolvabilityReport(YES, PRIME_POWER_SUFFICIENT, witness, bounds)


# -- counting -------------------------------------------------------------------

def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n."""
    if k < 0 or k > n:
        return 0
    num = prod(q**n - q**r for r in range(k))
    den = prod(q**k - q**r for r in range(k))
    return num // den


def _partial_geometric_product(top: int, length: int, q: int) -> int:
    """prod_{r=0}^{length-1} sum_{s=r}^{top-1} q^s (empty sums are 0)."""
    return prod(sum(q**s for s in range(r, top)) for r in range(length))


@dataclass(frozen=True)
class SubmoduleCount:
    value: int
    factors: tuple[dict, ...]
    violations: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "count": str(self.value),
            "factors": [{k: (str(v) if isinstance(v, int) and k in ("numerator", "denominator", "ratio") else v)
                         for k, v in f.items()} for f in self.factors],
            "violations": list(self.violations),
        }


def _ratio(top: int, length: int, q: int, label: dict) -> dict:
    num = _partial_geometric_product(top, length, q)
    den = _partial_geometric_product(length, length, q)
    if num % den:
        raise InconsistencyError(f"non-integral ratio {num}/{den} for {label}")
    ratio = num // den
    if ratio != gaussian_binomial(top, length, q):
        raise InconsistencyError(f"ratio {ratio} disagrees with Gaussian binomial for {label}")
    return dict(label, q=q, numerator=num, denominator=den, ratio=ratio)


def count_nsext(gamma: Sequence[Sequence[int]], gamma_prime: Sequence[Sequence[int]],
                n0: int, u: int, l: int, d: Sequence[int]) -> SubmoduleCount:
    """Number of G-submodules of a c = 1 module with the requested action.

    ``gamma[b-1][i-1]`` is the multiplicity of F_l[x]/P_bi in the ambient
    module, ``gamma_prime`` the requested one, ``n0``/``u`` the dimensions of
    the fixed parts, ``d[b-1] = d_b``.  Requests exceeding the ambient
    multiplicities give 0, with the violations listed.
    """
    check_prime(l, "l")
    if len(gamma) != len(d) or len(gamma_prime) != len(d):
        raise ValueError("gamma, gamma_prime and d must have one entry per b")
    if min([n0, u] + [x for g in gamma for x in g] + [x for g in gamma_prime for x in g], default=0) < 0:
        raise ValueError("multiplicities must be non-negative")
    factors, violations = [], []
    for b, (gs, gps, db) in enumerate(zip(gamma, gamma_prime, d), start=1):
        if len(gs) != len(gps):
            raise ValueError(f"gamma and gamma_prime differ in length at b = {b}")
        for i, (g, gp) in enumerate(zip(gs, gps), start=1):
            if gp > g:
                violations.append(f"gamma'[{b},{i}] = {gp} exceeds gamma[{b},{i}] = {g}")
            factors.append(_ratio(g, gp, l**db, {"b": b, "i": i, "gamma": g, "gammaPrime": gp}))
    if u > n0:
        violations.append(f"u = {u} exceeds n0 = {n0}")
    factors.append(_ratio(n0, u, l, {"fixed": True, "n0": n0, "u": u}))
    value = prod(f["ratio"] for f in factors)
    return SubmoduleCount(value, tuple(factors), tuple(violations))


def count_for_module(M: GModule, u: int, gamma_prime: Sequence[Sequence[int]]) -> SubmoduleCount:
    inv = invariants_of(M)
    return count_nsext(inv.gamma, gamma_prime, inv.n0, u, M.l, inv.d)
