"""Concrete P_m modules for genus-0 covers and formal G-sets.

For V = P^1 minus a finite puncture set S_V we have Pic(P^1) = Z, so a pair
([L], D) with L^m = O(-D) exists exactly when deg D is divisible by m, and
then [L] is determined by D.  Dividing out by the pairs (O(-D), mD) leaves

    P_m(P^1 \\ S_V)  =  ker(deg : (Z/m)[S_V] -> Z/m),

a free Z/m-module of rank |S_V| - 1 on which G acts by pulling back
divisors: (σ^* D)(s) = D(σ(s)).  Coordinates use the basis s_i - s_0, where
s_0 is the least puncture label (labels are compared as strings) and the
remaining labels follow in sorted order.
"""

from __future__ import annotations

import random
from math import lcm
from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

from . import linalg
from .gmodule import GModule, Submodule
from .modarith import check_prime, prime_power


class NotStableError(ValueError):
    """A puncture subset is not closed under the group action."""


def _order_of_permutation(perm: Mapping) -> int:
    seen, order = set(), 1
    for start in perm:
        if start in seen:
            continue
        n, cur = 0, start
        while True:
            seen.add(cur)
            cur = perm[cur]
            n += 1
            if cur == start:
                break
        order = lcm(order, n)
    return order


@dataclass(frozen=True)
class PuncturedCoverSpec:
    """A G = Z/p^a cover of P^1 seen through its puncture set.

    ``permutation`` maps each puncture to its image under the generator σ.
    """

    p: int
    a: int
    m: int
    punctures: tuple[str, ...]
    permutation: tuple[tuple[str, str], ...]
    genus: int = 0

    def __post_init__(self):
        check_prime(self.p, "p")
        if self.a < 1:
            raise ValueError("a must be positive")
        if self.genus != 0:
            raise ValueError("only genus 0 is constructed; pass sigma matrices for positive genus")
        if self.m < 2 or self.m % self.p == 0:
            raise ValueError(f"m = {self.m} must be at least 2 and prime to p = {self.p}")
        labels = tuple(sorted(str(s) for s in self.punctures))
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate puncture labels")
        if not labels:
            raise ValueError("the puncture set must be nonempty")
        perm = {str(k): str(v) for k, v in self.permutation}
        for s in labels:
            perm.setdefault(s, s)
        if set(perm) != set(labels) or sorted(perm.values()) != list(labels):
            raise ValueError("permutation must be a bijection of the puncture set")
        if (self.p**self.a) % _order_of_permutation(perm):
            raise ValueError(f"permutation order does not divide {self.p ** self.a}")
        object.__setattr__(self, "punctures", labels)
        object.__setattr__(self, "permutation", tuple(sorted(perm.items())))

    @classmethod
    def make(cls, p: int, a: int, m: int, punctures: Sequence[Hashable],
             permutation: Mapping | None = None) -> PuncturedCoverSpec:
        perm = tuple((str(k), str(v)) for k, v in (permutation or {}).items())
        return cls(p, a, m, tuple(str(s) for s in punctures), perm)

    @property
    def perm(self) -> dict[str, str]:
        return dict(self.permutation)

    def orbits(self) -> list[tuple[str, ...]]:
        perm, seen, out = self.perm, set(), []
        for s in self.punctures:
            if s in seen:
                continue
            orbit, cur = [], s
            while cur not in seen:
                seen.add(cur)
                orbit.append(cur)
                cur = perm[cur]
            out.append(tuple(orbit))
        return out


@dataclass(frozen=True)
class PmModule:
    module: GModule
    labels: tuple[str, ...]      # labels[i] names basis vector s_{i+1} - s_0
    base_point: str
    spec: PuncturedCoverSpec

    @property
    def rank(self) -> int:
        return self.module.rank

    def ambient_vector(self, v: Sequence[int]) -> dict[str, int]:
        """Divisor in (Z/m)[S_V] represented by module coordinates ``v``."""
        N = self.module.modulus
        out = {s: 0 for s in self.spec.punctures}
        for label, x in zip(self.labels, v):
            out[label] = (out[label] + x) % N
            out[self.base_point] = (out[self.base_point] - x) % N
        return out

    def coordinates(self, divisor: Mapping[str, int]) -> list[int]:
        """Inverse of ``ambient_vector`` for a degree-zero divisor."""
        N = self.module.modulus
        if sum(divisor.values()) % N:
            raise ValueError("divisor has nonzero degree mod m")
        return [divisor.get(s, 0) % N for s in self.labels]


def build_pm_genus0(spec: PuncturedCoverSpec) -> PmModule:
    l, c = prime_power(spec.m)
    if l == spec.p:
        raise ValueError("m must be prime to p")
    N = spec.m
    base, labels = spec.punctures[0], spec.punctures[1:]
    perm = spec.perm
    index = {s: i for i, s in enumerate(labels)}
    n = len(labels)
    # column k of sigma: pullback of s_k - s_0, written in the basis
    sigma = linalg.zeros(n, n)
    for k, s in enumerate(labels):
        divisor = {t: 0 for t in spec.punctures}
        for t in spec.punctures:
            divisor[t] = int(perm[t] == s) - int(perm[t] == base)
        for t, x in divisor.items():
            if t != base and x:
                sigma[index[t]][k] = (sigma[index[t]][k] + x) % N
    module = GModule.from_matrix(spec.p, spec.a, l, c, sigma)
    return PmModule(module, tuple(labels), base, spec)


def artin_schreier_example(p: int, m: int) -> PmModule:
    """The cover t -> t^p - t of P^1, punctured over {0, ∞}.

    S_V = F_p ∪ {∞}; σ(t) = t + 1 permutes F_p cyclically and fixes ∞.
    """
    check_prime(p, "p")
    punctures = [str(t) for t in range(p)] + ["inf"]
    perm = {str(t): str((t + 1) % p) for t in range(p)}
    return build_pm_genus0(PuncturedCoverSpec.make(p, 1, m, punctures, perm))


def synthetic_module(p: int, a: int, orbit_sizes: Sequence[int], m: int) -> PmModule:
    """Degree-zero permutation module on a disjoint union of cyclic orbits."""
    check_prime(p, "p")
    if not orbit_sizes:
        raise ValueError("need at least one orbit")
    punctures, perm = [], {}
    for k, size in enumerate(orbit_sizes):
        if size < 1 or (p**a) % size:
            raise ValueError(f"orbit size {size} does not divide {p ** a}")
        names = [f"o{k:03d}.{t:03d}" for t in range(size)]
        punctures += names
        perm.update({names[t]: names[(t + 1) % size] for t in range(size)})
    return build_pm_genus0(PuncturedCoverSpec.make(p, a, m, punctures, perm))


@dataclass(frozen=True)
class EquivarianceCertificate:
    images: tuple[tuple[int, ...], ...]   # σ applied to each basis row
    verified: bool


def pm_inclusion(pm: PmModule, subset: Sequence[str]) -> tuple[Submodule, EquivarianceCertificate]:
    """P_m(V \\ S) inside P_m(V \\ S_V) for a G-stable subset S."""
    spec = pm.spec
    S = sorted({str(s) for s in subset})
    unknown = [s for s in S if s not in spec.punctures]
    if unknown:
        raise ValueError(f"unknown punctures {unknown}")
    perm = spec.perm
    for s in S:
        if perm[s] not in S:
            raise NotStableError(f"puncture {s!r} maps to {perm[s]!r}, outside the subset")
    M = pm.module
    rows = []
    for s in S[1:]:
        divisor = {t: 0 for t in spec.punctures}
        divisor[s] += 1
        divisor[S[0]] -= 1
        rows.append(pm.coordinates(divisor))
    W = Submodule.span(M, rows)
    images = tuple(tuple(M.act(r)) for r in W.basis)
    cert = EquivarianceCertificate(images, all(W.contains(v) for v in images))
    return W, cert


def random_cover_spec(rng: random.Random, p: int, a: int, m: int, max_orbits: int = 4) -> PuncturedCoverSpec:
    """Random genus-0 spec: orbits of random p-power sizes, shuffled labels."""
    sizes = [p ** rng.randint(0, a) for _ in range(rng.randint(1, max_orbits))]
    labels = [f"P{k}" for k in range(sum(sizes))]
    rng.shuffle(labels)
    perm, k = {}, 0
    for size in sizes:
        cyc = labels[k:k + size]
        perm.update({cyc[t]: cyc[(t + 1) % size] for t in range(size)})
        k += size
    return PuncturedCoverSpec.make(p, a, m, labels, perm)
