"""Exhaustive enumeration of the σ-stable submodules of a small GModule.

This is ground truth for the criteria and counts in ``solvability``; it shares
the Howell-form canonicalisation with the rest of the package but none of the
counting or criterion logic.  Every σ-stable submodule is a sum of cyclic
σ-submodules <v, σv, σ²v, ...>, so the lattice is reached from 0 by
repeatedly adding one cyclic submodule at a time.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from . import linalg
from .gmodule import Decomposition, GModule, SizeBoundError, Submodule, decompose
from .solvability import HShape

DEFAULT_SIZE_BOUND = 2**20


def _normalize(v, l: int, N: int) -> tuple[int, ...] | None:
    """Unit multiple of ``v`` whose leading nonzero entry is a power of l.

    Unit multiples generate the same cyclic submodule, so only these
    representatives are needed.  None for the zero vector.
    """
    for x in v:
        if x:
            u = x
            while u % l == 0:
                u //= l
            inv = pow(u, -1, N)
            return tuple(y * inv % N for y in v)
    return None


def cyclic_closure(M: GModule, v) -> Submodule:
    """<v, σv, σ²v, ...>, stopping once the next vector is already in the span."""
    rows, cur = [list(v)], M.act(v)
    span = Submodule.span(M, rows)
    while not span.contains(cur):
        rows.append(cur)
        span = Submodule.span(M, rows)
        cur = M.act(cur)
    return span


def _cyclics_with_generators(M: GModule, size_bound: int) -> list[tuple[Submodule, tuple]]:
    if M.size > size_bound:
        raise SizeBoundError(f"module of size {M.size} exceeds bound {size_bound}")
    N, l = M.modulus, M.l
    seen: dict = {}
    done: set = set()
    for v in product(range(N), repeat=M.rank):
        rep = _normalize(v, l, N)
        if rep != v or rep in done:
            continue
        C = cyclic_closure(M, v)
        seen.setdefault(C.basis, (C, v))
        # σ^k v generates the same submodule
        cur = v
        while True:
            cur = _normalize(M.act(cur), l, N)
            if cur in done or cur == v:
                break
            done.add(cur)
        done.add(v)
    return [seen[k] for k in sorted(seen)]


def cyclic_submodules(M: GModule, size_bound: int = DEFAULT_SIZE_BOUND) -> list[Submodule]:
    return [C for C, _ in _cyclics_with_generators(M, size_bound)]


@dataclass(frozen=True)
class SubmoduleInventory:
    parent: GModule
    entries: dict            # signature -> sorted list of Howell bases
    decompositions: dict     # signature -> Decomposition (one per signature)

    def __len__(self):
        return sum(len(v) for v in self.entries.values())

    def all_bases(self) -> list:
        return sorted(b for v in self.entries.values() for b in v)

    def submodules(self) -> list[Submodule]:
        return [Submodule(self.parent, b) for b in self.all_bases()]


def _join_irreducible(cyclics: list[tuple[Submodule, tuple]]) -> list[tuple[Submodule, tuple]]:
    """Cyclics that are not the sum of the cyclics strictly inside them.

    Every submodule is a sum of cyclics, hence of these, so they are enough
    to generate the whole lattice.
    """
    by_size = sorted(cyclics, key=lambda cg: (cg[0].log_size, cg[0].basis))
    keep = []
    for k, (C, gen) in enumerate(by_size):
        below = C.parent.zero()
        for D, dgen in by_size[:k]:
            if D.log_size < C.log_size and C.contains(dgen):
                below = below + D
        if below != C:
            keep.append((C, gen))
    return keep


def enumerate_g_submodules(M: GModule, size_bound: int = DEFAULT_SIZE_BOUND) -> SubmoduleInventory:
    """All σ-stable submodules of ``M``, grouped by isomorphism type.

    Refuses (``SizeBoundError``) when |M| exceeds ``size_bound``.
    """
    cyclics = _join_irreducible(_cyclics_with_generators(M, size_bound))
    zero = M.zero()
    found = {zero.basis: zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for W in frontier:
            for C, gen in cyclics:
                if W.contains(gen):
                    continue
                S = W + C
                if S.basis not in found:
                    found[S.basis] = S
                    nxt.append(S)
        frontier = nxt
    entries: dict = {}
    decs: dict = {}
    for key in sorted(found):
        dec = decompose(found[key])
        sig = dec.signature()
        entries.setdefault(sig, []).append(key)
        decs.setdefault(sig, dec)
    return SubmoduleInventory(M, entries, decs)


def _matches(dec: Decomposition, shape: HShape) -> bool:
    if shape.action is not None:
        return dec.signature() == shape.action.signature()
    want = shape.group_exponents()
    have = dec.group_exponents()
    keys = set(want) | set(have)
    return all(want.get(i, 0) == have.get(i, 0) for i in keys)


def count_isomorphic(inventory: SubmoduleInventory, shape: HShape) -> int:
    """Number of inventory members isomorphic to ``shape``.

    With action data the full G-module type must match; without it only the
    underlying abelian group is compared (all actions at once).
    """
    if shape.kind == "squarefree":
        raise ValueError("the oracle works one prime at a time")
    if shape.l and shape.l != inventory.parent.l:
        return 0
    return sum(len(v) for sig, v in inventory.entries.items()
               if _matches(inventory.decompositions[sig], shape))


def dimensions_present(inventory: SubmoduleInventory) -> set[int]:
    """log_l sizes of all inventory members (F_l-dimensions when c = 1)."""
    return {dec.log_size() for dec in inventory.decompositions.values()}
