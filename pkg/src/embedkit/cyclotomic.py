"""Cyclotomic polynomials Phi_{p^b}, their factorization over F_l, Hensel
lifts to Z/l^c and the CRT idempotents of (Z/l^c)[x]/(x^{p^a} - 1).

All factors of Phi_{p^b} mod l share the degree d_b (the order of l mod
p^b), so factoring is pure equal-degree splitting.  Factors are listed in a
canonical order: lexicographic on the coefficient sequence read from the
leading coefficient down.  Every (b, j) index used elsewhere in the package
refers to this order; the lifted factor at position j is the lift of the
mod-l factor at position j.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from .modarith import Poly, check_prime, multiplicative_order, poly_product

DEFAULT_SEED = 0


class HenselError(ArithmeticError):
    """The factors handed to the lifter are not pairwise coprime mod l."""


def cyclotomic_poly(p: int, b: int) -> Poly:
    """Phi_{p^b}(x) = sum_{j<p} x^{j p^{b-1}} with integer coefficients."""
    check_prime(p, "p")
    if b < 1:
        raise ValueError("b must be positive")
    step = p ** (b - 1)
    coeffs = [0] * ((p - 1) * step + 1)
    for j in range(p):
        coeffs[j * step] = 1
    return Poly(coeffs, 0)


def canonical_key(f: Poly) -> tuple[int, ...]:
    return tuple(reversed(f.coeffs))


def _split_once(f: Poly, d: int, rng: random.Random) -> Poly | None:
    """Try to find a proper factor of ``f`` (product of degree-d irreducibles)."""
    l = f.modulus
    n = f.degree
    a = Poly([rng.randrange(l) for _ in range(n)], l)
    if a.degree < 1:
        return None
    if l == 2:
        # absolute trace F_{2^d} -> F_2 applied componentwise
        t = a % f
        acc = t
        for _ in range(d - 1):
            t = (t * t) % f
            acc = acc + t
        g = acc.gcd(f)
    else:
        g = a.gcd(f)
        if 0 < g.degree < n:
            return g
        h = a.pow_mod((l**d - 1) // 2, f) - 1
        g = h.gcd(f)
    if 0 < g.degree < n:
        return g
    return None


def equal_degree_factor(f: Poly, d: int, seed: int = DEFAULT_SEED) -> list[Poly]:
    """Split a monic squarefree ``f`` over F_l whose irreducible factors all
    have degree ``d``.  Randomized (Cantor-Zassenhaus); reproducible for a
    given ``seed``.  Output is canonically sorted, so it does not depend on
    the seed at all.
    """
    if f.degree % d:
        raise ValueError(f"degree {f.degree} is not a multiple of {d}")
    rng = random.Random(seed)
    todo, done = [f.monic()], []
    while todo:
        g = todo.pop()
        if g.degree == d:
            done.append(g)
            continue
        h = None
        while h is None:
            h = _split_once(g, d, rng)
        todo.append(h.monic())
        todo.append((g // h.monic()))
    return sorted(done, key=canonical_key)


def factor_cyclotomic(p: int, b: int, l: int, seed: int = DEFAULT_SEED) -> list[Poly]:
    """Monic irreducible factors of Phi_{p^b} over F_l, canonically ordered.

    >>> [list(f.coeffs) for f in factor_cyclotomic(7, 1, 2)]
    [[1, 1, 0, 1], [1, 0, 1, 1]]
    """
    check_prime(l, "l")
    d = multiplicative_order(l, p, b)  # also rejects l == p
    return _factor_cached(p, b, l, d, seed)


@lru_cache(maxsize=None)
def _factor_cached(p, b, l, d, seed):
    f = cyclotomic_poly(p, b).with_modulus(l)
    return tuple(equal_degree_factor(f, d, seed))


def _hensel_step(f: Poly, g: Poly, h: Poly, s: Poly, t: Poly, m2: int):
    """One quadratic Hensel step: from f = gh, sg + th = 1 mod m to mod m2."""
    f, g, h, s, t = (x.with_modulus(m2) for x in (f, g, h, s, t))
    e = f - g * h
    q, r = divmod(s * e, h)
    g_new = g + t * e + q * g
    h_new = h + r
    b = s * g_new + t * h_new - 1
    c, d = divmod(s * b, h_new)
    s_new = s - d
    t_new = t - t * b - c * g_new
    return g_new, h_new, s_new, t_new


def _lift_pair(f: Poly, g: Poly, h: Poly, l: int, c: int) -> tuple[Poly, Poly]:
    """Lift monic ``g``, ``h`` with f = gh mod l to a factorization mod l^c."""
    s, t, one = g.gcdex(h)
    if one.degree != 0:
        raise HenselError(f"{g} and {h} are not coprime mod {l}")
    # sg + th = 1 with deg s < deg h, deg t < deg g
    k = 1
    while k < c:
        k = min(2 * k, c)
        g, h, s, t = _hensel_step(f, g, h, s, t, l**k)
    return g, h


def hensel_lift(target: Poly, factors: list[Poly], l: int, c: int) -> list[Poly]:
    """Lift a factorization ``target = prod(factors)`` mod l to mod l^c.

    ``target`` is monic with integer (or mod l^c) coefficients and the
    factors are monic and pairwise coprime mod l.  Factor-by-factor: each
    factor is lifted against the product of the remaining ones.
    """
    if c < 1:
        raise ValueError("c must be positive")
    mod_l = [f.with_modulus(l) for f in factors]
    if poly_product(mod_l, l) != target.with_modulus(l):
        raise ValueError("factors do not multiply to the target mod l")
    if c == 1:
        return mod_l
    N = l**c
    rest = target.with_modulus(N)
    lifted = []
    for i, g in enumerate(mod_l[:-1]):
        h = poly_product(mod_l[i + 1:], l)
        g_lift, h_lift = _lift_pair(rest, g, h, l, c)
        lifted.append(g_lift)
        rest = h_lift
    lifted.append(rest)
    return lifted


def _inverse_mod(a: Poly, g: Poly, l: int, c: int) -> Poly:
    """Inverse of ``a`` in (Z/l^c)[x]/(g) for monic ``g`` coprime to ``a`` mod l."""
    s, _, one = a.with_modulus(l).gcdex(g.with_modulus(l))
    if one.degree != 0:
        raise HenselError("element is not invertible modulo the factor")
    u = s
    k = 1
    while k < c:
        k = min(2 * k, c)
        m = l**k
        u, am, gm = u.with_modulus(m), a.with_modulus(m), g.with_modulus(m)
        u = (u * (2 - am * u)) % gm
    return u.with_modulus(l**c) % g.with_modulus(l**c)


def crt_idempotents(target: Poly, factors: list[Poly], l: int, c: int) -> list[Poly]:
    """Orthogonal idempotents of (Z/l^c)[x]/(target), one per factor.

    ``factors`` must be a lifted factorization of ``target`` mod l^c into
    pairwise coprime monic polynomials.  The idempotent for ``g`` is 1 mod
    ``g`` and 0 mod every other factor.
    """
    N = l**c
    F = target.with_modulus(N)
    if len(factors) == 1:
        return [Poly([1], N)]
    out = []
    for g in factors:
        g = g.with_modulus(N)
        cof, rem = divmod(F, g)
        if not rem.is_zero():
            raise ValueError(f"{g} does not divide {F}")
        u = _inverse_mod(cof, g, l, c)
        out.append((cof * u) % F)
    return out


@dataclass(frozen=True)
class CycloFactorization:
    """Factor data for x^{p^a} - 1 over Z/l^c.

    ``factors_mod_l[b-1]`` and ``factors_lifted[b-1]`` list the r_b factors
    of Phi_{p^b}.  ``idempotents[0]`` belongs to the linear factor x - 1; the
    rest follow in (b, j) order.
    """

    p: int
    a: int
    l: int
    c: int
    d: tuple[int, ...]
    factors_mod_l: tuple[tuple[Poly, ...], ...]
    factors_lifted: tuple[tuple[Poly, ...], ...]
    linear_factor: Poly
    idempotents: tuple[Poly, ...]

    @property
    def modulus(self) -> int:
        return self.l**self.c

    def r(self, b: int) -> int:
        return len(self.factors_mod_l[b - 1])

    def indices(self) -> list[tuple[int, int]]:
        """All (b, j) pairs, 1-based, in idempotent order."""
        return [(b, j) for b in range(1, self.a + 1) for j in range(1, self.r(b) + 1)]

    def lifted(self, b: int, j: int) -> Poly:
        return self.factors_lifted[b - 1][j - 1]

    def idempotent(self, b: int, j: int) -> Poly:
        return self.idempotents[1 + self.indices().index((b, j))]

    @property
    def fixed_idempotent(self) -> Poly:
        return self.idempotents[0]

    def target(self) -> Poly:
        n = self.p**self.a
        return Poly([-1] + [0] * (n - 1) + [1], self.modulus)


def cyclo_factorization(p: int, a: int, l: int, c: int, seed: int = DEFAULT_SEED) -> CycloFactorization:
    """Complete factor data for G = Z/p^a acting over Z/l^c (cached)."""
    check_prime(p, "p")
    check_prime(l, "l")
    if l == p:
        raise ValueError("l must differ from p")
    if a < 1 or c < 1:
        raise ValueError("a and c must be positive")
    return _cyclo_cached(p, a, l, c, seed)


@lru_cache(maxsize=None)
def _cyclo_cached(p, a, l, c, seed):
    n = p**a
    target = Poly([-1] + [0] * (n - 1) + [1], 0)
    linear = Poly([-1, 1], l)
    mod_l = [tuple(factor_cyclotomic(p, b, l, seed)) for b in range(1, a + 1)]
    flat = [linear] + [f for fs in mod_l for f in fs]
    lifted_flat = hensel_lift(target, flat, l, c)
    lifted, k = [], 1
    for fs in mod_l:
        lifted.append(tuple(lifted_flat[k:k + len(fs)]))
        k += len(fs)
    idem = crt_idempotents(target, lifted_flat, l, c)
    return CycloFactorization(
        p=p, a=a, l=l, c=c,
        d=tuple(multiplicative_order(l, p, b) for b in range(1, a + 1)),
        factors_mod_l=tuple(mod_l),
        factors_lifted=tuple(lifted),
        linear_factor=lifted_flat[0],
        idempotents=tuple(idem),
    )
