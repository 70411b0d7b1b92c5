"""Residues mod l^c and dense univariate polynomials over Z/l^c (or Z).

Polynomials store plain Python ints, low degree first, together with one
shared modulus.  ``modulus == 0`` means integer coefficients with no
reduction; this is only used to hold cyclotomic polynomials before they are
reduced.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from sympy import factorint, isprime


class ModulusError(ValueError):
    """Raised when operands live over different coefficient rings."""


def check_prime(n: int, name: str = "value") -> None:
    if not isinstance(n, int) or not isprime(n):
        raise ValueError(f"{name} must be prime, got {n!r}")


def prime_power(n: int) -> tuple[int, int]:
    """Return ``(l, c)`` with ``n == l**c`` or raise ``ValueError``."""
    if n < 2:
        raise ValueError(f"{n} is not a prime power")
    f = factorint(n)
    if len(f) != 1:
        raise ValueError(f"{n} is not a prime power")
    (l, c), = f.items()
    return int(l), int(c)


def valuation(x: int, l: int) -> int:
    """l-adic valuation of a nonzero integer."""
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    while x % l == 0:
        x //= l
        v += 1
    return v


def multiplicative_order(l: int, p: int, b: int) -> int:
    """Order of ``l`` in the unit group of Z/p^b.

    Found by repeated multiplication; the loop runs at most
    ``p**(b-1) * (p-1)`` times.

    >>> multiplicative_order(2, 3, 2)
    6
    """
    check_prime(l, "l")
    check_prime(p, "p")
    if l == p:
        raise ValueError("l must differ from p")
    if b < 1:
        raise ValueError("b must be positive")
    n = p**b
    x = l % n
    d = 1
    while x != 1:
        x = x * l % n
        d += 1
    return d


@dataclass(frozen=True)
class Residue:
    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be at least 2")
        if not 0 <= self.value < self.modulus:
            object.__setattr__(self, "value", self.value % self.modulus)

    def _coerce(self, other) -> int:
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise ModulusError(f"{self.modulus} vs {other.modulus}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return Residue(self.value + o, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return Residue(self.value - o, self.modulus)

    def __rsub__(self, other):
        o = self._coerce(other)
        return Residue(o - self.value, self.modulus)

    def __mul__(self, other):
        o = self._coerce(other)
        return Residue(self.value * o, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.modulus)

    def __pow__(self, e: int):
        return Residue(pow(self.value, e, self.modulus), self.modulus)

    def inverse(self) -> Residue:
        return Residue(pow(self.value, -1, self.modulus), self.modulus)

    def is_unit(self) -> bool:
        try:
            pow(self.value, -1, self.modulus)
        except ValueError:
            return False
        return True


def _trim(coeffs: list[int]) -> tuple[int, ...]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class Poly:
    """Dense polynomial over Z/modulus (``modulus == 0``: over Z)."""

    __slots__ = ("coeffs", "modulus")

    def __init__(self, coeffs: Iterable[int], modulus: int):
        if modulus < 0 or modulus == 1:
            raise ValueError(f"bad modulus {modulus}")
        if modulus:
            cs = [int(c) % modulus for c in coeffs]
        else:
            cs = [int(c) for c in coeffs]
        object.__setattr__(self, "coeffs", _trim(cs))
        object.__setattr__(self, "modulus", modulus)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def x(cls, modulus: int) -> Poly:
        return cls([0, 1], modulus)

    @classmethod
    def const(cls, c: int, modulus: int) -> Poly:
        return cls([c], modulus)

    @classmethod
    def from_residues(cls, residues: Sequence[Residue]) -> Poly:
        if not residues:
            raise ValueError("need at least one residue to fix the modulus")
        mods = {r.modulus for r in residues}
        if len(mods) != 1:
            raise ModulusError("residues with mixed moduli")
        return cls([r.value for r in residues], mods.pop())

    # -- basic queries ------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_monic(self) -> bool:
        return self.lc() == 1

    def coefficient(self, i: int) -> Residue:
        if not self.modulus:
            raise ModulusError("integer polynomial has no residues")
        c = self.coeffs[i] if i < len(self.coeffs) else 0
        return Residue(c, self.modulus)

    def with_modulus(self, modulus: int) -> Poly:
        """Reinterpret coefficients modulo ``modulus`` (reduce or lift)."""
        return Poly(self.coeffs, modulus)

    def __repr__(self):
        return f"Poly({list(self.coeffs)}, {self.modulus})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if c == 1 and mono:
                terms.append(mono)
            else:
                terms.append(f"{c}{'*' if mono else ''}{mono}")
        return " + ".join(terms)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.modulus == other.modulus and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.modulus))

    # -- ring operations ----------------------------------------------------

    def _other(self, other) -> Poly:
        if isinstance(other, int):
            return Poly([other], self.modulus)
        if not isinstance(other, Poly):
            return NotImplemented
        if other.modulus != self.modulus:
            raise ModulusError(f"modulus {self.modulus} vs {other.modulus}")
        return other

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = o.coeffs + (0,) * (n - len(o.coeffs))
        return Poly([x + y for x, y in zip(a, b)], self.modulus)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs], self.modulus)

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        if not self.coeffs or not o.coeffs:
            return Poly([], self.modulus)
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return Poly(out, self.modulus)

    __rmul__ = __mul__

    def scale(self, k: int) -> Poly:
        return Poly([k * c for c in self.coeffs], self.modulus)

    def __divmod__(self, divisor: Poly) -> tuple[Poly, Poly]:
        g = self._other(divisor)
        if g.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if not g.is_monic():
            raise ValueError("divisor must be monic")
        r = list(self.coeffs)
        dg = g.degree
        if len(r) - 1 < dg:
            return Poly([], self.modulus), self
        q = [0] * (len(r) - dg)
        m = self.modulus
        for k in range(len(r) - 1 - dg, -1, -1):
            t = r[k + dg]
            if m:
                t %= m
            if t:
                q[k] = t
                for j, b in enumerate(g.coeffs):
                    r[k + j] -= t * b
        return Poly(q, m), Poly(r[:dg], m)

    def __floordiv__(self, divisor: Poly) -> Poly:
        return divmod(self, divisor)[0]

    def __mod__(self, divisor: Poly) -> Poly:
        return divmod(self, divisor)[1]

    def __pow__(self, e: int) -> Poly:
        result = Poly([1], self.modulus)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def pow_mod(self, e: int, f: Poly) -> Poly:
        """``self**e mod f`` by square-and-multiply."""
        result = Poly([1], self.modulus) % f
        base = self % f
        while e:
            if e & 1:
                result = (result * base) % f
            base = (base * base) % f
            e >>= 1
        return result

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
            if self.modulus:
                acc %= self.modulus
        return acc

    def derivative(self) -> Poly:
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:], self.modulus)

    # -- field-only operations (modulus prime) -----------------------------

    def _require_field(self):
        if not self.modulus or not isprime(self.modulus):
            raise ModulusError("gcd needs a prime modulus (c = 1)")

    def monic(self) -> Poly:
        self._require_field()
        if self.is_zero():
            return self
        return self.scale(pow(self.lc(), -1, self.modulus))

    def gcdex(self, other: Poly) -> tuple[Poly, Poly, Poly]:
        """Return ``(s, t, g)`` with ``s*self + t*other == g`` and ``g`` monic."""
        self._require_field()
        other = self._other(other)
        m = self.modulus
        zero, one = Poly([], m), Poly([1], m)
        r0, r1 = self, other
        s0, s1 = one, zero
        t0, t1 = zero, one
        while not r1.is_zero():
            inv = pow(r1.lc(), -1, m)
            q, r = divmod(r0, r1.scale(inv))
            q = q.scale(inv)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0.is_zero():
            return s0, t0, r0
        inv = pow(r0.lc(), -1, m)
        return s0.scale(inv), t0.scale(inv), r0.scale(inv)

    def gcd(self, other: Poly) -> Poly:
        return self.gcdex(other)[2]


def poly_product(polys: Iterable[Poly], modulus: int) -> Poly:
    out = Poly([1], modulus)
    for f in polys:
        out = out * f
    return out
