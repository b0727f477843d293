"""Prime fields, primitive roots, discrete logs and exact character values.

Character values are never stored as floats.  A value of a multiplicative
character is an exponent ``e`` of the fixed primitive ``(p-1)``-th root of
unity ``zeta = exp(2*pi*i/(p-1))`` (or ZERO), and an additive character value
is an exponent of ``exp(2*pi*i/p)``.  Sums are then integer histograms over
exponent classes and only rendered to complex numbers at the very end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import IndexOutOfRange, NotPrime, TooLarge, ZeroArgument

DEFAULT_MAX_P = 1 << 26


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` by trial division."""
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1 if q == 2 else 2
    if n > 1:
        out.append(n)
    return out


def primitive_root(p: int) -> int:
    """Smallest generator of the multiplicative group mod ``p``."""
    if p == 2:
        return 1
    qs = prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise NotPrime(p)  # pragma: no cover - unreachable for prime p


def primes_between(lo: int, hi: int) -> list[int]:
    """Odd primes in the closed range ``[lo, hi]``."""
    return [n for n in range(max(lo, 3), hi + 1) if is_prime(n)]


@dataclass(frozen=True, eq=False)
class FieldContext:
    """The field F_p together with a primitive root and its dlog table.

    ``powers[t] = g^t mod p`` for ``t in [0, p-2]`` and ``dlog`` is its
    inverse permutation; ``dlog[0]`` is set to -1 as a sentinel.
    """

    p: int
    g: int
    powers: np.ndarray
    dlog: np.ndarray

    @property
    def order(self) -> int:
        """Size of the multiplicative group, p - 1."""
        return self.p - 1

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldContext) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("FieldContext", self.p))

    def __repr__(self) -> str:
        return f"FieldContext(p={self.p}, g={self.g})"


def _generator_walk(p: int, g: int) -> np.ndarray:
    # powers[0:n] known -> powers[n:2n] = powers[0:n] * g^n; products < 2^52
    powers = np.ones(1, dtype=np.int64)
    n = 1
    while n < p - 1:
        step = pow(g, n, p)
        powers = np.concatenate([powers, powers * step % p])
        n *= 2
    return powers[: p - 1]


@lru_cache(maxsize=128)
def make_field(p: int, max_p: int = DEFAULT_MAX_P) -> FieldContext:
    """Build (and cache) the context for the prime ``p``.

    Raises NotPrime for composites or p < 3 and TooLarge when ``p`` exceeds
    ``max_p`` (the dlog table holds p machine words).
    """
    p = int(p)
    if p < 3 or not is_prime(p):
        raise NotPrime(f"{p} is not an odd prime")
    if p > max_p:
        raise TooLarge(f"p={p} exceeds the table limit {max_p}")
    g = primitive_root(p)
    powers = _generator_walk(p, g)
    dlog = np.full(p, -1, dtype=np.int64)
    dlog[powers] = np.arange(p - 1, dtype=np.int64)
    powers.setflags(write=False)
    dlog.setflags(write=False)
    return FieldContext(p=p, g=g, powers=powers, dlog=dlog)


def discrete_log(ctx: FieldContext, x: int) -> int:
    x %= ctx.p
    if x == 0:
        raise ZeroArgument("discrete log of 0 is undefined")
    return int(ctx.dlog[x])


@lru_cache(maxsize=256)
def unit_roots(n: int) -> np.ndarray:
    """``exp(2*pi*i*e/n)`` for ``e in range(n)``, read-only."""
    q, s = np.divmod(4 * np.arange(n, dtype=np.int64), n)
    low = 2 * s <= n
    t = 0.5 * np.pi * np.where(low, s, n - s) / n
    c = np.where(low, np.cos(t), np.sin(t))
    si = np.where(low, np.sin(t), np.cos(t))
    # rotate by q quarter turns exactly
    q %= 4
    re = np.select([q == 0, q == 1, q == 2, q == 3], [c, -si, -c, si])
    im = np.select([q == 0, q == 1, q == 2, q == 3], [si, c, -si, -c])
    roots = re + 1j * im
    roots.setflags(write=False)
    return roots


@dataclass(frozen=True)
class UnitValue:
    """Exact root-of-unity value ``exp(2*pi*i*exponent/order)``, or zero.

    ``exponent is None`` encodes the value 0 (a character evaluated at 0).
    """

    exponent: int | None
    order: int

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    @property
    def complex(self) -> complex:
        if self.exponent is None:
            return 0j
        n = self.order
        # 4e = q*n + s: the angle is q quarter turns plus (pi/2) * s/n; fold
        # s into [0, n/2] so the trig arguments stay in [0, pi/4]
        q, s = divmod(4 * (self.exponent % n), n)
        if 2 * s <= n:
            t = 0.5 * math.pi * s / n
            c, si = math.cos(t), math.sin(t)
        else:
            t = 0.5 * math.pi * (n - s) / n
            c, si = math.sin(t), math.cos(t)
        for _ in range(q % 4):
            c, si = -si, c
        return complex(c, si)

    def as_int(self) -> int:
        """The value as an integer; only defined for 0, 1 and -1."""
        if self.exponent is None:
            return 0
        if self.exponent == 0:
            return 1
        if 2 * self.exponent == self.order:
            return -1
        raise ValueError(f"{self} is not an integer")

    def __mul__(self, other: UnitValue) -> UnitValue:
        if self.order != other.order:
            raise ValueError("root orders differ")
        if self.is_zero or other.is_zero:
            return UnitValue(None, self.order)
        return UnitValue((self.exponent + other.exponent) % self.order, self.order)


@dataclass(frozen=True)
class MultiplicativeCharacter:
    """chi(g^t) = zeta^(m*t) with zeta a primitive (p-1)-th root of unity."""

    ctx: FieldContext
    m: int

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def order(self) -> int:
        return (self.ctx.p - 1) // math.gcd(self.m, self.ctx.p - 1)

    @property
    def is_trivial(self) -> bool:
        return self.m == 0

    @property
    def is_quadratic(self) -> bool:
        return self.order == 2

    @cached_property
    def classes(self) -> np.ndarray:
        """Exponent class of chi(x) for every residue x; -1 marks chi(0)=0."""
        cls = self.ctx.dlog * self.m % (self.ctx.p - 1)
        cls[0] = -1
        cls.setflags(write=False)
        return cls

    def __repr__(self) -> str:
        return f"MultiplicativeCharacter(p={self.p}, m={self.m}, order={self.order})"


def make_character(ctx: FieldContext, m: int) -> MultiplicativeCharacter:
    if not 0 <= m <= ctx.p - 2:
        raise IndexOutOfRange(f"character index {m} not in [0, {ctx.p - 2}]")
    return MultiplicativeCharacter(ctx, int(m))


def legendre(ctx: FieldContext) -> MultiplicativeCharacter:
    """The quadratic (Legendre) character."""
    return make_character(ctx, (ctx.p - 1) // 2)


def char_eval(chi: MultiplicativeCharacter, x: int) -> UnitValue:
    p = chi.ctx.p
    x %= p
    if x == 0:
        return UnitValue(None, p - 1)
    return UnitValue(int(chi.m * chi.ctx.dlog[x] % (p - 1)), p - 1)


def euler_criterion(p: int, x: int) -> int:
    """Legendre symbol (x/p) as x^((p-1)/2) mod p, mapped into {-1, 0, 1}."""
    r = pow(x % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def additive_eval(ctx: FieldContext, u: int) -> UnitValue:
    """e_p(u) = exp(2*pi*i*u/p) as an exact p-th root of unity."""
    return UnitValue(u % ctx.p, ctx.p)
