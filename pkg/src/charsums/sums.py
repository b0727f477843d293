"""Character sums over residue sets.

Every family comes with two evaluation paths:

* ``method="fast"``: build a representation function r(x) by exact
  convolution, then add r(x) into the exponent class of chi(x).
* ``method="naive"``: loop over all tuples and evaluate chi term by term.

Both paths fill the same integer histogram (count per exponent class), so
they can be compared with ``==`` and no tolerance at all.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from itertools import product

import numpy as np

from .convolution import cyclic_convolve
from .errors import ContextMismatch, KTooLarge, TrivialCharacter
from .field import FieldContext, MultiplicativeCharacter, char_eval, unit_roots
from .sets import ResidueSet, additive_counts, check_context, multiplicative_counts

FAST = "fast"
NAIVE = "naive"


@dataclass(frozen=True, eq=False)
class SumValue:
    """Exact value of a sum of roots of unity of order ``modulus``.

    ``hist[e]`` counts terms equal to exp(2*pi*i*e/modulus); ``zeros`` counts
    terms that vanished (chi(0) = 0).
    """

    modulus: int
    hist: np.ndarray
    zeros: int = 0

    @property
    def term_count(self) -> int:
        return int(self.hist.sum()) + self.zeros

    @property
    def value(self) -> complex:
        nz = np.flatnonzero(self.hist)
        if nz.size == 0:
            return 0j
        return complex(np.dot(self.hist[nz].astype(np.float64), unit_roots(self.modulus)[nz]))

    @property
    def re(self) -> float:
        return self.value.real

    @property
    def im(self) -> float:
        return self.value.imag

    @property
    def magnitude(self) -> float:
        ex = self.exact
        return float(abs(ex)) if ex is not None else abs(self.value)

    @property
    def exact(self) -> int | None:
        """The value as an int when it is provably rational, else None.

        Covers sums whose terms are all +1, -1 or 0, and sums of p-th roots
        (odd prime modulus) whose nonzero classes are equally populated, using
        the single relation 1 + zeta + ... + zeta^(p-1) = 0.
        """
        if self.modulus % 2 == 1 and self.modulus > 2:
            tail = self.hist[1:]
            if tail.size and (tail == tail[0]).all():
                return int(self.hist[0]) - int(tail[0])
        nz = set(np.flatnonzero(self.hist).tolist())
        half = self.modulus // 2 if self.modulus % 2 == 0 else None
        if not nz <= {0, half}:
            return None
        neg = int(self.hist[half]) if half is not None else 0
        return int(self.hist[0]) - neg

    def __add__(self, other: SumValue) -> SumValue:
        if other.modulus != self.modulus:
            raise ValueError("cannot add sums over different root orders")
        return SumValue(self.modulus, self.hist + other.hist, self.zeros + other.zeros)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SumValue)
            and other.modulus == self.modulus
            and other.zeros == self.zeros
            and np.array_equal(other.hist, self.hist)
        )

    __hash__ = None

    def __repr__(self) -> str:
        ex = self.exact
        shown = ex if ex is not None else f"{self.value:.12g}"
        return f"SumValue({shown}, terms={self.term_count})"

    def to_dict(self) -> dict:
        ex = self.exact
        v = complex(ex) if ex is not None else self.value
        return {
            "value": ex if ex is not None else [v.real, v.imag],
            "re": v.real,
            "im": v.imag,
            "magnitude": self.magnitude,
            "term_count": self.term_count,
        }


def empty_sum(modulus: int) -> SumValue:
    return SumValue(modulus, np.zeros(modulus, dtype=np.int64))


def char_hist(chi: MultiplicativeCharacter, counts: np.ndarray) -> SumValue:
    """Collapse per-residue counts into a chi-value histogram."""
    n = chi.p - 1
    if int(counts.sum()) < 1 << 53:
        # every partial sum of the float64 weights stays below 2^53, hence exact
        hist = np.bincount(chi.classes[1:], weights=counts[1:], minlength=n).astype(np.int64)
    else:
        hist = np.zeros(n, dtype=np.int64)
        np.add.at(hist, chi.classes[1:], counts[1:])
    return SumValue(n, hist, int(counts[0]))


class _Tally:
    """Term-by-term accumulator used by the naive paths."""

    def __init__(self, chi: MultiplicativeCharacter):
        self.chi = chi
        self.hist = [0] * (chi.p - 1)
        self.zeros = 0

    def add(self, x: int) -> None:
        e = char_eval(self.chi, x).exponent
        if e is None:
            self.zeros += 1
        else:
            self.hist[e] += 1

    def result(self) -> SumValue:
        return SumValue(self.chi.p - 1, np.array(self.hist, dtype=np.int64), self.zeros)


def _product_counts(ctx: FieldContext, C: ResidueSet, D: ResidueSet) -> np.ndarray:
    """r(x) = #{(c, d) : c*d = x}, including x = 0."""
    out = multiplicative_counts(ctx, C.indicator(), D.indicator())
    zc, zd = int(0 in C), int(0 in D)
    out[0] = len(C) * len(D) - (len(C) - zc) * (len(D) - zd)
    return out


def _check(chi: MultiplicativeCharacter, *sets: ResidueSet) -> FieldContext:
    ctx = check_context(*sets)
    if chi.p != ctx.p:
        raise ContextMismatch(f"character mod {chi.p} applied to sets mod {ctx.p}")
    return ctx


def paley_sum(chi: MultiplicativeCharacter, A: ResidueSet, B: ResidueSet, method: str = FAST) -> SumValue:
    """S_chi(A, B) = sum over a in A, b in B of chi(a + b)."""
    _check(chi, A, B)
    if method == NAIVE:
        t = _Tally(chi)
        for a, b in product(A, B):
            t.add(a + b)
        return t.result()
    return char_hist(chi, additive_counts(A, B))


def ternary_sum(
    chi: MultiplicativeCharacter, A: ResidueSet, B: ResidueSet, C: ResidueSet, method: str = FAST
) -> SumValue:
    """S_chi(A, B, C) = sum of chi(a + b + c)."""
    _check(chi, A, B, C)
    if method == NAIVE:
        t = _Tally(chi)
        for a, b, c in product(A, B, C):
            t.add(a + b + c)
        return t.result()
    return char_hist(chi, cyclic_convolve(additive_counts(A, B), C.indicator()))


def mult_ternary_sum(
    chi: MultiplicativeCharacter, A: ResidueSet, B: ResidueSet, C: ResidueSet, method: str = FAST
) -> SumValue:
    """M_chi(A, B, C) = sum of chi(a + b*c)."""
    ctx = _check(chi, A, B, C)
    if method == NAIVE:
        t = _Tally(chi)
        for a, b, c in product(A, B, C):
            t.add(a + b * c)
        return t.result()
    return char_hist(chi, cyclic_convolve(A.indicator(), _product_counts(ctx, B, C)))


def mixed_quaternary_sum(
    chi: MultiplicativeCharacter,
    A: ResidueSet,
    B: ResidueSet,
    C: ResidueSet,
    D: ResidueSet,
    method: str = FAST,
) -> SumValue:
    """H_chi(A, B, C, D) = sum of chi(a + b + c*d).

    The fast path convolves r_{A+B} with the product-count function of
    (C, D): O(p log p + |A||B| + |C||D|) work instead of a quadruple loop.
    """
    ctx = _check(chi, A, B, C, D)
    if method == NAIVE:
        t = _Tally(chi)
        for a, b, c, d in product(A, B, C, D):
            t.add(a + b + c * d)
        return t.result()
    return char_hist(chi, cyclic_convolve(additive_counts(A, B), _product_counts(ctx, C, D)))


def bilinear_exponential_sum(
    ctx: FieldContext, x: int, A: ResidueSet, B: ResidueSet, method: str = FAST
) -> SumValue:
    """T_x(A, B) = sum of e_p(x*a*b), as a histogram over p-th roots of unity."""
    check_context(A, B)
    p = ctx.p
    x %= p
    hist = np.zeros(p, dtype=np.int64)
    if method == NAIVE:
        for a, b in product(A, B):
            hist[x * a * b % p] += 1
        return SumValue(p, hist)
    prods = _product_counts(ctx, A, B)
    np.add.at(hist, np.arange(p, dtype=np.int64) * x % p, prods)
    return SumValue(p, hist)


@dataclass(frozen=True)
class PolynomialSpec:
    """Monic polynomial prod (X - a_i)^{e_i} given by its distinct roots."""

    roots: tuple[tuple[int, int], ...]

    def __post_init__(self):
        rs = [a for a, _ in self.roots]
        if len(set(rs)) != len(rs):
            raise ValueError("roots must be distinct")
        if any(e < 1 for _, e in self.roots):
            raise ValueError("multiplicities must be >= 1")

    @property
    def r(self) -> int:
        return len(self.roots)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.roots)

    def evaluate(self, x: int, p: int) -> int:
        v = 1
        for a, e in self.roots:
            v = v * pow(x - a, e, p) % p
        return v


def polynomial(p: int, roots) -> PolynomialSpec:
    """Build a PolynomialSpec from (root, multiplicity) pairs reduced mod p."""
    return PolynomialSpec(tuple((int(a) % p, int(e)) for a, e in roots))


def is_lth_power(f: PolynomialSpec, l: int) -> bool:
    """True iff f is an l-th power over the algebraic closure (all e_i = 0 mod l)."""
    return all(e % l == 0 for _, e in f.roots)


def _powmod_vec(base: np.ndarray, e: int, p: int) -> np.ndarray:
    out = np.ones_like(base)
    b = base % p
    while e:
        if e & 1:
            out = out * b % p
        b = b * b % p
        e >>= 1
    return out


def polynomial_char_sum(chi: MultiplicativeCharacter, f: PolynomialSpec, method: str = FAST) -> SumValue:
    """Complete sum of chi(f(x)) over x in F_p, evaluating f(x) directly."""
    p = chi.p
    if method == NAIVE:
        t = _Tally(chi)
        for x in range(p):
            t.add(f.evaluate(x, p))
        return t.result()
    xs = np.arange(p, dtype=np.int64)
    vals = np.ones(p, dtype=np.int64)
    for a, e in f.roots:
        vals = vals * _powmod_vec(xs - a, e, p) % p
    counts = np.bincount(vals, minlength=p).astype(np.int64)
    return char_hist(chi, counts)


# Per-x inner sums  s_x = sum_{a in A} chi(a + x)

def shifted_sign_sums(chi: MultiplicativeCharacter, A: ResidueSet) -> np.ndarray:
    """Integer s_x for every x, quadratic characters only."""
    if not chi.is_quadratic:
        raise ValueError("integer inner sums need the quadratic character")
    p = chi.p
    signs = np.where(chi.classes == 0, 1, -1).astype(np.int64)
    signs[0] = 0
    # s_x = sum_a signs[a + x] is the cyclic correlation of 1_A with signs
    s = np.zeros(p, dtype=np.int64)
    for a in A:
        s += np.roll(signs, -a)
    return s


def shifted_sums(chi: MultiplicativeCharacter, A: ResidueSet, chunk_cells: int = 1 << 22) -> np.ndarray:
    """Complex s_x for every x, each rendered from its own exact histogram."""
    p, n = chi.p, chi.p - 1
    roots = unit_roots(n)
    out = np.zeros(p, dtype=np.complex128)
    if not len(A):
        return out
    step = max(1, chunk_cells // n)
    a = A.array
    for lo in range(0, p, step):
        xs = np.arange(lo, min(p, lo + step), dtype=np.int64)
        cls = chi.classes[(xs[:, None] + a[None, :]) % p]
        rows = np.repeat(np.arange(xs.size), a.size)
        flat = cls.ravel()
        keep = flat >= 0
        hist = np.zeros((xs.size, n), dtype=np.int64)
        np.add.at(hist, (rows[keep], flat[keep]), 1)
        out[lo : lo + xs.size] = hist @ roots
    return out


def _float_power_sum(mags: np.ndarray, k: int) -> float:
    return math.fsum(float(m) ** (2 * k) for m in mags)


def moment_sum(chi: MultiplicativeCharacter, A: ResidueSet, k: int, method: str = "auto") -> int | float:
    """Sum over x in F_p of |sum_{a in A} chi(a + x)|^(2k).

    ``method``: "auto" (exact int for quadratic chi, float otherwise),
    "exact" (quadratic only), "float", or "naive" (term-by-term oracle).
    Rounding on the float path is at most about 2k * p * 8 ulp relative.
    """
    if chi.is_trivial:
        raise TrivialCharacter("moment bound needs a nontrivial character")
    if k < 1:
        raise ValueError("k must be >= 1")
    _check(chi, A)
    if method == "auto":
        method = "exact" if chi.is_quadratic else "float"
    if method == "exact":
        s = shifted_sign_sums(chi, A)
        return sum(c * int(v) ** (2 * k) for v, c in Counter(s.tolist()).items())
    if len(A) > 1 and 2 * k * math.log2(len(A)) + math.log2(chi.p) > 1000:
        raise KTooLarge(f"|A|^(2k) overflows floats for k={k}; use the exact path")
    if method == "float":
        return _float_power_sum(np.abs(shifted_sums(chi, A)), k)
    if method != NAIVE:
        raise ValueError(f"unknown method {method!r}")
    mags = []
    for x in range(chi.p):
        t = _Tally(chi)
        for a in A:
            t.add(a + x)
        s = t.result()
        mags.append(abs(s.exact) if s.exact is not None else abs(s.value))
    return _float_power_sum(np.array(mags, dtype=np.float64), k)
