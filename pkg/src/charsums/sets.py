"""Residue sets, sumsets and representation functions over F_p.

Representation functions are the engine behind every fast path in the
package: r(x) counts the pairs (a, b) in A x B with a + b = x (additive) or
a * b = x (multiplicative).  Additive ones are cyclic convolutions of
indicator vectors of length p; multiplicative ones are cyclic convolutions of
length p - 1 after moving the indicators through the discrete log.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable

import numpy as np

from .convolution import cyclic_convolve
from .errors import ContextMismatch, SizeTooLarge, ZeroDilation
from .field import FieldContext

log = logging.getLogger(__name__)

ADDITIVE = "additive"
MULTIPLICATIVE = "multiplicative"


@dataclass(frozen=True, eq=False)
class ResidueSet:
    """A subset of F_p, held as a sorted tuple with a lazily built bit view."""

    ctx: FieldContext
    elements: tuple[int, ...]

    def __post_init__(self):
        els = self.elements
        if any(b <= a for a, b in zip(els, els[1:])):
            raise ValueError("elements must be strictly increasing")
        if els and not (0 <= els[0] and els[-1] < self.ctx.p):
            raise ValueError(f"elements must lie in [0, {self.ctx.p - 1}]")

    @property
    def p(self) -> int:
        return self.ctx.p

    @cached_property
    def bits(self) -> np.ndarray:
        b = np.zeros(self.ctx.p, dtype=bool)
        b[list(self.elements)] = True
        b.setflags(write=False)
        return b

    @cached_property
    def array(self) -> np.ndarray:
        a = np.array(self.elements, dtype=np.int64)
        a.setflags(write=False)
        return a

    @cached_property
    def mask(self) -> int:
        """Bit i set iff i is in the set; used by the bitset searches."""
        m = 0
        for x in self.elements:
            m |= 1 << x
        return m

    def indicator(self) -> np.ndarray:
        return self.bits.astype(np.int64)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x: object) -> bool:
        return isinstance(x, (int, np.integer)) and 0 <= x < self.ctx.p and bool(self.bits[x])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ResidueSet)
            and other.ctx.p == self.ctx.p
            and other.elements == self.elements
        )

    def __hash__(self) -> int:
        return hash((self.ctx.p, self.elements))

    def __repr__(self) -> str:
        shown = ", ".join(map(str, self.elements[:12]))
        more = ", ..." if len(self.elements) > 12 else ""
        return f"ResidueSet(p={self.ctx.p}, {{{shown}{more}}})"


def residue_set(ctx: FieldContext, values: Iterable[int]) -> ResidueSet:
    """Reduce mod p, dedupe and sort."""
    return ResidueSet(ctx, tuple(sorted({int(v) % ctx.p for v in values})))


def from_bits(ctx: FieldContext, bits: np.ndarray) -> ResidueSet:
    return ResidueSet(ctx, tuple(int(i) for i in np.flatnonzero(bits)))


def full_set(ctx: FieldContext) -> ResidueSet:
    return ResidueSet(ctx, tuple(range(ctx.p)))


def check_context(*sets: ResidueSet) -> FieldContext:
    ctx = sets[0].ctx
    for s in sets[1:]:
        if s.ctx.p != ctx.p:
            raise ContextMismatch(f"sets over p={ctx.p} and p={s.ctx.p}")
    return ctx


def sumset(A: ResidueSet, B: ResidueSet) -> ResidueSet:
    ctx = check_context(A, B)
    if not len(A) or not len(B):
        return ResidueSet(ctx, ())
    sums = (A.array[:, None] + B.array[None, :]) % ctx.p
    return from_bits(ctx, np.bincount(sums.ravel(), minlength=ctx.p) > 0)


def difference_set(A: ResidueSet, B: ResidueSet) -> ResidueSet:
    """{a - b : a in A, b in B}."""
    ctx = check_context(A, B)
    if not len(A) or not len(B):
        return ResidueSet(ctx, ())
    diffs = (A.array[:, None] - B.array[None, :]) % ctx.p
    return from_bits(ctx, np.bincount(diffs.ravel(), minlength=ctx.p) > 0)


def dilate(C: ResidueSet, d: int) -> ResidueSet:
    d %= C.p
    if d == 0:
        raise ZeroDilation("dilation by 0 collapses the set")
    return residue_set(C.ctx, (C.array * d % C.p).tolist())


def translate(B: ResidueSet, a: int) -> ResidueSet:
    return residue_set(B.ctx, ((B.array + a) % B.p).tolist())


@dataclass(frozen=True)
class RepresentationFunction:
    """Integer counts r(x) of representations of each residue x.

    For the multiplicative kind, pairs involving 0 are not represented in
    ``counts`` (so ``counts[0] == 0``); their number is kept in ``dropped``.
    """

    kind: str
    counts: np.ndarray
    dropped: int = 0

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def energy(self) -> int:
        """Sum of r(x)^2, computed with Python ints."""
        c = self.counts[self.counts != 0]
        return sum(int(v) * int(v) for v in c)


def additive_counts(A: ResidueSet, B: ResidueSet, method: str = "auto") -> np.ndarray:
    check_context(A, B)
    return cyclic_convolve(A.indicator(), B.indicator(), method)


def multiplicative_counts(
    ctx: FieldContext, x: np.ndarray, y: np.ndarray, method: str = "auto"
) -> np.ndarray:
    """Multiplicative convolution of two count vectors indexed by residue.

    Entries at 0 are ignored; the result has ``out[0] == 0``.
    """
    n = ctx.p - 1
    # powers[t] = g^t, so x[powers] is x moved onto the exponent group Z_{p-1}
    conv = cyclic_convolve(x[ctx.powers], y[ctx.powers], method)
    out = np.zeros(ctx.p, dtype=np.int64)
    out[ctx.powers] = conv[:n]
    return out


def representation_function(
    A: ResidueSet, B: ResidueSet, kind: str = ADDITIVE, method: str = "auto"
) -> RepresentationFunction:
    ctx = check_context(A, B)
    if kind == ADDITIVE:
        return RepresentationFunction(ADDITIVE, additive_counts(A, B, method))
    if kind != MULTIPLICATIVE:
        raise ValueError(f"unknown representation kind {kind!r}")
    za, zb = int(0 in A), int(0 in B)
    dropped = len(A) * len(B) - (len(A) - za) * (len(B) - zb)
    if dropped:
        log.info("dropped %d pairs involving 0 from multiplicative representation", dropped)
    counts = multiplicative_counts(ctx, A.indicator(), B.indicator(), method)
    return RepresentationFunction(MULTIPLICATIVE, counts, dropped)


def additive_energy(A: ResidueSet, B: ResidueSet) -> int:
    """E_+(A, B) = #{(a, a', b, b') : a + b = a' + b'} = sum of r_{A+B}(x)^2."""
    return representation_function(A, B, ADDITIVE).energy()


def multiplicative_energy(A: ResidueSet, B: ResidueSet) -> int:
    """E_x(A, B) over the nonzero parts of A and B."""
    return representation_function(A, B, MULTIPLICATIVE).energy()


def random_subset(ctx: FieldContext, n: int, seed: int) -> ResidueSet:
    """Uniform n-subset of F_p, deterministic in ``seed``.

    Draws with numpy's PCG64 ``Generator.choice(p, n, replace=False)`` seeded
    by ``seed`` reduced to 64 bits.
    """
    if not 0 <= n <= ctx.p:
        raise SizeTooLarge(f"cannot draw {n} distinct residues mod {ctx.p}")
    rng = np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)
    picked = rng.choice(ctx.p, size=n, replace=False)
    return ResidueSet(ctx, tuple(sorted(int(v) for v in picked)))


def random_subset_rng(ctx: FieldContext, n: int, rng: np.random.Generator) -> ResidueSet:
    picked = rng.choice(ctx.p, size=n, replace=False)
    return ResidueSet(ctx, tuple(sorted(int(v) for v in picked)))


def load_set(ctx: FieldContext, path: str | Path) -> ResidueSet:
    """Read a set file: a JSON array of ints, or one decimal residue per line.

    Values outside [0, p-1] are rejected; duplicates are dropped with a warning.
    """
    text = Path(path).read_text()
    if text.lstrip().startswith("["):
        values = json.loads(text)
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in values):
            raise ValueError(f"{path}: JSON set must be an array of integers")
    else:
        values = [int(line) for line in text.split() if line.strip()]
    bad = [v for v in values if not 0 <= v < ctx.p]
    if bad:
        raise ValueError(f"{path}: residues out of range mod {ctx.p}: {bad[:5]}")
    if len(set(values)) != len(values):
        log.warning("%s: dropped %d duplicate residues", path, len(values) - len(set(values)))
    return residue_set(ctx, values)
