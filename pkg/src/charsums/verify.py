"""Checkable instances of the exact inequalities behind Burgess-type bounds.

Each ``check_*`` function evaluates both sides of one inequality on concrete
sets and returns a :class:`BoundReport`.  Whenever both sides can be compared
in integers (quadratic characters, energies, set sizes) the verdict is exact;
irrational right-hand sides like ``c * sqrt(p)`` are compared by squaring.
Float verdicts allow a relative 1e-9 to absorb rendering rounding only.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import mpmath
import numpy as np

from .errors import PreconditionFailed, TrivialCharacter, ZeroInMultiplicativeSet
from .field import FieldContext, MultiplicativeCharacter, make_character
from .sets import (
    ADDITIVE,
    MULTIPLICATIVE,
    ResidueSet,
    additive_energy,
    check_context,
    difference_set,
    dilate,
    multiplicative_energy,
    random_subset_rng,
    representation_function,
    residue_set,
    sumset,
    translate,
)
from .sums import (
    SumValue,
    empty_sum,
    mixed_quaternary_sum,
    moment_sum,
    mult_ternary_sum,
    paley_sum,
    shifted_sign_sums,
    shifted_sums,
    ternary_sum,
)

REL_TOL = 1e-9


def _float_holds(lhs: float, rhs: float) -> bool:
    return lhs <= rhs * (1 + REL_TOL)


def _slack(lhs: float, rhs: float) -> float:
    return math.inf if lhs == 0 else rhs / lhs


@dataclass(frozen=True)
class BoundReport:
    name: str
    lhs: float
    rhs: float
    holds: bool
    slack: float
    params: dict = field(default_factory=dict)
    exact: bool = False

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "holds": self.holds,
            "slack": None if math.isinf(self.slack) else self.slack,
            "params": self.params,
            "exact": self.exact,
        }


def _report(name, lhs, rhs, holds, params, exact) -> BoundReport:
    return BoundReport(name, lhs, rhs, bool(holds), _slack(float(lhs), float(rhs)), params, exact)


def _char_params(chi: MultiplicativeCharacter) -> dict:
    return {"p": chi.p, "chi": chi.m, "order": chi.order}


def _require_nontrivial(chi: MultiplicativeCharacter) -> None:
    if chi.is_trivial:
        raise TrivialCharacter("inequality requires a nontrivial character")


def _le_int_plus_sqrt(lhs: int, q: int, c: int, p: int) -> bool:
    """Exact test of lhs <= q + c*sqrt(p) for integers with c >= 0."""
    d = lhs - q
    return d <= 0 or d * d <= c * c * p


def check_moment_bound(chi: MultiplicativeCharacter, A: ResidueSet, k: int) -> BoundReport:
    """sum_x |sum_a chi(a+x)|^2k <= |A|^2k * 2k * sqrt(p) + (2k|A|)^k * p."""
    _require_nontrivial(chi)
    p, n = chi.p, len(A)
    lhs = moment_sum(chi, A, k)
    c = n ** (2 * k) * 2 * k
    q = (2 * k * n) ** k * p
    rhs = c * math.sqrt(p) + q
    params = {**_char_params(chi), "k": k, "size_A": n}
    if isinstance(lhs, int):
        return _report("moment", lhs, rhs, _le_int_plus_sqrt(lhs, q, c, p), params, True)
    return _report("moment", lhs, rhs, _float_holds(lhs, rhs), params, False)


def check_energy_bound(
    chi: MultiplicativeCharacter, A: ResidueSet, B: ResidueSet, C: ResidueSet
) -> BoundReport:
    """|S_chi(A, B, C)| <= sqrt(p * |A| * E_+(B, C))."""
    _require_nontrivial(chi)
    p = chi.p
    s = ternary_sum(chi, A, B, C)
    e = additive_energy(B, C)
    rhs = math.sqrt(p * len(A) * e)
    params = {**_char_params(chi), "size_A": len(A), "size_B": len(B), "size_C": len(C), "energy_BC": e}
    if s.exact is not None:
        return _report("energy", abs(s.exact), rhs, s.exact**2 <= p * len(A) * e, params, True)
    return _report("energy", s.magnitude, rhs, _float_holds(s.magnitude, rhs), params, False)


def burgess_lhs(chi: MultiplicativeCharacter, A: ResidueSet, B: ResidueSet, C: ResidueSet) -> float | int:
    """sum_x r(x) |sum_{c in C} chi(x + c)| with r the product counts of A x B."""
    r = representation_function(A, B, MULTIPLICATIVE).counts
    support = np.flatnonzero(r)
    if chi.is_quadratic:
        s = shifted_sign_sums(chi, C)
        return sum(int(r[x]) * abs(int(s[x])) for x in support)
    mags = np.abs(shifted_sums(chi, C))
    return math.fsum(float(r[x]) * float(mags[x]) for x in support)


def burgess_rhs(p: int, size_a: int, size_b: int, ea: int, eb: int, size_c: int, k: int) -> float:
    if size_a == 0 or size_b == 0:
        return 0.0
    moment = size_c ** (2 * k) * 2 * k * math.sqrt(p) + (2 * k * size_c) ** k * p
    return (
        (size_a * size_b) ** (1 - 1 / k)
        * float(ea) ** (1 / (4 * k))
        * float(eb) ** (1 / (4 * k))
        * moment ** (1 / (2 * k))
    )


def check_burgess_bound(
    chi: MultiplicativeCharacter, A: ResidueSet, B: ResidueSet, C: ResidueSet, k: int
) -> BoundReport:
    """Hoelder + Weil amplification bound with multiplicative energies of A and B."""
    _require_nontrivial(chi)
    if k < 1:
        raise ValueError("k must be >= 1")
    if 0 in A or 0 in B:
        raise ZeroInMultiplicativeSet("A and B must avoid 0")
    check_context(A, B, C)
    ea = multiplicative_energy(A, A)
    eb = multiplicative_energy(B, B)
    lhs = burgess_lhs(chi, A, B, C)
    rhs = burgess_rhs(chi.p, len(A), len(B), ea, eb, len(C), k)
    params = {
        **_char_params(chi),
        "k": k,
        "size_A": len(A),
        "size_B": len(B),
        "size_C": len(C),
        "mult_energy_A": ea,
        "mult_energy_B": eb,
    }
    return _report("burgess", lhs, rhs, _float_holds(float(lhs), rhs), params, False)


def check_cs_energy(A: ResidueSet, B: ResidueSet, kind: str = ADDITIVE) -> BoundReport:
    """E(A, B)^2 <= E(A, A) * E(B, B), additive or multiplicative."""
    energy = additive_energy if kind == ADDITIVE else multiplicative_energy
    eab, eaa, ebb = energy(A, B), energy(A, A), energy(B, B)
    params = {"p": A.p, "kind": kind, "size_A": len(A), "size_B": len(B), "E_AB": eab, "E_AA": eaa, "E_BB": ebb}
    return _report("cs-energy", eab * eab, eaa * ebb, eab * eab <= eaa * ebb, params, True)


def check_ruzsa(A: ResidueSet) -> BoundReport:
    """|A - A| <= (|A + A| / |A|)^2 |A|, decided as |A - A| * |A| <= |A + A|^2."""
    n = len(A)
    if n == 0:
        raise ValueError("A must be nonempty")
    diff = len(difference_set(A, A))
    ss = len(sumset(A, A))
    params = {"p": A.p, "size_A": n, "size_sumset": ss, "size_diffset": diff}
    return _report("ruzsa", diff, ss * ss / n, diff * n <= ss * ss, params, True)


def _angle_gap(u: complex, v: complex) -> float:
    d = abs(cmath.phase(u) - cmath.phase(v))
    return min(d, 2 * math.pi - d)


def arg_spread(values: Sequence[complex]) -> float:
    """max_j |arg z_1 - arg z_j| over the nonzero values, on the circle."""
    nz = [complex(z) for z in values if z != 0]
    if len(nz) < 2:
        return 0.0
    return max(_angle_gap(nz[0], z) for z in nz[1:])


def check_arg_lemma(values: Sequence[complex], delta: float) -> BoundReport:
    """|z_1 + ... + z_n| >= (1 - delta)(|z_1| + ... + |z_n|) for a narrow cone."""
    spread = arg_spread(values)
    if spread > delta:
        raise PreconditionFailed(f"argument spread {spread:.6g} exceeds delta={delta}")
    zs = [complex(z) for z in values]
    lhs = (1 - delta) * math.fsum(abs(z) for z in zs)
    total = complex(math.fsum(z.real for z in zs), math.fsum(z.imag for z in zs))
    rhs = abs(total)
    params = {"n": len(zs), "delta": delta, "spread": spread}
    return _report("arg", lhs, rhs, _float_holds(lhs, rhs), params, False)


def sqrt_barrier_report(chi: MultiplicativeCharacter, A: ResidueSet, B: ResidueSet) -> BoundReport:
    """|S_chi(A, B)| <= sqrt(p|A||B|), with the trivial bound |A||B| alongside."""
    _require_nontrivial(chi)
    p = chi.p
    s = paley_sum(chi, A, B)
    trivial = len(A) * len(B)
    rhs = math.sqrt(p * trivial)
    lhs = s.magnitude
    params = {
        **_char_params(chi),
        "size_A": len(A),
        "size_B": len(B),
        "trivial_bound": trivial,
        "saving_ratio": lhs / trivial if trivial else 0.0,
    }
    if s.exact is not None:
        return _report("sqrt-barrier", abs(s.exact), rhs, s.exact**2 <= p * trivial, params, True)
    return _report("sqrt-barrier", lhs, rhs, _float_holds(lhs, rhs), params, False)


@dataclass(frozen=True)
class DeltaReport:
    """Normalised size delta = |H| / (|A||B||C||D|) plus both decompositions."""

    delta: float
    value: SumValue
    dilate_sum: SumValue
    translate_sum: SumValue
    sizes: tuple[int, int, int, int]

    @property
    def dilate_identity(self) -> bool:
        return self.value == self.dilate_sum

    @property
    def translate_identity(self) -> bool:
        return self.value == self.translate_sum


def _scaled(s: SumValue, factor: int) -> SumValue:
    return SumValue(s.modulus, s.hist * factor, s.zeros * factor)


def dilate_decomposition(chi, A, B, C, D) -> SumValue:
    """sum over d in D of S_chi(A, B, d.C); the d = 0 term is |C| * S_chi(A, B)."""
    total = empty_sum(chi.p - 1)
    for d in D:
        if d == 0:
            total = total + _scaled(paley_sum(chi, A, B), len(C))
        else:
            total = total + ternary_sum(chi, A, B, dilate(C, d))
    return total


def translate_decomposition(chi, A, B, C, D) -> SumValue:
    """sum over a in A of M_chi(a + B, C, D)."""
    total = empty_sum(chi.p - 1)
    for a in A:
        total = total + mult_ternary_sum(chi, translate(B, a), C, D)
    return total


def delta_report(chi, A, B, C, D) -> DeltaReport:
    h = mixed_quaternary_sum(chi, A, B, C, D)
    sizes = (len(A), len(B), len(C), len(D))
    denom = math.prod(sizes)
    delta = h.magnitude / denom if denom else 0.0
    return DeltaReport(
        delta=delta,
        value=h,
        dilate_sum=dilate_decomposition(chi, A, B, C, D),
        translate_sum=translate_decomposition(chi, A, B, C, D),
        sizes=sizes,
    )


def check_decomposition(chi, A, B, C, D) -> BoundReport:
    """delta <= 1 together with both exact decomposition identities."""
    rep = delta_report(chi, A, B, C, D)
    params = {
        **_char_params(chi),
        "sizes": list(rep.sizes),
        "dilate_identity": rep.dilate_identity,
        "translate_identity": rep.translate_identity,
    }
    holds = rep.dilate_identity and rep.translate_identity and rep.delta <= 1 + REL_TOL
    return _report("decomposition", rep.delta, 1.0, holds, params, True)


# Size hypotheses of the mixed-sum theorem and its corollary

COROLLARY_DELTA = Fraction(1, 2) - Fraction(1, 176)


def as_fraction(x) -> Fraction:
    """Exact rational from an int, Fraction, decimal string or float (via repr)."""
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def _pow_compare(base: int, p: int, exponent: Fraction) -> int:
    """Sign of base - p^exponent, decided exactly.

    For prime p, base^v == p^u can only happen when base is a power of p, so
    that case is settled by integer division.  Otherwise the two sides differ
    and the sign of log(base) - exponent*log(p) is resolved with mpmath at
    increasing precision until the gap clears the rounding error.
    """
    if base <= 0:
        return -1
    j, rest = 0, base
    while rest % p == 0:
        rest //= p
        j += 1
    if rest == 1:
        return (j > exponent) - (j < exponent)
    prec = 64
    while True:
        with mpmath.workprec(prec):
            gap = mpmath.log(base) - mpmath.mpf(exponent.numerator) / exponent.denominator * mpmath.log(p)
            scale = abs(mpmath.log(base)) + abs(exponent) * mpmath.log(p) + 1
            if abs(gap) > scale * mpmath.mpf(2) ** (16 - prec):
                return 1 if gap > 0 else -1
        prec *= 2


@dataclass(frozen=True)
class HypothesisReport:
    p: int
    sizes: dict
    delta: str
    eps: str
    above_p_delta: dict
    small_C: bool
    product_small_C: bool
    product_large_C: bool
    case_small_C: bool
    case_large_C: bool
    corollary: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def hypotheses_from_sizes(p: int, a: int, b: int, c: int, d: int, delta, eps) -> HypothesisReport:
    """Evaluate the size predicates exactly (big-integer powers near boundaries).

    small-C case:  all sizes > p^delta, |C| < sqrt(p),
                   |D|^4 |A|^56 |B|^28 |C|^33 >= p^(60 + eps)
    large-C case:  |A|, |B|, |D| > p^delta, |C| >= sqrt(p),
                   |D|^8 |A|^112 |B|^56 >= p^(87 + eps)
    corollary:     delta > 1/2 - 1/176 and all sizes > p^delta
    """
    dl, ep = as_fraction(delta), as_fraction(eps)
    sizes = {"A": a, "B": b, "C": c, "D": d}
    above = {k: _pow_compare(v, p, dl) > 0 for k, v in sizes.items()}
    small_c = c * c < p
    prod1 = d**4 * a**56 * b**28 * c**33
    prod2 = d**8 * a**112 * b**56
    pred1 = _pow_compare(prod1, p, 60 + ep) >= 0
    pred2 = _pow_compare(prod2, p, 87 + ep) >= 0
    case1 = all(above.values()) and small_c and pred1
    case2 = above["A"] and above["B"] and above["D"] and not small_c and pred2
    return HypothesisReport(
        p=p,
        sizes=sizes,
        delta=str(dl),
        eps=str(ep),
        above_p_delta=above,
        small_C=small_c,
        product_small_C=pred1,
        product_large_C=pred2,
        case_small_C=case1,
        case_large_C=case2,
        corollary=dl > COROLLARY_DELTA and all(above.values()),
    )


def theorem_hypotheses(A, B, C, D, delta, eps) -> HypothesisReport:
    ctx = check_context(A, B, C, D)
    return hypotheses_from_sizes(ctx.p, len(A), len(B), len(C), len(D), delta, eps)


# Diagnostics for statements whose implied constants are unquantified

def bsg_diagnostics(A: ResidueSet) -> dict:
    """Ingredients of the Balog-Szemeredi-Gowers step; no verdict is given."""
    n = len(A)
    e = additive_energy(A, A)
    return {
        "p": A.p,
        "size": n,
        "additive_energy": e,
        "K": n**3 / e if e else math.inf,
        "size_sumset": len(sumset(A, A)),
        "size_diffset": len(difference_set(A, A)),
    }


def rudnev_diagnostics(A: ResidueSet) -> dict:
    """E_x(A, A) against |A| |A+A|^(7/4) log|A|; the constant is not known."""
    n = len(A)
    e = multiplicative_energy(A, A)
    ss = len(sumset(A, A))
    scale = n * ss**1.75 * math.log(n) if n > 1 else 0.0
    return {
        "p": A.p,
        "size": n,
        "mult_energy": e,
        "size_sumset": ss,
        "variable_part": scale,
        "ratio": e / scale if scale else math.inf,
        "applicable": n * n < A.p,
    }


# Seeded sweeps

CHECKS = ("moment", "energy", "burgess", "cs-energy", "ruzsa", "arg", "sqrt-barrier", "decomposition")


def _size(rng: np.random.Generator, p: int, cap: int) -> int:
    return int(rng.integers(1, min(p, cap) + 1))


def _rand_set(ctx, rng, cap, nonzero=False) -> ResidueSet:
    if not nonzero:
        return random_subset_rng(ctx, _size(rng, ctx.p, cap), rng)
    picked = rng.choice(np.arange(1, ctx.p), size=_size(rng, ctx.p - 1, cap), replace=False)
    return residue_set(ctx, picked.tolist())


def _rand_chi(ctx, rng, chi_index):
    if chi_index is not None:
        return make_character(ctx, chi_index)
    return make_character(ctx, int(rng.integers(1, ctx.p - 1)))


def random_cone(rng: np.random.Generator, delta: float | None = None) -> tuple[list[complex], float]:
    """Random values whose arguments lie within delta of the first one."""
    if delta is None:
        delta = float(rng.uniform(0, 0.5))
    n = int(rng.integers(1, 11))
    theta0 = float(rng.uniform(-math.pi, math.pi))
    # keep strictly inside the cone so phase() rounding cannot leave it
    offsets = rng.uniform(-delta, delta, size=n) * (1 - 1e-9)
    offsets[0] = 0.0
    mags = rng.uniform(0.01, 10.0, size=n)
    return [complex(cmath.rect(float(m), theta0 + float(o))) for m, o in zip(mags, offsets)], delta


def instance_reports(
    check: str, ctx: FieldContext, seed: int, trial: int, ks: Sequence[int], chi_index: int | None = None
) -> list[BoundReport]:
    """Reports for one seeded instance; independent of scheduling."""
    rng = np.random.default_rng([seed, ctx.p, CHECKS.index(check), trial])
    p = ctx.p
    cap = max(4, int(2 * math.isqrt(p)))
    if check == "moment":
        chi, A = _rand_chi(ctx, rng, chi_index), _rand_set(ctx, rng, cap)
        return [check_moment_bound(chi, A, k) for k in ks]
    if check == "energy":
        chi = _rand_chi(ctx, rng, chi_index)
        return [check_energy_bound(chi, _rand_set(ctx, rng, cap), _rand_set(ctx, rng, cap), _rand_set(ctx, rng, cap))]
    if check == "burgess":
        chi = _rand_chi(ctx, rng, chi_index)
        A, B = _rand_set(ctx, rng, cap, nonzero=True), _rand_set(ctx, rng, cap, nonzero=True)
        C = _rand_set(ctx, rng, cap)
        return [check_burgess_bound(chi, A, B, C, k) for k in ks]
    if check == "cs-energy":
        kind = ADDITIVE if trial % 2 == 0 else MULTIPLICATIVE
        return [check_cs_energy(_rand_set(ctx, rng, cap), _rand_set(ctx, rng, cap), kind)]
    if check == "ruzsa":
        return [check_ruzsa(_rand_set(ctx, rng, cap))]
    if check == "arg":
        values, delta = random_cone(rng)
        return [check_arg_lemma(values, delta)]
    if check == "sqrt-barrier":
        chi = _rand_chi(ctx, rng, chi_index)
        return [sqrt_barrier_report(chi, _rand_set(ctx, rng, cap), _rand_set(ctx, rng, cap))]
    if check == "decomposition":
        chi = _rand_chi(ctx, rng, chi_index)
        sets = [_rand_set(ctx, rng, 8) for _ in range(4)]
        return [check_decomposition(chi, *sets)]
    raise ValueError(f"unknown check {check!r}")


def run_sweep(
    checks: Sequence[str],
    ctx: FieldContext,
    trials: int,
    seed: int,
    ks: Sequence[int] = (1, 2, 3),
    chi_index: int | None = None,
    threads: int = 1,
) -> list[BoundReport]:
    """All reports for ``checks`` x ``trials``, ordered by (check, trial)."""
    jobs = [(c, t) for c in checks for t in range(trials)]
    run: Callable = lambda job: instance_reports(job[0], ctx, seed, job[1], ks, chi_index)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            batches = list(pool.map(run, jobs))
    else:
        batches = [run(j) for j in jobs]
    return [r for batch in batches for r in batch]
