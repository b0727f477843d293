import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from charsums.errors import PreconditionFailed, TrivialCharacter, ZeroInMultiplicativeSet
from charsums.field import legendre, make_character, make_field
from charsums.sets import MULTIPLICATIVE, full_set, random_subset, residue_set
from charsums.sums import NAIVE, mixed_quaternary_sum, ternary_sum
from charsums.verify import (
    COROLLARY_DELTA,
    CHECKS,
    arg_spread,
    bsg_diagnostics,
    check_arg_lemma,
    check_burgess_bound,
    check_cs_energy,
    check_energy_bound,
    check_moment_bound,
    check_ruzsa,
    delta_report,
    hypotheses_from_sizes,
    random_cone,
    rudnev_diagnostics,
    run_sweep,
    sqrt_barrier_report,
    theorem_hypotheses,
)

from conftest import brute_additive_energy, rset


@pytest.fixture
def chi7():
    return legendre(make_field(7))


def test_moment_bound_example(chi7):
    r = check_moment_bound(chi7, rset(7, [1, 2]), 1)
    assert r.lhs == 10 and r.exact and r.holds
    assert r.rhs == pytest.approx(8 * math.sqrt(7) + 28)
    assert r.rhs == pytest.approx(49.166, abs=1e-3)


def test_moment_bound_singleton():
    for p in (7, 31, 101):
        ctx = make_field(p)
        chi = make_character(ctx, 1)
        r = check_moment_bound(chi, rset(p, [5]), 1)
        assert r.lhs == pytest.approx(p - 1)
        assert r.rhs == pytest.approx(2 * math.sqrt(p) + 2 * p)
        assert r.holds


def test_moment_bound_rejects_trivial(chi7):
    with pytest.raises(TrivialCharacter):
        check_moment_bound(make_character(chi7.ctx, 0), rset(7, [1]), 1)


def test_energy_bound_examples(chi7):
    one = rset(7, [2])
    r = check_energy_bound(chi7, one, one, one)
    assert r.lhs <= 1 and r.holds
    F = full_set(make_field(7))
    r = check_energy_bound(chi7, F, F, F)
    assert r.lhs == 0 and r.holds and math.isinf(r.slack)


def test_burgess_examples(chi7):
    one = rset(7, [1])
    r = check_burgess_bound(chi7, one, one, one, 1)
    assert r.lhs == 1 and r.holds
    r = check_burgess_bound(chi7, rset(7, [1, 3]), rset(7, [2, 5]), full_set(make_field(7)), 2)
    assert r.lhs == 0
    with pytest.raises(ZeroInMultiplicativeSet):
        check_burgess_bound(chi7, rset(7, [0, 1]), one, one, 1)


def test_burgess_lhs_against_direct_sum():
    ctx = make_field(31)
    chi = make_character(ctx, 5)
    A = rset(31, [1, 2, 7])
    B = rset(31, [3, 4])
    C = rset(31, [0, 5, 9, 10])
    direct = 0.0
    vals = {}
    for a in A:
        for b in B:
            x = a * b % 31
            vals.setdefault(x, ternary_sum(chi, rset(31, [x]), rset(31, [0]), C, NAIVE).magnitude)
            direct += vals[x]
    assert check_burgess_bound(chi, A, B, C, 1).lhs == pytest.approx(direct, rel=1e-12)


def test_cs_energy_examples():
    A = rset(7, [0, 1, 2])
    r = check_cs_energy(A, A)
    assert r.slack == 1 and r.holds
    B = rset(7, [0, 2, 3])
    r = check_cs_energy(A, B)
    eab, eaa, ebb = brute_additive_energy(A, B), brute_additive_energy(A, A), brute_additive_energy(B, B)
    assert (r.lhs, r.rhs) == (eab**2, eaa * ebb)
    assert r.holds


def test_cs_energy_multiplicative_subgroups():
    ctx = make_field(31)
    subgroups = [residue_set(ctx, ctx.powers[:: 30 // d].tolist()) for d in (2, 3, 5, 6, 10, 15, 30)]
    for H in subgroups:
        for K in subgroups:
            assert check_cs_energy(H, K, MULTIPLICATIVE).holds


def test_ruzsa_examples():
    r = check_ruzsa(rset(1009, [0, 1, 3]))
    assert (r.lhs, r.rhs, r.holds) == (7, 12.0, True)
    for n in (1, 2, 5, 20):
        A = rset(1009, range(0, 3 * n, 3))
        r = check_ruzsa(A)
        assert r.lhs == 2 * n - 1
        assert r.holds


def test_arg_lemma_examples():
    r = check_arg_lemma([1, cmath.exp(0.3j)], 0.3)
    assert r.rhs == pytest.approx(2 * math.cos(0.15))
    assert r.rhs == pytest.approx(1.9775, abs=1e-4)
    assert r.lhs == pytest.approx(1.4)
    assert r.holds
    r = check_arg_lemma([2 + 1j], 0.0)
    assert r.lhs == pytest.approx(r.rhs) and r.holds


def _pairwise_oracle(values, delta):
    nz = [z for z in values if z != 0]
    for z in nz[1:]:
        d = (math.atan2(z.imag, z.real) - math.atan2(nz[0].imag, nz[0].real)) % (2 * math.pi)
        if min(d, 2 * math.pi - d) > delta:
            return False
    return True


def test_arg_precondition_matches_oracle():
    rng = np.random.default_rng(17)
    for _ in range(300):
        values, delta = random_cone(rng)
        # widen about half of the cones past their delta
        if rng.random() < 0.5 and len(values) > 1:
            values[-1] = values[-1] * cmath.exp(1j * float(rng.choice([-1, 1])) * (delta + 0.05))
        if _pairwise_oracle(values, delta):
            assert check_arg_lemma(values, delta).holds
        else:
            with pytest.raises(PreconditionFailed):
                check_arg_lemma(values, delta)
    assert arg_spread([1, -1]) == pytest.approx(math.pi)


def test_sqrt_barrier_examples(chi7):
    qr = rset(7, [1, 2, 4])
    r = sqrt_barrier_report(chi7, qr, qr)
    assert r.exact and r.holds
    assert r.rhs == pytest.approx(math.sqrt(63))
    assert r.params["trivial_bound"] == 9
    F = full_set(make_field(7))
    assert sqrt_barrier_report(chi7, F, F).lhs == 0


def test_delta_report_examples(chi7):
    one = rset(7, [1])
    rep = delta_report(chi7, one, one, one, one)
    assert rep.delta == 1
    A, B, D = rset(7, [0, 3]), rset(7, [1, 5]), rset(7, [2, 4, 6])
    rep = delta_report(chi7, A, B, one, D)
    assert rep.delta == pytest.approx(ternary_sum(chi7, A, B, D).magnitude / 12)
    assert rep.dilate_identity and rep.translate_identity


def test_delta_report_random_p101():
    ctx = make_field(101)
    rng = np.random.default_rng(0)
    for i in range(10):
        chi = make_character(ctx, int(rng.integers(1, 100)))
        sets = [random_subset(ctx, int(rng.integers(1, 6)), 10 * i + j) for j in range(4)]
        rep = delta_report(chi, *sets)
        assert 0 <= rep.delta <= 1
        assert rep.value == mixed_quaternary_sum(chi, *sets, method=NAIVE)
        assert rep.dilate_identity and rep.translate_identity


def test_hypotheses_examples():
    p = 101
    F = full_set(make_field(p))
    rep = theorem_hypotheses(F, F, F, F, "0.25", 1)
    assert rep.product_small_C and rep.product_large_C
    assert not rep.small_C and rep.case_large_C
    one = rset(p, [1])
    rep = theorem_hypotheses(one, one, one, one, "0.1", 1)
    assert not rep.product_small_C and not rep.above_p_delta["A"]
    # |D|^4 |A|^56 |B|^28 |C|^33 = p^121 = p^(60 + 61): inclusive boundary
    rep = hypotheses_from_sizes(p, p, p, p, p, 0, 61)
    assert rep.product_small_C
    assert not hypotheses_from_sizes(p, p, p, p, p - 1, 0, 61).product_small_C
    # |D|^8 |A|^112 |B|^56 = p^176 = p^(87 + 89)
    assert hypotheses_from_sizes(p, p, p, 1, p, 0, 89).product_large_C
    assert not hypotheses_from_sizes(p, p, p, 1, p, 0, Fraction(178, 2) + Fraction(1, 10**9)).product_large_C


def test_hypotheses_size_predicates_exact():
    assert not hypotheses_from_sizes(101, 10, 10, 10, 10, "0.5", 0).above_p_delta["A"]
    assert hypotheses_from_sizes(101, 11, 11, 11, 11, "0.5", 0).above_p_delta["A"]
    # 10^2 = 100 vs p = 100 is impossible (p prime); use p^(1/2) with |A|^2 = p + 1
    assert hypotheses_from_sizes(3, 2, 2, 1, 2, Fraction(1, 2), 0).above_p_delta["A"]
    assert hypotheses_from_sizes(5, 2, 2, 2, 2, "0.5", 0).small_C


def test_corollary_threshold():
    assert COROLLARY_DELTA == Fraction(87, 176)
    p = 10007
    assert not hypotheses_from_sizes(p, p, p, p, p, COROLLARY_DELTA, 0).corollary
    assert hypotheses_from_sizes(p, p, p, p, p, COROLLARY_DELTA + Fraction(1, 10**6), 0).corollary


def test_diagnostics_have_no_verdict():
    A = random_subset(make_field(101), 8, 3)
    b, r = bsg_diagnostics(A), rudnev_diagnostics(A)
    assert "holds" not in b and "holds" not in r
    assert b["additive_energy"] == brute_additive_energy(A, A)
    assert r["applicable"]


def test_sweep_is_deterministic_and_thread_independent():
    ctx = make_field(31)
    a = run_sweep(CHECKS, ctx, 4, seed=9, ks=(1, 2))
    b = run_sweep(CHECKS, ctx, 4, seed=9, ks=(1, 2), threads=3)
    assert [r.to_dict() for r in a] == [r.to_dict() for r in b]
    assert all(r.holds for r in a)
