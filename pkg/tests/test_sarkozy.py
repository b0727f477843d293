from itertools import combinations

import numpy as np
import pytest

from charsums.field import make_field
from charsums.sarkozy import (
    NONE,
    TIMEOUT,
    WITNESS,
    decide_qr,
    decide_sumset,
    quadratic_residues,
    sarkozy_sweep,
)
from charsums.sets import full_set, residue_set, sumset, translate

from conftest import rset


def brute_decomposable(S, min_a=2, min_b=2):
    """Enumerate B inside S (after translating so that 0 lies in A) with the maximal A."""
    p, elems = S.p, list(S)
    for k in range(min_b, len(elems) + 1):
        for B in combinations(elems, k):
            A = [x for x in range(p) if all((x + b) % p in S for b in B)]
            if len(A) >= min_a and {(a + b) % p for a in A for b in B} == set(elems):
                return True
    return False


def test_qr_examples():
    assert quadratic_residues(make_field(7)).elements == (1, 2, 4)
    assert quadratic_residues(make_field(13)).elements == (1, 3, 4, 9, 10, 12)
    for p in (3, 7, 13):
        assert decide_qr(p).outcome.status == NONE


def test_witness_examples():
    S = sumset(rset(7, [0, 1]), rset(7, [0, 2]))
    assert S.elements == (0, 1, 2, 3)
    out = decide_sumset(S)
    assert out.found
    assert sumset(out.witness_A, out.witness_B) == S
    F = full_set(make_field(5))
    out = decide_sumset(F)
    assert out.status == WITNESS and sumset(out.witness_A, out.witness_B) == F


def test_indecomposable_small_targets():
    assert decide_sumset(rset(7, [0, 1])).status == NONE
    assert decide_sumset(rset(11, [0, 1, 3])).status == NONE
    with pytest.raises(ValueError):
        decide_sumset(rset(7, [0, 1]), min_a=1)


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19, 23, 29, 31])
def test_complete_against_enumeration(p):
    ctx = make_field(p)
    rng = np.random.default_rng(p)
    targets = []
    for _ in range(25):
        n = int(rng.integers(1, min(p, 8) + 1))
        targets.append(residue_set(ctx, rng.choice(p, n, replace=False).tolist()))
    for _ in range(10):
        A = residue_set(ctx, rng.choice(p, int(rng.integers(2, 4)), replace=False).tolist())
        B = residue_set(ctx, rng.choice(p, 2, replace=False).tolist())
        S = sumset(A, B)
        if len(S) <= 8:
            targets.append(S)
    for S in targets:
        want = brute_decomposable(S)
        for cd in (True, False):
            out = decide_sumset(S, cauchy_davenport=cd)
            assert out.status == (WITNESS if want else NONE), S
            if out.found:
                assert sumset(out.witness_A, out.witness_B) == S


def test_translation_invariance():
    ctx = make_field(23)
    rng = np.random.default_rng(1)
    for _ in range(30):
        S = residue_set(ctx, rng.choice(23, int(rng.integers(2, 9)), replace=False).tolist())
        t = int(rng.integers(23))
        assert decide_sumset(S).status == decide_sumset(translate(S, t)).status


def test_size_minimums_respected():
    S = sumset(rset(13, [0, 1, 2]), rset(13, [0, 5]))
    out = decide_sumset(S, min_a=3, min_b=2)
    assert out.found and min(len(out.witness_A), len(out.witness_B)) >= 2
    assert max(len(out.witness_A), len(out.witness_B)) >= 3
    assert decide_sumset(S, min_a=3, min_b=3).status == NONE


def test_budget_exhaustion_is_timeout():
    out = decide_sumset(quadratic_residues(make_field(13)), budget=1)
    assert out.status == TIMEOUT and out.witness_A is None
    assert out.nodes_explored <= 1


def test_sweep_rows():
    rows = sarkozy_sweep(3, 31)
    assert [r.p for r in rows] == [3, 5, 7, 11, 13, 17, 19, 23, 29, 31]
    for r in rows:
        d = r.to_dict()
        assert d["status"] == NONE and d["qr_size"] == (r.p - 1) // 2
        assert d["witness_A"] == []
        # |QR| < 3 is rejected by the size checks before any node is expanded
        assert d["nodes_explored"] >= (0 if d["qr_size"] < 3 else 1)
