"""Exhaustive search for sumset decompositions S = A + B with |A|, |B| >= 2.

Search
------
Translating A by t and B by -t leaves A + B unchanged, so we may assume
0 is in B.  Then A + 0 is inside S, and in general for B_cur contained in B

    A  is inside  A_cur = intersection over b in B_cur of (S - b).

The search walks B in increasing order starting from {0}.  At every node,
A_cur + B_cur is contained in S by construction, so (A_cur, B_cur) is a
witness as soon as the sizes are large enough and A_cur + B_cur covers S.

Completeness: let (A, B) be any witness with 0 in B, and b_0 = 0 < b_1 < ...
the elements of B.  Along the path {0}, {0, b_1}, ..., B we keep
A_cur >= A, so every b_i passes the candidate filter |A_cur & (S - b_i)| >=
min_a.  The cover prune never fires on this path because
A_cur + (B_cur + remaining) >= A + B = S.  At the node B_cur = B we get
S = A + B <= A_cur + B <= S, and the witness test succeeds.

Two more prunes are sound for the same reason:

* Cauchy-Davenport (a standard fact about Z/p, not proved here):
  |A + B| >= min(p, |A| + |B| - 1).  If |S| < p, any witness has
  min_a + |B| - 1 <= |S|, which bounds the depth.
* When min_a == min_b, swapping the roles of A and B lets us assume
  |B| <= |A|, so a child is only opened when |B_cur| + 1 <= |A_child|.

Sets are Python ints used as bitsets; S - b is a cyclic rotation.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .errors import InternalError
from .field import FieldContext, make_field, primes_between
from .sets import ResidueSet, residue_set, sumset

NONE = "none"
WITNESS = "witness"
TIMEOUT = "timeout"

DEFAULT_BUDGET = 10**8


def quadratic_residues(ctx: FieldContext) -> ResidueSet:
    """Nonzero squares mod p; 0 is not counted as a residue."""
    return residue_set(ctx, (x * x % ctx.p for x in range(1, ctx.p)))


@dataclass(frozen=True)
class DecompositionOutcome:
    status: str
    witness_A: ResidueSet | None
    witness_B: ResidueSet | None
    nodes_explored: int
    wall_time: float

    @property
    def found(self) -> bool:
        return self.status == WITNESS


class _BudgetExhausted(Exception):
    pass


def _elements(mask: int) -> list[int]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


class _Search:
    def __init__(self, S: ResidueSet, min_a: int, min_b: int, budget: int, cauchy_davenport: bool, symmetry: bool):
        self.p = p = S.p
        self.full = (1 << p) - 1
        self.S = S.mask
        self.size_s = len(S)
        self.min_a, self.min_b = min_a, min_b
        self.budget = budget
        self.cd = cauchy_davenport and self.size_s < p
        self.symmetry = symmetry and min_a == min_b
        self.nodes = 0
        # down[b] = S - b, up(m, b) = m + b
        self.down = [((self.S >> b) | (self.S << (p - b))) & self.full for b in range(p)]

    def up(self, m: int, b: int) -> int:
        return ((m << b) | (m >> (self.p - b))) & self.full

    def run(self):
        root = self.S
        if root.bit_count() < self.min_a:
            return None
        if self.cd and self.min_a + self.min_b - 1 > self.size_s:
            return None
        cands = [b for b in range(1, self.p) if (root & self.down[b]).bit_count() >= self.min_a]
        return self._dfs(root, [0], cands)

    def _dfs(self, a_cur: int, bs: list[int], cands: list[int]):
        self.nodes += 1
        if self.nodes > self.budget:
            raise _BudgetExhausted
        size_a = a_cur.bit_count()
        if size_a < self.min_a:
            return None
        covered = 0
        for b in bs:
            covered |= self.up(a_cur, b)
        if len(bs) >= self.min_b and covered == self.S:
            return a_cur, list(bs)
        # children have |B| = len(bs) + 1
        if self.cd and self.min_a + len(bs) > self.size_s:
            return None
        need = self.min_a
        if self.symmetry:
            need = max(need, len(bs) + 1)
        if size_a < need:
            return None
        rem = [c for c in cands if (a_cur & self.down[c]).bit_count() >= need]
        if not rem:
            return None
        for c in rem:
            covered |= self.up(a_cur, c)
        if self.S & ~covered:
            return None
        for i, c in enumerate(rem):
            found = self._dfs(a_cur & self.down[c], bs + [c], rem[i + 1 :])
            if found is not None:
                return found
        return None


def decide_sumset(
    S: ResidueSet,
    min_a: int = 2,
    min_b: int = 2,
    budget: int = DEFAULT_BUDGET,
    cauchy_davenport: bool = True,
    symmetry: bool = True,
) -> DecompositionOutcome:
    """Decide whether S = A + B with |A| >= min_a and |B| >= min_b.

    Exhausting ``budget`` nodes yields status "timeout", which is never a "no".
    Witnesses are re-checked with an independent sumset computation.
    """
    if not len(S):
        raise ValueError("target set must be nonempty")
    if min_a < 2 or min_b < 2:
        raise ValueError("minimum sizes must be at least 2")
    start = time.perf_counter()
    search = _Search(S, min_a, min_b, budget, cauchy_davenport, symmetry)
    try:
        found = search.run()
    except _BudgetExhausted:
        return DecompositionOutcome(TIMEOUT, None, None, search.nodes - 1, time.perf_counter() - start)
    elapsed = time.perf_counter() - start
    if found is None:
        return DecompositionOutcome(NONE, None, None, search.nodes, elapsed)
    A = residue_set(S.ctx, _elements(found[0]))
    B = residue_set(S.ctx, found[1])
    if sumset(A, B) != S or len(A) < min_a or len(B) < min_b:
        raise InternalError(f"search produced an invalid witness A={A} B={B}")
    return DecompositionOutcome(WITNESS, A, B, search.nodes, elapsed)


@dataclass(frozen=True)
class SweepRow:
    p: int
    outcome: DecompositionOutcome
    qr_size: int

    def to_dict(self) -> dict:
        o = self.outcome
        return {
            "p": self.p,
            "status": o.status,
            "qr_size": self.qr_size,
            "nodes_explored": o.nodes_explored,
            "wall_time_ms": round(o.wall_time * 1000, 3),
            "witness_A": list(o.witness_A) if o.witness_A is not None else [],
            "witness_B": list(o.witness_B) if o.witness_B is not None else [],
        }


def decide_qr(p: int, budget: int = DEFAULT_BUDGET) -> SweepRow:
    qr = quadratic_residues(make_field(p))
    return SweepRow(p, decide_sumset(qr, 2, 2, budget), len(qr))


def sarkozy_sweep(p_min: int, p_max: int, budget: int = DEFAULT_BUDGET, threads: int = 1) -> list[SweepRow]:
    """decide_sumset(QR(p), 2, 2) for every odd prime in [p_min, p_max], in order."""
    primes = primes_between(p_min, p_max)
    if threads > 1 and len(primes) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(decide_qr, primes, [budget] * len(primes)))
    return [decide_qr(p, budget) for p in primes]
