"""Exact combinatorial branch-and-bound for the top-k objective, a
brute-force oracle, and the k = n..1 sweep driver.

Search layout: depth-first over candidate indices in ascending order,
trying the majority value first.  A node at depth d has candidates
0..d-1 assigned; its per-voter partial distances are maintained
incrementally.  The node bound takes the k voters with the largest
partial distances and adds, for every unassigned candidate, the cheapest
contribution that candidate can make to those k voters.  Incumbents come
from completing the partial assignment with the majority rule, which is
evaluated exactly via precomputed suffix distances.  The inner loop is
numba-compiled; the search is deterministic.
"""

from __future__ import annotations

import dataclasses
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numba import njit, objmode

from .bounds import chain_lower, chain_upper, preprocess_fix
from .errors import InvalidArgumentError, ResourceLimitError
from .model import Committee, Instance, OwaWeights
from .polysolve import majority_committee, solve_minisum

__all__ = [
    "Solution",
    "SolveStats",
    "SolveOptions",
    "brute_force",
    "solve_ksum",
    "solve_all_k",
    "DEFAULT_BRUTE_FORCE_BUDGET",
]

DEFAULT_BRUTE_FORCE_BUDGET = 1 << 24

_NO_INCUMBENT = 1 << 62

STATUS_COMPLETE = 0
STATUS_BUDGET = 1


@dataclass(frozen=True)
class SolveStats:
    nodes: int
    time_s: float
    root_bound: int
    solved_at_root: bool
    fixed_count: int
    optimal: bool
    lower_bound: int


@dataclass(frozen=True)
class Solution:
    committee: Committee
    value: int
    stats: SolveStats

    @property
    def optimal(self) -> bool:
        return self.stats.optimal


@dataclass(frozen=True)
class SolveOptions:
    node_budget: Optional[int] = None
    time_budget_s: Optional[float] = None
    enable_preprocessing: bool = True
    enable_chain_bounds: bool = True
    warm_start: Optional[tuple[Committee, int]] = None
    known_lower_bound: Optional[int] = None

    def __post_init__(self):
        if self.node_budget is not None and self.node_budget < 1:
            raise InvalidArgumentError("node budget must be positive")
        if self.time_budget_s is not None and self.time_budget_s <= 0:
            raise InvalidArgumentError("time budget must be positive")


def _bit_reversed(mask: int, m: int) -> int:
    """Key under which ascending order = lexicographic order of bit-strings."""
    r = 0
    for j in range(m):
        r = (r << 1) | ((mask >> j) & 1)
    return r


def brute_force(
    instance: Instance,
    weights: OwaWeights,
    enumeration_budget: int = DEFAULT_BRUTE_FORCE_BUDGET,
) -> Solution:
    """Exhaustive oracle over all 2^m committees.

    Ties broken by lexicographically smallest committee bit-string.
    """
    weights.validate(instance.n)
    n, m = instance.n, instance.m
    total = 1 << m
    if total > enumeration_budget:
        raise ResourceLimitError(
            f"2^{m} = {total} committees exceed the enumeration budget {enumeration_budget}"
        )
    t0 = time.perf_counter()
    k = weights.count
    profiles = np.array(instance.profiles, dtype=np.uint64)
    best_value: Optional[int] = None
    best_mask = 0
    best_key = 0
    chunk = 1 << 16
    for start in range(0, total, chunk):
        masks = np.arange(start, min(start + chunk, total), dtype=np.uint64)
        d = np.bitwise_count(masks[:, None] ^ profiles[None, :]).astype(np.int64)
        if k == n:
            vals = d.sum(axis=1)
        elif weights.kind == "top_k":
            vals = np.partition(d, n - k, axis=1)[:, n - k :].sum(axis=1)
        else:
            vals = np.partition(d, k - 1, axis=1)[:, :k].sum(axis=1)
        lo = int(vals.min())
        if best_value is None or lo <= best_value:
            for mm in masks[vals == lo].tolist():
                key = _bit_reversed(int(mm), m)
                if best_value is None or lo < best_value or key < best_key:
                    best_value, best_mask, best_key = lo, int(mm), key
    assert best_value is not None
    elapsed = time.perf_counter() - t0
    return Solution(
        committee=Committee(best_mask, m),
        value=best_value,
        stats=SolveStats(
            nodes=total,
            time_s=elapsed,
            root_bound=best_value,
            solved_at_root=False,
            fixed_count=0,
            optimal=True,
            lower_bound=best_value,
        ),
    )


@njit(cache=True)
def _topk_sum(arr, nk):
    """Sum of the largest len(arr) - nk entries."""
    if nk == 0:
        return arr.sum()
    p = np.partition(arr, nk)
    s = 0
    for t in range(nk, arr.shape[0]):
        s += p[t]
    return s


@njit(cache=True)
def _node_bound(P, lb_row, fixed, d, k):
    """Valid lower bound for the subtree: pick the k voters with largest
    partial distance and add each remaining candidate's cheapest
    contribution to that voter set."""
    n, m = P.shape
    idx = np.argsort(lb_row)
    base = 0
    for t in range(n - k, n):
        base += lb_row[idx[t]]
    add = 0
    for j in range(d, m):
        g = 0
        for t in range(n - k, n):
            g += P[idx[t], j]
        if fixed[j] < 0:
            add += min(g, k - g)
        elif fixed[j] == 0:
            add += g
        else:
            add += k - g
    return base + add


@njit(cache=True)
def _dfs_kernel(
    P,
    k,
    fixed,
    comp_bits,
    suffix,
    inc_val,
    inc_bits,
    global_lb,
    node_budget,
    time_budget,
    t_start,
):
    """Iterative DFS; mutates inc_bits, returns (inc_val, nodes, status)."""
    n, m = P.shape
    lb = np.zeros((m + 1, n), dtype=np.int64)
    assigned = np.zeros(m, dtype=np.int64)
    phase = np.zeros(m + 1, dtype=np.int64)
    bound = np.zeros(m + 1, dtype=np.int64)
    nodes = 0
    status = STATUS_COMPLETE
    d = 0
    phase[0] = 0
    while d >= 0:
        if phase[d] == 0:
            nodes += 1
            if node_budget >= 0 and nodes > node_budget:
                status = STATUS_BUDGET
                break
            if time_budget >= 0.0 and nodes % 2048 == 0:
                with objmode(tnow="float64"):
                    tnow = time.perf_counter()
                if tnow - t_start > time_budget:
                    status = STATUS_BUDGET
                    break
            val = _topk_sum(lb[d] + suffix[d], n - k)
            if val < inc_val:
                inc_val = val
                for j in range(d):
                    inc_bits[j] = assigned[j]
                for j in range(d, m):
                    inc_bits[j] = comp_bits[j]
            if inc_val <= global_lb:
                break
            if d == m:
                d -= 1
                continue
            b = _node_bound(P, lb[d], fixed, d, k)
            if b >= inc_val:
                d -= 1
                continue
            bound[d] = b
            v = comp_bits[d]
            assigned[d] = v
            for i in range(n):
                lb[d + 1, i] = lb[d, i] + (P[i, d] if v == 0 else 1 - P[i, d])
            phase[d] = 1
            phase[d + 1] = 0
            d += 1
        elif phase[d] == 1:
            if fixed[d] >= 0 or bound[d] >= inc_val:
                phase[d] = 2
                continue
            v = 1 - comp_bits[d]
            assigned[d] = v
            for i in range(n):
                lb[d + 1, i] = lb[d, i] + (P[i, d] if v == 0 else 1 - P[i, d])
            phase[d] = 2
            phase[d + 1] = 0
            d += 1
        else:
            phase[d] = 0
            d -= 1
    return inc_val, nodes, status


class _Search:
    """One top-k solve; holds the immutable per-solve precomputations."""

    def __init__(self, instance: Instance, k: int, options: SolveOptions):
        self.instance = instance
        self.k = k
        self.options = options
        n, m = instance.n, instance.m
        self.n, self.m = n, m
        self.P = instance.matrix.astype(np.int64)

        fixed = np.full(m, -1, dtype=np.int64)
        if options.enable_preprocessing:
            fs = preprocess_fix(instance, k)
            for j in fs.forced_one:
                fixed[j] = 1
            for j in fs.forced_zero:
                fixed[j] = 0
        self.fixed = fixed
        self.fixed_count = int((fixed >= 0).sum())

        maj_bits = np.array(majority_committee(instance).bits, dtype=np.int64)
        self.comp_bits = np.where(fixed >= 0, fixed, maj_bits)

        # suffix[d][i]: distance of voter i to the completion bits on
        # candidates d..m-1.
        suffix = np.zeros((m + 1, n), dtype=np.int64)
        for d in range(m - 1, -1, -1):
            col = self.P[:, d] if self.comp_bits[d] == 0 else 1 - self.P[:, d]
            suffix[d] = suffix[d + 1] + col
        self.suffix = suffix

    def run(self) -> Solution:
        t0 = time.perf_counter()
        opts = self.options

        root_bound = int(_node_bound(self.P, np.zeros(self.n, dtype=np.int64), self.fixed, 0, self.k))
        if opts.known_lower_bound is not None:
            root_bound = max(root_bound, opts.known_lower_bound)

        inc_val = _NO_INCUMBENT
        inc_bits = np.zeros(self.m, dtype=np.int64)
        if opts.warm_start is not None:
            committee, value = opts.warm_start
            if committee.m != self.m:
                raise InvalidArgumentError("warm start committee has the wrong length")
            inc_val = value
            inc_bits[:] = committee.bits

        inc_val, nodes, status = _dfs_kernel(
            self.P,
            self.k,
            self.fixed,
            self.comp_bits,
            self.suffix,
            inc_val,
            inc_bits,
            root_bound,
            -1 if opts.node_budget is None else opts.node_budget,
            -1.0 if opts.time_budget_s is None else opts.time_budget_s,
            t0,
        )
        optimal = status == STATUS_COMPLETE
        solved_at_root = optimal and nodes <= 1
        value = int(inc_val)
        lower = value if optimal else root_bound
        elapsed = time.perf_counter() - t0
        return Solution(
            committee=Committee.from_bits([int(b) for b in inc_bits]),
            value=value,
            stats=SolveStats(
                nodes=int(nodes),
                time_s=elapsed,
                root_bound=root_bound,
                solved_at_root=solved_at_root,
                fixed_count=self.fixed_count,
                optimal=optimal,
                lower_bound=lower,
            ),
        )


def solve_ksum(
    instance: Instance, k: int, options: Optional[SolveOptions] = None
) -> Solution:
    """Exact top-k solve; returns the incumbent with a valid lower bound
    when a node or time budget interrupts the search."""
    if not 1 <= k <= instance.n:
        raise InvalidArgumentError(f"k={k} out of range [1, {instance.n}]")
    return _Search(instance, k, options or SolveOptions()).run()


def solve_all_k(
    instance: Instance, options: Optional[SolveOptions] = None
) -> list[Solution]:
    """Solve for every k following the non-increasing sequence k = n..1.

    The minisum case k = n is closed form; each subsequent solve is warm
    started from the previous optimum and lower bounded through the
    z(k)/z(k+1) chain.  The returned list is ordered k = n, n-1, ..., 1.
    """
    options = options or SolveOptions()
    n = instance.n

    t0 = time.perf_counter()
    x_n, z_n = solve_minisum(instance)
    fixed_n = len(preprocess_fix(instance, n)) if options.enable_preprocessing else 0
    results = [
        Solution(
            committee=x_n,
            value=z_n,
            stats=SolveStats(
                nodes=0,
                time_s=time.perf_counter() - t0,
                root_bound=z_n,
                solved_at_root=True,
                fixed_count=fixed_n,
                optimal=True,
                lower_bound=z_n,
            ),
        )
    ]

    for k in range(n - 1, 0, -1):
        prev = results[-1]
        upper, witness = chain_upper(instance, prev.committee, k)
        per_k = dataclasses.replace(
            options,
            warm_start=(witness, upper),
            known_lower_bound=(
                chain_lower(prev.value, k)
                if options.enable_chain_bounds and prev.optimal
                else None
            ),
        )
        results.append(solve_ksum(instance, k, per_k))
    return results
