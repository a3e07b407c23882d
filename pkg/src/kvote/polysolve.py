"""Polynomially solvable special cases.

Minisum (the full-sum objective) and its cardinality-constrained variant
have closed forms in the approval counts.  The bottom-h objective reduces
to one minisum per voter subset of size h; we enumerate the smaller of
the subset family and its complement family, so the practically relevant
cases (n - h small) stay cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .errors import InvalidArgumentError, ResourceLimitError
from .model import Committee, Instance, OwaWeights, score

__all__ = [
    "BottomHSolution",
    "solve_minisum",
    "solve_minisum_card",
    "solve_bottom_h",
    "DEFAULT_SUBSET_BUDGET",
]

DEFAULT_SUBSET_BUDGET = 10**7


@dataclass(frozen=True)
class BottomHSolution:
    """Optimal committee for the bottom-h objective with its supporting voters."""

    committee: Committee
    support: tuple[int, ...]  # voter indices, |support| = h
    value: int


def majority_committee(instance: Instance) -> Committee:
    """Include candidate j iff gamma_j >= ceil(n/2); ties at n/2 included."""
    half = instance.n - instance.n // 2
    mask = 0
    for j, g in enumerate(instance.approval_counts):
        if g >= half:
            mask |= 1 << j
    return Committee(mask, instance.m)


def solve_minisum(instance: Instance) -> tuple[Committee, int]:
    """Minimize the sum of all n distances (closed form)."""
    x = majority_committee(instance)
    return x, score(instance, x, OwaWeights.top_k(instance.n)).score


def solve_minisum_card(instance: Instance, committee_size: int) -> tuple[Committee, int]:
    """Minisum restricted to committees of exactly the given size.

    Optimal committee: the most-approved candidates, ties broken by
    ascending candidate index.
    """
    if not 0 <= committee_size <= instance.m:
        raise InvalidArgumentError(
            f"committee size {committee_size} out of range [0, {instance.m}]"
        )
    order = sorted(range(instance.m), key=lambda j: (-instance.approval_counts[j], j))
    mask = 0
    for j in order[:committee_size]:
        mask |= 1 << j
    x = Committee(mask, instance.m)
    return x, score(instance, x, OwaWeights.top_k(instance.n)).score


def _inner_minisum(instance: Instance, voters: tuple[int, ...]) -> tuple[int, int]:
    """Best committee for the plain sum over a voter subset.

    Include j iff a strict majority of the subset approves (tie -> out).
    Returns (mask, value).
    """
    h = len(voters)
    counts = [0] * instance.m
    for i in voters:
        p = instance.profiles[i]
        for j in range(instance.m):
            counts[j] += (p >> j) & 1
    mask = 0
    value = 0
    for j, g in enumerate(counts):
        if 2 * g > h:
            mask |= 1 << j
            value += h - g
        else:
            value += g
    return mask, value


def solve_bottom_h(
    instance: Instance, h: int, subset_budget: Optional[int] = None
) -> BottomHSolution:
    """Minimize the sum of the h smallest distances by subset enumeration."""
    n = instance.n
    if not 1 <= h <= n:
        raise InvalidArgumentError(f"h={h} out of range [1, {n}]")
    budget = DEFAULT_SUBSET_BUDGET if subset_budget is None else subset_budget
    n_subsets = math.comb(n, h)
    if n_subsets > budget:
        raise ResourceLimitError(
            f"C({n},{h}) = {n_subsets} subsets exceed the enumeration budget {budget}"
        )

    all_voters = tuple(range(n))
    if n - h < h:
        # Enumerate complements of size n-h; fewer subsets, same family.
        supports = (
            tuple(i for i in all_voters if i not in set(comp))
            for comp in combinations(all_voters, n - h)
        )
    else:
        supports = combinations(all_voters, h)

    best: Optional[tuple[int, tuple[int, ...], int]] = None
    for support in supports:
        mask, value = _inner_minisum(instance, support)
        key = (value, support)
        if best is None or key < (best[0], best[1]):
            best = (value, support, mask)
    assert best is not None
    value, support, mask = best
    return BottomHSolution(
        committee=Committee(mask, instance.m), support=support, value=value
    )
