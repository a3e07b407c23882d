"""Preprocessing, the z(k)/z(k+1) bound chain, and the separation oracle
for the exponential subset-constraint families."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import InvalidArgumentError
from .model import Committee, Instance, OwaWeights, score, subset_counts

__all__ = [
    "FixedSet",
    "Cut",
    "BoundPair",
    "preprocess_fix",
    "chain_lower",
    "chain_upper",
    "separate",
    "SEPARATION_TOLERANCE",
]

SEPARATION_TOLERANCE = 1e-9  # fractional points only; integral points compare exactly


@dataclass(frozen=True)
class FixedSet:
    """Candidates forced in or out before the search starts (0-based)."""

    forced_one: frozenset[int]
    forced_zero: frozenset[int]

    def __len__(self) -> int:
        return len(self.forced_one) + len(self.forced_zero)


@dataclass(frozen=True)
class Cut:
    """A violated member of the subset-constraint family.

    The inequality over the committee variables reads

        sum_j gamma_j(S) (1 - x_j) + sum_j (k - gamma_j(S)) x_j <= v.
    """

    voters: tuple[int, ...]  # S, |S| = k
    subset_counts: tuple[int, ...]  # gamma_j(S) per candidate
    k: int
    violation: float

    def lhs_at(self, x: Sequence[float]) -> float:
        g = self.subset_counts
        return sum(
            g[j] * (1 - x[j]) + (self.k - g[j]) * x[j] for j in range(len(g))
        )


@dataclass(frozen=True)
class BoundPair:
    """Lower/upper bracket on z(k), with the committee attaining the upper."""

    lower: int
    upper: int
    witness: Committee

    def __post_init__(self):
        if self.lower > self.upper:
            raise InvalidArgumentError(
                f"lower bound {self.lower} exceeds upper bound {self.upper}"
            )


def preprocess_fix(instance: Instance, k: int) -> FixedSet:
    """Fix x_j = 1 when gamma_j >= n - floor(k/2), x_j = 0 when
    gamma_j <= floor(k/2); the forced-one rule wins on overlap (possible
    only at k = n with gamma_j = n/2, where the objective is indifferent)."""
    if not 1 <= k <= instance.n:
        raise InvalidArgumentError(f"k={k} out of range [1, {instance.n}]")
    half_k = k // 2
    ones = {j for j, g in enumerate(instance.approval_counts) if g >= instance.n - half_k}
    zeros = {j for j, g in enumerate(instance.approval_counts) if g <= half_k}
    if k < instance.n:
        assert not (ones & zeros), "thresholds cannot overlap for k < n"
    return FixedSet(forced_one=frozenset(ones), forced_zero=frozenset(zeros - ones))


def chain_lower(z_next: int, k: int) -> int:
    """Lower bound on z(k) from z(k+1): ceil(k * z(k+1) / (k+1)).

    The ceiling is valid because optimal values are integral.
    """
    if z_next < 0 or k < 1:
        raise InvalidArgumentError(f"need z_next >= 0 and k >= 1, got {z_next}, {k}")
    return -((-k * z_next) // (k + 1))


def chain_upper(instance: Instance, x_next: Committee, k: int) -> tuple[int, Committee]:
    """Upper bound on z(k): evaluate a committee optimal for k+1 under the
    top-k objective.  Valid for any feasible committee; returns the bound
    with its witness."""
    upper = score(instance, x_next, OwaWeights.top_k(k)).score
    return upper, x_next


def separate(
    instance: Instance,
    x_hat: Sequence[float],
    v_hat: float,
    k: int,
) -> Optional[Cut]:
    """Find a maximally violated subset constraint at (x_hat, v_hat), or
    certify that none of the C(n,k) constraints is violated.

    The greedy top-k choice of voters maximizes the left-hand side over
    all subsets of size k, so returning no cut certifies feasibility of
    the whole family.
    """
    if len(x_hat) != instance.m:
        raise InvalidArgumentError(
            f"point has length {len(x_hat)}, expected m = {instance.m}"
        )
    if not 1 <= k <= instance.n:
        raise InvalidArgumentError(f"k={k} out of range [1, {instance.n}]")
    for j, xj in enumerate(x_hat):
        if not 0.0 <= xj <= 1.0:
            raise InvalidArgumentError(f"x_hat[{j}] = {xj} outside [0, 1]")

    integral = all(float(xj).is_integer() for xj in x_hat) and float(v_hat).is_integer()
    if integral:
        x = [int(xj) for xj in x_hat]
        r = [
            sum(abs(x[j] - int((p >> j) & 1)) for j in range(instance.m))
            for p in instance.profiles
        ]
    else:
        r = [
            sum(abs(x_hat[j] - ((p >> j) & 1)) for j in range(instance.m))
            for p in instance.profiles
        ]

    order = sorted(range(instance.n), key=lambda i: (-r[i], i))
    chosen = tuple(sorted(order[:k]))
    lhs = sum(r[i] for i in chosen)
    violation = lhs - v_hat
    threshold = 0 if integral else SEPARATION_TOLERANCE
    if violation <= threshold:
        return None
    return Cut(
        voters=chosen,
        subset_counts=subset_counts(instance, chosen),
        k=k,
        violation=int(violation) if integral else violation,
    )
