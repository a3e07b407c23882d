"""Core domain types and exact scoring.

Voter profiles and committees are packed into Python ints (bit j of the
mask is candidate j, 0-based).  All distances and scores are exact
integers; no floating point enters the scoring path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgumentError

__all__ = [
    "Instance",
    "Committee",
    "OwaWeights",
    "DistanceReport",
    "hamming_distance",
    "approval_counts",
    "subset_counts",
    "subset_distance",
    "score",
]


def _pack_bits(bits: Sequence[int]) -> int:
    mask = 0
    for j, b in enumerate(bits):
        if b not in (0, 1):
            raise InvalidArgumentError(f"bit at position {j} is {b!r}, expected 0 or 1")
        mask |= b << j
    return mask


def _unpack_bits(mask: int, m: int) -> tuple[int, ...]:
    return tuple((mask >> j) & 1 for j in range(m))


@dataclass(frozen=True)
class Committee:
    """A committee: binary m-vector of candidate membership."""

    mask: int
    m: int

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "Committee":
        return cls(_pack_bits(bits), len(bits))

    @classmethod
    def from_string(cls, s: str) -> "Committee":
        if not s or any(c not in "01" for c in s):
            raise InvalidArgumentError(f"committee string must be non-empty over {{0,1}}: {s!r}")
        return cls.from_bits([int(c) for c in s])

    @property
    def bits(self) -> tuple[int, ...]:
        return _unpack_bits(self.mask, self.m)

    @property
    def size(self) -> int:
        """Number of elected candidates."""
        return self.mask.bit_count()

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


@dataclass(frozen=True)
class Instance:
    """An election instance: n voter profiles over m candidates.

    Immutable; derived quantities (approval counts, the dense 0/1 matrix)
    are cached on first use.
    """

    n: int
    m: int
    profiles: tuple[int, ...] = field(repr=False)

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise InvalidArgumentError(f"need n >= 1 and m >= 1, got n={self.n}, m={self.m}")
        if len(self.profiles) != self.n:
            raise InvalidArgumentError(
                f"expected {self.n} profiles, got {len(self.profiles)}"
            )
        limit = 1 << self.m
        for i, p in enumerate(self.profiles):
            if not 0 <= p < limit:
                raise InvalidArgumentError(f"profile {i + 1} does not fit in {self.m} bits")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]]) -> "Instance":
        rows = list(rows)
        if not rows:
            raise InvalidArgumentError("instance needs at least one profile")
        m = len(rows[0])
        for i, r in enumerate(rows):
            if len(r) != m:
                raise InvalidArgumentError(
                    f"profile {i + 1} has length {len(r)}, expected {m}"
                )
        return cls(len(rows), m, tuple(_pack_bits(r) for r in rows))

    @classmethod
    def from_strings(cls, rows: Iterable[str]) -> "Instance":
        return cls.from_rows([[int(c) for c in r] for r in rows])

    def profile_bits(self, i: int) -> tuple[int, ...]:
        """0/1 tuple of voter i's profile (0-based)."""
        return _unpack_bits(self.profiles[i], self.m)

    @cached_property
    def approval_counts(self) -> tuple[int, ...]:
        """gamma_j: number of voters approving candidate j, for each j."""
        return tuple(int(c) for c in self.matrix.sum(axis=0))

    @cached_property
    def matrix(self) -> np.ndarray:
        """Dense n x m uint8 matrix of the profiles (read-only)."""
        a = np.array([self.profile_bits(i) for i in range(self.n)], dtype=np.uint8)
        a.setflags(write=False)
        return a


@dataclass(frozen=True)
class OwaWeights:
    """0/1 OWA objective selector: top-k sum or bottom-h sum of distances."""

    kind: str  # "top_k" | "bottom_h"
    count: int

    @classmethod
    def top_k(cls, k: int) -> "OwaWeights":
        """Sum of the k largest distances (k = n is minisum, k = 1 minimax)."""
        return cls("top_k", k)

    @classmethod
    def bottom_h(cls, h: int) -> "OwaWeights":
        """Sum of the h smallest distances."""
        return cls("bottom_h", h)

    def validate(self, n: int) -> None:
        if self.kind not in ("top_k", "bottom_h"):
            raise InvalidArgumentError(f"unknown OWA kind {self.kind!r}")
        if not 1 <= self.count <= n:
            raise InvalidArgumentError(
                f"OWA parameter {self.count} out of range [1, {n}]"
            )


@dataclass(frozen=True)
class DistanceReport:
    """Per-voter distances, the sorting permutation, and the OWA score."""

    distances: tuple[int, ...]
    order: tuple[int, ...]  # voter indices, distances non-increasing, ties by index
    score: int


def hamming_distance(profile, committee) -> int:
    """Number of positions where a profile and a committee disagree.

    Accepts packed masks paired with Committee, or two equal-length bit
    sequences.
    """
    if isinstance(profile, Committee) and isinstance(committee, Committee):
        if profile.m != committee.m:
            raise InvalidArgumentError(
                f"length mismatch: {profile.m} vs {committee.m}"
            )
        return (profile.mask ^ committee.mask).bit_count()
    if isinstance(committee, Committee):
        bits = list(profile)
        if len(bits) != committee.m:
            raise InvalidArgumentError(
                f"length mismatch: {len(bits)} vs {committee.m}"
            )
        return (_pack_bits(bits) ^ committee.mask).bit_count()
    a, b = list(profile), list(committee)
    if len(a) != len(b):
        raise InvalidArgumentError(f"length mismatch: {len(a)} vs {len(b)}")
    return (_pack_bits(a) ^ _pack_bits(b)).bit_count()


def distances(instance: Instance, committee: Committee) -> tuple[int, ...]:
    """Hamming distance of every voter profile to the committee."""
    if committee.m != instance.m:
        raise InvalidArgumentError(
            f"committee length {committee.m} != instance m {instance.m}"
        )
    x = committee.mask
    return tuple((p ^ x).bit_count() for p in instance.profiles)


def approval_counts(instance: Instance) -> tuple[int, ...]:
    """gamma_j for each candidate j."""
    return instance.approval_counts


def _check_voter_set(instance: Instance, voters: Iterable[int]) -> list[int]:
    vs = sorted(set(voters))
    for i in vs:
        if not 0 <= i < instance.n:
            raise InvalidArgumentError(
                f"voter index {i} out of range [0, {instance.n - 1}]"
            )
    return vs


def subset_counts(instance: Instance, voters: Iterable[int]) -> tuple[int, ...]:
    """gamma_j(S): approvals of candidate j among the voters in S (0-based)."""
    vs = _check_voter_set(instance, voters)
    counts = [0] * instance.m
    for i in vs:
        p = instance.profiles[i]
        for j in range(instance.m):
            counts[j] += (p >> j) & 1
    return tuple(counts)


def subset_distance(instance: Instance, voters: Iterable[int], committee: Committee) -> int:
    """Sum of the Hamming distances of the voters in S to the committee."""
    vs = _check_voter_set(instance, voters)
    if committee.m != instance.m:
        raise InvalidArgumentError(
            f"committee length {committee.m} != instance m {instance.m}"
        )
    x = committee.mask
    total = sum((instance.profiles[i] ^ x).bit_count() for i in vs)
    if __debug__:
        # Cross-check against the closed form in approval counts:
        # sum_j gamma_j(S)(1-x_j) + sum_j (|S|-gamma_j(S)) x_j.
        g = subset_counts(instance, vs)
        s = len(vs)
        bits = committee.bits
        alt = sum(g[j] * (1 - bits[j]) + (s - g[j]) * bits[j] for j in range(instance.m))
        assert alt == total
    return total


def score(instance: Instance, committee: Committee, weights: OwaWeights) -> DistanceReport:
    """OWA score of a committee: sum of the k largest / h smallest distances."""
    weights.validate(instance.n)
    d = distances(instance, committee)
    order = tuple(sorted(range(instance.n), key=lambda i: (-d[i], i)))
    if weights.kind == "top_k":
        value = sum(d[i] for i in order[: weights.count])
    else:
        value = sum(d[i] for i in order[instance.n - weights.count :])
    return DistanceReport(distances=d, order=order, score=value)
