from itertools import combinations

import numpy as np
import pytest

from kvote import (
    Committee,
    Instance,
    InvalidArgumentError,
    OwaWeights,
    chain_lower,
    chain_upper,
    preprocess_fix,
    score,
    separate,
    subset_counts,
)


def enumerate_optimum(inst, k, allowed=None):
    """Brute-force z(k), optionally restricted to masks satisfying a FixedSet."""
    best = None
    for mask in range(1 << inst.m):
        if allowed is not None and not allowed(mask):
            continue
        v = score(inst, Committee(mask, inst.m), OwaWeights.top_k(k)).score
        best = v if best is None else min(best, v)
    return best


class TestPreprocessFix:
    def test_t1_k2_all_forced_one(self, t1):
        fs = preprocess_fix(t1, 2)
        assert fs.forced_one == frozenset({0, 1, 2})
        assert fs.forced_zero == frozenset()

    def test_k1_unanimity(self):
        inst = Instance.from_strings(["1100", "1010", "1000"])
        fs = preprocess_fix(inst, 1)
        assert fs.forced_one == frozenset(
            j for j, g in enumerate(inst.approval_counts) if g == inst.n
        )
        assert fs.forced_zero == frozenset(
            j for j, g in enumerate(inst.approval_counts) if g == 0
        )

    def test_all_ones_profiles(self):
        inst = Instance.from_strings(["111"] * 4)
        for k in range(1, 5):
            assert preprocess_fix(inst, k).forced_one == frozenset({0, 1, 2})

    def test_disjoint(self, small_corpus):
        for inst in small_corpus:
            for k in range(1, inst.n + 1):
                fs = preprocess_fix(inst, k)
                assert not (fs.forced_one & fs.forced_zero)

    def test_fixing_safety(self, small_corpus):
        # restricting the search to the fixed assignment never loses the optimum
        for inst in small_corpus:
            for k in range(1, inst.n + 1):
                fs = preprocess_fix(inst, k)

                def allowed(mask, fs=fs):
                    return all((mask >> j) & 1 for j in fs.forced_one) and not any(
                        (mask >> j) & 1 for j in fs.forced_zero
                    )

                assert enumerate_optimum(inst, k, allowed) == enumerate_optimum(inst, k)

    def test_out_of_range(self, t1):
        with pytest.raises(InvalidArgumentError):
            preprocess_fix(t1, 0)
        with pytest.raises(InvalidArgumentError):
            preprocess_fix(t1, 4)


class TestChainBounds:
    def test_lower_examples(self):
        assert chain_lower(3, 2) == 2
        assert chain_lower(0, 5) == 0
        assert chain_lower(7, 6) == 6

    def test_lower_rounds_up(self):
        assert chain_lower(5, 2) == 4  # ceil(10/3)

    def test_upper_t1(self, t1):
        upper, witness = chain_upper(t1, Committee.from_string("111"), 2)
        assert upper == 2 and str(witness) == "111"

    def test_upper_at_suboptimal_committee(self, t1):
        upper, _ = chain_upper(t1, Committee.from_string("110"), 1)
        assert upper == 2  # true z(1) = 1; bound valid, not tight

    def test_bracket_on_corpus(self, small_corpus):
        for inst in small_corpus:
            z = {k: enumerate_optimum(inst, k) for k in range(1, inst.n + 1)}
            x = {}
            for k in range(1, inst.n + 1):
                for mask in range(1 << inst.m):
                    c = Committee(mask, inst.m)
                    if score(inst, c, OwaWeights.top_k(k)).score == z[k]:
                        x[k] = c
                        break
            for k in range(1, inst.n):
                lower = chain_lower(z[k + 1], k)
                upper, _ = chain_upper(inst, x[k + 1], k)
                assert lower <= z[k] <= upper
                assert z[k] <= z[k + 1]

    def test_invalid(self):
        with pytest.raises(InvalidArgumentError):
            chain_lower(-1, 2)
        with pytest.raises(InvalidArgumentError):
            chain_lower(3, 0)


class TestSeparate:
    def test_t1_violated(self, t1):
        cut = separate(t1, [1, 1, 1], 0, 2)
        assert cut.voters == (0, 1)
        assert cut.violation == 2
        assert cut.subset_counts == subset_counts(t1, (0, 1))

    def test_t1_tight_no_cut(self, t1):
        assert separate(t1, [1, 1, 1], 2, 2) is None

    def test_max_rhs_no_cut(self, t1):
        for k in (1, 2, 3):
            assert separate(t1, [0.3, 0.7, 0.5], k * t1.m, k) is None

    def test_cut_lhs_matches_subset_distance(self, t1):
        cut = separate(t1, [1, 1, 1], 0, 2)
        assert cut.lhs_at([1, 1, 1]) == 2

    def test_dimension_mismatch(self, t1):
        with pytest.raises(InvalidArgumentError):
            separate(t1, [1, 0], 0, 2)

    def test_point_outside_box(self, t1):
        with pytest.raises(InvalidArgumentError):
            separate(t1, [1.5, 0, 0], 0, 2)

    def test_completeness_vs_full_enumeration(self, small_corpus):
        # no cut returned  <=>  every |S| = k constraint holds
        rng = np.random.default_rng(17)
        for inst in small_corpus[:10]:
            for k in range(1, inst.n + 1):
                for frac in (False, True):
                    if frac:
                        x = rng.random(inst.m).tolist()
                    else:
                        x = rng.integers(0, 2, size=inst.m).tolist()
                    r = [
                        sum(abs(x[j] - inst.profile_bits(i)[j]) for j in range(inst.m))
                        for i in range(inst.n)
                    ]
                    worst = max(
                        sum(r[i] for i in S) for S in combinations(range(inst.n), k)
                    )
                    for v_hat in (worst - 0.5, worst, worst + 0.5):
                        cut = separate(inst, x, v_hat, k)
                        violated = worst > v_hat + (0 if not frac else 1e-9)
                        assert (cut is not None) == violated
                        if cut is not None:
                            # maximal violation among the whole family
                            assert sum(r[i] for i in cut.voters) == pytest.approx(worst)

    def test_integral_exactness(self, t1):
        # integral points compare exactly: violation by 1 is found
        cut = separate(t1, [1, 1, 1], 1, 2)
        assert cut is not None and cut.violation == 1
