import numpy as np
import pytest

from kvote import GenConfig, Instance, generate


@pytest.fixture
def t1() -> Instance:
    """Three voters, three candidates, all approval counts equal 2."""
    return Instance.from_strings(["110", "101", "011"])


def random_corpus(count, seed0=1000, n_lo=2, n_hi=12, m_lo=2, m_hi=12):
    """Seeded mixed uniform/biased instances for cross-validation."""
    rng = np.random.default_rng(seed0)
    out = []
    for idx in range(count):
        config = GenConfig(
            n=int(rng.integers(n_lo, n_hi + 1)),
            m=int(rng.integers(m_lo, m_hi + 1)),
            mode="uniform" if idx % 2 == 0 else "biased",
            p=0.25,
            seed=seed0 + idx,
        )
        out.append(generate(config))
    return out


@pytest.fixture(scope="session")
def small_corpus():
    """Twenty instances with n, m <= 8: cheap full enumerations."""
    return random_corpus(20, seed0=7000, n_hi=8, m_hi=8)
