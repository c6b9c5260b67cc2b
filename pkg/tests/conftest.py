import numpy as np
import pytest

from rcmteleop.harness import DEFAULT_HOME_Q
from rcmteleop.kinematics import load_default_chain


@pytest.fixture(scope="session")
def chain():
    return load_default_chain()


@pytest.fixture(scope="session")
def home_q():
    return np.array(DEFAULT_HOME_Q)


def sample_configs(chain, home_q, count, seed, spread=0.4):
    """Seeded joint configurations around home, kept inside the limits."""
    rng = np.random.default_rng(seed)
    lo, hi = chain.limits_lo_hi()
    out = []
    for _ in range(count):
        q = home_q + rng.uniform(-spread, spread, size=chain.n_joints)
        out.append(np.clip(q, lo, hi))
    return out
