import numpy as np
import pytest

from treesample.graph import WeightDistributionSpec, random_graph
from treesample.wilson import bias_demo_graph

FAMILIES = (
    WeightDistributionSpec.uniform(0, 1),
    WeightDistributionSpec.truncated_normal(1, 1),
    WeightDistributionSpec.exponential(1),
)


@pytest.fixture
def bias_demo():
    return bias_demo_graph()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def make_graph(n, seed, family=0, lo=None, hi=None):
    """Random test graph; family indexes FAMILIES, or pass uniform bounds."""
    if lo is not None:
        spec = WeightDistributionSpec.uniform(lo, hi)
    else:
        spec = FAMILIES[family % len(FAMILIES)]
    return random_graph(n, spec, seed=np.random.SeedSequence([97, n, seed]))
