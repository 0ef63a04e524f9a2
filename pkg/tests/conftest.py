import numpy as np
import pytest

from pacx import MultiGraph, PAParams


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def multigraph_from_targets(T, m, delta, target_rows, gen="polya"):
    """Hand-built multigraph helper: target_rows covers nodes 2..T."""
    return MultiGraph(PAParams(T, m, float(delta), seed=0),
                      np.array(target_rows, dtype=np.int32), gen=gen)
