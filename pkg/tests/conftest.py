import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dagbound import Dag

# Six-vertex worked example used throughout: volume 10, longest path
# (v0, v1, v4, v5) of length 6, decomposed lengths (6, 3, 1).
DEMO_WCETS = (1, 3, 1, 3, 1, 1)
DEMO_EDGES = ((0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (4, 5), (3, 5))


@pytest.fixture
def demo_dag():
    return Dag(DEMO_WCETS, DEMO_EDGES)


def random_raw_dag(rng: random.Random, max_n=6, max_wcet=4, p=None):
    """Small random DAG before normalization (edges low -> high index)."""
    n = rng.randint(1, max_n)
    p = rng.uniform(0.2, 0.8) if p is None else p
    wcets = [rng.randint(0, max_wcet) for _ in range(n)]
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Dag(wcets, edges)
