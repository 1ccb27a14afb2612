import sys
from pathlib import Path

import numpy as np
import pytest

# Ensure repo root is on sys.path
ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from engine.adapters.zdd import Zdd, ZddNode
from engine.graph.dag import build_graph


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def diamond():
    """s=0 -> (e1=2, e2=3) -> v=1, v is ADD."""
    return build_graph([0, 1], {2: (0, 1), 3: (0, 1)}, {1: "add"})


@pytest.fixture
def abc_zdd():
    """The family {AB, AC, C} over A < B < C."""
    nodes = {
        0: ZddNode(2, False, True),   # C
        1: ZddNode(1, 0, True),       # B
        2: ZddNode(0, 0, 1),          # A
    }
    return Zdd(("A", "B", "C"), nodes, 2)
