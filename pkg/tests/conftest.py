from __future__ import annotations

import itertools

import pytest
from hypothesis import settings

from topmatch.graphcore import Graph

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def brute_matching(g: Graph) -> int:
    """Largest pairwise disjoint edge subset, by trying every subset."""
    edges = [g.edge_list[e] for e in g.edge_ids]
    for r in range(len(edges), 0, -1):
        for sub in itertools.combinations(edges, r):
            ends = [v for e in sub for v in e]
            if len(set(ends)) == len(ends):
                return r
    return 0


@pytest.fixture
def small_graphs():
    from topmatch.graphcore import all_labeled_graphs

    return [g for k in range(0, 5) for g in all_labeled_graphs(k)]
