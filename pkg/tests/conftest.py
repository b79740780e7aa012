import itertools

import numpy as np
import pytest

from contactkit.graphenum import ContactGraph


def complete_graph(n):
    return ContactGraph.from_edges(
        n, [(i, j) for i in range(n) for j in range(i + 1, n)]
    )


def cycle_graph(n):
    return ContactGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def octahedron():
    non = {(0, 5), (1, 4), (2, 3)}
    edges = [
        e for e in itertools.combinations(range(6), 2) if e not in non
    ]
    return ContactGraph.from_edges(6, edges)


def random_graph(n, rng, p=0.5):
    edges = [
        e for e in itertools.combinations(range(n), 2) if rng.random() < p
    ]
    return ContactGraph.from_edges(n, edges)


def regular_tetrahedron(scale=2.0):
    pts = np.array(
        [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float
    )
    # edge length of this tetrahedron is 2*sqrt(2); rescale to `scale`
    return pts * (scale / (2.0 * np.sqrt(2.0)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
