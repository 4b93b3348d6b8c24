"""Shared fixtures: a simple-graph universe, small named graphs, and the
properties used across the suite."""

import pytest

from hgfactor import (
    ProductProperty,
    forbidden_property,
    simple_graph,
    simple_universe,
)


@pytest.fixture(scope="session")
def u():
    return simple_universe()


@pytest.fixture(scope="session")
def g(u):
    """Namespace of small named simple graphs."""

    class Graphs:
        k0 = simple_graph(0, [])
        k1 = simple_graph(1, [])
        k2 = simple_graph(2, [(0, 1)])
        e2 = simple_graph(2, [])            # 2K1
        e3 = simple_graph(3, [])            # 3K1
        p3 = simple_graph(3, [(0, 1), (1, 2)])
        k3 = simple_graph(3, [(0, 1), (0, 2), (1, 2)])
        p4 = simple_graph(4, [(0, 1), (1, 2), (2, 3)])
        c4 = simple_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
        two_k2 = simple_graph(4, [(0, 1), (2, 3)])
        c5 = simple_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
        star4 = simple_graph(5, [(0, 1), (0, 2), (0, 3), (0, 4)])

    return Graphs


@pytest.fixture(scope="session")
def props(u, g):
    """The standard test properties.

    edgeless:      no K2      (every graph with an edge is out)
    trifree:       no K3
    p3free:        no induced P3 (disjoint unions of cliques)
    bip:           no K3, no C5 (contains all bipartite graphs up to 7 vertices)
    two_colour:    edgeless * edgeless
    """

    class Props:
        edgeless = forbidden_property(u, [g.k2])
        trifree = forbidden_property(u, [g.k3])
        p3free = forbidden_property(u, [g.p3])
        bip = forbidden_property(u, [g.k3, g.c5])
        two_colour = ProductProperty((edgeless, edgeless))

    return Props
