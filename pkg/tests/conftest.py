import numpy as np
import pytest

from graphwishart import (
    IncompleteMatrix,
    decompose,
    parse_graph,
    project,
)

A4_EDGES = [[1, 2], [2, 3], [3, 4]]
G0_EDGES = [[1, 2], [1, 3], [2, 3], [1, 4], [2, 4], [1, 5], [2, 5],
            [1, 6]]
FIG1_EDGES = [[1, 2], [1, 3], [1, 7], [2, 3], [2, 7], [3, 7],
              [1, 4], [2, 4], [1, 5], [2, 5], [1, 6]]


@pytest.fixture(scope="session")
def a4():
    return parse_graph({"n": 4, "edges": A4_EDGES})


@pytest.fixture(scope="session")
def g0():
    return parse_graph({"n": 6, "edges": G0_EDGES})


@pytest.fixture(scope="session")
def k2():
    return parse_graph({"n": 2, "edges": [[1, 2]]})


@pytest.fixture(scope="session")
def k3():
    return parse_graph({"n": 3, "edges": [[1, 2], [1, 3], [2, 3]]})


@pytest.fixture(scope="session")
def path3():
    return parse_graph({"n": 3, "edges": [[1, 2], [2, 3]]})


@pytest.fixture(scope="session")
def fig1():
    return parse_graph({"n": 7, "edges": FIG1_EDGES})


def random_qg(graph, rng, jitter=0.0):
    """Random incomplete matrix with positive definite clique blocks,
    built by projecting a dense positive definite matrix."""
    r = graph.vertex_count
    a = rng.standard_normal((r, r + 2))
    dense = a @ a.T / (r + 2) + (0.5 + jitter) * np.eye(r)
    return project(dense, graph)


def random_pg(graph, rng, jitter=0.0):
    """Random sparse positive definite matrix with the graph's zero
    pattern, via a diagonally dominant masked draw."""
    r = graph.vertex_count
    mask = graph.edge_mask()
    a = rng.standard_normal((r, r)) * 0.3
    sym = 0.5 * (a + a.T) * mask
    np.fill_diagonal(sym, 0.0)
    dense = sym + np.eye(r) * (np.abs(sym).sum(axis=1).max()
                               + 0.5 + jitter)
    return dense * mask


def random_first_admissible(ordering, rng, lo=1.5, hi=4.0):
    """Random shape satisfying the first-family constraints for this
    clique order: free alphas, the non-initial separator groups pinned
    by their equality constraints, the initial separator weight free
    within its inequality."""
    from graphwishart import ShapeParam

    k = ordering.k
    alpha = [float(a) for a in rng.uniform(lo, hi, k)]
    if k == 1:
        r = len(ordering.cliques[0])
        return ShapeParam((alpha[0] + (r - 1) / 2.0,), ())
    beta = [0.0] * ordering.k_prime
    first = ordering.sep_index[0]
    for i in range(ordering.k_prime):
        if i == first:
            continue
        total = sum(alpha[j] for j in ordering.occurrences[i])
        beta[i] = total / ordering.multiplicity[i]
    beta[first] = float(rng.uniform(0.2, 1.0)) * min(
        alpha[j] for j in ordering.occurrences[first])
    return ShapeParam(tuple(alpha), tuple(beta))


def random_second_admissible(ordering, rng, lo=1.5, hi=4.0):
    """Random shape satisfying the second-family constraints for this
    clique order, same construction on the negative side."""
    from graphwishart import ShapeParam

    k = ordering.k
    cs = ordering.clique_sizes
    if k == 1:
        r = cs[0]
        return ShapeParam(
            (-(float(rng.uniform(lo, hi)) + (r - 1) / 2.0),), ())
    ss = (len(ordering.separators[0]),) + ordering.separator_sizes
    alpha = [-(float(a) + (cs[j] - ss[j] - 1) / 2.0)
             for j, a in enumerate(rng.uniform(lo, hi, k))]
    beta = [0.0] * ordering.k_prime
    first = ordering.sep_index[0]
    for i in range(ordering.k_prime):
        if i == first:
            continue
        total = sum(alpha[j] + (cs[j] - len(ordering.separators[
            j - 1])) / 2.0 for j in ordering.occurrences[i])
        beta[i] = total / ordering.multiplicity[i]
    s2 = ss[0]
    nu2 = ordering.multiplicity[first]
    bound = (sum(alpha[j] + (cs[j] - s2) / 2.0
                 for j in ordering.occurrences[first])
             + alpha[0] + (cs[0] - s2) / 2.0 + (s2 - 1) / 2.0)
    beta[first] = (bound + float(rng.uniform(0.5, 2.0))) / nu2
    return ShapeParam(tuple(alpha), tuple(beta))


def incompletify(graph, dense):
    return IncompleteMatrix(graph, np.asarray(dense, dtype=float))


@pytest.fixture(scope="session")
def a4_ord(a4):
    return decompose(a4)


@pytest.fixture(scope="session")
def g0_ord(g0):
    return decompose(g0)
