import numpy as np
import pytest

from rumortruth import graph


def complete_network(n: int) -> graph.DirectedNetwork:
    edges = frozenset((i, j) for i in range(n) for j in range(n) if i != j)
    return graph.DirectedNetwork(n=n, edges=edges)


def ring_network(n: int) -> graph.DirectedNetwork:
    edges = set()
    for i in range(n):
        edges.add((i, (i + 1) % n))
        edges.add(((i + 1) % n, i))
    return graph.DirectedNetwork(n=n, edges=frozenset(edges))


def dense_params(betaU, betaT, gammaU, gammaR, theta, delta) -> graph.ModelParams:
    """ModelParams from explicit matrices; networks inferred from betaU/gammaU
    positivity. No validation, so degenerate study cases are allowed."""
    betaU = np.asarray(betaU, dtype=float)
    n = betaU.shape[0]
    gR = graph.DirectedNetwork(n, frozenset(
        (i, j) for i in range(n) for j in range(n) if betaU[i, j] > 0))
    gammaU = np.asarray(gammaU, dtype=float)
    gT = graph.DirectedNetwork(n, frozenset(
        (i, j) for i in range(n) for j in range(n) if gammaU[i, j] > 0))
    return graph.ModelParams(
        gR=gR, gT=gT, betaU=betaU, betaT=np.asarray(betaT, dtype=float),
        gammaU=gammaU, gammaR=np.asarray(gammaR, dtype=float),
        theta=np.asarray(theta, dtype=float), delta=np.asarray(delta, dtype=float))


def symmetric_pair_params(rate: float = 0.5, theta: float = 0.5,
                          delta: float = 0.5) -> graph.ModelParams:
    """Two mutually-coupled nodes with identical rates everywhere."""
    off = np.array([[0.0, rate], [rate, 0.0]])
    return dense_params(off, off, off, off,
                        np.full(2, theta), np.full(2, delta))


def single_node_params(theta: float = 1.0, delta: float = 1.0) -> graph.ModelParams:
    z = np.zeros((1, 1))
    return dense_params(z, z, z, z, np.array([theta]), np.array([delta]))


def random_instance(rng: np.random.Generator, net: graph.DirectedNetwork,
                    levels=None) -> graph.ModelParams:
    combo = int(rng.integers(graph.N_COMBOS))
    seed = int(rng.integers(2 ** 32))
    return graph.sample_params(net, net, levels, combo, seed)


#: level spread wide enough that random instances straddle the dying-out
#: threshold at n = 30
STRADDLE_LEVELS = {
    "betaU": (0.02, 0.1, 0.3),
    "betaT": (0.02, 0.1, 0.3),
    "gammaU": (0.05, 0.15, 0.4),
    "gammaR": (0.05, 0.15, 0.4),
    "theta": (0.2, 0.5, 1.0),
    "delta": (0.2, 0.5, 1.0),
}


@pytest.fixture(scope="session")
def net30():
    return __import__("rumortruth").generate_scale_free(30, 2, seed=2)
