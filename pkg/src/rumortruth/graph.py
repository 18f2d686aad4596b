"""Directed spreading topologies and the per-edge/per-node rate parameters.

Edge convention: an edge ``(i, j)`` means node ``j`` can influence node ``i``
(j tells the rumor/truth to i). Both spreading networks used in a model must
be strongly connected; this is checked, never assumed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import NumericalError, ParameterError
from .seeding import derived_rng

RATE_GROUPS = ("betaU", "betaT", "gammaU", "gammaR", "theta", "delta")

#: Three ascending levels per rate group; the full factorial over the six
#: groups gives 3**6 = 729 parameter combinations.
DEFAULT_LEVELS: dict[str, tuple[float, float, float]] = {
    g: (0.1, 0.3, 0.5) for g in RATE_GROUPS
}

N_COMBOS = 3 ** len(RATE_GROUPS)


@dataclass(frozen=True)
class DirectedNetwork:
    """A simple directed graph on nodes 0..n-1 without self-loops."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError(f"node count must be positive, got {self.n}")
        for i, j in self.edges:
            if i == j:
                raise ParameterError(f"self-loop ({i}, {i}) is not allowed")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ParameterError(f"edge ({i}, {j}) out of range for n={self.n}")

    def adjacency_mask(self) -> np.ndarray:
        """Boolean n x n matrix, mask[i, j] True iff (i, j) is an edge."""
        mask = np.zeros((self.n, self.n), dtype=bool)
        for i, j in self.edges:
            mask[i, j] = True
        return mask

    def successors(self) -> list[list[int]]:
        """successors[j] = nodes i reachable by one arc j -> i (j tells i)."""
        succ: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in sorted(self.edges):
            succ[j].append(i)
        return succ

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


def is_strongly_connected(net: DirectedNetwork) -> bool:
    """True iff every node reaches every other along directed arcs.

    Iterative Tarjan SCC; returns as soon as a second component is implied.
    """
    n = net.n
    if n == 1:
        return True
    succ = net.successors()
    index = [-1] * n
    lowlink = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    counter = 0
    scc_count = 0

    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = lowlink[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            for k in range(pi, len(succ[v])):
                w = succ[v][k]
                if index[w] == -1:
                    work[-1] = (v, k + 1)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
            if lowlink[v] == index[v]:
                scc_count += 1
                if scc_count > 1:
                    return False
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    if w == v:
                        break
    return scc_count == 1 and counter == n


def _symmetric_network(n: int, undirected: set[tuple[int, int]]) -> DirectedNetwork:
    """Realize each undirected link as the pair of opposite arcs."""
    edges = set()
    for a, b in undirected:
        edges.add((a, b))
        edges.add((b, a))
    return DirectedNetwork(n=n, edges=frozenset(edges))


_MAX_REGEN = 100


def generate_scale_free(n: int, m: int = 2, seed: int = 0) -> DirectedNetwork:
    """Preferential-attachment network, symmetric arcs, strongly connected.

    Starts from a complete core on m+1 nodes; each later node attaches to m
    distinct existing nodes chosen proportionally to degree. Deterministic
    given seed.
    """
    if m < 1 or n < m + 1:
        raise ParameterError(f"need n >= m+1 >= 2, got n={n}, m={m}")
    for attempt in range(_MAX_REGEN):
        rng = derived_rng(seed, attempt)
        links: set[tuple[int, int]] = set()
        # complete core on m+1 nodes
        for a in range(m + 1):
            for b in range(a + 1, m + 1):
                links.add((a, b))
        # repeated-nodes list implements degree-proportional sampling
        repeated: list[int] = []
        for a, b in sorted(links):
            repeated.extend((a, b))
        for v in range(m + 1, n):
            targets: set[int] = set()
            while len(targets) < m:
                targets.add(int(repeated[rng.integers(len(repeated))]))
            for t in sorted(targets):
                links.add((min(v, t), max(v, t)))
                repeated.extend((v, t))
        net = _symmetric_network(n, links)
        if is_strongly_connected(net):
            return net
    raise NumericalError(  # pragma: no cover - core is always connected
        f"no strongly connected network after {_MAX_REGEN} attempts (n={n})")


def generate_small_world(n: int, k: int = 4, p: float = 0.1,
                         seed: int = 0) -> DirectedNetwork:
    """Watts-Strogatz ring-rewire network, symmetric arcs, strongly connected.

    Each forward ring link is rewired with probability p; a rewire that would
    create a self-loop or duplicate link is redrawn. Regenerates with an
    incremented sub-seed if rewiring disconnects the graph.
    """
    if not (2 <= k < n) or k % 2 != 0:
        raise ParameterError(f"need 2 <= k < n with k even, got n={n}, k={k}")
    if not (0.0 <= p <= 1.0):
        raise ParameterError(f"rewiring probability must be in [0, 1], got {p}")
    for attempt in range(_MAX_REGEN):
        rng = derived_rng(seed, attempt)
        links: set[tuple[int, int]] = set()
        for i in range(n):
            for d in range(1, k // 2 + 1):
                j = (i + d) % n
                links.add((min(i, j), max(i, j)))
        for i in range(n):
            for d in range(1, k // 2 + 1):
                j = (i + d) % n
                old = (min(i, j), max(i, j))
                if old not in links or rng.random() >= p:
                    continue
                for _ in range(8 * n):
                    w = int(rng.integers(n))
                    new = (min(i, w), max(i, w))
                    if w != i and new not in links:
                        links.remove(old)
                        links.add(new)
                        break
        net = _symmetric_network(n, links)
        if is_strongly_connected(net):
            return net
    raise NumericalError(
        f"no strongly connected network after {_MAX_REGEN} attempts (n={n})")


@dataclass(frozen=True)
class ModelParams:
    """All rate constants of the rumor-truth interaction, bound to (gR, gT).

    Sparsity contract: betaU/betaT are positive exactly on the arcs of gR,
    gammaU/gammaR exactly on the arcs of gT; theta and delta are positive
    per-node rates.
    """

    gR: DirectedNetwork
    gT: DirectedNetwork
    betaU: np.ndarray
    betaT: np.ndarray
    gammaU: np.ndarray
    gammaR: np.ndarray
    theta: np.ndarray
    delta: np.ndarray

    @property
    def n(self) -> int:
        return self.gR.n

    def validate(self) -> None:
        n = self.n
        if self.gT.n != n:
            raise ParameterError("gR and gT must share the node set")
        for name in ("betaU", "betaT", "gammaU", "gammaR"):
            mat = getattr(self, name)
            if mat.shape != (n, n):
                raise ParameterError(f"{name} must be {n}x{n}")
            if np.any(mat < 0):
                raise ParameterError(f"{name} must be nonnegative")
        for name in ("theta", "delta"):
            vec = getattr(self, name)
            if vec.shape != (n,):
                raise ParameterError(f"{name} must have length {n}")
            if np.any(vec <= 0):
                raise ParameterError(f"{name} must be strictly positive")
        maskR = self.gR.adjacency_mask()
        maskT = self.gT.adjacency_mask()
        for name, mask in (("betaU", maskR), ("betaT", maskR),
                           ("gammaU", maskT), ("gammaR", maskT)):
            if not np.array_equal(getattr(self, name) > 0, mask):
                raise ParameterError(f"{name} positivity pattern must equal "
                                     "the corresponding edge set")
        for name, net in (("gR", self.gR), ("gT", self.gT)):
            if not is_strongly_connected(net):
                raise ParameterError(f"{name} is not strongly connected")


def sample_params(gR: DirectedNetwork, gT: DirectedNetwork,
                  levels: Mapping[str, Sequence[float]] | None = None,
                  combo_index: int = 0, seed: int = 0) -> ModelParams:
    """Build the parameter set for one cell of the 3^6 factorial sweep.

    The base-3 digits of combo_index select one of three scale levels for
    each rate group (digit 0 = betaU, ..., digit 5 = delta); every edge/node
    rate is scale * u with u ~ Uniform(0.5, 1.5), seeded deterministically
    from (seed, combo_index).
    """
    if levels is None:
        levels = DEFAULT_LEVELS
    if not (0 <= combo_index < N_COMBOS):
        raise ParameterError(
            f"combo_index must be in [0, {N_COMBOS}), got {combo_index}")
    for name, net in (("gR", gR), ("gT", gT)):
        if not is_strongly_connected(net):
            raise ParameterError(f"{name} is not strongly connected")
    n = gR.n
    scales = {}
    rest = combo_index
    for group in RATE_GROUPS:
        tiers = levels[group]
        if len(tiers) != 3:
            raise ParameterError(f"levels[{group!r}] must have 3 entries")
        scales[group] = float(tiers[rest % 3])
        rest //= 3

    rng = derived_rng(seed, combo_index)

    def edge_matrix(net: DirectedNetwork, scale: float) -> np.ndarray:
        mat = np.zeros((n, n))
        for i, j in net.sorted_edges():
            mat[i, j] = scale * rng.uniform(0.5, 1.5)
        return mat

    betaU = edge_matrix(gR, scales["betaU"])
    betaT = edge_matrix(gR, scales["betaT"])
    gammaU = edge_matrix(gT, scales["gammaU"])
    gammaR = edge_matrix(gT, scales["gammaR"])
    theta = scales["theta"] * rng.uniform(0.5, 1.5, size=n)
    delta = scales["delta"] * rng.uniform(0.5, 1.5, size=n)
    params = ModelParams(gR=gR, gT=gT, betaU=betaU, betaT=betaT,
                         gammaU=gammaU, gammaR=gammaR, theta=theta, delta=delta)
    params.validate()
    return params


# ---------------------------------------------------------------------------
# serialization


def write_edge_list(net: DirectedNetwork, path: str | Path) -> None:
    """Edge-list text format: header 'n <count>', then one 'i j' per line."""
    lines = [f"n {net.n}"]
    lines.extend(f"{i} {j}" for i, j in net.sorted_edges())
    Path(path).write_text("\n".join(lines) + "\n")


def read_edge_list(path: str | Path) -> DirectedNetwork:
    path = Path(path)
    if not path.exists():
        raise ParameterError(f"network file not found: {path}")
    lines = [ln for ln in path.read_text().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("n "):
        raise ParameterError(f"missing 'n <count>' header in {path}")
    n = int(lines[0].split()[1])
    edges = set()
    for ln in lines[1:]:
        i, j = (int(tok) for tok in ln.split())
        edges.add((i, j))
    return DirectedNetwork(n=n, edges=frozenset(edges))


def params_to_json(params: ModelParams) -> str:
    doc = {
        "n": params.n,
        "gR_edges": params.gR.sorted_edges(),
        "gT_edges": params.gT.sorted_edges(),
        "betaU": params.betaU.tolist(),
        "betaT": params.betaT.tolist(),
        "gammaU": params.gammaU.tolist(),
        "gammaR": params.gammaR.tolist(),
        "theta": params.theta.tolist(),
        "delta": params.delta.tolist(),
    }
    return json.dumps(doc, indent=2)


def params_from_json(text: str) -> ModelParams:
    doc = json.loads(text)
    n = int(doc["n"])
    gR = DirectedNetwork(n, frozenset(tuple(e) for e in doc["gR_edges"]))
    gT = DirectedNetwork(n, frozenset(tuple(e) for e in doc["gT_edges"]))
    params = ModelParams(
        gR=gR, gT=gT,
        betaU=np.asarray(doc["betaU"], dtype=float),
        betaT=np.asarray(doc["betaT"], dtype=float),
        gammaU=np.asarray(doc["gammaU"], dtype=float),
        gammaR=np.asarray(doc["gammaR"], dtype=float),
        theta=np.asarray(doc["theta"], dtype=float),
        delta=np.asarray(doc["delta"], dtype=float),
    )
    params.validate()
    return params
