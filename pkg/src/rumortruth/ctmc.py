"""The exact 4^n continuous-time Markov chain of the rumor-truth interaction.

Node states: 0 = uncertain, 1 = rumor-spreading, 2 = quarantined,
3 = truth-believing. An OSN state is a length-n vector with entries in
{0,1,2,3}, encoded as the base-4 integer sum(states[k] * 4**k).

Two solution routes are provided: a dense/sparse generator with a
high-accuracy linear ODE solve (the small-n oracle), and an exact Gillespie
sample-path simulator with deterministic seeded ensembles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.integrate import solve_ivp

from .errors import CapacityError, ParameterError
from .graph import ModelParams
from .output import write_aggregate_csv, write_marginal_csv
from .seeding import derived_rng

UNCERTAIN, RUMOR, QUARANTINED, TRUTH = 0, 1, 2, 3

#: legal transitions as (from_state, to_state)
LEGAL_TRANSITIONS = frozenset(
    [(0, 1), (3, 1), (0, 3), (1, 3), (1, 2), (2, 3)])

_DENSE_N_MAX = 8
_EXACT_N_MAX = 6


def encode_state(states: np.ndarray) -> int:
    """Base-4 integer encoding of an OSN state vector."""
    return int(sum(int(s) << (2 * k) for k, s in enumerate(states)))


def decode_state(index: int, n: int) -> np.ndarray:
    return np.array([(index >> (2 * k)) & 3 for k in range(n)], dtype=np.int8)


def point_mass(state: np.ndarray) -> np.ndarray:
    """Distribution over all 4^n OSN states concentrated on one state."""
    n = len(state)
    dist = np.zeros(4 ** n)
    dist[encode_state(state)] = 1.0
    return dist


def transition_rates(params: ModelParams,
                     state: np.ndarray) -> list[tuple[int, int, float]]:
    """Positive-rate transitions (node, new_state, rate) out of one OSN state.

    Spreading pressures are summed over current rumor-spreaders (for the
    uncertain->rumor and truth->rumor channels) and truth-believers (for the
    uncertain->truth and rumor->truth channels); quarantine and education are
    per-node spontaneous rates.
    """
    x = np.asarray(state)
    ind_r = (x == RUMOR).astype(float)
    ind_t = (x == TRUTH).astype(float)
    bU = params.betaU @ ind_r
    bT = params.betaT @ ind_r
    gU = params.gammaU @ ind_t
    gR = params.gammaR @ ind_t
    out: list[tuple[int, int, float]] = []
    for m in range(len(x)):
        if x[m] == UNCERTAIN:
            if bU[m] > 0:
                out.append((m, RUMOR, float(bU[m])))
            if gU[m] > 0:
                out.append((m, TRUTH, float(gU[m])))
        elif x[m] == RUMOR:
            if gR[m] > 0:
                out.append((m, TRUTH, float(gR[m])))
            out.append((m, QUARANTINED, float(params.theta[m])))
        elif x[m] == QUARANTINED:
            out.append((m, TRUTH, float(params.delta[m])))
        else:  # truth-believing
            if bT[m] > 0:
                out.append((m, RUMOR, float(bT[m])))
    return out


def _generator_entries(params: ModelParams):
    """Yield (from_index, to_index, rate) over all OSN states."""
    n = params.n
    for s in range(4 ** n):
        state = decode_state(s, n)
        for node, new, rate in transition_rates(params, state):
            target = s + (new - int(state[node])) * (1 << (2 * node))
            yield s, target, rate


def build_full_generator(params: ModelParams) -> np.ndarray:
    """Dense 4^n x 4^n rate matrix in from->to orientation, zero row sums."""
    n = params.n
    if n > _DENSE_N_MAX:
        raise CapacityError(
            f"dense generator limited to n <= {_DENSE_N_MAX}, got n={n}")
    size = 4 ** n
    q = np.zeros((size, size))
    for s, t, rate in _generator_entries(params):
        q[s, t] += rate
    np.fill_diagonal(q, q.diagonal() - q.sum(axis=1))
    return q


def _sparse_generator(params: ModelParams) -> sparse.csr_matrix:
    size = 4 ** params.n
    rows, cols, vals = [], [], []
    diag = np.zeros(size)
    for s, t, rate in _generator_entries(params):
        rows.append(s)
        cols.append(t)
        vals.append(rate)
        diag[s] -= rate
    rows.extend(range(size))
    cols.extend(range(size))
    vals.extend(diag)
    return sparse.csr_matrix((vals, (rows, cols)), shape=(size, size))


@dataclass
class MarginalTrajectory:
    """Per-node occupancy probabilities U, R, Q, T on a time grid.

    Arrays have shape (len(tgrid), n).
    """

    tgrid: np.ndarray
    U: np.ndarray
    R: np.ndarray
    Q: np.ndarray
    T: np.ndarray

    @property
    def n(self) -> int:
        return self.U.shape[1]

    def rfrac(self) -> np.ndarray:
        return self.R.mean(axis=1)

    def tfrac(self) -> np.ndarray:
        return self.T.mean(axis=1)

    def write_csv(self, path) -> None:
        write_marginal_csv(path, self.tgrid, self.U, self.R, self.Q, self.T)

    def write_aggregate_csv(self, path) -> None:
        write_aggregate_csv(path, self.tgrid, self.rfrac(), self.tfrac())


def marginals_from_distribution(dist: np.ndarray, n: int) -> np.ndarray:
    """(4, n) array of per-node state probabilities from a joint distribution."""
    idx = np.arange(4 ** n)
    out = np.empty((4, n))
    for k in range(n):
        digit = (idx >> (2 * k)) & 3
        for s in range(4):
            out[s, k] = dist[digit == s].sum()
    return out


def joint_probability(dist: np.ndarray, n: int, i: int, a: int,
                      j: int, b: int) -> float:
    """Pr{X_i = a, X_j = b} under a joint distribution over OSN states."""
    idx = np.arange(4 ** n)
    di = (idx >> (2 * i)) & 3
    dj = (idx >> (2 * j)) & 3
    return float(dist[(di == a) & (dj == b)].sum())


def solve_exact(params: ModelParams, init: np.ndarray,
                tgrid: np.ndarray) -> MarginalTrajectory:
    """Integrate the full 4^n master equation and marginalize per node.

    This is the ground-truth oracle for every approximate route. init is a
    distribution over encoded OSN states.
    """
    n = params.n
    if n > _EXACT_N_MAX:
        raise CapacityError(
            f"exact solve limited to n <= {_EXACT_N_MAX}, got n={n}")
    init = np.asarray(init, dtype=float)
    if init.shape != (4 ** n,) or np.any(init < 0) or abs(init.sum() - 1) > 1e-9:
        raise ParameterError("init must be a distribution over the 4^n states")
    tgrid = np.asarray(tgrid, dtype=float)
    qt = _sparse_generator(params).T.tocsr()
    sol = solve_ivp(lambda _t, s: qt @ s, (tgrid[0], tgrid[-1]), init,
                    t_eval=tgrid, method="DOP853", rtol=1e-10, atol=1e-13)
    if not sol.success:
        raise ParameterError(f"exact solve failed: {sol.message}")
    probs = np.empty((4, len(tgrid), n))
    for ti in range(len(tgrid)):
        probs[:, ti, :] = marginals_from_distribution(sol.y[:, ti], n)
    return MarginalTrajectory(tgrid=tgrid, U=probs[0], R=probs[1],
                              Q=probs[2], T=probs[3])


def distribution_on_grid(params: ModelParams, init: np.ndarray,
                         tgrid: np.ndarray) -> np.ndarray:
    """Full joint distribution at each grid time, shape (len(tgrid), 4^n)."""
    n = params.n
    if n > _EXACT_N_MAX:
        raise CapacityError(
            f"exact solve limited to n <= {_EXACT_N_MAX}, got n={n}")
    qt = _sparse_generator(params).T.tocsr()
    tgrid = np.asarray(tgrid, dtype=float)
    sol = solve_ivp(lambda _t, s: qt @ s, (tgrid[0], tgrid[-1]),
                    np.asarray(init, dtype=float), t_eval=tgrid,
                    method="DOP853", rtol=1e-10, atol=1e-13)
    return sol.y.T


# ---------------------------------------------------------------------------
# Gillespie simulation


@dataclass
class SamplePath:
    """One exact sample path: ordered events (time, node, new_state)."""

    events: list[tuple[float, int, int]]
    initial: np.ndarray
    t_max: float


class _ChainState:
    """Mutable per-path state with O(n) incremental rate bookkeeping."""

    __slots__ = ("x", "bU", "bT", "gU", "gR", "p")

    def __init__(self, params: ModelParams, init: np.ndarray):
        self.p = params
        self.x = np.asarray(init, dtype=np.int8).copy()
        ind_r = (self.x == RUMOR).astype(float)
        ind_t = (self.x == TRUTH).astype(float)
        self.bU = params.betaU @ ind_r
        self.bT = params.betaT @ ind_r
        self.gU = params.gammaU @ ind_t
        self.gR = params.gammaR @ ind_t

    def channel_rates(self) -> tuple[np.ndarray, np.ndarray]:
        x = self.x
        rate_a = np.where(x == UNCERTAIN, self.bU,
                          np.where(x == RUMOR, self.gR,
                                   np.where(x == QUARANTINED, self.p.delta,
                                            self.bT)))
        rate_b = np.where(x == UNCERTAIN, self.gU,
                          np.where(x == RUMOR, self.p.theta, 0.0))
        return rate_a, rate_b

    def apply(self, node: int, new_state: int) -> None:
        old = int(self.x[node])
        if old == RUMOR:
            self.bU -= self.p.betaU[:, node]
            self.bT -= self.p.betaT[:, node]
        elif old == TRUTH:
            self.gU -= self.p.gammaU[:, node]
            self.gR -= self.p.gammaR[:, node]
        if new_state == RUMOR:
            self.bU += self.p.betaU[:, node]
            self.bT += self.p.betaT[:, node]
        elif new_state == TRUTH:
            self.gU += self.p.gammaU[:, node]
            self.gR += self.p.gammaR[:, node]
        self.x[node] = new_state


_TARGET_A = {UNCERTAIN: RUMOR, RUMOR: TRUTH, QUARANTINED: TRUTH, TRUTH: RUMOR}
_TARGET_B = {UNCERTAIN: TRUTH, RUMOR: QUARANTINED}


def _gillespie_events(params: ModelParams, init: np.ndarray, t_max: float,
                      rng: np.random.Generator):
    """Yield exact events (t, node, new_state); mutates nothing external."""
    n = params.n
    chain = _ChainState(params, init)
    t = 0.0
    while True:
        rate_a, rate_b = chain.channel_rates()
        total = float(rate_a.sum() + rate_b.sum())
        if total <= 0.0:
            return
        t += rng.exponential() / total
        if t > t_max:
            return
        r = rng.random() * total
        cum = np.cumsum(np.concatenate((rate_a, rate_b)))
        idx = int(np.searchsorted(cum, r, side="right"))
        idx = min(idx, 2 * n - 1)
        node = idx % n
        old = int(chain.x[node])
        new = _TARGET_A[old] if idx < n else _TARGET_B[old]
        chain.apply(node, new)
        yield t, node, new


def gillespie_path(params: ModelParams, init: np.ndarray, t_max: float,
                   seed: int = 0) -> SamplePath:
    """One exact stochastic sample path, deterministic given seed."""
    if t_max <= 0:
        raise ParameterError(f"t_max must be positive, got {t_max}")
    rng = np.random.default_rng(seed)
    events = list(_gillespie_events(params, init, t_max, rng))
    return SamplePath(events=events, initial=np.asarray(init, dtype=np.int8),
                      t_max=float(t_max))


def sample_path_on_grid(path: SamplePath, tgrid: np.ndarray) -> np.ndarray:
    """Node states at each grid time (right-continuous), shape (T, n)."""
    tgrid = np.asarray(tgrid, dtype=float)
    snaps = np.empty((len(tgrid), len(path.initial)), dtype=np.int8)
    x = path.initial.copy()
    gi = 0
    for t, node, new in path.events:
        while gi < len(tgrid) and tgrid[gi] < t:
            snaps[gi] = x
            gi += 1
        x[node] = new
    snaps[gi:] = x
    return snaps


def ensemble_average(params: ModelParams, init: np.ndarray,
                     tgrid: np.ndarray, M: int,
                     seed: int = 0) -> MarginalTrajectory:
    """Occupancy frequencies over M independent seeded sample paths.

    Path k uses the stream seeded by splitmix64(seed, k); counts are integers,
    so any execution order gives bit-identical output.
    """
    if M < 1:
        raise ParameterError(f"M must be >= 1, got {M}")
    tgrid = np.asarray(tgrid, dtype=float)
    n = params.n
    counts = np.zeros((4, len(tgrid), n), dtype=np.int64)
    t_max = float(tgrid[-1])
    for k in range(M):
        rng = derived_rng(seed, k)
        snaps = np.empty((len(tgrid), n), dtype=np.int8)
        x = np.asarray(init, dtype=np.int8).copy()
        gi = 0
        for t, node, new in _gillespie_events(params, init, t_max, rng):
            while gi < len(tgrid) and tgrid[gi] < t:
                snaps[gi] = x
                gi += 1
            x[node] = new
        snaps[gi:] = x
        for s in range(4):
            counts[s] += snaps == s
    freq = counts / float(M)
    return MarginalTrajectory(tgrid=tgrid, U=freq[0], R=freq[1],
                              Q=freq[2], T=freq[3])
