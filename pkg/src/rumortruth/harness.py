"""Experiment orchestration: parameter sweeps, model comparison, reporting.

A sweep walks all 729 cells of the 3^6 rate-level factorial on one pair of
generated networks, classifies each cell with the linear mean-field model
plus the spectral verdict, and (for a deterministic subsample) compares the
linear trajectory against an exact stochastic ensemble. All randomness is
derived from (base seed, combo index), so worker count never changes output.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import ctmc, dynamics, graph, spectral
from .errors import ParameterError
from .output import _fmt, write_aggregate_csv
from .seeding import derived_rng, splitmix64

# seed-derivation counters; disjoint from combo indices and path counters
_CTR_NET_R = 1_000_000
_CTR_NET_T = 1_000_001
_CTR_INIT = 2_000_000
_CTR_ENSEMBLE = 3_000_000


@dataclass
class ExperimentConfig:
    network: str = "scale_free"
    n: int = 50
    m: int = 2
    k: int = 4
    p: float = 0.1
    shared_topology: bool = True
    levels: dict | None = None
    combo_index: int = 0
    model: str = "linear"
    rate_family: str = "linear"
    saturation_c: float = 1.0
    M: int = 1000
    t_max: float = 50.0
    dt: float = 0.1
    seed: int = 0
    classification_eps: float = 1e-3
    subsample: int = 20

    def __post_init__(self):
        if self.network not in ("scale_free", "small_world"):
            raise ParameterError(f"unknown network kind {self.network!r}")
        if self.model not in ("linear", "generic", "surqt", "ensemble"):
            raise ParameterError(f"unknown model {self.model!r}")
        if self.rate_family not in dynamics.RATE_KINDS:
            raise ParameterError(f"unknown rate_family {self.rate_family!r}")
        if self.t_max <= 0 or self.dt <= 0 or self.M < 1:
            raise ParameterError("t_max, dt must be positive and M >= 1")
        if not (0 < self.classification_eps <= 0.1):
            raise ParameterError("classification_eps must be in (0, 0.1]")
        if self.subsample < 0:
            raise ParameterError("subsample must be nonnegative")

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        path = Path(path)
        if not path.exists():
            raise ParameterError(f"config file not found: {path}")
        try:
            doc = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ParameterError(f"config file {path} is not valid JSON: {exc}")
        known = set(cls.__dataclass_fields__)
        unknown = set(doc) - known
        if unknown:
            raise ParameterError(f"unknown config keys: {sorted(unknown)}")
        return cls(**doc)

    def tgrid(self) -> np.ndarray:
        steps = int(round(self.t_max / self.dt))
        return np.linspace(0.0, self.t_max, steps + 1)


def build_networks(config: ExperimentConfig
                   ) -> tuple[graph.DirectedNetwork, graph.DirectedNetwork]:
    def make(counter: int) -> graph.DirectedNetwork:
        sub = splitmix64(config.seed, counter)
        if config.network == "scale_free":
            return graph.generate_scale_free(config.n, config.m, seed=sub)
        return graph.generate_small_world(config.n, config.k, config.p, seed=sub)

    gR = make(_CTR_NET_R)
    gT = gR if config.shared_topology else make(_CTR_NET_T)
    return gR, gT


def combo_params(config: ExperimentConfig, gR, gT, combo: int) -> graph.ModelParams:
    return graph.sample_params(gR, gT, config.levels, combo, config.seed)


def initial_nodes(config: ExperimentConfig, combo: int) -> tuple[int, int]:
    """One random rumor-spreader and one distinct random truth-believer."""
    rng = derived_rng(config.seed, _CTR_INIT + combo)
    rumor = int(rng.integers(config.n))
    truth = int(rng.integers(config.n - 1))
    if truth >= rumor:
        truth += 1
    return rumor, truth


def mean_field_init(config: ExperimentConfig, combo: int):
    rumor, truth = initial_nodes(config, combo)
    U = np.ones(config.n)
    R = np.zeros(config.n)
    T = np.zeros(config.n)
    U[rumor] = U[truth] = 0.0
    R[rumor] = 1.0
    T[truth] = 1.0
    return U, R, T


def chain_init(config: ExperimentConfig, combo: int) -> np.ndarray:
    rumor, truth = initial_nodes(config, combo)
    x = np.zeros(config.n, dtype=np.int8)
    x[rumor] = ctmc.RUMOR
    x[truth] = ctmc.TRUTH
    return x


def classify_outcome(traj: dynamics.Trajectory | ctmc.MarginalTrajectory,
                     eps: float) -> str:
    """DiesOut iff the mean rumor fraction over the final 10% of the horizon
    is below eps."""
    return _classify_rfrac(np.asarray(traj.tgrid), traj.rfrac(), eps)


def _classify_rfrac(tgrid: np.ndarray, rfrac: np.ndarray, eps: float) -> str:
    if tgrid.size == 0:
        raise ParameterError("empty trajectory")
    tail = tgrid >= tgrid[-1] - 0.1 * (tgrid[-1] - tgrid[0])
    return "DiesOut" if float(rfrac[tail].mean()) < eps else "Persists"


@dataclass
class ComparisonReport:
    combo: int
    s_q1: float
    s_q2: float
    verdict: str
    outcome_linear: str
    outcome_exact: str = ""
    deviation: float | None = None
    trajectory_files: dict = field(default_factory=dict)


def _run_combo_linear(args) -> tuple[int, float, float, str, str, np.ndarray, np.ndarray]:
    config, gR, gT, combo = args
    params = combo_params(config, gR, gT, combo)
    family = dynamics.RateFamily.from_params(params, config.rate_family,
                                             config.saturation_c)
    q1 = spectral.build_q1(params, family)
    q2 = spectral.build_q2(params, family)
    s1, _ = spectral.spectral_abscissa(q1)
    s2, _ = spectral.spectral_abscissa(q2)
    traj = dynamics.integrate_linear(params, mean_field_init(config, combo),
                                     config.tgrid())
    outcome = classify_outcome(traj, config.classification_eps)
    return (combo, s1, s2, spectral.classify_verdict(s1, s2), outcome,
            traj.rfrac(), traj.tfrac())


def _run_combo_ensemble(args) -> tuple[int, np.ndarray, np.ndarray]:
    config, gR, gT, combo = args
    params = combo_params(config, gR, gT, combo)
    traj = ctmc.ensemble_average(params, chain_init(config, combo),
                                 config.tgrid(), config.M,
                                 seed=splitmix64(config.seed, _CTR_ENSEMBLE + combo))
    return combo, traj.rfrac(), traj.tfrac()


def extinction_time(tgrid: np.ndarray, rfrac: np.ndarray, eps: float) -> float:
    """First grid time from which the rumor fraction stays below eps forever
    (inf if it never settles below eps)."""
    suffix_max = np.maximum.accumulate(rfrac[::-1])[::-1]
    below = np.nonzero(suffix_max < eps)[0]
    return float(tgrid[below[0]]) if below.size else float("inf")


def select_subsample(reports: list[ComparisonReport], count: int,
                     tgrid: np.ndarray, rfrac_by_combo: dict[int, np.ndarray],
                     eps: float) -> list[int]:
    """Deterministic subsample exercising both outcome classes.

    Half fast-dying cells (earliest linear-model extinction time: the cells
    the mean-field approximation is expected to capture well) and half
    strongly persistent cells (largest tail-mean rumor fraction), topped up
    from the other class when one is short. Ties break on combo index.
    """
    tail = tgrid >= tgrid[-1] - 0.1 * (tgrid[-1] - tgrid[0])
    dies = sorted(
        (extinction_time(tgrid, rfrac_by_combo[r.combo], eps), r.combo)
        for r in reports if r.outcome_linear == "DiesOut")
    persists = sorted(
        (-float(rfrac_by_combo[r.combo][tail].mean()), r.combo)
        for r in reports if r.outcome_linear == "Persists")
    half = count // 2
    chosen = [c for _m, c in dies[:count - min(half, len(persists))]]
    chosen += [c for _m, c in persists[:count - len(chosen)]]
    chosen += [c for _m, c in dies if c not in chosen][:count - len(chosen)]
    return sorted(chosen)


def run_sweep(config: ExperimentConfig, out_dir,
              workers: int = 1) -> list[ComparisonReport]:
    """Classify every factorial cell with the linear model; compare a
    subsample against exact ensembles; write summary and trajectory CSVs."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    gR, gT = build_networks(config)
    tgrid = config.tgrid()

    jobs = [(config, gR, gT, combo) for combo in range(graph.N_COMBOS)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            linear_rows = list(pool.map(_run_combo_linear, jobs, chunksize=8))
    else:
        linear_rows = [_run_combo_linear(j) for j in jobs]
    linear_rows.sort(key=lambda row: row[0])

    reports = []
    for combo, s1, s2, verdict, outcome, rfrac, tfrac in linear_rows:
        path = out_dir / f"combo_{combo:03d}_linear.csv"
        write_aggregate_csv(path, tgrid, rfrac, tfrac)
        reports.append(ComparisonReport(
            combo=combo, s_q1=s1, s_q2=s2, verdict=verdict,
            outcome_linear=outcome,
            trajectory_files={"linear": path.name}))

    linear_rfrac = {row[0]: row[5] for row in linear_rows}
    chosen = select_subsample(reports, config.subsample, tgrid, linear_rfrac,
                              config.classification_eps)
    ens_jobs = [(config, gR, gT, combo) for combo in chosen]
    if workers > 1 and ens_jobs:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            ens_rows = list(pool.map(_run_combo_ensemble, ens_jobs))
    else:
        ens_rows = [_run_combo_ensemble(j) for j in ens_jobs]
    by_combo = {r.combo: r for r in reports}
    for combo, rfrac, tfrac in sorted(ens_rows, key=lambda r: r[0]):
        path = out_dir / f"combo_{combo:03d}_exact.csv"
        write_aggregate_csv(path, tgrid, rfrac, tfrac)
        rep = by_combo[combo]
        rep.deviation = float(np.max(np.abs(linear_rfrac[combo] - rfrac)))
        rep.trajectory_files["exact"] = path.name
        rep.outcome_exact = _classify_rfrac(tgrid, rfrac,
                                            config.classification_eps)

    write_summary_csv(out_dir / "sweep_summary.csv", reports)
    return reports


def write_summary_csv(path, reports: list[ComparisonReport]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["combo", "s_q1", "s_q2", "verdict", "outcome_linear",
                    "outcome_exact", "deviation"])
        for r in sorted(reports, key=lambda r: r.combo):
            w.writerow([r.combo, _fmt(r.s_q1), _fmt(r.s_q2), r.verdict,
                        r.outcome_linear, r.outcome_exact,
                        "" if r.deviation is None else _fmt(r.deviation)])
