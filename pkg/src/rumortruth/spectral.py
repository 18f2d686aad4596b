"""Threshold and equilibrium analysis for the simplified rumor-truth system.

Builds the two Metzler threshold matrices (the linearization of the rumor
block at the rumor-free state, and its persistence counterpart), computes
their dominant eigenvalue by Perron-shifted power iteration, evaluates the
sufficient dying-out criteria, the asymptotic per-node bounds, and the
monotone fixed-point solve for the rumor equilibrium.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .dynamics import RateFamily, eval_rates, jacobian_at_zero, surqt_field
from .errors import NumericalError, ParameterError
from .graph import ModelParams

_METZLER_TOL = 1e-12
_POWER_TOL = 1e-12
_POWER_MAX_ITERS = 10_000
_SIGN_EPS = 1e-9

VERDICTS = ("DiesOut", "MayPersist", "Persistent", "Indeterminate")


def spectral_abscissa(m: np.ndarray) -> tuple[float, np.ndarray]:
    """Rightmost eigenvalue of an irreducible Metzler matrix, with its
    positive eigenvector.

    Power iteration on m + sigma*I with sigma = max |m_ii| + 1; the extra +1
    keeps the diagonal positive so the shifted matrix is primitive and the
    iteration cannot cycle. Scale-invariance s(2m) = 2 s(m) is unaffected
    because the shift is subtracted back out.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ParameterError("matrix must be square")
    off = m - np.diag(np.diag(m))
    if off.min() < -_METZLER_TOL:
        raise ParameterError("matrix must be Metzler (nonnegative off-diagonal)")
    sigma = float(np.abs(np.diag(m)).max()) + 1.0
    shifted = m + sigma * np.eye(m.shape[0])
    rho, v = _perron(shifted)
    return rho - sigma, v


def _perron(a: np.ndarray) -> tuple[float, np.ndarray]:
    """Perron root and positive eigenvector of a primitive nonnegative matrix.

    Power iteration with a Rayleigh-quotient stop; when the two leading
    eigenvalues are nearly tied the iteration stalls, so after the budget is
    spent the dense eigensolver takes over (still deterministic).
    """
    n = a.shape[0]
    v = np.full(n, 1.0 / n)
    lam = 0.0
    for _ in range(_POWER_MAX_ITERS):
        w = a @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0, np.full(n, 1.0)
        w /= norm
        lam_new = float(w @ (a @ w) / (w @ w))
        if abs(lam_new - lam) <= _POWER_TOL * max(1.0, abs(lam_new)):
            return lam_new, w / w.max()
        lam, v = lam_new, w
    vals, vecs = np.linalg.eig(a)
    k = int(np.argmax(vals.real))
    if abs(vals[k].imag) > 1e-8 * max(1.0, abs(vals[k].real)):
        raise NumericalError("dominant eigenvalue is not real")
    w = np.abs(vecs[:, k].real)
    return float(vals[k].real), w / w.max()


def spectral_radius(a: np.ndarray) -> float:
    """Spectral radius of a nonnegative matrix (shift by I for primitivity)."""
    a = np.asarray(a, dtype=float)
    if a.min() < -_METZLER_TOL:
        raise ParameterError("matrix must be nonnegative")
    rho, _ = _perron(a + np.eye(a.shape[0]))
    return rho - 1.0


def build_q1(params: ModelParams, family: RateFamily) -> np.ndarray:
    """Rumor-block linearization at the rumor-free state: J_fT(0) - diag(theta)."""
    return jacobian_at_zero(family, "fT") - np.diag(params.theta)


def build_q2(params: ModelParams, family: RateFamily) -> np.ndarray:
    """Persistence matrix: q1 minus the quarantine-fraction and truth-pressure
    corrections."""
    jac = jacobian_at_zero(family, "fT")
    frac = params.theta / (params.theta + params.delta)
    g_one = eval_rates(family, "gR", np.ones(params.n))
    return build_q1(params, family) - np.diag(frac) @ jac - np.diag(g_one)


def corollary_checks(params: ModelParams) -> dict[str, bool]:
    """The four sufficient dying-out criteria for the linear-rate model.

    (a) spectral radius of q1 * diag(theta)^-1 + I below one;
    (b) spectral radius of betaT * diag(theta)^-1 below one;
    (c) every column sum of betaT below theta_j;
    (d) every row sum of betaT_ij / theta_j below one.
    """
    bt = params.betaT
    theta = params.theta
    q1 = bt - np.diag(theta)
    d_inv = np.diag(1.0 / theta)
    a = spectral_radius(q1 @ d_inv + np.eye(params.n)) < 1.0
    b = spectral_radius(bt @ d_inv) < 1.0
    c = bool(np.all(bt.sum(axis=0) < theta))
    d = bool(np.all((bt / theta[None, :]).sum(axis=1) < 1.0))
    return {"a": a, "b": b, "c": c, "d": d}


def theorem1_bounds(params: ModelParams,
                    family: RateFamily) -> tuple[np.ndarray, np.ndarray]:
    """Asymptotic per-node bounds: limsup R_i <= a_i and liminf T_i >= b_i."""
    f_one = eval_rates(family, "fT", np.ones(params.n))
    a = f_one / (f_one + params.theta)
    b = (params.theta * params.delta
         / ((f_one + params.theta) * (f_one + params.delta)))
    return a, b


@dataclass
class EquilibriumResult:
    R: np.ndarray
    T: np.ndarray
    residual: float
    converged: bool
    iterations: int = 0


_FP_TOL = 1e-12
_FP_ZERO = 1e-9
_FP_MAX_ITERS = 100_000
_EPS_START = 1e-2
_EPS_HALVINGS = 60


def find_rumor_equilibrium(params: ModelParams,
                           family: RateFamily) -> EquilibriumResult:
    """Minimal rumor equilibrium by monotone fixed-point iteration from below.

    At an equilibrium R_i = delta_i (1 - T_i) / (theta_i + delta_i), so with
    c_i = (theta_i + delta_i) / delta_i the rumor levels satisfy
        x_i = f_i(x) / (theta_i + g_i(1 - c*x) + c_i f_i(x)),
    a map that is monotone nondecreasing in every coordinate and maps the
    admissible box into itself. Seeded at eps * v with v the positive
    eigenvector of the threshold matrix, eps backtracked until the map moves
    the seed upward; iterates then increase to the minimal fixed point.
    """
    n = params.n
    theta, delta = params.theta, params.delta
    s1, v = spectral_abscissa(build_q1(params, family))
    if s1 <= 0:
        return EquilibriumResult(R=np.zeros(n), T=np.ones(n),
                                 residual=0.0, converged=False)
    c = (theta + delta) / delta

    def step(x: np.ndarray) -> np.ndarray:
        t = 1.0 - c * x
        f = family._apply(family.betaT, x)
        g = family._apply(family.gammaR, t)
        return f / (theta + g + c * f)

    eps = _EPS_START
    seed = None
    for _ in range(_EPS_HALVINGS):
        cand = eps * v
        if np.all(c * cand < 1.0) and np.all(step(cand) >= cand):
            seed = cand
            break
        eps *= 0.5
    if seed is None:
        # the rumor-free state can attract from below even with s(q1) > 0;
        # iterate down from the box corner to the maximal fixed point instead
        seed = 1.0 / c

    x = seed
    settled = False
    iterations = 0
    for iterations in range(1, _FP_MAX_ITERS + 1):
        x_new = step(x)
        if np.max(np.abs(x_new - x)) < _FP_TOL:
            x = x_new
            settled = True
            break
        x = x_new
    converged = settled and bool(np.all(x > _FP_ZERO))
    if not converged:
        return EquilibriumResult(R=np.zeros(n), T=np.ones(n), residual=0.0,
                                 converged=False, iterations=iterations)
    t = 1.0 - c * x
    field = surqt_field(params, family)
    residual = float(np.max(np.abs(field(0.0, np.concatenate((x, t))))))
    return EquilibriumResult(R=x, T=t, residual=residual,
                             converged=converged, iterations=iterations)


@dataclass
class SpectralReport:
    q1: np.ndarray
    q2: np.ndarray
    s_q1: float
    s_q2: float
    corollary: dict[str, bool]
    bounds_a: np.ndarray
    bounds_b: np.ndarray
    verdict: str
    equilibrium: EquilibriumResult

    def to_json(self) -> str:
        doc = {
            "s_q1": self.s_q1,
            "s_q2": self.s_q2,
            "corollary_a": self.corollary["a"],
            "corollary_b": self.corollary["b"],
            "corollary_c": self.corollary["c"],
            "corollary_d": self.corollary["d"],
            "bounds_a": self.bounds_a.tolist(),
            "bounds_b": self.bounds_b.tolist(),
            "verdict": self.verdict,
            "equilibrium": {
                "R": self.equilibrium.R.tolist(),
                "T": self.equilibrium.T.tolist(),
                "residual": self.equilibrium.residual,
                "converged": self.equilibrium.converged,
            },
        }
        return json.dumps(doc, indent=2)


def classify_verdict(s_q1: float, s_q2: float) -> str:
    if abs(s_q1) < _SIGN_EPS:
        return "Indeterminate"
    if s_q1 < 0:
        return "DiesOut"
    return "Persistent" if s_q2 > 0 else "MayPersist"


def spectral_report(params: ModelParams, family: RateFamily,
                    with_equilibrium: bool = True) -> SpectralReport:
    """Full threshold analysis of one parameterized model."""
    q1 = build_q1(params, family)
    q2 = build_q2(params, family)
    s1, _ = spectral_abscissa(q1)
    s2, _ = spectral_abscissa(q2)
    bounds_a, bounds_b = theorem1_bounds(params, family)
    if with_equilibrium:
        eq = find_rumor_equilibrium(params, family)
    else:
        eq = EquilibriumResult(R=np.zeros(params.n), T=np.ones(params.n),
                               residual=0.0, converged=False)
    return SpectralReport(q1=q1, q2=q2, s_q1=s1, s_q2=s2,
                          corollary=corollary_checks(params),
                          bounds_a=bounds_a, bounds_b=bounds_b,
                          verdict=classify_verdict(s1, s2), equilibrium=eq)
