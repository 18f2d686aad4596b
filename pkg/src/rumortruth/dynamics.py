"""Deterministic mean-field models of the rumor-truth interaction.

Three systems share one adaptive integrator: the linear individual-level
model (3n states U, R, T per node, with Q derived as 1-U-R-T), the generic
model with pluggable spreading-rate families, and the simplified limit
system without uncertain individuals (2n states R, T).

Two built-in rate families: "linear" (weighted sums, the classic NIMFA-style
rates) and "saturating" (c * (1 - exp(-z/c)) applied to the weighted sum),
the simplest smooth, strictly increasing, concave family whose Jacobian at
the origin equals the weight matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import solve_ivp

from .errors import NumericalError, ParameterError
from .graph import ModelParams
from .output import write_aggregate_csv, write_marginal_csv

RATE_KINDS = ("linear", "saturating")
_WHICH_TO_WEIGHTS = {"fU": "betaU", "fT": "betaT", "gU": "gammaU", "gR": "gammaR"}

_BOX_TOL = 1e-9
_UNDERSHOOT_LIMIT = 1e-6


@dataclass(frozen=True)
class RateFamily:
    """A spreading-rate specification: the four weight matrices plus a kind."""

    kind: str
    betaU: np.ndarray
    betaT: np.ndarray
    gammaU: np.ndarray
    gammaR: np.ndarray
    c: float = 1.0

    def __post_init__(self):
        if self.kind not in RATE_KINDS:
            raise ParameterError(f"unknown rate family kind {self.kind!r}")
        if self.c <= 0:
            raise ParameterError(f"saturation constant must be > 0, got {self.c}")

    @classmethod
    def from_params(cls, params: ModelParams, kind: str = "linear",
                    c: float = 1.0) -> "RateFamily":
        return cls(kind=kind, betaU=params.betaU, betaT=params.betaT,
                   gammaU=params.gammaU, gammaR=params.gammaR, c=c)

    def _apply(self, weights: np.ndarray, x: np.ndarray) -> np.ndarray:
        z = weights @ x
        if self.kind == "linear":
            return z
        return self.c * (-np.expm1(-z / self.c))

    def weights(self, which: str) -> np.ndarray:
        try:
            return getattr(self, _WHICH_TO_WEIGHTS[which])
        except KeyError:
            raise ParameterError(f"unknown rate selector {which!r}") from None


def eval_rates(family: RateFamily, which: str, x: np.ndarray) -> np.ndarray:
    """Componentwise spreading rate for one of the four channels."""
    x = np.asarray(x, dtype=float)
    if np.any(x < -_BOX_TOL) or np.any(x > 1 + _BOX_TOL):
        raise ParameterError("rate argument must lie in [0, 1]^n")
    return family._apply(family.weights(which), x)


def jacobian_at_zero(family: RateFamily, which: str) -> np.ndarray:
    """Analytic Jacobian of the chosen rate at the origin.

    For both built-in kinds this is exactly the weight matrix (the saturating
    profile has unit slope at zero).
    """
    return family.weights(which).copy()


@dataclass
class Trajectory:
    """Per-node U, R, T values on a time grid; Q is derived, never stored."""

    tgrid: np.ndarray
    U: np.ndarray
    R: np.ndarray
    T: np.ndarray

    @property
    def n(self) -> int:
        return self.R.shape[1]

    @property
    def Q(self) -> np.ndarray:
        return 1.0 - self.U - self.R - self.T

    def rfrac(self) -> np.ndarray:
        return self.R.mean(axis=1)

    def tfrac(self) -> np.ndarray:
        return self.T.mean(axis=1)

    def write_csv(self, path) -> None:
        # clamp to the unit box in reporting only
        clip = lambda a: np.clip(a, 0.0, 1.0)
        write_marginal_csv(path, self.tgrid, clip(self.U), clip(self.R),
                           clip(self.Q), clip(self.T))

    def write_aggregate_csv(self, path) -> None:
        write_aggregate_csv(path, self.tgrid, self.rfrac(), self.tfrac())


def aggregate_fractions(traj: Trajectory) -> tuple[np.ndarray, np.ndarray]:
    """Population fractions of rumor-spreaders and truth-believers."""
    return traj.rfrac(), traj.tfrac()


def _check_simplex(U, R, T):
    for name, arr in (("U", U), ("R", R), ("T", T)):
        if np.any(arr < -_BOX_TOL) or np.any(arr > 1 + _BOX_TOL):
            raise ParameterError(f"init {name} outside [0, 1]")
    if np.any(U + R + T > 1 + _BOX_TOL):
        raise ParameterError("init must satisfy U + R + T <= 1 per node")


def _integrate(field, y0, tgrid):
    tgrid = np.asarray(tgrid, dtype=float)
    sol = solve_ivp(field, (tgrid[0], tgrid[-1]), y0, dense_output=True,
                    method="DOP853", rtol=1e-10, atol=1e-12)
    if not sol.success:
        raise NumericalError(f"integration failed: {sol.message}")
    # the undershoot guard applies at the solver's accepted steps; the dense
    # interpolant can wiggle a few 1e-6 below zero during sharp decays even
    # when the steps themselves are clean, so those artifacts are clipped
    if sol.y.min() < -_UNDERSHOOT_LIMIT:
        raise NumericalError(
            f"state undershoot {sol.y.min():.3e} exceeds {_UNDERSHOOT_LIMIT}")
    return np.clip(sol.sol(tgrid), 0.0, 1.0)


def _urqt_field(params: ModelParams, family: RateFamily):
    n = params.n
    theta, delta = params.theta, params.delta
    fam = family

    def field(_t, y):
        U, R, T = y[:n], y[n:2 * n], y[2 * n:]
        fU = fam._apply(fam.betaU, R)
        fT = fam._apply(fam.betaT, R)
        gU = fam._apply(fam.gammaU, T)
        gR = fam._apply(fam.gammaR, T)
        dU = -U * fU - U * gU
        dR = U * fU + T * fT - R * gR - theta * R
        dT = U * gU + R * gR - T * fT + delta * (1.0 - U - R - T)
        return np.concatenate((dU, dR, dT))

    return field


def integrate_generic(params: ModelParams, family: RateFamily,
                      init: tuple[np.ndarray, np.ndarray, np.ndarray],
                      tgrid: np.ndarray) -> Trajectory:
    """Integrate the generic individual-level model on a time grid."""
    U0, R0, T0 = (np.asarray(a, dtype=float) for a in init)
    _check_simplex(U0, R0, T0)
    n = params.n
    y = _integrate(_urqt_field(params, family),
                   np.concatenate((U0, R0, T0)), tgrid)
    return Trajectory(tgrid=np.asarray(tgrid, dtype=float),
                      U=y[:n].T, R=y[n:2 * n].T, T=y[2 * n:].T)


def integrate_linear(params: ModelParams,
                     init: tuple[np.ndarray, np.ndarray, np.ndarray],
                     tgrid: np.ndarray) -> Trajectory:
    """The linear model: weighted-sum spreading rates in the generic system."""
    return integrate_generic(params, RateFamily.from_params(params, "linear"),
                             init, tgrid)


def surqt_field(params: ModelParams, family: RateFamily):
    """Right-hand side of the simplified (no-uncertain) 2n system."""
    n = params.n
    theta, delta = params.theta, params.delta
    fam = family

    def field(_t, y):
        R, T = y[:n], y[n:]
        fT = fam._apply(fam.betaT, R)
        gR = fam._apply(fam.gammaR, T)
        dR = T * fT - R * gR - theta * R
        dT = R * gR - T * fT + delta * (1.0 - R - T)
        return np.concatenate((dR, dT))

    return field


def integrate_surqt(params: ModelParams, family: RateFamily,
                    init: tuple[np.ndarray, np.ndarray],
                    tgrid: np.ndarray) -> Trajectory:
    """Integrate the simplified model; U is identically zero in the output."""
    R0, T0 = (np.asarray(a, dtype=float) for a in init)
    for name, arr in (("R", R0), ("T", T0)):
        if np.any(arr < -_BOX_TOL):
            raise ParameterError(f"init {name} must be nonnegative")
    if np.any(R0 + T0 > 1 + _BOX_TOL):
        raise ParameterError("init must satisfy R + T <= 1 per node")
    y = _integrate(surqt_field(params, family), np.concatenate((R0, T0)), tgrid)
    n = params.n
    tgrid = np.asarray(tgrid, dtype=float)
    return Trajectory(tgrid=tgrid, U=np.zeros((len(tgrid), n)),
                      R=y[:n].T, T=y[n:].T)
