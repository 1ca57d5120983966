"""Numerical estimation of minimum detection efficiencies.

Multi-start derivative-free minimization of the cutoff efficiency over all
pure three-qubit states and projective measurement triples, plus the
closed-form noise analysis of the one-parameter family and the sweep that
produces (theta, p, eta_min) tables.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .detector import observed_probabilities
from .errors import SearchFailureError
from .families import NoiseLevel, ThetaSetting, mix_white_noise, theta_measurements, theta_state
from .inequality import (
    CORRELATOR_SIGNS,
    svetlichny_coefficients,
    svetlichny_cutoff,
    t2_statistic,
    t2_cutoff_symmetric,
    t2_triple_and_pair_sums,
)
from .qcore import (
    BehaviorTensor,
    PureState,
    QubitMeasurement,
    SettingsTriple,
    behavior_from_settings,
    density_from_pure,
    measurement_basis,
    pure_behavior_probabilities,
)

# treat violation margins below these floors as "no violation" inside the
# objectives; keeps float noise in near-degenerate tensors out of the ratios
_T2_TRIPLE_FLOOR = 1e-8
_SVET_MARGIN_FLOOR = 1e-10

_BISECTION_TOL = 1e-9
_FEASIBILITY_MARGIN = 1e-12


@dataclass(frozen=True)
class SettingsParameterization:
    """Flat optimization coordinates: 16 state reals + 12 measurement angles.

    ``state_coords`` interleaves real and imaginary parts of the 8
    amplitudes and is normalized on use.  ``measurement_angles`` holds
    (polar, azimuth) per measurement in party-major order
    (a0, a1, b0, b1, c0, c1).
    """

    state_coords: np.ndarray
    measurement_angles: np.ndarray

    def __post_init__(self):
        sc = np.asarray(self.state_coords, dtype=float).reshape(-1)
        ma = np.asarray(self.measurement_angles, dtype=float).reshape(-1)
        if sc.shape != (16,) or ma.shape != (12,):
            raise ValueError("expected 16 state coordinates and 12 angles")
        sc.setflags(write=False)
        ma.setflags(write=False)
        object.__setattr__(self, "state_coords", sc)
        object.__setattr__(self, "measurement_angles", ma)

    def to_state(self) -> PureState:
        return PureState.normalized(self.state_coords[0::2] + 1j * self.state_coords[1::2])

    def to_settings(self) -> SettingsTriple:
        ang = self.measurement_angles
        ms = [QubitMeasurement(polar=ang[2 * i], azimuth=ang[2 * i + 1]) for i in range(6)]
        return SettingsTriple(a=(ms[0], ms[1]), b=(ms[2], ms[3]), c=(ms[4], ms[5]))

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.state_coords, self.measurement_angles])

    @classmethod
    def from_vector(cls, vec) -> "SettingsParameterization":
        vec = np.asarray(vec, dtype=float).reshape(-1)
        return cls(vec[:16], vec[16:])

    @classmethod
    def from_quantum(cls, state: PureState, settings: SettingsTriple) -> "SettingsParameterization":
        amp = state.amplitudes
        sc = np.empty(16)
        sc[0::2] = amp.real
        sc[1::2] = amp.imag
        angles = []
        for party in (settings.a, settings.b, settings.c):
            for m in party:
                angles += [m.polar, m.azimuth]
        return cls(sc, np.array(angles))


@dataclass(frozen=True)
class SearchConfig:
    restarts: int
    seed: int = 0
    max_iterations: int = 6000
    convergence_tol: float = 1e-12
    penalty_weight: float = 1.0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.convergence_tol <= 0 or self.max_iterations < 1 or self.penalty_weight <= 0:
            raise ValueError("tolerances, iterations and penalty weight must be positive")


@dataclass(frozen=True)
class SearchResult:
    best_eta: float
    best_settings: SettingsParameterization
    restart_values: tuple[float, ...]
    violating_restarts: int


@dataclass(frozen=True)
class SweepRow:
    theta: float
    p: float
    eta_min: float | None


# ---------------------------------------------------------------------------
# fast objective plumbing (Born tensors are no-signaling, so dummy-setting-0
# marginals are used without the cross-check of the public path)

def _probs_from_vector(vec: np.ndarray) -> np.ndarray | None:
    amp = vec[0:16:2] + 1j * vec[1:16:2]
    norm = np.linalg.norm(amp)
    if norm < 1e-12:
        return None
    amp = amp / norm
    ang = vec[16:]
    bases = tuple(
        np.stack([measurement_basis(ang[4 * p + 2 * s], ang[4 * p + 2 * s + 1]) for s in range(2)])
        for p in range(3)
    )
    return pure_behavior_probabilities(amp, bases)


def _fast_coefficients(probs: np.ndarray) -> tuple[float, float, float]:
    alpha = 2.0 * float(np.sum(CORRELATOR_SIGNS * probs[0, 0, 0]))
    pab = probs[0, 0, :, :, :, 0].sum(axis=0)      # [x,y] at dummy z=0
    pbc = probs[:, 0, 0, 0, :, :].sum(axis=0)      # [y,z] at dummy x=0
    pac = probs[0, :, 0, :, 0, :].sum(axis=0)      # [x,z] at dummy y=0
    beta = 2.0 * (pab[0, 0] + pab[1, 1] + pbc[0, 0] + pbc[1, 1] + pac[0, 1] + pac[1, 0])
    singles_a = probs[0, :, :, :, 0, 0].sum(axis=(0, 1))
    singles_b = probs[:, 0, :, 0, :, 0].sum(axis=(0, 1))
    singles_c = probs[:, :, 0, 0, 0, :].sum(axis=(0, 1))
    gamma = float(singles_a.sum() + singles_b.sum() + singles_c.sum())
    return alpha, float(beta), gamma


def _fast_t2_sums(probs: np.ndarray) -> tuple[float, float]:
    m = probs[0, 0, 0]
    triple = float(
        -m[0, 0, 1] - m[0, 1, 0] - m[1, 0, 0]
        + 2.0 * (m[1, 1, 0] + m[1, 0, 1] + m[0, 1, 1] + m[1, 1, 1])
    )
    pair = 2.0 * float(
        probs[0, 0, :, 1, 1, 0].sum()
        + probs[:, 0, 0, 0, 1, 1].sum()
        + probs[0, :, 0, 1, 0, 1].sum()
    )
    return triple, pair


def _cutoff_root(alpha: float, beta: float, gamma: float) -> float:
    if abs(alpha) < 1e-12:
        return gamma / beta if beta > 1e-12 else 1.0
    disc = beta * beta + 4.0 * alpha * gamma
    if alpha > 0:
        return (-beta + np.sqrt(disc)) / (2.0 * alpha)
    return (beta - np.sqrt(max(disc, 0.0))) / (-2.0 * alpha)


def _svetlichny_objective(vec: np.ndarray, penalty_weight: float) -> float:
    probs = _probs_from_vector(vec)
    if probs is None:
        return 2.0
    alpha, beta, gamma = _fast_coefficients(probs)
    margin = alpha + beta - gamma
    if margin <= _SVET_MARGIN_FLOOR:
        return 1.0 + penalty_weight * max(-margin, 0.0)
    return _cutoff_root(alpha, beta, gamma)


def _t2_objective(vec: np.ndarray, penalty_weight: float) -> float:
    probs = _probs_from_vector(vec)
    if probs is None:
        return 2.0
    triple, pair = _fast_t2_sums(probs)
    if triple <= _T2_TRIPLE_FLOOR or pair > triple:
        return 1.0 + penalty_weight * max(pair - triple, 0.0)
    return pair / triple


def _random_start(rng: np.random.Generator) -> np.ndarray:
    vec = np.empty(28)
    vec[:16] = rng.normal(size=16)
    polars = rng.uniform(0.0, np.pi, size=6)
    azimuths = rng.uniform(0.0, 2.0 * np.pi, size=6)
    vec[16::2] = polars
    vec[17::2] = azimuths
    return vec


def _local_search(objective, x0: np.ndarray, cfg: SearchConfig) -> tuple[float, np.ndarray]:
    # Nelder-Mead with one simplex restart from the found point; the
    # second pass recovers from simplex collapse in 28 dimensions
    x = x0
    fun = None
    for _ in range(2):
        res = minimize(
            objective,
            x,
            method="Nelder-Mead",
            options={
                "maxiter": cfg.max_iterations,
                "maxfev": cfg.max_iterations,
                "xatol": 1e-10,
                "fatol": cfg.convergence_tol,
                "adaptive": True,
            },
        )
        x, fun = res.x, float(res.fun)
    return fun, x


def _reverify(vec: np.ndarray, kind: str) -> float:
    """Recompute the cutoff through the public, validated path."""
    params = SettingsParameterization.from_vector(vec)
    tensor = behavior_from_settings(density_from_pure(params.to_state()), params.to_settings())
    if kind == "svetlichny":
        return svetlichny_cutoff(svetlichny_coefficients(tensor))
    cutoff = t2_cutoff_symmetric(tensor)
    if cutoff is None:
        raise SearchFailureError("re-verification found no violation")
    return cutoff


def _multistart(kind: str, cfg: SearchConfig,
                initial: SettingsParameterization | None) -> SearchResult:
    objective_fn = _svetlichny_objective if kind == "svetlichny" else _t2_objective
    objective = lambda v: objective_fn(v, cfg.penalty_weight)

    restart_values = []
    best_val, best_vec = np.inf, None
    violating = 0
    for i in range(cfg.restarts):
        if i == 0 and initial is not None:
            x0 = initial.as_vector()
        else:
            rng = np.random.default_rng(cfg.seed + i)
            x0 = _random_start(rng)
        val, vec = _local_search(objective, x0, cfg)
        restart_values.append(val)
        if val < 1.0:
            violating += 1
        if val < best_val:
            best_val, best_vec = val, vec

    if violating == 0:
        raise SearchFailureError(
            f"none of {cfg.restarts} restarts found settings violating at unit efficiency"
        )
    # no optimizer-state leakage: the reported value is recomputed from the
    # returned settings through the validated evaluation path
    best_eta = _reverify(best_vec, kind)
    if abs(best_eta - best_val) > 1e-9:
        raise RuntimeError(
            f"re-verified cutoff {best_eta} deviates from optimizer value {best_val}"
        )
    return SearchResult(
        best_eta=float(best_eta),
        best_settings=SettingsParameterization.from_vector(best_vec),
        restart_values=tuple(restart_values),
        violating_restarts=violating,
    )


def minimize_svetlichny_cutoff(cfg: SearchConfig,
                               initial: SettingsParameterization | None = None) -> SearchResult:
    """Minimize the correlator-form cutoff over states and measurements.

    Runs ``cfg.restarts`` independent local searches from seeded random
    starts (restart i uses seed ``cfg.seed + i``); deterministic given the
    seed.  ``initial``, when given, replaces the random start of restart 0.
    """
    return _multistart("svetlichny", cfg, initial)


def minimize_t2_cutoff(cfg: SearchConfig,
                       initial: SettingsParameterization | None = None) -> SearchResult:
    """Minimize the probability-form symmetric cutoff over all settings.

    The result can approach but never undercut 0.75: the signed triple
    combination of any no-signaling tensor is at most 4/3 of its pair sum.
    """
    return _multistart("t2", cfg, initial)


# ---------------------------------------------------------------------------
# noise analysis of the one-parameter family

def _min_efficiency_from_ideal(probs: np.ndarray) -> float | None:
    """Symmetric crossing of the probability-form statistic, with an
    independent bisection check on the observed tensor."""
    tensor = BehaviorTensor(probs)
    triple, pair = t2_triple_and_pair_sums(tensor)
    if triple <= 0.0:
        return None
    ratio = pair / triple
    if ratio >= 1.0 - _FEASIBILITY_MARGIN:
        # no strict violation at any eta <= 1; cheap sanity check at eta = 1
        if t2_statistic(probs, pair_reading="checked") > 1e-9:
            raise RuntimeError("closed form says infeasible but eta=1 violates")
        return None

    lo, hi = 0.0, 1.0
    while hi - lo > _BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        observed = observed_probabilities(probs, (mid, mid, mid))
        if t2_statistic(observed, pair_reading="checked") > 0.0:
            hi = mid
        else:
            lo = mid
    bisected = 0.5 * (lo + hi)
    if abs(bisected - ratio) > 1e-6:
        raise RuntimeError(
            f"closed-form crossing {ratio} and bisection {bisected} disagree beyond 1e-6"
        )
    return float(ratio)


def noisy_t2_min_efficiency(theta: ThetaSetting, noise: NoiseLevel) -> float | None:
    """Minimum symmetric efficiency certifying the one-parameter family at
    white-noise weight p, or None when no eta <= 1 yields violation."""
    rho = mix_white_noise(density_from_pure(theta_state(theta)), noise)
    tensor = behavior_from_settings(rho, theta_measurements(theta))
    return _min_efficiency_from_ideal(tensor.probs)


def sweep_t2_noise(theta_grid, p_grid) -> list[SweepRow]:
    """One row per (theta, p) grid point, ordered lexicographically by (p, theta).

    Uses linearity of the Born rule in the state: the noisy tensor equals
    (1 - p) * ideal + p * uniform, which the family tests pin against the
    density-matrix route to 1e-12.
    """
    thetas = [float(t) for t in theta_grid]
    ps = [float(p) for p in p_grid]
    if not thetas or not ps:
        raise ValueError("grids must be nonempty")
    for t in thetas:
        ThetaSetting(t)  # domain check
    for p in ps:
        NoiseLevel(p)

    ideal = {}
    for t in thetas:
        setting = ThetaSetting(t)
        tensor = behavior_from_settings(
            density_from_pure(theta_state(setting)), theta_measurements(setting)
        )
        ideal[t] = tensor.probs

    rows = []
    uniform = np.full((2,) * 6, 0.125)
    for p in sorted(ps):
        for t in sorted(thetas):
            probs = (1.0 - p) * ideal[t] + p * uniform
            rows.append(SweepRow(theta=t, p=p, eta_min=_min_efficiency_from_ideal(probs)))
    return rows
