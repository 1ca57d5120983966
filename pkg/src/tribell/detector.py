"""Per-party detector-inefficiency channel.

A detector with efficiency eta fires with probability eta.  No-click events
are recorded as outcome 1, so each party's outcome passes through the
stochastic kernel K(0|0) = eta, K(1|0) = 1 - eta, K(1|1) = 1, K(0|1) = 0.
Consequently every joint probability of all-zero outcomes scales by the
product of the involved efficiencies, and the lost mass is routed to
outcome 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qcore import BehaviorTensor


@dataclass(frozen=True)
class EfficiencyTriple:
    """Detector efficiencies (eta_a, eta_b, eta_c), each in [0, 1]."""

    eta_a: float
    eta_b: float
    eta_c: float

    def __post_init__(self):
        for name, eta in zip(("eta_a", "eta_b", "eta_c"), self.as_tuple()):
            if not 0.0 <= eta <= 1.0:
                raise ValueError(f"{name} = {eta} is outside [0, 1]")

    @classmethod
    def symmetric(cls, eta: float) -> "EfficiencyTriple":
        return cls(eta, eta, eta)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.eta_a, self.eta_b, self.eta_c)


def _loss_kernel(eta: float) -> np.ndarray:
    # columns: ideal outcome, rows: observed outcome
    return np.array([[eta, 0.0], [1.0 - eta, 1.0]])


def observe(ideal: BehaviorTensor, etas: EfficiencyTriple) -> BehaviorTensor:
    """Apply the inefficiency channel independently per party."""
    probs = observed_probabilities(ideal.probs, etas.as_tuple())
    return BehaviorTensor(probs)


def observed_probabilities(probs: np.ndarray, etas) -> np.ndarray:
    """Channel on a raw probability array; hot path for root finding."""
    ka, kb, kc = (_loss_kernel(e) for e in etas)
    return np.einsum("aA,bB,cC,ABCxyz->abcxyz", ka, kb, kc, probs)
