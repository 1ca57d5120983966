"""Shared test helpers: seeded random quantum settings and behavior tensors."""

import numpy as np
import pytest

from tribell.qcore import (
    BehaviorTensor,
    DensityMatrix,
    PureState,
    QubitMeasurement,
    SettingsTriple,
    behavior_from_settings,
    density_from_pure,
)


def random_state(rng) -> PureState:
    vec = rng.normal(size=8) + 1j * rng.normal(size=8)
    return PureState.normalized(vec)


def random_settings(rng) -> SettingsTriple:
    ms = [
        QubitMeasurement(polar=rng.uniform(0, np.pi), azimuth=rng.uniform(0, 2 * np.pi))
        for _ in range(6)
    ]
    return SettingsTriple(a=(ms[0], ms[1]), b=(ms[2], ms[3]), c=(ms[4], ms[5]))


def random_density(rng, mix: int = 3) -> DensityMatrix:
    # random low-rank mixture of pure states
    weights = rng.dirichlet(np.ones(mix))
    mat = np.zeros((8, 8), dtype=complex)
    for w in weights:
        amp = random_state(rng).amplitudes
        mat += w * np.outer(amp, amp.conj())
    return DensityMatrix(mat)


def random_behavior(rng, mixed: bool = False) -> BehaviorTensor:
    rho = random_density(rng) if mixed else density_from_pure(random_state(rng))
    return behavior_from_settings(rho, random_settings(rng))


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
