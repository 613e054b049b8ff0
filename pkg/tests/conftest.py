import numpy as np
import pytest

from tempcert.scenario import (
    Observable,
    PureState,
    Scenario,
    canonical_scenario,
    conjugate_scenario,
    random_involution,
    random_pure_state,
    random_unitary,
)


@pytest.fixture
def canonical():
    return canonical_scenario()


def rng_from(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def embed_scenario(s: Scenario, dim: int, rng: np.random.Generator) -> Scenario:
    """Direct-sum a scenario with a random junk block on dim - s.dim extra
    dimensions; the state stays supported on the original block."""
    pad = dim - s.dim
    if pad == 0:
        return s
    obs = []
    for o in s.observables:
        m = np.zeros((dim, dim), dtype=complex)
        m[: s.dim, : s.dim] = o.matrix
        m[s.dim :, s.dim :] = random_involution(pad, rng).matrix
        obs.append(Observable(m))
    amps = np.zeros(dim, dtype=complex)
    amps[: s.dim] = s.state.amplitudes
    return Scenario(PureState(amps), obs)


def conjugated_embedding(s: Scenario, dim: int, rng: np.random.Generator) -> Scenario:
    return conjugate_scenario(embed_scenario(s, dim, rng), random_unitary(dim, rng))


def commuting_triple_scenario(rng: np.random.Generator, dim: int = 4) -> Scenario:
    """Random scenario whose triples {A1,A2,A3} and {A4,A5,A6} each share an
    eigenbasis (pairwise commuting within each triple)."""
    obs = []
    for _ in range(2):
        w = random_unitary(dim, rng)
        for _ in range(3):
            signs = rng.choice([-1.0, 1.0], size=dim)
            obs.append(Observable((w * signs) @ w.conj().T))
    return Scenario(random_pure_state(dim, rng), obs)
