"""Discrete-time quantum walk on a ring, driven by any shift variant.

Each step applies a Hadamard coin flip and then one shift circuit. The
direction convention is the builders' one: coin |0> steps +1, coin |1> steps
-1. An independent dense-matrix oracle implements the same walk with plain
linear algebra and no circuits, so circuit and oracle agreeing is a real
check rather than one code path testing itself.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .builders import ShiftVariant, build_shift
from .ir import Circuit, CircuitError, h
from .sim import MAX_SIM_QUBITS, SimulationError, StateVector, run

COIN_KINDS = ("hadamard",)
COIN_STATES = ("0", "1", "symmetric")

_ORACLE_MAX_M = 12


@dataclass(frozen=True)
class WalkConfig:
    """Walk parameters: ring size 2**m, step count, start site and coin."""

    m: int
    steps: int
    variant: ShiftVariant
    start_site: int = 0
    coin_init: str = "0"
    coin_kind: str = "hadamard"

    def __post_init__(self) -> None:
        if self.m < 1:
            raise CircuitError("walk needs at least one position qubit")
        if self.steps < 0:
            raise CircuitError("step count must be non-negative")
        if not 0 <= self.start_site < (1 << self.m):
            raise CircuitError(f"start site {self.start_site} outside the {1 << self.m}-site ring")
        if self.coin_kind not in COIN_KINDS:
            raise CircuitError(f"unknown coin {self.coin_kind!r}; supported: {COIN_KINDS}")
        if self.coin_init not in COIN_STATES:
            raise CircuitError(f"coin_init must be one of {COIN_STATES}")

    @property
    def sites(self) -> int:
        return 1 << self.m


@dataclass(frozen=True)
class PositionDistribution:
    """Site-marginal probabilities; must sum to one."""

    probabilities: np.ndarray

    def __post_init__(self) -> None:
        probs = np.asarray(self.probabilities, dtype=float)
        if probs.ndim != 1:
            raise SimulationError("distribution must be one-dimensional")
        if np.any(probs < -1e-12) or abs(float(probs.sum()) - 1.0) > 1e-10:
            raise SimulationError("probabilities must be non-negative and sum to 1")
        object.__setattr__(self, "probabilities", probs)

    def max_deviation(self, other: PositionDistribution) -> float:
        return float(np.max(np.abs(self.probabilities - other.probabilities)))


@dataclass(frozen=True)
class WalkResult:
    distribution: PositionDistribution
    final_state: StateVector


def _coin_amplitudes(coin_init: str) -> tuple[complex, complex]:
    if coin_init == "0":
        return 1.0 + 0.0j, 0.0j
    if coin_init == "1":
        return 0.0j, 1.0 + 0.0j
    inv = 1.0 / math.sqrt(2.0)
    return inv + 0.0j, 1j * inv


def _initial_state(config: WalkConfig, qubit_count: int) -> StateVector:
    amps = np.zeros(1 << qubit_count, dtype=complex)
    amp0, amp1 = _coin_amplitudes(config.coin_init)
    amps[config.start_site] = amp0
    amps[config.start_site + config.sites] = amp1
    return StateVector(amps, qubit_count)


def _step_circuit(config: WalkConfig) -> Circuit:
    shift = build_shift(config.variant, config.m)
    return Circuit(shift.layout, (h(shift.layout.coin),) + shift.gates)


def walk_states(config: WalkConfig) -> Iterator[StateVector]:
    """Yield the state after each step, starting with the initial state."""
    step = _step_circuit(config)
    if step.total_qubits > MAX_SIM_QUBITS:
        raise SimulationError("walk exceeds the dense simulation cap")
    state = _initial_state(config, step.total_qubits)
    yield state
    for _ in range(config.steps):
        state = run(step, state)
        yield state


def position_marginal(state: StateVector, m: int) -> PositionDistribution:
    """Trace out everything but the position register.

    The coin and any ancillas occupy the high bits, so the marginal is a sum
    of squared magnitudes over the leading reshape axis.
    """
    probs = state.probabilities().reshape(-1, 1 << m).sum(axis=0)
    return PositionDistribution(probs)


def run_walk(config: WalkConfig) -> WalkResult:
    """Run the configured walk and return the site marginal and final state."""
    state = None
    for state in walk_states(config):
        pass
    return WalkResult(position_marginal(state, config.m), state)


def classical_walk_oracle(config: WalkConfig, flip_directions: bool = False) -> PositionDistribution:
    """The same walk as explicit dense linear algebra, with no circuits.

    Builds the step operator as (shift permutation) @ (coin flip) on the
    2 * 2**m dimensional space indexed site + 2**m * coin and powers it.
    ``flip_directions`` inverts the coin-to-direction convention; it exists
    for canary tests that prove the comparison is convention-sensitive.
    """
    if config.m > _ORACLE_MAX_M:
        raise SimulationError(f"oracle is capped at {_ORACLE_MAX_M} position qubits")
    sites = config.sites
    step_plus = -1 if flip_directions else 1
    shift = np.zeros((2 * sites, 2 * sites))
    for site in range(sites):
        shift[(site + step_plus) % sites, site] = 1.0
        shift[(site - step_plus) % sites + sites, site + sites] = 1.0
    hadamard = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)
    coin = np.kron(hadamard, np.eye(sites))
    step = shift @ coin

    vec = np.zeros(2 * sites, dtype=complex)
    amp0, amp1 = _coin_amplitudes(config.coin_init)
    vec[config.start_site] = amp0
    vec[config.start_site + sites] = amp1
    for _ in range(config.steps):
        vec = step @ vec
    probs = (np.abs(vec) ** 2).reshape(2, sites).sum(axis=0)
    return PositionDistribution(probs)


def compare_variants(config: WalkConfig) -> tuple[float, dict[ShiftVariant, float]]:
    """Max deviation of every buildable variant's walk from the oracle."""
    oracle = classical_walk_oracle(config)
    per_variant: dict[ShiftVariant, float] = {}
    for variant in ShiftVariant:
        if variant is ShiftVariant.PARALLEL and config.m < 4:
            continue
        result = run_walk(
            WalkConfig(
                config.m,
                config.steps,
                variant,
                config.start_site,
                config.coin_init,
                config.coin_kind,
            )
        )
        per_variant[variant] = result.distribution.max_deviation(oracle)
    return max(per_variant.values()), per_variant
