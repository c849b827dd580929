"""Dense statevector simulation; the brute-force oracle behind every check.

Amplitudes are stored as a flat complex array indexed so that qubit ``j`` is
bit ``j`` of the basis index. Gate application iterates amplitude strides per
target qubit; multi-controlled X gates apply a control-mask test per index.
Dense simulation is capped at 24 qubits and full-unitary comparison at 12,
which covers everything this library needs to verify.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .ir import Circuit, CircuitError, Gate, GateKind

MAX_SIM_QUBITS = 24
MAX_UNITARY_QUBITS = 12

_INV_SQRT2 = 1.0 / math.sqrt(2.0)
_H_MATRIX = np.array([[_INV_SQRT2, _INV_SQRT2], [_INV_SQRT2, -_INV_SQRT2]], dtype=complex)
_SX_MATRIX = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex)


class SimulationError(CircuitError):
    """Raised for dimension mismatches and unsupported simulator requests."""


@dataclass(frozen=True)
class StateVector:
    """Complex amplitudes over the computational basis of ``qubit_count`` qubits."""

    amplitudes: np.ndarray
    qubit_count: int

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.shape[0] != 1 << self.qubit_count:
            raise SimulationError(
                f"expected {1 << self.qubit_count} amplitudes, got shape {amps.shape}"
            )
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, qubit_count: int, index: int) -> StateVector:
        if not 0 <= index < (1 << qubit_count):
            raise SimulationError(f"basis index {index} out of range for {qubit_count} qubits")
        amps = np.zeros(1 << qubit_count, dtype=complex)
        amps[index] = 1.0
        return cls(amps, qubit_count)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def _control_mask(index: np.ndarray, gate: Gate) -> np.ndarray:
    mask = np.ones(index.shape, dtype=bool)
    for spec in gate.controls:
        bit = (index >> spec.qubit) & 1
        mask &= bit == spec.polarity.value
    return mask


def _apply_2x2(block: np.ndarray, matrix: np.ndarray, target: int) -> None:
    dim = block.shape[-1]
    index = np.arange(dim)
    i0 = index[(index >> target) & 1 == 0]
    i1 = i0 | (1 << target)
    a0 = block[:, i0].copy()
    a1 = block[:, i1]
    block[:, i0] = matrix[0, 0] * a0 + matrix[0, 1] * a1
    block[:, i1] = matrix[1, 0] * a0 + matrix[1, 1] * a1


def _apply_gate_block(block: np.ndarray, gate: Gate) -> None:
    """Apply ``gate`` in place to ``block`` of shape (batch, 2**q)."""
    dim = block.shape[-1]
    index = np.arange(dim)
    kind = gate.kind
    if kind is GateKind.X or kind is GateKind.MCX:
        target = gate.targets[0]
        sel = (index >> target) & 1 == 0
        if gate.controls:
            sel &= _control_mask(index, gate)
        i0 = index[sel]
        i1 = i0 | (1 << target)
        tmp = block[:, i0].copy()
        block[:, i0] = block[:, i1]
        block[:, i1] = tmp
    elif kind is GateKind.H:
        _apply_2x2(block, _H_MATRIX, gate.targets[0])
    elif kind is GateKind.SX:
        _apply_2x2(block, _SX_MATRIX, gate.targets[0])
    elif kind is GateKind.RZ:
        target = gate.targets[0]
        hi = (index >> target) & 1 == 1
        block[:, ~hi] *= np.exp(-0.5j * gate.angle)
        block[:, hi] *= np.exp(0.5j * gate.angle)
    elif kind is GateKind.PHASE:
        target = gate.targets[0]
        hi = (index >> target) & 1 == 1
        block[:, hi] *= np.exp(1j * gate.angle)
    elif kind is GateKind.CPHASE:
        target = gate.targets[0]
        sel = ((index >> target) & 1 == 1) & _control_mask(index, gate)
        block[:, sel] *= np.exp(1j * gate.angle)
    elif kind is GateKind.SWAP:
        a, b = gate.targets
        sel = ((index >> a) & 1 == 1) & ((index >> b) & 1 == 0)
        i = index[sel]
        j = i ^ ((1 << a) | (1 << b))
        tmp = block[:, i].copy()
        block[:, i] = block[:, j]
        block[:, j] = tmp
    else:  # pragma: no cover - exhaustive over GateKind
        raise SimulationError(f"no simulation rule for {kind}")


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """State transformed by one gate; the input state is left untouched."""
    if gate.max_qubit >= state.qubit_count:
        raise SimulationError(
            f"gate on qubit {gate.max_qubit} exceeds the {state.qubit_count}-qubit state"
        )
    block = state.amplitudes.copy().reshape(1, -1)
    _apply_gate_block(block, gate)
    return StateVector(block.reshape(-1), state.qubit_count)


def run(circuit: Circuit, initial: StateVector) -> StateVector:
    """Apply the circuit's gates in sequence order to ``initial``."""
    if circuit.total_qubits != initial.qubit_count:
        raise SimulationError(
            f"{circuit.total_qubits}-qubit circuit cannot run on a "
            f"{initial.qubit_count}-qubit state"
        )
    if initial.qubit_count > MAX_SIM_QUBITS:
        raise SimulationError(f"dense simulation is capped at {MAX_SIM_QUBITS} qubits")
    block = initial.amplitudes.copy().reshape(1, -1)
    for gate in circuit.gates:
        _apply_gate_block(block, gate)
    return StateVector(block.reshape(-1), initial.qubit_count)


def _run_sparse(circuit: Circuit, start_index: int, prune: float = 1e-14) -> dict[int, complex]:
    """Exact sparse simulation of one basis input as {index: amplitude}.

    Fast when the state stays close to a basis state, which holds for X-family
    circuits and for lowered circuits whose superpositions are short-lived.
    """
    state: dict[int, complex] = {start_index: 1.0 + 0.0j}
    for gate in circuit.gates:
        kind = gate.kind
        if kind is GateKind.X or kind is GateKind.MCX:
            target_bit = 1 << gate.targets[0]
            nxt: dict[int, complex] = {}
            for idx, amp in state.items():
                fire = all((idx >> c.qubit) & 1 == c.polarity.value for c in gate.controls)
                nxt[idx ^ target_bit if fire else idx] = amp
            state = nxt
        elif kind is GateKind.SWAP:
            a, b = gate.targets
            pair = (1 << a) | (1 << b)
            nxt = {}
            for idx, amp in state.items():
                differs = ((idx >> a) & 1) != ((idx >> b) & 1)
                nxt[idx ^ pair if differs else idx] = amp
            state = nxt
        elif kind is GateKind.RZ:
            target = gate.targets[0]
            lo, hi = np.exp(-0.5j * gate.angle), np.exp(0.5j * gate.angle)
            state = {idx: amp * (hi if (idx >> target) & 1 else lo) for idx, amp in state.items()}
        elif kind is GateKind.PHASE:
            target = gate.targets[0]
            ph = np.exp(1j * gate.angle)
            state = {
                idx: amp * ph if (idx >> target) & 1 else amp for idx, amp in state.items()
            }
        elif kind is GateKind.CPHASE:
            target = gate.targets[0]
            ph = np.exp(1j * gate.angle)
            nxt = {}
            for idx, amp in state.items():
                fire = (idx >> target) & 1 and all(
                    (idx >> c.qubit) & 1 == c.polarity.value for c in gate.controls
                )
                nxt[idx] = amp * ph if fire else amp
            state = nxt
        else:  # H / SX split one entry into two
            target = gate.targets[0]
            matrix = _H_MATRIX if kind is GateKind.H else _SX_MATRIX
            target_bit = 1 << target
            acc: dict[int, complex] = {}
            for idx, amp in state.items():
                b = (idx >> target) & 1
                lo_idx = idx & ~target_bit
                hi_idx = idx | target_bit
                acc[lo_idx] = acc.get(lo_idx, 0.0) + matrix[0, b] * amp
                acc[hi_idx] = acc.get(hi_idx, 0.0) + matrix[1, b] * amp
            state = {idx: amp for idx, amp in acc.items() if abs(amp) > prune}
    return state


@dataclass
class PermutationTable:
    """Basis-to-basis map realized by a circuit on its non-ancilla qubits.

    ``mapping[i]`` is the output basis index for input ``i`` where
    ``valid[i]`` is set; entries are invalid when the output is not a pure
    basis state with all ancillas restored to |0>.
    """

    mapping: np.ndarray
    valid: np.ndarray

    def __post_init__(self) -> None:
        self.mapping = np.asarray(self.mapping, dtype=np.int64)
        self.valid = np.asarray(self.valid, dtype=bool)
        if self.mapping.shape != self.valid.shape:
            raise SimulationError("mapping and validity flags must have the same shape")

    @property
    def size(self) -> int:
        return int(self.mapping.shape[0])

    @property
    def all_valid(self) -> bool:
        return bool(self.valid.all())

    def is_bijection(self) -> bool:
        if not self.all_valid:
            return False
        return len(set(self.mapping.tolist())) == self.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PermutationTable):
            return NotImplemented
        return np.array_equal(self.valid, other.valid) and np.array_equal(
            self.mapping[self.valid], other.mapping[other.valid]
        )

    def mismatches(self, other: PermutationTable) -> list[int]:
        """Input indices where the two tables disagree."""
        if self.size != other.size:
            raise SimulationError("cannot compare tables of different sizes")
        bad = (self.valid != other.valid) | (
            self.valid & other.valid & (self.mapping != other.mapping)
        )
        return [int(i) for i in np.nonzero(bad)[0]]


def _free_qubits(circuit: Circuit, fixed: Iterable[int]) -> list[int]:
    fixed_set = set(fixed)
    bad = fixed_set - set(range(circuit.total_qubits))
    if bad:
        raise SimulationError(f"fixed ancillas {sorted(bad)} outside the circuit")
    return [q for q in range(circuit.total_qubits) if q not in fixed_set]


def _embed(packed: int, free: list[int]) -> int:
    full = 0
    for pos, qubit in enumerate(free):
        if (packed >> pos) & 1:
            full |= 1 << qubit
    return full


def _project(full: int, free: list[int]) -> int:
    packed = 0
    for pos, qubit in enumerate(free):
        if (full >> qubit) & 1:
            packed |= 1 << pos
    return packed


def extract_permutation(circuit: Circuit, fixed_ancillas: Iterable[int] = ()) -> PermutationTable:
    """Exact permutation table of an X-family circuit.

    The circuit may contain only X and MCX gates, so each basis state maps to
    a single basis state and the walk is pure integer arithmetic. Ancillas
    listed in ``fixed_ancillas`` start in |0>; an entry is invalid if they do
    not return to |0>. Use unitary or simulated comparison for anything else.
    """
    for gate in circuit.gates:
        if gate.kind not in (GateKind.X, GateKind.MCX):
            raise SimulationError(
                f"permutation extraction needs an X-family circuit, found {gate.kind.value}"
            )
    free = _free_qubits(circuit, fixed_ancillas)
    fixed_mask = 0
    for q in fixed_ancillas:
        fixed_mask |= 1 << q
    size = 1 << len(free)
    mapping = np.full(size, -1, dtype=np.int64)
    valid = np.zeros(size, dtype=bool)
    for packed in range(size):
        idx = _embed(packed, free)
        for gate in circuit.gates:
            if all((idx >> c.qubit) & 1 == c.polarity.value for c in gate.controls):
                idx ^= 1 << gate.targets[0]
        if idx & fixed_mask == 0:
            mapping[packed] = _project(idx, free)
            valid[packed] = True
    return PermutationTable(mapping, valid)


def simulated_permutation(
    circuit: Circuit, fixed_ancillas: Iterable[int] = (), tol: float = 1e-9
) -> PermutationTable:
    """Permutation table via amplitude simulation, for non-X-family circuits.

    An entry is valid only when the output amplitude is within ``tol`` of a
    pure basis state (up to phase) with all fixed ancillas back in |0>.
    """
    free = _free_qubits(circuit, fixed_ancillas)
    fixed_mask = 0
    for q in fixed_ancillas:
        fixed_mask |= 1 << q
    size = 1 << len(free)
    mapping = np.full(size, -1, dtype=np.int64)
    valid = np.zeros(size, dtype=bool)
    for packed in range(size):
        final = _run_sparse(circuit, _embed(packed, free))
        idx, amp = max(final.items(), key=lambda item: abs(item[1]))
        if abs(abs(amp) - 1.0) <= tol and idx & fixed_mask == 0:
            mapping[packed] = _project(idx, free)
            valid[packed] = True
    return PermutationTable(mapping, valid)


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Dense unitary of the circuit; capped at 12 qubits."""
    q = circuit.total_qubits
    if q > MAX_UNITARY_QUBITS:
        raise SimulationError(f"unitary construction is capped at {MAX_UNITARY_QUBITS} qubits")
    dim = 1 << q
    # Row b holds the evolving state for basis input b, so columns of the
    # result are the circuit applied to each basis state.
    block = np.eye(dim, dtype=complex)
    for gate in circuit.gates:
        _apply_gate_block(block, gate)
    return block.T


class UnitaryComparison(NamedTuple):
    equal: bool
    max_deviation: float


def unitary_equal(c1: Circuit, c2: Circuit, tol: float = 1e-12) -> UnitaryComparison:
    """Entrywise unitary agreement up to global phase.

    The phase is aligned on the first entry of largest magnitude before the
    entrywise check, so rz-versus-phase conventions do not produce spurious
    mismatches.
    """
    if c1.total_qubits != c2.total_qubits:
        raise SimulationError("unitary comparison needs equal qubit counts")
    u1 = circuit_unitary(c1)
    u2 = circuit_unitary(c2)
    anchor = np.unravel_index(np.argmax(np.abs(u1)), u1.shape)
    ref = u2[anchor]
    if abs(ref) < 1e-14:
        phase = 1.0 + 0.0j
    else:
        phase = ref / u1[anchor]
        phase /= abs(phase)
    deviation = float(np.max(np.abs(u1 * phase - u2)))
    return UnitaryComparison(deviation <= tol, deviation)
