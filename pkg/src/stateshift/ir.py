"""Gate and circuit primitives shared by the builders, passes, and simulator.

The model is deliberately small: a gate is a kind plus target qubits, an
optional list of polarized controls, and an optional angle. Circuits are
immutable gate sequences over a named register layout, so they are safe to
share between threads and every transformation returns a new value.

Bit convention: qubit 0 is the least significant bit of a basis-state index,
so basis state ``|k>`` has bit ``j`` of ``k`` on qubit ``j``.
"""
from __future__ import annotations

import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field, replace
from enum import Enum


class CircuitError(ValueError):
    """Raised for malformed gates, layouts, or circuits."""


class Polarity(Enum):
    """Control activation value: positive fires on |1>, negative on |0>."""

    POSITIVE = 1
    NEGATIVE = 0


@dataclass(frozen=True, order=True)
class ControlSpec:
    """One control qubit together with its activation polarity."""

    qubit: int
    polarity: Polarity = Polarity.POSITIVE

    def __post_init__(self) -> None:
        if self.qubit < 0:
            raise CircuitError(f"control qubit must be non-negative, got {self.qubit}")

    @property
    def is_negative(self) -> bool:
        return self.polarity is Polarity.NEGATIVE


def ctrl(qubit: int) -> ControlSpec:
    """Positive control on ``qubit``."""
    return ControlSpec(qubit, Polarity.POSITIVE)


def anti(qubit: int) -> ControlSpec:
    """Negative (open) control on ``qubit``: fires on |0>."""
    return ControlSpec(qubit, Polarity.NEGATIVE)


def _as_control(spec: int | ControlSpec) -> ControlSpec:
    return spec if isinstance(spec, ControlSpec) else ControlSpec(int(spec))


class GateKind(Enum):
    X = "x"
    H = "h"
    RZ = "rz"
    PHASE = "p"
    SX = "sx"
    MCX = "mcx"
    CPHASE = "cp"
    SWAP = "swap"


_ANGLE_KINDS = frozenset({GateKind.RZ, GateKind.PHASE, GateKind.CPHASE})
_SINGLE_TARGET_KINDS = frozenset(
    {GateKind.X, GateKind.H, GateKind.RZ, GateKind.PHASE, GateKind.SX, GateKind.MCX, GateKind.CPHASE}
)
# Gates that are their own inverse; eligible for adjacent-pair cancellation.
_SELF_INVERSE_KINDS = frozenset({GateKind.X, GateKind.H, GateKind.MCX, GateKind.SWAP})


@dataclass(frozen=True)
class Gate:
    """A single circuit element.

    ``controls`` is kept sorted by qubit index so two gates compare equal
    regardless of the order controls were supplied in. An ``MCX`` with zero
    controls normalizes to a plain ``X``; a ``SWAP`` keeps its two targets
    sorted because it is symmetric.
    """

    kind: GateKind
    targets: tuple[int, ...]
    controls: tuple[ControlSpec, ...] = ()
    angle: float | None = None

    def __post_init__(self) -> None:
        targets = tuple(int(q) for q in self.targets)
        controls = tuple(sorted((_as_control(c) for c in self.controls), key=lambda c: c.qubit))
        kind = self.kind

        if kind is GateKind.MCX and not controls:
            kind = GateKind.X
        if kind is GateKind.SWAP:
            if len(targets) != 2:
                raise CircuitError("swap needs exactly two targets")
            targets = tuple(sorted(targets))
            if controls:
                raise CircuitError("controlled swap is not part of this gate set")
        elif kind in _SINGLE_TARGET_KINDS:
            if len(targets) != 1:
                raise CircuitError(f"{kind.value} needs exactly one target, got {targets}")
            if kind is GateKind.CPHASE and not controls:
                raise CircuitError("cphase needs at least one control; use phase for none")
            if kind not in (GateKind.MCX, GateKind.CPHASE) and controls:
                raise CircuitError(f"{kind.value} does not take controls; use mcx or cphase")
        else:  # pragma: no cover - exhaustive over GateKind
            raise CircuitError(f"unknown gate kind {kind!r}")

        if kind in _ANGLE_KINDS:
            if self.angle is None or not math.isfinite(self.angle):
                raise CircuitError(f"{kind.value} needs a finite angle, got {self.angle}")
        elif self.angle is not None:
            raise CircuitError(f"{kind.value} does not take an angle")

        if any(q < 0 for q in targets):
            raise CircuitError(f"target qubits must be non-negative, got {targets}")
        qubits = targets + tuple(c.qubit for c in controls)
        if len(set(qubits)) != len(qubits):
            raise CircuitError(f"gate qubits must be pairwise distinct, got {qubits}")

        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "controls", controls)

    @property
    def n_controls(self) -> int:
        return len(self.controls)

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.targets + tuple(c.qubit for c in self.controls)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.qubits)

    @property
    def max_qubit(self) -> int:
        return max(self.qubits)

    @property
    def is_self_inverse(self) -> bool:
        return self.kind in _SELF_INVERSE_KINDS

    def inverse_gates(self) -> tuple[Gate, ...]:
        """Gates implementing this gate's inverse, in application order."""
        if self.is_self_inverse:
            return (self,)
        if self.kind in _ANGLE_KINDS:
            return (replace(self, angle=-self.angle),)
        # sx**4 == identity, so the inverse of sx is sx applied three times
        if self.kind is GateKind.SX:
            return (self, self, self)
        raise CircuitError(f"no inverse rule for {self.kind.value}")  # pragma: no cover


def x(qubit: int) -> Gate:
    return Gate(GateKind.X, (qubit,))


def h(qubit: int) -> Gate:
    return Gate(GateKind.H, (qubit,))


def sx(qubit: int) -> Gate:
    return Gate(GateKind.SX, (qubit,))


def rz(qubit: int, angle: float) -> Gate:
    return Gate(GateKind.RZ, (qubit,), angle=angle)


def phase(qubit: int, angle: float) -> Gate:
    return Gate(GateKind.PHASE, (qubit,), angle=angle)


def swap(a: int, b: int) -> Gate:
    return Gate(GateKind.SWAP, (a, b))


def mcx(controls: Iterable[int | ControlSpec], target: int) -> Gate:
    return Gate(GateKind.MCX, (target,), tuple(_as_control(c) for c in controls))


def cx(control: int | ControlSpec, target: int) -> Gate:
    return mcx((control,), target)


def ccx(control_a: int | ControlSpec, control_b: int | ControlSpec, target: int) -> Gate:
    return mcx((control_a, control_b), target)


def cphase(control: int | ControlSpec, target: int, angle: float) -> Gate:
    return Gate(GateKind.CPHASE, (target,), (_as_control(control),), angle=angle)


@dataclass(frozen=True)
class RegisterLayout:
    """Named qubit groups, assigned contiguous ids starting at 0.

    Order is fixed: position qubits, then the coin qubit, then the split
    ancilla used by the parallel shift, then the scratch block used when
    lowering multi-controlled gates. The working register is the position
    block plus the coin.
    """

    position_count: int
    coin: int | None = None
    split_ancilla: int | None = None
    scratch: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.position_count < 1:
            raise CircuitError("layout needs at least one position qubit")
        object.__setattr__(self, "scratch", tuple(self.scratch))
        expected = list(range(self.position_count))
        for part in (self.coin, self.split_ancilla):
            if part is not None:
                expected.append(part)
        expected.extend(self.scratch)
        if expected != list(range(len(expected))):
            raise CircuitError(f"layout qubit ids must be contiguous from 0, got {expected}")

    @classmethod
    def make(
        cls,
        position_count: int,
        *,
        with_coin: bool = True,
        with_split_ancilla: bool = False,
        scratch_count: int = 0,
    ) -> RegisterLayout:
        """Assign ids in the canonical order for the requested groups."""
        nxt = position_count
        coin = None
        split = None
        if with_coin:
            coin = nxt
            nxt += 1
        if with_split_ancilla:
            split = nxt
            nxt += 1
        scratch = tuple(range(nxt, nxt + scratch_count))
        return cls(position_count, coin, split, scratch)

    @property
    def total_qubits(self) -> int:
        extra = (self.coin is not None) + (self.split_ancilla is not None)
        return self.position_count + extra + len(self.scratch)

    @property
    def working_count(self) -> int:
        return self.position_count + (self.coin is not None)

    @property
    def position_ids(self) -> tuple[int, ...]:
        return tuple(range(self.position_count))

    @property
    def ancilla_ids(self) -> tuple[int, ...]:
        """Split ancilla plus scratch block; all expected to start and end in |0>."""
        front = () if self.split_ancilla is None else (self.split_ancilla,)
        return front + self.scratch

    def with_scratch(self, count: int) -> RegisterLayout:
        """Layout with a scratch block of at least ``count`` qubits."""
        if len(self.scratch) >= count:
            return self
        base = self.position_count + (self.coin is not None) + (self.split_ancilla is not None)
        return replace(self, scratch=tuple(range(base, base + count)))


@dataclass(frozen=True)
class Circuit:
    """An ordered gate sequence over a register layout."""

    layout: RegisterLayout
    gates: tuple[Gate, ...] = ()

    def __post_init__(self) -> None:
        gates = tuple(self.gates)
        total = self.layout.total_qubits
        for gate in gates:
            if gate.max_qubit >= total:
                raise CircuitError(
                    f"gate {gate} uses qubit {gate.max_qubit} outside the {total}-qubit layout"
                )
        object.__setattr__(self, "gates", gates)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    @property
    def total_qubits(self) -> int:
        return self.layout.total_qubits

    def append(self, gate: Gate) -> Circuit:
        """New circuit with ``gate`` at the end; prior gates are unchanged."""
        return Circuit(self.layout, self.gates + (gate,))

    def extend(self, gates: Iterable[Gate]) -> Circuit:
        return Circuit(self.layout, self.gates + tuple(gates))

    def compose(self, other: Circuit) -> Circuit:
        """This circuit followed by ``other``; qubit counts must match."""
        if other.layout.total_qubits != self.layout.total_qubits:
            raise CircuitError(
                f"cannot compose {self.layout.total_qubits}- and {other.layout.total_qubits}-qubit circuits"
            )
        return Circuit(self.layout, self.gates + tuple(other.gates))

    def inverse(self) -> Circuit:
        """Reversed sequence of inverted gates; composing with it gives identity."""
        inv: list[Gate] = []
        for gate in reversed(self.gates):
            inv.extend(gate.inverse_gates())
        return Circuit(self.layout, tuple(inv))

    def census(self) -> GateCensus:
        return census(self)


def append(circuit: Circuit, gate: Gate) -> Circuit:
    return circuit.append(gate)


def inverse(circuit: Circuit) -> Circuit:
    return circuit.inverse()


@dataclass
class GateCensus:
    """Per-kind, per-control-arity gate tally.

    ``cx_total`` counts single-controlled MCX gates only. ``two_qubit_total``
    additionally counts single-controlled phase gates and swaps, the other
    gates in this set that touch exactly two qubits.
    """

    counts: dict[tuple[GateKind, int], int] = field(default_factory=dict)

    def count(self, kind: GateKind, n_controls: int) -> int:
        return self.counts.get((kind, n_controls), 0)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def cx_total(self) -> int:
        return self.count(GateKind.MCX, 1)

    @property
    def two_qubit_total(self) -> int:
        return self.cx_total + self.count(GateKind.CPHASE, 1) + self.count(GateKind.SWAP, 0)

    def mcx_totals(self) -> dict[int, int]:
        """Control-arity histogram of the MCX family."""
        return {
            arity: n for (kind, arity), n in sorted(self.counts.items()) if kind is GateKind.MCX
        }

    def __add__(self, other: GateCensus) -> GateCensus:
        merged = dict(self.counts)
        for key, n in other.counts.items():
            merged[key] = merged.get(key, 0) + n
        return GateCensus(merged)

    def diff(self, other: GateCensus) -> dict[tuple[GateKind, int], int]:
        """Pointwise self minus other, dropping zero entries."""
        keys = set(self.counts) | set(other.counts)
        out = {}
        for key in sorted(keys, key=lambda k: (k[0].value, k[1])):
            delta = self.counts.get(key, 0) - other.counts.get(key, 0)
            if delta:
                out[key] = delta
        return out


def census(circuit: Circuit) -> GateCensus:
    """Exact gate tally of ``circuit`` keyed by (kind, number of controls)."""
    counts: dict[tuple[GateKind, int], int] = {}
    for gate in circuit.gates:
        key = (gate.kind, gate.n_controls)
        counts[key] = counts.get(key, 0) + 1
    return GateCensus(counts)
