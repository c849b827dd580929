"""Builders for the three cyclic shift circuits on a ring of 2**m sites.

All three variants realize the same unit-step shift on the position register,
with the coin qubit selecting the direction. The repo-wide convention is:

    coin |0>  ->  increment, |k> to |k+1 mod 2**m>  (right shift)
    coin |1>  ->  decrement, |k> to |k-1 mod 2**m>  (left shift)

``build_canonical`` chains two cascades of multi-controlled X gates, one per
direction. ``build_qft`` diagonalizes the shift with a Fourier transform and a
coin-controlled phase layer. ``build_parallel`` splits amplitudes into even
and odd components on an extra ancilla, rearranges them so a single X on
qubit 0 steps both directions at once, then undoes the split; its fixed
ten-gate prologue is transcribed gate for gate in ``_constant_part`` and the
size-dependent section is generated in ``_variable_part``.
"""
from __future__ import annotations

import math
from enum import Enum

from .ir import Circuit, CircuitError, Gate, RegisterLayout, anti, ccx, cphase, cx, h, mcx, swap, x
from .sim import PermutationTable

import numpy as np


class ShiftVariant(Enum):
    CANONICAL = "canonical"
    QFT = "qft"
    PARALLEL = "parallel"

    @classmethod
    def parse(cls, name: str) -> ShiftVariant:
        try:
            return cls(name.lower())
        except ValueError:
            options = ", ".join(v.value for v in cls)
            raise CircuitError(f"unknown shift variant {name!r}; expected one of {options}")


def shift_layout(variant: ShiftVariant, position_count: int) -> RegisterLayout:
    """Register layout each builder produces for ``position_count`` sites qubits."""
    return RegisterLayout.make(
        position_count,
        with_coin=True,
        with_split_ancilla=variant is ShiftVariant.PARALLEL,
    )


def build_canonical(m: int) -> Circuit:
    """Shift as two coin-conditioned multi-controlled X cascades.

    The increment cascade targets the most significant position qubit first:
    each gate fires when every lower position qubit is |1| (the carry chain),
    conditioned on coin |0>. The decrement cascade mirrors it with open
    position controls, conditioned on coin |1>.
    """
    if m < 1:
        raise CircuitError("canonical shift needs at least one position qubit")
    layout = shift_layout(ShiftVariant.CANONICAL, m)
    coin = layout.coin
    gates: list[Gate] = []
    for size in range(m, 0, -1):
        controls = [c for c in range(size - 1)] + [anti(coin)]
        gates.append(mcx(controls, size - 1))
    for size in range(m, 0, -1):
        controls = [anti(c) for c in range(size - 1)] + [coin]
        gates.append(mcx(controls, size - 1))
    return Circuit(layout, tuple(gates))


def _fourier_gates(m: int) -> list[Gate]:
    """Transform mapping |k> to (1/sqrt(2**m)) sum_j exp(2*pi*i*k*j/2**m)|j>."""
    gates: list[Gate] = []
    for target in range(m - 1, -1, -1):
        gates.append(h(target))
        for control in range(target - 1, -1, -1):
            gates.append(cphase(control, target, math.pi / (1 << (target - control))))
    for low in range(m // 2):
        gates.append(swap(low, m - 1 - low))
    return gates


def build_qft(m: int) -> Circuit:
    """Shift via Fourier diagonalization.

    Structure: forward transform on the position register, a coin-controlled
    phase layer, inverse transform. Only the phase layer depends on the coin:
    qubit ``j`` receives phase +2*pi*2**j/2**m when the coin is |0> (one
    controlled-phase with an open coin control) and the negated phase when the
    coin is |1> (one with a filled control). Two-qubit census as built:
    m*(m-1) + 2*m controlled phases plus 2*floor(m/2) swaps.
    """
    if m < 1:
        raise CircuitError("qft shift needs at least one position qubit")
    layout = shift_layout(ShiftVariant.QFT, m)
    coin = layout.coin
    forward = Circuit(layout, tuple(_fourier_gates(m)))
    phases: list[Gate] = []
    for j in range(m):
        theta = 2.0 * math.pi * (1 << j) / (1 << m)
        phases.append(cphase(anti(coin), j, theta))
        phases.append(cphase(coin, j, -theta))
    return forward.extend(phases).compose(forward.inverse())


def _constant_part(layout: RegisterLayout) -> list[Gate]:
    """Fixed section of the parallel shift, independent of register size.

    Transcribed column by column from the five-working-qubit circuit; only
    the coin and split-ancilla indices move as the register grows. The two
    leading CX gates split amplitudes by parity across the ancilla, the next
    eight rearrange the ancilla-|1> component so the later X on qubit 0
    steps both halves correctly.
    """
    coin = layout.coin
    a = layout.split_ancilla
    return [
        cx(0, a),
        cx(coin, a),
        cx(a, 1),
        ccx(anti(coin), a, 1),
        ccx(coin, a, 2),
        mcx((1, 2, a), 3),
        ccx(coin, a, 2),
        ccx(anti(coin), a, 1),
        mcx((anti(1), anti(coin), a), 2),
        mcx((1, coin, a), 2),
        x(0),
    ]


def _variable_part(layout: RegisterLayout) -> list[Gate]:
    """Size-dependent section: carry ladder plus a coin-conditioned CX fan.

    Empty for four position qubits. Beyond that, each extra position qubit
    contributes one wider multi-controlled X (the carry onto that qubit) and
    two fan gates, for 2*(m-1) CX total around the ladder.
    """
    m = layout.position_count
    coin = layout.coin
    if m < 5:
        return []
    gates: list[Gate] = [cx(anti(coin), j) for j in range(4)]
    for k in range(4, m):
        gates.append(mcx(range(k), k))
        if k < m - 1:
            gates.append(cx(anti(coin), k))
    gates.extend(cx(anti(coin), j) for j in range(m - 2, -1, -1))
    return gates


def _merge_part(layout: RegisterLayout) -> list[Gate]:
    # Inverse of the parity split; the trailing X returns the ancilla to |0>.
    coin = layout.coin
    a = layout.split_ancilla
    return [cx(coin, a), cx(0, a), x(a)]


def build_parallel(m: int) -> Circuit:
    """Shift with both directions applied in one pass via an ancilla split.

    Needs m >= 4: the fixed prologue acts on position qubits 0..3 as drawn,
    and smaller registers are rejected rather than special-cased.
    """
    if m < 4:
        raise CircuitError("parallel shift needs at least four position qubits (m >= 4)")
    layout = shift_layout(ShiftVariant.PARALLEL, m)
    gates = _constant_part(layout) + _variable_part(layout) + _merge_part(layout)
    return Circuit(layout, tuple(gates))


_BUILDERS = {
    ShiftVariant.CANONICAL: build_canonical,
    ShiftVariant.QFT: build_qft,
    ShiftVariant.PARALLEL: build_parallel,
}


def build_shift(variant: ShiftVariant, m: int) -> Circuit:
    """Dispatch to the requested variant's builder."""
    return _BUILDERS[variant](m)


def expected_shift_table(m: int) -> PermutationTable:
    """Reference permutation over the working register: the map every variant
    must realize, written directly as modular integer arithmetic."""
    sites = 1 << m
    mapping = np.empty(2 * sites, dtype=np.int64)
    for site in range(sites):
        mapping[site] = (site + 1) % sites
        mapping[site + sites] = (site - 1) % sites + sites
    return PermutationTable(mapping, np.ones(2 * sites, dtype=bool))
