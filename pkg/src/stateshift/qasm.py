"""OpenQASM 3.0 text export and import.

The emitted dialect is a pinned subset of OpenQASM 3.0 with the standard
gate library: ``x h rz p sx cx ccx cp swap`` plus ``ctrl @`` / ``negctrl @``
modifier chains for anything wider or open-controlled. Register names encode
the layout (``pos``, ``coin``, ``anc``, ``scratch``), so a circuit round-trips
through ``export_text`` and ``import_text`` with its census intact. Output is
deterministic: same circuit, same bytes.
"""
from __future__ import annotations

import re

from .ir import (
    Circuit,
    CircuitError,
    ControlSpec,
    Gate,
    GateKind,
    Polarity,
    RegisterLayout,
)

DIALECT = "OpenQASM 3.0"

_HEADER = "OPENQASM 3.0;"
_INCLUDE = 'include "stdgates.inc";'


class QasmError(CircuitError):
    """Raised for text that does not fit the pinned dialect subset."""


def _register_map(layout: RegisterLayout) -> list[tuple[str, int]]:
    regs = [("pos", layout.position_count)]
    if layout.coin is not None:
        regs.append(("coin", 1))
    if layout.split_ancilla is not None:
        regs.append(("anc", 1))
    if layout.scratch:
        regs.append(("scratch", len(layout.scratch)))
    return regs


def _qubit_refs(layout: RegisterLayout) -> list[str]:
    refs = [f"pos[{i}]" for i in range(layout.position_count)]
    if layout.coin is not None:
        refs.append("coin[0]")
    if layout.split_ancilla is not None:
        refs.append("anc[0]")
    refs.extend(f"scratch[{i}]" for i in range(len(layout.scratch)))
    return refs


def _format_angle(angle: float) -> str:
    return repr(float(angle))


def _gate_line(gate: Gate, refs: list[str]) -> str:
    kind = gate.kind
    plain = {
        GateKind.X: "x",
        GateKind.H: "h",
        GateKind.SX: "sx",
    }
    if kind in plain and not gate.controls:
        return f"{plain[kind]} {refs[gate.targets[0]]};"
    if kind is GateKind.RZ:
        return f"rz({_format_angle(gate.angle)}) {refs[gate.targets[0]]};"
    if kind is GateKind.PHASE:
        return f"p({_format_angle(gate.angle)}) {refs[gate.targets[0]]};"
    if kind is GateKind.SWAP:
        a, b = gate.targets
        return f"swap {refs[a]}, {refs[b]};"

    controls = gate.controls
    all_positive = all(not c.is_negative for c in controls)
    args = ", ".join(refs[q] for q in (*(c.qubit for c in controls), gate.targets[0]))
    if kind is GateKind.MCX:
        if all_positive and len(controls) == 1:
            return f"cx {args};"
        if all_positive and len(controls) == 2:
            return f"ccx {args};"
        base = "x"
    elif kind is GateKind.CPHASE:
        if all_positive and len(controls) == 1:
            return f"cp({_format_angle(gate.angle)}) {args};"
        base = f"p({_format_angle(gate.angle)})"
    else:  # pragma: no cover - remaining kinds handled above
        raise QasmError(f"gate kind {kind.value} is not expressible in {DIALECT}")
    mods = " ".join(
        ("negctrl @" if c.is_negative else "ctrl @") for c in controls
    )
    return f"{mods} {base} {args};"


def export_text(circuit: Circuit) -> str:
    """Deterministic, byte-stable text for ``circuit``."""
    refs = _qubit_refs(circuit.layout)
    lines = [_HEADER, _INCLUDE]
    lines.extend(f"qubit[{size}] {name};" for name, size in _register_map(circuit.layout))
    lines.extend(_gate_line(gate, refs) for gate in circuit.gates)
    return "\n".join(lines) + "\n"


_REG_DECL = re.compile(r"^qubit\[(\d+)\]\s+(\w+);$")
_GATE_CALL = re.compile(r"^(\w+)(?:\(([^)]*)\))?\s+(.*);$")
_QUBIT_REF = re.compile(r"^(\w+)\[(\d+)\]$")

_BASE_KINDS = {
    "x": GateKind.X,
    "h": GateKind.H,
    "sx": GateKind.SX,
    "rz": GateKind.RZ,
    "p": GateKind.PHASE,
    "swap": GateKind.SWAP,
    "cx": GateKind.MCX,
    "ccx": GateKind.MCX,
    "cp": GateKind.CPHASE,
}
_IMPLICIT_CONTROLS = {"cx": 1, "ccx": 2, "cp": 1}


def _parse_angle(raw: str, lineno: int) -> float:
    try:
        return float(raw)
    except ValueError:
        raise QasmError(f"line {lineno}: bad angle {raw!r}")


def _build_layout(regs: dict[str, int]) -> RegisterLayout:
    known = {"pos", "coin", "anc", "scratch"}
    unknown = set(regs) - known
    if unknown:
        raise QasmError(f"unknown registers {sorted(unknown)}; expected subset of {sorted(known)}")
    if "pos" not in regs:
        raise QasmError("missing required register 'pos'")
    for name in ("coin", "anc"):
        if regs.get(name, 1) != 1:
            raise QasmError(f"register '{name}' must have exactly one qubit")
    return RegisterLayout.make(
        regs["pos"],
        with_coin="coin" in regs,
        with_split_ancilla="anc" in regs,
        scratch_count=regs.get("scratch", 0),
    )


def import_text(text: str) -> Circuit:
    """Parse text previously produced by :func:`export_text`."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("//")]
    if len(lines) < 2 or lines[0] != _HEADER or lines[1] != _INCLUDE:
        raise QasmError(f"expected a {DIALECT} header with the standard include")

    regs: dict[str, int] = {}
    body_start = 2
    for ln in lines[2:]:
        decl = _REG_DECL.match(ln)
        if not decl:
            break
        size, name = int(decl.group(1)), decl.group(2)
        if name in regs:
            raise QasmError(f"register {name!r} declared twice")
        regs[name] = size
        body_start += 1
    layout = _build_layout(regs)

    offsets: dict[str, int] = {}
    at = 0
    for name, size in _register_map(layout):
        offsets[name] = at
        at += size

    def resolve(ref: str, lineno: int) -> int:
        match = _QUBIT_REF.match(ref.strip())
        if not match or match.group(1) not in offsets:
            raise QasmError(f"line {lineno}: bad qubit reference {ref!r}")
        name, idx = match.group(1), int(match.group(2))
        if idx >= regs[name]:
            raise QasmError(f"line {lineno}: {ref!r} outside register")
        return offsets[name] + idx

    gates: list[Gate] = []
    for lineno, ln in enumerate(lines[body_start:], start=body_start + 1):
        polarities: list[Polarity] = []
        rest = ln
        while True:
            stripped = rest.lstrip()
            if stripped.startswith("ctrl @"):
                polarities.append(Polarity.POSITIVE)
                rest = stripped[len("ctrl @"):]
            elif stripped.startswith("negctrl @"):
                polarities.append(Polarity.NEGATIVE)
                rest = stripped[len("negctrl @"):]
            else:
                rest = stripped
                break
        call = _GATE_CALL.match(rest)
        if not call:
            raise QasmError(f"line {lineno}: cannot parse {ln!r}")
        name, rawangle, rawargs = call.group(1), call.group(2), call.group(3)
        kind = _BASE_KINDS.get(name)
        if kind is None:
            raise QasmError(f"line {lineno}: unsupported gate {name!r}")
        qubits = [resolve(arg, lineno) for arg in rawargs.split(",")]
        n_ctrl = len(polarities) + _IMPLICIT_CONTROLS.get(name, 0)
        polarities.extend([Polarity.POSITIVE] * _IMPLICIT_CONTROLS.get(name, 0))
        if n_ctrl and kind not in (GateKind.MCX, GateKind.X, GateKind.PHASE, GateKind.CPHASE):
            raise QasmError(f"line {lineno}: control modifiers not supported on {name!r}")
        if n_ctrl:
            kind = GateKind.CPHASE if kind in (GateKind.PHASE, GateKind.CPHASE) else GateKind.MCX
        if len(qubits) != n_ctrl + (2 if kind is GateKind.SWAP else 1):
            raise QasmError(f"line {lineno}: wrong argument count in {ln!r}")
        controls = tuple(
            ControlSpec(q, pol) for q, pol in zip(qubits[:n_ctrl], polarities[:n_ctrl])
        )
        angle = _parse_angle(rawangle, lineno) if rawangle is not None else None
        gates.append(Gate(kind, tuple(qubits[n_ctrl:]), controls, angle))
    return Circuit(layout, tuple(gates))
