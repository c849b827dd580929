"""Lowering and cleanup passes, plus pipeline composition.

Every pass is a pure circuit-to-circuit function that preserves the circuit's
unitary, up to declared scratch-qubit additions (scratch starts and ends in
|0>). Pipelines are ordered stage lists; the reference pipeline shipped with
the package lowers multi-controlled gates to a scratch ladder, cancels the
redundancies that lowering exposes, expands Toffolis to the six-CX network,
removes open controls, and cancels once more.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources

from .ir import (
    Circuit,
    CircuitError,
    ControlSpec,
    Gate,
    GateCensus,
    GateKind,
    ccx,
    census,
    cx,
    h,
    phase,
    x,
)


class PassError(CircuitError):
    """Raised for unknown stages, option errors, or exhausted iteration caps."""


def lower_negative_controls(circuit: Circuit) -> Circuit:
    """Replace every open control with an X / closed-control / X sandwich."""
    gates: list[Gate] = []
    for gate in circuit.gates:
        flips = [c.qubit for c in gate.controls if c.is_negative]
        if not flips:
            gates.append(gate)
            continue
        positive = Gate(
            gate.kind,
            gate.targets,
            tuple(ControlSpec(c.qubit) for c in gate.controls),
            gate.angle,
        )
        gates.extend(x(q) for q in flips)
        gates.append(positive)
        gates.extend(x(q) for q in flips)
    return Circuit(circuit.layout, tuple(gates))


def _ladder(gate: Gate, scratch: tuple[int, ...]) -> list[Gate]:
    """V-shaped Toffoli ladder for one MCX with three or more controls.

    Partial products of the controls accumulate into the scratch block, the
    last scratch qubit drives a single CX onto the target, then the ladder
    un-computes in mirror order: 2*(n_c - 1) Toffolis, one CX, n_c - 1
    scratch qubits. Control polarities ride along on whichever Toffoli
    consumes that control.
    """
    controls = gate.controls
    compute = [ccx(controls[0], controls[1], scratch[0])]
    for i in range(2, len(controls)):
        compute.append(ccx(controls[i], scratch[i - 2], scratch[i - 1]))
    centre = cx(scratch[len(controls) - 2], gate.targets[0])
    return compute + [centre] + compute[::-1]


def lower_mcx(circuit: Circuit, auto_extend: bool = True) -> Circuit:
    """Decompose every MCX with >= 3 controls into Toffolis plus one CX.

    Gates with one or two controls pass through. The scratch block is sized
    by the widest gate (its control count minus one) and reused by every
    lowered gate. With ``auto_extend`` the layout grows as needed; otherwise
    an undersized scratch block is an error.
    """
    widest = max(
        (g.n_controls for g in circuit.gates if g.kind is GateKind.MCX and g.n_controls >= 3),
        default=0,
    )
    if widest == 0:
        return circuit
    if not auto_extend and len(circuit.layout.scratch) < widest - 1:
        raise PassError(
            f"need {widest - 1} scratch qubits, layout has {len(circuit.layout.scratch)}"
        )
    layout = circuit.layout.with_scratch(widest - 1)
    gates: list[Gate] = []
    for gate in circuit.gates:
        if gate.kind is GateKind.MCX and gate.n_controls >= 3:
            gates.extend(_ladder(gate, layout.scratch))
        else:
            gates.append(gate)
    return Circuit(layout, tuple(gates))


# Textbook six-CX Toffoli network; exact, no global-phase residue.
def _toffoli_network(a: int, b: int, t: int) -> list[Gate]:
    quarter = math.pi / 4.0
    return [
        h(t),
        cx(b, t),
        phase(t, -quarter),
        cx(a, t),
        phase(t, quarter),
        cx(b, t),
        phase(t, -quarter),
        cx(a, t),
        phase(b, quarter),
        phase(t, quarter),
        h(t),
        cx(a, b),
        phase(a, quarter),
        phase(b, -quarter),
        cx(a, b),
    ]


def lower_toffoli(circuit: Circuit) -> Circuit:
    """Expand every two-controlled X into the six-CX single-qubit network.

    Open controls are handled first by X conjugation, adding two X gates per
    open control. Wider MCX gates pass through untouched.
    """
    gates: list[Gate] = []
    for gate in circuit.gates:
        if gate.kind is not GateKind.MCX or gate.n_controls != 2:
            gates.append(gate)
            continue
        flips = [c.qubit for c in gate.controls if c.is_negative]
        a, b = (c.qubit for c in gate.controls)
        gates.extend(x(q) for q in flips)
        gates.extend(_toffoli_network(a, b, gate.targets[0]))
        gates.extend(x(q) for q in flips)
    return Circuit(circuit.layout, tuple(gates))


def lower_cphase_swap(circuit: Circuit) -> Circuit:
    """Rewrite controlled phases and swaps into the CX basis.

    cp(theta) becomes two CX and three phase gates (exact); swap becomes
    three CX. Open controls are X-conjugated first. This stage is not part
    of the reference pipeline; it exists so Fourier-style circuits can be
    measured in CX counts.
    """
    gates: list[Gate] = []
    for gate in circuit.gates:
        if gate.kind is GateKind.SWAP:
            a, b = gate.targets
            gates.extend((cx(a, b), cx(b, a), cx(a, b)))
            continue
        if gate.kind is not GateKind.CPHASE:
            gates.append(gate)
            continue
        if gate.n_controls != 1:
            raise PassError("cphase with more than one control is not supported here")
        spec = gate.controls[0]
        c, t = spec.qubit, gate.targets[0]
        half = gate.angle / 2.0
        if spec.is_negative:
            gates.append(x(c))
        gates.extend((phase(c, half), phase(t, half), cx(c, t), phase(t, -half), cx(c, t)))
        if spec.is_negative:
            gates.append(x(c))
    return Circuit(circuit.layout, tuple(gates))


def cancel_adjacent(circuit: Circuit, window: int = 0) -> Circuit:
    """Delete pairs of identical self-inverse gates that meet after commuting
    through gates with disjoint qubit support.

    Eligible kinds: X, H, swap, and the whole MCX family; a pair must match
    in kind, targets, controls, and polarities. ``window`` bounds how far a
    gate may commute backward (0 means unbounded). Runs to a fixpoint, so the
    pass is idempotent and never increases any census entry.
    """
    gates = list(circuit.gates)
    max_rounds = max(1, len(gates)) ** 2
    for _ in range(max_rounds):
        out: list[Gate] = []
        supports: list[frozenset[int]] = []
        changed = False
        for gate in gates:
            cancelled = False
            if gate.is_self_inverse:
                span = gate.support
                lo = 0 if window <= 0 else max(0, len(out) - window)
                for i in range(len(out) - 1, lo - 1, -1):
                    if out[i] == gate:
                        del out[i]
                        del supports[i]
                        cancelled = True
                        changed = True
                        break
                    if supports[i] & span:
                        break
            if not cancelled:
                out.append(gate)
                supports.append(gate.support)
        if not changed:
            return Circuit(circuit.layout, tuple(out))
        gates = out
    raise PassError("cancellation did not reach a fixpoint within the iteration cap")


@dataclass(frozen=True)
class PassStage:
    name: str
    options: dict = field(default_factory=dict)


@dataclass(frozen=True)
class PassPipeline:
    """Ordered list of pass stages with per-stage options."""

    stages: tuple[PassStage, ...]


@dataclass(frozen=True)
class StageReport:
    stage: str
    census: GateCensus


PASS_REGISTRY = {
    "lower_mcx": lower_mcx,
    "cancel_adjacent": cancel_adjacent,
    "lower_toffoli": lower_toffoli,
    "lower_negative_controls": lower_negative_controls,
    "lower_cphase_swap": lower_cphase_swap,
}


def run_pipeline(circuit: Circuit, pipeline: PassPipeline) -> tuple[Circuit, tuple[StageReport, ...]]:
    """Apply stages in order; the log records the census after each stage."""
    reports: list[StageReport] = []
    for stage in pipeline.stages:
        fn = PASS_REGISTRY.get(stage.name)
        if fn is None:
            raise PassError(f"unknown pipeline stage {stage.name!r}")
        try:
            circuit = fn(circuit, **stage.options)
        except TypeError as exc:
            raise PassError(f"bad options for stage {stage.name!r}: {exc}") from exc
        reports.append(StageReport(stage.name, census(circuit)))
    return circuit, tuple(reports)


def _parse_option(raw: str):
    low = raw.lower()
    if low in ("true", "false"):
        return low == "true"
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        return raw


def parse_pipeline(text: str) -> PassPipeline:
    """Parse the plain-text pipeline schema.

    One stage per line: a stage name followed by optional ``key=value``
    pairs. Blank lines and ``#`` comments are ignored. Values parse as bool,
    int, or float when they look like one, else stay strings.
    """
    stages: list[PassStage] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        name = parts[0]
        if name not in PASS_REGISTRY:
            raise PassError(f"line {lineno}: unknown pipeline stage {name!r}")
        options = {}
        for item in parts[1:]:
            if "=" not in item:
                raise PassError(f"line {lineno}: expected key=value, got {item!r}")
            key, raw = item.split("=", 1)
            options[key] = _parse_option(raw)
        stages.append(PassStage(name, options))
    return PassPipeline(tuple(stages))


BUILTIN_PIPELINES = ("reference", "cx_basis")


def load_pipeline(name_or_path: str) -> PassPipeline:
    """Load a pipeline by built-in name or from a config file path."""
    if name_or_path in BUILTIN_PIPELINES:
        text = (
            resources.files("stateshift")
            .joinpath(f"pipelines/{name_or_path}.pipeline")
            .read_text(encoding="utf-8")
        )
    else:
        with open(name_or_path, "r", encoding="utf-8") as fh:
            text = fh.read()
    return parse_pipeline(text)


def reference_pipeline() -> PassPipeline:
    """The default lowering pipeline used by measurements and the CLI."""
    return load_pipeline("reference")
