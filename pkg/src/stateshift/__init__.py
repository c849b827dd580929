"""Cyclic basis-state shift circuits.

Three constructions of the coin-conditioned shift |k> -> |k +/- 1 mod 2**m>,
lowering passes down to CX plus single-qubit gates, closed-form gate-count
predictors, statevector verification, and a discrete-time walk runner.
"""
from .analysis import (
    ScalingRow,
    crossover_point,
    predict_cx,
    predict_cx_general,
    predict_cx_presimplify,
    scaling_table,
)
from .builders import (
    ShiftVariant,
    build_canonical,
    build_parallel,
    build_qft,
    build_shift,
    expected_shift_table,
    shift_layout,
)
from .ir import (
    Circuit,
    CircuitError,
    ControlSpec,
    Gate,
    GateCensus,
    GateKind,
    Polarity,
    RegisterLayout,
    anti,
    append,
    ccx,
    census,
    cphase,
    ctrl,
    cx,
    h,
    inverse,
    mcx,
    phase,
    rz,
    swap,
    sx,
    x,
)
from .passes import (
    PassError,
    PassPipeline,
    PassStage,
    cancel_adjacent,
    load_pipeline,
    lower_cphase_swap,
    lower_mcx,
    lower_negative_controls,
    lower_toffoli,
    parse_pipeline,
    reference_pipeline,
    run_pipeline,
)
from .qasm import QasmError, export_text, import_text
from .sim import (
    PermutationTable,
    SimulationError,
    StateVector,
    UnitaryComparison,
    apply_gate,
    circuit_unitary,
    extract_permutation,
    run,
    simulated_permutation,
    unitary_equal,
)
from .walk import (
    PositionDistribution,
    WalkConfig,
    WalkResult,
    classical_walk_oracle,
    compare_variants,
    position_marginal,
    run_walk,
    walk_states,
)

__version__ = "0.1.0"
