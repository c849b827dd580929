"""Command-line front end.

Subcommands: build, lower, count, verify, table, walk, crossover. Output
files are deterministic: the same flags always produce the same bytes.

Exit codes: 0 success, 2 usage error, 3 build or input error,
4 verification failure.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import analysis, walk as walk_mod
from .builders import ShiftVariant, build_shift, expected_shift_table, shift_layout
from .ir import CircuitError, GateKind, census
from .passes import BUILTIN_PIPELINES, load_pipeline, run_pipeline
from .qasm import export_text, import_text
from .sim import extract_permutation, simulated_permutation

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUILD = 3
EXIT_VERIFY = 4

_X_FAMILY = frozenset({GateKind.X, GateKind.MCX})


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _load_or_build(args: argparse.Namespace):
    if getattr(args, "circuit", None):
        with open(args.circuit, "r", encoding="utf-8") as fh:
            return import_text(fh.read())
    return build_shift(ShiftVariant.parse(args.variant), args.m)


def _cmd_build(args: argparse.Namespace) -> int:
    circuit = build_shift(ShiftVariant.parse(args.variant), args.m)
    _write(args.out, export_text(circuit))
    print(f"wrote {args.out}: {len(circuit)} gates on {circuit.total_qubits} qubits")
    return EXIT_OK


def _cmd_lower(args: argparse.Namespace) -> int:
    circuit = _load_or_build(args)
    pipeline = load_pipeline(args.pipeline)
    lowered, reports = run_pipeline(circuit, pipeline)
    _write(args.out, export_text(lowered))
    for report in reports:
        tally = report.census
        print(
            f"after {report.stage}: {tally.total} gates, "
            f"cx={tally.cx_total}, two-qubit={tally.two_qubit_total}"
        )
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_count(args: argparse.Namespace) -> int:
    circuit = _load_or_build(args)
    if args.pipeline:
        circuit, _ = run_pipeline(circuit, load_pipeline(args.pipeline))
    tally = census(circuit)
    lines = [
        f"{kind.value}[{arity} controls] {count}"
        for (kind, arity), count in sorted(tally.counts.items(), key=lambda kv: (kv[0][0].value, kv[0][1]))
    ]
    lines.append(f"total {tally.total}")
    lines.append(f"cx_total {tally.cx_total}")
    lines.append(f"two_qubit_total {tally.two_qubit_total}")
    text = "\n".join(lines) + "\n"
    if args.out:
        _write(args.out, text)
    else:
        print(text, end="")
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    circuit = _load_or_build(args)
    expected = expected_shift_table(args.m)
    layout = shift_layout(ShiftVariant.parse(args.variant), args.m)
    if circuit.layout.working_count != layout.working_count:
        raise CircuitError(
            f"circuit has a {circuit.layout.working_count}-qubit working register, expected "
            f"{layout.working_count}"
        )
    ancillas = circuit.layout.ancilla_ids
    if all(g.kind in _X_FAMILY for g in circuit.gates):
        table = extract_permutation(circuit, ancillas)
    else:
        table = simulated_permutation(circuit, ancillas, tol=args.tol)
    bad = expected.mismatches(table)
    if not bad:
        print(f"verify {args.variant} m={args.m}: pass ({table.size} basis states)")
        return EXIT_OK
    print(f"verify {args.variant} m={args.m}: FAIL on {len(bad)} basis states")
    sites = 1 << args.m
    for idx in bad[:16]:
        site, coin = idx % sites, idx // sites
        got = int(table.mapping[idx]) if table.valid[idx] else "not a restored basis state"
        print(f"  |site={site}, coin={coin}> -> {got}, expected {int(expected.mapping[idx])}")
    return EXIT_VERIFY


def _cmd_table(args: argparse.Namespace) -> int:
    pipeline = load_pipeline(args.pipeline)
    variants = tuple(ShiftVariant.parse(v) for v in args.variants)
    rows = analysis.scaling_table(
        range(args.n_min, args.n_max + 1, args.n_step), pipeline, variants
    )
    text = analysis.render_table_csv(rows) if args.csv else analysis.render_table_text(rows)
    if args.out:
        _write(args.out, text)
        print(f"wrote {args.out}: {len(rows)} rows")
    else:
        print(text, end="")
    return EXIT_OK


def _cmd_walk(args: argparse.Namespace) -> int:
    config = walk_mod.WalkConfig(
        m=args.m,
        steps=args.steps,
        variant=ShiftVariant.parse(args.variant),
        start_site=args.start,
        coin_init=args.coin_init,
    )
    result = walk_mod.run_walk(config)
    lines = [
        f"{site},{prob!r}"
        for site, prob in enumerate(result.distribution.probabilities.tolist())
    ]
    if args.compare_oracle:
        oracle = walk_mod.classical_walk_oracle(config)
        deviation = result.distribution.max_deviation(oracle)
        lines.append(f"# max_abs_deviation_vs_oracle = {deviation!r}")
    text = "\n".join(lines) + "\n"
    if args.out:
        _write(args.out, text)
        print(f"wrote {args.out}")
    else:
        print(text, end="")
    return EXIT_OK


def _cmd_crossover(args: argparse.Namespace) -> int:
    n = analysis.crossover_point()
    print(f"parallel prediction first beats qft at n = {n} working qubits")
    for size in range(n - 2, n + 2):
        parallel = analysis.predict_cx(ShiftVariant.PARALLEL, size)
        qft = analysis.predict_cx(ShiftVariant.QFT, size)
        print(f"  n={size}: parallel={parallel} qft={qft}")
    return EXIT_OK


def _add_variant_m(parser: argparse.ArgumentParser, m_required: bool = True) -> None:
    parser.add_argument("--variant", required=True, choices=[v.value for v in ShiftVariant])
    parser.add_argument("-m", type=int, required=m_required, help="position qubits (2**m sites)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stateshift",
        description="Build, lower, verify, and analyze cyclic basis-state shift circuits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="write a shift circuit as OpenQASM 3 text")
    _add_variant_m(p_build)
    p_build.add_argument("-o", "--out", required=True)
    p_build.set_defaults(fn=_cmd_build)

    p_lower = sub.add_parser("lower", help="run a pass pipeline and write the result")
    _add_variant_m(p_lower)
    p_lower.add_argument("--circuit", help="read this circuit file instead of building")
    p_lower.add_argument(
        "--pipeline", default="reference", help=f"built-in name {BUILTIN_PIPELINES} or a config path"
    )
    p_lower.add_argument("-o", "--out", required=True)
    p_lower.set_defaults(fn=_cmd_lower)

    p_count = sub.add_parser("count", help="print the gate census of a circuit")
    _add_variant_m(p_count)
    p_count.add_argument("--circuit")
    p_count.add_argument("--pipeline", help="lower through this pipeline before counting")
    p_count.add_argument("-o", "--out")
    p_count.set_defaults(fn=_cmd_count)

    p_verify = sub.add_parser("verify", help="check the shift permutation exhaustively")
    _add_variant_m(p_verify)
    p_verify.add_argument("--circuit", help="verify this circuit file instead of building")
    p_verify.add_argument("--tol", type=float, default=1e-10)
    p_verify.set_defaults(fn=_cmd_verify)

    p_table = sub.add_parser("table", help="scaling table of predicted and measured CX counts")
    p_table.add_argument("--n-min", type=int, required=True)
    p_table.add_argument("--n-max", type=int, required=True)
    p_table.add_argument("--n-step", type=int, default=1)
    p_table.add_argument(
        "--variants", nargs="+", default=[v.value for v in ShiftVariant],
        choices=[v.value for v in ShiftVariant],
    )
    p_table.add_argument("--pipeline", default="reference")
    p_table.add_argument("--csv", action="store_true", help="comma-separated instead of aligned")
    p_table.add_argument("-o", "--out")
    p_table.set_defaults(fn=_cmd_table)

    p_walk = sub.add_parser("walk", help="simulate a coined walk and write site probabilities")
    _add_variant_m(p_walk)
    p_walk.add_argument("-T", "--steps", type=int, required=True)
    p_walk.add_argument("--start", type=int, default=0)
    p_walk.add_argument("--coin-init", default="0", choices=list(walk_mod.COIN_STATES))
    p_walk.add_argument("--compare-oracle", action="store_true")
    p_walk.add_argument("-o", "--out")
    p_walk.set_defaults(fn=_cmd_walk)

    p_cross = sub.add_parser("crossover", help="where the parallel law overtakes the qft one")
    p_cross.set_defaults(fn=_cmd_crossover)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (CircuitError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUILD


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
