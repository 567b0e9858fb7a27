"""``zxcheck`` command line.

Exit codes: 0 equivalent, 2 proven non-equivalent, 3 no information,
1 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .bench import BenchError, BenchSpec, Family, Fault, rows_to_csv, run_suite
from .circuit import Circuit, CircuitError
from .diagram import DiagramError, to_graph_like
from .equiv import MAX_ORACLE_QUBITS, CheckOptions, VerdictKind, build_miter, check_equivalence, circuit_diagram
from .oracle import OracleError
from .qasm import QasmError, load_qasm
from .simplify import SimplifyError, SimplifyOptions, full_reduce

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NON_EQUIVALENT = 2
EXIT_NO_INFORMATION = 3

_EXIT_FOR = {
    VerdictKind.EQUIVALENT: EXIT_OK,
    VerdictKind.EQUIVALENT_UP_TO_PERMUTATION: EXIT_OK,
    VerdictKind.NON_EQUIVALENT: EXIT_NON_EQUIVALENT,
    VerdictKind.NO_INFORMATION: EXIT_NO_INFORMATION,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would collide with NonEquivalent
    def error(self, message: str):
        raise UsageError(message)


@dataclass(frozen=True)
class AncillaFlag:
    label: str
    state: int


def _ancilla(text: str) -> AncillaFlag:
    label, sep, state = text.rpartition(":")
    if not sep or not label or state not in ("0", "1"):
        raise argparse.ArgumentTypeError(f"expected LABEL:0 or LABEL:1, got {text!r}")
    return AncillaFlag(label, int(state))


def _perm(text: str):
    if text in ("any", "identity"):
        return text
    try:
        p = [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a permutation: {text!r}") from None
    if sorted(p) != list(range(len(p))):
        raise argparse.ArgumentTypeError(f"not a permutation: {text!r}")
    return p


def _nonneg_float(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not x >= 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return x


def _oracle_max(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= n <= MAX_ORACLE_QUBITS:
        raise argparse.ArgumentTypeError(f"must lie in 0..{MAX_ORACLE_QUBITS}")
    return n


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _rewrite_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tolerance", type=_nonneg_float, metavar="EPS",
                   help="snap inexact phases within EPS of a multiple of pi/2 during rewriting")
    p.add_argument("--max-iterations", type=_positive_int, default=1000)
    p.add_argument("--no-swap-reconstruct", action="store_true",
                   help="keep CX triples instead of turning them into wire crossings")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="zxcheck", description="Check quantum circuits for equivalence with ZX rewriting.")
    sub = ap.add_subparsers(dest="command", metavar="{check,reduce,bench,dump}", parser_class=_Parser)
    sub.required = True

    c = sub.add_parser("check", help="decide whether two circuits implement the same map")
    c.add_argument("a", metavar="A.qasm")
    c.add_argument("b", metavar="B.qasm")
    c.add_argument("--ancilla", type=_ancilla, action="append", default=[], metavar="LABEL:STATE",
                   help="treat qubit LABEL of the first file it exists in as an ancilla fixed to |STATE>")
    c.add_argument("--expect-perm", type=_perm, metavar="P|any|identity",
                   help="output wiring the miter must reduce to, e.g. 0,2,1")
    c.add_argument("--oracle-max", type=_oracle_max, default=10, metavar="N",
                   help="largest qubit count for the dense fallback (0 disables it)")
    c.add_argument("--oracle-tolerance", type=_nonneg_float, default=1e-9, metavar="TAU")
    c.add_argument("--json", action="store_true", help="print a JSON report")
    c.add_argument("-v", "--verbose", action="store_true", help="print the rewrite trace")
    _rewrite_flags(c)

    r = sub.add_parser("reduce", help="simplify a circuit (or the miter of two) and print the report")
    r.add_argument("a", metavar="A.qasm")
    r.add_argument("b", metavar="B.qasm", nargs="?")
    r.add_argument("--dump-diagram", metavar="OUT.json", help="write the reduced diagram here")
    r.add_argument("--json", action="store_true")
    _rewrite_flags(r)

    d = sub.add_parser("dump", help="print the diagram JSON of a circuit before reduction")
    d.add_argument("a", metavar="A.qasm")
    d.add_argument("--graph-like", action="store_true", help="convert to graph-like form first")

    b = sub.add_parser("bench", help="run a generated benchmark suite")
    b.add_argument("--family", choices=[f.value for f in Family], default=Family.CLIFFORD_T.value)
    b.add_argument("--qubits", type=_int_list, default=[4], metavar="N[,N...]")
    b.add_argument("--gates", type=_int_list, default=[100], metavar="G[,G...]")
    b.add_argument("--seed", type=int, default=0, help="first seed")
    b.add_argument("--count", type=_positive_int, default=1, help="number of seeds per size")
    b.add_argument("--fault", choices=[f.value for f in Fault], default=Fault.NONE.value)
    b.add_argument("--oracle-max", type=_oracle_max, default=10, metavar="N")
    b.add_argument("--csv", metavar="OUT.csv")
    b.add_argument("--emit-dir", metavar="DIR", help="also write each generated pair as QASM")
    b.add_argument("--workers", type=_positive_int, default=1)
    b.add_argument("--timeout", type=_nonneg_float, metavar="SECONDS")
    b.add_argument("--no-timing", action="store_true", help="omit time_ms so output is reproducible")
    _rewrite_flags(b)
    return ap


def _simplify_options(ns: argparse.Namespace) -> SimplifyOptions:
    opts = SimplifyOptions(max_iterations=ns.max_iterations, trace=getattr(ns, "verbose", False))
    if ns.tolerance is not None:
        opts.rounding_enabled = True
        opts.epsilon = ns.tolerance
    return opts


def _has_label(c: Circuit, label: str) -> bool:
    return label.replace("[", "").replace("]", "") in (c.qubit_labels or [])


def _apply_ancillas(a: Circuit, b: Circuit, flags: list[AncillaFlag]) -> tuple[Circuit, Circuit]:
    """Resolve each label in the first circuit that declares it, keyed by logical qubit."""
    fixes: tuple[dict[int, int], dict[int, int]] = ({}, {})
    for f in flags:
        for idx, c in enumerate((a, b)):
            if _has_label(c, f.label):
                wire = c.qubit_index(f.label)
                fixes[idx][c.layout.index(wire)] = f.state
                break
        else:
            raise UsageError(f"--ancilla: no qubit named {f.label!r} in either circuit")
    return (a.copy(ancillas={**a.ancillas, **fixes[0]}),
            b.copy(ancillas={**b.ancillas, **fixes[1]}))


def _load(path: str) -> Circuit:
    try:
        return load_qasm(path)
    except QasmError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _print_verdict(v, as_json: bool, verbose: bool) -> None:
    if as_json:
        print(json.dumps(v.to_dict(), indent=2, sort_keys=False))
        return
    line = v.kind.value
    if v.permutation is not None and v.kind == VerdictKind.EQUIVALENT_UP_TO_PERMUTATION:
        line += " permutation=" + ",".join(map(str, v.permutation))
    print(f"{line} (method={v.method}, {v.time_ms:.1f} ms)")
    rep = v.report
    rules = ", ".join(f"{k}={n}" for k, n in sorted(rep.rule_counts.items())) or "none"
    print(f"spiders {rep.spiders_before} -> {rep.spiders_after}; iterations {rep.iterations}; rules {rules}")
    if v.fidelity is not None:
        print(f"fidelity {v.fidelity:.15f}")
    if v.witness:
        w = v.witness
        print(f"witness input |{w['input']}>, deviation {w['deviation']:.3e}")
    if verbose:
        for t in rep.trace:
            print("  " + t)


def _cmd_check(ns) -> int:
    opts = CheckOptions(simplify=_simplify_options(ns), expected_output_permutation=ns.expect_perm,
                        oracle_fallback_max_qubits=ns.oracle_max,
                        reconstruct_swaps=not ns.no_swap_reconstruct,
                        oracle_tolerance=ns.oracle_tolerance)
    a, b = _load(ns.a), _load(ns.b)
    a, b = _apply_ancillas(a, b, ns.ancilla)
    v = check_equivalence(a, b, opts)
    _print_verdict(v, ns.json, ns.verbose)
    return _EXIT_FOR[v.kind]


def _cmd_reduce(ns) -> int:
    opts = CheckOptions(simplify=_simplify_options(ns), reconstruct_swaps=not ns.no_swap_reconstruct)
    if ns.b is None:
        d = circuit_diagram(_load(ns.a), opts)
        report = full_reduce(d, opts.simplify)
    else:
        d = build_miter(_load(ns.a), _load(ns.b), opts)
        report = full_reduce(d, opts.simplify)
    if ns.dump_diagram:
        with open(ns.dump_diagram, "w", encoding="utf-8") as fh:
            fh.write(d.to_json(indent=2) + "\n")
    summary = {"schema": 1, "rules": report.rule_counts, "iterations": report.iterations,
               "spiders_before": report.spiders_before, "spiders_after": report.spiders_after}
    if ns.json:
        print(json.dumps(summary, indent=2))
    else:
        rules = ", ".join(f"{k}={n}" for k, n in sorted(report.rule_counts.items())) or "none"
        print(f"spiders {report.spiders_before} -> {report.spiders_after}; "
              f"iterations {report.iterations}; rules {rules}")
    return EXIT_OK


def _cmd_dump(ns) -> int:
    d = circuit_diagram(_load(ns.a))
    if ns.graph_like:
        d = to_graph_like(d)
    print(d.to_json(indent=2))
    return EXIT_OK


def _cmd_bench(ns) -> int:
    if ns.emit_dir is not None and os.path.exists(ns.emit_dir) and not os.path.isdir(ns.emit_dir):
        raise UsageError(f"--emit-dir {ns.emit_dir!r} exists and is not a directory")
    opts = CheckOptions(simplify=_simplify_options(ns), oracle_fallback_max_qubits=ns.oracle_max,
                        reconstruct_swaps=not ns.no_swap_reconstruct)
    specs = [BenchSpec(ns.family, q, g, s, ns.fault)
             for q in ns.qubits for g in ns.gates for s in range(ns.seed, ns.seed + ns.count)]
    timing = not ns.no_timing
    rows = run_suite(specs, opts, csv_path=ns.csv, emit_dir=ns.emit_dir, timeout=ns.timeout,
                     workers=ns.workers, timing=timing)
    if ns.csv is None:
        sys.stdout.write(rows_to_csv(rows, timing))
    return EXIT_OK


_COMMANDS = {"check": _cmd_check, "reduce": _cmd_reduce, "dump": _cmd_dump, "bench": _cmd_bench}


def main(argv: list[str] | None = None) -> int:
    try:
        ns = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"zxcheck: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return _COMMANDS[ns.command](ns)
    except UsageError as exc:
        print(f"zxcheck: error: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"zxcheck: error: {exc.filename or ''}: {exc.strerror or exc}", file=sys.stderr)
    except (CircuitError, DiagramError, SimplifyError, OracleError, BenchError, ValueError) as exc:
        print(f"zxcheck: error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
