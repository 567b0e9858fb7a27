"""Equivalence checking through miter simplification, with a dense fallback."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Union

from .circuit import Circuit, CircuitError, circuit_to_diagram, decompose_circuit, reconstruct_swaps
from .diagram import S, X, Diagram, DiagramError, adjoint, compose
from .oracle import OracleError, circuit_unitary, compare, fix_ancillas
from .phase import PI, ZERO
from .simplify import SimplifyOptions, SimplifyReport, SimplifyTimeout, full_reduce

MAX_ORACLE_QUBITS = 12

PermSpec = Union[Sequence[int], str, None]


class VerdictKind(str, Enum):
    EQUIVALENT = "Equivalent"
    EQUIVALENT_UP_TO_PERMUTATION = "EquivalentUpToPermutation"
    NON_EQUIVALENT = "NonEquivalent"
    NO_INFORMATION = "NoInformation"


@dataclass
class CheckOptions:
    """Knobs for :func:`check_equivalence`.

    ``expected_output_permutation`` is the wiring the reduced miter must show,
    mapping output position ``j`` of the first circuit to position ``p[j]`` of the
    second. ``None`` derives it from the circuits' layout annotations, falling
    back to ``"any"`` when neither circuit carries an output permutation.
    """

    simplify: SimplifyOptions = field(default_factory=SimplifyOptions)
    expected_output_permutation: PermSpec = None
    oracle_fallback_max_qubits: int = 10
    reconstruct_swaps: bool = True
    oracle_tolerance: float = 1e-9

    def __post_init__(self) -> None:
        if not 0 <= self.oracle_fallback_max_qubits <= MAX_ORACLE_QUBITS:
            raise ValueError(f"oracle_fallback_max_qubits must lie in [0, {MAX_ORACLE_QUBITS}]")
        e = self.expected_output_permutation
        if isinstance(e, str) and e not in ("any", "identity"):
            raise ValueError(f"unknown permutation expectation {e!r}")
        if e is not None and not isinstance(e, str):
            self.expected_output_permutation = [int(x) for x in e]
            if sorted(self.expected_output_permutation) != list(range(len(e))):
                raise ValueError(f"{list(e)} is not a permutation")


@dataclass
class Verdict:
    kind: VerdictKind
    permutation: list[int] | None = None
    witness: dict | None = None
    report: SimplifyReport = field(default_factory=SimplifyReport)
    time_ms: float = 0.0
    method: str = "zx"
    fidelity: float | None = None
    residual: Diagram | None = None

    @property
    def equivalent(self) -> bool:
        return self.kind in (VerdictKind.EQUIVALENT, VerdictKind.EQUIVALENT_UP_TO_PERMUTATION)

    def to_dict(self) -> dict:
        out: dict = {"schema": 1, "verdict": self.kind.value, "method": self.method}
        if self.permutation is not None:
            out["permutation"] = list(self.permutation)
        if self.witness is not None:
            w = dict(self.witness)
            for key in ("expected_column", "actual_column"):
                if key in w:
                    w[key] = [[z.real, z.imag] for z in w[key]]
            out["witness"] = w
        if self.fidelity is not None:
            out["fidelity"] = self.fidelity
        out["rules"] = dict(self.report.rule_counts)
        out["iterations"] = self.report.iterations
        out["spiders_before"] = self.report.spiders_before
        out["spiders_after"] = self.report.spiders_after
        out["time_ms"] = round(self.time_ms, 3)
        return out


def plug_ancillas(d: Diagram, inputs_to_fix: dict[int, int], outputs_to_fix: dict[int, int]) -> Diagram:
    """Replace the listed input/output positions by X-spider states/effects (0 or pi)."""
    r = d.copy()
    targets = []
    for lst, fixes, what in ((r.inputs, inputs_to_fix, "input"), (r.outputs, outputs_to_fix, "output")):
        for idx, state in fixes.items():
            if not 0 <= idx < len(lst):
                raise DiagramError(f"{what} index {idx} out of range (0..{len(lst) - 1})")
            if state not in (0, 1):
                raise DiagramError(f"ancilla state must be 0 or 1, got {state}")
            targets.append((lst[idx], state))
    for b, state in targets:
        x = r.add_vertex(X, PI if state else ZERO)
        (w, k), = r.incident(b).items()
        r.remove_vertex(b)
        r.add_edge_smart(x, w, k)
    return r


def _data_qubits(c: Circuit) -> list[int]:
    return [l for l in range(c.num_qubits) if l not in c.ancillas]


def _prepare(c: Circuit, opts: CheckOptions) -> Circuit:
    c = decompose_circuit(c)
    return reconstruct_swaps(c) if opts.reconstruct_swaps else c


def _output_fixes(c: Circuit) -> dict[int, int]:
    out = c.out_layout
    return {out[l]: s for l, s in c.ancillas.items()}


def circuit_diagram(c: Circuit, opts: CheckOptions | None = None) -> Diagram:
    """Diagram of ``c`` with its ancillas plugged."""
    c = _prepare(c, opts or CheckOptions())
    d = circuit_to_diagram(c)
    if c.ancillas:
        d = plug_ancillas(d, dict(c.ancillas), _output_fixes(c))
    return d


def build_miter(a: Circuit, b: Circuit, opts: CheckOptions | None = None) -> Diagram:
    """compose(adjoint(D_a), D_b): identity wires exactly when the circuits agree."""
    opts = opts or CheckOptions()
    da = circuit_diagram(a, opts)
    db = circuit_diagram(b, opts)
    if len(da.outputs) != len(db.inputs) or len(da.inputs) != len(db.outputs):
        raise CircuitError(f"data qubit counts differ: {len(da.inputs)} vs {len(db.inputs)}")
    return compose(adjoint(da), db)


def extract_permutation(d: Diagram) -> list[int] | None:
    """Wiring of a spider-free diagram of simple wires, as ``perm[input] = output``."""
    if d.num_spiders() or len(d.inputs) != len(d.outputs):
        return None
    where = {o: j for j, o in enumerate(d.outputs)}
    perm = []
    for i in d.inputs:
        nb = d.incident(i)
        if len(nb) != 1:
            return None
        (w, k), = nb.items()
        if k != S or w not in where:
            return None
        perm.append(where[w])
    return perm


def expected_permutation(a: Circuit, b: Circuit, opts: CheckOptions) -> list[int] | None:
    """Resolve the expectation to a concrete permutation, or None for "any"."""
    da, db = _data_qubits(a), _data_qubits(b)
    if len(da) != len(db):
        raise CircuitError(f"data qubit counts differ: {len(da)} vs {len(db)}")
    n = len(da)
    e = opts.expected_output_permutation
    if e == "any":
        return None
    if e == "identity":
        return list(range(n))
    if e is not None:
        if len(e) != n:
            raise CircuitError(f"expected permutation has {len(e)} entries for {n} data qubits")
        return list(e)
    if a.output_permutation is None and b.output_permutation is None:
        return None

    def positions(c: Circuit) -> dict[int, int]:
        anc_wires = set(_output_fixes(c))
        kept = [w for w in range(c.num_qubits) if w not in anc_wires]
        return {w: j for j, w in enumerate(kept)}

    pa, pb = positions(a), positions(b)
    perm = [0] * n
    for la, lb in zip(da, db):
        perm[pa[a.out_layout[la]]] = pb[b.out_layout[lb]]
    return perm


def data_unitary(c: Circuit):
    """Dense map of ``c`` with ancillas fixed: rows are kept output wires, columns data qubits."""
    u = circuit_unitary(c)
    if not c.ancillas:
        return u
    return fix_ancillas(u, dict(c.ancillas), _output_fixes(c))


def _verdict_for(perm: list[int]) -> VerdictKind:
    if perm == sorted(perm):
        return VerdictKind.EQUIVALENT
    return VerdictKind.EQUIVALENT_UP_TO_PERMUTATION


def check_equivalence(a: Circuit, b: Circuit, opts: CheckOptions | None = None) -> Verdict:
    opts = opts or CheckOptions()
    t0 = time.perf_counter()
    expected = expected_permutation(a, b, opts)
    miter = build_miter(a, b, opts)
    report = SimplifyReport(spiders_before=miter.num_spiders())
    timed_out = False
    try:
        report = full_reduce(miter, opts.simplify)
    except SimplifyTimeout:
        timed_out = True
    perm = None if timed_out else extract_permutation(miter)
    if perm is not None and (expected is None or perm == expected):
        return Verdict(_verdict_for(perm), perm, None, report,
                       (time.perf_counter() - t0) * 1000, "zx", None, miter)

    nq = max(a.num_qubits, b.num_qubits)
    if nq <= opts.oracle_fallback_max_qubits:
        try:
            va, vb = data_unitary(a), data_unitary(b)
            res = compare(va, vb, expected, opts.oracle_tolerance)
        except OracleError:
            res = None
        if res is not None:
            kind = _verdict_for(res.permutation) if res.equal else VerdictKind.NON_EQUIVALENT
            return Verdict(kind, res.permutation if res.equal else None, res.witness, report,
                           (time.perf_counter() - t0) * 1000, "oracle", res.fidelity, miter)
    return Verdict(VerdictKind.NO_INFORMATION, None, None, report,
                   (time.perf_counter() - t0) * 1000, "zx", None, miter)
