"""Acceptance criteria, one PASS/FAIL line each.

Run under pytest, or directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import json
import os
import random
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rules import INSTANCES, RULES, check_rule  # noqa: E402
from support import PAULI_X, TOL, fixture, path_sum  # noqa: E402
from zxcheck.bench import (BenchSpec, Family, Fault, loglog_slope, rows_to_csv, run_suite,  # noqa: E402
                           scaling_series, suite_pair)
from zxcheck.circuit import Circuit, circuit_to_diagram  # noqa: E402
from zxcheck.diagram import Z  # noqa: E402
from zxcheck.equiv import (CheckOptions, VerdictKind, check_equivalence, data_unitary,  # noqa: E402
                           expected_permutation, plug_ancillas)
from zxcheck.oracle import circuit_unitary, compare, fix_ancilla, hs_check, interpret_diagram, proportional  # noqa: E402
from zxcheck.phase import PI  # noqa: E402
from zxcheck.qasm import load_qasm  # noqa: E402
from zxcheck.simplify import SimplifyOptions, find_gadgets, full_reduce, is_reduced  # noqa: E402

ZX_ONLY = CheckOptions(oracle_fallback_max_qubits=0)
ROUNDING = CheckOptions(simplify=SimplifyOptions(rounding_enabled=True, epsilon=1e-10),
                        oracle_fallback_max_qubits=0)


def _line(num: int, title: str, ok: bool, detail: str) -> str:
    return f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {title} -- {detail}"


# ---------------------------------------------------------------- criteria

def rule_soundness():
    t0 = time.perf_counter()
    results = [check_rule(r) for r in RULES]
    elapsed = time.perf_counter() - t0
    bad = [r.rule for r in results if r.failures or r.checked < INSTANCES]
    ok = not bad and elapsed < 60
    return ok, (f"{len(results)} rules x {INSTANCES} instances at tol {TOL:g}, {elapsed:.1f} s"
                + (f", failing: {bad}" if bad else ""))


def clifford_specs(count: int = 200, seed: int = 0) -> list[BenchSpec]:
    rng = random.Random(f"clifford-corpus:{seed}")
    return [BenchSpec(Family.CLIFFORD, rng.randint(2, 8), rng.randint(1, 400), s) for s in range(count)]


def clifford_completeness():
    specs = clifford_specs()
    t0 = time.perf_counter()
    misses = []
    for spec in specs:
        a, b = suite_pair(spec)
        exp = expected_permutation(a, b, ZX_ONLY)
        v = check_equivalence(a, b, ZX_ONLY)
        if not (v.method == "zx" and v.equivalent and v.permutation == exp):
            misses.append(spec.name())
    elapsed = time.perf_counter() - t0
    ok = not misses and elapsed < 120
    return ok, f"{len(specs) - len(misses)}/{len(specs)} reduced to the expected permutation, {elapsed:.1f} s"


def worked_examples():
    notes = []
    ghz, mapped = load_qasm(fixture("ghz.qasm")), load_qasm(fixture("ghz_mapped.qasm"))
    v = check_equivalence(ghz, mapped, ZX_ONLY)
    a_ok = v.kind == VerdictKind.EQUIVALENT_UP_TO_PERMUTATION and v.permutation == [0, 2, 1]
    notes.append(f"(a) {v.kind.value} {v.permutation}")

    toff, dec = load_qasm(fixture("toffoli.qasm")), load_qasm(fixture("toffoli_decomposed.qasm"))
    v = check_equivalence(toff, dec, ZX_ONLY)
    u, w = circuit_unitary(toff), circuit_unitary(dec)
    b_ok = v.kind == VerdictKind.EQUIVALENT and u.shape == (8, 8) and proportional(u, w, TOL)
    notes.append(f"(b) {v.kind.value}, 8x8 oracle {'agrees' if proportional(u, w, TOL) else 'disagrees'}")

    d = plug_ancillas(circuit_to_diagram(Circuit(2).append("cx", 0, 1)), {0: 1}, {0: 1})
    full_reduce(d)
    sp = d.spiders()
    c_ok = (len(sp) == 1 and d.type(sp[0]) == Z and d.phase(sp[0]) == PI
            and proportional(PAULI_X, interpret_diagram(d), TOL) and proportional(PAULI_X, path_sum(d), TOL))
    notes.append(f"(c) {len(sp)} spider(s) left, map ~ X: {c_ok}")

    r = fix_ancilla(circuit_unitary(Circuit(2).append("cx", 0, 1)), 0, 1)
    d_ok = np.array_equal(r, np.array([[0, 1], [1, 0]]))
    notes.append(f"(d) exact [[0,1],[1,0]]: {d_ok}")
    return a_ok and b_ok and c_ok and d_ok, "; ".join(notes)


def mcx_incompleteness():
    a = load_qasm(fixture("mcx_ancilla.qasm"))
    a = a.copy(ancillas={a.qubit_index("a0"): 0})
    b = load_qasm(fixture("mcx.qasm"))
    v0 = check_equivalence(a, b, ZX_ONLY)
    r = v0.residual
    gadgets = find_gadgets(r)
    zx_ok = (v0.kind == VerdictKind.NO_INFORMATION and r.num_spiders() > 0 and bool(gadgets)
             and is_reduced(r))
    v1 = check_equivalence(a, b)
    dense = circuit_unitary(a).shape == (32, 32)
    oracle_ok = v1.kind == VerdictKind.EQUIVALENT and v1.method == "oracle" and dense
    return zx_ok and oracle_ok, (f"oracle off: {v0.kind.value}, residual {r.num_spiders()} spiders with "
                                 f"{len(gadgets)} gadgets; oracle on: {v1.kind.value} via 32x32 map")


def fault_specs(per_cell: int = 50) -> list[BenchSpec]:
    rng = random.Random("fault-corpus")
    specs = []
    for fam in Family:
        for fault in (Fault.REMOVE_RANDOM_GATE, Fault.FLIP_RANDOM_CNOT):
            for s in range(per_cell):
                specs.append(BenchSpec(fam, rng.randint(2, 8), rng.randint(10, 150), s, fault))
    return specs


def fault_detection():
    specs = fault_specs()
    false_eq = resolved = 0
    for spec in specs:
        a, b = suite_pair(spec)
        zx = check_equivalence(a, b, ZX_ONLY)
        res = compare(data_unitary(a), data_unitary(b), expected_permutation(a, b, ZX_ONLY), TOL)
        if not res.equal and zx.equivalent:
            false_eq += 1
        if not res.equal and res.witness is not None and "input" in res.witness:
            resolved += 1
    frac = resolved / len(specs)
    ok = false_eq == 0 and frac >= 0.99
    return ok, f"{len(specs)} faulted pairs: {false_eq} false Equivalent, oracle witnessed {frac:.1%}"


def inaccuracy():
    a = load_qasm(fixture("clifford_t.qasm"))
    b = load_qasm(fixture("clifford_t_perturbed.qasm"))
    strict = check_equivalence(a, b, ZX_ONLY)
    loose = check_equivalence(a, b, ROUNDING)
    f = hs_check(circuit_unitary(a), circuit_unitary(b)).fidelity
    ok = (strict.kind == VerdictKind.NO_INFORMATION and loose.kind == VerdictKind.EQUIVALENT
          and f >= 1 - 1e-12)
    return ok, f"no rounding: {strict.kind.value}; eps=1e-10: {loose.kind.value}; fidelity 1-{1 - f:.1e}"


SCALING_GATES = [250, 500, 1000, 2000, 4000]


def scaling():
    parts, ok = [], True
    for q in (8, 16):
        med = scaling_series(q, SCALING_GATES, range(5))
        s = loglog_slope(list(med), list(med.values()))
        ok &= 0.8 <= s <= 2.5
        parts.append(f"{q} qubits slope {s:.2f}")
    return ok, ", ".join(parts) + " (allowed [0.8, 2.5])"


def fingerprint() -> str:
    """Everything the criteria compare, minus wall-clock times."""
    out = []
    for spec in clifford_specs(25, seed=1) + fault_specs(3):
        a, b = suite_pair(spec)
        d = check_equivalence(a, b).to_dict()
        d.pop("time_ms")
        out.append(d)
    specs = [BenchSpec(Family.CLIFFORD_T, 3, 40, s) for s in range(4)]
    out.append(rows_to_csv(run_suite(specs, timing=False), timing=False))
    out.append([(r.rule, r.checked, r.failures, r.skipped_zero) for r in (check_rule(x, 50) for x in RULES)])
    return json.dumps(out, sort_keys=True)


def determinism():
    here = Path(__file__).parent
    code = "import sys; sys.path.insert(0, sys.argv[1]); import test_acceptance as t; print(t.fingerprint())"
    prints = []
    for hashseed in ("0", "12345"):
        env = dict(os.environ, PYTHONHASHSEED=hashseed)
        r = subprocess.run([sys.executable, "-c", code, str(here)], env=env, capture_output=True,
                           text=True, check=True)
        prints.append(r.stdout)
    local = fingerprint() + "\n"
    ok = prints[0] == prints[1] == local
    return ok, f"3 runs (two hash seeds, one in-process) {'identical' if ok else 'differ'}"


CRITERIA = [
    (1, "rule soundness", rule_soundness),
    (2, "Clifford completeness", clifford_completeness),
    (3, "worked examples", worked_examples),
    (4, "MCX incompleteness regression", mcx_incompleteness),
    (5, "fault detection", fault_detection),
    (6, "inaccuracy handling", inaccuracy),
    (7, "scaling", scaling),
    (8, "determinism", determinism),
]


@pytest.mark.parametrize("num, title, fn", CRITERIA, ids=[f"criterion{n}" for n, _, _ in CRITERIA])
def test_criterion(num, title, fn, capsys):
    ok, detail = fn()
    with capsys.disabled():
        print("\n" + _line(num, title, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for num, title, fn in CRITERIA:
        ok, detail = fn()
        failed += not ok
        print(_line(num, title, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
