"""Random benchmark circuits, fault injection and timed suites."""

from __future__ import annotations

import csv
import io
import os
import random
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .circuit import Circuit, Gate
from .equiv import CheckOptions, check_equivalence
from .qasm import to_qasm


class Family(str, Enum):
    CLIFFORD = "clifford"
    CLIFFORD_T = "cliffordt"


class Fault(str, Enum):
    NONE = "none"
    REMOVE_RANDOM_GATE = "remove"
    FLIP_RANDOM_CNOT = "flip"


GATE_MIX = {
    Family.CLIFFORD: "H/S/CX uniform",
    Family.CLIFFORD_T: "H 20%, T 20%, CX 60%",
}


class BenchError(ValueError):
    pass


@dataclass(frozen=True)
class BenchSpec:
    family: Family
    qubits: int
    gate_count: int
    seed: int
    fault: Fault = Fault.NONE

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "fault", Fault(self.fault))
        if self.qubits < 1:
            raise BenchError("qubits must be at least 1")
        if self.gate_count < 0:
            raise BenchError("gate_count must be non-negative")

    def name(self) -> str:
        return f"{self.family.value}_q{self.qubits}_g{self.gate_count}_s{self.seed}_{self.fault.value}"


def _rng(*parts) -> random.Random:
    # string seeds hash through sha512, so streams are stable across runs and platforms
    return random.Random(":".join(str(p) for p in ("zxcheck",) + parts))


def gen_random(spec: BenchSpec) -> Circuit:
    rng = _rng("gen", spec.family.value, spec.qubits, spec.gate_count, spec.seed)
    n = spec.qubits
    c = Circuit(n)
    for _ in range(spec.gate_count):
        if spec.family == Family.CLIFFORD_T:
            r = rng.random()
            name = "h" if r < 0.2 else "t" if r < 0.4 else "cx"
        else:
            name = rng.choice(("h", "s", "cx"))
        if name == "cx":
            if n == 1:
                c.append("s", 0)
            else:
                c.append("cx", *rng.sample(range(n), 2))
        else:
            c.append(name, rng.randrange(n))
    return c


def inject_fault(c: Circuit, fault: Fault, seed: int) -> Circuit:
    fault = Fault(fault)
    rng = _rng("fault", fault.value, seed)
    gates = list(c.gates)
    if fault == Fault.NONE:
        return c.copy()
    if fault == Fault.REMOVE_RANDOM_GATE:
        idx = [i for i, g in enumerate(gates) if g.name != "barrier"]
        if not idx:
            raise BenchError("cannot remove a gate from an empty circuit")
        del gates[rng.choice(idx)]
    else:
        idx = [i for i, g in enumerate(gates) if g.name == "cx"]
        if not idx:
            raise BenchError("circuit has no CX to flip")
        i = rng.choice(idx)
        a, b = gates[i].qubits
        gates[i] = Gate("cx", (b, a))
    return c.copy(gates=gates)


_CLIFFORD_IDENTITIES = (("h", "h"), ("s", "sdg"), ("z", "z"), ("x", "x"))


def padded_copy(c: Circuit, seed: int, swap_rate: float = 0.05, identity_rate: float = 0.05) -> Circuit:
    """Same computation on relabelled wires, with inserted SWAPs and identity pairs.

    SWAPs appear both as swap gates and as three CX. The result records its
    initial layout and output permutation.
    """
    rng = _rng("pad", seed)
    n = c.num_qubits
    sigma = list(range(n))
    rng.shuffle(sigma)
    where = list(sigma)  # where[w] = current wire of the original wire w
    non_clifford = any(g.name in ("t", "tdg", "rz", "rx", "u1", "u2", "u3", "ry", "ccx") for g in c.gates)
    pairs = _CLIFFORD_IDENTITIES + ((("t", "tdg"),) if non_clifford else ())
    out: list[Gate] = []
    for g in c.gates:
        if n >= 2 and rng.random() < swap_rate:
            a, b = rng.sample(range(n), 2)
            if rng.random() < 0.5:
                out.append(Gate("swap", (a, b)))
            else:
                out.extend([Gate("cx", (a, b)), Gate("cx", (b, a)), Gate("cx", (a, b))])
            inv = {p: w for w, p in enumerate(where)}
            wa, wb = inv[a], inv[b]
            where[wa], where[wb] = b, a
        if rng.random() < identity_rate:
            if n >= 2 and rng.random() < 0.25:
                a, b = rng.sample(range(n), 2)
                out.extend([Gate("cx", (a, b)), Gate("cx", (a, b))])
            else:
                q = rng.randrange(n)
                first, second = rng.choice(pairs)
                out.extend([Gate(first, (q,)), Gate(second, (q,))])
        out.append(Gate(g.name, tuple(where[q] for q in g.qubits), g.params))
    layout = tuple(sigma[w] for w in c.layout)
    outp = tuple(where[w] for w in c.out_layout)
    return Circuit(n, out, layout, outp, dict(c.ancillas), list(c.qubit_labels or []))


def suite_pair(spec: BenchSpec) -> tuple[Circuit, Circuit]:
    """(original, derived) circuits checked for one suite row."""
    original = gen_random(spec)
    derived = original
    if spec.fault != Fault.NONE:
        derived = inject_fault(original, spec.fault, spec.seed)
    return original, padded_copy(derived, spec.seed)


CSV_FIELDS = ["family", "qubits", "gate_count", "seed", "fault", "gate_mix",
              "verdict", "method", "spiders_before", "spiders_after", "time_ms"]


def _run_row(args) -> dict:
    spec, opts, timing = args
    a, b = suite_pair(spec)
    t0 = time.perf_counter()
    v = check_equivalence(a, b, opts)
    elapsed = (time.perf_counter() - t0) * 1000
    row = {
        "family": spec.family.value, "qubits": spec.qubits, "gate_count": spec.gate_count,
        "seed": spec.seed, "fault": spec.fault.value, "gate_mix": GATE_MIX[spec.family],
        "verdict": v.kind.value, "method": v.method,
        "spiders_before": v.report.spiders_before, "spiders_after": v.report.spiders_after,
    }
    if timing:
        row["time_ms"] = f"{elapsed:.3f}"
    return row


def run_suite(specs: Iterable[BenchSpec], opts: CheckOptions | None = None, *,
              csv_path: str | os.PathLike | None = None, emit_dir: str | os.PathLike | None = None,
              timeout: float | None = None, workers: int = 1, timing: bool = True) -> list[dict]:
    """Check every spec's original circuit against its derived copy.

    ``timeout`` bounds the rewriting time of each check in seconds. With
    ``timing=False`` the time column is left out so that output is reproducible
    byte for byte.
    """
    specs = list(specs)
    opts = opts or CheckOptions()
    if timeout is not None:
        opts = replace(opts, simplify=replace(opts.simplify, time_limit=timeout))
    if emit_dir is not None:
        os.makedirs(emit_dir, exist_ok=True)
        for spec in specs:
            a, b = suite_pair(spec)
            for tag, c in (("a", a), ("b", b)):
                with open(os.path.join(emit_dir, f"{spec.name()}_{tag}.qasm"), "w", encoding="utf-8") as fh:
                    fh.write(to_qasm(c))
    jobs = [(s, opts, timing) for s in specs]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(_run_row, jobs))
    else:
        rows = [_run_row(j) for j in jobs]
    if csv_path is not None:
        with open(csv_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(rows_to_csv(rows, timing))
    return rows


def rows_to_csv(rows: Sequence[dict], timing: bool = True) -> str:
    fields = CSV_FIELDS if timing else CSV_FIELDS[:-1]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def scaling_series(qubits: int, gate_counts: Sequence[int], seeds: Sequence[int],
                   opts: CheckOptions | None = None) -> dict[int, float]:
    """Median wall time (ms) of Clifford+T self-checks per gate count."""
    opts = opts or CheckOptions(oracle_fallback_max_qubits=0)
    medians = {}
    for g in gate_counts:
        times = []
        for s in seeds:
            a, b = suite_pair(BenchSpec(Family.CLIFFORD_T, qubits, g, s))
            t0 = time.perf_counter()
            v = check_equivalence(a, b, opts)
            times.append((time.perf_counter() - t0) * 1000)
            if not v.equivalent:
                raise BenchError(f"self-check failed for {qubits} qubits, {g} gates, seed {s}")
        medians[g] = statistics.median(times)
    return medians


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    slope, _ = np.polyfit(np.log(np.asarray(xs, dtype=float)), np.log(np.asarray(ys, dtype=float)), 1)
    return float(slope)
