"""Gate-list circuit IR and its translation to ZX-diagrams."""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .diagram import H, S, X, Z, Diagram
from .phase import Phase

# name -> (number of qubits or None for variadic, number of parameters)
GATE_SIGNATURES: dict[str, tuple[int | None, int]] = {
    "x": (1, 0), "y": (1, 0), "z": (1, 0), "h": (1, 0),
    "s": (1, 0), "sdg": (1, 0), "t": (1, 0), "tdg": (1, 0),
    "rx": (1, 1), "ry": (1, 1), "rz": (1, 1),
    "u1": (1, 1), "u2": (1, 2), "u3": (1, 3),
    "cx": (2, 0), "cz": (2, 0), "swap": (2, 0), "ccx": (3, 0),
    "barrier": (None, 0),
}

COMPOSITE_GATES = frozenset({"ccx", "ry", "u2", "u3"})

_FIXED_Z = {"z": Phase(1), "s": Phase(Fraction(1, 2)), "sdg": Phase(Fraction(3, 2)),
            "t": Phase(Fraction(1, 4)), "tdg": Phase(Fraction(7, 4))}


class CircuitError(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]
    params: tuple[Phase, ...] = ()

    def __post_init__(self) -> None:
        sig = GATE_SIGNATURES.get(self.name)
        if sig is None:
            raise CircuitError(f"unsupported gate {self.name!r}")
        nq, npar = sig
        object.__setattr__(self, "qubits", tuple(self.qubits))
        object.__setattr__(self, "params", tuple(self.params))
        if nq is not None and len(self.qubits) != nq:
            raise CircuitError(f"{self.name} acts on {nq} qubit(s), got {len(self.qubits)}")
        if len(self.params) != npar:
            raise CircuitError(f"{self.name} takes {npar} parameter(s), got {len(self.params)}")
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"{self.name} repeats a qubit: {self.qubits}")

    def __str__(self) -> str:
        par = f"({','.join(p.to_qasm() for p in self.params)})" if self.params else ""
        return f"{self.name}{par} {','.join(map(str, self.qubits))}"


def _check_perm(p: tuple[int, ...] | None, n: int, what: str) -> None:
    if p is not None and sorted(p) != list(range(n)):
        raise CircuitError(f"{what} {list(p)} is not a permutation of {n} qubits")


@dataclass
class Circuit:
    """Gates act on physical wires 0..n-1.

    ``initial_layout[l]`` is the wire logical qubit ``l`` starts on and
    ``output_permutation[l]`` the wire it ends on. ``None`` means identity
    and records that the source carried no annotation.
    """

    num_qubits: int
    gates: list[Gate] = field(default_factory=list)
    initial_layout: tuple[int, ...] | None = None
    output_permutation: tuple[int, ...] | None = None
    ancillas: dict[int, int] = field(default_factory=dict)
    qubit_labels: list[str] | None = None

    def __post_init__(self) -> None:
        if self.num_qubits < 0:
            raise CircuitError("negative qubit count")
        if self.initial_layout is not None:
            self.initial_layout = tuple(self.initial_layout)
        if self.output_permutation is not None:
            self.output_permutation = tuple(self.output_permutation)
        _check_perm(self.initial_layout, self.num_qubits, "initial layout")
        _check_perm(self.output_permutation, self.num_qubits, "output permutation")
        for q, s in self.ancillas.items():
            if not 0 <= q < self.num_qubits or s not in (0, 1):
                raise CircuitError(f"bad ancilla entry {q}:{s}")
        if self.qubit_labels is None:
            self.qubit_labels = [f"q{i}" for i in range(self.num_qubits)]
        for g in self.gates:
            if any(not 0 <= q < self.num_qubits for q in g.qubits):
                raise CircuitError(f"gate {g} addresses a qubit outside 0..{self.num_qubits - 1}")

    @property
    def layout(self) -> tuple[int, ...]:
        return self.initial_layout or tuple(range(self.num_qubits))

    @property
    def out_layout(self) -> tuple[int, ...]:
        return self.output_permutation or tuple(range(self.num_qubits))

    def append(self, name: str, *qubits: int, params: tuple[Phase, ...] = ()) -> Circuit:
        self.gates.append(Gate(name, qubits, params))
        return self

    def copy(self, **changes) -> Circuit:
        c = replace(self, gates=list(self.gates), ancillas=dict(self.ancillas),
                    qubit_labels=list(self.qubit_labels or []))
        for k, v in changes.items():
            setattr(c, k, v)
        c.__post_init__()
        return c

    def qubit_index(self, label: str) -> int:
        """Resolve ``a0``, ``a[0]`` or a bare index to a qubit number."""
        norm = label.replace("[", "").replace("]", "")
        labels = self.qubit_labels or []
        if norm in labels:
            return labels.index(norm)
        if norm.isdigit() and int(norm) < self.num_qubits:
            return int(norm)
        raise CircuitError(f"no qubit named {label!r}")


def decompose_gate(g: Gate) -> list[Gate]:
    """Rewrite a composite gate into diagram-ready elementary gates."""
    n = g.name
    if n == "ccx":
        a, b, c = g.qubits
        seq = [("h", c), ("cx", b, c), ("tdg", c), ("cx", a, c), ("t", c),
               ("cx", b, c), ("tdg", c), ("cx", a, c), ("t", b), ("t", c),
               ("h", c), ("cx", a, b), ("t", a), ("tdg", b), ("cx", a, b)]
        return [Gate(s[0], s[1:]) for s in seq]
    if n == "ry":
        q = g.qubits[0]
        return [Gate("sdg", (q,)), Gate("rx", (q,), g.params), Gate("s", (q,))]
    if n == "u3":
        theta, phi, lam = g.params
        q = g.qubits[0]
        return ([Gate("rz", (q,), (lam,))] + decompose_gate(Gate("ry", (q,), (theta,)))
                + [Gate("rz", (q,), (phi,))])
    if n == "u2":
        phi, lam = g.params
        return decompose_gate(Gate("u3", g.qubits, (Phase(Fraction(1, 2)), phi, lam)))
    raise CircuitError(f"{n} is not a composite gate")


def decompose_circuit(c: Circuit) -> Circuit:
    gates: list[Gate] = []
    for g in c.gates:
        if g.name in COMPOSITE_GATES:
            gates.extend(decompose_gate(g))
        else:
            gates.append(g)
    return c.copy(gates=gates)


def reconstruct_swaps(c: Circuit) -> Circuit:
    """Replace each CX(a,b) CX(b,a) CX(a,b) run on an otherwise idle pair by SWAP(a,b)."""
    gates = c.gates
    on_qubit: list[list[int]] = [[] for _ in range(c.num_qubits)]
    for i, g in enumerate(gates):
        if g.name != "barrier":
            for q in g.qubits:
                on_qubit[q].append(i)

    def next_on(i: int, a: int, b: int) -> int | None:
        best = None
        for q in (a, b):
            lst = on_qubit[q]
            j = bisect.bisect_right(lst, i)
            if j < len(lst) and (best is None or lst[j] < best):
                best = lst[j]
        return best

    consumed: set[int] = set()
    out: list[Gate] = []
    for i, g in enumerate(gates):
        if i in consumed:
            continue
        if g.name == "cx":
            a, b = g.qubits
            j = next_on(i, a, b)
            if j is not None and gates[j].name == "cx" and gates[j].qubits == (b, a):
                k = next_on(j, a, b)
                if k is not None and gates[k].name == "cx" and gates[k].qubits == (a, b):
                    consumed.update((j, k))
                    out.append(Gate("swap", (a, b)))
                    continue
        out.append(g)
    return c.copy(gates=out)


def circuit_to_diagram(c: Circuit) -> Diagram:
    """Translate an elementary-gate circuit into a diagram.

    Input ``l`` of the result is logical qubit ``l`` (placed on wire
    ``initial_layout[l]``); output ``w`` is physical wire ``w``.
    """
    n = c.num_qubits
    d = Diagram()
    ins = [d.add_input() for _ in range(n)]
    # frontier[w] = (last vertex on wire w, kind of the pending edge)
    frontier: list[list] = [[0, S] for _ in range(n)]
    for logical, wire in enumerate(c.layout):
        frontier[wire] = [ins[logical], S]

    def attach(w: int, ty, phase: Phase) -> int:
        v = d.add_vertex(ty, phase)
        last, k = frontier[w]
        d.add_edge_smart(last, v, k)
        frontier[w] = [v, S]
        return v

    for g in c.gates:
        name = g.name
        q = g.qubits
        if name in _FIXED_Z:
            attach(q[0], Z, _FIXED_Z[name])
        elif name in ("rz", "u1"):
            attach(q[0], Z, g.params[0])
        elif name == "x":
            attach(q[0], X, Phase(1))
        elif name == "rx":
            attach(q[0], X, g.params[0])
        elif name == "y":
            attach(q[0], Z, Phase(1))
            attach(q[0], X, Phase(1))
        elif name == "h":
            fr = frontier[q[0]]
            fr[1] = H if fr[1] == S else S
        elif name == "cx":
            cv = attach(q[0], Z, Phase(0))
            tv = attach(q[1], X, Phase(0))
            d.add_edge_smart(cv, tv, S)
        elif name == "cz":
            a = attach(q[0], Z, Phase(0))
            b = attach(q[1], Z, Phase(0))
            d.add_edge_smart(a, b, H)
        elif name == "swap":
            frontier[q[0]], frontier[q[1]] = frontier[q[1]], frontier[q[0]]
        elif name == "barrier":
            pass
        else:
            raise CircuitError(f"gate {name} must be decomposed before translation")
    for w in range(n):
        o = d.add_output()
        last, k = frontier[w]
        d.add_edge_smart(last, o, k)
    return d
