"""Dense-matrix semantics for diagrams and circuits."""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import Circuit, Gate
from .diagram import B, H, X, Diagram

MAX_TENSOR_RANK = 26
MAX_CIRCUIT_QUBITS = 12

_HAD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


class OracleError(RuntimeError):
    pass


class IsometryWarning(UserWarning):
    pass


# ---------------------------------------------------------------- diagrams

def _spider_tensor(kind, alpha: float, degree: int) -> np.ndarray:
    e = cmath.exp(1j * alpha)
    if degree == 0:
        return np.array(1 + e, dtype=complex)
    if kind == X:
        # |+..+> + e^{ia}|-..->, entries depend on the parity of the index
        parity = np.indices((2,) * degree).sum(axis=0) % 2
        return ((1 + e * (1 - 2 * parity)) / math.sqrt(2) ** degree).astype(complex)
    t = np.zeros((2,) * degree, dtype=complex)
    t[(0,) * degree] = 1
    t[(1,) * degree] += e
    return t


def interpret_diagram(d: Diagram) -> np.ndarray:
    """Linear map of ``d`` with rows indexed by outputs and columns by inputs.

    The spider tensors are contracted exactly; no scalar is dropped. The first
    boundary in each list is the most significant bit.
    """
    n_open = len(d.inputs) + len(d.outputs)
    if n_open > 24:
        raise OracleError(f"{n_open} open wires exceed the dense budget")
    tensors: list[np.ndarray] = []
    labels: list[list] = []
    edge_label: dict[tuple[int, int], int] = {}
    for i, (u, v, k) in enumerate(d.edges()):
        edge_label[(u, v)] = edge_label[(v, u)] = i
    open_label = {b: ("open", b) for b in d.inputs + d.outputs}

    for v in d.vertices():
        nb = sorted(d.incident(v).items())
        if d.type(v) == B:
            (w, k), = nb
            if d.type(w) != B or v > w:
                continue
            # bare wire between two boundaries
            mat = np.eye(2, dtype=complex) if k != H else _HAD.copy()
            tensors.append(mat)
            labels.append([open_label[v], open_label[w]])
            continue
        t = _spider_tensor(d.type(v), d.phase(v).radians(), len(nb))
        lab = []
        for axis, (w, k) in enumerate(nb):
            lab.append(open_label[w] if d.type(w) == B else edge_label[(v, w)])
            # each Hadamard edge is absorbed by its lower-id spider end,
            # or by the spider when the other end is a boundary
            if k == H and (d.type(w) == B or v < w):
                t = np.moveaxis(np.tensordot(t, _HAD, axes=([axis], [0])), -1, axis)
        tensors.append(t)
        labels.append(lab)

    t, lab = _contract_all(tensors, labels)
    order = [lab.index(open_label[b]) for b in d.outputs + d.inputs]
    t = np.transpose(t, order) if order else t
    return np.asarray(t).reshape(2 ** len(d.outputs), 2 ** len(d.inputs))


def _contract_all(tensors: list[np.ndarray], labels: list[list]):
    """Greedy pairwise contraction: always merge the connected pair with the smallest result."""
    alive = dict(enumerate(zip(tensors, labels)))
    next_id = len(tensors)
    while True:
        owners: dict = {}
        for tid, (_, lab) in alive.items():
            for x in lab:
                owners.setdefault(x, []).append(tid)
        best = None
        seen = set()
        for x, ts in owners.items():
            if len(ts) != 2:
                continue
            a, b = sorted(ts)
            if (a, b) in seen:
                continue
            seen.add((a, b))
            la, lb = alive[a][1], alive[b][1]
            shared = set(la) & set(lb)
            rank = len(la) + len(lb) - 2 * len(shared)
            key = (rank, a, b)
            if best is None or key < best:
                best = key
        if best is None:
            break
        rank, a, b = best
        if rank > MAX_TENSOR_RANK:
            raise OracleError(f"contraction would need a rank-{rank} tensor")
        ta, la = alive.pop(a)
        tb, lb = alive.pop(b)
        shared = [x for x in la if x in lb]
        t = np.tensordot(ta, tb, axes=([la.index(x) for x in shared], [lb.index(x) for x in shared]))
        lab = [x for x in la if x not in shared] + [x for x in lb if x not in shared]
        alive[next_id] = (t, lab)
        next_id += 1
    # disconnected pieces: outer products, in creation order
    result = np.array(1, dtype=complex)
    lab: list = []
    for tid in sorted(alive):
        t, l2 = alive[tid]
        if len(lab) + len(l2) > MAX_TENSOR_RANK:
            raise OracleError("result exceeds the dense budget")
        result = np.tensordot(result, t, axes=0)
        lab = lab + list(l2)
    return result, lab


# ---------------------------------------------------------------- circuits

def _rz(t: float) -> np.ndarray:
    return np.diag([cmath.exp(-0.5j * t), cmath.exp(0.5j * t)])


def _rx(t: float) -> np.ndarray:
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _ry(t: float) -> np.ndarray:
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _u3(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -cmath.exp(1j * lam) * s],
                     [cmath.exp(1j * phi) * s, cmath.exp(1j * (phi + lam)) * c]], dtype=complex)


def _controlled(m: np.ndarray, controls: int = 1) -> np.ndarray:
    dim = 2 ** (controls + 1)
    out = np.eye(dim, dtype=complex)
    out[dim - 2:, dim - 2:] = m
    return out


_FIXED: dict[str, np.ndarray] = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.diag([1, -1]).astype(complex),
    "h": _HAD,
    "s": np.diag([1, 1j]),
    "sdg": np.diag([1, -1j]),
    "t": np.diag([1, cmath.exp(0.25j * math.pi)]),
    "tdg": np.diag([1, cmath.exp(-0.25j * math.pi)]),
    "swap": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
}
_FIXED["cx"] = _controlled(_FIXED["x"])
_FIXED["cz"] = _controlled(_FIXED["z"])
_FIXED["ccx"] = _controlled(_FIXED["x"], 2)


def gate_matrix(g: Gate) -> np.ndarray:
    """Matrix of ``g`` on its own qubits, first listed qubit most significant."""
    if g.name in _FIXED:
        return _FIXED[g.name]
    p = [x.radians() for x in g.params]
    if g.name == "rz":
        return _rz(p[0])
    if g.name == "rx":
        return _rx(p[0])
    if g.name == "ry":
        return _ry(p[0])
    if g.name == "u1":
        return np.diag([1, cmath.exp(1j * p[0])])
    if g.name == "u2":
        return _u3(math.pi / 2, p[0], p[1])
    if g.name == "u3":
        return _u3(p[0], p[1], p[2])
    raise OracleError(f"no matrix for {g.name}")


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Unitary from logical inputs (placed by the initial layout) to physical output wires."""
    n = c.num_qubits
    if n > MAX_CIRCUIT_QUBITS:
        raise OracleError(f"{n} qubits exceed the oracle limit of {MAX_CIRCUIT_QUBITS}")
    dim = 2 ** n
    state = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for g in c.gates:
        if g.name == "barrier":
            continue
        k = len(g.qubits)
        m = gate_matrix(g).reshape((2,) * (2 * k))
        state = np.tensordot(m, state, axes=(list(range(k, 2 * k)), list(g.qubits)))
        state = np.moveaxis(state, list(range(k)), list(g.qubits))
    u = state.reshape((2,) * (2 * n))
    order = list(range(n)) + [n + w for w in c.layout]
    return np.ascontiguousarray(np.transpose(u, order)).reshape(dim, dim)


# ---------------------------------------------------------------- comparisons

def _nqubits(dim: int) -> int:
    n = dim.bit_length() - 1
    if 1 << n != dim:
        raise OracleError(f"dimension {dim} is not a power of two")
    return n


def fix_ancilla(u: np.ndarray, qubit: int, state: int, output_qubit: int | None = None) -> np.ndarray:
    """Restrict ``u`` to ``|state>`` on input ``qubit`` and ``<state|`` on output ``output_qubit``.

    ``output_qubit`` defaults to ``qubit``.
    """
    oq = qubit if output_qubit is None else output_qubit
    return fix_ancillas(u, {qubit: state}, {oq: state})


def fix_ancillas(u: np.ndarray, in_fix: dict[int, int], out_fix: dict[int, int]) -> np.ndarray:
    """Sum of <y,s|u|x,s> |y><x| over the fixed input and output qubits."""
    m, k = _nqubits(u.shape[0]), _nqubits(u.shape[1])
    for fixes, width in ((out_fix, m), (in_fix, k)):
        for q, s in fixes.items():
            if not 0 <= q < width:
                raise OracleError(f"ancilla index {q} out of range for {width} qubits")
            if s not in (0, 1):
                raise OracleError("ancilla state must be 0 or 1")
    t = u.reshape((2,) * (m + k))
    axes = sorted([(m + q, s) for q, s in in_fix.items()] + list(out_fix.items()), reverse=True)
    for axis, s in axes:
        t = np.take(t, s, axis=axis)
    r = t.reshape(2 ** (m - len(out_fix)), 2 ** (k - len(in_fix)))
    norms = np.linalg.norm(r, axis=0)
    if r.size and np.max(np.abs(norms - 1)) > 1e-9:
        warnings.warn("fixing the ancilla leaves a non-isometric data map "
                      f"(column norms in [{norms.min():.3g}, {norms.max():.3g}])",
                      IsometryWarning, stacklevel=2)
    return r


@dataclass(frozen=True)
class HSResult:
    equal_up_to_phase: bool
    fidelity: float


def hs_check(u: np.ndarray, v: np.ndarray, tau: float = 1e-9) -> HSResult:
    """Hilbert-Schmidt fidelity ``|tr(u^dagger v)| / dim``."""
    if u.shape != v.shape:
        raise OracleError(f"shape mismatch {u.shape} vs {v.shape}")
    dim = u.shape[1] if u.ndim == 2 else 1
    f = abs(np.vdot(u, v)) / dim if dim else 1.0
    return HSResult(bool(f >= 1 - tau), float(f))


def permute_outputs(u: np.ndarray, perm: Sequence[int]) -> np.ndarray:
    """Move output qubit ``j`` of ``u`` to position ``perm[j]``."""
    m = _nqubits(u.shape[0])
    k = u.shape[1]
    t = u.reshape((2,) * m + (k,))
    src = [0] * m
    for j, p in enumerate(perm):
        src[p] = j
    return np.ascontiguousarray(np.transpose(t, src + [m])).reshape(u.shape)


def derive_permutation(va: np.ndarray, vb: np.ndarray, tol: float = 1e-6) -> list[int] | None:
    """Qubit permutation p with ``vb ~ P_p va`` read off basis images, or None."""
    n = _nqubits(va.shape[0])
    if va.shape != vb.shape or va.shape[0] != va.shape[1]:
        return None
    mcols = vb @ va.conj().T
    def image(col: np.ndarray) -> int | None:
        i = int(np.argmax(np.abs(col)))
        return i if abs(abs(col[i]) - 1) < tol else None
    if image(mcols[:, 0]) != 0:
        return None
    perm = []
    for j in range(n):
        img = image(mcols[:, 1 << (n - 1 - j)])
        if img is None or img == 0 or img & (img - 1):
            return None
        perm.append(n - 1 - (img.bit_length() - 1))
    return perm if sorted(perm) == list(range(n)) else None


@dataclass(frozen=True)
class OracleResult:
    equal: bool
    permutation: list[int]
    fidelity: float
    witness: dict | None


def compare(va: np.ndarray, vb: np.ndarray, perm: Sequence[int] | None, tau: float = 1e-9) -> OracleResult:
    """Decide ``vb = e^{i theta} P va``. ``perm=None`` searches for the permutation."""
    n = _nqubits(va.shape[0]) if va.size else 0
    if va.shape != vb.shape:
        raise OracleError(f"shape mismatch {va.shape} vs {vb.shape}")
    if perm is None:
        perm = derive_permutation(va, vb) or list(range(n))
    pa = permute_outputs(va, perm) if n else va
    hs = hs_check(pa, vb, tau)
    witness = None
    if not hs.equal_up_to_phase:
        witness = _witness(pa, vb, n)
    return OracleResult(hs.equal_up_to_phase, list(perm), hs.fidelity, witness)


def _witness(pa: np.ndarray, vb: np.ndarray, n_out: int) -> dict:
    k = _nqubits(pa.shape[1])
    tr = np.vdot(pa, vb)
    phase = tr / abs(tr) if abs(tr) > 1e-12 else 1.0
    dev = np.linalg.norm(vb - phase * pa, axis=0)
    x = int(np.argmax(dev))
    ref = int(np.argmin(dev))
    bits = lambda i: format(i, f"0{k}b") if k else ""
    return {
        "input": bits(x),
        "reference_input": bits(ref),
        "deviation": float(dev[x]),
        "expected_column": [complex(z) for z in np.round(phase * pa[:, x], 12)],
        "actual_column": [complex(z) for z in np.round(vb[:, x], 12)],
    }


def format_matrix(m: np.ndarray, digits: int = 3) -> str:
    """Aligned complex grid for debugging."""
    cells = [[f"{z.real:+.{digits}f}{z.imag:+.{digits}f}j" for z in row] for row in np.asarray(m)]
    return "\n".join(" ".join(row) for row in cells)


def proportional(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    """True when ``b = c a`` for a nonzero scalar c. Both are scaled by the entry where ``a`` peaks."""
    if a.shape != b.shape:
        return False
    ma = np.max(np.abs(a)) if a.size else 0.0
    mb = np.max(np.abs(b)) if b.size else 0.0
    if ma < 1e-12 or mb < 1e-12:
        return ma < 1e-12 and mb < 1e-12
    idx = np.unravel_index(int(np.argmax(np.abs(a))), a.shape)
    if abs(b[idx]) < 1e-12 * mb:
        return False
    return bool(np.max(np.abs(a / a[idx] - b / b[idx])) <= tol)
