"""Shared helpers for the test suite.

``path_sum`` evaluates a diagram by summing over one bit per spider. It shares
no code with the tensor-contraction interpreter in ``zxcheck.oracle`` and is
used as the second, independent route wherever a test pins a matrix.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from pathlib import Path

import numpy as np

from zxcheck.diagram import B, H, S, X, Z, Diagram
from zxcheck.oracle import interpret_diagram, proportional
from zxcheck.phase import Phase

FIXTURES = Path(__file__).parent / "fixtures"
TOL = 1e-9

SQ2 = 1 / math.sqrt(2)
HAD = np.array([[1, 1], [1, -1]], dtype=complex) * SQ2
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def fixture(name: str) -> str:
    return str(FIXTURES / name)


def path_sum(d: Diagram) -> np.ndarray:
    """Sum-over-paths evaluation: rows are outputs, columns inputs, first wire most significant.

    Every Z spider carries one bit shared by all its legs; an X spider is a Z
    spider with a Hadamard on each leg. An edge with an even number of
    Hadamards forces its two bits equal, an odd one contributes
    ``(-1)^(ab)/sqrt 2``.
    """
    verts = d.vertices()
    axis = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    if n > 22:
        raise ValueError("diagram too large for path_sum")
    bits = np.indices((2,) * n).reshape(n, -1) if n else np.zeros((0, 1), dtype=int)
    amp = np.ones(bits.shape[1], dtype=complex)
    for v in verts:
        if d.type(v) != B:
            # a spider with no legs is the scalar 1 + e^{ia}, which the sum over its bit yields
            amp = amp * np.exp(1j * d.phase(v).radians() * bits[axis[v]])
    nx = lambda v: 1 if d.type(v) == X else 0
    seen = set()
    for v in verts:
        for w, k in d.incident(v).items():
            key = (min(v, w), max(v, w))
            if key in seen:
                continue
            seen.add(key)
            had = (k == H) + nx(v) + nx(w) + (nx(v) if v == w else 0)
            a, b = bits[axis[v]], bits[axis[w]]
            if had % 2 == 0:
                amp = amp * (a == b)
            else:
                amp = amp * np.where(a & b, -1.0, 1.0) * SQ2
    t = amp.reshape((2,) * n) if n else amp.reshape(())
    spiders = [axis[v] for v in verts if d.type(v) != B]
    # a spider leg on a boundary ties the boundary bit to the spider bit already;
    # summing the spider axes leaves a tensor over boundary bits
    t = t.sum(axis=tuple(spiders)) if spiders else t
    rest = [v for v in verts if d.type(v) == B]
    order = [rest.index(b) for b in d.outputs + d.inputs]
    t = np.transpose(t, order) if order else t
    return np.asarray(t).reshape(2 ** len(d.outputs), 2 ** len(d.inputs))


def assert_prop(a: np.ndarray, b: np.ndarray, tol: float = TOL) -> None:
    assert proportional(a, b, tol), f"not proportional:\n{np.round(a, 4)}\nvs\n{np.round(b, 4)}"


def assert_same_map(before: np.ndarray, d: Diagram, tol: float = TOL) -> None:
    assert_prop(before, interpret_diagram(d), tol)


# ---------------------------------------------------------------- random instances

PHASE_CHOICES = [Fraction(k, 4) for k in range(8)]


def rand_phase(rng: random.Random, clifford_only: bool = False, generic: float = 0.15) -> Phase:
    if not clifford_only and rng.random() < generic:
        return Phase(0, rng.uniform(-3.0, 3.0))
    if clifford_only:
        return Phase(Fraction(rng.randrange(4), 2))
    return Phase(rng.choice(PHASE_CHOICES))


def rand_graph_like(rng: random.Random, n_spiders: int, n_in: int, n_out: int,
                    p_edge: float = 0.45, clifford_only: bool = False) -> Diagram:
    """Random graph-like diagram: Z spiders, H edges inside, one simple boundary leg per spider."""
    d = Diagram()
    sp = [d.add_vertex(Z, rand_phase(rng, clifford_only)) for _ in range(n_spiders)]
    for i in range(n_spiders):
        for j in range(i + 1, n_spiders):
            if rng.random() < p_edge:
                d.connect(sp[i], sp[j], H)
    hosts = rng.sample(sp, min(n_spiders, n_in + n_out))
    for idx, host in enumerate(hosts):
        b = d.add_input() if idx < n_in else d.add_output()
        d.connect(b, host, S)
    return d


def rand_mixed(rng: random.Random, n_spiders: int, n_in: int, n_out: int, p_edge: float = 0.4) -> Diagram:
    """Random diagram with Z and X spiders and both edge kinds."""
    d = Diagram()
    sp = [d.add_vertex(rng.choice((Z, X)), rand_phase(rng)) for _ in range(n_spiders)]
    for i in range(n_spiders):
        for j in range(i + 1, n_spiders):
            if rng.random() < p_edge:
                d.connect(sp[i], sp[j], rng.choice((S, H)))
    for idx in range(n_in + n_out):
        b = d.add_input() if idx < n_in else d.add_output()
        d.connect(b, rng.choice(sp), rng.choice((S, H)))
    return d


def io_split(rng: random.Random, max_total: int = 6) -> tuple[int, int]:
    total = rng.randint(1, max_total)
    n_in = rng.randint(0, total)
    return n_in, total - n_in
