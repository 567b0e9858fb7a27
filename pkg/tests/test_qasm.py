import math
import warnings
from fractions import Fraction

import pytest

from support import fixture
from zxcheck.circuit import Gate
from zxcheck.phase import Phase
from zxcheck.qasm import QasmError, QasmWarning, load_qasm, parse_qasm, to_qasm

HEAD = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'


def parse(body: str):
    return parse_qasm(HEAD + body)


def test_ghz_program():
    c = load_qasm(fixture("ghz.qasm"))
    assert c.num_qubits == 3
    assert [g.name for g in c.gates] == ["h", "cx", "cx"]
    assert c.gates[2].qubits == (0, 2)
    assert c.initial_layout is None and c.output_permutation is None


def test_empty_body():
    c = parse("qreg q[5];\n")
    assert c.num_qubits == 5 and c.gates == []


def test_output_permutation_comment():
    c = load_qasm(fixture("ghz_mapped.qasm"))
    assert c.output_permutation == (0, 2, 1)
    assert c.initial_layout is None


def test_initial_layout_comment():
    c = parse("// i 1 0\n// o 0 1\nqreg q[2];\ncx q[0],q[1];\n")
    assert c.initial_layout == (1, 0) and c.output_permutation == (0, 1)


def test_layout_must_be_a_permutation():
    with pytest.raises(QasmError) as exc:
        parse("// o 0 0 1\nqreg q[3];\n")
    assert "permutation" in str(exc.value) and exc.value.line == 3


def test_registers_concatenate_with_labels():
    c = parse("qreg q[2];\nqreg a[1];\ncx q[1],a[0];\n")
    assert c.num_qubits == 3
    assert c.qubit_labels == ["q0", "q1", "a0"]
    assert c.gates[0].qubits == (1, 2)
    assert c.qubit_index("a[0]") == 2 and c.qubit_index("a0") == 2


def test_exact_and_inexact_angles():
    c = parse("qreg q[1];\nrz(pi/4) q[0];\nrz(-3*pi/2) q[0];\nrz(pi/4 + 1e-15) q[0];\nrz(0.5) q[0];\n")
    ps = [g.params[0] for g in c.gates]
    assert ps[0] == Phase(Fraction(1, 4))
    assert ps[1] == Phase(Fraction(1, 2))
    assert ps[2].exact == Fraction(1, 4) and ps[2].residual == 1e-15
    assert ps[3].radians() == pytest.approx(0.5)


def test_functions_fall_back_to_floats():
    c = parse("qreg q[1];\nrz(sin(pi/6)) q[0];\nu1(sqrt(2)*pi) q[0];\n")
    assert c.gates[0].params[0].radians() == pytest.approx(0.5)
    assert c.gates[1].params[0].radians() == pytest.approx(math.sqrt(2) * math.pi - 2 * math.pi)


def test_aliases_and_noops():
    c = parse("qreg q[2];\nCX q[0],q[1];\nU(0,0,pi) q[0];\nid q[1];\np(pi) q[1];\n")
    assert [g.name for g in c.gates] == ["cx", "u3", "u1"]


def test_gate_definition_expands_with_parameters():
    c = parse("gate myrot(a) x { rz(a/2) x; h x; }\nqreg q[1];\nmyrot(pi) q[0];\n")
    assert c.gates == [Gate("rz", (0,), (Phase(Fraction(1, 2)),)), Gate("h", (0,))]


def test_nested_definitions():
    c = parse("gate a x { h x; }\ngate b x, y { a x; cx x, y; }\nqreg q[2];\nb q[1], q[0];\n")
    assert c.gates == [Gate("h", (1,)), Gate("cx", (1, 0))]


def test_register_broadcast():
    c = parse("qreg q[3];\nqreg r[3];\nh q;\ncx q, r;\n")
    assert [g.qubits for g in c.gates] == [(0,), (1,), (2,), (0, 3), (1, 4), (2, 5)]


def test_barrier_recorded():
    c = parse("qreg q[2];\nh q[0];\nbarrier q;\nh q[0];\n")
    assert c.gates[1] == Gate("barrier", (0, 1))


def test_trailing_measurements_are_dropped_with_a_warning():
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        c = parse("qreg q[2];\ncreg c[2];\nh q[0];\nmeasure q -> c;\n")
    assert [g.name for g in c.gates] == ["h"]
    assert any(issubclass(w.category, QasmWarning) for w in rec)


@pytest.mark.parametrize("body, line, col, fragment", [
    ("qreg q[1];\nfoo q[0];\n", 4, 1, "unsupported gate"),
    ("qreg q[1];\nh r[0];\n", 4, 3, "unknown quantum register"),
    ("qreg q[1];\nh q[1];\n", 4, 5, "out of range"),
    ("qreg q[1];\ncreg c[1];\nmeasure q[0] -> c[0];\nh q[0];\n", 6, 1, "after a measurement"),
    ("qreg q[1];\ncreg c[1];\nif(c==1) x q[0];\n", 5, 1, "classical control"),
    ("qreg q[1];\nreset q[0];\n", 4, 1, "reset"),
    ("opaque g q;\n", 3, 1, "opaque"),
    ("qreg q[1];\nh q[0]\n", 5, 1, "';'"),
    ("qreg q[1];\nqreg q[2];\n", 4, 6, "redeclared"),
    ("qreg q[2];\ncx q[0];\n", 4, 1, ""),
])
def test_errors_carry_positions(body, line, col, fragment):
    with pytest.raises(QasmError) as exc:
        parse(body)
    assert (exc.value.line, exc.value.col) == (line, col)
    assert fragment in str(exc.value)
    assert str(exc.value).startswith(f"line {line}, col {col}:")


def test_unsupported_header_and_include():
    with pytest.raises(QasmError):
        parse_qasm("OPENQASM 3.0;\nqreg q[1];\n")
    with pytest.raises(QasmError):
        parse_qasm('OPENQASM 2.0;\ninclude "other.inc";\n')


def test_round_trip_through_text():
    src = parse("// i 2 0 1\n// o 1 2 0\nqreg q[3];\nh q[0];\nrz(3*pi/4+1e-15) q[1];\n"
                "u3(pi/2,0,pi) q[2];\ncx q[2],q[0];\nswap q[0],q[1];\n")
    again = parse_qasm(to_qasm(src))
    assert again.gates == src.gates
    assert again.initial_layout == src.initial_layout
    assert again.output_permutation == src.output_permutation
