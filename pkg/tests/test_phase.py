import math
from fractions import Fraction

import pytest

from zxcheck.phase import HALF_PI, PI, ZERO, Phase


def test_exact_part_wraps_modulo_two():
    assert Phase(Fraction(9, 4)).exact == Fraction(1, 4)
    assert Phase(Fraction(-1, 4)).exact == Fraction(7, 4)
    assert Phase(2) == ZERO


def test_residual_wraps_into_half_open_interval():
    p = Phase(0, 3 * math.pi / 2)
    assert p.residual == pytest.approx(-math.pi / 2)
    assert Phase(0, math.pi).residual == pytest.approx(math.pi)
    assert Phase(0, -math.pi).residual == pytest.approx(math.pi)


@pytest.mark.parametrize("exact, clifford, pauli, proper", [
    (0, True, True, False),
    (Fraction(1, 2), True, False, True),
    (1, True, True, False),
    (Fraction(3, 2), True, False, True),
    (Fraction(1, 4), False, False, False),
])
def test_classification(exact, clifford, pauli, proper):
    p = Phase(exact)
    assert (p.is_clifford, p.is_pauli, p.is_proper_clifford) == (clifford, pauli, proper)


def test_any_residual_breaks_clifford_status():
    p = Phase(0, 1e-15)
    assert not p.is_zero and not p.is_clifford and not p.is_pauli


def test_arithmetic_stays_exact():
    assert Phase(Fraction(1, 4)) + Phase(Fraction(1, 4)) == HALF_PI
    assert -Phase(Fraction(1, 4)) == Phase(Fraction(7, 4))
    assert PI + PI == ZERO
    assert (Phase(Fraction(1, 4), 1e-15) - Phase(Fraction(1, 4))).residual == 1e-15


def test_radians():
    assert Phase(Fraction(3, 4)).radians() == pytest.approx(3 * math.pi / 4)
    assert Phase(1, 0.5).radians() == pytest.approx(math.pi + 0.5)


@pytest.mark.parametrize("p, text", [
    (ZERO, "0"), (PI, "pi"), (Phase(Fraction(1, 4)), "pi/4"),
    (Phase(Fraction(3, 4)), "3*pi/4"), (Phase(0, 1e-15), "1e-15"),
    (Phase(Fraction(1, 4), 1e-15), "pi/4+1e-15"), (Phase(Fraction(1, 4), -2e-3), "pi/4-0.002"),
])
def test_string_forms(p, text):
    assert str(p) == text


def test_dict_round_trip():
    p = Phase(Fraction(5, 4), -3e-12)
    assert Phase.from_dict(p.to_dict()) == p
    assert p.to_dict() == {"num": 5, "den": 4, "residual": -3e-12}


def test_hash_matches_equality():
    assert len({Phase(Fraction(1, 2)), HALF_PI, Phase(Fraction(5, 2))}) == 1
