"""Spider phases: an exact rational multiple of pi plus a floating residual."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

_TWO_PI = 2.0 * math.pi

Rational = Union[int, Fraction]


def _wrap_residual(x: float) -> float:
    """Map x into (-pi, pi]."""
    if -math.pi < x <= math.pi:
        return x
    x = math.fmod(x, _TWO_PI)
    if x > math.pi:
        x -= _TWO_PI
    elif x <= -math.pi:
        x += _TWO_PI
    return x


class Phase:
    """Angle ``exact * pi + residual``.

    ``exact`` is kept in [0, 2) and ``residual`` in (-pi, pi]. Only the exact
    part participates in Clifford/Pauli classification, so a phase with any
    nonzero residual is never Clifford.
    """

    __slots__ = ("exact", "residual")

    exact: Fraction
    residual: float

    def __init__(self, exact: Rational = 0, residual: float = 0.0) -> None:
        e = Fraction(exact)
        if not 0 <= e < 2:
            e %= 2
        self.exact = e
        self.residual = _wrap_residual(float(residual)) if residual else 0.0

    @classmethod
    def from_radians(cls, angle: float) -> Phase:
        return cls(0, angle)

    @property
    def is_zero(self) -> bool:
        return self.exact == 0 and self.residual == 0.0

    @property
    def is_clifford(self) -> bool:
        return self.residual == 0.0 and self.exact.denominator <= 2

    @property
    def is_pauli(self) -> bool:
        return self.residual == 0.0 and self.exact.denominator == 1

    @property
    def is_proper_clifford(self) -> bool:
        return self.residual == 0.0 and self.exact.denominator == 2

    def radians(self) -> float:
        return float(self.exact) * math.pi + self.residual

    def __add__(self, other: Phase) -> Phase:
        if not isinstance(other, Phase):
            return NotImplemented
        if other.residual == 0.0 and self.residual == 0.0:
            return Phase(self.exact + other.exact)
        return Phase(self.exact + other.exact, self.residual + other.residual)

    def __sub__(self, other: Phase) -> Phase:
        if not isinstance(other, Phase):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> Phase:
        return Phase(-self.exact, -self.residual)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Phase):
            return NotImplemented
        return self.exact == other.exact and self.residual == other.residual

    def __hash__(self) -> int:
        return hash((self.exact, self.residual))

    def __repr__(self) -> str:
        if self.residual:
            return f"Phase({self.exact}, {self.residual!r})"
        return f"Phase({self.exact})"

    def __str__(self) -> str:
        if not self.residual:
            return _pi_str(self.exact)
        if self.exact == 0:
            return repr(self.residual)
        sign = "-" if self.residual < 0 else "+"
        return f"{_pi_str(self.exact)}{sign}{abs(self.residual)!r}"

    def to_qasm(self) -> str:
        """Angle expression parseable back into an identical phase."""
        return str(self)

    def to_dict(self) -> dict:
        return {"num": self.exact.numerator, "den": self.exact.denominator, "residual": self.residual}

    @classmethod
    def from_dict(cls, data: dict) -> Phase:
        return cls(Fraction(int(data.get("num", 0)), int(data.get("den", 1))), float(data.get("residual", 0.0)))


def _pi_str(e: Fraction) -> str:
    if e == 0:
        return "0"
    num, den = e.numerator, e.denominator
    head = "pi" if num == 1 else f"{num}*pi"
    return head if den == 1 else f"{head}/{den}"


ZERO = Phase(0)
PI = Phase(1)
HALF_PI = Phase(Fraction(1, 2))
