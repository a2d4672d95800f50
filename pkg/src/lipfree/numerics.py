"""Dual-mode arithmetic: exact rationals or tolerance-gated 64-bit floats.

Every order/equality decision in the library is routed through a
:class:`Comparator` so that certification runs (exact mode) are bit-exact
while float runs use a single absolute tolerance.  Exact mode represents
all quantities as :class:`fractions.Fraction`; float inputs are read with
decimal-literal semantics (``0.1`` means ``1/10``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Union

Number = Union[int, float, Fraction]

DEFAULT_TOLERANCE = 1e-9
#: Spaces up to this many points run in exact mode unless told otherwise.
EXACT_SIZE_LIMIT = 64


def coerce(value: Number, exact: bool) -> Number:
    """Normalize one number for the requested arithmetic mode."""
    if exact:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int) and not isinstance(value, bool):
            return Fraction(value)
        if isinstance(value, float):
            if not math.isfinite(value):
                raise ValueError(f"non-finite value {value!r} in exact mode")
            return Fraction(Decimal(str(value)))
        raise TypeError(f"cannot use {type(value).__name__} in exact mode")
    return float(value)


@dataclass(frozen=True)
class Comparator:
    """Single point of truth for numeric comparisons.

    ``tol`` is an absolute tolerance and is ignored in exact mode.
    """

    exact: bool = True
    tol: float = DEFAULT_TOLERANCE

    def eq(self, a: Number, b: Number = 0) -> bool:
        if self.exact:
            return a == b
        return abs(a - b) <= self.tol

    def ne(self, a: Number, b: Number = 0) -> bool:
        return not self.eq(a, b)

    def le(self, a: Number, b: Number = 0) -> bool:
        if self.exact:
            return a <= b
        return a <= b + self.tol

    def ge(self, a: Number, b: Number = 0) -> bool:
        return self.le(b, a)

    def lt(self, a: Number, b: Number = 0) -> bool:
        return not self.le(b, a)

    def gt(self, a: Number, b: Number = 0) -> bool:
        return not self.le(a, b)

    def is_zero(self, a: Number) -> bool:
        return self.eq(a, 0)


def round12(x: Number) -> float:
    """Round to 12 significant digits (the fixed CLI output precision)."""
    return float(f"{float(x):.12g}")


def exact_repr(x: Number) -> str:
    """Lossless string form of a rational, e.g. ``'3/4'`` or ``'2'``."""
    f = Fraction(x) if not isinstance(x, Fraction) else x
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
