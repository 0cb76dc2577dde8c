"""Quantity strings with units, parsed into canonical SI values.

Everything inside the package works in bits, seconds, joules, watts, FLOP and
FLOP/s. Configuration files and CLI arguments carry human units ("85 kB",
"45 min", "20 pJ/FLOP"); this module is the single place where they are
converted. Byte prefixes are decimal (1 kB = 8000 bits).

Conversion goes through :class:`fractions.Fraction` so the canonical float is
the correctly rounded value of the exact product (``"20 pJ/FLOP"`` gives
exactly ``2e-11``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction


class Dimension(str, Enum):
    BITS = "bits"
    BIT_RATE = "bit/s"
    SECONDS = "seconds"
    JOULES = "joules"
    WATTS = "watts"
    FLOP = "flop"
    FLOP_RATE = "flop/s"
    JOULES_PER_FLOP = "joules-per-flop"
    HERTZ = "hertz"
    DIMENSIONLESS = "dimensionless"


class QuantityError(ValueError):
    """Raised for malformed quantity strings or dimension mismatches."""


# unit -> (exact factor to canonical, dimension)
UNITS: dict[str, tuple[Fraction, Dimension]] = {
    "b": (Fraction(1), Dimension.BITS),
    "bit": (Fraction(1), Dimension.BITS),
    "kbit": (Fraction(10**3), Dimension.BITS),
    "Mbit": (Fraction(10**6), Dimension.BITS),
    "Gbit": (Fraction(10**9), Dimension.BITS),
    "B": (Fraction(8), Dimension.BITS),
    "kB": (Fraction(8 * 10**3), Dimension.BITS),
    "MB": (Fraction(8 * 10**6), Dimension.BITS),
    "GB": (Fraction(8 * 10**9), Dimension.BITS),
    "bit/s": (Fraction(1), Dimension.BIT_RATE),
    "kbit/s": (Fraction(10**3), Dimension.BIT_RATE),
    "Mbit/s": (Fraction(10**6), Dimension.BIT_RATE),
    "Gbit/s": (Fraction(10**9), Dimension.BIT_RATE),
    "FLOP": (Fraction(1), Dimension.FLOP),
    "GFLOP": (Fraction(10**9), Dimension.FLOP),
    "TFLOP": (Fraction(10**12), Dimension.FLOP),
    "FLOPS": (Fraction(1), Dimension.FLOP_RATE),
    "GFLOPS": (Fraction(10**9), Dimension.FLOP_RATE),
    "TFLOPS": (Fraction(10**12), Dimension.FLOP_RATE),
    "PFLOPS": (Fraction(10**15), Dimension.FLOP_RATE),
    "J/FLOP": (Fraction(1), Dimension.JOULES_PER_FLOP),
    "pJ/FLOP": (Fraction(1, 10**12), Dimension.JOULES_PER_FLOP),
    "J": (Fraction(1), Dimension.JOULES),
    "W": (Fraction(1), Dimension.WATTS),
    "s": (Fraction(1), Dimension.SECONDS),
    "ms": (Fraction(1, 1000), Dimension.SECONDS),
    "min": (Fraction(60), Dimension.SECONDS),
    "h": (Fraction(3600), Dimension.SECONDS),
    "Hz": (Fraction(1), Dimension.HERTZ),
    "MHz": (Fraction(10**6), Dimension.HERTZ),
    "GHz": (Fraction(10**9), Dimension.HERTZ),
    "": (Fraction(1), Dimension.DIMENSIONLESS),
}

CANONICAL_UNIT: dict[Dimension, str] = {
    Dimension.BITS: "bit",
    Dimension.BIT_RATE: "bit/s",
    Dimension.SECONDS: "s",
    Dimension.JOULES: "J",
    Dimension.WATTS: "W",
    Dimension.FLOP: "FLOP",
    Dimension.FLOP_RATE: "FLOPS",
    Dimension.JOULES_PER_FLOP: "J/FLOP",
    Dimension.HERTZ: "Hz",
    Dimension.DIMENSIONLESS: "",
}


@dataclass(frozen=True)
class Quantity:
    value: float
    dimension: Dimension

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise QuantityError(f"non-finite value {self.value!r}")
        if self.value < 0:
            raise QuantityError(f"negative value {self.value!r}")

    def __float__(self) -> float:
        return self.value

    def __str__(self) -> str:
        return format_quantity(self)


def parse_quantity(text: str, expect: Dimension | None = None) -> Quantity:
    """Parse ``"<number> <unit>"`` into a canonical :class:`Quantity`.

    A bare number parses as dimensionless. When *expect* is given the parsed
    dimension must match it.
    """
    parts = str(text).split()
    if len(parts) not in (1, 2):
        raise QuantityError(f"cannot parse quantity {text!r}")
    num, unit = parts[0], parts[1] if len(parts) == 2 else ""
    if unit not in UNITS:
        raise QuantityError(f"unknown unit {unit!r} in {text!r}")
    try:
        exact = Fraction(num)
    except (ValueError, ZeroDivisionError):
        # Fraction rejects inf/nan; float() tells us which it was
        try:
            float(num)
        except ValueError:
            raise QuantityError(f"invalid number {num!r} in {text!r}") from None
        raise QuantityError(f"non-finite value {num!r} in {text!r}") from None
    if exact < 0:
        raise QuantityError(f"negative value {num!r} in {text!r}")
    factor, dim = UNITS[unit]
    if expect is not None and dim is not expect:
        raise QuantityError(
            f"unit {unit!r} in {text!r} is {dim.value}, expected {expect.value}"
        )
    try:
        value = float(exact * factor)
    except OverflowError:
        value = math.inf
    if not math.isfinite(value):
        raise QuantityError(f"value {num!r} in {text!r} overflows")
    return Quantity(value, dim)


def format_quantity(q: Quantity, unit: str | None = None) -> str:
    """Render *q* in *unit* (default: the canonical unit).

    Uses the shortest decimal that :func:`parse_quantity` reads back to the
    identical canonical value, so formatting never loses precision.
    """
    if unit is None:
        unit = CANONICAL_UNIT[q.dimension]
    try:
        factor, dim = UNITS[unit]
    except KeyError:
        raise QuantityError(f"unknown unit {unit!r}") from None
    if dim is not q.dimension:
        raise QuantityError(f"cannot express {q.dimension.value} in {unit!r}")
    scaled = float(Fraction(q.value) / factor)
    for digits in range(1, 18):
        number = repr(float(f"{scaled:.{digits}g}"))
        if number.endswith(".0"):
            number = number[:-2]
        text = f"{number} {unit}".rstrip()
        if parse_quantity(text).value == q.value:
            return text
    # a few values cannot be hit exactly through a non-unit factor
    return format_quantity(q, CANONICAL_UNIT[q.dimension])


def units_for(dimension: Dimension) -> list[str]:
    return [u for u, (_, d) in UNITS.items() if d is dimension]
