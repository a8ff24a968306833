"""Number handling shared by the exact (rational) and binary64 (float) paths."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Any, Iterable

RATIONAL = "rational"
FLOAT = "float"
MODES = (RATIONAL, FLOAT)

# normalization tolerance / derived-comparison tolerance for float mode
NORM_TOL = 1e-12
CMP_TOL = 1e-9


class InputError(ValueError):
    """Malformed input: bad shapes, invalid probabilities, zero-mass conditioning."""

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


def parse_number(value: Any, mode: str = RATIONAL):
    """Turn a config value ("p/q", "0.25", int, float, Fraction) into a mode number.

    Decimal strings are read exactly in rational mode, so "0.1" is 1/10.
    """
    if mode not in MODES:
        raise InputError(f"unknown arithmetic mode {mode!r}")
    if isinstance(value, bool):
        raise InputError(f"boolean is not a number: {value!r}")
    if isinstance(value, str):
        try:
            q = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"cannot parse number {value!r}") from exc
    elif isinstance(value, (int, Fraction)):
        q = Fraction(value)
    elif isinstance(value, float):
        if mode == FLOAT:
            return value
        # floats in rational mode are taken at their shortest decimal repr
        q = Fraction(repr(value))
    else:
        raise InputError(f"unsupported number type {type(value).__name__}")
    return q if mode == RATIONAL else float(q)


def convert(value, mode: str):
    """Cast an already-numeric value into the given mode."""
    if isinstance(value, str):
        return parse_number(value, mode)
    if mode == FLOAT:
        return float(value)
    if isinstance(value, Rational):
        return Fraction(value)
    return parse_number(value, RATIONAL)


def is_exact(values: Iterable) -> bool:
    return all(isinstance(v, Rational) for v in values)


def fmt(value) -> str:
    """Serialize a number: "p/q" for rationals, repr for floats."""
    if isinstance(value, Rational):
        q = Fraction(value)
        return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
    return repr(float(value))


def close(a, b, tol: float = CMP_TOL) -> bool:
    """Exact equality for rationals, absolute tolerance otherwise."""
    if isinstance(a, Rational) and isinstance(b, Rational):
        return a == b
    return abs(float(a) - float(b)) <= tol


def leq(a, b, tol: float = CMP_TOL) -> bool:
    if isinstance(a, Rational) and isinstance(b, Rational):
        return a <= b
    return float(a) <= float(b) + tol
