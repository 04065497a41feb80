"""Exact rational helpers and the "p/q" string encoding used in every schema."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Rational = Union[Fraction, int]


def q(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text or any(ch in text for ch in ".eE"):
        raise ValueError(f"not an exact rational string: {text!r}")
    return Fraction(text)


def format_rational(value) -> str:
    """Normalized "p/q" (denominator always written, positive, lowest terms)."""
    value = q(value)
    return f"{value.numerator}/{value.denominator}"


def as_int(value, what: str = "value") -> int:
    value = q(value)
    if value.denominator != 1:
        raise ValueError(f"{what} must be an integer, got {format_rational(value)}")
    return value.numerator


def sign(value) -> int:
    return (value > 0) - (value < 0)


def floor(value) -> int:
    return math.floor(q(value))


def mod1(value) -> Fraction:
    value = q(value)
    return value - math.floor(value)
