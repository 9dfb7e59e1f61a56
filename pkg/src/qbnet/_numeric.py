"""Scalar helpers shared by the exact (Fraction) and floating code paths."""

from fractions import Fraction

TOL = 1e-9


def as_number(x, exact: bool):
    """Coerce ``x`` to a Fraction (exact) or float."""
    if exact:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, float):
            # go through repr so 0.4 means 2/5, not its binary expansion
            return Fraction(repr(x))
        return Fraction(x)
    return float(x)


def as_vector(xs, exact: bool) -> tuple:
    return tuple(as_number(x, exact) for x in xs)


def parse_number(text) -> Fraction:
    """Parse ``"0.4"``, ``"2/5"``, ``3`` or a Fraction into a Fraction."""
    if isinstance(text, bool):
        raise ValueError("booleans are not numbers")
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        return Fraction(repr(text))
    if isinstance(text, str):
        return Fraction(text.strip())
    raise ValueError(f"not a number: {text!r}")


def fraction_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dot(a, b):
    return sum((x * y for x, y in zip(a, b) if x and y), 0)
