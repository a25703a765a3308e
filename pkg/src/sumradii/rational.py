"""Exact rational arithmetic helpers shared by every module.

All distances, radii, costs and LP coefficients are gmpy2.mpq values in
lowest terms with positive denominators.  The core pipeline never touches
floats; decimal strings are produced only at the reporting boundary.
"""

from __future__ import annotations

from decimal import Decimal, localcontext

from gmpy2 import isqrt, mpq

# Concrete mpq type, usable in isinstance checks.
Rat = type(mpq())

ZERO = mpq(0)
ONE = mpq(1)


def rat(value, den=None) -> Rat:
    """Build an exact rational from an int, a 'p/q' string, or another Rat."""
    if den is not None:
        return mpq(value, den)
    return mpq(value)


def parse_rat(value) -> Rat:
    """Parse a JSON-level rational: an int or a 'p' / 'p/q' string.

    Floats are rejected; an instance file that wants non-integer distances
    must spell them as exact fraction strings.
    """
    if isinstance(value, bool):
        raise ValueError(f"not an exact rational: {value!r}")
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, Rat):
        return value
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text or "E" in text:
            raise ValueError(f"not an exact rational: {value!r}")
        try:
            return mpq(text)
        except ValueError:
            raise ValueError(f"not an exact rational: {value!r}") from None
    raise ValueError(f"not an exact rational: {value!r}")


def format_rat(value) -> str:
    """Render as 'p' or 'p/q' in lowest terms."""
    return str(mpq(value))


def rat_to_decimal(value, digits: int = 20) -> str:
    """Display-only decimal approximation with `digits` significant digits."""
    q = mpq(value)
    with localcontext() as ctx:
        ctx.prec = digits
        out = Decimal(int(q.numerator)) / Decimal(int(q.denominator))
    return str(out)


def denominator_lcm(values) -> int:
    """lcm of the denominators of an iterable of rationals (1 if empty)."""
    out = 1
    for v in values:
        d = int(mpq(v).denominator)
        g = _gcd(out, d)
        out = out // g * d
    return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def nearest_sqrt(value, denom: int) -> Rat:
    """Nearest multiple of 1/denom to sqrt(value), computed exactly.

    `value` must be a nonnegative rational; ties round up.
    """
    t = mpq(value) * denom * denom
    if t < 0:
        raise ValueError("nearest_sqrt of a negative value")
    m = int(isqrt(int(t)))
    while (m + 1) * (m + 1) <= t:
        m += 1
    while m * m > t:
        m -= 1
    # m = floor(sqrt(t)); m+1 is closer to sqrt(t) iff sqrt(t) >= m + 1/2,
    # i.e. 4t >= (2m+1)^2 (ties round up).
    if 4 * t >= (2 * m + 1) ** 2:
        m += 1
    return mpq(m, denom)
