"""Small shared helpers: rational text forms and exact logarithm bounds."""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError


def parse_rational(text) -> Fraction:
    """Parse "3/4", "-2", 5 or a Fraction into an exact Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not a rational: {text!r}") from exc


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def ln_bounds(w: Fraction, gap: Fraction = Fraction(1, 10**12)) -> tuple[Fraction, Fraction]:
    """Exact rational bounds lo <= ln(w) <= hi with hi - lo <= gap.

    Uses the atanh series ln(w) = 2 * sum z^(2i+1)/(2i+1) with z = (w-1)/(w+1);
    the remainder after the z^(2m+1) term is below 2 z^(2m+3)/((2m+3)(1-z^2)).
    """
    w = Fraction(w)
    if w <= 0:
        raise DomainError("ln_bounds needs a positive argument")
    if w == 1:
        return Fraction(0), Fraction(0)
    if w < 1:
        lo, hi = ln_bounds(1 / w, gap)
        return -hi, -lo
    z = (w - 1) / (w + 1)
    z2 = z * z
    s = Fraction(0)
    power = z
    i = 0
    while True:
        s += power / (2 * i + 1)
        power *= z2
        rem = 2 * power / ((2 * i + 3) * (1 - z2))
        if rem <= gap:
            return 2 * s, 2 * s + rem
        i += 1


def ln_leq(scale: Fraction, w: Fraction, bound: Fraction) -> bool:
    """Decide scale*ln(w) <= bound exactly (scale >= 0, w >= 1).

    Tightens the rational bounds on ln(w) until the comparison is resolved.
    """
    scale, w, bound = Fraction(scale), Fraction(w), Fraction(bound)
    if scale == 0 or w == 1:
        return bound >= 0
    gap = Fraction(1, 10**6)
    while True:
        lo, hi = ln_bounds(w, gap)
        if scale * hi <= bound:
            return True
        if scale * lo > bound:
            return False
        gap /= 10**6
