"""Exact rational coefficients.

gmpy2's mpq is used when available (C-speed arbitrary precision rationals);
the stdlib Fraction is a drop-in fallback.  Both normalise to gcd-reduced
form with a positive denominator and print as ``p`` or ``p/q``, which the
PSF text format relies on.
"""

from __future__ import annotations

import math
import re

try:
    from gmpy2 import mpq as RAT
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as RAT

ZERO = RAT(0)
ONE = RAT(1)


def rat(num, den=1):
    if isinstance(num, str):
        if den != 1:
            raise ValueError("string rational takes no denominator argument")
        return RAT(num)
    return RAT(num, den)


def rat_str(value) -> str:
    """Canonical text form: ``p`` or ``p/q`` with q > 0, gcd(|p|, q) = 1."""
    return str(value)


_RAT_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")


def parse_rat(text: str):
    """Parse ``p`` or ``p/q``.  Raises ValueError on malformed input."""
    m = _RAT_RE.match(text)
    if not m:
        raise ValueError(f"malformed rational {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return RAT(num, den)


def rational_sqrt(value):
    """Exact square root of a nonnegative rational, or None if irrational."""
    if value < 0:
        return None
    num = int(value.numerator)
    den = int(value.denominator)
    rn = math.isqrt(num)
    rd = math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        return None
    return RAT(rn, rd)
