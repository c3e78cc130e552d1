"""Rational scalar backend selection.

The whole engine computes over exact rationals with unbounded integer
parts.  Two interchangeable scalar cores provide that arithmetic:

* ``gmpy2.mpq`` -- GMP-backed C extension, the fast default;
* ``fractions.Fraction`` -- pure-Python fallback, always available.

The core is picked once at import time.  Set ``QSLICE_BACKEND`` to
``gmpy2``, ``fraction`` or ``auto`` (default) to control the choice;
``benchmarks/bench_backends.py`` compares the two.  Both cores keep
values canonical (positive denominator, gcd 1) and serialize to the
same ``"p/q"`` / ``"p"`` strings, so results are bit-identical either
way.
"""

from __future__ import annotations

import os

_choice = os.environ.get("QSLICE_BACKEND", "auto").lower()

if _choice not in ("auto", "gmpy2", "fraction"):
    raise RuntimeError(f"QSLICE_BACKEND must be auto|gmpy2|fraction, got {_choice!r}")

if _choice in ("auto", "gmpy2"):
    try:
        from gmpy2 import mpq as _scalar

        BACKEND_NAME = "gmpy2"
    except ImportError:
        if _choice == "gmpy2":
            raise
        from fractions import Fraction as _scalar

        BACKEND_NAME = "fraction"
else:
    from fractions import Fraction as _scalar

    BACKEND_NAME = "fraction"

#: the scalar constructor; accepts ints, (num, den) pairs and "p/q" strings
Rational = _scalar

ZERO = Rational(0)
ONE = Rational(1)


def rational(num, den=1):
    """Build a canonical rational (positive denominator, lowest terms)."""
    return Rational(num, den) if den != 1 else Rational(num)


def rational_from_str(text: str):
    """Parse the serialization format: "p/q" with q > 0, or bare "p"."""
    value = Rational(text.strip())
    return value


def rational_to_str(value) -> str:
    """Serialize canonically: "p/q", or "p" when the denominator is 1."""
    return str(value)
