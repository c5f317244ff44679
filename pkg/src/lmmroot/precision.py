"""Precision-generic scalar arithmetic.

Every solver in this package runs either in native IEEE double precision or
in extended decimal precision backed by mpmath. A scalar is simply a
``float`` or an ``mpmath.mpf``; the helpers below dispatch on the operand
type so that function corpora can be written once and evaluated at either
precision level.

Extended-precision arithmetic in mpmath is governed by the *ambient*
working precision, so whole solves are wrapped in ``ctx.active()``.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass

import mpmath
from mpmath import mpf


class DomainError(ArithmeticError):
    """A function or derivative was evaluated outside its real domain."""

    def __init__(self, message, x=None):
        super().__init__(message)
        self.x = x


@dataclass(frozen=True)
class PrecisionContext:
    """Selects the arithmetic used for a whole run.

    digits = None selects native double precision; an integer selects
    extended precision with that many significant decimal digits.
    """

    digits: int | None = None

    @property
    def is_double(self) -> bool:
        return self.digits is None

    @contextmanager
    def active(self):
        """Enter the working precision for the duration of a computation."""
        if self.is_double:
            yield self
        else:
            with mpmath.workdps(self.digits):
                yield self

    def num(self, value):
        """Convert a number or decimal string to a scalar of this context.

        Must be called inside ``active()`` when extended, so string literals
        are parsed at full working precision.
        """
        if self.is_double:
            return float(value)
        return mpf(value)

    @property
    def eps(self):
        """Unit roundoff of the context (inside ``active()`` for extended)."""
        if self.is_double:
            return math.ulp(1.0)
        return +mpmath.mp.eps

    def to_str(self, x, digits: int | None = None) -> str:
        """Decimal string with all (or the requested) significant digits."""
        if self.is_double:
            return repr(float(x))
        return mpmath.nstr(x, digits if digits is not None else self.digits,
                           strip_zeros=False)


DOUBLE = PrecisionContext(None)


def extended(digits: int = 300) -> PrecisionContext:
    return PrecisionContext(digits)


def is_finite(x) -> bool:
    if isinstance(x, float):
        return math.isfinite(x)
    return bool(mpmath.isfinite(x))


def is_nan(x) -> bool:
    if isinstance(x, float):
        return math.isnan(x)
    return bool(mpmath.isnan(x))


def sign(x) -> int:
    """Sign as -1, 0 or +1; infinities keep their sign."""
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def machine_eps(*values):
    """Unit roundoff matching the scalar type of the given values."""
    if any(isinstance(v, mpf) for v in values):
        return +mpmath.mp.eps
    return math.ulp(1.0)


def _wrap_double(fn, x, name):
    try:
        return fn(x)
    except (ValueError, OverflowError) as exc:
        raise DomainError(f"{name}({x!r}): {exc}", x=x) from exc


def _wrap_mp(fn, x, name):
    y = fn(x)
    if isinstance(y, mpmath.mpc):
        if y.imag == 0:
            return y.real
        raise DomainError(f"{name}({mpmath.nstr(x, 8)}) is complex", x=x)
    return y


def exp(x):
    if isinstance(x, float):
        try:
            return math.exp(x)
        except OverflowError:
            return math.inf
    return mpmath.exp(x)


def log(x):
    if isinstance(x, float):
        return _wrap_double(math.log, x, "log")
    if x <= 0:
        raise DomainError(f"log of non-positive value {mpmath.nstr(x, 8)}", x=x)
    return mpmath.log(x)


def sqrt(x):
    if isinstance(x, float):
        return _wrap_double(math.sqrt, x, "sqrt")
    if x < 0:
        raise DomainError(f"sqrt of negative value {mpmath.nstr(x, 8)}", x=x)
    return mpmath.sqrt(x)


def sin(x):
    return math.sin(x) if isinstance(x, float) else mpmath.sin(x)


def cos(x):
    return math.cos(x) if isinstance(x, float) else mpmath.cos(x)


def tanh(x):
    return math.tanh(x) if isinstance(x, float) else mpmath.tanh(x)


def cbrt(x):
    """Real cube root, odd extension for negative arguments."""
    if isinstance(x, float):
        return math.copysign(abs(x) ** (1.0 / 3.0), x)
    if x < 0:
        return -mpmath.cbrt(-x)
    return mpmath.cbrt(x)


def powr(x, y):
    """x**y for real results; domain failure otherwise."""
    if isinstance(x, float) and isinstance(y, (float, int)):
        try:
            r = x ** y
        except (ValueError, OverflowError) as exc:
            raise DomainError(f"pow({x!r}, {y!r}): {exc}", x=x) from exc
        if isinstance(r, complex):
            raise DomainError(f"pow({x!r}, {y!r}) is complex", x=x)
        return r
    return _wrap_mp(lambda v: mpmath.power(v, y), x, "pow")
