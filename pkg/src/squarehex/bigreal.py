"""Arbitrary precision reals carrying a first-order absolute error bound."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, localcontext

import mpmath
from mpmath import mpf


def _mp(v):
    return v.value if isinstance(v, BigReal) else mpf(v)


def _err(v):
    return v.err if isinstance(v, BigReal) else mpf(0)


@dataclass(frozen=True)
class BigReal:
    """``value`` is within ``err`` of the true quantity."""

    value: mpf
    err: mpf = mpf(0)

    @classmethod
    def exact(cls, v) -> "BigReal":
        return cls(mpf(v), mpf(0))

    def __add__(self, o):
        return BigReal(self.value + _mp(o), self.err + _err(o))

    __radd__ = __add__

    def __sub__(self, o):
        return BigReal(self.value - _mp(o), self.err + _err(o))

    def __rsub__(self, o):
        return BigReal(_mp(o) - self.value, self.err + _err(o))

    def __neg__(self):
        return BigReal(-self.value, self.err)

    def __mul__(self, o):
        a, b = self.value, _mp(o)
        return BigReal(a * b, abs(a) * _err(o) + abs(b) * self.err + self.err * _err(o))

    __rmul__ = __mul__

    def __truediv__(self, o):
        b, eb = _mp(o), _err(o)
        if abs(b) <= eb:
            raise ZeroDivisionError("divisor not bounded away from zero")
        q = self.value / b
        return BigReal(q, (self.err + abs(q) * eb) / (abs(b) - eb))

    def __rtruediv__(self, o):
        return BigReal.exact(_mp(o)).__truediv__(self) if not isinstance(o, BigReal) else o / self

    def sqrt(self) -> "BigReal":
        r = mpmath.sqrt(self.value)
        return BigReal(r, self.err / (r + mpmath.sqrt(max(self.value - self.err, 0))))

    def log(self) -> "BigReal":
        if self.value <= self.err:
            raise ValueError("log of a quantity not bounded away from zero")
        return BigReal(mpmath.log(self.value), self.err / (self.value - self.err))

    def exp(self) -> "BigReal":
        e = mpmath.exp(self.value)
        return BigReal(e, e * mpmath.expm1(self.err))

    def pow(self, a) -> "BigReal":
        return (self.log() * a).exp()

    @property
    def digits(self) -> int:
        """Correct decimals after the point that the error bound certifies."""
        if self.err == 0:
            return mpmath.mp.dps
        return max(0, int(mpmath.floor(-mpmath.log10(self.err))) - 1)

    def __float__(self) -> float:
        return float(self.value)

    def __lt__(self, o):
        return self.value + self.err < _mp(o) - _err(o)

    def __gt__(self, o):
        return self.value - self.err > _mp(o) + _err(o)

    def to_str(self, decimals: int | None = None) -> str:
        """Fixed-point string with no more decimals than are certified."""
        d = self.digits if decimals is None else min(decimals, self.digits)
        raw = mpmath.nstr(self.value, d + 40, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)
        with localcontext() as ctx:
            ctx.prec = d + 60
            return str(Decimal(raw).quantize(Decimal(1).scaleb(-d), rounding=ROUND_HALF_EVEN))

    def __str__(self) -> str:
        return self.to_str()
