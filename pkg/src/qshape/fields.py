"""Exact scalar arithmetic: prime fields F_p and the rationals.

Every matrix in a computation carries one FieldSpec.  F_p elements are
canonical representatives 0..p-1 stored in int64 numpy arrays; rationals
are `fractions.Fraction` values stored in object arrays.  No floating
point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either GF(p) for a prime p, or the rationals (p is None)."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def is_prime_field(self) -> bool:
        return self.p is not None

    # -- scalar helpers -------------------------------------------------

    def coerce(self, x):
        """Bring a Python int / Fraction / decimal string into canonical form."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.p is not None:
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise ZeroDivisionError(f"denominator divisible by {self.p}")
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        return Fraction(x)

    def zero(self):
        return 0 if self.p is not None else Fraction(0)

    def one(self):
        return 1 if self.p is not None else Fraction(1)

    def inv(self, x):
        if self.p is not None:
            x = int(x) % self.p
            if x == 0:
                raise ZeroDivisionError("inverse of 0")
            return pow(x, self.p - 2, self.p)
        if x == 0:
            raise ZeroDivisionError("inverse of 0")
        return Fraction(1) / x

    def neg(self, x):
        return (-x) % self.p if self.p is not None else -x

    def scalar_str(self, x) -> str:
        """Canonical serialization: decimal for F_p, num/den for Q."""
        if self.p is not None:
            return str(int(x) % self.p)
        f = Fraction(x)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"

    # -- array helpers ---------------------------------------------------

    @property
    def dtype(self):
        return np.int64 if self.p is not None else object

    def empty(self, rows: int, cols: int) -> np.ndarray:
        if self.p is not None:
            return np.zeros((rows, cols), dtype=np.int64)
        a = np.empty((rows, cols), dtype=object)
        a[:] = Fraction(0)
        return a

    def normalize(self, a: np.ndarray) -> np.ndarray:
        return a % self.p if self.p is not None else a

    def __str__(self):
        return f"GF({self.p})" if self.p is not None else "QQ"


QQ = FieldSpec(None)


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)
