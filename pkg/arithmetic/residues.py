"""
Residues of Z/p^N and the chain-ring context shared by every array in the project.

A computation session fixes one prime p and one precision N; all equalities
are congruences mod p^N. Arrays of residues are plain numpy arrays whose dtype
is chosen by `coefficient_dtype` so that products and row sums never overflow.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from sympy import isprime

from .exceptions import InvalidGenerators, PrecisionMismatch

# q^2 times the widest matrix we build stays below 2^63
INT64_MODULUS_LIMIT = 2 ** 24


def coefficient_dtype(modulus):
    return np.int64 if modulus < INT64_MODULUS_LIMIT else object


def format_valuation(value, N):
    """Render a valuation, showing the zero residue as '≥ N'."""
    if value >= N:
        return f"≥ {N}"
    return str(value)


def integer_valuation(value, p, cap):
    """Largest e <= cap with p^e | value; zero gets cap."""
    value = int(value)
    if value == 0:
        return cap
    e = 0
    while e < cap and value % p == 0:
        value //= p
        e += 1
    return e


@dataclass(frozen=True)
class Residue:
    value: int
    p: int
    N: int

    def __post_init__(self):
        object.__setattr__(self, 'value', int(self.value) % (self.p ** self.N))

    def _coerce(self, other):
        if isinstance(other, Residue):
            if (other.p, other.N) != (self.p, self.N):
                raise PrecisionMismatch(
                    f"residues mod {self.p}^{self.N} and {other.p}^{other.N} cannot be combined"
                )
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other)
        return NotImplemented

    def __add__(self, other):
        value = self._coerce(other)
        if value is NotImplemented:
            return value
        return Residue(self.value + value, self.p, self.N)

    __radd__ = __add__

    def __sub__(self, other):
        value = self._coerce(other)
        if value is NotImplemented:
            return value
        return Residue(self.value - value, self.p, self.N)

    def __rsub__(self, other):
        value = self._coerce(other)
        if value is NotImplemented:
            return value
        return Residue(value - self.value, self.p, self.N)

    def __mul__(self, other):
        value = self._coerce(other)
        if value is NotImplemented:
            return value
        return Residue(self.value * value, self.p, self.N)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.p, self.N)

    def __int__(self):
        return self.value

    def __str__(self):
        return f"{self.value} mod {self.p}^{self.N}"


def val_p(x):
    """p-adic valuation of a residue, N when the residue is zero."""
    return integer_valuation(x.value, x.p, x.N)


@dataclass(frozen=True)
class ChainRing:
    """The coefficient ring Z/p^N."""

    p: int
    N: int

    def __post_init__(self):
        if not isprime(self.p):
            raise InvalidGenerators(f"p = {self.p} is not prime")
        if self.N < 1:
            raise InvalidGenerators(f"precision N must be positive, got {self.N}")

    @cached_property
    def q(self):
        return self.p ** self.N

    @cached_property
    def dtype(self):
        return coefficient_dtype(self.q)

    @cached_property
    def powers(self):
        return tuple(self.p ** e for e in range(self.N + 1))

    def at_precision(self, N):
        return ChainRing(self.p, N)

    def reduce(self, values):
        arr = np.asarray(values)
        if arr.dtype == object or self.dtype == object:
            arr = np.array(arr, dtype=object) % self.q
            return arr if self.dtype == object else arr.astype(np.int64)
        return np.mod(arr.astype(np.int64), self.q)

    def zeros(self, shape):
        if self.dtype == object:
            arr = np.empty(shape, dtype=object)
            arr.fill(0)
            return arr
        return np.zeros(shape, dtype=np.int64)

    def identity(self, size):
        arr = self.zeros((size, size))
        for i in range(size):
            arr[i, i] = 1
        return arr

    def matmul(self, a, b):
        return self.reduce(np.dot(a, b))

    def valuations(self, arr):
        """Elementwise valuations as an int array; zeros get N."""
        arr = np.asarray(arr)
        result = np.zeros(arr.shape, dtype=np.int64)
        for power in self.powers[1:]:
            result += (arr % power == 0)
        return result

    def unit_inverse(self, unit):
        return pow(int(unit), -1, self.q)

    def __str__(self):
        return f"Z/{self.p}^{self.N}"
