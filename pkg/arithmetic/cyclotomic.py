"""
Cyclotomic integers Z[zeta_{p^m}] / (p^N), kept in canonical power-basis form.

Storage is the coefficient vector of length phi(p^m) on 1, zeta, ..., zeta^(phi-1)
after reduction by the cyclotomic polynomial Phi_{p^m}(X) = sum_k X^(k p^(m-1)).
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import LevelError, PrecisionMismatch
from .residues import ChainRing, integer_valuation


def totient(p, m):
    """phi(p^m), with phi(1) = 1."""
    if m == 0:
        return 1
    return (p - 1) * p ** (m - 1)


def reduce_exponents(chain, exponent_coeffs, m):
    """Reduce a coefficient vector indexed by exponents mod p^m to canonical form.

    The input has length p^m (exponents already folded by X^(p^m) = 1).
    """
    p = chain.p
    folded = np.asarray(exponent_coeffs)
    if m == 0:
        return chain.reduce(folded.sum(keepdims=True))
    step = p ** (m - 1)
    phi = (p - 1) * step
    head = folded[:phi].reshape(p - 1, step) - folded[phi:]
    return chain.reduce(head.reshape(-1))


@dataclass(frozen=True, eq=False)
class CyclotomicInt:
    coeffs: tuple
    m: int
    p: int
    N: int

    @classmethod
    def from_exponent_array(cls, chain, exponent_coeffs, m):
        reduced = reduce_exponents(chain, exponent_coeffs, m)
        return cls(tuple(int(c) for c in reduced), m, chain.p, chain.N)

    @classmethod
    def from_integer(cls, value, m, p, N):
        coeffs = [0] * totient(p, m)
        coeffs[0] = int(value) % p ** N
        return cls(tuple(coeffs), m, p, N)

    @property
    def chain(self):
        return ChainRing(self.p, self.N)

    def _check(self, other):
        if (self.p, self.N, self.m) != (other.p, other.N, other.m):
            raise PrecisionMismatch(
                f"cyclotomic values at (p={self.p}, N={self.N}, m={self.m}) and "
                f"(p={other.p}, N={other.N}, m={other.m}) cannot be combined"
            )

    def __add__(self, other):
        self._check(other)
        q = self.p ** self.N
        return CyclotomicInt(tuple((a + b) % q for a, b in zip(self.coeffs, other.coeffs)),
                             self.m, self.p, self.N)

    def __sub__(self, other):
        self._check(other)
        q = self.p ** self.N
        return CyclotomicInt(tuple((a - b) % q for a, b in zip(self.coeffs, other.coeffs)),
                             self.m, self.p, self.N)

    def __neg__(self):
        q = self.p ** self.N
        return CyclotomicInt(tuple(-a % q for a in self.coeffs), self.m, self.p, self.N)

    def __mul__(self, other):
        return cyc_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, CyclotomicInt):
            return NotImplemented
        return (self.p, self.N, self.m, self.coeffs) == (other.p, other.N, other.m, other.coeffs)

    def __hash__(self):
        return hash((self.p, self.N, self.m, self.coeffs))

    def is_zero(self):
        return not any(self.coeffs)

    def valuation(self):
        """Largest e <= N with p^e dividing the value in Z[zeta]; N for zero.

        The power basis is an integral basis, so divisibility by p^e is
        divisibility of every coefficient.
        """
        return min(integer_valuation(c, self.p, self.N) for c in self.coeffs)

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(str(c) if k == 0 else f"{c}*z^{k}")
        return " + ".join(terms) if terms else "0"


def cyc_mul(a, b):
    """Product modulo (Phi_{p^m}, p^N)."""
    a._check(b)
    chain = ChainRing(a.p, a.N)
    order = a.p ** a.m
    x = np.array(a.coeffs, dtype=chain.dtype)
    y = np.array(b.coeffs, dtype=chain.dtype)
    idx = np.add.outer(np.arange(len(x)), np.arange(len(y))) % order
    folded = chain.zeros(order)
    np.add.at(folded, idx.reshape(-1), chain.reduce(np.multiply.outer(x, y)).reshape(-1))
    return CyclotomicInt.from_exponent_array(chain, chain.reduce(folded), a.m)


def cyc_embed_root(e, m, p, N):
    """zeta_{p^m}^e in canonical form."""
    order = p ** m
    if not 0 <= e < order:
        raise LevelError(f"root exponent {e} outside [0, {order})", exponent=e, m=m)
    chain = ChainRing(p, N)
    folded = chain.zeros(order)
    folded[e] = 1
    return CyclotomicInt.from_exponent_array(chain, folded, m)
