"""
The finite-level Iwasawa algebra R_{m,N} = (Z/p^N)[(Z/p^m)^d].

Elements are dense coefficient vectors of length p^(dm), indexed row-major by
the exponent vector (a_1, ..., a_d) of sigma_1^a_1 ... sigma_d^a_d, the order of
itertools.product(range(p^m), repeat=d).

Elements built from omega / nu (and products of those with group elements)
remember their factorization in `factors`. A character of the algebra is a
homomorphism into a domain, so such an element vanishes under a character
exactly when one of its factors does; `characters.vanishes` uses this to
decide exact vanishing instead of vanishing mod p^N. `factors` is None when
no factorization is known.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from tokenize import TokenError

import numpy as np
from django.conf import settings
from sympy import Poly, Symbol
from sympy.core.sympify import SympifyError
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)
from sympy.polys.polyerrors import PolynomialError

from arithmetic.exceptions import (
    CapExceeded,
    InvalidGenerators,
    LevelError,
    ParseError,
    PrecisionMismatch,
)
from arithmetic.linalg import smith_form
from arithmetic.residues import ChainRing, integer_valuation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GroupRing:
    p: int
    N: int
    m: int
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise LevelError(f"rank d must be at least 1, got {self.d}")
        if self.m < 0:
            raise LevelError(f"level m must be non-negative, got {self.m}")
        cap = settings.IWASAWA['MATRIX_DIMENSION_CAP']
        if self.p ** (self.d * self.m) > cap:
            raise CapExceeded(
                f"group ring of size {self.p}^{self.d * self.m} exceeds the dimension cap {cap}"
            )

    @cached_property
    def chain(self):
        return ChainRing(self.p, self.N)

    @cached_property
    def order(self):
        return self.p ** self.m

    @cached_property
    def size(self):
        return self.order ** self.d

    @cached_property
    def shape(self):
        return (self.order,) * self.d

    @cached_property
    def coords(self):
        """d x size array of exponent vectors in index order."""
        return np.indices(self.shape).reshape(self.d, -1)

    @cached_property
    def translation_index(self):
        """idx[g, h] = index of g - h."""
        diff = (self.coords[:, :, None] - self.coords[:, None, :]) % self.order
        return np.ravel_multi_index(tuple(diff), self.shape)

    def at(self, N=None, m=None):
        return GroupRing(self.p, self.N if N is None else N, self.m if m is None else m, self.d)

    def gamma(self, exps):
        """Normalize a GammaVector to the working level."""
        exps = tuple(int(e) for e in exps)
        if len(exps) != self.d:
            raise InvalidGenerators(f"expected {self.d} exponents, got {len(exps)}")
        return tuple(e % self.order for e in exps)

    def index(self, exps):
        return int(np.ravel_multi_index(self.gamma(exps), self.shape))

    def element(self, coeffs, factors=None):
        coeffs = self.chain.reduce(coeffs)
        if coeffs.shape != (self.size,):
            raise PrecisionMismatch(f"expected {self.size} coefficients, got shape {coeffs.shape}")
        return GroupRingElement(self, coeffs, factors)

    def zero(self):
        return GroupRingElement(self, self.chain.zeros(self.size), None)

    def scalar(self, value):
        coeffs = self.chain.zeros(self.size)
        coeffs[0] = int(value) % self.chain.q
        factors = () if value in (1, -1) else None
        return self.element(coeffs, factors)

    def one(self):
        return self.scalar(1)

    def group_element(self, exps):
        coeffs = self.chain.zeros(self.size)
        coeffs[self.index(exps)] = 1
        return GroupRingElement(self, coeffs, ())

    def generator(self, i):
        exps = [0] * self.d
        exps[i] = 1
        return tuple(exps)

    def standard_basis(self):
        return tuple(self.generator(i) for i in range(self.d))

    def __str__(self):
        return f"R(p={self.p}, N={self.N}, m={self.m}, d={self.d})"


@dataclass(frozen=True, eq=False)
class GroupRingElement:
    ring: GroupRing
    coeffs: np.ndarray
    factors: tuple = None

    def _check(self, other):
        if self.ring != other.ring:
            raise PrecisionMismatch(f"elements of {self.ring} and {other.ring} cannot be combined")

    def __add__(self, other):
        if isinstance(other, (int, np.integer)):
            other = self.ring.scalar(other)
        self._check(other)
        return self.ring.element(self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, np.integer)):
            other = self.ring.scalar(other)
        self._check(other)
        return self.ring.element(self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return self.ring.element(-self.coeffs, self.factors)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            factors = self.factors if other in (1, -1) else None
            return self.ring.element(self.coeffs * (int(other) % self.ring.chain.q), factors)
        return gr_mul(self, other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, exponent):
        if exponent < 0:
            raise LevelError("negative powers are only defined for group elements")
        result = self.ring.one()
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self.ring == other.ring and np.array_equal(self.coeffs, other.coeffs)

    __hash__ = None

    def is_zero(self):
        return not self.coeffs.any()

    def augmentation(self):
        return int(self.coeffs.sum()) % self.ring.chain.q

    def terms(self):
        """(coefficient, exponent vector) for every nonzero coefficient."""
        for idx in np.flatnonzero(self.coeffs):
            yield int(self.coeffs[idx]), tuple(int(c) for c in self.ring.coords[:, idx])

    def __str__(self):
        parts = []
        for coefficient, exps in self.terms():
            monomial = "*".join(
                f"s{i + 1}" if e == 1 else f"s{i + 1}^{e}" for i, e in enumerate(exps) if e
            )
            if not monomial:
                parts.append(str(coefficient))
            elif coefficient == 1:
                parts.append(monomial)
            else:
                parts.append(f"{coefficient}*{monomial}")
        return " + ".join(parts) if parts else "0"


def multiplication_matrix(a):
    """Matrix of x -> a*x; column h holds the coefficients of a * sigma^h."""
    return a.coeffs[a.ring.translation_index]


def gr_mul(a, b):
    a._check(b)
    chain = a.ring.chain
    factors = None
    if a.factors is not None and b.factors is not None:
        factors = a.factors + b.factors
    return GroupRingElement(a.ring, chain.matmul(multiplication_matrix(a), b.coeffs), factors)


def _power_sum(ring, s, step, count):
    """sum_{j < count} sigma^(j*step*s), folding the cyclic repetitions."""
    g = np.array(ring.gamma(s), dtype=np.int64) * step % ring.order
    depth = min((integer_valuation(e, ring.p, ring.m) for e in g), default=ring.m)
    period = ring.p ** (ring.m - depth)
    full, rest = divmod(count, period)
    coeffs = ring.chain.zeros(ring.size)
    terms = min(count, period)
    exps = (np.arange(terms)[:, None] * g[None, :]) % ring.order
    flat = np.ravel_multi_index(tuple(exps.T), ring.shape)
    weights = np.full(terms, full % ring.chain.q, dtype=np.int64)
    weights[:rest] += 1
    np.add.at(coeffs, flat, ring.chain.reduce(weights))
    return ring.chain.reduce(coeffs)


def omega(ring, s, n):
    """omega_{s,n} = s^(p^n) - 1, with omega_{s,-1} = 1."""
    if n < -1:
        raise LevelError(f"omega index must be at least -1, got {n}")
    s = ring.gamma(s)
    if n == -1:
        return ring.one()
    coeffs = ring.group_element(tuple(e * ring.p ** n for e in s)).coeffs.copy()
    coeffs[0] -= 1
    return ring.element(coeffs, (('omega', s, n),))


def nu(ring, s, n, m_idx):
    """nu_{s,n,m} = omega_{s,m} / omega_{s,n} as the explicit sum of p^n-th powers."""
    if n < -1 or m_idx < n:
        raise LevelError(f"nu needs m >= n >= -1, got n={n}, m={m_idx}")
    s = ring.gamma(s)
    tag = (('nu', s, n, m_idx),)
    if n == -1:
        return ring.element(omega(ring, s, m_idx).coeffs, tag)
    coeffs = _power_sum(ring, s, ring.p ** n, ring.p ** (m_idx - n))
    return ring.element(coeffs, tag)


def validate_basis(ring, basis):
    """A basis of Gamma: d vectors whose exponent matrix is invertible mod p."""
    basis = tuple(tuple(int(e) for e in b) for b in basis)
    if len(basis) != ring.d or any(len(b) != ring.d for b in basis):
        raise InvalidGenerators(f"a basis needs {ring.d} vectors, got {len(basis)}")
    form = smith_form(np.array(basis, dtype=np.int64).T % ring.p, ChainRing(ring.p, 1))
    if form.rank != ring.d:
        raise InvalidGenerators(f"{list(basis)} is not a basis: exponent matrix singular mod {ring.p}")
    return basis


def nu_full(ring, n, m_idx, basis=None):
    """nu_{n,m} = prod_i nu_{sigma_i,n,m}."""
    if n < 0 or m_idx < n:
        raise LevelError(f"nu_full needs m >= n >= 0, got n={n}, m={m_idx}")
    basis = validate_basis(ring, basis or ring.standard_basis())
    result = ring.one()
    for sigma in basis:
        result = result * nu(ring, sigma, n, m_idx)
    return result


def coset_norm_element(ring, n, m_idx):
    """Sum of the coset representatives of Gamma^(n) / Gamma^(m), no basis involved."""
    if n < 0 or m_idx < n:
        raise LevelError(f"coset norm needs m >= n >= 0, got n={n}, m={m_idx}")
    width = ring.p ** (m_idx - n)
    reps = np.indices((width,) * ring.d).reshape(ring.d, -1) * ring.p ** n % ring.order
    coeffs = ring.chain.zeros(ring.size)
    np.add.at(coeffs, np.ravel_multi_index(tuple(reps), ring.shape), 1)
    return ring.element(coeffs)


def sharp(a):
    """The involution induced by gamma -> gamma^(-1)."""
    ring = a.ring
    grid = a.coeffs.reshape(ring.shape)
    axes = tuple(range(ring.d))
    flipped = np.roll(np.flip(grid, axes), 1, axes)
    factors = None
    if a.factors is not None:
        factors = tuple(
            (tag[0], tuple(-e % ring.order for e in tag[1])) + tag[2:] for tag in a.factors
        )
    return GroupRingElement(ring, flipped.reshape(-1).copy(), factors)


def project(a, m_target, N_target):
    """Push forward along (Z/p^m)^d -> (Z/p^m')^d and reduce mod p^N'."""
    ring = a.ring
    if m_target > ring.m or N_target > ring.N or m_target < 0 or N_target < 1:
        raise LevelError(
            f"cannot project from (m={ring.m}, N={ring.N}) to (m={m_target}, N={N_target})"
        )
    target = ring.at(N=N_target, m=m_target)
    split = []
    for _ in range(ring.d):
        split += [ring.p ** (ring.m - m_target), target.order]
    summed = a.coeffs.reshape(split).sum(axis=tuple(range(0, 2 * ring.d, 2)))
    factors = None
    if a.factors is not None:
        factors = tuple(
            (tag[0], tuple(e % target.order for e in tag[1])) + tag[2:] for tag in a.factors
        )
    return target.element(summed.reshape(-1), factors)


def t_symbols(d):
    return tuple(Symbol(f"T{i + 1}") for i in range(d))


def lift_poly(ring, expr):
    """Substitute T_i := sigma_i - 1 into an integer polynomial and expand."""
    gens = t_symbols(ring.d)
    if isinstance(expr, str):
        try:
            expr = parse_expr(
                expr,
                local_dict={str(t): t for t in gens},
                transformations=standard_transformations + (convert_xor,),
            )
        except (SympifyError, SyntaxError, TypeError, TokenError) as exc:
            raise ParseError(f"malformed polynomial {expr!r}: {exc}") from exc
    try:
        poly = Poly(expr, *gens)
    except PolynomialError as exc:
        raise ParseError(f"not a polynomial in {', '.join(map(str, gens))}: {expr}") from exc
    if not poly.domain.is_ZZ:
        raise ParseError(f"polynomial {expr} must have integer coefficients in T1..T{ring.d}")

    variables = [ring.group_element(ring.generator(i)) - 1 for i in range(ring.d)]
    powers = [[ring.one()] for _ in range(ring.d)]
    result = ring.zero()
    for monomial, coefficient in poly.terms():
        term = ring.one()
        for i, k in enumerate(monomial):
            while len(powers[i]) <= k:
                powers[i].append(powers[i][-1] * variables[i])
            if k:
                term = term * powers[i][k]
        result = result + term * int(coefficient)
    logger.debug("lifted %s into %s", expr, ring)
    return ring.element(result.coeffs)


def validate_tight_set(ring, taus):
    """Finite-level check of a tight generating set.

    Each tau lies outside Gamma^p, the set generates Gamma, and no two taus
    generate the same procyclic subgroup, tested as proportionality by a unit
    mod p^max(m, 1).
    """
    taus = tuple(tuple(int(e) for e in t) for t in taus)
    if not taus:
        raise InvalidGenerators("a tight set needs at least one generator")
    for tau in taus:
        if len(tau) != ring.d:
            raise InvalidGenerators(f"tight generator {tau} does not have {ring.d} exponents")
        if all(e % ring.p == 0 for e in tau):
            raise InvalidGenerators(f"tight generator {tau} lies in Gamma^{ring.p}")
    form = smith_form(np.array(taus, dtype=np.int64).T, ChainRing(ring.p, 1))
    if form.rank != ring.d:
        raise InvalidGenerators(f"tight set {list(taus)} does not generate Gamma")
    modulus = ring.p ** max(ring.m, 1)
    for i, first in enumerate(taus):
        pivot = next(k for k, e in enumerate(first) if e % ring.p)
        inv = pow(first[pivot], -1, modulus)
        for second in taus[i + 1:]:
            u = second[pivot] * inv % modulus
            if u % ring.p and all((u * a - b) % modulus == 0 for a, b in zip(first, second)):
                raise InvalidGenerators(
                    f"tight generators {first} and {second} generate the same subgroup "
                    f"mod {ring.p}^{max(ring.m, 1)}"
                )
    return taus


def basis_from_tight_set(ring, taus):
    """Greedy choice of d tight generators forming a basis, else the standard basis."""
    chosen = []
    mod_p = ChainRing(ring.p, 1)
    for tau in taus:
        candidate = chosen + [tuple(tau)]
        if smith_form(np.array(candidate, dtype=np.int64).T, mod_p).rank == len(candidate):
            chosen = candidate
        if len(chosen) == ring.d:
            return tuple(chosen)
    return ring.standard_basis()
