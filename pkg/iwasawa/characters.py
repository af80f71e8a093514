"""
Characters of Gamma of finite order, their zero sets and Z_p-flats.

A character at level m is stored as its exponent vector: chi(sigma_i) =
zeta_{p^m}^exps[i]. Evaluation sends the group ring into Z[zeta_{p^m}]/(p^N).
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from django.conf import settings

from arithmetic.cyclotomic import CyclotomicInt
from arithmetic.exceptions import CapExceeded, InvalidGenerators, LevelError
from arithmetic.linalg import smith_form
from arithmetic.residues import ChainRing, integer_valuation

logger = logging.getLogger(__name__)

MOD_P_VANISHING_CAVEAT = (
    "element carries no factorization: vanishing decided mod p^N, "
    "which can overcount the zero set"
)


@dataclass(frozen=True)
class Character:
    exps: tuple
    m: int
    p: int

    def __post_init__(self):
        if self.m < 0:
            raise LevelError(f"character level must be non-negative, got {self.m}")
        object.__setattr__(self, 'exps', tuple(int(e) % self.p ** self.m for e in self.exps))

    @property
    def d(self):
        return len(self.exps)

    @cached_property
    def order_level(self):
        """k with chi of order p^k."""
        return max((self.m - integer_valuation(e, self.p, self.m) for e in self.exps), default=0)

    def inverse(self):
        return Character(tuple(-e for e in self.exps), self.m, self.p)

    def pairing(self, g):
        """<chi, g> mod p^m, so that chi(g) = zeta_{p^m}^<chi, g>."""
        return sum(e * int(x) for e, x in zip(self.exps, g)) % self.p ** self.m

    def order_exponent_of(self, g):
        """alpha with chi(g) of order p^alpha."""
        return self.m - integer_valuation(self.pairing(g), self.p, self.m)

    def __str__(self):
        return f"{','.join(map(str, self.exps))}@{self.m}"


def enumeration_cap():
    return settings.IWASAWA['ENUMERATION_CAP']


def enumerate_characters(p, d, m, cap=None):
    """All p^(dm) characters of Gamma / Gamma^(m), in lexicographic order."""
    cap = enumeration_cap() if cap is None else cap
    count = p ** (d * m)
    if count > cap:
        raise CapExceeded(f"{count} characters at level {m} exceed the enumeration cap {cap}")
    return [Character(exps, m, p) for exps in itertools.product(range(p ** m), repeat=d)]


def _check_level(chi, ring):
    if chi.p != ring.p or chi.d != ring.d:
        raise LevelError(f"character {chi} does not match {ring}")
    if chi.order_level > ring.m:
        raise LevelError(
            f"character {chi} has order p^{chi.order_level}, above the ring level {ring.m}"
        )


def eval_char(chi, a):
    """chi(a) = sum_g a_g zeta^<chi, g> in canonical cyclotomic form."""
    ring = a.ring
    _check_level(chi, ring)
    modulus = chi.p ** chi.m
    exps = np.array(chi.exps, dtype=np.int64)
    exponents = exps.dot(ring.coords) % modulus
    folded = ring.chain.zeros(modulus)
    np.add.at(folded, exponents, a.coeffs)
    return CyclotomicInt.from_exponent_array(ring.chain, ring.chain.reduce(folded), chi.m)


def factor_vanishes(tag, chi):
    """Exact vanishing of omega_{s,n} / nu_{s,n,m} under chi."""
    alpha = chi.order_exponent_of(tag[1])
    if tag[0] == 'omega':
        return alpha <= tag[2]
    _, _, n, m = tag
    if n == -1:
        return alpha <= m
    return n < alpha <= m


def vanishes(chi, a):
    """chi(a) = 0: exactly for factored elements, mod p^N otherwise."""
    if a.factors is not None:
        _check_level(chi, a.ring)
        return any(factor_vanishes(tag, chi) for tag in a.factors)
    return eval_char(chi, a).is_zero()


@dataclass(frozen=True)
class DeltaSet:
    members: tuple
    m: int
    exact: bool = True

    def __contains__(self, chi):
        return chi in self.members

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)


def delta_set(ideal, ring, m=None, cap=None):
    """Level-m characters killing every generator of the ideal.

    `ideal` is either an IdealSpec (realized at `ring`) or a list of elements.
    """
    generators = ideal.realize(ring) if hasattr(ideal, 'realize') else list(ideal)
    m = ring.m if m is None else m
    if m > ring.m:
        raise LevelError(f"zero set at level {m} needs the ring at level >= {m}, got {ring.m}")
    members = tuple(
        chi for chi in enumerate_characters(ring.p, ring.d, m, cap)
        if all(vanishes(chi, g) for g in generators)
    )
    exact = all(g.factors is not None for g in generators)
    logger.debug("zero set at level %s: %s of %s characters", m, len(members), ring.p ** (ring.d * m))
    return DeltaSet(members, m, exact)


@dataclass(frozen=True)
class ZpFlat:
    """Solutions of chi(xi_j) = zeta_{p^r_j}^u_j; equations are (xi, u, r)."""

    p: int
    d: int
    equations: tuple = ()

    def __post_init__(self):
        equations = tuple((tuple(int(e) for e in xi), int(u), int(r)) for xi, u, r in self.equations)
        for xi, u, r in equations:
            if len(xi) != self.d:
                raise InvalidGenerators(f"flat equation vector {xi} does not have {self.d} entries")
            if r < 0 or not 0 <= u < self.p ** r:
                raise InvalidGenerators(f"root exponent {u} is not valid at level {r}")
        if equations:
            matrix = np.array([xi for xi, _, _ in equations], dtype=np.int64).T % self.p
            if smith_form(matrix, ChainRing(self.p, 1)).rank != len(equations):
                raise InvalidGenerators(
                    "flat equations are not extendable to a basis: "
                    f"{[xi for xi, _, _ in equations]} dependent mod {self.p}"
                )
        object.__setattr__(self, 'equations', equations)

    def contains(self, chi):
        modulus = self.p ** chi.m
        for xi, u, r in self.equations:
            if r > chi.m:
                raise LevelError(f"flat equation at level {r} tested against level {chi.m}")
            if chi.pairing(xi) != u * self.p ** (chi.m - r) % modulus:
                return False
        return True

    def __str__(self):
        if not self.equations:
            return "(all)"
        return "; ".join(f"{','.join(map(str, xi))}:{u}@{r}" for xi, u, r in self.equations)


def flat_members(flat, m, cap=None):
    return {chi for chi in enumerate_characters(flat.p, flat.d, m, cap) if flat.contains(chi)}


@dataclass(frozen=True)
class CoverReport:
    covered: bool
    zero_set_size: int
    union_size: int
    missing: tuple = field(default=())
    extra: tuple = field(default=())
    exact: bool = True
    caveat: str = None


def verify_cover(f, flats, m=None, cap=None):
    """Compare the zero set of f at level m with the union of the flats."""
    if f.is_zero():
        raise InvalidGenerators("a cover can only be verified for a nonzero element")
    zero_set = set(delta_set([f], f.ring, m, cap))
    level = f.ring.m if m is None else m
    union = set()
    for flat in flats:
        union |= flat_members(flat, level, cap)
    order = lambda chars: tuple(sorted(chars, key=lambda chi: chi.exps))
    exact = f.factors is not None
    report = CoverReport(
        covered=zero_set == union,
        zero_set_size=len(zero_set),
        union_size=len(union),
        missing=order(zero_set - union),
        extra=order(union - zero_set),
        exact=exact,
        caveat=None if exact else MOD_P_VANISHING_CAVEAT,
    )
    if not exact:
        logger.warning(MOD_P_VANISHING_CAVEAT)
    return report
