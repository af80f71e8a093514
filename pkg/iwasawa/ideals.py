"""
The ideal families I_n, J_n, I_{r,n} and the two membership tests.

`member_linear` is exact membership in R_{m,N}; `member_char` decides
membership in an I_{r,n} ideal (AUG(n) included, as r_i = -1) by the
vanishing of every character of its zero set.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from arithmetic.exceptions import InvalidGenerators, LevelError, UnsupportedIdeal
from arithmetic.linalg import smith_form

from .characters import delta_set, eval_char, vanishes
from .group_ring import (
    multiplication_matrix,
    nu,
    omega,
    validate_basis,
    validate_tight_set,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IdealSpec:
    AUG = 'AUG'
    TIGHT = 'TIGHT'
    RN = 'RN'
    SUM = 'SUM'
    EXPL = 'EXPL'
    KIND_CHOICES = [
        (AUG, 'Augmentation ideal I_n'),
        (TIGHT, 'J_n from a tight generating set'),
        (RN, 'I_{r,n} over a basis'),
        (SUM, 'Sum of ideals'),
        (EXPL, 'Explicit generators'),
    ]

    kind: str
    n: int = None
    taus: tuple = ()
    r: tuple = ()
    ns: tuple = ()
    basis: tuple = None
    parts: tuple = ()
    elements: tuple = ()

    def __post_init__(self):
        if self.kind not in dict(self.KIND_CHOICES):
            raise UnsupportedIdeal(f"unknown ideal kind {self.kind!r}")
        if self.kind in (self.AUG, self.TIGHT) and (self.n is None or self.n < 0):
            raise LevelError(f"{self.kind} needs a level n >= 0, got {self.n}")
        if self.kind == self.RN:
            if len(self.r) != len(self.ns) or not self.r:
                raise InvalidGenerators(f"RN needs r and n of equal length, got {self.r} and {self.ns}")
            for r_i, n_i in zip(self.r, self.ns):
                if not n_i > r_i >= -1:
                    raise InvalidGenerators(f"RN needs n_i > r_i >= -1, got r={self.r}, n={self.ns}")
        if self.kind == self.SUM and not self.parts:
            raise InvalidGenerators("SUM needs at least one ideal")

    @classmethod
    def aug(cls, n):
        return cls(cls.AUG, n=n)

    @classmethod
    def tight(cls, n, taus):
        return cls(cls.TIGHT, n=n, taus=tuple(tuple(t) for t in taus))

    @classmethod
    def rn(cls, r, ns, basis=None):
        basis = tuple(tuple(b) for b in basis) if basis is not None else None
        return cls(cls.RN, r=tuple(r), ns=tuple(ns), basis=basis)

    @classmethod
    def sum(cls, *parts):
        return cls(cls.SUM, parts=tuple(parts))

    @classmethod
    def explicit(cls, elements):
        return cls(cls.EXPL, elements=tuple(str(e) for e in elements))

    @property
    def max_level(self):
        """Largest level index the generators need."""
        if self.kind in (self.AUG, self.TIGHT):
            return self.n
        if self.kind == self.RN:
            return max(self.ns)
        if self.kind == self.SUM:
            return max(part.max_level for part in self.parts)
        return 0

    def realize(self, ring):
        if ring.m < self.max_level:
            raise LevelError(f"{self} needs level >= {self.max_level}, ring is at {ring.m}")
        if self.kind == self.AUG:
            return [omega(ring, sigma, self.n) for sigma in ring.standard_basis()]
        if self.kind == self.TIGHT:
            taus = validate_tight_set(ring, self.taus)
            return [nu(ring, tau, 0, self.n) for tau in taus]
        if self.kind == self.RN:
            if len(self.r) != ring.d:
                raise InvalidGenerators(f"RN needs {ring.d} pairs (r_i, n_i), got {len(self.r)}")
            basis = validate_basis(ring, self.basis or ring.standard_basis())
            return [nu(ring, sigma, r_i, n_i) for sigma, r_i, n_i in zip(basis, self.r, self.ns)]
        if self.kind == self.SUM:
            return [g for part in self.parts for g in part.realize(ring)]
        from .grammar import parse_element

        return [parse_element(text, ring) for text in self.elements]

    def __str__(self):
        vec = lambda v: "[" + ", ".join(map(str, v)) + "]"
        if self.kind == self.AUG:
            return f"AUG({self.n})"
        if self.kind == self.TIGHT:
            return f"TIGHT({self.n}; tau={vec(vec(t) for t in self.taus)})"
        if self.kind == self.RN:
            text = f"RN(r={vec(self.r)}, n={vec(self.ns)}"
            if self.basis is not None:
                text += f", basis={vec(vec(b) for b in self.basis)}"
            return text + ")"
        if self.kind == self.SUM:
            return f"SUM({', '.join(map(str, self.parts))})"
        return f"EXPL({vec(self.elements)})"


def span_matrix(generators, ring):
    """Columns spanning the ideal as a Z/p^N-module: every g * sigma^h."""
    if not generators:
        return ring.chain.zeros((ring.size, 0))
    return np.hstack([multiplication_matrix(g) for g in generators])


@lru_cache(maxsize=64)
def ideal_form(spec, ring):
    return smith_form(span_matrix(spec.realize(ring), ring), ring.chain)


def member_linear(x, spec):
    """Exact membership of x in the realized ideal."""
    return ideal_form(spec, x.ring).contains(x.coeffs)


def has_character_criterion(spec):
    return spec.kind in (IdealSpec.AUG, IdealSpec.RN)


def character_form(spec, d):
    """The I_{r,n} form of an ideal; AUG(n) is r_i = -1, n_i = n over the standard basis."""
    if spec.kind == IdealSpec.AUG:
        return IdealSpec.rn((-1,) * d, (spec.n,) * d)
    if spec.kind != IdealSpec.RN:
        raise UnsupportedIdeal(f"character membership is only defined for AUG and RN ideals, not {spec.kind}")
    return spec


def member_char(x, spec, m=None, cap=None):
    """Membership in I_{r,n} by vanishing on its zero set."""
    zero_set = delta_set(character_form(spec, x.ring.d), x.ring, m, cap)
    if x.factors is None:
        logger.debug("membership of an unfactored element decided mod p^%s", x.ring.N)
    return all(vanishes(chi, x) for chi in zero_set)


@dataclass(frozen=True)
class DivisibilityResult:
    observed: int
    bound: int
    passed: bool


def divisibility_bound(spec, N):
    """min(n, n_i - r_i) over the TIGHT and RN parts, capped at N."""
    parts = spec.parts if spec.kind == IdealSpec.SUM else (spec,)
    bounds = [N]
    for part in parts:
        if part.kind == IdealSpec.TIGHT:
            bounds.append(part.n)
        elif part.kind == IdealSpec.RN:
            bounds.extend(n_i - r_i for r_i, n_i in zip(part.r, part.ns))
        else:
            raise UnsupportedIdeal(f"no divisibility bound for {part.kind} ideals")
    return min(bounds)


def divisibility_check(x, spec, chi):
    """Valuation of chi(x) against the bound for elements of I_{r,n} + J_n."""
    parts = spec.parts if spec.kind == IdealSpec.SUM else (spec,)
    for part in parts:
        levels = [part.n] if part.kind == IdealSpec.TIGHT else list(part.ns)
        if part.kind in (IdealSpec.TIGHT, IdealSpec.RN) and chi.order_level > min(levels):
            raise LevelError(
                f"character {chi} of order p^{chi.order_level} exceeds the levels {levels} of {part}"
            )
    bound = divisibility_bound(spec, x.ring.N)
    observed = eval_char(chi, x).valuation()
    return DivisibilityResult(observed, bound, observed >= bound)


def ideal_inclusion(first, second, ring):
    """A generator of `first` outside `second`, or None when first ⊆ second."""
    for g in first.realize(ring):
        if not member_linear(g, second):
            logger.debug("%s not contained in %s: witness %s", first, second, g)
            return g
    return None


def tight_omega(ring, taus):
    """omega = prod_j omega_{tau_j,0}."""
    result = ring.one()
    for tau in validate_tight_set(ring, taus):
        result = result * omega(ring, tau, 0)
    return result


@dataclass(frozen=True)
class CrossCheck:
    samples: int
    agreements: int
    members: int
    witnesses: tuple = ()

    @property
    def rate(self):
        return self.agreements / self.samples if self.samples else 1.0


def sample_candidates(spec, ring, count, rng):
    """Alternating random members and members shifted by p^k * sigma^h."""
    generators = spec.realize(ring)
    for i in range(count):
        x = ring.zero()
        for g in generators:
            x = x + ring.element(rng.integers(0, ring.chain.q, size=ring.size)) * g
        if i % 2:
            k = int(rng.integers(0, ring.N))
            h = tuple(int(e) for e in rng.integers(0, ring.order, size=ring.d))
            x = x + ring.group_element(h) * ring.chain.powers[k]
        yield x


def cross_check(spec, ring, samples, seed=0, cap=None):
    """Compare member_linear and member_char on `samples` seeded candidates."""
    rng = np.random.default_rng(seed)
    agreements = members = 0
    witnesses = []
    for x in sample_candidates(spec, ring, samples, rng):
        linear = member_linear(x, spec)
        members += linear
        if linear == member_char(x, spec, cap=cap):
            agreements += 1
        else:
            logger.warning("membership tests disagree on %s (linear=%s)", x, linear)
            witnesses.append(x)
    return CrossCheck(samples, agreements, members, tuple(witnesses))
