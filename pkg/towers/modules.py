"""
Finitely presented Lambda-modules and their towers.

A module Y = Lambda^g / (relations) is realized at a group-ring level L and a
precision N as the Z/p^N-module F / Rel with F = R_{L,N}^g, flattened to
vectors of length g * p^(dL) (generator-major). Submodules are column spans.

For an ideal family (W_n) the tower data are:

- the quotients Y / W_n,
- the kernels of the norm maps nu_{n,m}: Y / W_n -> Y / W_m, computed as
  Pre(n, m) / W_n with Pre(n, m) = {x in F : nu_{n,m} x in W_m},
- compatible chains: classes of Pre(n_max, m) / W_{n_max} lying in every
  Pre(n, m), the finite-window picture of the inverse limit of the kernels.

On a p^N-truncated quotient nu_{n,m} can kill an element only because it
multiplies by a power of p. The stable kernel removes those artifacts by
taking the preimage at precision N + slack and reducing it back to p^N.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import numpy as np
from django.conf import settings

from arithmetic.exceptions import CapExceeded, CompatibilityError, InvalidGenerators, LevelError
from arithmetic.linalg import (
    FiniteModulePresentation,
    image,
    intersection,
    kernel,
    module_invariants,
    smith_form,
    span_order_exp,
)
from iwasawa.grammar import parse_element
from iwasawa.group_ring import (
    basis_from_tight_set,
    multiplication_matrix,
    nu,
    nu_full,
    validate_tight_set,
)
from iwasawa.ideals import IdealSpec

from .reports import GridEntry, QuotientEntry, RankGrowthRow, StabilizationEntry, TowerReport

logger = logging.getLogger(__name__)

MODELING_NOTE = (
    "ramification is modeled by the Lambda-span of nu_{tau_j,0,n} x_j plus I_n X; "
    "the full group G is not represented"
)


@dataclass(frozen=True)
class LambdaPresentation:
    """Lambda^g modulo relation columns; each column holds g element expressions."""

    g: int
    relations: tuple = ()

    def __post_init__(self):
        if self.g < 1:
            raise InvalidGenerators(f"a presentation needs at least one generator, got {self.g}")
        relations = tuple(tuple(str(e) for e in column) for column in self.relations)
        for column in relations:
            if len(column) != self.g:
                raise InvalidGenerators(f"relation {list(column)} does not have {self.g} entries")
        object.__setattr__(self, 'relations', relations)

    @classmethod
    def free(cls, rank=1):
        return cls(rank)

    @classmethod
    def quotient(cls, *expressions):
        """Lambda / (e_1, ..., e_k)."""
        return cls(1, tuple((e,) for e in expressions))

    def __str__(self):
        if not self.relations:
            return "free" if self.g == 1 else f"free {self.g}"
        if self.g == 1:
            return "quot " + "; ".join(column[0] for column in self.relations)
        columns = "; ".join("[" + ", ".join(column) + "]" for column in self.relations)
        return f"pres {self.g}: {columns}"


@dataclass(frozen=True, eq=False)
class RealizedModule:
    presentation: LambdaPresentation
    ring: object
    relations: np.ndarray

    @property
    def g(self):
        return self.presentation.g

    @property
    def chain(self):
        return self.ring.chain

    @property
    def dimension(self):
        return self.g * self.ring.size

    def act(self, element):
        """Matrix of multiplication by a ring element on F."""
        return np.kron(np.eye(self.g, dtype=np.int64), multiplication_matrix(element)).astype(
            self.chain.dtype
        )

    def span_of(self, vector):
        """Columns spanning the Lambda-span of a vector of g elements."""
        return np.vstack([multiplication_matrix(v) for v in vector])

    def vector(self, vector):
        return np.concatenate([v.coeffs for v in vector])

    def columns(self, *blocks):
        """Compressed span of the blocks together with the relations."""
        return image(np.hstack(list(blocks) + [self.relations]), self.chain)

    def ideal_submodule(self, generators):
        return self.columns(*(self.act(theta) for theta in generators))

    def presentation_matrix(self):
        return FiniteModulePresentation(self.chain, self.dimension, self.relations)

    def describe(self, column):
        parts = [
            str(self.ring.element(column[i * self.ring.size:(i + 1) * self.ring.size]))
            for i in range(self.g)
        ]
        return parts[0] if self.g == 1 else "(" + ", ".join(parts) + ")"


def dimension_cap():
    return settings.IWASAWA['MATRIX_DIMENSION_CAP']


def realize_module(presentation, ring):
    """Y at level (m, N): relation entries lifted into R_{m,N}."""
    dimension = presentation.g * ring.size
    if dimension > dimension_cap():
        raise CapExceeded(f"module dimension {dimension} exceeds the cap {dimension_cap()}")
    blocks = [ring.chain.zeros((dimension, 0))]
    for column in presentation.relations:
        entries = [parse_element(text, ring) for text in column]
        blocks.append(np.vstack([multiplication_matrix(e) for e in entries]))
    relations = ring.chain.reduce(np.hstack(blocks))
    logger.debug("realized %s at %s: %s relation columns", presentation, ring, relations.shape[1])
    return RealizedModule(presentation, ring, relations)


@dataclass(frozen=True)
class IdealFamily:
    """W_n = I_n Y (kind 'I') or J_n Y for a tight set (kind 'J')."""

    kind: str = 'J'
    taus: tuple = None

    def __post_init__(self):
        if self.kind not in ('I', 'J'):
            raise InvalidGenerators(f"unknown ideal family {self.kind!r}, expected I or J")
        if self.taus is not None:
            object.__setattr__(self, 'taus', tuple(tuple(t) for t in self.taus))

    def tight_set(self, ring):
        return validate_tight_set(ring, self.taus or ring.standard_basis())

    def spec(self, ring, n):
        if self.kind == 'I':
            return IdealSpec.aug(n)
        return IdealSpec.tight(n, self.tight_set(ring))

    def basis(self, ring):
        if self.kind == 'I':
            return ring.standard_basis()
        return basis_from_tight_set(ring, self.tight_set(ring))

    def submodule(self, module, n):
        return module.ideal_submodule(self.spec(module.ring, n).realize(module.ring))

    def describe(self):
        if self.kind == 'I':
            return {'family': 'I'}
        return {'family': 'J', 'tau': [list(t) for t in self.taus] if self.taus else None}

    def __str__(self):
        return self.kind if self.kind == 'I' or not self.taus else f"J{list(map(list, self.taus))}"


@dataclass(frozen=True)
class InertiaFamily:
    """J_n = I_n X + Lambda-span{nu_{tau_j,0,n} x_j}; pairs are (j, x_j), j 1-based."""

    taus: tuple
    pairs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'taus', tuple(tuple(t) for t in self.taus))
        pairs = tuple((int(j), tuple(str(e) for e in x)) for j, x in self.pairs)
        for j, _ in pairs:
            if not 1 <= j <= len(self.taus):
                raise InvalidGenerators(f"inertia index {j} outside 1..{len(self.taus)}")
        object.__setattr__(self, 'pairs', pairs)

    def basis(self, ring):
        return basis_from_tight_set(ring, validate_tight_set(ring, self.taus))

    def submodule(self, module, n):
        ring = module.ring
        validate_tight_set(ring, self.taus)
        blocks = [module.act(theta) for theta in IdealSpec.aug(n).realize(ring)]
        for j, offset in self.pairs:
            if len(offset) != module.g:
                raise InvalidGenerators(f"inertia offset {list(offset)} needs {module.g} entries")
            norm = nu(ring, self.taus[j - 1], 0, n)
            blocks.append(module.span_of([norm * parse_element(text, ring) for text in offset]))
        return module.columns(*blocks)

    def describe(self):
        return {
            'tight': [list(t) for t in self.taus],
            'inertia': [{'j': j, 'x': list(x)} for j, x in self.pairs],
        }

    def __str__(self):
        return "; ".join(f"{j}:{x[0] if len(x) == 1 else list(x)}" for j, x in self.pairs)


@dataclass(frozen=True)
class KernelEntry:
    n: int
    m: int
    invariants: object
    raw: object
    module: FiniteModulePresentation = field(repr=False)


class Tower:
    """Quotients and norm-map kernels of one module and one ideal family at level `ring`."""

    def __init__(self, presentation, family, ring, slack=None):
        self.presentation = presentation
        self.family = family
        self.ring = ring
        self.slack = slack
        self._modules = {}
        self._submodules = {}
        self._forms = {}
        self._preimages = {}
        self.module = self.realized(ring.N)

    @property
    def chain(self):
        return self.ring.chain

    def realized(self, N):
        if N not in self._modules:
            self._modules[N] = realize_module(self.presentation, self.ring.at(N=N))
        return self._modules[N]

    def _check_level(self, *levels):
        top = max(levels)
        if top > self.ring.m:
            raise LevelError(f"level {top} is above the realization level {self.ring.m}")

    def submodule(self, n, N=None):
        N = self.ring.N if N is None else N
        self._check_level(n)
        if (n, N) not in self._submodules:
            self._submodules[n, N] = self.family.submodule(self.realized(N), n)
        return self._submodules[n, N]

    def form(self, n):
        if n not in self._forms:
            self._forms[n] = smith_form(self.submodule(n), self.chain)
        return self._forms[n]

    def norm_matrix(self, n, m, N=None):
        module = self.realized(self.ring.N if N is None else N)
        return module.act(nu_full(module.ring, n, m, self.family.basis(module.ring)))

    def check_compatible(self, n, m):
        """nu_{n,m} W_n ⊆ W_m, else CompatibilityError with a witness."""
        images = self.chain.matmul(self.norm_matrix(n, m), self.submodule(n))
        mask = self.form(m).contains_columns(images)
        if not mask.all():
            column = int(np.flatnonzero(~mask)[0])
            raise CompatibilityError(
                f"nu_{{{n},{m}}} does not map W_{n} into W_{m}",
                witness=self.module.describe(self.submodule(n)[:, column]),
            )
        logger.debug("compatibility nu_{%s,%s} checked", n, m)

    def check_decreasing(self, n):
        """W_{n+1} ⊆ W_n."""
        mask = self.form(n).contains_columns(self.submodule(n + 1))
        if not mask.all():
            column = int(np.flatnonzero(~mask)[0])
            raise CompatibilityError(
                f"W_{n + 1} is not contained in W_{n}",
                witness=self.module.describe(self.submodule(n + 1)[:, column]),
            )

    def quotient(self, n):
        return FiniteModulePresentation(self.chain, self.module.dimension, self.submodule(n))

    def preimage(self, n, m, N=None):
        """Generators of {x : nu_{n,m} x in W_m} at precision N."""
        N = self.ring.N if N is None else N
        key = (n, m, N)
        if key not in self._preimages:
            module = self.realized(N)
            chain = module.chain
            joint = np.hstack([self.norm_matrix(n, m, N), chain.reduce(-self.submodule(m, N))])
            solutions = kernel(joint, chain)[:module.dimension]
            self._preimages[key] = image(solutions, chain)
        return self._preimages[key]

    def slack_for(self, n, m):
        return self.ring.d * (m - n) if self.slack is None else self.slack

    def stable_preimage(self, n, m):
        extra = self.slack_for(n, m)
        if extra == 0:
            return self.preimage(n, m)
        lifted = self.chain.reduce(self.preimage(n, m, self.ring.N + extra))
        return image(np.hstack([lifted, self.submodule(n)]), self.chain)

    def kernel(self, n, m):
        if m < n:
            raise LevelError(f"norm kernel needs m >= n, got n={n}, m={m}")
        self._check_level(n, m)
        self.check_compatible(n, m)
        raw = FiniteModulePresentation.subquotient(self.chain, self.preimage(n, m), self.submodule(n))
        stable = FiniteModulePresentation.subquotient(
            self.chain, self.stable_preimage(n, m), self.submodule(n)
        )
        return KernelEntry(n, m, module_invariants(stable), module_invariants(raw), stable)

    def compatible_chains(self, n_values, m, limit=None, method='auto'):
        """Count of compatible kernel families over n_values at level m, and the method used."""
        limit = settings.IWASAWA['CHAIN_ENUMERATION_LIMIT'] if limit is None else limit
        n_values = sorted(n_values)
        top = n_values[-1]
        preimages = [self.stable_preimage(n, m) for n in n_values]
        if method in ('auto', 'exhaustive'):
            kernel_module = FiniteModulePresentation.subquotient(
                self.chain, preimages[-1], self.submodule(top)
            )
            elements = kernel_module.elements(limit)
            if elements is not None:
                mask = np.ones(elements.shape[1], dtype=bool)
                for pre in preimages[:-1]:
                    mask &= smith_form(pre, self.chain).contains_columns(elements)
                logger.debug("chains by enumeration of %s elements", elements.shape[1])
                return int(mask.sum()), 'exhaustive'
            if method == 'exhaustive':
                raise CapExceeded(f"kernel at n={top} has more than {limit} elements")
        common = reduce(lambda a, b: intersection(a, b, self.chain), preimages)
        exponent = span_order_exp(common, self.chain) - span_order_exp(self.submodule(top), self.chain)
        return self.chain.p ** exponent, 'linear'

    def separation_index(self, vector, n_max):
        """Smallest n <= n_max with y outside W_n, or None."""
        self._check_level(n_max)
        y = self.chain.reduce(vector)
        for n in range(n_max + 1):
            if not self.form(n).contains(y):
                return n
        return None


def quotient_tower(presentation, family, n, ring):
    """Y / W_n, after checking nu_{n,m} W_n ⊆ W_m for n <= m <= ring.m."""
    tower = Tower(presentation, family, ring)
    for m in range(n, ring.m + 1):
        tower.check_compatible(n, m)
    return tower.quotient(n)


def ddot_kernel(presentation, family, n, m_idx, ring, slack=None):
    return Tower(presentation, family, ring, slack).kernel(n, m_idx)


def _stabilization(n, levels, orders):
    """First m from which the kernel order no longer changes inside the window."""
    i = len(orders) - 1
    while i > 0 and orders[i - 1] == orders[-1]:
        i -= 1
    stabilized = len(orders) == 1 or orders[-1] == orders[-2]
    return StabilizationEntry(n, levels[i], stabilized)


def tower_profile(tower, n_range, m_range, chain_limit=None, inputs=None, metadata=None, cap=None):
    n_range, m_range = sorted(set(n_range)), sorted(set(m_range))
    if not n_range or not m_range or m_range[-1] < n_range[-1]:
        raise LevelError(f"window n in {n_range}, m in {m_range} needs max m >= max n")
    tower._check_level(m_range[-1])
    for n in range(n_range[0], n_range[-1]):
        tower.check_decreasing(n)

    grid, quotients, stabilization = [], [], []
    for n in n_range:
        inv = module_invariants(tower.quotient(n))
        quotients.append(QuotientEntry(n, inv.order_exp, inv.p_rank, inv.divisors))
        levels = [m for m in m_range if m >= n]
        orders = []
        for m in levels:
            entry = tower.kernel(n, m)
            grid.append(GridEntry.from_kernel(entry))
            orders.append(entry.invariants.order_exp)
            logger.debug("kernel (%s, %s): order p^%s", n, m, entry.invariants.order_exp)
        if orders:
            stabilization.append(_stabilization(n, levels, orders))

    limits = settings.IWASAWA
    chain_limit = limits['CHAIN_ENUMERATION_LIMIT'] if chain_limit is None else chain_limit
    chains, method = tower.compatible_chains(n_range, m_range[-1], chain_limit)
    ring = tower.ring
    return TowerReport(
        config={
            'p': ring.p, 'd': ring.d, 'N': ring.N, 'm': ring.m,
            'cap': limits['ENUMERATION_CAP'] if cap is None else cap,
            'chain_limit': chain_limit,
        },
        input=dict(inputs or {}),
        grid=grid,
        quotients=quotients,
        stabilization=stabilization,
        compatible_chains=chains,
        chain_method=method,
        metadata=dict(metadata or {}),
    )


def ddot_profile(presentation, family, n_range, m_range, ring, slack=None, chain_limit=None, inputs=None, cap=None):
    """Kernel grid, quotient profile, stabilization and compatible chains."""
    tower = Tower(presentation, family, ring, slack)
    inputs = {'module': str(presentation), **family.describe(), **(inputs or {})}
    metadata = {'slack': 'd*(m-n)' if slack is None else slack, 'basis': [list(b) for b in family.basis(ring)]}
    return tower_profile(tower, n_range, m_range, chain_limit, inputs, metadata, cap)


def capitulation_tower(presentation, taus, pairs, n_range, m_range, ring, slack=None, chain_limit=None, cap=None):
    """A_n = X / J_n and the kernels of nu_{n,m}: A_n -> A_m."""
    family = InertiaFamily(validate_tight_set(ring, taus), pairs)
    tower = Tower(presentation, family, ring, slack)
    inputs = {'module': str(presentation), **family.describe()}
    metadata = {
        'slack': 'd*(m-n)' if slack is None else slack,
        'basis': [list(b) for b in family.basis(ring)],
        'model': MODELING_NOTE,
    }
    return tower_profile(tower, n_range, m_range, chain_limit, inputs, metadata, cap)


def rank_growth(presentation, ring, n_range):
    """N-visible Z_p-rank of Y / I_n Y per n, with a check one precision step up."""
    rows = []
    for n in n_range:
        if n > ring.m:
            raise LevelError(f"rank at n={n} needs level >= {n}, session is at {ring.m}")
        level = ring.at(m=n)
        rank = module_invariants(realize_module(presentation, level).presentation_matrix()).free_rank
        finer = realize_module(presentation, level.at(N=ring.N + 1)).presentation_matrix()
        rank_next = module_invariants(finer).free_rank
        if rank != rank_next:
            logger.warning("visible rank at n=%s changes from %s to %s at precision %s",
                           n, rank, rank_next, ring.N + 1)
        rows.append(RankGrowthRow(n, rank, rank_next, rank == rank_next, Fraction(rank, ring.p ** (ring.d * n))))
    return rows


def separation_index(presentation, family, vector, n_max, ring):
    """Smallest n <= n_max with y not in W_n; `vector` holds g elements of the ring."""
    tower = Tower(presentation, family, ring)
    return tower.separation_index(tower.module.vector(vector), n_max)
