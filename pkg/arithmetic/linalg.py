"""
Linear algebra over the chain ring Z/p^N.

Matrices are numpy arrays reduced into [0, p^N). Every ideal of Z/p^N is
(p^e), so Gaussian elimination pivoting on an entry of minimal valuation
reaches a diagonal form diag(p^e_1, ..., p^e_r, 0, ...) with
e_1 <= e_2 <= ... (the chain-ring Smith form). Kernels, membership, images
and module invariants are all read off that form.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .exceptions import InvalidGenerators, PrecisionMismatch

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SmithForm:
    """U @ M @ V = D, with U, V invertible and D = diag(p^e_i)."""

    chain: object
    shape: tuple
    U: np.ndarray
    U_inv: np.ndarray
    V: np.ndarray
    V_inv: np.ndarray
    exponents: tuple

    @property
    def rank(self):
        return len(self.exponents)

    @property
    def D(self):
        rows, cols = self.shape
        diagonal = self.chain.zeros((rows, cols))
        for i, e in enumerate(self.exponents):
            diagonal[i, i] = self.chain.powers[e]
        return diagonal

    def __iter__(self):
        return iter((self.U, self.D, self.V))

    def contains_columns(self, vectors):
        """Boolean mask: which columns of `vectors` lie in the column span of M."""
        vectors = self.chain.reduce(vectors)
        if vectors.ndim == 1:
            vectors = vectors.reshape(-1, 1)
        rows, _ = self.shape
        if vectors.shape[0] != rows:
            raise PrecisionMismatch(
                f"vector length {vectors.shape[0]} does not match {rows} rows"
            )
        if vectors.shape[1] == 0:
            return np.zeros(0, dtype=bool)
        transformed = self.chain.matmul(self.U, vectors)
        ok = np.ones(vectors.shape[1], dtype=bool)
        if self.rank:
            vals = self.chain.valuations(transformed[:self.rank])
            needed = np.array(self.exponents, dtype=np.int64).reshape(-1, 1)
            ok &= (vals >= needed).all(axis=0)
        if self.rank < rows:
            ok &= (transformed[self.rank:] == 0).all(axis=0)
        return ok

    def contains(self, vector):
        return bool(self.contains_columns(vector)[0])

    def solve(self, vector):
        """Some x with M @ x = vector, or None."""
        if not self.contains(vector):
            return None
        chain = self.chain
        transformed = chain.matmul(self.U, chain.reduce(vector))
        y = chain.zeros(self.shape[1])
        for i, e in enumerate(self.exponents):
            y[i] = int(transformed[i]) // chain.powers[e]
        return chain.matmul(self.V, y)

    def kernel(self):
        """Generators (as columns) of {x : M @ x = 0}."""
        chain = self.chain
        cols = self.shape[1]
        columns = []
        for i, e in enumerate(self.exponents):
            if e > 0:
                columns.append(chain.reduce(self.V[:, i] * chain.powers[chain.N - e]))
        for i in range(self.rank, cols):
            columns.append(self.V[:, i])
        return _stack(chain, cols, columns)

    def kernel_order_exp(self):
        return sum(self.exponents) + self.chain.N * (self.shape[1] - self.rank)

    def image(self):
        """Generators of the column span, at most one per elementary divisor."""
        chain = self.chain
        columns = [
            chain.reduce(self.U_inv[:, i] * chain.powers[e])
            for i, e in enumerate(self.exponents)
        ]
        return _stack(chain, self.shape[0], columns)

    def span_order_exp(self):
        """log_p of the size of the column span."""
        return sum(self.chain.N - e for e in self.exponents)


def _stack(chain, length, columns):
    if not columns:
        return chain.zeros((length, 0))
    return chain.reduce(np.stack(columns, axis=1))


def smith_form(matrix, chain):
    """Chain-ring Smith form with tracked transforms.

    Pivot: minimal valuation in the remaining block, leftmost column first,
    then topmost row.
    """
    A = chain.reduce(matrix).copy()
    if A.ndim != 2:
        raise PrecisionMismatch(f"expected a matrix, got shape {A.shape}")
    rows, cols = A.shape
    q = chain.q
    U, U_inv = chain.identity(rows), chain.identity(rows)
    V, V_inv = chain.identity(cols), chain.identity(cols)
    exponents = []

    for k in range(min(rows, cols)):
        vals = chain.valuations(A[k:, k:])
        e = int(vals.min())
        if e >= chain.N:
            break
        j, i = np.argwhere(vals.T == e)[0]
        i, j = int(i) + k, int(j) + k
        if i != k:
            A[[k, i]] = A[[i, k]]
            U[[k, i]] = U[[i, k]]
            U_inv[:, [k, i]] = U_inv[:, [i, k]]
        if j != k:
            A[:, [k, j]] = A[:, [j, k]]
            V[:, [k, j]] = V[:, [j, k]]
            V_inv[[k, j]] = V_inv[[j, k]]

        scale = chain.powers[e]
        unit = int(A[k, k]) // scale
        inv = chain.unit_inverse(unit)
        A[k] = A[k] * inv % q
        U[k] = U[k] * inv % q
        U_inv[:, k] = U_inv[:, k] * unit % q

        factors = A[:, k] // scale
        factors[k] = 0
        if factors.any():
            A = chain.reduce(A - np.outer(factors, A[k]))
            U = chain.reduce(U - np.outer(factors, U[k]))
            U_inv[:, k] = chain.reduce(U_inv[:, k] + np.dot(U_inv, factors))

        factors = A[k] // scale
        factors[k] = 0
        if factors.any():
            A[k] = 0
            A[k, k] = scale
            V = chain.reduce(V - np.outer(V[:, k], factors))
            V_inv[k] = chain.reduce(V_inv[k] + np.dot(factors, V_inv))

        exponents.append(e)

    logger.debug("smith form %sx%s over %s: rank %s", rows, cols, chain, len(exponents))
    return SmithForm(chain, (rows, cols), U, U_inv, V, V_inv, tuple(exponents))


def kernel(matrix, chain):
    return smith_form(matrix, chain).kernel()


def membership(vector, matrix, chain):
    return smith_form(matrix, chain).contains(vector)


def solve(vector, matrix, chain):
    return smith_form(matrix, chain).solve(vector)


def image(matrix, chain):
    return smith_form(matrix, chain).image()


def span_order_exp(matrix, chain):
    return smith_form(matrix, chain).span_order_exp()


def intersection(a, b, chain):
    """Generators of colspan(a) ∩ colspan(b)."""
    a = chain.reduce(a)
    b = chain.reduce(b)
    if a.shape[1] == 0 or b.shape[1] == 0:
        return chain.zeros((a.shape[0], 0))
    joint = kernel(np.hstack([a, chain.reduce(-b)]), chain)
    return image(chain.matmul(a, joint[:a.shape[1]]), chain)


def inverse(matrix, chain):
    form = smith_form(matrix, chain)
    rows, cols = form.shape
    if rows != cols or form.rank != rows or any(form.exponents):
        raise InvalidGenerators("matrix is not invertible over " + str(chain))
    return chain.matmul(form.V, form.U)


def exhaustive_kernel(matrix, chain):
    """All x with M @ x = 0, by enumeration. Only for tiny matrices."""
    matrix = chain.reduce(matrix)
    cols = matrix.shape[1]
    candidates = np.array(list(itertools.product(range(chain.q), repeat=cols)), dtype=chain.dtype)
    images = chain.matmul(candidates, matrix.T)
    return [tuple(int(v) for v in row) for row in candidates[~images.any(axis=1)]]


@dataclass(frozen=True)
class ModuleInvariants:
    order_exp: int
    p_rank: int
    divisors: tuple
    free_rank: int
    N: int

    @property
    def is_zero(self):
        return self.order_exp == 0


@dataclass(frozen=True, eq=False)
class FiniteModulePresentation:
    """Cokernel of `relations` (generators x r) over Z/p^N.

    `embedding`, when present, holds one ambient column per generator; it lets
    subquotients hand back concrete representatives of their elements.
    """

    chain: object
    generators: int
    relations: np.ndarray
    embedding: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.relations.shape[0] != self.generators:
            raise PrecisionMismatch(
                f"relation matrix has {self.relations.shape[0]} rows for "
                f"{self.generators} generators"
            )

    @classmethod
    def free(cls, chain, rank):
        return cls(chain, rank, chain.zeros((rank, 0)))

    @classmethod
    def subquotient(cls, chain, top, bottom):
        """colspan(top) / colspan(bottom), assuming bottom ⊆ top."""
        top = image(top, chain)
        bottom = image(bottom, chain)
        k = top.shape[1]
        if k == 0:
            return cls(chain, 0, chain.zeros((0, 0)), top)
        joint = kernel(np.hstack([top, chain.reduce(-bottom)]), chain)
        return cls(chain, k, chain.reduce(joint[:k]), top)

    @cached_property
    def form(self):
        return smith_form(self.relations, self.chain)

    def cyclic_exponents(self):
        """Exponents e with the module ≅ ⊕ Z/p^e (units dropped)."""
        exps = list(self.form.exponents)
        exps += [self.chain.N] * (self.generators - len(exps))
        return tuple(e for e in exps if e > 0)

    def elements(self, limit):
        """Ambient representatives of every element, one per class.

        Requires an embedding; yields columns of a matrix in batches of at most
        `limit` total elements. Returns None when the module is larger than limit.
        """
        form = self.form
        exps = list(form.exponents) + [self.chain.N] * (self.generators - form.rank)
        size = 1
        for e in exps:
            size *= self.chain.powers[e]
            if size > limit:
                return None
        ranges = [range(self.chain.powers[e]) for e in exps]
        coords = np.array(list(itertools.product(*ranges)), dtype=self.chain.dtype)
        coords = coords.reshape(size, self.generators).T
        coefficients = self.chain.matmul(form.U_inv, coords)
        return self.chain.matmul(self.embedding, coefficients)


def module_invariants(presentation):
    exps = presentation.cyclic_exponents()
    N = presentation.chain.N
    return ModuleInvariants(
        order_exp=sum(exps),
        p_rank=len(exps),
        divisors=tuple(sorted(exps)),
        free_rank=sum(1 for e in exps if e == N),
        N=N,
    )
