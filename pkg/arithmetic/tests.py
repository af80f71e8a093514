import itertools

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st
from sympy import Poly, cyclotomic_poly, symbols

from .cyclotomic import CyclotomicInt, cyc_embed_root, cyc_mul, totient
from .exceptions import InvalidGenerators, LevelError, PrecisionMismatch
from .linalg import (
    FiniteModulePresentation,
    exhaustive_kernel,
    intersection,
    inverse,
    kernel,
    membership,
    module_invariants,
    smith_form,
    span_order_exp,
)
from .residues import ChainRing, Residue, format_valuation, val_p


@st.composite
def residue_triples(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    N = draw(st.integers(1, 4))
    values = draw(st.lists(st.integers(0, p ** N - 1), min_size=3, max_size=3))
    return [Residue(v, p, N) for v in values]


@st.composite
def cyclotomic_triples(draw):
    p = draw(st.sampled_from([2, 3]))
    m = draw(st.integers(0, 2))
    N = draw(st.integers(1, 3))
    length = totient(p, m)
    coeff = st.lists(st.integers(0, p ** N - 1), min_size=length, max_size=length)
    return [CyclotomicInt(tuple(draw(coeff)), m, p, N) for _ in range(3)]


@st.composite
def chain_matrices(draw, max_size=8):
    p = draw(st.sampled_from([2, 3]))
    N = draw(st.integers(1, 3))
    rows = draw(st.integers(1, max_size))
    cols = draw(st.integers(1, max_size))
    entries = draw(st.lists(st.integers(0, p ** N - 1), min_size=rows * cols, max_size=rows * cols))
    chain = ChainRing(p, N)
    return chain, chain.reduce(np.array(entries).reshape(rows, cols))


class ResidueTests(SimpleTestCase):
    def test_valuation_examples(self):
        self.assertEqual(val_p(Residue(9, 3, 3)), 2)
        self.assertEqual(val_p(Residue(5, 3, 3)), 0)
        self.assertEqual(val_p(Residue(0, 2, 4)), 4)
        self.assertEqual(format_valuation(val_p(Residue(0, 2, 4)), 4), "≥ 4")
        self.assertEqual(format_valuation(2, 3), "2")

    def test_values_are_reduced(self):
        self.assertEqual(Residue(-1, 2, 3).value, 7)
        self.assertEqual((Residue(5, 2, 3) * 3).value, 7)

    def test_mixed_precision_is_rejected(self):
        with self.assertRaises(PrecisionMismatch):
            Residue(1, 2, 3) + Residue(1, 2, 4)

    def test_chain_ring_requires_prime(self):
        with self.assertRaises(InvalidGenerators):
            ChainRing(4, 2)

    @settings(deadline=None, max_examples=1000)
    @given(residue_triples())
    def test_ring_axioms(self, triple):
        a, b, c = triple
        self.assertEqual((a * b) * c, a * (b * c))
        self.assertEqual(a * (b + c), a * b + a * c)
        self.assertEqual(a * b, b * a)
        self.assertEqual(a + b, b + a)
        self.assertEqual((a + b) + c, a + (b + c))

    @settings(deadline=None, max_examples=300)
    @given(residue_triples())
    def test_valuation_axioms(self, triple):
        a, b, _ = triple
        N = a.N
        self.assertGreaterEqual(val_p(a * b), min(val_p(a) + val_p(b), N))
        self.assertGreaterEqual(val_p(a + b), min(val_p(a), val_p(b)))


class CyclotomicTests(SimpleTestCase):
    def test_square_roots_of_unity(self):
        minus_one = cyc_embed_root(1, 1, 2, 3)
        self.assertEqual(minus_one.coeffs, (7,))
        self.assertEqual(cyc_mul(minus_one, minus_one).coeffs, (1,))

    def test_fourth_root_squares_to_minus_one(self):
        i = cyc_embed_root(1, 2, 2, 3)
        self.assertEqual(i.coeffs, (0, 1))
        self.assertEqual((i * i).coeffs, (7, 0))

    def test_cube_root_product(self):
        one = cyc_embed_root(0, 1, 3, 2)
        zeta = cyc_embed_root(1, 1, 3, 2)
        zeta_sq = cyc_embed_root(2, 1, 3, 2)
        self.assertEqual(zeta_sq.coeffs, (8, 8))
        self.assertEqual(((one + zeta) * (one + zeta_sq)), one)

    def test_trivial_level_is_a_residue(self):
        self.assertEqual(cyc_embed_root(0, 0, 3, 2).coeffs, (1,))
        value = CyclotomicInt.from_integer(6, 0, 3, 2)
        self.assertEqual((value * value).coeffs, (0,))

    def test_root_exponent_out_of_range(self):
        with self.assertRaises(LevelError):
            cyc_embed_root(4, 1, 2, 3)

    def test_full_orbit_sums_to_zero(self):
        for p, m in itertools.product([2, 3], [1, 2, 3]):
            total = CyclotomicInt.from_integer(0, m, p, 3)
            for e in range(p ** m):
                total = total + cyc_embed_root(e, m, p, 3)
            self.assertTrue(total.is_zero(), (p, m))

    def test_root_satisfies_cyclotomic_polynomial(self):
        x = symbols('x')
        for p, m in itertools.product([2, 3], [1, 2, 3]):
            zeta = cyc_embed_root(1, m, p, 3)
            power = CyclotomicInt.from_integer(1, m, p, 3)
            total = CyclotomicInt.from_integer(0, m, p, 3)
            for coefficient in reversed(Poly(cyclotomic_poly(p ** m, x), x).all_coeffs()):
                total = total + CyclotomicInt.from_integer(int(coefficient), m, p, 3) * power
                power = power * zeta
            self.assertTrue(total.is_zero(), (p, m))

    def test_valuation(self):
        one = cyc_embed_root(0, 1, 3, 3)
        zeta = cyc_embed_root(1, 1, 3, 3)
        three = CyclotomicInt.from_integer(3, 1, 3, 3)
        self.assertEqual((three * (one + zeta)).valuation(), 1)
        self.assertEqual(CyclotomicInt.from_integer(0, 1, 3, 3).valuation(), 3)
        self.assertEqual((one - zeta).valuation(), 0)

    def test_level_mismatch(self):
        with self.assertRaises(PrecisionMismatch):
            cyc_embed_root(1, 1, 2, 3) * cyc_embed_root(1, 2, 2, 3)

    @settings(deadline=None, max_examples=500)
    @given(cyclotomic_triples())
    def test_ring_axioms(self, triple):
        a, b, c = triple
        self.assertEqual((a * b) * c, a * (b * c))
        self.assertEqual(a * (b + c), a * b + a * c)
        self.assertEqual(a * b, b * a)


class SmithFormTests(SimpleTestCase):
    def assertRecomposes(self, chain, M):
        form = smith_form(M, chain)
        U, D, V = form
        np.testing.assert_array_equal(chain.matmul(chain.matmul(U, M), V), D)
        np.testing.assert_array_equal(chain.matmul(chain.matmul(form.U_inv, D), form.V_inv), M)
        np.testing.assert_array_equal(chain.matmul(U, form.U_inv), chain.identity(M.shape[0]))
        np.testing.assert_array_equal(chain.matmul(V, form.V_inv), chain.identity(M.shape[1]))
        self.assertEqual(list(form.exponents), sorted(form.exponents))

    def test_single_entry(self):
        chain = ChainRing(2, 2)
        U, D, V = smith_form(np.array([[2]]), chain)
        np.testing.assert_array_equal(D, [[2]])

    def test_identity(self):
        chain = ChainRing(3, 2)
        _, D, _ = smith_form(chain.identity(3), chain)
        np.testing.assert_array_equal(D, chain.identity(3))

    def test_random_four_by_four_over_z8(self):
        chain = ChainRing(2, 3)
        rng = np.random.default_rng(4)
        for _ in range(20):
            self.assertRecomposes(chain, chain.reduce(rng.integers(0, 8, size=(4, 4))))

    def test_pivot_prefers_leftmost_topmost(self):
        chain = ChainRing(3, 2)
        form = smith_form(np.array([[3, 1], [1, 0]]), chain)
        self.assertEqual(form.exponents, (0, 0))
        # first pivot is column 0, row 1
        np.testing.assert_array_equal(form.U[0], [0, 1])

    def test_large_modulus_uses_object_arrays(self):
        chain = ChainRing(5, 12)
        self.assertIs(chain.dtype, object)
        M = chain.reduce(np.array([[5, 25], [125, 7]], dtype=object))
        self.assertRecomposes(chain, M)

    @settings(deadline=None, max_examples=200)
    @given(chain_matrices())
    def test_recomposition(self, sample):
        chain, M = sample
        self.assertRecomposes(chain, M)

    @settings(deadline=None, max_examples=200)
    @given(chain_matrices())
    def test_rank_nullity(self, sample):
        chain, M = sample
        form = smith_form(M, chain)
        self.assertEqual(form.span_order_exp() + form.kernel_order_exp(), chain.N * M.shape[1])


class KernelMembershipTests(SimpleTestCase):
    def test_kernel_of_p(self):
        chain = ChainRing(2, 2)
        K = kernel(np.array([[2]]), chain)
        np.testing.assert_array_equal(K, [[2]])
        self.assertEqual(span_order_exp(K, chain), 1)

    def test_kernel_of_invertible_matrix_is_zero(self):
        chain = ChainRing(3, 2)
        self.assertEqual(kernel(np.array([[1, 1], [0, 1]]), chain).shape, (2, 0))

    def test_membership_examples(self):
        chain = ChainRing(2, 2)
        M = np.array([[2, 1], [0, 2]])
        self.assertTrue(membership(np.zeros(2, dtype=np.int64), M, chain))
        self.assertTrue(membership(M[:, 0], M, chain))
        self.assertFalse(membership(np.array([1]), np.array([[2]]), chain))

    def test_agrees_with_exhaustive_enumeration(self):
        rng = np.random.default_rng(11)
        for chain in (ChainRing(2, 2), ChainRing(3, 2)):
            for _ in range(30):
                shape = tuple(rng.integers(1, 4, size=2))
                M = chain.reduce(rng.integers(0, chain.q, size=shape))
                form = smith_form(M, chain)
                brute = exhaustive_kernel(M, chain)
                self.assertEqual(len(brute), chain.p ** form.kernel_order_exp())
                K = form.kernel()
                self.assertFalse(chain.matmul(M, K).any())
                kernel_form = smith_form(K, chain)
                for x in brute:
                    self.assertTrue(kernel_form.contains(np.array(x)))

                span = {
                    tuple(int(v) for v in chain.matmul(M, np.array(x)))
                    for x in itertools.product(range(chain.q), repeat=M.shape[1])
                }
                for v in itertools.product(range(chain.q), repeat=M.shape[0]):
                    self.assertEqual(form.contains(np.array(v)), v in span)

    def test_solve_returns_preimage(self):
        chain = ChainRing(3, 2)
        M = np.array([[3, 0], [1, 3]])
        x = smith_form(M, chain).solve(np.array([6, 5]))
        np.testing.assert_array_equal(chain.matmul(M, x), [6, 5])

    def test_intersection(self):
        chain = ChainRing(2, 3)
        a = np.array([[2], [0]])
        b = np.array([[1], [0]])
        self.assertEqual(span_order_exp(intersection(a, b, chain), chain), 2)
        self.assertEqual(intersection(a, np.array([[0], [1]]), chain).shape[1], 0)

    def test_inverse(self):
        chain = ChainRing(3, 2)
        M = np.array([[1, 3], [2, 1]])
        np.testing.assert_array_equal(chain.matmul(M, inverse(M, chain)), chain.identity(2))
        with self.assertRaises(InvalidGenerators):
            inverse(np.array([[3]]), chain)


class ModuleInvariantTests(SimpleTestCase):
    def test_cyclic_module(self):
        chain = ChainRing(3, 2)
        inv = module_invariants(FiniteModulePresentation.free(chain, 1))
        self.assertEqual((inv.order_exp, inv.p_rank, inv.free_rank), (2, 1, 1))

    def test_identity_relations_give_zero(self):
        chain = ChainRing(2, 3)
        inv = module_invariants(FiniteModulePresentation(chain, 2, chain.identity(2)))
        self.assertTrue(inv.is_zero)
        self.assertEqual(inv.p_rank, 0)

    def test_diag_p_p(self):
        chain = ChainRing(2, 2)
        inv = module_invariants(FiniteModulePresentation(chain, 2, np.array([[2, 0], [0, 2]])))
        self.assertEqual((inv.order_exp, inv.p_rank, inv.divisors, inv.free_rank), (2, 2, (1, 1), 0))

    def test_subquotient_and_elements(self):
        chain = ChainRing(2, 3)
        top = chain.identity(2)
        bottom = np.array([[2, 0], [0, 4]])
        module = FiniteModulePresentation.subquotient(chain, top, bottom)
        inv = module_invariants(module)
        self.assertEqual((inv.order_exp, inv.divisors), (3, (1, 2)))
        elements = module.elements(limit=100)
        self.assertEqual(elements.shape[1], 8)
        classes = {(int(v[0]) % 2, int(v[1]) % 4) for v in elements.T}
        self.assertEqual(len(classes), 8)
        self.assertIsNone(module.elements(limit=7))
