import itertools
import json
import os
import tempfile
from fractions import Fraction
from io import StringIO
from unittest import mock

import numpy as np
import openpyxl
from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from arithmetic.exceptions import (
    CapExceeded,
    CompatibilityError,
    InvalidGenerators,
    LevelError,
    ParseError,
)
from arithmetic.linalg import smith_form
from iwasawa.group_ring import GroupRing, coset_norm_element, nu
from iwasawa.ideals import IdealSpec

from .grammar import parse_inertia, parse_matrix, parse_module, parse_tight_set, parse_vector
from .modules import (
    IdealFamily,
    InertiaFamily,
    LambdaPresentation,
    Tower,
    capitulation_tower,
    ddot_kernel,
    ddot_profile,
    quotient_tower,
    rank_growth,
    realize_module,
    separation_index,
)
from .session import load_session

TIGHT_2D = ((1, 0), (0, 1), (1, 1))


def plane(m=3):
    return GroupRing(2, 3, m, 2)


def grid_values(report):
    return [(e.n, e.m, e.order_exp, e.raw_order_exp) for e in report.grid]


def all_vectors(chain, dimension):
    """Every vector of (Z/p^N)^dimension, as columns."""
    values = np.array(list(itertools.product(range(chain.q), repeat=dimension)), dtype=np.int64)
    return values.reshape(chain.q ** dimension, dimension).T


def span_set(chain, columns):
    coefficients = all_vectors(chain, columns.shape[1])
    return {tuple(int(c) for c in v) for v in chain.matmul(columns, coefficients).T}


def enumerated_preimage(tower, n, m, vectors):
    """Mask of the vectors v with nu_{n,m} v in W_m, by listing W_m."""
    targets = span_set(tower.chain, tower.submodule(m))
    images = tower.chain.matmul(tower.norm_matrix(n, m), vectors)
    return np.array([tuple(int(c) for c in image) in targets for image in images.T])


class ReversedAugmentation:
    """W_n = I_(2-n) Y, increasing in n."""

    def basis(self, ring):
        return ring.standard_basis()

    def submodule(self, module, n):
        return module.ideal_submodule(IdealSpec.aug(2 - n).realize(module.ring))


class ModuleTests(SimpleTestCase):
    def test_presentations(self):
        self.assertEqual(LambdaPresentation.free(2).g, 2)
        self.assertEqual(str(LambdaPresentation.quotient('2', 'T1')), "quot 2; T1")
        self.assertEqual(str(LambdaPresentation(2, (('2', '0'), ('T1', '1')))), "pres 2: [2, 0]; [T1, 1]")
        with self.assertRaises(InvalidGenerators):
            LambdaPresentation(2, (('1',),))
        with self.assertRaises(InvalidGenerators):
            LambdaPresentation(0)

    def test_realization(self):
        ring = plane(1)
        module = realize_module(LambdaPresentation.quotient('2', 'T1'), ring)
        self.assertEqual(module.dimension, 4)
        self.assertEqual(module.presentation_matrix().cyclic_exponents(), (1, 1))
        free = realize_module(LambdaPresentation.free(2), ring)
        self.assertEqual(free.dimension, 8)
        elementary = realize_module(LambdaPresentation.quotient('2'), ring).presentation_matrix()
        self.assertEqual(elementary.cyclic_exponents(), (1, 1, 1, 1))
        self.assertEqual(free.describe(free.vector([ring.one(), ring.group_element((1, 0))])), "(1, s1)")

    def test_dimension_cap(self):
        with override_settings(IWASAWA={**settings.IWASAWA, 'MATRIX_DIMENSION_CAP': 16}):
            ring = plane(2)
            with self.assertRaises(CapExceeded):
                realize_module(LambdaPresentation.free(2), ring)

    def test_families(self):
        with self.assertRaises(InvalidGenerators):
            IdealFamily('K')
        with self.assertRaises(InvalidGenerators):
            InertiaFamily(TIGHT_2D, ((4, ('1',)),))
        ring = plane(1)
        self.assertEqual(IdealFamily('J').tight_set(ring), ((1, 0), (0, 1)))
        self.assertEqual(IdealFamily('J', TIGHT_2D).spec(ring, 1), IdealSpec.tight(1, TIGHT_2D))
        self.assertEqual(IdealFamily('I').spec(ring, 1), IdealSpec.aug(1))
        self.assertEqual(InertiaFamily(TIGHT_2D, ((3, ('1',)),)).basis(ring), ((1, 0), (0, 1)))


class TowerTests(SimpleTestCase):
    def test_free_module_has_no_stable_kernels(self):
        report = ddot_profile(LambdaPresentation.free(), IdealFamily('J'), range(3), range(4), plane())
        self.assertEqual(len(report.grid), 9)
        self.assertTrue(all(entry.order_exp == 0 for entry in report.grid))
        self.assertEqual(report.compatible_chains, 1)
        self.assertEqual(report.max_order_exp, 0)

    def test_quotient_by_norm_element(self):
        presentation = LambdaPresentation.quotient('nu(s1, 0, 1)')
        report = ddot_profile(presentation, IdealFamily('J'), range(3), range(4), plane())
        self.assertTrue(any(entry.raw_order_exp > 0 for entry in report.grid))
        self.assertTrue(all(entry.order_exp == 0 for entry in report.grid))
        self.assertEqual(report.compatible_chains, 1)
        for entry in report.stabilization:
            self.assertTrue(entry.stabilized)
            self.assertEqual(entry.stable_from, entry.n)

    def test_p_and_t1_quotient(self):
        presentation = LambdaPresentation.quotient('2', 'T1')
        report = ddot_profile(presentation, IdealFamily('J', TIGHT_2D), range(3), range(4), plane())
        self.assertEqual([q.order_exp for q in report.quotients], [0, 1, 3])
        self.assertEqual(report.entry(1, 1).order_exp, 0)
        self.assertEqual(report.entry(2, 2).order_exp, 0)
        self.assertEqual(report.entry(1, 2).order_exp, 1)
        self.assertEqual(report.entry(1, 3).order_exp, 1)
        self.assertEqual(report.entry(2, 3).order_exp, 3)
        for entry in report.grid:
            self.assertEqual(entry.order_exp, entry.raw_order_exp)
            if entry.n == 0:
                self.assertEqual(entry.order_exp, 0)
        self.assertEqual((report.compatible_chains, report.chain_method), (8, 'exhaustive'))

    def test_chain_counting_methods_agree(self):
        tower = Tower(LambdaPresentation.quotient('2', 'T1'), IdealFamily('J', TIGHT_2D), plane())
        self.assertEqual(tower.compatible_chains([0, 1, 2], 3, method='exhaustive'), (8, 'exhaustive'))
        self.assertEqual(tower.compatible_chains([0, 1, 2], 3, method='linear'), (8, 'linear'))
        self.assertEqual(tower.compatible_chains([0, 1, 2], 3, limit=4), (8, 'linear'))
        with self.assertRaises(CapExceeded):
            tower.compatible_chains([0, 1, 2], 3, limit=4, method='exhaustive')

    def test_norm_kernels_match_exhaustive_enumeration(self):
        for module, N in [('free', 1), ('free', 2), ('quot 2', 2), ('quot T1^2', 2)]:
            tower = Tower(parse_module(module), IdealFamily('I'), GroupRing(2, N, 2, 1))
            vectors = all_vectors(tower.chain, tower.module.dimension)
            preimage = enumerated_preimage(tower, 1, 2, vectors)
            bottom = span_set(tower.chain, tower.submodule(1))
            entry = tower.kernel(1, 2)
            self.assertEqual(Fraction(int(preimage.sum()), len(bottom)), 2 ** entry.raw.order_exp, module)

    def test_transition_maps_carry_preimages_forward(self):
        tower = Tower(parse_module('quot 2'), IdealFamily('I'), GroupRing(2, 2, 2, 1))
        vectors = all_vectors(tower.chain, tower.module.dimension)
        for n in range(3):
            expected = enumerated_preimage(tower, n, 2, vectors)
            computed = smith_form(tower.preimage(n, 2), tower.chain).contains_columns(vectors)
            np.testing.assert_array_equal(computed, expected)
        for n, later in [(0, 1), (0, 2), (1, 2)]:
            members = vectors[:, enumerated_preimage(tower, n, 2, vectors)]
            moved = tower.chain.matmul(tower.norm_matrix(n, later), members)
            self.assertTrue(enumerated_preimage(tower, later, 2, moved).all(), (n, later))
            self.assertTrue(smith_form(tower.preimage(later, 2), tower.chain).contains_columns(moved).all())

    def test_preimages_shrink_with_n(self):
        tower = Tower(LambdaPresentation.quotient('nu(s1, 0, 1)'), IdealFamily('J'), plane())
        for n in range(2):
            outer = smith_form(tower.preimage(n, 3), tower.chain)
            self.assertTrue(outer.contains_columns(tower.preimage(n + 1, 3)).all())

    def test_zero_inertia_offsets_give_the_augmentation_tower(self):
        presentation = LambdaPresentation.quotient('nu(s1, 0, 1)')
        ring = plane()
        augmentation = ddot_profile(presentation, IdealFamily('I'), range(3), range(4), ring)
        inertia = capitulation_tower(presentation, TIGHT_2D, ((1, ('0',)),), range(3), range(4), ring)
        self.assertEqual(grid_values(inertia), grid_values(augmentation))
        self.assertIn('model', inertia.metadata)

    def test_trivial_action_capitulation(self):
        ring = GroupRing(2, 3, 3, 1)
        report = capitulation_tower(
            LambdaPresentation.quotient('T1'), ((1,),), ((1, ('1',)),), range(4), range(4), ring
        )
        self.assertEqual([q.order_exp for q in report.quotients], [0, 1, 2, 3])
        self.assertTrue(all(e.order_exp == 0 and e.raw_order_exp == 0 for e in report.grid))
        self.assertEqual(report.compatible_chains, 1)

    def test_capitulation_in_rank_two(self):
        report = capitulation_tower(
            LambdaPresentation.quotient('4'), TIGHT_2D, ((3, ('1',)),), range(3), range(4), plane()
        )
        self.assertTrue(all(entry.order_exp == 0 for entry in report.grid))
        self.assertEqual(report.compatible_chains, 1)

    def test_norm_map_is_the_coset_sum(self):
        ring = plane(2)
        tower = Tower(LambdaPresentation.free(), IdealFamily('I'), ring)
        tight = Tower(LambdaPresentation.free(), IdealFamily('J', ((1, 1), (0, 1))), ring)
        for n, m in [(0, 1), (1, 2)]:
            coset_sum = tower.module.act(coset_norm_element(ring, n, m))
            self.assertTrue((tower.norm_matrix(n, m) == coset_sum).all())
            self.assertTrue((tight.norm_matrix(n, m) == coset_sum).all())

    def test_degenerate_windows(self):
        ring = plane(2)
        for n in range(3):
            entry = ddot_kernel(LambdaPresentation.quotient('2', 'T1'), IdealFamily('J', TIGHT_2D), n, n, ring)
            self.assertTrue(entry.invariants.is_zero and entry.raw.is_zero)
        report = ddot_profile(LambdaPresentation.quotient('1'), IdealFamily('J'), range(3), range(3), ring)
        self.assertEqual(report.max_order_exp, 0)
        self.assertTrue(all(q.order_exp == 0 for q in report.quotients))
        self.assertEqual(report.compatible_chains, 1)

    def test_single_kernels_and_quotients(self):
        ring = plane()
        self.assertEqual(ddot_kernel(LambdaPresentation.free(), IdealFamily('J'), 1, 2, ring).invariants.order_exp, 0)
        quotient = quotient_tower(LambdaPresentation.quotient('2', 'T1'), IdealFamily('J', TIGHT_2D), 2, ring)
        self.assertEqual(quotient.cyclic_exponents(), (1, 1, 1))
        for n in range(3):
            group_ring = quotient_tower(LambdaPresentation.free(), IdealFamily('I'), n, ring)
            self.assertEqual(sum(group_ring.cyclic_exponents()), 3 * 4 ** n)

    def test_level_errors(self):
        tower = Tower(LambdaPresentation.free(), IdealFamily('J'), plane(2))
        with self.assertRaises(LevelError):
            tower.kernel(2, 1)
        with self.assertRaises(LevelError):
            tower.kernel(0, 3)
        with self.assertRaises(LevelError):
            ddot_profile(LambdaPresentation.free(), IdealFamily('J'), range(3), range(2), plane(2))

    def test_increasing_family_is_rejected(self):
        tower = Tower(LambdaPresentation.free(), ReversedAugmentation(), GroupRing(2, 3, 2, 1))
        with self.assertRaises(CompatibilityError) as ctx:
            tower.check_decreasing(0)
        self.assertIsNotNone(ctx.exception.witness)

    def test_rank_growth_of_free_modules(self):
        for d in (1, 2):
            ring = GroupRing(2, 3, 2, d)
            for r in (1, 2):
                rows = rank_growth(LambdaPresentation.free(r), ring, range(3))
                self.assertEqual([row.rank for row in rows], [r * 2 ** (d * n) for n in range(3)])
                self.assertTrue(all(row.stable for row in rows))
                self.assertTrue(all(row.leading == r for row in rows))

    def test_rank_growth_of_a_quotient(self):
        rows = rank_growth(LambdaPresentation.quotient('T1'), plane(2), range(3))
        self.assertEqual([row.rank for row in rows], [1, 2, 4])
        for row in rows:
            self.assertLessEqual(row.leading, Fraction(1, 2 ** row.n))

    def test_separation_index(self):
        ring = GroupRing(2, 3, 3, 1)
        free, family = LambdaPresentation.free(), IdealFamily('J')
        self.assertEqual(separation_index(free, family, [ring.one()], 3, ring), 1)
        for k in range(3):
            self.assertEqual(separation_index(free, family, [nu(ring, (1,), 0, k)], 3, ring), k + 1)
            self.assertEqual(separation_index(free, family, [ring.scalar(2 ** k)], 3, ring), 1)
        self.assertIsNone(separation_index(free, family, [ring.zero()], 3, ring))


class ReportTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.report = ddot_profile(
            LambdaPresentation.quotient('2', 'T1'), IdealFamily('J', TIGHT_2D), range(3), range(4), plane()
        )

    def test_csv(self):
        lines = self.report.to_csv().splitlines()
        self.assertEqual(lines[0], "n,m,kernel_order_exp,kernel_p_rank")
        self.assertIn("2,3,3,3", lines)
        self.assertEqual(len(lines), 10)

    def test_json(self):
        data = json.loads(self.report.to_json())
        self.assertEqual(data['config'], {
            'p': 2, 'd': 2, 'N': 3, 'm': 3,
            'cap': settings.IWASAWA['ENUMERATION_CAP'],
            'chain_limit': settings.IWASAWA['CHAIN_ENUMERATION_LIMIT'],
        })
        self.assertEqual(data['input']['module'], "quot 2; T1")
        self.assertEqual(data['summary']['max_order_exp'], 3)
        self.assertEqual(data['summary']['compatible_chains'], 8)
        self.assertEqual(set(data['grid'][0]), {
            'n', 'm', 'order_exp', 'p_rank', 'divisors', 'raw_order_exp', 'raw_p_rank',
        })
        self.assertEqual(len(data['input_sha256']), 64)

    def test_outputs_are_reproducible(self):
        again = ddot_profile(
            LambdaPresentation.quotient('2', 'T1'), IdealFamily('J', TIGHT_2D), range(3), range(4), plane()
        )
        self.assertEqual(again.to_csv(), self.report.to_csv())
        self.assertEqual(again.to_json(), self.report.to_json())

    def test_spreadsheet_and_pdf(self):
        with tempfile.TemporaryDirectory() as tmp:
            xlsx = self.report.write_xlsx(os.path.join(tmp, 'tower.xlsx'))
            ws = openpyxl.load_workbook(xlsx)['Kernel grid']
            self.assertEqual(ws['A1'].value, 'n')
            self.assertTrue(ws['A1'].font.bold)
            self.assertEqual(ws.cell(row=len(self.report.grid) + 3, column=4).value, 8)

            pdf = self.report.write_pdf(os.path.join(tmp, 'tower.pdf'))
            with open(pdf, 'rb') as handle:
                self.assertEqual(handle.read(5), b'%PDF-')


class GrammarTests(SimpleTestCase):
    def test_modules(self):
        self.assertEqual(parse_module("free"), LambdaPresentation.free())
        self.assertEqual(parse_module(" free 2 "), LambdaPresentation.free(2))
        self.assertEqual(parse_module("quot nu(s1,0,1)"), LambdaPresentation.quotient('nu(s1,0,1)'))
        self.assertEqual(parse_module("quot 2; T1"), LambdaPresentation.quotient('2', 'T1'))
        self.assertEqual(parse_module("pres 2: [2, 0]; [T1, 1]"), LambdaPresentation(2, (('2', '0'), ('T1', '1'))))
        self.assertEqual(parse_module("pres 2:"), LambdaPresentation.free(2))

    def test_module_text_form_parses_back(self):
        for presentation in [
            LambdaPresentation.free(3),
            LambdaPresentation.quotient('4', 'omega(s1, 1)'),
            LambdaPresentation(2, (('2', 'T2'), ('nu(s1, 0, 1)', '0'))),
        ]:
            self.assertEqual(parse_module(str(presentation)), presentation)

    def test_module_errors(self):
        for text in ["foo", "free 0", "free x", "quot", "quot 1;", "pres 2: [1]", "pres: [1]", "quot (1"]:
            with self.assertRaises(ParseError):
                parse_module(text)
        with self.assertRaises(ParseError) as ctx:
            parse_module("quot 1 + T3", plane(1))
        self.assertEqual(ctx.exception.position, 10)

    def test_tight_sets(self):
        self.assertEqual(parse_tight_set("1,0; 0,1; 1,1", 2), TIGHT_2D)
        with self.assertRaises(ParseError) as ctx:
            parse_tight_set("1,0; 2", 2)
        self.assertEqual(ctx.exception.position, 6)
        with self.assertRaises(ParseError):
            parse_tight_set("a,b", 2)

    def test_matrices_and_vectors(self):
        self.assertEqual(parse_matrix("2,0; 0,4"), ((2, 0), (0, 4)))
        with self.assertRaises(ParseError) as ctx:
            parse_matrix("1,2; 3")
        self.assertEqual(ctx.exception.position, 6)
        ring = plane(1)
        self.assertEqual(parse_vector("[1, T1]", 2, ring), [ring.one(), ring.group_element((1, 0)) - 1])
        self.assertEqual(parse_vector("nu(s1,0,1)", 1, ring), [nu(ring, (1, 0), 0, 1)])
        with self.assertRaises(ParseError):
            parse_vector("[1]", 2, ring)
        with self.assertRaises(ParseError) as ctx:
            parse_vector("[1, T3]", 2, ring)
        self.assertEqual(ctx.exception.position, 5)

    def test_inertia(self):
        self.assertEqual(parse_inertia("1:1; 3:T1"), ((1, ('1',)), (3, ('T1',))))
        self.assertEqual(parse_inertia("2:[1, T1]", 2), ((2, ('1', 'T1')),))
        self.assertEqual(parse_inertia(""), ())
        with self.assertRaises(ParseError) as ctx:
            parse_inertia("x:1")
        self.assertEqual(ctx.exception.position, 1)
        with self.assertRaises(ParseError):
            parse_inertia("1:[1, 2]", 1)


class SessionTests(SimpleTestCase):
    def test_defaults(self):
        session = load_session({})
        self.assertEqual(session.config(), {'p': 2, 'd': 1, 'N': 3, 'm': 1})
        self.assertEqual(session.cap, settings.IWASAWA['ENUMERATION_CAP'])
        self.assertEqual(session.chain_limit, settings.IWASAWA['CHAIN_ENUMERATION_LIMIT'])
        self.assertEqual(session.ring, GroupRing(2, 3, 1, 1))

    def test_config_file_and_command_line_precedence(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'session.env')
            with open(path, 'w', encoding='utf-8') as handle:
                handle.write("p=3\nd=2\nN=4\nm=1\n")
            session = load_session({'config': path, 'N': 2})
            self.assertEqual(session.config(), {'p': 3, 'd': 2, 'N': 2, 'm': 1})

            with open(path, 'w', encoding='utf-8') as handle:
                handle.write("q=3\n")
            with self.assertRaises(ParseError):
                load_session({'config': path})
        with self.assertRaises(ParseError):
            load_session({'config': os.path.join(tmp, 'missing.env')})

    def test_validation(self):
        with self.assertRaises(ParseError):
            load_session({'p': 7})
        with self.assertRaises(ParseError):
            load_session({'N': 9})
        with self.assertRaises(CapExceeded):
            load_session({'p': 3, 'd': 3, 'm': 4})
        with self.assertRaises(CapExceeded):
            load_session({'p': 3, 'd': 2, 'm': 4, 'cap': 10000})
        self.assertEqual(load_session({'p': 2, 'd': 2, 'm': 4, 'cap': 256}, generators=2).m, 4)


class CommandTests(SimpleTestCase):
    def run_command(self, *args, **options):
        out = StringIO()
        call_command(*args, stdout=out, no_color=True, **options)
        return out.getvalue()

    def assertExitCode(self, code, *args, **options):
        with self.assertRaises(CommandError) as ctx:
            self.run_command(*args, **options)
        self.assertEqual(ctx.exception.returncode, code)
        return ctx.exception

    def test_eval(self):
        out = self.run_command('eval', char='0@1', elem='1+T1', p=2, d=1, N=3, m=1)
        self.assertIn('value: 1\n', out)
        self.assertIn('valuation: 0', out)
        out = self.run_command('eval', char='1@1', elem='nu(s1,0,1)', p=2, d=1, N=3, m=1)
        self.assertIn('value: 0\n', out)
        self.assertIn('valuation: ≥ 3', out)
        out = self.run_command('eval', char='0@1', elem='nu(s1,0,1)', p=2, d=1, N=3, m=1)
        self.assertIn('value: 2\n', out)
        self.assertIn('valuation: 1', out)

    def test_eval_errors(self):
        error = self.assertExitCode(2, 'eval', char='0@1', elem='1 + T3', p=2, d=1, N=3, m=1)
        self.assertIn('position 5', str(error))
        self.assertExitCode(3, 'eval', char='0,0,0@1', elem='1', p=3, d=3, m=4)

    def test_member(self):
        out = self.run_command('member', elem='nu(s1,0,1)', ideal='RN(r=[0], n=[1])', p=2, d=1, N=3, m=1)
        self.assertEqual(out.splitlines(), ['linear: true', 'char: true', 'agree: true'])
        out = self.run_command('member', elem='1', ideal='AUG(0)', method='linear', p=2, d=1, N=3, m=1)
        self.assertEqual(out.splitlines(), ['linear: false'])
        self.assertExitCode(2, 'member', elem='1', ideal='TIGHT(0; tau=[[1]])', method='char', p=2, d=1, N=3, m=1)
        self.assertExitCode(2, 'member', ideal='AUG(0)')

    def test_member_augmentation_by_default(self):
        out = self.run_command('member', elem='1', ideal='AUG(0)', p=2, d=1, N=3, m=1)
        self.assertEqual(out.splitlines(), ['linear: false', 'char: false', 'agree: true'])
        out = self.run_command('member', elem='1', ideal='AUG(0)', method='char', p=2, d=1, N=3, m=1)
        self.assertEqual(out.splitlines(), ['char: false'])
        out = self.run_command('member', elem='1', ideal='TIGHT(0; tau=[[1]])', p=2, d=1, N=3, m=1)
        self.assertEqual(out.splitlines(), [
            'note: TIGHT ideals have no character criterion, using linear only', 'linear: true',
        ])

    def test_member_honours_a_raised_cap(self):
        with override_settings(IWASAWA={**settings.IWASAWA, 'ENUMERATION_CAP': 8}):
            out = self.run_command('member', elem='nu(s1,0,1)', ideal='RN(r=[0], n=[1])', method='char',
                                   p=2, d=1, N=3, m=4, cap=16)
            self.assertEqual(out.splitlines(), ['char: true'])
            out = self.run_command('member', ideal='AUG(1)', samples=4, p=2, d=1, N=3, m=4, cap=16)
            self.assertIn('agreement rate 100.0%', out)
            self.assertExitCode(3, 'member', elem='1', ideal='AUG(1)', p=2, d=1, N=3, m=4)

    def test_member_cross_check(self):
        out = self.run_command('member', ideal='RN(r=[0,-1], n=[1,2])', samples=40, seed=5, p=3, d=2, N=4, m=2)
        self.assertIn('40 samples (20 members, 20 non-members)', out)
        self.assertIn('agreement rate 100.0%', out)

    def test_tower(self):
        out = self.run_command('tower', module='free', family='J', nmax=2, mmax=3, p=2, d=2, N=3)
        self.assertIn('max kernel order 2^0; compatible chains 1 (exhaustive)', out)
        out = self.run_command('tower', module='quot 2; T1', tau='1,0; 0,1; 1,1', nmax=2, mmax=3, p=2, d=2, N=3)
        self.assertIn('max kernel order 2^3; compatible chains 8', out)

    def test_tower_files_are_byte_identical(self):
        with tempfile.TemporaryDirectory() as tmp:
            contents = []
            for run in ('a', 'b'):
                prefix = os.path.join(tmp, run)
                self.run_command('tower', module='quot nu(s1,0,1)', nmax=2, mmax=3, p=2, d=2, N=3, out=prefix)
                with open(prefix + '.csv', 'rb') as csv_file, open(prefix + '.json', 'rb') as json_file:
                    contents.append((csv_file.read(), json_file.read()))
            self.assertEqual(contents[0], contents[1])
            self.assertTrue(contents[0][0].startswith(b'n,m,kernel_order_exp,kernel_p_rank\n'))

    def test_tower_errors(self):
        self.assertExitCode(2, 'tower', module='quot 1 +', nmax=1, mmax=1, p=2, d=1, N=3)
        self.assertExitCode(2, 'tower', module='free', nmax=2, mmax=1)
        failure = CompatibilityError("nu_{0,1} does not map W_0 into W_1", witness='s1')
        with mock.patch('towers.management.commands.tower.ddot_profile', side_effect=failure):
            error = self.assertExitCode(4, 'tower', module='free', nmax=0, mmax=1)
        self.assertIn('witness: s1', str(error))

    def test_capitulation(self):
        out = self.run_command('capitulation', module='quot T1', tight='1', inertia='1:1', nmax=3, mmax=3, p=2, d=1, N=3)
        self.assertIn('max kernel order 2^0; compatible chains 1', out)
        self.assertIn('note:', out)
        self.assertExitCode(2, 'capitulation', module='free', tight='2', nmax=1, mmax=1, p=2, d=1, N=3)

    def test_cover(self):
        out = self.run_command('cover', elem='nu(s1,0,1)', flats='1,0:1@1', p=2, d=2, N=3, m=2)
        self.assertIn('zero set: 4 characters, union of flats: 4', out)
        self.assertIn('covered: true', out)
        out = self.run_command('cover', elem='nu(s1,0,1)*nu(s2,1,2)', flats='1,0:1@1', p=2, d=2, N=3, m=2)
        self.assertIn('covered: false', out)

    def test_rankgrowth(self):
        out = self.run_command('rankgrowth', module='free 2', nmax=2, p=2, d=1, N=3)
        rows = [line.split() for line in out.splitlines()[1:4]]
        self.assertEqual([row[:3] for row in rows], [['0', '2', '2'], ['1', '4', '4'], ['2', '8', '8']])

    def test_delta(self):
        out = self.run_command('delta', ideal='AUG(1)', p=2, d=1, N=3, m=2)
        self.assertEqual(out.splitlines(), ['zero set at level 2: 2 of 4 characters', '  0@2', '  2@2'])
        out = self.run_command('delta', elem='1', p=2, d=2, N=3, m=2)
        self.assertIn('zero set at level 2: 0 of 16 characters', out)
        out = self.run_command('delta', elem='0', p=2, d=2, N=3, m=2)
        self.assertIn('zero set at level 2: 16 of 16 characters', out)
        out = self.run_command('delta', flats='1:1@1', level=1, p=2, d=1, N=3, m=2)
        self.assertEqual(out.splitlines(), ['union of flats at level 1: 1 of 2 characters', '  1@1'])
        self.assertExitCode(2, 'delta', ideal='AUG(3)', p=2, d=1, N=3, m=2)

    def test_divisibility(self):
        options = {'ideal': 'RN(r=[0], n=[1])', 'char': '0@1', 'p': 2, 'd': 1, 'N': 3, 'm': 1}
        out = self.run_command('divisibility', elem='nu(s1,0,1)', **options)
        self.assertEqual(out.splitlines(), ['valuation: 1', 'bound: 1', 'passed: true'])
        out = self.run_command('divisibility', elem='1', **options)
        self.assertIn('passed: false', out)
        self.assertExitCode(2, 'divisibility', elem='1', ideal='AUG(1)', char='0@1', p=2, d=1, N=3, m=1)

    def test_kernel(self):
        out = self.run_command('kernel', module='quot 2; T1', tau='1,0; 0,1; 1,1', n=2, top=3, p=2, d=2, N=3)
        self.assertIn('kernel nu_{2,3}: order 2^3, p-rank 3', out)
        self.assertIn('quotient Y/W_2: order 2^3', out)
        self.assertExitCode(2, 'kernel', module='free', n=2, top=1)

    def test_separation(self):
        out = self.run_command('separation', module='free', vector='nu(s1,0,1)', nmax=3, p=2, d=1, N=3)
        self.assertIn('separation index: 2', out)
        out = self.run_command('separation', module='free', vector='[0]', nmax=3, p=2, d=1, N=3)
        self.assertIn('y lies in W_n for every n <= 3', out)
        self.assertExitCode(2, 'separation', module='free 2', vector='[1]', nmax=1, p=2, d=1, N=3)

    def test_smith(self):
        out = self.run_command('smith', matrix='2,0; 0,4', p=2, N=3)
        self.assertEqual(out.splitlines(), [
            'exponents: [1, 2]',
            'rank: 2',
            'kernel order: 2^3',
            'cokernel: order 2^3, p-rank 2, divisors [1, 2], free rank 0',
        ])
        out = self.run_command('smith', matrix='0, 0', p=3, N=2)
        self.assertIn('cokernel: order 3^2, p-rank 1, divisors [2], free rank 1', out)
        self.assertExitCode(2, 'smith', matrix='1,2; 3', p=2, N=3)
