from django.core.management.base import CommandError

from arithmetic.residues import format_valuation
from iwasawa.grammar import parse_character, parse_element, parse_ideal
from iwasawa.ideals import divisibility_check, member_linear
from towers.session import SessionCommand


class Command(SessionCommand):
    help = 'Compare the valuation of chi(x) with the divisibility bound of I_{r,n} + J_n'

    def add_command_arguments(self, parser):
        parser.add_argument('--elem', required=True, help='Group ring element')
        parser.add_argument('--ideal', required=True, help='RN(..), TIGHT(..) or a SUM of them')
        parser.add_argument('--char', required=True, help='Character e1,...,ed@level')

    def handle(self, *args, **options):
        session = self.session(options)
        ring = session.ring
        x = parse_element(options['elem'], ring)
        spec = parse_ideal(options['ideal'])
        chi = parse_character(options['char'], session.p, session.d, session.m)
        result = divisibility_check(x, spec, chi)

        self.stdout.write(f'valuation: {format_valuation(result.observed, session.N)}')
        self.stdout.write(f'bound: {result.bound}')
        if result.passed:
            self.stdout.write(self.style.SUCCESS('passed: true'))
            return
        if member_linear(x, spec):
            raise CommandError(f'{x} lies in {spec} but chi({x}) has valuation {result.observed} < {result.bound}',
                               returncode=4)
        self.stdout.write(self.style.WARNING(f'passed: false ({x} is not in {spec})'))
