from arithmetic.residues import format_valuation
from iwasawa.characters import eval_char
from iwasawa.grammar import parse_character, parse_element
from towers.session import SessionCommand


class Command(SessionCommand):
    help = 'Evaluate a character on a group ring element'

    def add_command_arguments(self, parser):
        parser.add_argument('--char', required=True, help='Character e1,...,ed@level')
        parser.add_argument('--elem', required=True, help='Group ring element, e.g. "1 + T1"')

    def handle(self, *args, **options):
        session = self.session(options)
        ring = session.ring
        chi = parse_character(options['char'], session.p, session.d, session.m)
        x = parse_element(options['elem'], ring)
        value = eval_char(chi, x)

        self.stdout.write(f'chi = {chi}, x = {x}')
        self.stdout.write(f'value: {value}')
        self.stdout.write(f'coefficients: {list(value.coeffs)}')
        self.stdout.write(self.style.SUCCESS(f'valuation: {format_valuation(value.valuation(), session.N)}'))
