from django.core.management.base import CommandError

from arithmetic.linalg import module_invariants
from towers.grammar import parse_module
from towers.modules import ddot_kernel, quotient_tower
from towers.session import SessionCommand, add_family_arguments, family_from_options


def describe(invariants, p):
    return (f'order {p}^{invariants.order_exp}, p-rank {invariants.p_rank}, '
            f'divisors {list(invariants.divisors)}')


class Command(SessionCommand):
    help = 'One quotient Y / W_n and the kernel of nu_{n,top} on it'

    def add_command_arguments(self, parser):
        parser.add_argument('--module', required=True)
        parser.add_argument('--n', type=int, required=True)
        parser.add_argument('--top', type=int, required=True, help='Target level of the norm map')
        parser.add_argument('--slack', type=int, help='Extra precision for the stable kernel')
        add_family_arguments(parser)

    def handle(self, *args, **options):
        if not 0 <= options['n'] <= options['top']:
            raise CommandError(f"need 0 <= n <= top, got n={options['n']}, top={options['top']}", returncode=2)
        presentation = parse_module(options['module'])
        if options.get('m') is None:
            options = {**options, 'm': options['top']}
        session = self.session(options, presentation.g)
        ring = session.ring
        parse_module(options['module'], ring)
        family = family_from_options(options, session.d)

        n, top = options['n'], options['top']
        quotient = module_invariants(quotient_tower(presentation, family, n, ring))
        entry = ddot_kernel(presentation, family, n, top, ring, options['slack'])
        self.stdout.write(f'quotient Y/W_{n}: {describe(quotient, session.p)}')
        self.stdout.write(f'raw kernel: {describe(entry.raw, session.p)}')
        self.stdout.write(self.style.SUCCESS(f'kernel nu_{{{n},{top}}}: {describe(entry.invariants, session.p)}'))
