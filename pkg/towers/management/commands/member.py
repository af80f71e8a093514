from django.core.management.base import CommandError

from iwasawa.grammar import parse_element, parse_ideal
from iwasawa.ideals import cross_check, has_character_criterion, member_char, member_linear
from towers.session import SessionCommand

METHODS = ('linear', 'char', 'both')


class Command(SessionCommand):
    help = 'Decide ideal membership by linear algebra, by characters, or both'

    def add_command_arguments(self, parser):
        parser.add_argument('--elem', help='Group ring element')
        parser.add_argument('--ideal', required=True, help='AUG(n), TIGHT(n; tau=..), RN(r=.., n=..), SUM(..), EXPL([..])')
        parser.add_argument('--method', choices=METHODS, default='both')
        parser.add_argument('--samples', type=int, default=0,
                            help='Cross-check both methods on this many seeded candidates')
        parser.add_argument('--seed', type=int, default=0)

    def handle(self, *args, **options):
        session = self.session(options)
        ring = session.ring
        spec = parse_ideal(options['ideal'])

        if options['elem'] is None and not options['samples']:
            raise CommandError('give --elem, --samples or both', returncode=2)

        if options['elem'] is not None:
            x = parse_element(options['elem'], ring)
            method = options['method']
            if method == 'both' and not has_character_criterion(spec):
                self.stdout.write(f"note: {spec.kind} ideals have no character criterion, using linear only")
                method = 'linear'
            verdicts = {}
            if method in ('linear', 'both'):
                verdicts['linear'] = member_linear(x, spec)
            if method in ('char', 'both'):
                verdicts['char'] = member_char(x, spec, cap=session.cap)
            for name, verdict in verdicts.items():
                self.stdout.write(f'{name}: {str(verdict).lower()}')
            if len(verdicts) == 2:
                agree = verdicts['linear'] == verdicts['char']
                if not agree:
                    raise CommandError(f'methods disagree on {x} in {spec}', returncode=4)
                self.stdout.write(self.style.SUCCESS('agree: true'))

        if options['samples']:
            result = cross_check(spec, ring, options['samples'], options['seed'], cap=session.cap)
            self.stdout.write(
                f'cross-check: {result.samples} samples ({result.members} members, '
                f'{result.samples - result.members} non-members), seed {options["seed"]}'
            )
            if result.witnesses:
                for witness in result.witnesses:
                    self.stdout.write(self.style.ERROR(f'  disagreement: {witness}'))
                raise CommandError(f'agreement rate {result.rate:.1%}', returncode=4)
            self.stdout.write(self.style.SUCCESS(f'agreement rate {result.rate:.1%}'))
