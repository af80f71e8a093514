from towers.grammar import parse_module
from towers.modules import rank_growth
from towers.session import SessionCommand


class Command(SessionCommand):
    help = 'Visible Z_p-rank of Y / I_n Y against p^(dn)'

    def add_command_arguments(self, parser):
        parser.add_argument('--module', required=True)
        parser.add_argument('--nmax', type=int, required=True)

    def handle(self, *args, **options):
        presentation = parse_module(options['module'])
        if options.get('m') is None:
            options = {**options, 'm': options['nmax']}
        session = self.session(options, presentation.g)
        ring = session.ring
        parse_module(options['module'], ring)

        self.stdout.write('n  rank  rank@N+1  rank/p^(dn)')
        for row in rank_growth(presentation, ring, range(options['nmax'] + 1)):
            line = f'{row.n:<2} {row.rank:<5} {row.rank_next_precision:<9} {row.leading}'
            self.stdout.write(line if row.stable else self.style.WARNING(line + '  (unstable)'))
        self.stdout.write(self.style.SUCCESS(f'{presentation}: ranks computed at precision {session.N}'))
