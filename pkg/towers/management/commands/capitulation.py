from towers.grammar import parse_inertia, parse_module, parse_tight_set
from towers.modules import capitulation_tower
from towers.session import TowerCommand


class Command(TowerCommand):
    help = 'Capitulation kernels of A_n = X / J_n for inertia data over a finite window'

    def add_command_arguments(self, parser):
        super().add_command_arguments(parser)
        parser.add_argument('--tight', required=True, help='Tight set a,b; c,d')
        parser.add_argument('--inertia', default='', help='Inertia pairs j:expr; ... (1-based j)')

    def handle(self, *args, **options):
        n_range, m_range = self.window(options)
        presentation = parse_module(options['module'])
        session = self.tower_session(options, presentation.g)
        ring = session.ring
        parse_module(options['module'], ring)

        taus = parse_tight_set(options['tight'], session.d)
        pairs = parse_inertia(options['inertia'], presentation.g, ring)
        report = capitulation_tower(
            presentation, taus, pairs, n_range, m_range, ring,
            slack=options['slack'], chain_limit=session.chain_limit, cap=session.cap,
        )
        self.emit(report, options)
