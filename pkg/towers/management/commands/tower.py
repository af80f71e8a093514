from towers.grammar import parse_module
from towers.modules import ddot_profile
from towers.session import TowerCommand, add_family_arguments, family_from_options


class Command(TowerCommand):
    help = 'Norm-map kernels of Y / W_n for W_n = I_n Y or J_n Y over a finite window'

    def add_command_arguments(self, parser):
        super().add_command_arguments(parser)
        add_family_arguments(parser)

    def handle(self, *args, **options):
        n_range, m_range = self.window(options)
        presentation = parse_module(options['module'])
        session = self.tower_session(options, presentation.g)
        ring = session.ring
        parse_module(options['module'], ring)

        family = family_from_options(options, session.d)
        report = ddot_profile(
            presentation, family, n_range, m_range, ring,
            slack=options['slack'], chain_limit=session.chain_limit, cap=session.cap,
        )
        self.emit(report, options)
