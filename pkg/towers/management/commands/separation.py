from towers.grammar import parse_module, parse_vector
from towers.modules import separation_index
from towers.session import SessionCommand, add_family_arguments, family_from_options


class Command(SessionCommand):
    help = 'Smallest n with y outside W_n'

    def add_command_arguments(self, parser):
        parser.add_argument('--module', required=True)
        parser.add_argument('--vector', required=True, help='[e1, .., eg], or one element when g = 1')
        parser.add_argument('--nmax', type=int, required=True)
        add_family_arguments(parser)

    def handle(self, *args, **options):
        presentation = parse_module(options['module'])
        if options.get('m') is None:
            options = {**options, 'm': options['nmax']}
        session = self.session(options, presentation.g)
        ring = session.ring
        parse_module(options['module'], ring)
        family = family_from_options(options, session.d)
        y = parse_vector(options['vector'], presentation.g, ring)

        index = separation_index(presentation, family, y, options['nmax'], ring)
        if index is None:
            self.stdout.write(self.style.WARNING(f"y lies in W_n for every n <= {options['nmax']}"))
        else:
            self.stdout.write(self.style.SUCCESS(f'separation index: {index}'))
