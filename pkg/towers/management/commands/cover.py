from iwasawa.characters import verify_cover
from iwasawa.grammar import parse_element, parse_flats
from towers.session import SessionCommand


class Command(SessionCommand):
    help = 'Check that the zero set of an element is the union of the given Z_p-flats'

    def add_command_arguments(self, parser):
        parser.add_argument('--elem', required=True, help='Nonzero group ring element')
        parser.add_argument('--flats', required=True, help='Flats a,b:u@r; ... separated by |')
        parser.add_argument('--level', type=int, help='Character level (default: the session m)')

    def handle(self, *args, **options):
        session = self.session(options)
        ring = session.ring
        f = parse_element(options['elem'], ring)
        flats = parse_flats(options['flats'], session.p, session.d)
        report = verify_cover(f, flats, options['level'], session.cap)

        self.stdout.write(f'zero set: {report.zero_set_size} characters, union of flats: {report.union_size}')
        for chi in report.missing:
            self.stdout.write(f'  missing from the flats: {chi}')
        for chi in report.extra:
            self.stdout.write(f'  not in the zero set: {chi}')
        if report.caveat:
            self.stdout.write(self.style.WARNING(f'note: {report.caveat}'))
        if report.covered:
            self.stdout.write(self.style.SUCCESS('covered: true'))
        else:
            self.stdout.write(self.style.ERROR('covered: false'))
