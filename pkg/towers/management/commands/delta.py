from iwasawa.characters import MOD_P_VANISHING_CAVEAT, delta_set, flat_members
from iwasawa.grammar import parse_element, parse_flats, parse_ideal
from towers.session import SessionCommand


class Command(SessionCommand):
    help = 'List the characters killing an ideal, an element, or lying on a union of Z_p-flats'

    def add_command_arguments(self, parser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument('--ideal', help='AUG(n), TIGHT(n; tau=..), RN(r=.., n=..), SUM(..), EXPL([..])')
        source.add_argument('--elem', help='Group ring element')
        source.add_argument('--flats', help='Flats a,b:u@r; ... separated by |')
        parser.add_argument('--level', type=int, help='Character level (default: the session m)')

    def handle(self, *args, **options):
        session = self.session(options)
        ring = session.ring
        level = session.m if options['level'] is None else options['level']

        exact = True
        if options['flats'] is not None:
            members = set()
            for flat in parse_flats(options['flats'], session.p, session.d):
                members |= flat_members(flat, level, session.cap)
            members = sorted(members, key=lambda chi: chi.exps)
            label = 'union of flats'
        else:
            if options['ideal'] is not None:
                source = parse_ideal(options['ideal'])
            else:
                source = [parse_element(options['elem'], ring)]
            zero_set = delta_set(source, ring, level, session.cap)
            members, exact = list(zero_set), zero_set.exact
            label = 'zero set'

        total = session.p ** (session.d * level)
        self.stdout.write(f'{label} at level {level}: {len(members)} of {total} characters')
        for chi in members:
            self.stdout.write(f'  {chi}')
        if not exact:
            self.stdout.write(self.style.WARNING(f'note: {MOD_P_VANISHING_CAVEAT}'))
