"""
Session parameters shared by every subcommand.

Values come from settings.IWASAWA['SESSION_DEFAULTS'], then an optional
key=value config file, then the command line.
"""

import logging
from dataclasses import dataclass
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError
from dotenv import dotenv_values
from rest_framework.exceptions import ValidationError

from arithmetic.exceptions import CapExceeded, IwasawaError, ParseError
from iwasawa.group_ring import GroupRing

from .grammar import parse_tight_set
from .modules import IdealFamily
from .serializers import SessionConfigSerializer

logger = logging.getLogger(__name__)

CONFIG_KEYS = ('p', 'd', 'N', 'm', 'cap', 'chain_limit')


@dataclass(frozen=True)
class Session:
    p: int
    d: int
    N: int
    m: int
    cap: int
    chain_limit: int

    @property
    def ring(self):
        return GroupRing(self.p, self.N, self.m, self.d)

    def config(self):
        return {'p': self.p, 'd': self.d, 'N': self.N, 'm': self.m}


def read_config_file(path):
    path = Path(path)
    if not path.is_file():
        raise ParseError(f"config file {path} does not exist")
    values = dotenv_values(path)
    unknown = sorted(set(values) - set(CONFIG_KEYS))
    if unknown:
        raise ParseError(f"unknown config keys {unknown} in {path}, expected {list(CONFIG_KEYS)}")
    return {key: value for key, value in values.items() if value not in (None, '')}


def load_session(options, generators=1):
    values = dict(settings.IWASAWA['SESSION_DEFAULTS'])
    if options.get('config'):
        values.update(read_config_file(options['config']))
    for key in CONFIG_KEYS:
        if options.get(key) is not None:
            values[key] = options[key]
    values['generators'] = generators

    serializer = SessionConfigSerializer(data=values)
    try:
        serializer.is_valid(raise_exception=True)
    except ValidationError as exc:
        codes = exc.get_codes()
        flat = [code for field_codes in codes.values() for code in field_codes]
        message = "; ".join(
            f"{field}: {' '.join(str(e) for e in errors)}" for field, errors in exc.detail.items()
        )
        if 'cap' in flat:
            raise CapExceeded(message) from exc
        raise ParseError(f"invalid session config: {message}") from exc

    data = serializer.validated_data
    session = Session(data['p'], data['d'], data['N'], data['m'], data['cap'], data['chain_limit'])
    logger.debug("session %s", session)
    return session


class SessionCommand(BaseCommand):
    """Base for subcommands: session options and library errors as exit codes."""

    def add_arguments(self, parser):
        parser.add_argument('--p', type=int, help='Prime p (2, 3 or 5)')
        parser.add_argument('--d', type=int, help='Rank d of Gamma (1..3)')
        parser.add_argument('--N', type=int, help='Precision exponent N (1..6)')
        parser.add_argument('--m', type=int, help='Group ring level m (0..4)')
        parser.add_argument('--cap', type=int, help='Character enumeration cap')
        parser.add_argument('--chain-limit', type=int, help='Largest kernel enumerated for chain counting')
        parser.add_argument('--config', help='key=value session config file')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def session(self, options, generators=1):
        return load_session(options, generators)

    def execute(self, *args, **options):
        try:
            return super().execute(*args, **options)
        except IwasawaError as exc:
            logger.debug("%s failed: %r", type(self).__module__, exc)
            raise CommandError(str(exc), returncode=exc.exit_code) from exc


def add_family_arguments(parser):
    parser.add_argument('--family', choices=['I', 'J'], default='J')
    parser.add_argument('--tau', help='Tight set a,b; c,d (default: the standard basis)')


def family_from_options(options, d):
    taus = parse_tight_set(options['tau'], d) if options['tau'] else None
    return IdealFamily(options['family'], taus)


class TowerCommand(SessionCommand):
    """Window options and report output for the tower subcommands."""

    def add_command_arguments(self, parser):
        parser.add_argument('--module', required=True, help='free | free r | quot e1; e2 | pres g: [..]; [..]')
        parser.add_argument('--nmax', type=int, required=True)
        parser.add_argument('--mmax', type=int, required=True)
        parser.add_argument('--slack', type=int, help='Extra precision for stable kernels (default d*(m-n))')
        parser.add_argument('--out', help='Write <out>.csv and <out>.json')
        parser.add_argument('--xlsx', help='Also write an .xlsx workbook')
        parser.add_argument('--pdf', help='Also write a .pdf report')

    def window(self, options):
        if options['nmax'] < 0 or options['mmax'] < options['nmax']:
            raise CommandError(
                f"window needs 0 <= nmax <= mmax, got nmax={options['nmax']}, mmax={options['mmax']}",
                returncode=2,
            )
        return range(options['nmax'] + 1), range(options['mmax'] + 1)

    def tower_session(self, options, generators):
        # the ring must reach the top of the window
        if options.get('m') is None:
            options = {**options, 'm': options['mmax']}
        return self.session(options, generators)

    def emit(self, report, options):
        self.stdout.write('n  m  order_exp  p_rank  raw_order_exp')
        for entry in report.grid:
            self.stdout.write(
                f'{entry.n:<2} {entry.m:<2} {entry.order_exp:<10} {entry.p_rank:<7} {entry.raw_order_exp}'
            )
        for entry in report.stabilization:
            if not entry.stabilized:
                self.stdout.write(self.style.WARNING(f'kernel order at n={entry.n} still changes at the top of the window'))
        if report.metadata.get('model'):
            self.stdout.write(f"note: {report.metadata['model']}")

        if options['out']:
            for path in report.write(options['out']):
                self.stdout.write(f'Wrote {path}')
        if options['xlsx']:
            self.stdout.write(f"Wrote {report.write_xlsx(options['xlsx'])}")
        if options['pdf']:
            self.stdout.write(f"Wrote {report.write_pdf(options['pdf'])}")
        self.stdout.write(self.style.SUCCESS(report.summary_line()))
