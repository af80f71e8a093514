import numpy as np
from django.conf import settings

from arithmetic.exceptions import CapExceeded
from arithmetic.linalg import FiniteModulePresentation, module_invariants, smith_form
from arithmetic.residues import ChainRing
from towers.grammar import parse_matrix
from towers.session import SessionCommand


class Command(SessionCommand):
    help = 'Smith form over Z/p^N of an integer matrix and the invariants of its cokernel'

    def add_command_arguments(self, parser):
        parser.add_argument('--matrix', required=True, help='Rows a,b; c,d')

    def handle(self, *args, **options):
        session = self.session(options)
        rows = parse_matrix(options['matrix'])
        chain = ChainRing(session.p, session.N)
        matrix = chain.reduce(np.array(rows, dtype=np.int64))
        cap = settings.IWASAWA['MATRIX_DIMENSION_CAP']
        if max(matrix.shape) > cap:
            raise CapExceeded(f'matrix of shape {matrix.shape} exceeds the dimension cap {cap}')
        form = smith_form(matrix, chain)
        cokernel = module_invariants(FiniteModulePresentation(chain, matrix.shape[0], matrix))

        self.stdout.write(f'exponents: {list(form.exponents)}')
        self.stdout.write(f'rank: {form.rank}')
        self.stdout.write(f'kernel order: {session.p}^{form.kernel_order_exp()}')
        self.stdout.write(self.style.SUCCESS(
            f'cokernel: order {session.p}^{cokernel.order_exp}, p-rank {cokernel.p_rank}, '
            f'divisors {list(cokernel.divisors)}, free rank {cokernel.free_rank}'
        ))
