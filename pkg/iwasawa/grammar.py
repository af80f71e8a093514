"""
Text grammars for elements, characters, ideals and flats.

Expressions are parsed with the `ast` module. Errors carry the 1-based
position in the text as typed.
"""

import ast
import re

from sympy import Expr

from arithmetic.exceptions import IwasawaError, ParseError

from .characters import Character, ZpFlat
from .group_ring import GroupRingElement, lift_poly, nu, nu_full, omega, sharp, t_symbols
from .ideals import IdealSpec

CHARACTER_PATTERN = re.compile(r'\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*(?:@\s*(\d+)\s*)?')
FLAT_EQUATION_PATTERN = re.compile(r'\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*:\s*(\d+)\s*@\s*(\d+)\s*')
FUNCTION_ARITY = {'omega': 2, 'nu': 3, 'nufull': 2, 'sharp': 1}


class _Monomial(tuple):
    """A group element sigma^a kept symbolic while parsing."""


class _ElementParser:
    def __init__(self, text, ring):
        self.text = text
        self.ring = ring
        source = text.replace('\n', ' ').replace('\r', ' ')
        self.lead = len(source) - len(source.lstrip())
        self.source = source.strip().replace('^', '**')
        self.symbols = {str(t): t for t in t_symbols(ring.d)}
        # offsets in self.source -> offsets in text
        self.positions = []
        for i, char in enumerate(source.strip()):
            self.positions.extend([i, i] if char == '^' else [i])
        self.positions.append(len(source.strip()))

    def error(self, message, offset):
        offset = self.positions[min(max(offset, 0), len(self.positions) - 1)]
        return ParseError(message, position=self.lead + offset + 1, text=self.text)

    def error_at(self, message, node):
        return self.error(message, getattr(node, 'col_offset', 0))

    def parse(self):
        if not self.source:
            raise ParseError("empty element", position=1, text=self.text)
        try:
            tree = ast.parse(self.source, mode='eval')
        except SyntaxError as exc:
            raise self.error(f"malformed element: {exc.msg}", (exc.offset or 1) - 1) from exc
        return self.to_element(self.visit(tree.body), tree.body)

    def to_element(self, value, node):
        ring = self.ring
        if isinstance(value, GroupRingElement):
            return value
        if isinstance(value, _Monomial):
            return ring.group_element(value)
        if isinstance(value, int):
            return ring.scalar(value)
        try:
            return lift_poly(ring, value)
        except IwasawaError as exc:
            raise self.error_at(exc.message, node) from exc

    def integer(self, node):
        value = self.visit(node)
        if not isinstance(value, int):
            raise self.error_at("expected an integer", node)
        return value

    def monomial(self, node):
        value = self.visit(node)
        if value == 1 and isinstance(value, int):
            return _Monomial((0,) * self.ring.d)
        if not isinstance(value, _Monomial):
            raise self.error_at("expected a group element such as s1*s2^2", node)
        return value

    def visit(self, node):
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return node.value
        if isinstance(node, ast.Name):
            return self.name(node)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            value = self.visit(node.operand)
            if isinstance(node.op, ast.UAdd):
                return value
            if isinstance(value, _Monomial):
                value = self.ring.group_element(value)
            return -value
        if isinstance(node, ast.BinOp):
            return self.binop(node)
        if isinstance(node, ast.Call):
            return self.call(node)
        raise self.error_at(f"unexpected {type(node).__name__.lower()} in element", node)

    def name(self, node):
        if node.id in self.symbols:
            return self.symbols[node.id]
        match = re.fullmatch(r's([1-9][0-9]*)', node.id)
        if match and int(match.group(1)) <= self.ring.d:
            return _Monomial(self.ring.generator(int(match.group(1)) - 1))
        raise self.error_at(f"unknown name {node.id!r} (d={self.ring.d})", node)

    def binop(self, node):
        left, right = self.visit(node.left), self.visit(node.right)
        scalar = (int, Expr)
        if isinstance(node.op, ast.Pow):
            if not isinstance(right, int):
                raise self.error_at("exponents must be integers", node.right)
            if isinstance(left, _Monomial):
                return _Monomial(e * right for e in left)
            if right < 0:
                raise self.error_at("negative powers are only allowed on group elements", node.right)
            return left ** right
        if isinstance(node.op, ast.Mult):
            if isinstance(left, _Monomial) and isinstance(right, _Monomial):
                return _Monomial(a + b for a, b in zip(left, right))
            if isinstance(left, scalar) and isinstance(right, scalar):
                return left * right
            if isinstance(left, int):
                return self.to_element(right, node.right) * left
            if isinstance(right, int):
                return self.to_element(left, node.left) * right
            return self.to_element(left, node.left) * self.to_element(right, node.right)
        if isinstance(node.op, (ast.Add, ast.Sub)):
            if not (isinstance(left, scalar) and isinstance(right, scalar)):
                left, right = self.to_element(left, node.left), self.to_element(right, node.right)
            return left + right if isinstance(node.op, ast.Add) else left - right
        raise self.error_at(f"unsupported operator {type(node.op).__name__}", node)

    def call(self, node):
        if not isinstance(node.func, ast.Name) or node.keywords:
            raise self.error_at("unsupported call", node)
        name, args, ring = node.func.id, node.args, self.ring
        if name not in FUNCTION_ARITY:
            raise self.error_at(f"unknown function {name!r}", node)
        if len(args) != FUNCTION_ARITY[name]:
            raise self.error_at(f"{name} takes {FUNCTION_ARITY[name]} arguments, got {len(args)}", node)
        try:
            if name == 'omega':
                return omega(ring, self.monomial(args[0]), self.integer(args[1]))
            if name == 'nu':
                return nu(ring, self.monomial(args[0]), self.integer(args[1]), self.integer(args[2]))
            if name == 'nufull':
                return nu_full(ring, self.integer(args[0]), self.integer(args[1]))
            return sharp(self.to_element(self.visit(args[0]), args[0]))
        except ParseError:
            raise
        except IwasawaError as exc:
            raise self.error_at(exc.message, node) from exc


def parse_element(text, ring):
    """Parse an element of R_{m,N}, e.g. `1 + T1^2 - 3*nu(s1*s2, 0, 1)`."""
    return _ElementParser(text, ring).parse()


def parse_character(text, p, d, level):
    """`e1,...,ed@level`; the level defaults to `level`."""
    match = CHARACTER_PATTERN.fullmatch(text)
    if not match:
        position = next((i + 1 for i, c in enumerate(text) if c not in '0123456789,@- \t'), 1)
        raise ParseError(f"malformed character {text!r}, expected e1,...,ed@level", position, text)
    exps = [int(e) for e in match.group(1).split(',')]
    if len(exps) != d:
        raise ParseError(f"character needs {d} exponents, got {len(exps)}", match.start(1) + 1, text)
    m = int(match.group(2)) if match.group(2) is not None else level
    return Character(tuple(exps), m, p)


def _literal(node, text, name):
    try:
        return ast.literal_eval(node)
    except (ValueError, TypeError, SyntaxError) as exc:
        raise ParseError(f"{name} must be a literal", node.col_offset + 1, text) from exc


def _level(node, text):
    value = _literal(node, text, "level")
    if type(value) is not int:
        raise ParseError("level must be an integer", node.col_offset + 1, text)
    return value


def _int_vector(node, text, name, value=None):
    value = _literal(node, text, name) if value is None else value
    if not isinstance(value, (list, tuple)) or not all(type(v) is int for v in value):
        raise ParseError(f"{name} must be a list of integers", node.col_offset + 1, text)
    return tuple(value)


def _int_matrix(node, text, name):
    value = _literal(node, text, name)
    if not isinstance(value, (list, tuple)) or not value:
        raise ParseError(f"{name} must be a non-empty list of integer lists", node.col_offset + 1, text)
    return tuple(_int_vector(node, text, name, row) for row in value)


def _ideal(node, text):
    if not isinstance(node, ast.Call) or not isinstance(node.func, ast.Name):
        raise ParseError("expected AUG, TIGHT, RN, SUM or EXPL", node.col_offset + 1, text)
    kind, args = node.func.id, node.args
    keywords = {kw.arg: kw.value for kw in node.keywords}
    position = node.col_offset + 1
    try:
        if kind == IdealSpec.AUG and len(args) == 1 and not keywords:
            return IdealSpec.aug(_level(args[0], text))
        if kind == IdealSpec.TIGHT and len(args) in (1, 2):
            tau = args[1] if len(args) == 2 else keywords.get('tau')
            if tau is None:
                raise ParseError("TIGHT needs tau=[[..], ..]", position, text)
            return IdealSpec.tight(_level(args[0], text), _int_matrix(tau, text, "tau"))
        if kind == IdealSpec.RN and not args and {'r', 'n'} <= set(keywords):
            basis = None
            if 'basis' in keywords:
                basis = _int_matrix(keywords['basis'], text, "basis")
            return IdealSpec.rn(
                _int_vector(keywords['r'], text, "r"), _int_vector(keywords['n'], text, "n"), basis
            )
        if kind == IdealSpec.SUM and args and not keywords:
            return IdealSpec.sum(*(_ideal(arg, text) for arg in args))
        if kind == IdealSpec.EXPL and len(args) == 1 and isinstance(args[0], ast.List):
            return IdealSpec.explicit(ast.get_source_segment(text, e) for e in args[0].elts)
    except ParseError:
        raise
    except IwasawaError as exc:
        raise ParseError(exc.message, position, text) from exc
    raise ParseError(f"malformed ideal {kind}(...)", position, text)


def parse_ideal(text):
    """Parse AUG(n), TIGHT(n; tau=[..]), RN(r=[..], n=[..]), SUM(..) or EXPL([..])."""
    stripped = text.strip()
    lead = len(text) - len(text.lstrip())
    source = stripped.replace(';', ',')
    try:
        tree = ast.parse(source, mode='eval')
    except SyntaxError as exc:
        raise ParseError(f"malformed ideal: {exc.msg}", lead + (exc.offset or 1), text) from exc
    try:
        return _ideal(tree.body, source)
    except ParseError as exc:
        raise ParseError(exc.message, lead + (exc.position or 1), text) from exc


def parse_flats(text, p, d):
    """Flats separated by `|`, each a `;`-list of equations `a,b:u@r`, or `all`."""
    flats = []
    if not text.strip():
        return flats
    offset = 0
    for chunk in text.split('|'):
        equations = []
        if chunk.strip().lower() != 'all':
            start = offset
            for piece in chunk.split(';'):
                match = FLAT_EQUATION_PATTERN.fullmatch(piece)
                if not match:
                    raise ParseError(
                        f"malformed flat equation {piece.strip()!r}, expected a,b:u@r", start + 1, text
                    )
                xi = tuple(int(e) for e in match.group(1).split(','))
                equations.append((xi, int(match.group(2)), int(match.group(3))))
                start += len(piece) + 1
        try:
            flats.append(ZpFlat(p, d, tuple(equations)))
        except IwasawaError as exc:
            raise ParseError(exc.message, offset + 1, text) from exc
        offset += len(chunk) + 1
    return flats
