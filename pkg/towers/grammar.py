"""
Grammars for modules and the other inputs of the tower commands.

    free | free r | quot e1; e2 | pres g: [e, ..]; [e, ..]
    a,b; c,d        (tight sets and integer matrices)
    [e1, .., eg]    (module vectors)
    j:expr; j:[e1, e2]

Positions in ParseError are 1-based offsets into the text as typed. When a
ring is given every element expression is parsed too, so a bad expression is
reported at its place in the whole text.
"""

import re

from arithmetic.exceptions import IwasawaError, ParseError
from iwasawa.grammar import parse_element

from .modules import LambdaPresentation

OPENING, CLOSING = '([', ')]'


def split_top_level(text, separator, start=0):
    """(offset, piece) pairs split on `separator` outside brackets."""
    pieces, depth, begin = [], 0, 0
    for i, char in enumerate(text):
        if char in OPENING:
            depth += 1
        elif char in CLOSING:
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced {char!r}", start + i + 1, text)
        elif char == separator and depth == 0:
            pieces.append((start + begin, text[begin:i]))
            begin = i + 1
    if depth:
        raise ParseError("unclosed bracket", start + len(text), text)
    pieces.append((start + begin, text[begin:]))
    return pieces


def _strip(offset, piece):
    lead = len(piece) - len(piece.lstrip())
    return offset + lead, piece.strip()


def _check_expression(offset, expression, text, ring):
    if not expression:
        raise ParseError("empty expression", offset + 1, text)
    if ring is None:
        return
    try:
        parse_element(expression, ring)
    except ParseError as exc:
        raise ParseError(exc.message, offset + (exc.position or 1), text) from exc


def _bracketed(offset, piece, text, ring):
    """`[e1, e2, ...]` -> expressions, or a single bare expression."""
    offset, piece = _strip(offset, piece)
    if not (piece.startswith('[') and piece.endswith(']')):
        _check_expression(offset, piece, text, ring)
        return (piece,)
    entries = []
    for entry_offset, entry in split_top_level(piece[1:-1], ',', offset + 1):
        entry_offset, entry = _strip(entry_offset, entry)
        _check_expression(entry_offset, entry, text, ring)
        entries.append(entry)
    return tuple(entries)


def parse_module(text, ring=None):
    offset, body = _strip(0, text)
    keyword = re.match(r'(free|quot|pres)\b', body)
    if not keyword:
        raise ParseError("expected free, quot or pres", offset + 1, text)
    rest_offset = offset + keyword.end()
    rest = body[keyword.end():]

    if keyword.group(1) == 'free':
        if not rest.strip():
            return LambdaPresentation.free()
        if not re.fullmatch(r'\s*[1-9][0-9]*\s*', rest):
            raise ParseError("free takes a positive rank", rest_offset + 1, text)
        return LambdaPresentation.free(int(rest))

    if keyword.group(1) == 'quot':
        relations = []
        for piece_offset, piece in split_top_level(rest, ';', rest_offset):
            piece_offset, piece = _strip(piece_offset, piece)
            _check_expression(piece_offset, piece, text, ring)
            relations.append((piece,))
        return LambdaPresentation(1, tuple(relations))

    header = re.match(r'\s*([1-9][0-9]*)\s*:', rest)
    if not header:
        raise ParseError("pres needs a generator count, as in pres 2: [..]", rest_offset + 1, text)
    g = int(header.group(1))
    columns_offset = rest_offset + header.end()
    columns = rest[header.end():]
    relations = []
    if columns.strip():
        for piece_offset, piece in split_top_level(columns, ';', columns_offset):
            column = _bracketed(piece_offset, piece, text, ring)
            if len(column) != g:
                raise ParseError(
                    f"relation {list(column)} needs {g} entries", _strip(piece_offset, piece)[0] + 1, text
                )
            relations.append(column)
    try:
        return LambdaPresentation(g, tuple(relations))
    except IwasawaError as exc:
        raise ParseError(exc.message, offset + 1, text) from exc


def parse_vector(text, g, ring):
    """`[e1, .., eg]` or a bare expression when g == 1 -> g ring elements."""
    entries = _bracketed(0, text, text, ring)
    if len(entries) != g:
        raise ParseError(f"vector needs {g} entries, got {len(entries)}", 1, text)
    return [parse_element(entry, ring) for entry in entries]


def parse_matrix(text):
    """`a,b; c,d` -> rows ((a, b), (c, d)) of equal length."""
    rows = []
    for offset, piece in split_top_level(text, ';'):
        offset, piece = _strip(offset, piece)
        if not re.fullmatch(r'-?\d+(\s*,\s*-?\d+)*', piece):
            raise ParseError(f"malformed matrix row {piece!r}", offset + 1, text)
        row = tuple(int(e) for e in piece.split(','))
        if rows and len(row) != len(rows[0]):
            raise ParseError(f"matrix row {piece!r} needs {len(rows[0])} entries", offset + 1, text)
        rows.append(row)
    return tuple(rows)


def parse_tight_set(text, d):
    """`a,b; c,d` -> ((a, b), (c, d))."""
    taus = []
    for offset, piece in split_top_level(text, ';'):
        offset, piece = _strip(offset, piece)
        if not re.fullmatch(r'-?\d+(\s*,\s*-?\d+)*', piece):
            raise ParseError(f"malformed exponent vector {piece!r}", offset + 1, text)
        tau = tuple(int(e) for e in piece.split(','))
        if len(tau) != d:
            raise ParseError(f"exponent vector {piece!r} needs {d} entries", offset + 1, text)
        taus.append(tau)
    return tuple(taus)


def parse_inertia(text, g=1, ring=None):
    """`j:expr; ...` -> ((j, (expr, ...)), ...); j is 1-based."""
    if not text.strip():
        return ()
    pairs = []
    for offset, piece in split_top_level(text, ';'):
        offset, piece = _strip(offset, piece)
        head = re.match(r'([1-9][0-9]*)\s*:', piece)
        if not head:
            raise ParseError(f"malformed inertia pair {piece!r}, expected j:expr", offset + 1, text)
        offset_x = offset + head.end()
        x = _bracketed(offset_x, piece[head.end():], text, ring)
        if len(x) != g:
            raise ParseError(f"inertia offset needs {g} entries, got {len(x)}", offset_x + 1, text)
        pairs.append((int(head.group(1)), x))
    return tuple(pairs)
