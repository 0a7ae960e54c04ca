"""
Regular expressions over single-character symbols.

Syntax: implicit concatenation, alternation with ``|`` (``,`` is accepted as an alias, so ``(a,b)*a`` works),
grouping with parentheses, Kleene star ``*``. An empty alternative, ``()``, or ``ε`` denotes the empty word.
Whitespace is ignored.
"""

from dataclasses import dataclass
from typing import FrozenSet, Iterable, Optional, Tuple, Union

from pralib.exceptions import RegexSyntaxError

ALTERNATION = '|,'
EPSILON = 'ε'
SPECIAL = set(ALTERNATION) | set('()*') | {EPSILON}


@dataclass(frozen=True)
class Epsilon:
    def __str__(self) -> str:
        return EPSILON


@dataclass(frozen=True)
class Literal:
    symbol: str

    def __str__(self) -> str:
        return self.symbol


@dataclass(frozen=True)
class Concat:
    parts: Tuple['Regex', ...]

    def __str__(self) -> str:
        return ''.join(f'({p})' if isinstance(p, Alternation) else str(p) for p in self.parts)


@dataclass(frozen=True)
class Alternation:
    options: Tuple['Regex', ...]

    def __str__(self) -> str:
        return '|'.join(str(o) for o in self.options)


@dataclass(frozen=True)
class Star:
    inner: 'Regex'

    def __str__(self) -> str:
        inner = str(self.inner)
        return f'{inner}*' if isinstance(self.inner, Literal) else f'({inner})*'


Regex = Union[Epsilon, Literal, Concat, Alternation, Star]


def literals(node: Regex) -> FrozenSet[str]:
    if isinstance(node, Literal):
        return frozenset(node.symbol)
    elif isinstance(node, Concat):
        return frozenset().union(*(literals(p) for p in node.parts))
    elif isinstance(node, Alternation):
        return frozenset().union(*(literals(o) for o in node.options))
    elif isinstance(node, Star):
        return literals(node.inner)
    return frozenset()


class _Parser:
    """Recursive descent: union -> concat -> kleene -> elementary."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def parse(self) -> Regex:
        node = self._union()
        if self._peek() is not None:
            raise RegexSyntaxError(f'Unexpected {self._peek()!r}', self.text, self.pos)
        return node

    def _peek(self) -> Optional[str]:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else None

    def _union(self) -> Regex:
        options = [self._concat()]
        while self._peek() is not None and self._peek() in ALTERNATION:
            self.pos += 1
            options.append(self._concat())

        return options[0] if len(options) == 1 else Alternation(tuple(options))

    def _concat(self) -> Regex:
        parts = []
        while self._peek() is not None and self._peek() not in ALTERNATION + ')':
            parts.append(self._kleene())

        if not parts:
            return Epsilon()
        return parts[0] if len(parts) == 1 else Concat(tuple(parts))

    def _kleene(self) -> Regex:
        node = self._elementary()
        while self._peek() == '*':
            self.pos += 1
            if not isinstance(node, Star):
                node = Star(node)
        return node

    def _elementary(self) -> Regex:
        char = self._peek()

        if char is None:
            raise RegexSyntaxError('Unexpected end of the pattern', self.text, self.pos)
        elif char == '(':
            self.pos += 1
            node = self._union()
            if self._peek() != ')':
                raise RegexSyntaxError('Expected ")"', self.text, self.pos)
            self.pos += 1
            return node
        elif char == '*':
            raise RegexSyntaxError('Nothing to repeat', self.text, self.pos)
        elif char == EPSILON:
            self.pos += 1
            return Epsilon()

        self.pos += 1
        return Literal(char)


def parse_regex(text: str, alphabet: Iterable[str] = None) -> Regex:
    """
    :param alphabet: If given, every literal must belong to it.
    :raises RegexSyntaxError: With the position of the problem.
    """

    node = _Parser(text).parse()

    if alphabet is not None:
        allowed = set(alphabet)
        for pos, char in enumerate(text):
            if char not in SPECIAL and not char.isspace() and char not in allowed:
                raise RegexSyntaxError(f'Symbol {char!r} is not in the alphabet {sorted(allowed)}', text, pos)

    return node
