from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

from pralib.exceptions import FormatError, UnknownSymbolError
from pralib.utils import unique

HASH = '#'
DOLLAR = '$'
ENDMARKER_SYMBOLS = (HASH, DOLLAR)


class Endmarkers(Enum):
    """Which end-markers enclose the input word."""

    BOTH = 'both'
    HASH = 'hash'
    NONE = 'none'

    @property
    def has_hash(self) -> bool:
        return self is not Endmarkers.NONE

    @property
    def has_dollar(self) -> bool:
        return self is Endmarkers.BOTH

    @property
    def symbols(self) -> Tuple[str, ...]:
        return ((HASH,) if self.has_hash else ()) + ((DOLLAR,) if self.has_dollar else ())

    def tape(self, word: str) -> str:
        return (HASH if self.has_hash else '') + word + (DOLLAR if self.has_dollar else '')


class Violation(NamedTuple):
    message: str
    symbol: Optional[str] = None
    row: Optional[int] = None
    column: Optional[int] = None

    def __str__(self) -> str:
        where = []
        if self.symbol is not None:
            where.append(f'symbol={self.symbol!r}')
        if self.row is not None:
            where.append(f'row={self.row}')
        if self.column is not None:
            where.append(f'column={self.column}')

        return f'{self.message} ({", ".join(where)})' if where else self.message


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def add(self, message: str, symbol: str = None, row: int = None, column: int = None) -> None:
        self.violations.append(Violation(message, symbol, row, column))

    def __bool__(self) -> bool:
        return self.is_valid

    def __str__(self) -> str:
        if self.is_valid:
            return 'valid'

        return '\n'.join(['invalid:'] + [f'  {v}' for v in self.violations])


def check_alphabet(alphabet: Iterable[str]) -> Tuple[str, ...]:
    alphabet = tuple(alphabet)

    if unique(alphabet) != alphabet:
        raise FormatError(f'Alphabet symbols must be unique. alphabet={alphabet}')

    for symbol in alphabet:
        if not isinstance(symbol, str) or len(symbol) != 1:
            raise FormatError(f'Alphabet symbols must be single characters. symbol={symbol!r}')
        if symbol in ENDMARKER_SYMBOLS:
            raise FormatError(f'End-markers cannot be alphabet symbols. symbol={symbol!r}')

    return alphabet


def check_word(word: str, alphabet: Sequence[str]) -> str:
    allowed = set(alphabet)
    for symbol in word:
        if symbol not in allowed:
            raise UnknownSymbolError(symbol, alphabet)

    return word


def state_indices(states: Sequence[str], names: Iterable[str], what: str) -> frozenset:
    lookup = {name: i for i, name in enumerate(states)}

    indices = set()
    for name in names:
        if name not in lookup:
            raise FormatError(f'Unknown {what} state {name!r}. states={tuple(states)}')
        indices.add(lookup[name])

    return frozenset(indices)
