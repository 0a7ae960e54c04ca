"""
Closure constructions: probability normalization, boolean combinations, complement, inverse homomorphism and left
quotient. Every construction returns a new automaton and leaves its input untouched.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Mapping, Sequence, Tuple

from pralib.automata import HASH, check_alphabet, check_word
from pralib.automata.pra_c import PraC
from pralib.automata.pra_dh import PraDh
from pralib.dsmat import ONE, ZERO, RationalLike, StochMatrix, block_diagonal, matmul, to_rational

logger = logging.getLogger(__name__)


def _check_interval(p1: RationalLike, p2: RationalLike) -> Tuple[Fraction, Fraction]:
    p1, p2 = to_rational(p1), to_rational(p2)
    if not ZERO <= p1 < p2 <= ONE:
        raise ValueError(f'Interval must satisfy 0 <= p1 < p2 <= 1. p1={p1}; p2={p2}')
    return p1, p2


def _require_hash(automaton: PraC, operation: str) -> None:
    if not automaton.endmarkers.has_hash:
        raise ValueError(f'{operation} needs an automaton with the "#" end-marker. endmarkers={automaton.endmarkers}')


def _fresh_name(name: str, taken: Sequence[str]) -> str:
    while name in taken:
        name += "'"
    return name


def initial_hash_matrix(column: Sequence[Fraction], initial: int) -> StochMatrix:
    """
    The doubly stochastic '#' matrix whose column ``initial`` is ``column``. Only that column is ever used, since '#'
    is read once from the initial state; every other column ``j`` gets ``(1 - column[i]) / (n - 1)`` in row ``i``.
    """

    n = len(column)
    if sum(column, ZERO) != ONE:
        raise ValueError(f'The initial column must sum to 1. sum={sum(column, ZERO)}')
    if n == 1:
        return StochMatrix.identity(1)

    grid = [
        [column[i] if j == initial else (ONE - column[i]) / (n - 1) for j in range(n)]
        for i in range(n)
    ]
    return StochMatrix(grid)


def recognition_probability(p1: RationalLike, p2: RationalLike) -> Fraction:
    """The probability ``p`` that :func:`normalize_probability` recognizes with, i.e. with interval ``(1-p, p)``."""

    p1, p2 = _check_interval(p1, p2)
    if p1 + p2 >= 1:
        return p2 / (p1 + p2)
    return (1 - p1) / (2 - p1 - p2)


def normalize_probability(automaton: PraC, p1: RationalLike, p2: RationalLike) -> PraC:
    """
    Turns an automaton with interval ``(p1, p2)`` into one with interval ``(1-p, p)``.

    One sink state is added. On '#', the initial state sends part of its mass to the sink: ``1 - 1/c`` of it, where
    ``c = p1 + p2``, if ``c >= 1`` (the sink then rejects), or ``(1-c)/(2-c)`` if ``c < 1`` (the sink then accepts).
    The rest of the '#' column is scaled down to match. Every other symbol leaves the sink where it is.
    """

    _require_hash(automaton, 'normalize_probability')
    p1, p2 = _check_interval(p1, p2)

    c = p1 + p2
    if c >= 1:
        to_sink, sink_accepts = 1 - 1 / c, False
    else:
        to_sink, sink_accepts = (1 - c) / (2 - c), True

    n = automaton.size
    sink = n
    sink_name = _fresh_name('sink', automaton.states)

    old_column = automaton.matrix(HASH).column(automaton.initial)
    column = [(1 - to_sink) * v for v in old_column] + [to_sink]

    transitions = {
        symbol: block_diagonal(m, StochMatrix.identity(1))
        for symbol, m in automaton.transitions.items()
    }
    transitions[HASH] = initial_hash_matrix(column, automaton.initial)

    accepting = automaton.names(automaton.accepting) + ((sink_name,) if sink_accepts else ())
    result = automaton.replace(
        states=automaton.states + (sink_name,),
        accepting=accepting,
        transitions=transitions,
    )

    logger.debug(
        f'Normalized interval ({p1}, {p2}) to probability {recognition_probability(p1, p2)}; '
        f'sink {sink} {"accepts" if sink_accepts else "rejects"} with weight {to_sink}'
    )
    return result


class BooleanOp(Enum):
    UNION = 'union'
    INTERSECTION = 'intersection'


def boolean_combine(a: PraC, b: PraC, op: BooleanOp) -> PraC:
    """
    Runs ``a`` or ``b``, each with probability 1/2: '#' splits the initial mass evenly between the '#' distributions
    of the two automata, and every other symbol acts on each half separately. The acceptance probability of a word is
    the average of its acceptance by ``a`` and by ``b``.

    The automaton is the same for union and intersection; ``op`` only selects which interval the result is read with
    (see :func:`combined_interval`). That interval separates only if both inputs recognize with probability above
    2/3, which the caller has to guarantee.
    """

    op = BooleanOp(op)
    for automaton in (a, b):
        _require_hash(automaton, 'boolean_combine')

    if set(a.alphabet) != set(b.alphabet):
        raise ValueError(f'Alphabets differ. {a.alphabet} != {b.alphabet}')
    if a.endmarkers != b.endmarkers:
        raise ValueError(f'End-markers differ. {a.endmarkers} != {b.endmarkers}')

    logger.warning(f'boolean_combine({op.value}) assumes both automata recognize with probability above 2/3')

    half = Fraction(1, 2)
    column = (
            [half * v for v in a.matrix(HASH).column(a.initial)]
            + [half * v for v in b.matrix(HASH).column(b.initial)]
    )

    transitions = {
        symbol: block_diagonal(a.matrix(symbol), b.matrix(symbol))
        for symbol in a.symbols
    }
    transitions[HASH] = initial_hash_matrix(column, a.initial)

    states = tuple(f'A.{s}' for s in a.states) + tuple(f'B.{s}' for s in b.states)
    accepting = [states[i] for i in a.accepting] + [states[a.size + i] for i in b.accepting]

    result = PraC(states, a.alphabet, states[a.initial], accepting, transitions, a.endmarkers)
    logger.debug(f'Combined for {op.value}: {a.size} + {b.size} states')
    return result


def combined_interval(op: BooleanOp, pa: RationalLike, pb: RationalLike) -> Tuple[Fraction, Fraction]:
    """
    The interval that :func:`boolean_combine` guarantees, given that ``a`` recognizes with probability ``pa`` and
    ``b`` with ``pb`` (intervals ``(1-pa, pa)`` and ``(1-pb, pb)``).
    """

    op = BooleanOp(op)
    pa, pb = to_rational(pa), to_rational(pb)
    for p in (pa, pb):
        if not Fraction(1, 2) < p <= ONE:
            raise ValueError(f'Recognition probabilities must be in (1/2, 1]. pa={pa}; pb={pb}')

    lowest = min(pa, pb)
    if op is BooleanOp.INTERSECTION:
        return 1 - lowest / 2, (pa + pb) / 2
    return (2 - pa - pb) / 2, lowest / 2


def complement(automaton: PraC) -> PraC:
    """Swaps accepting and rejecting states (for decide-and-halt automata, the two halting sets)."""

    accepting = automaton.names(automaton.rejecting)
    if isinstance(automaton, PraDh):
        return automaton.replace(accepting=accepting, rejecting=automaton.names(automaton.accepting))
    return automaton.replace(accepting=accepting)


@dataclass(frozen=True)
class HomomorphismSpec:
    """A map from the letters of ``source`` to words over ``target``."""

    source: Tuple[str, ...]
    target: Tuple[str, ...]
    images: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, 'source', check_alphabet(self.source))
        object.__setattr__(self, 'target', check_alphabet(self.target))
        object.__setattr__(self, 'images', dict(self.images))

        if set(self.images) != set(self.source):
            raise ValueError(f'Images must be given for exactly the source letters. images={sorted(self.images)}')
        for letter, image in self.images.items():
            check_word(image, self.target)

    @classmethod
    def from_mapping(cls, images: Mapping[str, str], target: Sequence[str]) -> 'HomomorphismSpec':
        return cls(tuple(images), tuple(target), images)

    @classmethod
    def identity(cls, alphabet: Sequence[str]) -> 'HomomorphismSpec':
        return cls(tuple(alphabet), tuple(alphabet), {letter: letter for letter in alphabet})

    def apply(self, word: str) -> str:
        return ''.join(self.images[letter] for letter in check_word(word, self.source))

    def __hash__(self) -> int:
        return hash((self.source, self.target, tuple(sorted(self.images.items()))))


def inverse_hom(automaton: PraC, h: HomomorphismSpec) -> PraC:
    """
    Reads each letter ``σ`` as the word ``h(σ)``: the matrix of ``σ`` is the product of the matrices along ``h(σ)``.
    The result accepts ``w`` exactly as ``automaton`` accepts ``h(w)``.
    """

    if not set(h.target) <= set(automaton.alphabet):
        raise ValueError(f'Target alphabet {h.target} is not within the automaton alphabet {automaton.alphabet}')

    transitions = {letter: automaton.word_matrix(h.images[letter]) for letter in h.source}
    for symbol in automaton.endmarkers.symbols:
        transitions[symbol] = automaton.matrix(symbol)

    return automaton.replace(alphabet=h.source, transitions=transitions)


def left_quotient(automaton: PraC, u: str) -> PraC:
    """Reads ``u`` right after '#', so the result accepts ``w`` exactly as ``automaton`` accepts ``uw``."""

    _require_hash(automaton, 'left_quotient')
    prefix = automaton.word_matrix(u)

    transitions = dict(automaton.transitions)
    transitions[HASH] = matmul(prefix, automaton.matrix(HASH))
    return automaton.replace(transitions=transitions)
