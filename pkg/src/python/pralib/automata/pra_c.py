from fractions import Fraction
from types import MappingProxyType
from typing import Any, Dict, Iterable, Mapping, Sequence, Tuple

from pralib.automata import (
    DOLLAR, HASH, Endmarkers, ValidationReport, check_alphabet, check_word, state_indices,
)
from pralib.dsmat import Distribution, MatrixKind, StochMatrix, ZERO, mat_vec, matmul
from pralib.exceptions import FormatError
from pralib.utils import build_repr, unique


class PraC:
    """
    Probabilistic reversible automaton with classical acceptance.

    The word is read once, enclosed in the end-markers selected by ``endmarkers``, and accepted with the probability
    mass that ends on the accepting states. Every transition matrix must be doubly stochastic for the automaton to be
    valid; this is checked by :func:`validate` rather than on construction, so malformed automata can be inspected.
    """

    def __init__(
            self,
            states: Sequence[str],
            alphabet: Sequence[str],
            initial: str,
            accepting: Iterable[str],
            transitions: Mapping[str, Any],
            endmarkers: Endmarkers = Endmarkers.BOTH,
    ):
        """
        :param states: State names, in index order.
        :param alphabet: Input symbols (single characters, not end-markers).
        :param initial: Name of the initial state.
        :param accepting: Names of the accepting states.
        :param transitions: Matrix (or rational grid) for each alphabet symbol and each end-marker in use.
        :param endmarkers: Which end-markers enclose the word.
        """

        self.states: Tuple[str, ...] = tuple(states)
        if not self.states:
            raise FormatError('An automaton needs at least one state')
        if unique(self.states) != self.states:
            raise FormatError(f'State names must be unique. states={self.states}')

        self.alphabet: Tuple[str, ...] = check_alphabet(alphabet)
        self.endmarkers = Endmarkers(endmarkers)

        if initial not in self.states:
            raise FormatError(f'Unknown initial state {initial!r}. states={self.states}')
        self.initial: int = self.states.index(initial)
        self.accepting: frozenset = state_indices(self.states, accepting, 'accepting')

        expected = set(self.symbols)
        if set(transitions) != expected:
            raise FormatError(
                f'Transitions must cover exactly the symbols {sorted(expected)}. got={sorted(transitions)}'
            )

        matrices = {}
        for symbol in self.symbols:
            matrix = transitions[symbol]
            if not isinstance(matrix, StochMatrix):
                matrix = StochMatrix(matrix)
            if matrix.order != self.size:
                raise FormatError(
                    f'Matrix of {symbol!r} has order {matrix.order}, but there are {self.size} states'
                )
            matrices[symbol] = matrix

        self.transitions: Mapping[str, StochMatrix] = MappingProxyType(matrices)

    @property
    def size(self) -> int:
        return len(self.states)

    @property
    def symbols(self) -> Tuple[str, ...]:
        """The working alphabet: '#' (if used), the input symbols, then '$' (if used)."""

        hash_ = (HASH,) if self.endmarkers.has_hash else ()
        dollar = (DOLLAR,) if self.endmarkers.has_dollar else ()

        return hash_ + self.alphabet + dollar

    @property
    def initial_state(self) -> str:
        return self.states[self.initial]

    @property
    def rejecting(self) -> frozenset:
        return frozenset(range(self.size)) - self.accepting

    def names(self, indices: Iterable[int]) -> Tuple[str, ...]:
        return tuple(self.states[i] for i in sorted(indices))

    def matrix(self, symbol: str) -> StochMatrix:
        return self.transitions[symbol]

    def word_matrix(self, word: str) -> StochMatrix:
        """The matrix of reading ``word`` letter by letter: ``V_{w_k} ··· V_{w_1}``."""

        check_word(word, self.alphabet)

        result = StochMatrix.identity(self.size)
        for symbol in word:
            result = matmul(self.transitions[symbol], result)

        return result

    def tape(self, word: str) -> str:
        return self.endmarkers.tape(check_word(word, self.alphabet))

    def run(self, word: str) -> Distribution:
        """The state distribution after reading the whole tape."""
        return Distribution(self._run_tape(self.tape(word)))

    def _run_tape(self, tape: str, weights: Tuple[Fraction, ...] = None) -> Tuple[Fraction, ...]:
        if weights is None:
            weights = Distribution.point(self.size, self.initial).weights

        for symbol in tape:
            weights = mat_vec(self.transitions[symbol], weights)

        return weights

    def accept_prob(self, word: str) -> Fraction:
        weights = self._run_tape(self.tape(word))
        return sum((weights[i] for i in self.accepting), ZERO)

    def is_permutation_automaton(self) -> bool:
        return all(m.kind == MatrixKind.PERMUTATION for m in self.transitions.values())

    def validate(self) -> ValidationReport:
        report = ValidationReport()

        for symbol in self.symbols:
            verdict = self.transitions[symbol].verdict
            if verdict.kind < MatrixKind.DOUBLY_STOCHASTIC:
                report.add(
                    f'matrix is {verdict.kind.label}, not doubly stochastic: {verdict.reason}',
                    symbol, verdict.row, verdict.column,
                )

        return report

    def init_kwargs(self) -> Dict[str, Any]:
        """Constructor arguments that rebuild this automaton; constructions edit a copy and pass it to ``replace``."""

        return dict(
            states=self.states,
            alphabet=self.alphabet,
            initial=self.initial_state,
            accepting=self.names(self.accepting),
            transitions=dict(self.transitions),
            endmarkers=self.endmarkers,
        )

    def replace(self, **changes) -> 'PraC':
        kwargs = self.init_kwargs()
        kwargs.update(changes)
        return type(self)(**kwargs)

    def _key(self) -> tuple:
        return (
            type(self), self.states, self.alphabet, self.initial, self.accepting, self.endmarkers,
            tuple(self.transitions[s] for s in self.symbols),
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, PraC) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return build_repr(self, 'states', 'alphabet', 'endmarkers')


def validate(automaton: PraC) -> ValidationReport:
    """Checks that every transition matrix is doubly stochastic (and, for decide-and-halt automata, the partition)."""
    return automaton.validate()


def accept_prob_c(automaton: PraC, word: str) -> Fraction:
    return automaton.accept_prob(word)


def reverse_transitions(automaton: PraC) -> PraC:
    """Transposes every matrix: the automaton whose transition function is the reverse of the given one."""

    return automaton.replace(
        transitions={symbol: m.transpose() for symbol, m in automaton.transitions.items()},
    )
