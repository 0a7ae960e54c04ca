"""
Structural patterns in minimal DFAs that rule out recognition by reversible probabilistic automata.

A language is of type (*′) if its minimal DFA has states q, q1 != q2 and words x, y with q·x = q1, q·y = q2, where
both x and y fix q1 and fix q2. It is of type (*″) if there are q1 != q2 and words x, y with q1·x = q2, q2·x = q2 and
q2·y = q1. Type (*) is the general pattern; a language has it exactly when it has one of the other two, which is how
:func:`classify_star` decides it.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import count
from typing import Dict, Optional, Tuple

from pralib.regclass.dfa import Dfa, State, minimize
from pralib.regclass.search import ProductSearch, SearchTree
from pralib.utils import format_word

logger = logging.getLogger(__name__)


class WitnessKind(Enum):
    STAR = 'star'
    STAR_PRIME = 'star-prime'
    STAR_DPRIME = 'star-dprime'

    @property
    def label(self) -> str:
        return {
            WitnessKind.STAR: '(*)',
            WitnessKind.STAR_PRIME: '(*′)',
            WitnessKind.STAR_DPRIME: '(*″)',
        }[self]


@dataclass(frozen=True)
class Witness:
    kind: WitnessKind
    states: Tuple[State, ...]
    """``(q, q1, q2)`` for (*) and (*′); ``(q1, q2)`` for (*″)."""
    x: str
    y: str
    omega: Optional[str] = None
    """Word leading from the initial state to the pattern (filled in by :func:`prepare_probe`)."""
    z: Optional[str] = None
    """Word telling q1 and q2 apart (filled in by :func:`prepare_probe`)."""
    dfa: Optional[Dfa] = field(default=None, compare=False, repr=False)

    def replay(self, dfa: Dfa = None) -> bool:
        """Checks the defining equations of the witness kind by running the words on the DFA."""

        dfa = dfa or self.dfa
        if dfa is None:
            raise ValueError('A DFA is needed to replay the witness')

        run = lambda word, state: dfa.run(word, state)  # noqa: E731

        if self.kind is WitnessKind.STAR_DPRIME:
            q1, q2 = self.states
            return q1 != q2 and run(self.x, q1) == q2 and run(self.x, q2) == q2 and run(self.y, q2) == q1

        q, q1, q2 = self.states
        if q1 == q2 or run(self.x, q) != q1 or run(self.y, q) != q2:
            return False

        if self.kind is WitnessKind.STAR_PRIME:
            return all(run(word, s) == s for word in (self.x, self.y) for s in (q1, q2))

        return (
                run(self.x, q1) == q1
                and run(self.y, q2) == q2
                and is_recurrent(dfa, q1, (self.x, self.y))
                and is_recurrent(dfa, q2, (self.x, self.y))
        )

    def describe(self) -> str:
        text = f'type (*) via {self.kind.label}; witness x={format_word(self.x)} y={format_word(self.y)}'
        if self.omega is not None and self.z is not None:
            text += f' omega={format_word(self.omega)} z={format_word(self.z)}'
        return text


def is_recurrent(dfa: Dfa, state: State, generators: Tuple[str, ...]) -> bool:
    """True iff ``state`` can be reached back from every state that the words in ``generators`` lead it to."""

    def successors(s):
        return {dfa.run(word, s) for word in generators}

    reached = {state}
    stack = [state]
    while stack:
        for target in successors(stack.pop()):
            if target not in reached:
                reached.add(target)
                stack.append(target)

    for start in reached:
        seen = {start}
        stack = [start]
        while stack and state not in seen:
            for target in successors(stack.pop()):
                if target not in seen:
                    seen.add(target)
                    stack.append(target)
        if state not in seen:
            return False

    return True


def is_permutation_dfa(dfa: Dfa) -> bool:
    """True iff every symbol permutes the states."""
    return all(len(set(dfa.symbol_map(symbol).values())) == dfa.size for symbol in dfa.alphabet)


def idempotent_power(dfa: Dfa, state: State, word: str) -> int:
    """The least k >= 1 with state·word^k = state·word^(2k); it always exists."""

    if not word:
        raise ValueError('word must be non-empty')

    images = {s: dfa.run(word, s) for s in dfa.states}

    current = state
    for k in count(1):
        current = images[current]
        doubled = current
        for _ in range(k):
            doubled = images[doubled]
        if doubled == current:
            return k


def classify_star_dprime(dfa: Dfa) -> Optional[Witness]:
    minimal = minimize(dfa)
    search = ProductSearch(minimal)
    returns: Dict[State, SearchTree] = {}

    for q1 in minimal.states:
        for q2 in minimal.states:
            if q1 == q2:
                continue

            x = search.find_word((q1, q2), (q2, q2))
            if x is None:
                continue

            if q2 not in returns:
                returns[q2] = search.explore((q2,))
            y = returns[q2].word_to((q1,))
            if y is None:
                continue

            logger.debug(f'(*″) found after {search.stats.searches} searches')
            return Witness(WitnessKind.STAR_DPRIME, (q1, q2), x, y, dfa=minimal)

    return None


def classify_star_prime(dfa: Dfa) -> Optional[Witness]:
    minimal = minimize(dfa)
    search = ProductSearch(minimal)

    for q in minimal.states:
        for q1 in minimal.states:
            for q2 in minimal.states:
                if q1 == q2:
                    continue

                tree = search.explore((q, q1, q2))
                x = tree.word_to((q1, q1, q2))
                if x is None:
                    continue
                y = tree.word_to((q2, q1, q2))
                if y is None:
                    continue

                logger.debug(f'(*′) found after {search.stats.searches} searches')
                return Witness(WitnessKind.STAR_PRIME, (q, q1, q2), x, y, dfa=minimal)

    return None


def classify_star(dfa: Dfa) -> Optional[Witness]:
    """A (*′) or (*″) witness if the language is of type (*), otherwise None."""
    return classify_star_prime(dfa) or classify_star_dprime(dfa)


def prepare_probe(witness: Witness) -> Witness:
    """Adds the words omega (initial state to the pattern) and z (separating q1 from q2) to a witness."""

    dfa = witness.dfa
    if dfa is None:
        raise ValueError('The witness does not carry its DFA')

    search = ProductSearch(dfa)
    if witness.kind is WitnessKind.STAR_DPRIME:
        target, q1, q2 = witness.states[0], witness.states[0], witness.states[1]
    else:
        target, q1, q2 = witness.states

    omega = search.find_word((dfa.initial,), (target,))
    if omega is None:
        raise ValueError(f'State {target!r} is not reachable; minimize the DFA first')

    tree = search.explore((q1, q2))
    z = next(
        (tree.word_to(node) for node in tree.nodes() if dfa.is_accepting(node[0]) != dfa.is_accepting(node[1])),
        None,
    )
    if z is None:
        raise ValueError(f'States {q1!r} and {q2!r} are equivalent; minimize the DFA first')

    return Witness(witness.kind, witness.states, witness.x, witness.y, omega, z, dfa=dfa)
