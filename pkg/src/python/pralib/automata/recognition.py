"""
Bounded-horizon recognition intervals.

The interval of an automaton for a language is ``(p1, p2)``: the highest acceptance probability of a non-member and
the lowest acceptance probability of a member. Here both are taken over all words up to a fixed length, exactly.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Hashable, Iterator, List, Optional, Tuple, Union

from pralib.automata import DOLLAR, HASH
from pralib.automata.pra_c import PraC
from pralib.automata.pra_dh import PraDh
from pralib.dsmat import Distribution, ZERO, format_rational, mat_vec
from pralib.regclass.dfa import Dfa
from pralib.utils import format_word

logger = logging.getLogger(__name__)

Membership = Union[Dfa, Callable[[str], bool]]


@dataclass(frozen=True)
class RecognitionInterval:
    p1: Optional[Fraction]
    """Highest acceptance over the non-members seen, or None if there were none."""
    p2: Optional[Fraction]
    """Lowest acceptance over the members seen, or None if there were none."""
    max_len: int
    worst_non_member: Optional[str] = None
    worst_member: Optional[str] = None

    @property
    def has_non_members(self) -> bool:
        return self.p1 is not None

    @property
    def has_members(self) -> bool:
        return self.p2 is not None

    @property
    def separates(self) -> bool:
        if self.p1 is None or self.p2 is None:
            return True
        return self.p1 < self.p2

    @property
    def gap(self) -> Optional[Fraction]:
        if self.p1 is None or self.p2 is None:
            return None
        return self.p2 - self.p1

    def __str__(self) -> str:
        p1 = '-' if self.p1 is None else format_rational(self.p1)
        p2 = '-' if self.p2 is None else format_rational(self.p2)
        return f'({p1}, {p2})'


class _ClassicalTracker:
    """Search state of a classical-acceptance automaton: the distribution after '#' and the prefix read so far."""

    def __init__(self, automaton: PraC):
        self.automaton = automaton
        self.n_accepting = len(automaton.accepting)
        self.bounded = all(m.is_doubly_stochastic for m in automaton.transitions.values())

    def start(self) -> Hashable:
        weights = Distribution.point(self.automaton.size, self.automaton.initial).weights
        if self.automaton.endmarkers.has_hash:
            weights = mat_vec(self.automaton.matrix(HASH), weights)
        return weights

    def advance(self, weights, symbol: str) -> Hashable:
        return mat_vec(self.automaton.matrix(symbol), weights)

    def acceptance(self, weights) -> Fraction:
        if self.automaton.endmarkers.has_dollar:
            weights = mat_vec(self.automaton.matrix(DOLLAR), weights)
        return sum((weights[i] for i in self.automaton.accepting), ZERO)

    def extension_bounds(self, weights) -> Optional[Tuple[Fraction, Fraction]]:
        """
        Bounds on the acceptance of every proper extension. A doubly stochastic matrix maps a vector to one it
        majorizes, so the accepting mass later on lies between the sums of the smallest and largest entries.
        """

        if not self.bounded:
            return None

        ordered = sorted(weights)
        k = self.n_accepting
        lower = sum(ordered[:k], ZERO)
        upper = sum(ordered[len(ordered) - k:], ZERO) if k else ZERO
        return lower, upper


class _DecideAndHaltTracker:
    """Search state of a decide-and-halt automaton: running mass plus the accepted and rejected mass so far."""

    def __init__(self, automaton: PraDh):
        self.automaton = automaton

    def _read(self, state, symbol: str):
        weights, accepted, rejected = state
        weights = list(mat_vec(self.automaton.matrix(symbol), weights))

        for i in self.automaton.accepting:
            accepted += weights[i]
            weights[i] = ZERO
        for i in self.automaton.rejecting:
            rejected += weights[i]
            weights[i] = ZERO

        return tuple(weights), accepted, rejected

    def start(self) -> Hashable:
        state = (Distribution.point(self.automaton.size, self.automaton.initial).weights, ZERO, ZERO)
        if self.automaton.endmarkers.has_hash:
            state = self._read(state, HASH)
        return state

    def advance(self, state, symbol: str) -> Hashable:
        return self._read(state, symbol)

    def acceptance(self, state) -> Fraction:
        if self.automaton.endmarkers.has_dollar:
            state = self._read(state, DOLLAR)
        return state[1]

    def extension_bounds(self, state) -> None:
        return None


def _tracker(automaton: PraC):
    if isinstance(automaton, PraDh):
        return _DecideAndHaltTracker(automaton)
    return _ClassicalTracker(automaton)


def _interval_levels(automaton: PraC, member: Membership, max_len: int) -> Iterator[RecognitionInterval]:
    if max_len < 0:
        raise ValueError(f'max_len must be non-negative. max_len={max_len}')

    tracker = _tracker(automaton)
    alphabet = automaton.alphabet
    use_dfa = isinstance(member, Dfa)

    if use_dfa:
        missing = set(alphabet) - set(member.alphabet)
        if missing:
            raise ValueError(f'Membership DFA lacks symbols {sorted(missing)} of the automaton alphabet')
        reaches_member = member.coreachable(member.accepting)
        reaches_non_member = member.coreachable(set(member.states) - member.accepting)
        frontier: List[Tuple[str, Hashable, object]] = [('', tracker.start(), member.initial)]
    else:
        frontier = [('', tracker.start(), None)]

    p1 = p2 = None
    worst_non_member = worst_member = None

    for length in range(max_len + 1):
        for word, state, dfa_state in frontier:
            acceptance = tracker.acceptance(state)
            is_member = member.is_accepting(dfa_state) if use_dfa else member(word)

            if is_member:
                if p2 is None or acceptance < p2:
                    p2, worst_member = acceptance, word
            elif p1 is None or acceptance > p1:
                p1, worst_non_member = acceptance, word

        yield RecognitionInterval(p1, p2, length, worst_non_member, worst_member)

        if length == max_len:
            break

        if use_dfa:
            # One representative (the first word in search order) per (distribution, DFA state) pair
            children: Dict[Hashable, Tuple[str, Hashable, object]] = {}
            for word, state, dfa_state in frontier:
                if not _worth_expanding(
                        tracker.extension_bounds(state), p1, p2,
                        dfa_state in reaches_non_member, dfa_state in reaches_member,
                ):
                    continue

                for symbol in alphabet:
                    child_state = tracker.advance(state, symbol)
                    child_dfa_state = member.step(dfa_state, symbol)
                    children.setdefault((child_state, child_dfa_state), (word + symbol, child_state, child_dfa_state))

            frontier = list(children.values())
        else:
            frontier = [
                (word + symbol, tracker.advance(state, symbol), None)
                for word, state, _ in frontier
                for symbol in alphabet
            ]

        logger.debug(f'Length {length + 1}: {len(frontier)} search states')

        if not frontier:
            break


def _worth_expanding(
        bounds: Optional[Tuple[Fraction, Fraction]],
        p1: Optional[Fraction],
        p2: Optional[Fraction],
        non_members_ahead: bool,
        members_ahead: bool,
) -> bool:
    if bounds is None:
        return non_members_ahead or members_ahead

    lower, upper = bounds
    could_raise_p1 = non_members_ahead and (p1 is None or upper > p1)
    could_lower_p2 = members_ahead and (p2 is None or lower < p2)
    return could_raise_p1 or could_lower_p2


def recognition_interval(automaton: PraC, member: Membership, max_len: int) -> RecognitionInterval:
    """
    The exact interval over all words of length at most ``max_len``.

    :param member: Either a predicate on words or a :class:`Dfa`. With a DFA, words that lead to the same
        (distribution, DFA state) pair are explored once, and subtrees that cannot move either bound are skipped, so
        the result is the same as full enumeration at a fraction of the cost.
    """

    result = None
    for result in _interval_levels(automaton, member, max_len):
        pass

    return RecognitionInterval(result.p1, result.p2, max_len, result.worst_non_member, result.worst_member)


def interval_sweep(automaton: PraC, member: Membership, max_len: int) -> List[RecognitionInterval]:
    """The interval at every horizon ``0..max_len``."""

    intervals = list(_interval_levels(automaton, member, max_len))
    last = intervals[-1]
    while len(intervals) < max_len + 1:
        intervals.append(RecognitionInterval(
            last.p1, last.p2, len(intervals), last.worst_non_member, last.worst_member,
        ))

    return intervals


def describe(interval: RecognitionInterval) -> str:
    lines = [f'interval {interval} over words of length <= {interval.max_len}']
    if interval.worst_non_member is not None:
        lines.append(f'  highest non-member: {format_word(interval.worst_non_member)}')
    if interval.worst_member is not None:
        lines.append(f'  lowest member:      {format_word(interval.worst_member)}')
    if not interval.separates:
        lines.append('  members and non-members are not separated')

    return '\n'.join(lines)
