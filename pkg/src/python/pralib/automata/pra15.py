"""1.5-way automata: on each step the head either stays (direction 0) or moves one cell right (direction 1)."""

import bisect
import itertools
import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Mapping, Sequence, Tuple

from pralib.automata import (
    DOLLAR, HASH, Endmarkers, ValidationReport, check_alphabet, check_word, state_indices,
)
from pralib.dsmat import ONE, ZERO, StochMatrix
from pralib.exceptions import FormatError
from pralib.utils import build_repr, unique

logger = logging.getLogger(__name__)

DIRECTIONS = (0, 1)


class Flavor(Enum):
    WEAK = 'weak'
    STRONG = 'strong'


class Pra15:
    def __init__(
            self,
            states: Sequence[str],
            alphabet: Sequence[str],
            initial: str,
            accepting: Sequence[str],
            transitions: Mapping[str, Mapping[int, Any]],
            flavor: Flavor = Flavor.WEAK,
            endmarkers: Endmarkers = Endmarkers.BOTH,
    ):
        """
        :param transitions: For each symbol, a grid per direction. Entry ``[i][j]`` of the grid of direction ``d`` is
            the probability of going from state ``j`` to state ``i`` while moving the head by ``d``.
        """

        self.states = tuple(states)
        if not self.states or unique(self.states) != self.states:
            raise FormatError(f'States must be non-empty and unique. states={self.states}')

        self.alphabet = check_alphabet(alphabet)
        self.flavor = Flavor(flavor)
        self.endmarkers = Endmarkers(endmarkers)

        if initial not in self.states:
            raise FormatError(f'Unknown initial state {initial!r}. states={self.states}')
        self.initial = self.states.index(initial)
        self.accepting = state_indices(self.states, accepting, 'accepting')

        if set(transitions) != set(self.symbols):
            raise FormatError(
                f'Transitions must cover exactly the symbols {sorted(self.symbols)}. got={sorted(transitions)}'
            )

        grids = {}
        for symbol in self.symbols:
            by_direction = {int(d): grid for d, grid in transitions[symbol].items()}
            if set(by_direction) != set(DIRECTIONS):
                raise FormatError(f'Symbol {symbol!r} needs one grid per direction {DIRECTIONS}')

            for d in DIRECTIONS:
                grid = by_direction[d]
                if not isinstance(grid, StochMatrix):
                    grid = StochMatrix(grid)
                if grid.order != len(self.states):
                    raise FormatError(f'Grid of ({symbol!r}, {d}) has order {grid.order}')
                grids[symbol, d] = grid

        self._grids: Dict[Tuple[str, int], StochMatrix] = grids
        self._moves = self._build_move_table()

    @property
    def size(self) -> int:
        return len(self.states)

    @property
    def symbols(self) -> Tuple[str, ...]:
        hash_ = (HASH,) if self.endmarkers.has_hash else ()
        dollar = (DOLLAR,) if self.endmarkers.has_dollar else ()
        return hash_ + self.alphabet + dollar

    def grid(self, symbol: str, direction: int) -> StochMatrix:
        return self._grids[symbol, direction]

    def tape(self, word: str) -> str:
        return self.endmarkers.tape(check_word(word, self.alphabet))

    def _build_move_table(self) -> Dict[Tuple[str, int], Tuple[Tuple[Tuple[int, int], ...], List[float]]]:
        """For each (symbol, state), the possible (next state, direction) moves and their cumulative weights."""

        table = {}
        for symbol in self.symbols:
            for j in range(self.size):
                moves, weights = [], []
                for d in DIRECTIONS:
                    for i, value in self._grids[symbol, d].column_support(j):
                        moves.append((i, d))
                        weights.append(float(value))

                table[symbol, j] = (tuple(moves), list(itertools.accumulate(weights)))

        return table

    def step(self, symbol: str, state: int, rng: random.Random) -> Tuple[int, int]:
        moves, cum_weights = self._moves[symbol, state]
        if not moves:
            raise ValueError(f'No move out of state {self.states[state]!r} on {symbol!r}')

        index = bisect.bisect_right(cum_weights, rng.random() * cum_weights[-1])
        return moves[min(index, len(moves) - 1)]

    def init_kwargs(self) -> Dict[str, Any]:
        return dict(
            states=self.states,
            alphabet=self.alphabet,
            initial=self.states[self.initial],
            accepting=tuple(self.states[i] for i in sorted(self.accepting)),
            transitions={s: {d: self._grids[s, d] for d in DIRECTIONS} for s in self.symbols},
            flavor=self.flavor,
            endmarkers=self.endmarkers,
        )

    def __repr__(self) -> str:
        return build_repr(self, 'states', 'alphabet', 'flavor', 'endmarkers')


def _row_sum(grid: StochMatrix, i: int):
    return sum(grid.row(i), ZERO)


def validate_pra15(automaton: Pra15, flavor: Flavor = None) -> ValidationReport:
    """
    Checks the probability-conservation equations of the given flavor (the automaton's own flavor by default).

    Outgoing mass of every (state, symbol) must be 1 for both flavors. The weak flavor also requires incoming mass
    of every (state, symbol) to be 1 over all (source, direction) pairs. The strong flavor instead requires, for
    every state and every pair of symbols (s1, s2), that the mass arriving by staying on s1 plus the mass arriving
    by moving off s2 is 1.
    """

    flavor = Flavor(flavor) if flavor is not None else automaton.flavor
    report = ValidationReport()
    n = automaton.size

    for symbol in automaton.symbols:
        stay, move = automaton.grid(symbol, 0), automaton.grid(symbol, 1)

        for j in range(n):
            total = sum(stay.column(j), ZERO) + sum(move.column(j), ZERO)
            if total != ONE:
                report.add(f'outgoing mass of {automaton.states[j]!r} is {total}', symbol, column=j)

        if flavor is Flavor.WEAK:
            for i in range(n):
                total = _row_sum(stay, i) + _row_sum(move, i)
                if total != ONE:
                    report.add(f'incoming mass of {automaton.states[i]!r} is {total}', symbol, row=i)

    if flavor is Flavor.STRONG:
        for stay_symbol, move_symbol in itertools.product(automaton.symbols, repeat=2):
            stay, move = automaton.grid(stay_symbol, 0), automaton.grid(move_symbol, 1)
            for i in range(n):
                total = _row_sum(stay, i) + _row_sum(move, i)
                if total != ONE:
                    report.add(
                        f'incoming configuration mass of {automaton.states[i]!r} is {total}',
                        f'{stay_symbol},{move_symbol}', row=i,
                    )

    return report


@dataclass
class Pra15RunStats:
    trials: int
    accepted: int = 0
    rejected: int = 0
    timeouts: int = 0
    halting_steps: List[int] = field(default_factory=list)
    """Step counts of the runs that moved past the last tape cell."""

    @property
    def halted(self) -> int:
        return self.accepted + self.rejected

    @property
    def accept_fraction(self) -> float:
        return self.accepted / self.halted if self.halted else 0.

    @property
    def reject_fraction(self) -> float:
        return self.rejected / self.halted if self.halted else 0.

    @property
    def timeout_fraction(self) -> float:
        return self.timeouts / self.trials

    @property
    def mean_steps(self) -> float:
        return sum(self.halting_steps) / len(self.halting_steps) if self.halting_steps else 0.

    def fraction_halted_within(self, steps: int) -> float:
        return sum(1 for s in self.halting_steps if s <= steps) / self.trials

    def to_json(self) -> Dict[str, Any]:
        return dict(
            trials=self.trials,
            accepted=self.accepted,
            rejected=self.rejected,
            timeouts=self.timeouts,
            accept_fraction=self.accept_fraction,
            reject_fraction=self.reject_fraction,
            timeout_fraction=self.timeout_fraction,
            mean_steps=self.mean_steps,
        )


def simulate_pra15(automaton: Pra15, word: str, trials: int, max_steps: int, seed: int) -> Pra15RunStats:
    """
    Monte Carlo runs of the automaton on the enclosed word.

    A run halts once the head moves past the last cell; it is accepted if it is then in an accepting state. Runs
    still on the tape after ``max_steps`` steps count as timeouts.
    """

    if trials < 1:
        raise ValueError(f'trials must be positive. trials={trials}')
    if max_steps < 1:
        raise ValueError(f'max_steps must be positive. max_steps={max_steps}')

    tape = automaton.tape(word)
    rng = random.Random(seed)
    stats = Pra15RunStats(trials)

    for _ in range(trials):
        position, state, steps = 0, automaton.initial, 0

        while position < len(tape) and steps < max_steps:
            state, direction = automaton.step(tape[position], state, rng)
            position += direction
            steps += 1

        if position < len(tape):
            stats.timeouts += 1
        else:
            stats.halting_steps.append(steps)
            if state in automaton.accepting:
                stats.accepted += 1
            else:
                stats.rejected += 1

    logger.debug(f'Simulated {word!r}: {stats.to_json()}')
    return stats
