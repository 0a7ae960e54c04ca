import random
from collections import deque
from itertools import count
from typing import Dict, FrozenSet, Hashable, Iterable, List, Mapping, Sequence, Set, Tuple, Union

from pralib.exceptions import FormatError, UnknownSymbolError
from pralib.regclass.regex import Alternation, Concat, Epsilon, Literal, Regex, Star, literals, parse_regex
from pralib.utils import build_repr

State = Hashable


class Dfa:
    """A total deterministic automaton. States can be any hashable values; constructed DFAs use ``0..n-1``."""

    def __init__(
            self,
            states: Sequence[State],
            alphabet: Sequence[str],
            delta: Mapping[State, Mapping[str, State]],
            initial: State,
            accepting: Iterable[State],
    ):
        self.states: Tuple[State, ...] = tuple(states)
        self.alphabet: Tuple[str, ...] = tuple(alphabet)
        self.initial = initial
        self.accepting: FrozenSet[State] = frozenset(accepting)

        known = set(self.states)
        if len(known) != len(self.states):
            raise FormatError(f'DFA states must be unique. states={self.states}')
        if initial not in known:
            raise FormatError(f'Unknown initial state {initial!r}')
        if not self.accepting <= known:
            raise FormatError(f'Unknown accepting states {sorted(map(str, self.accepting - known))}')

        self._delta: Dict[State, Dict[str, State]] = {}
        for state in self.states:
            row = delta.get(state, {})
            for symbol in self.alphabet:
                if symbol not in row:
                    raise FormatError(f'DFA is not total: no move from {state!r} on {symbol!r}')
                if row[symbol] not in known:
                    raise FormatError(f'Move from {state!r} on {symbol!r} goes to unknown state {row[symbol]!r}')
            self._delta[state] = {symbol: row[symbol] for symbol in self.alphabet}

    @property
    def size(self) -> int:
        return len(self.states)

    @property
    def delta(self) -> Dict[State, Dict[str, State]]:
        return {state: dict(row) for state, row in self._delta.items()}

    def step(self, state: State, symbol: str) -> State:
        try:
            return self._delta[state][symbol]
        except KeyError:
            raise UnknownSymbolError(symbol, self.alphabet) from None

    def run(self, word: str, start: State = None) -> State:
        state = self.initial if start is None else start
        for symbol in word:
            state = self.step(state, symbol)
        return state

    def is_accepting(self, state: State) -> bool:
        return state in self.accepting

    def accepts(self, word: str) -> bool:
        return self.run(word) in self.accepting

    def symbol_map(self, symbol: str) -> Dict[State, State]:
        return {state: self._delta[state][symbol] for state in self.states}

    def reachable(self, start: State = None) -> List[State]:
        """States reachable from ``start`` (the initial state by default), in breadth-first order."""

        start = self.initial if start is None else start
        seen = {start}
        order = [start]
        queue = deque([start])

        while queue:
            state = queue.popleft()
            for symbol in self.alphabet:
                target = self._delta[state][symbol]
                if target not in seen:
                    seen.add(target)
                    order.append(target)
                    queue.append(target)

        return order

    def coreachable(self, targets: Iterable[State]) -> Set[State]:
        """States from which some state of ``targets`` can be reached (including the targets)."""

        predecessors: Dict[State, Set[State]] = {state: set() for state in self.states}
        for state, row in self._delta.items():
            for target in row.values():
                predecessors[target].add(state)

        found = set(targets)
        queue = deque(found)
        while queue:
            state = queue.popleft()
            for source in predecessors[state]:
                if source not in found:
                    found.add(source)
                    queue.append(source)

        return found

    def minimize(self) -> 'Dfa':
        return minimize(self)

    def __eq__(self, other) -> bool:
        return (
                isinstance(other, Dfa)
                and self.states == other.states
                and self.alphabet == other.alphabet
                and self.initial == other.initial
                and self.accepting == other.accepting
                and self._delta == other._delta
        )

    def __repr__(self) -> str:
        return build_repr(self, 'size', 'alphabet')

    def __str__(self) -> str:
        lines = ['state  ' + ' '.join(self.alphabet)]
        for state in self.states:
            marks = ('>' if state == self.initial else ' ') + ('*' if state in self.accepting else ' ')
            targets = ' '.join(str(self._delta[state][s]) for s in self.alphabet)
            lines.append(f'{marks}{state!s:<5}{targets}')
        return '\n'.join(lines)


class _Nfa:
    """Thompson construction: every fragment has one entry and one exit state."""

    def __init__(self):
        self._ids = count()
        self.epsilon: Dict[int, Set[int]] = {}
        self.edges: Dict[Tuple[int, str], Set[int]] = {}

    def new_state(self) -> int:
        state = next(self._ids)
        self.epsilon[state] = set()
        return state

    def link(self, source: int, target: int, symbol: str = None) -> None:
        if symbol is None:
            self.epsilon[source].add(target)
        else:
            self.edges.setdefault((source, symbol), set()).add(target)

    def compile(self, node: Regex) -> Tuple[int, int]:
        start, end = self.new_state(), self.new_state()

        if isinstance(node, Epsilon):
            self.link(start, end)
        elif isinstance(node, Literal):
            self.link(start, end, node.symbol)
        elif isinstance(node, Concat):
            current = start
            for part in node.parts:
                part_start, part_end = self.compile(part)
                self.link(current, part_start)
                current = part_end
            self.link(current, end)
        elif isinstance(node, Alternation):
            for option in node.options:
                option_start, option_end = self.compile(option)
                self.link(start, option_start)
                self.link(option_end, end)
        elif isinstance(node, Star):
            inner_start, inner_end = self.compile(node.inner)
            self.link(start, inner_start)
            self.link(start, end)
            self.link(inner_end, inner_start)
            self.link(inner_end, end)
        else:
            raise TypeError(f'Unknown regex node: {node!r}')

        return start, end

    def closure(self, states: Iterable[int]) -> FrozenSet[int]:
        found = set(states)
        stack = list(found)
        while stack:
            state = stack.pop()
            for target in self.epsilon[state]:
                if target not in found:
                    found.add(target)
                    stack.append(target)
        return frozenset(found)

    def move(self, states: FrozenSet[int], symbol: str) -> FrozenSet[int]:
        targets = set()
        for state in states:
            targets |= self.edges.get((state, symbol), set())
        return self.closure(targets)


def build_dfa(regex: Union[Regex, str], alphabet: Iterable[str] = None) -> Dfa:
    """
    Subset construction over the Thompson automaton of the regex. The result is total; the empty subset becomes the
    sink when it is needed.

    :param alphabet: Defaults to the symbols the regex uses, in sorted order.
    """

    if isinstance(regex, str):
        regex = parse_regex(regex, alphabet)

    used = literals(regex)
    alphabet = tuple(sorted(used)) if alphabet is None else tuple(alphabet)
    if not used <= set(alphabet):
        raise ValueError(f'Regex uses symbols {sorted(used - set(alphabet))} outside the alphabet {alphabet}')

    nfa = _Nfa()
    start, end = nfa.compile(regex)

    initial = nfa.closure([start])
    ids: Dict[FrozenSet[int], int] = {initial: 0}
    delta: Dict[int, Dict[str, int]] = {}
    queue = deque([initial])

    while queue:
        subset = queue.popleft()
        row = delta[ids[subset]] = {}
        for symbol in alphabet:
            target = nfa.move(subset, symbol)
            if target not in ids:
                ids[target] = len(ids)
                queue.append(target)
            row[symbol] = ids[target]

    accepting = [i for subset, i in ids.items() if end in subset]
    return Dfa(range(len(ids)), alphabet, delta, 0, accepting)


def minimize(dfa: Dfa) -> Dfa:
    """
    Drops unreachable states and merges equivalent ones by partition refinement. States of the result are numbered
    in breadth-first order from the initial state, so equal languages give equal DFAs.
    """

    states = dfa.reachable()
    alphabet = dfa.alphabet

    block = {state: int(state in dfa.accepting) for state in states}
    n_blocks = len(set(block.values()))

    while True:
        signatures = {
            state: (block[state],) + tuple(block[dfa.step(state, symbol)] for symbol in alphabet)
            for state in states
        }
        numbering = {signature: i for i, signature in enumerate(dict.fromkeys(signatures.values()))}
        block = {state: numbering[signatures[state]] for state in states}

        if len(numbering) == n_blocks:
            break
        n_blocks = len(numbering)

    representative = {}
    for state in states:
        representative.setdefault(block[state], state)

    # Canonical breadth-first renumbering
    canonical = {block[dfa.initial]: 0}
    queue = deque([block[dfa.initial]])
    while queue:
        b = queue.popleft()
        for symbol in alphabet:
            target = block[dfa.step(representative[b], symbol)]
            if target not in canonical:
                canonical[target] = len(canonical)
                queue.append(target)

    delta = {
        canonical[b]: {symbol: canonical[block[dfa.step(state, symbol)]] for symbol in alphabet}
        for b, state in representative.items()
    }
    accepting = [canonical[block[state]] for state in states if state in dfa.accepting]

    return Dfa(range(len(canonical)), alphabet, delta, 0, accepting)


def random_dfa(n_states: int, alphabet: Sequence[str], rng: random.Random) -> Dfa:
    """A DFA with uniformly random moves and a random accepting set. Not necessarily minimal or connected."""

    if n_states < 1:
        raise ValueError(f'n_states must be positive. n_states={n_states}')

    delta = {
        state: {symbol: rng.randrange(n_states) for symbol in alphabet}
        for state in range(n_states)
    }
    accepting = [state for state in range(n_states) if rng.random() < 0.5]

    return Dfa(range(n_states), alphabet, delta, 0, accepting)
