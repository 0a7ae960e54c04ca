from collections import deque
from dataclasses import dataclass
from math import inf
from typing import Dict, Iterator, Optional, Tuple

from pralib.regclass.dfa import Dfa, State
from pralib.utils import or_default

Node = Tuple[State, ...]


class SearchTree:
    """The breadth-first tree of one exploration; each reached node keeps the edge it was first reached by."""

    def __init__(self, start: Node, came_from: Dict[Node, Tuple[Node, str]]):
        self.start = start
        self._came_from = came_from

    def __contains__(self, node: Node) -> bool:
        return node == self.start or node in self._came_from

    def nodes(self) -> Iterator[Node]:
        """Reached nodes in order of discovery, starting with the start node."""
        yield self.start
        yield from self._came_from

    def word_to(self, node: Node) -> Optional[str]:
        if node not in self:
            return None

        symbols = []
        current = node
        while current != self.start:
            current, symbol = self._came_from[current]
            symbols.append(symbol)

        symbols.reverse()
        return ''.join(symbols)


class ProductSearch:
    """
    Breadth-first search in the product of a DFA with itself: a node is a tuple of states, and a word moves every
    component in lockstep.

    Nodes are expanded in order of discovery and symbols in alphabet order, so the word found for every node is the
    shortest one, and the lexicographically least among those.
    """

    def __init__(self, dfa: Dfa, max_steps: int = None):
        """
        :param dfa: The automaton whose states make up the nodes.
        :param max_steps: Maximum number of nodes to expand per search. If None (the default), there is no limit.
        """

        self.dfa = dfa
        self.max_steps = or_default(max_steps, inf)
        self.stats = ProductSearch.Stats()

    def explore(self, start: Node) -> SearchTree:
        came_from: Dict[Node, Tuple[Node, str]] = {}
        seen = {start}
        queue = deque([start])

        steps = 0
        while queue and steps < self.max_steps:
            node = queue.popleft()
            steps += 1

            for symbol in self.dfa.alphabet:
                child = tuple(self.dfa.step(state, symbol) for state in node)
                if child in seen:
                    continue

                seen.add(child)
                came_from[child] = (node, symbol)
                queue.append(child)

        self.stats.searches += 1
        self.stats.nodes_evaluated += steps
        return SearchTree(start, came_from)

    def find_word(self, start: Node, goal: Node) -> Optional[str]:
        return self.explore(start).word_to(goal)

    @dataclass
    class Stats:
        searches: int = 0
        nodes_evaluated: int = 0
