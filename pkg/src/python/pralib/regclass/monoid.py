"""
The transition monoid of a DFA, and a direct check of the type (*) definition over it.

The check quantifies over every pair of monoid elements, so it is only meant for small automata; it serves as the
reference that the product-automaton searches in :mod:`pralib.regclass.classify` are tested against.
"""

import logging
from collections import deque
from typing import Dict, Iterable, Optional, Tuple

from pralib.exceptions import BudgetExceededError
from pralib.regclass.classify import Witness, WitnessKind
from pralib.regclass.dfa import Dfa, minimize

logger = logging.getLogger(__name__)

DEFAULT_MONOID_BUDGET = 5 ** 5

Transformation = Tuple[int, ...]
"""Images of the states, indexed by position in ``Dfa.states``."""


def transition_monoid(dfa: Dfa) -> Dict[Transformation, str]:
    """
    Every transformation induced by a word, mapped to the shortest (then lexicographically least) word inducing it.
    The identity, induced by the empty word, is included.
    """

    index = {state: i for i, state in enumerate(dfa.states)}
    generators = {
        symbol: tuple(index[dfa.step(state, symbol)] for state in dfa.states)
        for symbol in dfa.alphabet
    }

    identity = tuple(range(dfa.size))
    monoid = {identity: ''}
    queue = deque([identity])

    while queue:
        element = queue.popleft()
        for symbol, generator in generators.items():
            product = tuple(generator[image] for image in element)
            if product not in monoid:
                monoid[product] = monoid[element] + symbol
                queue.append(product)

    logger.debug(f'Transition monoid of a {dfa.size}-state DFA has {len(monoid)} elements')
    return monoid


def _recurrent(state: int, generators: Iterable[Transformation]) -> bool:
    generators = tuple(generators)

    def closure(start: int):
        seen = {start}
        stack = [start]
        while stack:
            current = stack.pop()
            for g in generators:
                if g[current] not in seen:
                    seen.add(g[current])
                    stack.append(g[current])
        return seen

    return all(state in closure(other) for other in closure(state))


def classify_star_monoid_oracle(dfa: Dfa, budget: int = DEFAULT_MONOID_BUDGET) -> Optional[Witness]:
    """
    Looks for states q, q1 != q2 and monoid elements x, y with q·x = q1, q·y = q2, q1·x = q1, q2·y = q2, such that
    both q1 and q2 are recurrent under the submonoid generated by x and y.

    :raises BudgetExceededError: If the minimal DFA has n states and n**n exceeds ``budget``.
    """

    minimal = minimize(dfa)
    n = minimal.size
    if n ** n > budget:
        raise BudgetExceededError(f'Monoid oracle needs up to {n ** n} elements. budget={budget}')

    monoid = transition_monoid(minimal)
    elements = list(monoid)

    for q in range(n):
        for f in elements:
            q1 = f[q]
            if f[q1] != q1:
                continue

            for g in elements:
                q2 = g[q]
                if q2 == q1 or g[q2] != q2:
                    continue

                if _recurrent(q1, (f, g)) and _recurrent(q2, (f, g)):
                    states = minimal.states
                    return Witness(
                        WitnessKind.STAR, (states[q], states[q1], states[q2]), monoid[f], monoid[g], dfa=minimal,
                    )

    return None
