"""
End-marker elimination.

:func:`strip_dollar` folds the final '$' into the choice of accepting states, using ``m`` copies of each state so that
the acceptance probability of '$' can be approximated to within ``1/m``. :func:`strip_hash` replaces the random
choice made by '#' with a fixed number of copies of each branch that '#' could start, and a majority vote over them.
"""

import itertools
import logging
from collections import deque
from fractions import Fraction
from math import floor, prod
from typing import List, Sequence, Tuple

from pralib.automata import DOLLAR, HASH, Endmarkers
from pralib.automata.pra_c import PraC
from pralib.constructions.boosting import DEFAULT_STATE_BUDGET
from pralib.constructions.closure import initial_hash_matrix
from pralib.dsmat import ONE, ZERO, RationalLike, StochMatrix, kron, to_rational
from pralib.exceptions import BudgetExceededError

logger = logging.getLogger(__name__)


def strip_dollar(automaton: PraC, m: int) -> PraC:
    """
    An equivalent automaton without '$', on ``m`` copies ``q_{i,k}`` of every state.

    Letters act on the copies of each state alike; '#' spreads the mass of every target evenly over its copies; and
    ``q_{i,k}`` accepts iff ``k < m·p(q_i)``, where ``p(q_i)`` is the probability that '$' takes ``q_i`` into an
    accepting state. Acceptance of every word moves up by less than ``1/m``, so ``m > 1/(p2 - p1)`` keeps the
    interval separated.
    """

    if automaton.endmarkers is not Endmarkers.BOTH:
        raise ValueError(f'strip_dollar needs both end-markers. endmarkers={automaton.endmarkers}')
    if m <= 0:
        raise ValueError(f'm must be positive. m={m}')

    n = automaton.size
    copies = StochMatrix.identity(m)
    states = tuple(f'{name}.{k}' for name in automaton.states for k in range(m))

    transitions = {symbol: kron(automaton.matrix(symbol), copies) for symbol in automaton.alphabet}

    hash_column = automaton.matrix(HASH).column(automaton.initial)
    column = [hash_column[j] / m for j in range(n) for _ in range(m)]
    transitions[HASH] = initial_hash_matrix(column, automaton.initial * m)

    dollar = automaton.matrix(DOLLAR)
    accepting = []
    for i in range(n):
        p = sum((dollar[f, i] for f in automaton.accepting), ZERO)
        accepting.extend(states[i * m + k] for k in range(m) if k < m * p)

    logger.debug(f'Stripped "$" with {m} copies: {n * m} states, {len(accepting)} accepting')
    return PraC(states, automaton.alphabet, states[automaton.initial * m], accepting, transitions, Endmarkers.HASH)


def dirichlet_copies(probs: Sequence[RationalLike], phi: RationalLike) -> Tuple[int, List[int]]:
    """
    The least ``n`` such that every ``p_i·n`` lies within ``phi`` of a positive integer ``g_i``, together with the
    ``g_i``. With ``phi < 1/len(probs)``, the ``g_i`` add up to ``n``.
    """

    probs = [to_rational(p) for p in probs]
    phi = to_rational(phi)

    if not probs:
        raise ValueError('probs must not be empty')
    if any(p <= 0 for p in probs) or sum(probs, ZERO) != ONE:
        raise ValueError(f'probs must be positive and sum to 1. probs={probs}')
    if not ZERO < phi < min(Fraction(1, len(probs)), ONE):
        raise ValueError(f'phi must be in (0, 1/{len(probs)}). phi={phi}')

    half = Fraction(1, 2)
    n = 0
    while True:
        n += 1
        g = [floor(p * n + half) for p in probs]
        if all(gi >= 1 and abs(p * n - gi) < phi for p, gi in zip(probs, g)):
            return n, g


def restrict_to_reachable(automaton: PraC, start: int) -> PraC:
    """
    The automaton started in state ``start``, restricted to the states its letters can reach from there, with no
    end-markers. For a doubly stochastic automaton the reached states form closed classes, so the result is still
    doubly stochastic.
    """

    matrices = [automaton.matrix(symbol) for symbol in automaton.alphabet]

    order = [start]
    seen = {start}
    queue = deque([start])
    while queue:
        j = queue.popleft()
        for matrix in matrices:
            for i, _ in matrix.column_support(j):
                if i not in seen:
                    seen.add(i)
                    order.append(i)
                    queue.append(i)

    transitions = {
        symbol: StochMatrix([[automaton.matrix(symbol)[i, j] for j in order] for i in order])
        for symbol in automaton.alphabet
    }
    states = [automaton.states[i] for i in order]
    accepting = [automaton.states[i] for i in order if i in automaton.accepting]

    return PraC(states, automaton.alphabet, states[0], accepting, transitions, Endmarkers.NONE)


def majority_threshold(a1: RationalLike, a2: RationalLike, epsilon: RationalLike) -> Fraction:
    """
    The vote threshold ``δ = (a1 + a2)/2``, after checking ``a1/(1-ε) < δ < a2/(1+ε)``, which holds exactly when
    ``0 < ε < (a2 - a1)/(a2 + a1)``.
    """

    a1, a2, epsilon = to_rational(a1), to_rational(a2), to_rational(epsilon)
    if not ZERO <= a1 < a2 <= ONE:
        raise ValueError(f'Interval must satisfy 0 <= a1 < a2 <= 1. a1={a1}; a2={a2}')

    delta = (a1 + a2) / 2
    if not (ZERO < epsilon < ONE and a1 / (1 - epsilon) < delta < a2 / (1 + epsilon)):
        raise ValueError(f'epsilon must be in (0, {(a2 - a1) / (a2 + a1)}). epsilon={epsilon}')

    return delta


def strip_hash(
        automaton: PraC,
        epsilon: RationalLike,
        n_copies: int,
        interval: Tuple[RationalLike, RationalLike],
        budget: int = DEFAULT_STATE_BUDGET,
) -> PraC:
    """
    An automaton without end-markers for the language an automaton with '#' only recognizes with ``interval``.

    Every state that '#' can move the initial state to starts a branch, taken with probability ``p_i``. The result runs
    ``n_copies`` branches side by side, about ``p_i·n_copies`` of them for branch ``i``, and accepts when more than
    ``n_copies·δ`` of them accept, with ``δ`` from :func:`majority_threshold`.

    :param n_copies: Must be a multiple of the ``n`` that :func:`dirichlet_copies` finds for the branch probabilities
        with ``phi = min(1/branches, epsilon)/2``.
    :raises BudgetExceededError: If the product would have more than ``budget`` states.
    """

    if automaton.endmarkers is not Endmarkers.HASH:
        raise ValueError(f'strip_hash needs the "#" end-marker only. endmarkers={automaton.endmarkers}')

    a1, a2 = interval
    delta = majority_threshold(a1, a2, epsilon)
    epsilon = to_rational(epsilon)

    column = automaton.matrix(HASH).column(automaton.initial)
    targets = [j for j, p in enumerate(column) if p]
    probs = [column[j] for j in targets]

    phi = min(Fraction(1, len(targets)), epsilon) / 2
    n, g = dirichlet_copies(probs, phi)
    if n_copies < 1 or n_copies % n:
        raise ValueError(f'n_copies must be a positive multiple of {n}. n_copies={n_copies}')

    scale = n_copies // n
    branches = [restrict_to_reachable(automaton, j) for j in targets]
    factors = [branch for branch, gi in zip(branches, g) for _ in range(gi * scale)]

    size = prod(f.size for f in factors)
    if size > budget:
        raise BudgetExceededError(f'{n_copies} branch copies need {size} states. budget={budget}')

    # Row-major tuples, matching the index order of kron
    tuples = list(itertools.product(*(range(f.size) for f in factors)))
    states = tuple('(' + ','.join(f.states[i] for f, i in zip(factors, t)) + ')' for t in tuples)

    transitions = {}
    for symbol in automaton.alphabet:
        product = factors[0].matrix(symbol)
        for factor in factors[1:]:
            product = kron(product, factor.matrix(symbol))
        transitions[symbol] = product

    votes = n_copies * delta
    accepting = [
        name for name, t in zip(states, tuples)
        if sum(i in f.accepting for f, i in zip(factors, t)) > votes
    ]

    logger.debug(
        f'Stripped "#": {len(branches)} branches, copies {[gi * scale for gi in g]}, {size} states, '
        f'accepting above {votes} votes'
    )
    return PraC(states, automaton.alphabet, states[0], accepting, transitions, Endmarkers.NONE)
