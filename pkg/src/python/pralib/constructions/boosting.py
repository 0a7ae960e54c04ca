"""
Amplification by majority vote over independent copies.

``n`` copies of an automaton run side by side on the Kronecker power of every matrix; the system accepts when more
than ``n·δ`` of the copies accept. The number of accepting copies is binomial, so the error falls off exponentially in
``n``, at the cost of ``|Q|^n`` states.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb, floor

from pralib.automata.pra_c import PraC
from pralib.dsmat import ONE, ZERO, RationalLike, kron, to_rational
from pralib.exceptions import BudgetExceededError

logger = logging.getLogger(__name__)

DEFAULT_STATE_BUDGET = 4096


@dataclass(frozen=True)
class BoostPlan:
    copies: int
    threshold: Fraction
    p1: Fraction
    p2: Fraction

    def __post_init__(self):
        if self.copies < 1:
            raise ValueError(f'copies must be positive. copies={self.copies}')
        if not ZERO <= self.p1 < self.threshold < self.p2 <= ONE:
            raise ValueError(
                f'Threshold must lie strictly inside the interval. p1={self.p1}; threshold={self.threshold}; '
                f'p2={self.p2}'
            )

    @classmethod
    def create(cls, p1: RationalLike, p2: RationalLike, copies: int, threshold: RationalLike = None) -> 'BoostPlan':
        """
        :param threshold: Fraction of copies that must accept. If None (the default), the midpoint ``(p1+p2)/2``.
        """

        p1, p2 = to_rational(p1), to_rational(p2)
        threshold = (p1 + p2) / 2 if threshold is None else to_rational(threshold)
        return cls(copies, threshold, p1, p2)

    @classmethod
    def for_error(cls, p1: RationalLike, p2: RationalLike, epsilon: RationalLike) -> 'BoostPlan':
        return cls.create(p1, p2, copies_needed(p1, p2, epsilon))


def boost(automaton: PraC, plan: BoostPlan, budget: int = DEFAULT_STATE_BUDGET) -> PraC:
    """
    :raises BudgetExceededError: If ``automaton.size ** plan.copies`` exceeds ``budget``.
    """

    n = plan.copies
    size = automaton.size ** n
    if size > budget:
        raise BudgetExceededError(f'{n} copies of {automaton.size} states need {size} states. budget={budget}')

    # Row-major tuples, matching the index order of kron
    tuples = list(itertools.product(range(automaton.size), repeat=n))
    states = tuple('(' + ','.join(automaton.states[i] for i in t) + ')' for t in tuples)

    transitions = {}
    for symbol, matrix in automaton.transitions.items():
        power = matrix
        for _ in range(n - 1):
            power = kron(power, matrix)
        transitions[symbol] = power

    votes = n * plan.threshold
    accepting = [
        name for name, t in zip(states, tuples)
        if sum(i in automaton.accepting for i in t) > votes
    ]
    initial = states[tuples.index((automaton.initial,) * n)]

    logger.debug(f'Boosted {automaton.size} states to {size} with {n} copies; accepting above {votes} votes')
    return PraC(states, automaton.alphabet, initial, accepting, transitions, automaton.endmarkers)


def binomial_tail(n: int, p: RationalLike, threshold: RationalLike) -> Fraction:
    """Exact ``P(X > threshold)`` for ``X ~ Binomial(n, p)``."""

    p = to_rational(p)
    threshold = to_rational(threshold)
    return sum(
        (comb(n, k) * p ** k * (1 - p) ** (n - k) for k in range(n + 1) if k > threshold),
        ZERO,
    )


def copies_bound(p1: RationalLike, p2: RationalLike, epsilon: RationalLike) -> Fraction:
    """``1 / (4·ε·η²)`` with ``η = (p2 - p1) / 4``; more copies than this bring the error below ``ε``."""

    p1, p2, epsilon = to_rational(p1), to_rational(p2), to_rational(epsilon)
    if not ZERO <= p1 < p2 <= ONE:
        raise ValueError(f'Interval must satisfy 0 <= p1 < p2 <= 1. p1={p1}; p2={p2}')
    if not ZERO < epsilon < ONE:
        raise ValueError(f'epsilon must be in (0, 1). epsilon={epsilon}')

    eta = (p2 - p1) / 4
    return 1 / (4 * epsilon * eta * eta)


def copies_needed(p1: RationalLike, p2: RationalLike, epsilon: RationalLike) -> int:
    """The least number of copies strictly above :func:`copies_bound`."""
    return floor(copies_bound(p1, p2, epsilon)) + 1
