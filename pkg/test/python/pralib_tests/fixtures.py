"""Automata shared by the tests."""

from fractions import Fraction

from pralib.automata import DOLLAR, HASH, Endmarkers
from pralib.automata.pra15 import Flavor, Pra15
from pralib.automata.pra_c import PraC
from pralib.automata.pra_dh import PraDh
from pralib.constructions.families import ln_family
from pralib.dsmat import StochMatrix, block_diagonal, matmul

HALF = Fraction(1, 2)


def fix_l2() -> PraC:
    """The 3-state automaton for a*b*: members accepted with 1, non-members with at most 3/4."""
    return ln_family(2)


def fix_l2_mixed_dollar() -> PraC:
    """The a*b* automaton with a '$' that partly mixes q1 and q2, so that acceptance is no longer 0 or 1 per state."""

    return fix_l2().replace(transitions={
        **fix_l2().transitions,
        DOLLAR: StochMatrix([
            [1, 0, 0],
            [0, '3/4', '1/4'],
            [0, '1/4', '3/4'],
        ]),
    })


def fix_adh() -> PraDh:
    """Decide-and-halt: 'a' swaps q0 with the accepting state, 'b' swaps q0 with the rejecting state."""

    identity = StochMatrix.identity(3)
    return PraDh(
        states=['q0', 'acc', 'rej'],
        alphabet='ab',
        initial='q0',
        accepting=['acc'],
        rejecting=['rej'],
        transitions={
            HASH: identity,
            'a': StochMatrix.permutation([1, 0, 2]),
            'b': StochMatrix.permutation([2, 1, 0]),
            DOLLAR: identity,
        },
    )


def fix_l2_halting() -> PraDh:
    """
    Decide-and-halt form of the a*b* automaton: each state has a halting twin, and '$' moves every state into its
    twin. Nothing halts before '$', so acceptance matches :func:`fix_l2` on every word.
    """

    l2 = fix_l2()
    transitions = {symbol: block_diagonal(m, StochMatrix.identity(3)) for symbol, m in l2.transitions.items()}
    transitions[DOLLAR] = matmul(StochMatrix.permutation([3, 4, 5, 0, 1, 2]), transitions[DOLLAR])

    return PraDh(
        states=list(l2.states) + ['h0', 'h1', 'h2'],
        alphabet=l2.alphabet,
        initial='q0',
        accepting=['h0', 'h1'],
        rejecting=['h2'],
        transitions=transitions,
    )


def fix_15() -> Pra15:
    """
    1.5-way automaton for (a|b)*a: on every letter the head moves with probability 1/2, into q1 after an 'a' and
    into q0 after a 'b'. End-markers move the head at once.
    """

    zero = [[0, 0], [0, 0]]
    to_q0 = [[HALF, HALF], [0, 0]]
    to_q1 = [[0, 0], [HALF, HALF]]
    identity = [[1, 0], [0, 1]]

    return Pra15(
        states=['q0', 'q1'],
        alphabet='ab',
        initial='q0',
        accepting=['q1'],
        transitions={
            HASH: {0: zero, 1: identity},
            'a': {0: to_q0, 1: to_q1},
            'b': {0: to_q1, 1: to_q0},
            DOLLAR: {0: zero, 1: identity},
        },
        flavor=Flavor.WEAK,
    )


def parity_automaton() -> PraC:
    """Permutation automaton accepting words with an even number of 'a's, with no end-markers."""

    return PraC(
        states=['even', 'odd'],
        alphabet='ab',
        initial='even',
        accepting=['even'],
        transitions={
            'a': StochMatrix.permutation([1, 0]),
            'b': StochMatrix.identity(2),
        },
        endmarkers=Endmarkers.NONE,
    )
