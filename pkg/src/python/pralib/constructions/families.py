"""
The automata recognizing ``a1* a2* ... an*``.

Letter ``k`` (``a``, ``b``, ``c``, ...) averages the probability mass inside each of two blocks of states,
``q0 .. q_{k-1}`` and ``q_k .. q_n``. Accepting states are all but ``q_n``.
"""

import string
from fractions import Fraction

from pralib.automata import Endmarkers, HASH, DOLLAR
from pralib.automata.pra_c import PraC
from pralib.dsmat import StochMatrix, ZERO

LETTERS = string.ascii_lowercase


def ln_alphabet(n: int) -> str:
    if not 1 <= n <= len(LETTERS):
        raise ValueError(f'n must be in [1, {len(LETTERS)}]. n={n}')
    return LETTERS[:n]


def ln_regex(n: int) -> str:
    return ''.join(f'{letter}*' for letter in ln_alphabet(n))


def _block_average(size: int, split: int) -> StochMatrix:
    grid = [[ZERO] * size for _ in range(size)]
    for block in (range(split), range(split, size)):
        weight = Fraction(1, len(block))
        for i in block:
            for j in block:
                grid[i][j] = weight

    return StochMatrix(grid)


def ln_family(n: int) -> PraC:
    """
    The ``(n+1)``-state automaton for ``a1* ... an*``, with identity end-markers. Members are accepted with
    probability 1, and non-members with probability at most :func:`ln_interval_bound`.
    """

    alphabet = ln_alphabet(n)
    size = n + 1
    states = [f'q{i}' for i in range(size)]

    transitions = {letter: _block_average(size, k) for k, letter in enumerate(alphabet, start=1)}
    transitions[HASH] = transitions[DOLLAR] = StochMatrix.identity(size)

    return PraC(states, alphabet, 'q0', states[:n], transitions, Endmarkers.BOTH)


def ln_interval_bound(n: int) -> Fraction:
    """The highest acceptance probability of a non-member: ``1 - 1/(floor(n²/4) + n + 1)``."""

    ln_alphabet(n)
    return 1 - Fraction(1, n * n // 4 + n + 1)
