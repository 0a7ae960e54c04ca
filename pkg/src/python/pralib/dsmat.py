"""
Exact-rational stochastic matrices and probability vectors.

Matrices follow the column-is-source convention: entry ``[i][j]`` of the matrix of a symbol is the probability of
moving from state ``j`` to state ``i``. Distributions are column vectors, so applying a matrix is ``M · v``.
"""

import random
from enum import IntEnum
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from pralib.exceptions import DimensionError
from pralib.utils import build_repr, minmax

Rational = Fraction
RationalLike = Union[Fraction, int, str]
Grid = Tuple[Tuple[Fraction, ...], ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def to_rational(value: RationalLike) -> Fraction:
    """Parses ``"p/q"`` strings, integers, and fractions. Floats are refused, since they are rarely exact."""

    if isinstance(value, float):
        raise ValueError(f'Floats are not accepted as exact probabilities; use a "p/q" string. value={value!r}')

    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise ValueError(f'Not a rational number: {value!r}') from e


def format_rational(value: RationalLike) -> str:
    return str(Fraction(value))


class MatrixKind(IntEnum):
    """Ordered from weakest to strongest, so ``kind >= MatrixKind.DOUBLY_STOCHASTIC`` reads naturally."""

    GENERAL = 0
    COLUMN_STOCHASTIC = 1
    DOUBLY_STOCHASTIC = 2
    PERMUTATION = 3

    @property
    def label(self) -> str:
        return self.name.lower().replace('_', '-')


class KindVerdict(NamedTuple):
    kind: MatrixKind
    row: Optional[int] = None
    column: Optional[int] = None
    reason: str = ''


def _to_grid(entries: Iterable[Iterable[RationalLike]]) -> Grid:
    grid = tuple(tuple(to_rational(v) for v in row) for row in entries)

    n = len(grid)
    if n == 0:
        raise DimensionError('Matrix must have at least one row')

    for i, row in enumerate(grid):
        if len(row) != n:
            raise DimensionError(f'Matrix must be square. rows={n}; len(row[{i}])={len(row)}')

    return grid


def classify_matrix(entries: Iterable[Iterable[RationalLike]]) -> KindVerdict:
    """Returns the strongest kind the grid satisfies, with the index of the first row or column that fails."""

    grid = _to_grid(entries)
    n = len(grid)

    for i, row in enumerate(grid):
        for j, value in enumerate(row):
            if not ZERO <= value <= ONE:
                return KindVerdict(MatrixKind.GENERAL, i, j, f'entry [{i}][{j}] = {value} is outside [0, 1]')

    for j in range(n):
        total = sum((grid[i][j] for i in range(n)), ZERO)
        if total != ONE:
            return KindVerdict(MatrixKind.GENERAL, None, j, f'column {j} sums to {total}')

    for i, row in enumerate(grid):
        total = sum(row, ZERO)
        if total != ONE:
            return KindVerdict(MatrixKind.COLUMN_STOCHASTIC, i, None, f'row {i} sums to {total}')

    if all(value in (ZERO, ONE) for row in grid for value in row):
        return KindVerdict(MatrixKind.PERMUTATION)

    return KindVerdict(MatrixKind.DOUBLY_STOCHASTIC)


class StochMatrix:
    """
    An immutable square matrix of rationals in [0, 1], classified on construction.

    Not every instance is stochastic: the ``kind`` tells how much of the stochastic structure holds. The 1.5-way
    automata, for instance, keep one non-stochastic grid per head direction.
    """

    __slots__ = ('_entries', '_verdict', '_support')

    def __init__(self, entries: Iterable[Iterable[RationalLike]]):
        grid = _to_grid(entries)

        for i, row in enumerate(grid):
            for j, value in enumerate(row):
                if not ZERO <= value <= ONE:
                    raise ValueError(f'Matrix entries must be in [0, 1]. entry[{i}][{j}]={value}')

        n = len(grid)
        self._entries = grid
        self._verdict = classify_matrix(grid)
        # Nonzero (row, value) pairs of each column
        self._support = tuple(
            tuple((i, grid[i][j]) for i in range(n) if grid[i][j])
            for j in range(n)
        )

    @classmethod
    def identity(cls, n: int) -> 'StochMatrix':
        return cls.permutation(range(n))

    @classmethod
    def permutation(cls, images: Sequence[int]) -> 'StochMatrix':
        """The permutation matrix sending state ``j`` to state ``images[j]``."""

        images = tuple(images)
        n = len(images)
        if sorted(images) != list(range(n)):
            raise ValueError(f'images must be a permutation of range({n}). images={images}')

        grid = [[ZERO] * n for _ in range(n)]
        for j, i in enumerate(images):
            grid[i][j] = ONE

        return cls(grid)

    @classmethod
    def uniform(cls, n: int) -> 'StochMatrix':
        return cls([[Fraction(1, n)] * n for _ in range(n)])

    @property
    def order(self) -> int:
        return len(self._entries)

    @property
    def entries(self) -> Grid:
        return self._entries

    @property
    def verdict(self) -> KindVerdict:
        return self._verdict

    @property
    def kind(self) -> MatrixKind:
        return self._verdict.kind

    @property
    def is_column_stochastic(self) -> bool:
        return self.kind >= MatrixKind.COLUMN_STOCHASTIC

    @property
    def is_doubly_stochastic(self) -> bool:
        return self.kind >= MatrixKind.DOUBLY_STOCHASTIC

    @property
    def is_permutation(self) -> bool:
        return self.kind == MatrixKind.PERMUTATION

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        return self._entries[i][j]

    def row(self, i: int) -> Tuple[Fraction, ...]:
        return self._entries[i]

    def column(self, j: int) -> Tuple[Fraction, ...]:
        return tuple(row[j] for row in self._entries)

    def column_support(self, j: int) -> Tuple[Tuple[int, Fraction], ...]:
        """The ``(row, value)`` pairs of the nonzero entries of column ``j``."""
        return self._support[j]

    @property
    def diagonal(self) -> Tuple[Fraction, ...]:
        return tuple(self._entries[i][i] for i in range(self.order))

    def transpose(self) -> 'StochMatrix':
        return StochMatrix(zip(*self._entries))

    def power(self, k: int) -> 'StochMatrix':
        if k < 0:
            raise ValueError(f'k must be non-negative. k={k}')

        result = StochMatrix.identity(self.order)
        base = self
        while k:
            if k & 1:
                result = matmul(result, base)
            k >>= 1
            if k:
                base = matmul(base, base)

        return result

    def to_array(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self._entries], dtype=float)

    def __matmul__(self, other: 'StochMatrix') -> 'StochMatrix':
        return matmul(self, other)

    def __eq__(self, other) -> bool:
        return isinstance(other, StochMatrix) and self._entries == other._entries

    def __hash__(self) -> int:
        return hash(self._entries)

    def __repr__(self) -> str:
        return build_repr(self, 'order', 'kind')

    def __str__(self) -> str:
        cells = [[format_rational(v) for v in row] for row in self._entries]
        width = max(len(c) for row in cells for c in row)
        return '\n'.join(' '.join(c.rjust(width) for c in row) for row in cells)


class Distribution:
    """An immutable probability vector over automaton states."""

    __slots__ = ('_weights',)

    def __init__(self, weights: Iterable[RationalLike]):
        weights = tuple(to_rational(w) for w in weights)

        if not weights:
            raise DimensionError('Distribution must have at least one weight')

        for i, w in enumerate(weights):
            if not ZERO <= w <= ONE:
                raise ValueError(f'Weights must be in [0, 1]. weights[{i}]={w}')

        total = sum(weights, ZERO)
        if total != ONE:
            raise ValueError(f'Weights must sum to 1. sum={total}')

        self._weights = weights

    @classmethod
    def point(cls, n: int, index: int) -> 'Distribution':
        if not 0 <= index < n:
            raise ValueError(f'index must be in [0, {n}). index={index}')

        return cls(ONE if i == index else ZERO for i in range(n))

    @classmethod
    def uniform(cls, n: int) -> 'Distribution':
        return cls([Fraction(1, n)] * n)

    @property
    def weights(self) -> Tuple[Fraction, ...]:
        return self._weights

    def mass(self, indices: Iterable[int]) -> Fraction:
        return sum((self._weights[i] for i in indices), ZERO)

    def minmax(self) -> Tuple[Fraction, Fraction]:
        return minmax(self._weights)

    def __len__(self) -> int:
        return len(self._weights)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self._weights)

    def __getitem__(self, i: int) -> Fraction:
        return self._weights[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Distribution) and self._weights == other._weights

    def __hash__(self) -> int:
        return hash(self._weights)

    def __repr__(self) -> str:
        return f'Distribution({", ".join(format_rational(w) for w in self._weights)})'


def _check_orders(a: int, b: int, what: str) -> None:
    if a != b:
        raise DimensionError(f'{what} orders do not match. {a} != {b}')


def matmul(a: StochMatrix, b: StochMatrix) -> StochMatrix:
    """Exact product ``a · b`` (apply ``b`` first, then ``a``)."""

    _check_orders(a.order, b.order, 'Matrix')

    n = a.order
    grid = [[ZERO] * n for _ in range(n)]
    for j in range(n):
        for k, b_kj in b.column_support(j):
            for i, a_ik in a.column_support(k):
                grid[i][j] += a_ik * b_kj

    return StochMatrix(grid)


def kron(a: StochMatrix, b: StochMatrix) -> StochMatrix:
    """Kronecker product; state ``(i, k)`` of the product has index ``i * b.order + k``."""

    rows = []
    for a_row in a.entries:
        for b_row in b.entries:
            rows.append([x * y for x in a_row for y in b_row])

    return StochMatrix(rows)


def mat_vec(m: StochMatrix, weights: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    """``m · weights`` for any nonnegative vector, including the partial masses of decide-and-halt runs."""

    _check_orders(m.order, len(weights), 'Matrix and vector')

    out = [ZERO] * m.order
    for j, w in enumerate(weights):
        if not w:
            continue
        for i, value in m.column_support(j):
            out[i] += value * w

    return tuple(out)


def apply(m: StochMatrix, v: Distribution) -> Distribution:
    if not m.is_column_stochastic:
        raise ValueError(f'Only column-stochastic matrices map distributions to distributions. {m.verdict.reason}')

    return Distribution(mat_vec(m, v.weights))


def block_diagonal(*blocks: StochMatrix) -> StochMatrix:
    n = sum(block.order for block in blocks)
    grid = [[ZERO] * n for _ in range(n)]

    offset = 0
    for block in blocks:
        for i, row in enumerate(block.entries):
            for j, value in enumerate(row):
                grid[offset + i][offset + j] = value
        offset += block.order

    return StochMatrix(grid)


def random_doubly_stochastic(n: int, k: int, seed: int, max_weight: int = 10) -> StochMatrix:
    """
    A Birkhoff combination of ``k`` random permutation matrices with random rational weights.

    :param n: Order of the matrix.
    :param k: Number of permutation terms. ``k=1`` gives a permutation matrix.
    :param seed: Seed of the generator; the same seed always gives the same matrix.
    :param max_weight: Raw weights are integers in ``[1, max_weight]``, normalized to sum to 1.
    """

    if n < 1:
        raise ValueError(f'n must be positive. n={n}')
    if k < 1:
        raise ValueError(f'k must be positive. k={k}')

    rng = random.Random(seed)

    permutations = [rng.sample(range(n), n) for _ in range(k)]
    raw_weights = [rng.randint(1, max_weight) for _ in range(k)]
    total = sum(raw_weights)

    grid = [[ZERO] * n for _ in range(n)]
    for images, raw_weight in zip(permutations, raw_weights):
        weight = Fraction(raw_weight, total)
        for j, i in enumerate(images):
            grid[i][j] += weight

    return StochMatrix(grid)
