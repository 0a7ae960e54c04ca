"""
Unitary prototypes: a unitary matrix ``U`` is a prototype of a doubly stochastic ``S`` if ``|U_ij|² = S_ij``.

Not every doubly stochastic matrix has one. For order 3 there is an exact test, :func:`unistochastic_3x3`.
:func:`search_prototype` searches numerically at any order, and failing to find a prototype proves nothing.
"""

import cmath
import logging
import math
import random
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import least_squares

from pralib.dsmat import StochMatrix
from pralib.exceptions import DimensionError, FormatError
from pralib.utils import build_repr, or_default

logger = logging.getLogger(__name__)

PROTOTYPE_TOLERANCE = 1e-8


class ComplexMatrix:
    """An immutable square matrix of complex floats."""

    def __init__(self, entries: Sequence[Sequence[complex]]):
        array = np.array(entries, dtype=complex)

        if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] == 0:
            raise DimensionError(f'Matrix must be square and non-empty. shape={array.shape}')
        if not np.all(np.isfinite(array)):
            raise ValueError('Matrix entries must be finite')

        array.flags.writeable = False
        self._array = array

    @property
    def order(self) -> int:
        return self._array.shape[0]

    @property
    def array(self) -> np.ndarray:
        return self._array

    def to_json(self) -> dict:
        return dict(re=self._array.real.tolist(), im=self._array.imag.tolist())

    @classmethod
    def from_json(cls, document: dict) -> 'ComplexMatrix':
        try:
            real = np.array(document['re'], dtype=float)
            imag = np.array(document['im'], dtype=float)
        except (KeyError, TypeError, ValueError) as e:
            raise FormatError(f'A complex matrix needs "re" and "im" grids of numbers: {e}') from e

        if real.shape != imag.shape:
            raise FormatError(f'"re" and "im" shapes differ. {real.shape} != {imag.shape}')
        return cls(real + 1j * imag)

    def __eq__(self, other) -> bool:
        return isinstance(other, ComplexMatrix) and np.array_equal(self._array, other._array)

    def __repr__(self) -> str:
        return build_repr(self, 'order')

    def __str__(self) -> str:
        return np.array2string(self._array, precision=6, suppress_small=True)


def is_prototype(u: ComplexMatrix, s: StochMatrix, tol: float = PROTOTYPE_TOLERANCE) -> bool:
    if u.order != s.order:
        raise DimensionError(f'Orders do not match. {u.order} != {s.order}')

    a = u.array
    unitary = np.allclose(a @ a.conj().T, np.eye(u.order), rtol=0, atol=tol)
    moduli = np.allclose(np.abs(a) ** 2, s.to_array(), rtol=0, atol=tol)
    return bool(unitary and moduli)


def _require_doubly_stochastic(s: StochMatrix) -> None:
    if not s.is_doubly_stochastic:
        raise ValueError(f'Matrix must be doubly stochastic. {s.verdict.reason}')


def prototype_2x2(s: StochMatrix) -> ComplexMatrix:
    """``[[√p, √(1-p)], [√(1-p), -√p]]`` for ``s = [[p, 1-p], [1-p, p]]``."""

    _require_doubly_stochastic(s)
    if s.order != 2:
        raise DimensionError(f'Matrix must have order 2. order={s.order}')

    p = float(s[0, 0])
    q = 1 - p
    return ComplexMatrix([[math.sqrt(p), math.sqrt(q)], [math.sqrt(q), -math.sqrt(p)]])


@dataclass(frozen=True)
class Unistochastic3x3Verdict:
    unistochastic: bool
    links: Tuple[float, float, float]
    """``√(S_1j·S_2j)``: lengths that must close into a triangle."""
    prototype: Optional[ComplexMatrix] = None


def unistochastic_3x3(s: StochMatrix) -> Unistochastic3x3Verdict:
    """
    Decides whether a 3×3 doubly stochastic matrix has a prototype.

    Orthogonality of the first two rows of a prototype needs ``a + b·e^(iβ) + c·e^(iγ) = 0`` for the link lengths
    ``a, b, c`` of the first two rows, which is possible iff ``|a - b| <= c <= a + b``. The test is done exactly, as
    ``(C - A - B)² <= 4AB`` on the squares ``A, B, C``. The prototype is then built from the phases of that triangle,
    with the third row completing the unitary.
    """

    _require_doubly_stochastic(s)
    if s.order != 3:
        raise DimensionError(f'Matrix must have order 3. order={s.order}')

    squares = [s[0, j] * s[1, j] for j in range(3)]
    big_a, big_b, big_c = squares
    links = tuple(math.sqrt(v) for v in squares)

    if (big_c - big_a - big_b) ** 2 > 4 * big_a * big_b:
        return Unistochastic3x3Verdict(False, links)

    a, b, c = links
    if a * b == 0:
        beta = 0.
    else:
        beta = math.acos(max(-1., min(1., (c * c - a * a - b * b) / (2 * a * b))))
    gamma = 0. if c == 0 else cmath.phase(-(a + b * cmath.exp(1j * beta)))

    phases = (0., beta, gamma)
    first = np.array([math.sqrt(s[0, j]) for j in range(3)], dtype=complex)
    second = np.array([math.sqrt(s[1, j]) * cmath.exp(1j * phases[j]) for j in range(3)])
    third = np.conj(np.cross(first, second))

    prototype = ComplexMatrix([first, second, third])
    if not is_prototype(prototype, s):
        logger.warning(f'Constructed prototype misses the tolerance {PROTOTYPE_TOLERANCE}; links={links}')

    return Unistochastic3x3Verdict(True, links, prototype)


class PrototypeSearch:
    """
    Random-restart local search for a prototype.

    The moduli of a prototype are fixed by ``S``, so only phases are searched. Multiplying rows and columns by phases
    keeps a prototype a prototype, so the first row and column are kept real. Each restart minimizes the entries of
    ``U·U† - I`` from random phases with Levenberg-Marquardt.
    """

    tolerance: float
    max_restarts: int
    rng: random.Random

    stats: 'PrototypeSearch.Stats'
    """Info about the last search."""

    def __init__(self, tolerance: float = PROTOTYPE_TOLERANCE, max_restarts: int = 50, rng: random.Random = None):
        self.tolerance = tolerance
        self.max_restarts = max_restarts
        self.rng = rng or random.Random()

    def solve(self, s: StochMatrix) -> Optional[ComplexMatrix]:
        self.stats = PrototypeSearch.Stats()
        _require_doubly_stochastic(s)

        for candidate in self._seeds(s):
            self.stats.seeds_tried += 1
            if is_prototype(candidate, s, self.tolerance):
                self.stats.stop_reason = 'seed is a prototype'
                return candidate

        moduli = np.sqrt(s.to_array())
        n = s.order

        def unitary_residual(free_phases: np.ndarray) -> np.ndarray:
            u = self._with_phases(moduli, free_phases)
            diff = u @ u.conj().T - np.eye(n)
            return np.concatenate([diff.real.ravel(), diff.imag.ravel()])

        while self.stats.restarts < self.max_restarts:
            self.stats.restarts += 1

            start = np.array([self.rng.uniform(-math.pi, math.pi) for _ in range((n - 1) ** 2)])
            solution = least_squares(unitary_residual, start, method='lm', xtol=1e-15, ftol=1e-15, gtol=1e-15)
            residual = float(np.max(np.abs(solution.fun)))
            self.stats.best_residual = min(self.stats.best_residual, residual)

            candidate = ComplexMatrix(self._with_phases(moduli, solution.x))
            if is_prototype(candidate, s, self.tolerance):
                self.stats.stop_reason = 'restart converged'
                logger.debug(f'Prototype found after {self.stats.restarts} restarts')
                return candidate

        self.stats.stop_reason = 'max restarts reached'
        logger.debug(f'No prototype within {self.max_restarts} restarts; best residual {self.stats.best_residual}')
        return None

    @staticmethod
    def _with_phases(moduli: np.ndarray, free_phases: np.ndarray) -> np.ndarray:
        n = moduli.shape[0]
        phases = np.zeros((n, n))
        phases[1:, 1:] = np.reshape(free_phases, (n - 1, n - 1))
        return moduli * np.exp(1j * phases)

    @staticmethod
    def _seeds(s: StochMatrix):
        moduli = np.sqrt(s.to_array())
        n = s.order

        yield ComplexMatrix(moduli)

        if n == 2:
            yield prototype_2x2(s)

        fourier = np.exp(2j * np.pi * np.outer(np.arange(n), np.arange(n)) / n)
        yield ComplexMatrix(moduli * fourier)

    @dataclass
    class Stats:
        seeds_tried: int = 0
        restarts: int = 0
        best_residual: float = math.inf
        stop_reason: str = ''


def search_prototype(
        s: StochMatrix,
        budget: int = None,
        seed: int = None,
        tol: float = PROTOTYPE_TOLERANCE,
) -> Optional[ComplexMatrix]:
    """
    A prototype of ``s`` if one is found within ``budget`` restarts, otherwise None. None does not mean that no
    prototype exists; for order 3, :func:`unistochastic_3x3` decides that exactly.
    """

    search = PrototypeSearch(tol, or_default(budget, 50), random.Random(seed))
    return search.solve(s)
