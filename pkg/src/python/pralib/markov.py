"""
Markov-chain structure of stochastic matrices, and the convergence probe.

A matrix is read as a chain with a transition from ``j`` to ``i`` whenever entry ``[i][j]`` is positive (the
column-is-source convention of :mod:`pralib.dsmat`). Doubly stochastic chains have no transient states, and powers of
their irreducible aperiodic parts converge to the uniform matrix; the probe measures that convergence on the
acceptance probabilities of two families of words that a recognizer would have to tell apart.
"""

import csv
import io
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Tuple

import networkx as nx
import numpy as np

from pralib.automata import DOLLAR, HASH
from pralib.automata.pra_c import PraC
from pralib.automata.pra_dh import PraDh
from pralib.dsmat import ZERO, Distribution, StochMatrix, format_rational, mat_vec
from pralib.exceptions import BudgetExceededError
from pralib.utils import or_default

logger = logging.getLogger(__name__)

DEFAULT_POWER_CAP = 2 ** 20
DEFAULT_TOLERANCE = 1e-9
DEFAULT_MAX_ITER = 10_000
DEFAULT_M_MAX = 16


def _require_doubly_stochastic(matrix: StochMatrix) -> None:
    if not matrix.is_doubly_stochastic:
        raise ValueError(f'Matrix must be doubly stochastic. {matrix.verdict.reason}')


def transition_graph(matrix: StochMatrix) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(matrix.order))
    for j in range(matrix.order):
        graph.add_edges_from((j, i) for i, _ in matrix.column_support(j))
    return graph


@dataclass(frozen=True)
class ChainReport:
    classes: Tuple[FrozenSet[int], ...]
    """Communication classes, ordered by their smallest state."""
    transient: FrozenSet[int]
    periods: Dict[int, int] = field(hash=False)
    """Period of every state; 0 for a state that cannot return to itself."""

    @property
    def irreducible(self) -> bool:
        return len(self.classes) == 1

    @property
    def aperiodic(self) -> bool:
        return all(period == 1 for period in self.periods.values())

    def to_json(self) -> dict:
        return dict(
            classes=[sorted(c) for c in self.classes],
            transient=sorted(self.transient),
            periods={str(state): period for state, period in sorted(self.periods.items())},
            irreducible=self.irreducible,
            aperiodic=self.aperiodic,
        )


def _class_period(graph: nx.DiGraph, members: FrozenSet[int]) -> int:
    """gcd of ``level[u] + 1 - level[v]`` over the edges inside the class, with breadth-first levels from one root."""

    subgraph = graph.subgraph(members)
    root = min(members)
    level = nx.single_source_shortest_path_length(subgraph, root)

    period = 0
    for u, v in subgraph.edges:
        period = gcd(period, level[u] + 1 - level[v])
    return period


def analyze_chain(matrix: StochMatrix) -> ChainReport:
    if not matrix.is_column_stochastic:
        raise ValueError(f'Matrix must be column-stochastic. {matrix.verdict.reason}')

    graph = transition_graph(matrix)
    classes = tuple(sorted((frozenset(c) for c in nx.strongly_connected_components(graph)), key=min))

    condensation = nx.condensation(graph, scc=classes)
    transient = frozenset().union(*(
        condensation.nodes[node]['members']
        for node in condensation.nodes
        if condensation.out_degree(node) > 0
    ))

    periods = {}
    for members in classes:
        period = _class_period(graph, members)
        periods.update((state, period) for state in members)

    logger.debug(f'{len(classes)} classes, {len(transient)} transient states')
    return ChainReport(classes, transient, periods)


def positive_diagonal_power(matrix: StochMatrix, cap: int = DEFAULT_POWER_CAP) -> int:
    """
    The least ``K >= 1`` such that every diagonal entry of ``matrix^K`` is positive. Only the zero pattern matters,
    so the powers are taken on boolean patterns.

    :raises BudgetExceededError: If no ``K <= cap`` works. Such a ``K`` always exists for doubly stochastic matrices.
    """

    _require_doubly_stochastic(matrix)

    pattern = (matrix.to_array() > 0).astype(np.int64)
    current = pattern
    for k in range(1, cap + 1):
        if np.all(np.diagonal(current) > 0):
            return k
        current = ((current @ pattern) > 0).astype(np.int64)

    raise BudgetExceededError(f'No power up to {cap} has a positive diagonal')


class StationaryResult(NamedTuple):
    vector: Optional[Tuple[float, ...]]
    iterations: int
    refusal: Optional[str] = None
    """'reducible', 'periodic' or 'diverged' when no limit is returned."""

    @property
    def converged(self) -> bool:
        return self.refusal is None


def stationary_limit(
        matrix: StochMatrix,
        tol: float = DEFAULT_TOLERANCE,
        max_iter: int = DEFAULT_MAX_ITER,
) -> StationaryResult:
    """
    Power iteration in floating point, from the average of the uniform vector and the point mass at state 0.

    Returns the first iterate ``v`` with ``‖Av - v‖ < tol`` and ``‖v - uniform‖ < tol`` (maximum norms), along with the
    number of matrix applications it took. Reducible and periodic chains are refused up front, since their powers
    need not converge to the uniform vector.
    """

    _require_doubly_stochastic(matrix)

    report = analyze_chain(matrix)
    if not report.irreducible:
        return StationaryResult(None, 0, 'reducible')
    if not report.aperiodic:
        return StationaryResult(None, 0, 'periodic')

    a = matrix.to_array()
    n = matrix.order
    uniform = np.full(n, 1 / n)
    v = (uniform + np.eye(n)[0]) / 2

    for i in range(max_iter + 1):
        next_v = a @ v
        if np.max(np.abs(next_v - v)) < tol and np.max(np.abs(v - uniform)) < tol:
            logger.debug(f'Converged after {i} iterations')
            return StationaryResult(tuple(float(x) for x in v), i)
        v = next_v

    return StationaryResult(None, max_iter, 'diverged')


def no_transient_check(matrix: StochMatrix) -> bool:
    """True iff the chain has no transient states, which always holds for doubly stochastic matrices."""

    _require_doubly_stochastic(matrix)
    return not analyze_chain(matrix).transient


class ProbeFlavor(Enum):
    STAR_PRIME = 'star-prime'
    """Compares ``ω (x^K y^K)^m z`` with ``ω y^K (x^K y^K)^m z``."""
    STAR_DPRIME = 'star-dprime'
    """Compares ``ω (x^K (xy)^K)^m z`` with ``ω (x^K (xy)^K)^m x^K z``."""


class ProbeWords(NamedTuple):
    omega: str
    x: str
    y: str
    z: str

    @classmethod
    def from_witness(cls, witness) -> 'ProbeWords':
        """From a :class:`pralib.regclass.classify.Witness` completed by ``prepare_probe``."""

        if witness.omega is None or witness.z is None:
            raise ValueError('The witness has no omega and z words; complete it with prepare_probe first')
        return cls(witness.omega, witness.x, witness.y, witness.z)


@dataclass(frozen=True)
class ProbeResult:
    m_values: Tuple[int, ...]
    gaps: Tuple[Fraction, ...]
    k: int
    flavor: ProbeFlavor

    def to_csv(self, with_float: bool = False) -> str:
        """Gaps as ``p/q``; ``with_float`` adds a decimal column."""

        out = io.StringIO()
        writer = csv.writer(out, lineterminator='\n')
        writer.writerow(['m', 'gap'] + (['gap_float'] if with_float else []))
        for m, gap in zip(self.m_values, self.gaps):
            writer.writerow([m, format_rational(gap)] + ([f'{float(gap):.12g}'] if with_float else []))
        return out.getvalue()

    def to_json(self) -> dict:
        return dict(
            flavor=self.flavor.value,
            k=self.k,
            m=list(self.m_values),
            gaps=[str(gap) for gap in self.gaps],
        )


def convergence_probe(
        automaton: PraC,
        words: ProbeWords,
        m_max: int = None,
        flavor: ProbeFlavor = ProbeFlavor.STAR_PRIME,
) -> ProbeResult:
    """
    Exact acceptance gap between the two word families of ``flavor``, for ``m = 1 .. m_max``. ``K`` is the least
    power at which the matrices of both ``x`` and ``y`` have a positive diagonal. The gap tends to 0 for every
    reversible automaton, which is why languages with such words cannot be recognized with bounded error.

    Decide-and-halt automata are measured with :meth:`PraDh.decide` on the spelled-out words; the criterion for
    them is ``ProbeFlavor.STAR_DPRIME``.
    """

    m_max = or_default(m_max, DEFAULT_M_MAX)
    if m_max < 1:
        raise ValueError(f'm_max must be positive. m_max={m_max}')
    flavor = ProbeFlavor(flavor)

    x_matrix = automaton.word_matrix(words.x)
    y_matrix = automaton.word_matrix(words.y)
    z_matrix = automaton.word_matrix(words.z)
    k = lcm(positive_diagonal_power(x_matrix), positive_diagonal_power(y_matrix))
    if isinstance(automaton, PraDh):
        return _halting_gaps(automaton, words, k, m_max, flavor)

    x_power = x_matrix.power(k)
    y_power = y_matrix.power(k)
    if flavor is ProbeFlavor.STAR_PRIME:
        cycle = y_power @ x_power
    else:
        cycle = (y_matrix @ x_matrix).power(k) @ x_power

    weights = Distribution.point(automaton.size, automaton.initial).weights
    if automaton.endmarkers.has_hash:
        weights = mat_vec(automaton.matrix(HASH), weights)
    weights = mat_vec(automaton.word_matrix(words.omega), weights)

    def acceptance(v) -> Fraction:
        v = mat_vec(z_matrix, v)
        if automaton.endmarkers.has_dollar:
            v = mat_vec(automaton.matrix(DOLLAR), v)
        return sum((v[i] for i in automaton.accepting), ZERO)

    first = weights
    second = mat_vec(y_power, weights) if flavor is ProbeFlavor.STAR_PRIME else None

    m_values: List[int] = []
    gaps: List[Fraction] = []
    for m in range(1, m_max + 1):
        first = mat_vec(cycle, first)
        if flavor is ProbeFlavor.STAR_PRIME:
            second = mat_vec(cycle, second)
            other = second
        else:
            other = mat_vec(x_power, first)

        m_values.append(m)
        gaps.append(abs(acceptance(first) - acceptance(other)))

    logger.debug(f'Probe K={k}: gap {gaps[0]} at m=1, {gaps[-1]} at m={m_max}')
    return ProbeResult(tuple(m_values), tuple(gaps), k, flavor)


def _halting_gaps(automaton: PraDh, words: ProbeWords, k: int, m_max: int, flavor: ProbeFlavor) -> ProbeResult:
    x_block = words.x * k
    if flavor is ProbeFlavor.STAR_PRIME:
        cycle = x_block + words.y * k
        prefix, suffix = words.y * k, ''
    else:
        cycle = x_block + (words.x + words.y) * k
        prefix, suffix = '', x_block

    m_values: List[int] = []
    gaps: List[Fraction] = []
    for m in range(1, m_max + 1):
        body = cycle * m
        first = automaton.decide(words.omega + body + words.z).accept
        other = automaton.decide(words.omega + prefix + body + suffix + words.z).accept

        m_values.append(m)
        gaps.append(abs(first - other))

    logger.debug(f'Decide-and-halt probe K={k}: gap {gaps[0]} at m=1, {gaps[-1]} at m={m_max}')
    return ProbeResult(tuple(m_values), tuple(gaps), k, flavor)
