import unittest
from fractions import Fraction

import networkx as nx
from parameterized import parameterized

from pralib.dsmat import StochMatrix, random_doubly_stochastic
from pralib.exceptions import BudgetExceededError
from pralib.markov import (
    ProbeFlavor, ProbeWords, analyze_chain, convergence_probe, no_transient_check, positive_diagonal_power,
    stationary_limit, transition_graph,
)
from pralib.regclass.classify import Witness, WitnessKind
from pralib_tests.fixtures import fix_adh, fix_l2, fix_l2_halting, parity_automaton
from pralib_tests.test import PralibTestCase

SWAP = StochMatrix.permutation([1, 0])
CYCLE = StochMatrix.permutation([1, 2, 0])
HALVES = StochMatrix.uniform(2)
LAZY = StochMatrix([
    ['1/2', '1/4', '1/4'],
    ['1/4', '1/2', '1/4'],
    ['1/4', '1/4', '1/2'],
])


class AnalyzeChainTest(unittest.TestCase):
    def test_swap_is_periodic(self):
        report = analyze_chain(SWAP)

        self.assertEqual((frozenset({0, 1}),), report.classes)
        self.assertEqual({0: 2, 1: 2}, report.periods)
        self.assertTrue(report.irreducible)
        self.assertFalse(report.aperiodic)

    def test_identity_splits_into_fixed_points(self):
        report = analyze_chain(StochMatrix.identity(3))

        self.assertEqual((frozenset({0}), frozenset({1}), frozenset({2})), report.classes)
        self.assertFalse(report.irreducible)
        self.assertTrue(report.aperiodic)
        self.assertEqual(frozenset(), report.transient)

    def test_column_stochastic_chain_can_have_transient_states(self):
        report = analyze_chain(StochMatrix([[1, 1], [0, 0]]))

        self.assertEqual(frozenset({1}), report.transient)
        self.assertEqual(0, report.periods[1])

    def test_refuses_non_stochastic_matrices(self):
        self.assertRaises(ValueError, analyze_chain, StochMatrix([[1, 0], [1, 0]]))

    def test_to_json(self):
        result = analyze_chain(CYCLE).to_json()

        self.assertEqual([[0, 1, 2]], result['classes'])
        self.assertEqual({'0': 3, '1': 3, '2': 3}, result['periods'])
        self.assertTrue(result['irreducible'])
        self.assertFalse(result['aperiodic'])

    def test_edges_run_from_column_to_row(self):
        graph = transition_graph(StochMatrix([[1, 1], [0, 0]]))

        self.assertTrue(graph.has_edge(1, 0))
        self.assertFalse(graph.has_edge(0, 1))


class DoublyStochasticChainTest(unittest.TestCase):
    @parameterized.expand([(n, seed) for n in range(2, 6) for seed in range(5)])
    def test_no_transient_states(self, n, seed):
        matrix = random_doubly_stochastic(n, 2, seed)

        self.assertTrue(no_transient_check(matrix))

    @parameterized.expand([(seed,) for seed in range(10)])
    def test_accessibility_is_symmetric(self, seed):
        graph = transition_graph(random_doubly_stochastic(5, 2, seed))

        for a in graph.nodes:
            for b in graph.nodes:
                if nx.has_path(graph, a, b):
                    self.assertTrue(nx.has_path(graph, b, a), (a, b))

    def test_no_transient_check_refuses_other_matrices(self):
        self.assertRaises(ValueError, no_transient_check, StochMatrix([[1, 1], [0, 0]]))


class PositiveDiagonalPowerTest(unittest.TestCase):
    @parameterized.expand([
        ('identity', StochMatrix.identity(3), 1),
        ('swap', SWAP, 2),
        ('cycle', CYCLE, 3),
        ('block_average', fix_l2().matrix('a'), 1),
    ])
    def test_values(self, _, matrix, expected):
        self.assertEqual(expected, positive_diagonal_power(matrix))

    @parameterized.expand([(seed,) for seed in range(10)])
    def test_power_has_a_positive_diagonal(self, seed):
        matrix = random_doubly_stochastic(4, 2, seed)

        k = positive_diagonal_power(matrix)

        self.assertTrue(all(v > 0 for v in matrix.power(k).diagonal))

    def test_cap(self):
        self.assertRaises(BudgetExceededError, positive_diagonal_power, SWAP, cap=1)


class StationaryLimitTest(PralibTestCase):
    def test_uniform_matrix_converges_at_once(self):
        result = stationary_limit(StochMatrix.uniform(3))

        self.assertTrue(result.converged)
        self.assertEqual(1, result.iterations)
        self.assert_list_almost_equal([1 / 3] * 3, result.vector)

    def test_lazy_walk_converges(self):
        result = stationary_limit(LAZY)

        self.assertTrue(result.converged)
        self.assert_list_almost_equal([1 / 3] * 3, result.vector)

    @parameterized.expand([
        ('periodic', SWAP),
        ('reducible', StochMatrix.identity(2)),
    ])
    def test_refusals(self, refusal, matrix):
        result = stationary_limit(matrix)

        self.assertFalse(result.converged)
        self.assertEqual(refusal, result.refusal)
        self.assertIsNone(result.vector)

    def test_iteration_limit(self):
        result = stationary_limit(HALVES, max_iter=0)

        self.assertEqual('diverged', result.refusal)

    def test_refuses_non_doubly_stochastic_matrices(self):
        self.assertRaises(ValueError, stationary_limit, StochMatrix([[1, 1], [0, 0]]))


class ConvergenceProbeTest(unittest.TestCase):
    def test_gap_shrinks_by_a_quarter_per_round(self):
        result = convergence_probe(fix_l2(), ProbeWords('', 'a', 'b', ''), m_max=8)

        self.assertEqual(1, result.k)
        self.assertEqual(tuple(range(1, 9)), result.m_values)
        self.assertEqual(tuple(Fraction(1, 4 ** m) for m in range(1, 9)), result.gaps)
        self.assertLess(result.gaps[-1], Fraction(1, 100))

    def test_double_prime_flavor(self):
        result = convergence_probe(fix_l2(), ProbeWords('', 'a', 'b', ''), 6, ProbeFlavor.STAR_DPRIME)

        self.assertEqual((Fraction(1, 4), Fraction(1, 16)), result.gaps[:2])
        self.assertLess(result.gaps[-1], Fraction(1, 100))

    def test_words_with_the_same_action_have_no_gap(self):
        result = convergence_probe(parity_automaton(), ProbeWords('a', 'aa', 'b', ''), 4)

        self.assertEqual((0, 0, 0, 0), result.gaps)

    def test_power_is_the_lcm_over_both_words(self):
        automaton = parity_automaton()

        result = convergence_probe(automaton, ProbeWords('', 'a', 'b', ''), 2)

        self.assertEqual(2, result.k)

    def test_csv(self):
        result = convergence_probe(fix_l2(), ProbeWords('', 'a', 'b', ''), 2)

        self.assertEqual('m,gap\n1,1/4\n2,1/16\n', result.to_csv())
        self.assertEqual('m,gap,gap_float\n1,1/4,0.25\n2,1/16,0.0625\n', result.to_csv(with_float=True))

    def test_json(self):
        result = convergence_probe(fix_l2(), ProbeWords('', 'a', 'b', ''), 1).to_json()

        self.assertEqual({'flavor': 'star-prime', 'k': 1, 'm': [1], 'gaps': ['1/4']}, result)

    def test_m_max_must_be_positive(self):
        self.assertRaises(ValueError, convergence_probe, fix_l2(), ProbeWords('', 'a', 'b', ''), 0)

    def test_decide_and_halt_gap_shrinks_by_a_quarter_per_round(self):
        result = convergence_probe(fix_l2_halting(), ProbeWords('', 'a', 'b', ''), 6, ProbeFlavor.STAR_DPRIME)

        self.assertEqual(1, result.k)
        self.assertEqual(tuple(Fraction(1, 4 ** m) for m in range(1, 7)), result.gaps)

    def test_decide_and_halt_gap_matches_classical_acceptance(self):
        words = ProbeWords('a', 'a', 'b', 'b')

        for flavor in ProbeFlavor:
            self.assertEqual(
                convergence_probe(fix_l2(), words, 4, flavor).gaps,
                convergence_probe(fix_l2_halting(), words, 4, flavor).gaps,
            )

    def test_decide_and_halt_automaton_that_halts_at_once(self):
        result = convergence_probe(fix_adh(), ProbeWords('', 'a', 'b', ''), 2, ProbeFlavor.STAR_DPRIME)

        self.assertEqual((0, 0), result.gaps)

    def test_words_from_a_witness(self):
        witness = Witness(WitnessKind.STAR_DPRIME, (0, 1), 'a', 'b', omega='', z='b')

        self.assertEqual(ProbeWords('', 'a', 'b', 'b'), ProbeWords.from_witness(witness))
        self.assertRaises(ValueError, ProbeWords.from_witness, Witness(WitnessKind.STAR_DPRIME, (0, 1), 'a', 'b'))


if __name__ == '__main__':
    unittest.main()
