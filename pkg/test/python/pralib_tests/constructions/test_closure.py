import unittest
from fractions import Fraction

from parameterized import parameterized

from pralib.automata import DOLLAR, HASH, Endmarkers
from pralib.automata.pra_c import PraC
from pralib.automata.recognition import recognition_interval
from pralib.constructions.closure import (
    BooleanOp, HomomorphismSpec, boolean_combine, combined_interval, complement, initial_hash_matrix,
    inverse_hom, left_quotient, normalize_probability, recognition_probability,
)
from pralib.constructions.families import ln_family
from pralib.dsmat import StochMatrix
from pralib.exceptions import UnknownSymbolError
from pralib.regclass.classify import classify_star
from pralib.regclass.dfa import build_dfa, minimize
from pralib.utils import words
from pralib_tests.fixtures import fix_adh, fix_l2, parity_automaton
from pralib_tests.test import PralibTestCase


def even_count(letter: str) -> PraC:
    """Accepts words with an even number of ``letter``, with certainty."""

    swap = StochMatrix.permutation([1, 0])
    identity = StochMatrix.identity(2)
    return PraC(
        states=['even', 'odd'],
        alphabet='ab',
        initial='even',
        accepting=['even'],
        transitions={
            HASH: identity,
            'a': swap if letter == 'a' else identity,
            'b': swap if letter == 'b' else identity,
            DOLLAR: identity,
        },
    )


class NormalizeProbabilityTest(PralibTestCase):
    def setUp(self) -> None:
        self.target = normalize_probability(fix_l2(), Fraction(3, 4), 1)

    def test_recognition_probability(self):
        self.assertEqual(Fraction(4, 7), recognition_probability(Fraction(3, 4), 1))
        self.assertEqual(Fraction(2, 3), recognition_probability(0, Fraction(1, 2)))
        self.assertEqual(1, recognition_probability(0, 1))

    def test_adds_a_rejecting_sink(self):
        self.assertEqual(4, self.target.size)
        self.assertEqual('sink', self.target.states[-1])
        self.assertNotIn(3, self.target.accepting)
        self.assertEqual((Fraction(4, 7), 0, 0, Fraction(3, 7)), self.target.matrix(HASH).column(0))
        self.assert_valid(self.target)

    def test_interval_becomes_symmetric(self):
        result = recognition_interval(self.target, minimize(build_dfa('a*b*')), 6)

        self.assertEqual(Fraction(3, 7), result.p1)
        self.assertEqual(Fraction(4, 7), result.p2)

    def test_low_interval_uses_an_accepting_sink(self):
        result = normalize_probability(fix_l2(), 0, Fraction(1, 2))

        self.assertIn(3, result.accepting)
        self.assertEqual(1, result.accept_prob('ab'))
        self.assertEqual(Fraction(5, 6), result.accept_prob('ba'))
        self.assert_valid(result)

    def test_full_interval_keeps_acceptance(self):
        result = normalize_probability(fix_l2(), 0, 1)

        for word in words('ab', 4):
            self.assertEqual(fix_l2().accept_prob(word), result.accept_prob(word), word)

    def test_sink_name_avoids_existing_states(self):
        renamed = normalize_probability(self.target, Fraction(3, 7), Fraction(4, 7))

        self.assertEqual(5, renamed.size)
        self.assertEqual(len(set(renamed.states)), renamed.size)

    @parameterized.expand([
        (Fraction(3, 4), Fraction(3, 4)),
        (Fraction(3, 4), Fraction(1, 2)),
        (-1, 1),
    ])
    def test_bad_interval_raises_ValueError(self, p1, p2):
        self.assertRaises(ValueError, normalize_probability, fix_l2(), p1, p2)

    def test_needs_a_hash_endmarker(self):
        self.assertRaises(ValueError, normalize_probability, parity_automaton(), 0, 1)


class InitialHashMatrixTest(unittest.TestCase):
    def test_is_doubly_stochastic_with_the_given_column(self):
        column = (Fraction(1, 2), Fraction(1, 3), Fraction(1, 6))

        result = initial_hash_matrix(column, 1)

        self.assertTrue(result.is_doubly_stochastic)
        self.assertEqual(column, result.column(1))

    def test_column_must_sum_to_one(self):
        self.assertRaises(ValueError, initial_hash_matrix, (Fraction(1, 2), Fraction(1, 4)), 0)


class BooleanCombineTest(PralibTestCase):
    def setUp(self) -> None:
        self.a = even_count('a')
        self.b = even_count('b')

    def test_acceptance_is_the_average(self):
        target = boolean_combine(self.a, self.b, BooleanOp.INTERSECTION)

        self.assert_valid(target)
        self.assertEqual(('A.even', 'A.odd', 'B.even', 'B.odd'), target.states)
        for word in words('ab', 4):
            expected = (self.a.accept_prob(word) + self.b.accept_prob(word)) / 2
            self.assertEqual(expected, target.accept_prob(word), word)

    def test_intersection_interval_holds(self):
        target = boolean_combine(self.a, self.b, BooleanOp.INTERSECTION)
        low, high = combined_interval(BooleanOp.INTERSECTION, 1, 1)

        result = recognition_interval(target, lambda w: w.count('a') % 2 == 0 and w.count('b') % 2 == 0, 4)

        self.assertEqual((Fraction(1, 2), 1), (low, high))
        self.assertLessEqual(result.p1, low)
        self.assertGreaterEqual(result.p2, high)

    def test_union_interval_holds(self):
        target = boolean_combine(self.a, self.b, BooleanOp.UNION)
        low, high = combined_interval(BooleanOp.UNION, 1, 1)

        result = recognition_interval(target, lambda w: w.count('a') % 2 == 0 or w.count('b') % 2 == 0, 4)

        self.assertEqual((0, Fraction(1, 2)), (low, high))
        self.assertLessEqual(result.p1, low)
        self.assertGreaterEqual(result.p2, high)

    def test_normalized_automaton_combined_with_itself_keeps_its_interval(self):
        normalized = normalize_probability(fix_l2(), Fraction(3, 4), 1)

        with self.assertLogs('pralib.constructions.closure', level='WARNING'):
            target = boolean_combine(normalized, normalized, 'union')

        result = recognition_interval(target, minimize(build_dfa('a*b*')), 5)
        self.assertEqual((Fraction(3, 7), Fraction(4, 7)), (result.p1, result.p2))

    def test_alphabets_must_match(self):
        self.assertRaises(ValueError, boolean_combine, fix_l2(), ln_family(3), BooleanOp.UNION)

    @parameterized.expand([
        (BooleanOp.INTERSECTION, Fraction(3, 4), Fraction(3, 4), (Fraction(5, 8), Fraction(3, 4))),
        (BooleanOp.UNION, Fraction(3, 4), Fraction(3, 4), (Fraction(1, 4), Fraction(3, 8))),
        (BooleanOp.INTERSECTION, 1, Fraction(3, 4), (Fraction(5, 8), Fraction(7, 8))),
        (BooleanOp.UNION, 1, Fraction(3, 4), (Fraction(1, 8), Fraction(3, 8))),
    ])
    def test_combined_interval(self, op, pa, pb, expected):
        self.assertEqual(expected, combined_interval(op, pa, pb))

    def test_combined_interval_needs_probabilities_above_one_half(self):
        self.assertRaises(ValueError, combined_interval, BooleanOp.UNION, Fraction(1, 2), 1)


class ComplementTest(PralibTestCase):
    def test_swaps_acceptance(self):
        target = complement(fix_l2())

        self.assertEqual(Fraction(1, 4), target.accept_prob('ba'))
        self.assertEqual(0, target.accept_prob('ab'))
        self.assertEqual(fix_l2(), complement(target))

    def test_decide_and_halt_swaps_halting_sets(self):
        target = complement(fix_adh())

        outcome = target.decide('ab')
        self.assertEqual((0, 1, 0), tuple(outcome))
        self.assertEqual(fix_adh(), complement(target))


class InverseHomTest(PralibTestCase):
    def setUp(self) -> None:
        self.target = fix_l2()

    def test_identity_changes_nothing(self):
        self.assertEqual(self.target, inverse_hom(self.target, HomomorphismSpec.identity('ab')))

    def test_accepts_words_by_their_images(self):
        h = HomomorphismSpec.from_mapping({'a': 'ab', 'b': 'ba'}, 'ab')

        result = inverse_hom(self.target, h)

        self.assert_valid(result)
        for word in words('ab', 4):
            self.assertEqual(self.target.accept_prob(h.apply(word)), result.accept_prob(word), word)

    def test_collapsing_letters(self):
        h = HomomorphismSpec.from_mapping({'a': 'a', 'b': 'a'}, 'ab')

        result = inverse_hom(self.target, h)

        for word in words('ab', 4):
            self.assertEqual(1, result.accept_prob(word), word)

    def test_new_source_alphabet(self):
        h = HomomorphismSpec.from_mapping({'c': 'ba'}, 'ab')

        result = inverse_hom(self.target, h)

        self.assertEqual(('c',), result.alphabet)
        self.assertEqual(Fraction(3, 4), result.accept_prob('c'))
        self.assertEqual(HASH + 'c' + DOLLAR, result.tape('c'))

    def test_recognizable_preimage_with_an_unrecognizable_image(self):
        h_inverse = HomomorphismSpec.from_mapping({'a': 'a', 'b': 'a', 'c': 'b'}, 'ab')
        h = HomomorphismSpec.from_mapping({'a': 'a', 'b': 'b', 'c': 'a'}, 'ab')

        result = inverse_hom(self.target.replace(accepting=['q1']), h_inverse)

        self.assert_valid(result)
        interval = recognition_interval(result, minimize(build_dfa('(a,b)*cc*', 'abc')), 6)
        self.assertEqual((Fraction(3, 8), Fraction(1, 2)), (interval.p1, interval.p2))
        self.assertEqual({'a'}, {h.apply(w)[-1] for w in words('abc', 4) if result.accept_prob(w) == Fraction(1, 2)})
        self.assertIsNotNone(classify_star(minimize(build_dfa('(a,b)*a', 'ab'))))

    def test_image_outside_target_raises_UnknownSymbolError(self):
        self.assertRaises(UnknownSymbolError, HomomorphismSpec.from_mapping, {'a': 'ax'}, 'ab')

    def test_missing_images_raise_ValueError(self):
        self.assertRaises(ValueError, HomomorphismSpec, ('a', 'b'), ('a',), {'a': 'a'})

    def test_apply(self):
        h = HomomorphismSpec.from_mapping({'a': 'ab', 'b': ''}, 'ab')

        self.assertEqual('abab', h.apply('aba'))
        self.assertEqual(h, HomomorphismSpec.from_mapping({'a': 'ab', 'b': ''}, 'ab'))
        self.assertEqual(hash(h), hash(HomomorphismSpec.from_mapping({'a': 'ab', 'b': ''}, 'ab')))


class LeftQuotientTest(PralibTestCase):
    def setUp(self) -> None:
        self.target = fix_l2()

    @parameterized.expand([('',), ('a',), ('b',), ('ba',)])
    def test_accepts_w_as_uw(self, u):
        result = left_quotient(self.target, u)

        self.assert_valid(result)
        for word in words('ab', 3):
            self.assertEqual(self.target.accept_prob(u + word), result.accept_prob(word), word)

    def test_empty_prefix_changes_nothing(self):
        self.assertEqual(self.target, left_quotient(self.target, ''))

    def test_needs_a_hash_endmarker(self):
        self.assertRaises(ValueError, left_quotient, parity_automaton(), 'a')


if __name__ == '__main__':
    unittest.main()
