import random
import unittest

from parameterized import parameterized

from pralib.exceptions import BudgetExceededError
from pralib.regclass.classify import WitnessKind, classify_star
from pralib.regclass.dfa import build_dfa, minimize, random_dfa
from pralib.regclass.monoid import classify_star_monoid_oracle, transition_monoid


class TransitionMonoidTest(unittest.TestCase):
    def test_words_ending_in_a(self):
        result = transition_monoid(minimize(build_dfa('(a|b)*a')))

        self.assertEqual({(0, 1): '', (1, 1): 'a', (0, 0): 'b'}, result)

    def test_cycle_generates_a_group(self):
        result = transition_monoid(minimize(build_dfa('(b*ab*a)*b*')))

        self.assertEqual({(0, 1): '', (1, 0): 'a'}, result)


class MonoidOracleTest(unittest.TestCase):
    def test_words_ending_in_a(self):
        result = classify_star_monoid_oracle(build_dfa('(a|b)*a'))

        self.assertEqual(WitnessKind.STAR, result.kind)
        self.assertEqual((0, 1, 0), result.states)
        self.assertEqual(('a', 'b'), (result.x, result.y))
        self.assertTrue(result.replay())

    @parameterized.expand([('a*b*',), ('(a|b)*',), ('(b*ab*a)*b*',)])
    def test_not_of_type_star(self, regex):
        self.assertIsNone(classify_star_monoid_oracle(build_dfa(regex)))

    def test_budget(self):
        self.assertRaises(BudgetExceededError, classify_star_monoid_oracle, build_dfa('a*b*'), budget=26)

    def test_agrees_with_the_product_searches_on_random_dfas(self):
        rng = random.Random(2024)

        for i in range(200):
            dfa = random_dfa(rng.randint(1, 4), 'ab', rng)

            by_search = classify_star(dfa)
            by_monoid = classify_star_monoid_oracle(dfa)

            self.assertEqual(by_monoid is None, by_search is None, f'DFA #{i}:\n{dfa}')
            if by_search is not None:
                self.assertTrue(by_search.replay(), f'DFA #{i}:\n{dfa}')
                self.assertTrue(by_monoid.replay(), f'DFA #{i}:\n{dfa}')


if __name__ == '__main__':
    unittest.main()
