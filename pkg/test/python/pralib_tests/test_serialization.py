import json
import os
import tempfile
import unittest

from parameterized import parameterized

from pralib import serialization
from pralib.constructions.closure import HomomorphismSpec
from pralib.dsmat import StochMatrix
from pralib.exceptions import FormatError
from pralib.regclass.dfa import build_dfa
from pralib_tests.fixtures import fix_15, fix_adh, fix_l2


class MatrixJsonTest(unittest.TestCase):
    def test_entries_are_written_as_strings(self):
        v_a = fix_l2().matrix('a')

        self.assertEqual(
            {'n': 3, 'entries': [['1', '0', '0'], ['0', '1/2', '1/2'], ['0', '1/2', '1/2']]},
            serialization.matrix_to_json(v_a),
        )

    def test_integers_and_strings_are_read(self):
        matrix = serialization.matrix_from_json({'n': 2, 'entries': [[0, 1], ['1', '0']]})

        self.assertEqual(StochMatrix.permutation([1, 0]), matrix)

    def test_round_trip(self):
        matrix = fix_l2().matrix('b')

        document = json.loads(serialization.dumps(serialization.matrix_to_json(matrix)))

        self.assertEqual(matrix, serialization.matrix_from_json(document))

    @parameterized.expand([
        ('float', {'n': 2, 'entries': [[0.5, 0.5], [0.5, 0.5]]}),
        ('bare grid', [['1/2', '1/2'], ['1/2', '1/2']]),
        ('no entries', {'n': 2}),
        ('no order', {'entries': [[1, 0], [0, 1]]}),
        ('wrong order', {'n': 3, 'entries': [[1, 0], [0, 1]]}),
        ('order not an integer', {'n': '2', 'entries': [[1, 0], [0, 1]]}),
        ('ragged', {'n': 2, 'entries': [[1, 0], [0]]}),
        ('garbage', {'n': 2, 'entries': [['x', 0], [0, 1]]}),
    ])
    def test_bad_matrix(self, name, document):
        with self.assertRaises(FormatError):
            serialization.matrix_from_json(document)

    def test_is_matrix_document(self):
        self.assertTrue(serialization.is_matrix_document({'n': 1, 'entries': [[1]]}))
        self.assertFalse(serialization.is_matrix_document(serialization.automaton_to_json(fix_l2())))
        self.assertFalse(serialization.is_matrix_document([[1]]))


class AutomatonJsonTest(unittest.TestCase):
    def test_prac_round_trip(self):
        automaton = fix_l2()

        document = json.loads(serialization.dumps(serialization.automaton_to_json(automaton)))

        self.assertEqual('prac', document['type'])
        self.assertEqual('both', document['endmarkers'])
        self.assertEqual(automaton, serialization.automaton_from_json(document))

    def test_pradh_round_trip(self):
        automaton = fix_adh()

        document = serialization.automaton_to_json(automaton)
        restored = serialization.automaton_from_json(document)

        self.assertEqual('pradh', document['type'])
        self.assertEqual(['rej'], document['rejecting'])
        self.assertEqual(document, serialization.automaton_to_json(restored))
        self.assertEqual(automaton.decide('ab'), restored.decide('ab'))

    def test_pra15_round_trip(self):
        automaton = fix_15()

        document = serialization.automaton_to_json(automaton)

        self.assertEqual('pra15', document['type'])
        self.assertEqual('weak', document['flavor'])
        self.assertEqual({'0', '1'}, set(document['transitions']['a']))
        self.assertEqual(document, serialization.automaton_to_json(serialization.automaton_from_json(document)))

    def test_endmarkers_default_to_both(self):
        document = serialization.automaton_to_json(fix_l2())
        del document['endmarkers']

        self.assertEqual(fix_l2(), serialization.automaton_from_json(document))

    def test_unknown_type(self):
        document = serialization.automaton_to_json(fix_l2())
        document['type'] = 'qfa'

        with self.assertRaises(FormatError) as context:
            serialization.automaton_from_json(document)
        self.assertIn("'qfa'", str(context.exception))

    @parameterized.expand([('states',), ('initial',), ('transitions',)])
    def test_missing_field(self, key):
        document = serialization.automaton_to_json(fix_l2())
        del document[key]

        with self.assertRaises(FormatError) as context:
            serialization.automaton_from_json(document)
        self.assertIn(repr(key), str(context.exception))

    def test_missing_rejecting_of_pradh(self):
        document = serialization.automaton_to_json(fix_adh())
        del document['rejecting']

        with self.assertRaises(FormatError):
            serialization.automaton_from_json(document)

    def test_float_entry(self):
        document = serialization.automaton_to_json(fix_l2())
        document['transitions']['a']['entries'][1][1] = 0.5

        with self.assertRaises(FormatError):
            serialization.automaton_from_json(document)

    def test_transitions_may_be_bare_grids(self):
        document = serialization.automaton_to_json(fix_l2())
        document['transitions'] = {
            symbol: matrix['entries'] for symbol, matrix in document['transitions'].items()
        }

        self.assertEqual(fix_l2(), serialization.automaton_from_json(document))

    def test_transition_order_must_match(self):
        document = serialization.automaton_to_json(fix_l2())
        document['transitions']['a']['n'] = 2

        with self.assertRaises(FormatError):
            serialization.automaton_from_json(document)

    def test_not_an_object(self):
        with self.assertRaises(FormatError):
            serialization.automaton_from_json(['prac'])


class LoadJsonTest(unittest.TestCase):
    def test_load(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'l2.json')
            with open(path, 'w', encoding='utf-8') as f:
                f.write(serialization.dumps(serialization.automaton_to_json(fix_l2())))

            self.assertEqual(fix_l2(), serialization.automaton_from_json(serialization.load_json(path)))

    def test_bad_json(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'broken.json')
            with open(path, 'w', encoding='utf-8') as f:
                f.write('{"type": "prac",')

            with self.assertRaises(FormatError) as context:
                serialization.load_json(path)
            self.assertIn('not valid JSON', str(context.exception))


class DfaJsonTest(unittest.TestCase):
    def test_round_trip(self):
        dfa = build_dfa('a*b*', 'ab').minimize()

        document = json.loads(serialization.dumps(serialization.dfa_to_json(dfa)))
        restored = serialization.dfa_from_json(document)

        self.assertEqual(dfa.states, restored.states)
        self.assertEqual(dfa.delta, restored.delta)
        self.assertEqual(dfa.accepting, restored.accepting)
        for word in ('', 'ab', 'ba', 'aabbb'):
            self.assertEqual(dfa.accepts(word), restored.accepts(word))

    def test_unknown_state_in_delta(self):
        document = dict(states=[0], alphabet=['a'], initial=0, accepting=[0], delta={'0': {'a': 1}})

        with self.assertRaises(FormatError):
            serialization.dfa_from_json(document)

    def test_partial_delta(self):
        document = dict(states=[0], alphabet=['a', 'b'], initial=0, accepting=[], delta={'0': {'a': 0}})

        with self.assertRaises(FormatError):
            serialization.dfa_from_json(document)


class HomomorphismJsonTest(unittest.TestCase):
    def test_target_defaults_to_given_alphabet(self):
        h = serialization.homomorphism_from_json({'images': {'c': 'ab', 'd': ''}}, 'ab')

        self.assertEqual(HomomorphismSpec(('c', 'd'), ('a', 'b'), {'c': 'ab', 'd': ''}), h)
        self.assertEqual('abab', h.apply('cdc'))

    def test_explicit_target(self):
        h = serialization.homomorphism_from_json({'images': {'c': 'a'}, 'target': ['a', 'b']}, 'a')

        self.assertEqual(('a', 'b'), h.target)

    @parameterized.expand([
        ('image outside target', {'images': {'c': 'xy'}}),
        ('image not a word', {'images': {'c': 3}}),
        ('no images', {'target': ['a']}),
    ])
    def test_bad_homomorphism(self, name, document):
        with self.assertRaises(FormatError):
            serialization.homomorphism_from_json(document, 'ab')


if __name__ == '__main__':
    unittest.main()
