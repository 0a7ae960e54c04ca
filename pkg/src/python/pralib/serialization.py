"""
JSON formats.

* Matrix: ``{"n": order, "entries": grid}``, where a grid is a list of rows of rationals, each an integer or a
  ``"p/q"`` string.
* Automaton: ``{"type": "prac" | "pradh" | "pra15", "states", "alphabet", "initial", "accepting",
  "rejecting" (pradh only), "endmarkers": "both" | "hash" | "none", "transitions": {symbol: matrix}}``.
  For ``pra15``, ``"transitions": {symbol: {"0": grid, "1": grid}}`` and ``"flavor": "weak" | "strong"``.
* DFA: ``{"states", "alphabet", "initial", "accepting", "delta": {state: {symbol: state}}}``.
* Homomorphism: ``{"images": {letter: word}, "target": [symbols]}``; ``"target"`` is optional.
* Complex matrix: ``{"re": grid, "im": grid}``.

Malformed documents raise :class:`pralib.exceptions.FormatError`.
"""

import json
from pathlib import Path
from typing import Any, Dict, Sequence, Union

from pralib.automata import Endmarkers
from pralib.automata.pra15 import DIRECTIONS, Flavor, Pra15
from pralib.automata.pra_c import PraC
from pralib.automata.pra_dh import PraDh
from pralib.constructions.closure import HomomorphismSpec
from pralib.dsmat import StochMatrix, format_rational, to_rational
from pralib.exceptions import FormatError, PralibError
from pralib.prototype import ComplexMatrix
from pralib.regclass.dfa import Dfa

AutomatonLike = Union[PraC, PraDh, Pra15]


def load_json(path: Union[str, Path]) -> Any:
    try:
        with open(path, encoding='utf-8') as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise FormatError(f'{path}: not valid JSON: {e}') from e


def dumps(document: Any) -> str:
    return json.dumps(document, indent=2, ensure_ascii=False) + '\n'


def _field(document: Dict[str, Any], key: str, what: str) -> Any:
    if not isinstance(document, dict):
        raise FormatError(f'A {what} must be a JSON object. got={type(document).__name__}')
    try:
        return document[key]
    except KeyError:
        raise FormatError(f'A {what} needs a {key!r} field') from None


def grid_to_json(matrix: StochMatrix) -> list:
    return [[format_rational(v) for v in row] for row in matrix.entries]


def grid_from_json(document: Any) -> StochMatrix:
    if not isinstance(document, list) or not all(isinstance(row, list) for row in document):
        raise FormatError('A grid must be a list of rows')

    try:
        return StochMatrix([[to_rational(v) for v in row] for row in document])
    except ValueError as e:
        raise FormatError(f'Bad matrix: {e}') from e


def matrix_to_json(matrix: StochMatrix) -> dict:
    return dict(n=matrix.order, entries=grid_to_json(matrix))


def matrix_from_json(document: Any) -> StochMatrix:
    n = _field(document, 'n', 'matrix')
    matrix = grid_from_json(_field(document, 'entries', 'matrix'))

    if isinstance(n, bool) or not isinstance(n, int):
        raise FormatError(f'"n" must be an integer. n={n!r}')
    if matrix.order != n:
        raise FormatError(f'"n" does not match the entries. n={n}; rows={matrix.order}')
    return matrix


def is_matrix_document(document: Any) -> bool:
    return isinstance(document, dict) and 'entries' in document


def _transition_from_json(document: Any) -> StochMatrix:
    # Transitions may be written as matrix objects or as bare grids
    return matrix_from_json(document) if isinstance(document, dict) else grid_from_json(document)


def automaton_to_json(automaton: AutomatonLike) -> dict:
    kwargs = automaton.init_kwargs()

    document = dict(
        type='pra15' if isinstance(automaton, Pra15) else 'pradh' if isinstance(automaton, PraDh) else 'prac',
        states=list(kwargs['states']),
        alphabet=list(kwargs['alphabet']),
        initial=kwargs['initial'],
        accepting=list(kwargs['accepting']),
    )
    if isinstance(automaton, PraDh):
        document['rejecting'] = list(kwargs['rejecting'])
    document['endmarkers'] = kwargs['endmarkers'].value

    if isinstance(automaton, Pra15):
        document['flavor'] = kwargs['flavor'].value
        document['transitions'] = {
            symbol: {str(d): grid_to_json(grids[d]) for d in DIRECTIONS}
            for symbol, grids in kwargs['transitions'].items()
        }
    else:
        document['transitions'] = {
            symbol: matrix_to_json(matrix) for symbol, matrix in kwargs['transitions'].items()
        }

    return document


def automaton_from_json(document: Any) -> AutomatonLike:
    kind = _field(document, 'type', 'automaton')

    try:
        common = dict(
            states=_field(document, 'states', 'automaton'),
            alphabet=_field(document, 'alphabet', 'automaton'),
            initial=_field(document, 'initial', 'automaton'),
            accepting=_field(document, 'accepting', 'automaton'),
            endmarkers=Endmarkers(document.get('endmarkers', 'both')),
        )
        transitions = _field(document, 'transitions', 'automaton')
        if not isinstance(transitions, dict):
            raise FormatError('"transitions" must be an object')

        if kind == 'pra15':
            grids = {
                symbol: {d: grid_from_json(_field(by_direction, str(d), f'{symbol!r} transition')) for d in DIRECTIONS}
                for symbol, by_direction in transitions.items()
            }
            return Pra15(transitions=grids, flavor=Flavor(document.get('flavor', 'weak')), **common)

        matrices = {symbol: _transition_from_json(matrix) for symbol, matrix in transitions.items()}
        if kind == 'pradh':
            return PraDh(rejecting=_field(document, 'rejecting', 'pradh automaton'), transitions=matrices, **common)
        if kind == 'prac':
            return PraC(transitions=matrices, **common)
    except PralibError:
        raise
    except (TypeError, ValueError) as e:
        raise FormatError(f'Bad automaton: {e}') from e

    raise FormatError(f'Unknown automaton type {kind!r}; expected "prac", "pradh" or "pra15"')


def dfa_to_json(dfa: Dfa) -> dict:
    return dict(
        states=list(dfa.states),
        alphabet=list(dfa.alphabet),
        initial=dfa.initial,
        accepting=[s for s in dfa.states if s in dfa.accepting],
        delta={str(state): row for state, row in dfa.delta.items()},
    )


def dfa_from_json(document: Any) -> Dfa:
    states = _field(document, 'states', 'DFA')
    delta = _field(document, 'delta', 'DFA')
    if not isinstance(states, list) or not isinstance(delta, dict):
        raise FormatError('"states" must be a list and "delta" an object')

    # Object keys are strings, whatever the state values are
    by_name = {str(state): state for state in states}
    try:
        rows = {
            by_name[key]: {symbol: by_name[str(target)] for symbol, target in row.items()}
            for key, row in delta.items()
        }
    except KeyError as e:
        raise FormatError(f'"delta" mentions unknown state {e}') from None
    except AttributeError:
        raise FormatError('Every row of "delta" must be an object') from None

    return Dfa(
        states,
        _field(document, 'alphabet', 'DFA'),
        rows,
        _field(document, 'initial', 'DFA'),
        _field(document, 'accepting', 'DFA'),
    )


def homomorphism_from_json(document: Any, target: Sequence[str]) -> HomomorphismSpec:
    images = _field(document, 'images', 'homomorphism')
    if not isinstance(images, dict) or not all(isinstance(v, str) for v in images.values()):
        raise FormatError('"images" must map letters to words')

    try:
        return HomomorphismSpec.from_mapping(images, document.get('target', target))
    except ValueError as e:
        raise FormatError(f'Bad homomorphism: {e}') from e


def complex_matrix_to_json(matrix: ComplexMatrix) -> dict:
    return matrix.to_json()


def complex_matrix_from_json(document: Any) -> ComplexMatrix:
    return ComplexMatrix.from_json(document)
