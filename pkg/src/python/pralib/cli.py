"""
Command-line interface: ``python -m pralib COMMAND ...``.

Data goes to stdout (or ``--out``), diagnostics to stderr. Exit status is 0 on success, 1 when validation fails or
an input is rejected, and 2 on usage errors.
"""

import argparse
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Optional, Sequence, TextIO, Tuple

from pralib.automata.pra15 import Pra15, simulate_pra15, validate_pra15
from pralib.automata.pra_c import PraC
from pralib.automata.pra_dh import PraDh
from pralib.automata.recognition import describe, interval_sweep, recognition_interval
from pralib.constructions.boosting import BoostPlan, boost
from pralib.constructions.closure import (
    BooleanOp, boolean_combine, complement, inverse_hom, left_quotient, normalize_probability,
)
from pralib.constructions.endmarkers import strip_dollar, strip_hash
from pralib.constructions.families import ln_family
from pralib.dsmat import format_rational, to_rational
from pralib.exceptions import PralibError
from pralib.markov import (
    DEFAULT_M_MAX, DEFAULT_MAX_ITER, DEFAULT_TOLERANCE, ProbeFlavor, ProbeWords, analyze_chain, convergence_probe,
    positive_diagonal_power, stationary_limit,
)
from pralib.prototype import PROTOTYPE_TOLERANCE, search_prototype, unistochastic_3x3
from pralib.regclass.classify import classify_star, prepare_probe
from pralib.regclass.dfa import build_dfa
from pralib import serialization
from pralib.utils import Timer, setup_basic_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


@dataclass
class ExperimentConfig:
    """Everything one invocation runs with, taken from the parsed arguments."""

    command: str
    inputs: Tuple[str, ...] = ()
    max_len: Optional[int] = None
    trials: Optional[int] = None
    seed: Optional[int] = None
    tolerance: Optional[float] = None
    copies: Optional[int] = None
    m_max: Optional[int] = None
    out: Optional[str] = None
    with_float: bool = False
    options: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        for name in ('max_len', 'trials', 'copies', 'm_max'):
            value = getattr(self, name)
            minimum = 0 if name == 'max_len' else 1
            if value is not None and value < minimum:
                raise ValueError(f'{name} must be at least {minimum}. {name}={value}')
        if self.tolerance is not None and not self.tolerance > 0:
            raise ValueError(f'tolerance must be positive. tolerance={self.tolerance}')

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> 'ExperimentConfig':
        known = dict(vars(args))
        command = known.pop('command')
        if known.get('construction'):
            command = f'{command} {known.pop("construction")}'

        inputs = tuple(known.pop(name) for name in ('file', 'file_a', 'file_b') if known.get(name) is not None)
        kwargs = {name: known.pop(name) for name in ('max_len', 'trials', 'seed', 'tolerance', 'copies', 'm_max')
                  if name in known}
        for name in ('file', 'file_a', 'file_b', 'verbose', 'handler'):
            known.pop(name, None)

        return cls(
            command=command,
            inputs=inputs,
            out=known.pop('out', None),
            with_float=known.pop('float', False),
            options=known,
            **kwargs,
        )


def _rational(text: str) -> Fraction:
    try:
        return to_rational(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _load_automaton(path: str):
    return serialization.automaton_from_json(serialization.load_json(path))


def _load_matrix(path: str, symbol: Optional[str]):
    document = serialization.load_json(path)
    if serialization.is_matrix_document(document):
        return serialization.matrix_from_json(document)

    automaton = serialization.automaton_from_json(document)
    if symbol is None:
        raise ValueError(f'{path} holds an automaton; choose one of its matrices with --symbol')
    return automaton.matrix(symbol)


def _cmd_validate(config: ExperimentConfig, out: TextIO) -> int:
    automaton = _load_automaton(config.inputs[0])
    report = validate_pra15(automaton) if isinstance(automaton, Pra15) else automaton.validate()

    print(report, file=out)
    return EXIT_OK if report.is_valid else EXIT_FAILURE


def _cmd_accept(config: ExperimentConfig, out: TextIO) -> int:
    automaton = _load_automaton(config.inputs[0])
    word = config.options['word']

    if isinstance(automaton, Pra15):
        raise ValueError('1.5-way automata are simulated; use simulate15')
    if isinstance(automaton, PraDh):
        outcome = automaton.decide(word)
        for name, value in outcome._asdict().items():
            print(f'{name} {format_rational(value)}', file=out)
    else:
        print(format_rational(automaton.accept_prob(word)), file=out)

    return EXIT_OK


def _cmd_interval(config: ExperimentConfig, out: TextIO) -> int:
    automaton = _load_automaton(config.inputs[0])
    if isinstance(automaton, Pra15):
        raise ValueError('Intervals are computed for PRA-C and PRA-DH automata only')

    dfa = build_dfa(config.options['regex'], automaton.alphabet).minimize()

    if config.options['csv']:
        def cell(value):
            return '' if value is None else format_rational(value)

        header = ['max_len', 'p1', 'p2'] + (['p1_float', 'p2_float'] if config.with_float else [])
        print(','.join(header), file=out)
        for interval in interval_sweep(automaton, dfa, config.max_len):
            row = [str(interval.max_len), cell(interval.p1), cell(interval.p2)]
            if config.with_float:
                row += ['' if v is None else f'{float(v):.12g}' for v in (interval.p1, interval.p2)]
            print(','.join(row), file=out)
        return EXIT_OK

    interval = recognition_interval(automaton, dfa, config.max_len)
    print(interval, file=out)
    logger.info(describe(interval))
    return EXIT_OK


def _construct(config: ExperimentConfig) -> PraC:
    options = config.options
    construction = config.command.split(' ', 1)[1]

    if construction == 'ln':
        return ln_family(options['n'])
    if construction in ('union', 'intersect'):
        op = BooleanOp.UNION if construction == 'union' else BooleanOp.INTERSECTION
        return boolean_combine(_load_automaton(config.inputs[0]), _load_automaton(config.inputs[1]), op)

    automaton = _load_automaton(config.inputs[0])
    if construction == 'boost':
        plan = BoostPlan.create(options['p1'], options['p2'], config.copies, options['threshold'])
        return boost(automaton, plan)
    if construction == 'normalize':
        return normalize_probability(automaton, options['p1'], options['p2'])
    if construction == 'complement':
        return complement(automaton)
    if construction == 'invhom':
        h = serialization.homomorphism_from_json(serialization.load_json(options['map']), automaton.alphabet)
        return inverse_hom(automaton, h)
    if construction == 'quotient':
        return left_quotient(automaton, options['word'])
    if construction == 'strip-dollar':
        return strip_dollar(automaton, options['m'])
    if construction == 'strip-hash':
        return strip_hash(automaton, options['eps'], config.copies, (options['p1'], options['p2']))

    raise ValueError(f'Unknown construction {construction!r}')


def _cmd_construct(config: ExperimentConfig, out: TextIO) -> int:
    automaton = _construct(config)
    logger.info(f'{config.command}: {automaton.size} states')

    out.write(serialization.dumps(serialization.automaton_to_json(automaton)))
    return EXIT_OK


def _cmd_classify(config: ExperimentConfig, out: TextIO) -> int:
    alphabet = config.options['alphabet']
    dfa = build_dfa(config.options['regex'], list(alphabet) if alphabet else None)
    witness = classify_star(dfa)

    if witness is None:
        print('not type (*)', file=out)
        return EXIT_OK

    if config.options['probe_words']:
        witness = prepare_probe(witness)
    print(witness.describe(), file=out)
    return EXIT_OK


def _cmd_markov(config: ExperimentConfig, out: TextIO) -> int:
    matrix = _load_matrix(config.inputs[0], config.options['symbol'])
    document = analyze_chain(matrix).to_json()

    if matrix.is_doubly_stochastic:
        document['positive_diagonal_power'] = positive_diagonal_power(matrix)
        limit = stationary_limit(
            matrix,
            DEFAULT_TOLERANCE if config.tolerance is None else config.tolerance,
            config.options['max_iter'],
        )
        document['stationary'] = dict(
            vector=limit.vector, iterations=limit.iterations, refusal=limit.refusal,
        )

    out.write(serialization.dumps(document))
    return EXIT_OK


def _cmd_probe(config: ExperimentConfig, out: TextIO) -> int:
    automaton = _load_automaton(config.inputs[0])
    options = config.options
    words = ProbeWords(options['omega'], options['x'], options['y'], options['z'])

    result = convergence_probe(automaton, words, config.m_max, ProbeFlavor(options['flavor']))
    logger.info(f'K={result.k}')
    out.write(result.to_csv(config.with_float))
    return EXIT_OK


def _cmd_prototype(config: ExperimentConfig, out: TextIO) -> int:
    matrix = _load_matrix(config.inputs[0], config.options['symbol'])
    tolerance = PROTOTYPE_TOLERANCE if config.tolerance is None else config.tolerance

    if matrix.order == 3 and not unistochastic_3x3(matrix).unistochastic:
        print('no prototype: not unistochastic', file=out)
        return EXIT_OK

    prototype = search_prototype(matrix, config.options['budget'], config.seed, tolerance)
    if prototype is None:
        print('no prototype found within the budget', file=out)
        return EXIT_OK

    out.write(serialization.dumps(serialization.complex_matrix_to_json(prototype)))
    return EXIT_OK


def _cmd_simulate15(config: ExperimentConfig, out: TextIO) -> int:
    automaton = _load_automaton(config.inputs[0])
    if not isinstance(automaton, Pra15):
        raise ValueError('simulate15 needs a "pra15" automaton')

    max_steps = config.options['max_steps']
    stats = simulate_pra15(automaton, config.options['word'], config.trials, max_steps, config.seed)
    out.write(serialization.dumps(stats.to_json()))
    return EXIT_OK


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f'must be positive: {text}')
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='pralib', description='Probabilistic reversible automata toolkit.')
    parser.add_argument('-v', '--verbose', action='store_true', help='Log debug details to stderr')
    parser.add_argument('-o', '--out', help='Write the output to this file instead of stdout')
    commands = parser.add_subparsers(dest='command', required=True, metavar='COMMAND')

    def command(name: str, handler: Callable, help: str) -> argparse.ArgumentParser:
        p = commands.add_parser(name, help=help)
        p.set_defaults(handler=handler)
        return p

    p = command('validate', _cmd_validate, 'Check an automaton file')
    p.add_argument('file')

    p = command('accept', _cmd_accept, 'Acceptance probability of a word')
    p.add_argument('file')
    p.add_argument('word')

    p = command('interval', _cmd_interval, 'Exact recognition interval up to a length')
    p.add_argument('file')
    p.add_argument('--regex', required=True, help='The language, as a regular expression')
    p.add_argument('--max-len', type=int, required=True)
    p.add_argument('--csv', action='store_true', help='One row per length horizon')
    p.add_argument('--float', action='store_true', help='Add decimal columns')

    p = command('construct', _cmd_construct, 'Build an automaton')
    constructions = p.add_subparsers(dest='construction', required=True, metavar='CONSTRUCTION')

    c = constructions.add_parser('ln', help='The automaton for a1*...an*')
    c.add_argument('--n', type=_positive_int, required=True)

    c = constructions.add_parser('boost', help='Majority vote over copies')
    c.add_argument('file')
    c.add_argument('--copies', type=_positive_int, required=True)
    c.add_argument('--p1', type=_rational, required=True)
    c.add_argument('--p2', type=_rational, required=True)
    c.add_argument('--threshold', type=_rational)

    c = constructions.add_parser('normalize', help='Normalize the interval to (1-p, p)')
    c.add_argument('file')
    c.add_argument('--p1', type=_rational, required=True)
    c.add_argument('--p2', type=_rational, required=True)

    for name in ('union', 'intersect'):
        c = constructions.add_parser(name, help=f'Boolean {name} of two automata')
        c.add_argument('file_a')
        c.add_argument('file_b')

    c = constructions.add_parser('complement', help='Swap accepting and rejecting states')
    c.add_argument('file')

    c = constructions.add_parser('invhom', help='Inverse homomorphic image')
    c.add_argument('file')
    c.add_argument('--map', required=True, help='Homomorphism JSON file')

    c = constructions.add_parser('quotient', help='Left quotient by a word')
    c.add_argument('file')
    c.add_argument('--word', required=True)

    c = constructions.add_parser('strip-dollar', help='Remove the "$" end-marker')
    c.add_argument('file')
    c.add_argument('--m', type=_positive_int, required=True)

    c = constructions.add_parser('strip-hash', help='Remove the "#" end-marker')
    c.add_argument('file')
    c.add_argument('--eps', type=_rational, required=True)
    c.add_argument('--copies', type=_positive_int, required=True)
    c.add_argument('--p1', type=_rational, required=True)
    c.add_argument('--p2', type=_rational, required=True)

    p = command('classify', _cmd_classify, 'Decide whether a regular language is of type (*)')
    p.add_argument('--regex', required=True)
    p.add_argument('--alphabet', help='Symbols of the alphabet, e.g. "ab"; defaults to those in the regex')
    p.add_argument('--probe-words', action='store_true', help='Also print the omega and z words for the probe')

    p = command('markov', _cmd_markov, 'Chain structure of a matrix')
    p.add_argument('file', help='Matrix JSON, or automaton JSON with --symbol')
    p.add_argument('--symbol')
    p.add_argument('--tolerance', type=float)
    p.add_argument('--max-iter', type=_positive_int, default=DEFAULT_MAX_ITER)

    p = command('probe', _cmd_probe, 'Acceptance gaps of the convergence probe, as CSV')
    p.add_argument('file')
    p.add_argument('--omega', default='')
    p.add_argument('--x', required=True)
    p.add_argument('--y', required=True)
    p.add_argument('--z', default='')
    p.add_argument('--m-max', type=_positive_int, default=DEFAULT_M_MAX)
    p.add_argument('--flavor', choices=[f.value for f in ProbeFlavor], default=ProbeFlavor.STAR_PRIME.value)
    p.add_argument('--float', action='store_true', help='Add a decimal column')

    p = command('prototype', _cmd_prototype, 'Look for a unitary prototype of a matrix')
    p.add_argument('file', help='Matrix JSON, or automaton JSON with --symbol')
    p.add_argument('--symbol')
    p.add_argument('--budget', type=_positive_int, default=50, help='Random restarts')
    p.add_argument('--seed', type=int, required=True)
    p.add_argument('--tolerance', type=float)

    p = command('simulate15', _cmd_simulate15, 'Monte Carlo runs of a 1.5-way automaton')
    p.add_argument('file')
    p.add_argument('word')
    p.add_argument('--trials', type=_positive_int, required=True)
    p.add_argument('--max-steps', type=_positive_int, required=True)
    p.add_argument('--seed', type=int, required=True)

    return parser


def run_cli(argv: Sequence[str] = None, stdout: TextIO = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    setup_basic_logging(stream=sys.stderr, level=logging.DEBUG if args.verbose else logging.INFO, force=True)
    handler = args.handler

    try:
        config = ExperimentConfig.from_args(args)
    except ValueError as e:
        print(f'pralib: error: {e}', file=sys.stderr)
        return EXIT_USAGE

    try:
        with Timer() as timer:
            if config.out:
                with open(config.out, 'w', encoding='utf-8') as f:
                    status = handler(config, f)
            else:
                status = handler(config, stdout or sys.stdout)
        logger.debug(f'{config.command} finished with status {status}; {timer}')
        return status
    except (PralibError, ValueError, OSError) as e:
        print(f'pralib: error: {e}', file=sys.stderr)
        return EXIT_FAILURE


def main() -> None:
    sys.exit(run_cli())
