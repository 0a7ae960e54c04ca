from fractions import Fraction
from typing import Any, Dict, Iterable, Mapping, NamedTuple, Sequence, Tuple

from pralib.automata import Endmarkers, ValidationReport, state_indices
from pralib.automata.pra_c import PraC
from pralib.dsmat import Distribution, ZERO, mat_vec


class DhOutcome(NamedTuple):
    accept: Fraction
    reject: Fraction
    nonhalt: Fraction


class PraDh(PraC):
    """
    Decide-and-halt variant: after every symbol, the mass that entered an accepting or rejecting state halts and is
    removed from the running distribution; only the non-halting mass keeps reading.
    """

    def __init__(
            self,
            states: Sequence[str],
            alphabet: Sequence[str],
            initial: str,
            accepting: Iterable[str],
            rejecting: Iterable[str],
            transitions: Mapping[str, Any],
            endmarkers: Endmarkers = Endmarkers.BOTH,
    ):
        super().__init__(states, alphabet, initial, accepting, transitions, endmarkers)
        self._rejecting = state_indices(self.states, rejecting, 'rejecting')

    @property
    def rejecting(self) -> frozenset:
        return self._rejecting

    @property
    def non_halting(self) -> frozenset:
        return frozenset(range(self.size)) - self.accepting - self._rejecting

    def validate(self) -> ValidationReport:
        report = super().validate()

        for i in sorted(self.accepting & self._rejecting):
            report.add(f'state {self.states[i]!r} is both accepting and rejecting', row=i)

        return report

    def decide(self, word: str) -> DhOutcome:
        weights = Distribution.point(self.size, self.initial).weights
        accept = reject = ZERO

        for symbol in self.tape(word):
            weights = list(mat_vec(self.transitions[symbol], weights))

            for i in self.accepting:
                accept += weights[i]
                weights[i] = ZERO
            for i in self._rejecting:
                reject += weights[i]
                weights[i] = ZERO

        return DhOutcome(accept, reject, sum(weights, ZERO))

    def accept_prob(self, word: str) -> Fraction:
        return self.decide(word).accept

    def init_kwargs(self) -> Dict[str, Any]:
        kwargs = super().init_kwargs()
        kwargs['rejecting'] = self.names(self._rejecting)
        return kwargs

    def _key(self) -> Tuple:
        return super()._key() + (self._rejecting,)


def accept_prob_dh(automaton: PraDh, word: str) -> DhOutcome:
    return automaton.decide(word)
