"""Two-port bosonic operator algebra for discrete-mode HOM interference.

States are sums of creation-operator strings acting on vacuum. The beam splitter
substitutes every creation operator

    a+ -> sqrt(1 - eta) a+ + sqrt(eta) b+
    b+ -> sqrt(eta) a+ - sqrt(1 - eta) b+

and like terms are merged after sorting factors by (port, tag). Bosonic operators
commute, so the sorted factor tuple is the term's identity and cancellation is exact.
"""
import collections
import itertools
import math
from typing import Dict, Mapping, Tuple
import numpy as np

from src.models.errors import InvalidRangeError, PhotonNumberError
from src.models.fock_model import FockState, ModeLabel, OperatorString, Port

def canonicalize(terms) -> FockState:
    amplitudes = collections.OrderedDict()
    for term in terms:
        factors = tuple(sorted(term.factors, key=lambda factor: factor.sort_key))
        amplitudes[factors] = amplitudes.get(factors, 0j) + complex(term.amplitude)
    ordered = sorted(amplitudes.items(), key=lambda item: [factor.sort_key for factor in item[0]])
    return FockState(tuple(
        OperatorString(factors, amplitude)
        for factors, amplitude in ordered
        if amplitude != 0
    ))

def input_state(tag_a: str, tag_b: str) -> FockState:
    return canonicalize([OperatorString((ModeLabel(Port.A, str(tag_a)), ModeLabel(Port.B, str(tag_b))), 1.0)])

def superposed_input_state(pol_a: Mapping[str, complex], pol_b: Mapping[str, complex]) -> FockState:
    """Input with each photon in a superposition of tags, e.g. {'H': alpha, 'V': beta}."""
    norm_a = math.sqrt(sum(abs(value) ** 2 for value in pol_a.values()))
    norm_b = math.sqrt(sum(abs(value) ** 2 for value in pol_b.values()))
    if norm_a == 0 or norm_b == 0:
        raise InvalidRangeError('Tag superpositions must have non-zero amplitude')
    return canonicalize([
        OperatorString(
            (ModeLabel(Port.A, str(tag_a)), ModeLabel(Port.B, str(tag_b))),
            complex(alpha) * complex(beta) / (norm_a * norm_b),
        )
        for (tag_a, alpha), (tag_b, beta) in itertools.product(pol_a.items(), pol_b.items())
    ])

def _substitutions(factor: ModeLabel, eta: float) -> Tuple[Tuple[float, ModeLabel], ...]:
    transmit, reflect = math.sqrt(1 - eta), math.sqrt(eta)
    to_a = ModeLabel(Port.A, factor.tag)
    to_b = ModeLabel(Port.B, factor.tag)
    if factor.port == Port.A:
        return ((transmit, to_a), (reflect, to_b))
    return ((reflect, to_a), (-transmit, to_b))

def apply_beamsplitter(state: FockState, eta: float) -> FockState:
    if not 0 <= eta <= 1:
        raise InvalidRangeError(f'Reflectivity eta must lie in [0, 1], got {eta}')
    expanded = []
    for term in state.terms:
        for choice in itertools.product(*(_substitutions(factor, eta) for factor in term.factors)):
            amplitude = term.amplitude
            for coefficient, _ in choice:
                amplitude *= coefficient
            expanded.append(OperatorString(tuple(label for _, label in choice), amplitude))
    return canonicalize(expanded)

def _occupation_factor(term: OperatorString) -> int:
    """Product of n! over repeated identical factors: (a+)^n|0> = sqrt(n!)|n>."""
    return math.prod(math.factorial(count) for count in collections.Counter(term.factors).values())

def norm(state: FockState) -> float:
    return float(sum(abs(term.amplitude) ** 2 * _occupation_factor(term) for term in state.terms))

def output_distribution(state: FockState) -> Dict[Tuple[int, int], float]:
    """Probability of each (n_a, n_b) photon-number pattern."""
    distribution = collections.defaultdict(float)
    for term in state.terms:
        pattern = (term.occupation(Port.A), term.occupation(Port.B))
        distribution[pattern] += abs(term.amplitude) ** 2 * _occupation_factor(term)
    return dict(sorted(distribution.items(), reverse=True))

def coincidence_probability(state: FockState) -> float:
    if state.photon_numbers - {2}:
        raise PhotonNumberError(f'Coincidence readout needs a two-photon state, got photon numbers {sorted(state.photon_numbers)}')
    return output_distribution(state).get((1, 1), 0.0)

def closed_form_probability(eta: float, distinguishable: bool) -> float:
    if distinguishable:
        return eta ** 2 + (1 - eta) ** 2
    return (2 * eta - 1) ** 2

def hom_probabilities(eta: float, tags: Tuple[str, str]) -> Tuple[FockState, float]:
    state = apply_beamsplitter(input_state(*tags), eta)
    probability = coincidence_probability(state)
    assert np.isclose(norm(state), 1.0, atol=1e-12), 'Beam splitter output is not normalized'
    return state, probability
