from enum import Enum
from dataclasses import dataclass, field
from typing import Tuple

class Port(Enum):
    A = 'a'
    B = 'b'

@dataclass(frozen=True)
class ModeLabel:
    """A creation operator label: beam-splitter port plus an opaque distinguishing tag."""
    port: Port
    tag: str

    @property
    def sort_key(self) -> Tuple[str, str]:
        return (self.port.value, self.tag)

    def __str__(self) -> str:
        return f'{self.port.value}†_{self.tag}'

@dataclass(frozen=True)
class OperatorString:
    factors: Tuple[ModeLabel, ...]
    amplitude: complex = 1.0

    @property
    def photon_number(self) -> int:
        return len(self.factors)

    def occupation(self, port: Port) -> int:
        return sum(1 for factor in self.factors if factor.port == port)

@dataclass(frozen=True)
class FockState:
    terms: Tuple[OperatorString, ...] = field(default_factory=tuple)

    @property
    def photon_numbers(self) -> set:
        return {term.photon_number for term in self.terms}

    def __str__(self) -> str:
        if not self.terms:
            return '0'
        return ' + '.join(
            f'({term.amplitude:.6g}) ' + ' '.join(str(factor) for factor in term.factors) + '|0⟩'
            for term in self.terms
        )

ENUMS = set((
    Port,
))

MODELS = set((
    ModeLabel,
    OperatorString,
    FockState,
))
