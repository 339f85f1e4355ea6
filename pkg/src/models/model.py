from enum import Enum
from dataclasses import dataclass, field, fields
from functools import cached_property
from typing import List, Dict, Any
import numpy as np

from src.models.errors import InvalidRangeError, GridMismatchError

class SpectralShape(Enum):
    GAUSSIAN = 'gaussian'
    SINC = 'sinc'
    HERMITE_GAUSS = 'hermite_gauss'
    TABULATED = 'tabulated'

class PhaseMatchingShape(Enum):
    SINC = 'sinc'
    GAUSSIAN = 'gaussian'

class PumpKind(Enum):
    PULSED = 'pulsed'
    CW = 'cw'

class ScenarioKind(Enum):
    FOCK = 'fock'
    SEPARABLE = 'separable'
    ENTANGLED_PULSED = 'entangled_pulsed'
    ENTANGLED_CW = 'entangled_cw'
    MIXED_INDEPENDENT = 'mixed_independent'

# Width-matching constant between sinc and Gaussian profiles
DEFAULT_GAMMA = 0.193

def _read_only(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values

class Record:
    _json_exclude: tuple = ()

    def to_json(self) -> dict:
        return {
            _field.name: _to_json(getattr(self, _field.name))
            for _field in fields(self)
            if _field.name not in self._json_exclude
        }

def _to_json(attribute: Any) -> Any:
    if isinstance(attribute, Record):
        return attribute.to_json()
    if isinstance(attribute, Enum):
        return attribute.value
    if isinstance(attribute, np.ndarray):
        return [_to_json(value) for value in attribute.tolist()]
    if isinstance(attribute, (list, tuple)):
        return [_to_json(value) for value in attribute]
    if isinstance(attribute, dict):
        return {key: _to_json(value) for key, value in attribute.items()}
    if isinstance(attribute, complex):
        return [attribute.real, attribute.imag]
    if isinstance(attribute, np.generic):
        return _to_json(attribute.item())
    return attribute

@dataclass(frozen=True)
class FrequencyGrid(Record):
    """Uniform angular-frequency grid (rad/s) with composite trapezoid weights."""
    omega_min: float
    omega_max: float
    n_points: int

    def __post_init__(self) -> None:
        if not np.isfinite(self.omega_min) or not np.isfinite(self.omega_max):
            raise InvalidRangeError('Grid bounds must be finite')
        if not self.omega_max > self.omega_min:
            raise InvalidRangeError(f'omega_max ({self.omega_max}) must exceed omega_min ({self.omega_min})')
        if int(self.n_points) != self.n_points or self.n_points < 3:
            raise InvalidRangeError(f'n_points must be an integer >= 3, got {self.n_points}')
        object.__setattr__(self, 'omega_min', float(self.omega_min))
        object.__setattr__(self, 'omega_max', float(self.omega_max))
        object.__setattr__(self, 'n_points', int(self.n_points))

    @property
    def spacing(self) -> float:
        return (self.omega_max - self.omega_min) / (self.n_points - 1)

    @property
    def center(self) -> float:
        return 0.5 * (self.omega_min + self.omega_max)

    @cached_property
    def points(self) -> np.ndarray:
        return _read_only(self.omega_min + np.arange(self.n_points) * self.spacing)

    @cached_property
    def offsets(self) -> np.ndarray:
        """Points measured from the grid center; avoids cancellation at optical frequencies."""
        return _read_only((np.arange(self.n_points) - 0.5 * (self.n_points - 1)) * self.spacing)

    @cached_property
    def weights(self) -> np.ndarray:
        weights = np.full(self.n_points, self.spacing)
        weights[0] *= 0.5
        weights[-1] *= 0.5
        return _read_only(weights)

@dataclass(frozen=True, eq=False)
class ComplexSamples(Record):
    grid: FrequencyGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=complex).reshape(-1)
        if values.shape[0] != self.grid.n_points:
            raise GridMismatchError(f'Expected {self.grid.n_points} samples, got {values.shape[0]}')
        object.__setattr__(self, 'values', _read_only(values))

@dataclass(frozen=True, eq=False)
class SpectralAmplitude(Record):
    """Single-photon spectral amplitude.

    width is sigma (rad/s) for GAUSSIAN and HERMITE_GAUSS shapes and the scale A (s)
    for SINC. TABULATED amplitudes carry their samples instead.
    """
    shape: SpectralShape
    center: float = 0.0
    width: float = 1.0
    order: int = 0
    samples: ComplexSamples | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.shape, SpectralShape):
            object.__setattr__(self, 'shape', SpectralShape(self.shape))
        if self.shape == SpectralShape.TABULATED:
            if self.samples is None:
                raise InvalidRangeError('Tabulated spectral amplitude requires samples')
            return
        if not self.width > 0:
            raise InvalidRangeError(f'Spectral width must be positive, got {self.width}')
        if self.order < 0:
            raise InvalidRangeError(f'Hermite-Gauss order must be non-negative, got {self.order}')

@dataclass(frozen=True)
class PhaseMatching(Record):
    shape: PhaseMatchingShape
    a: float
    b: float
    c: float = 0.0
    gamma: float = DEFAULT_GAMMA

    def __post_init__(self) -> None:
        if not isinstance(self.shape, PhaseMatchingShape):
            object.__setattr__(self, 'shape', PhaseMatchingShape(self.shape))
        if self.shape == PhaseMatchingShape.GAUSSIAN and not self.gamma > 0:
            raise InvalidRangeError(f'gamma must be positive, got {self.gamma}')

@dataclass(frozen=True)
class PumpEnvelope(Record):
    """Pump spectral envelope. center is the photon center frequency; the pump sits at 2*center."""
    kind: PumpKind
    center: float
    width: float | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.kind, PumpKind):
            object.__setattr__(self, 'kind', PumpKind(self.kind))
        if self.kind == PumpKind.PULSED and not (self.width is not None and self.width > 0):
            raise InvalidRangeError(f'Pulsed pump width must be positive, got {self.width}')

@dataclass(frozen=True)
class DispersionParams(Record):
    length: float
    k_p0: float
    k_10: float
    k_20: float
    kp_prime: float
    k1_prime: float
    k2_prime: float
    omega_bar: float

    def __post_init__(self) -> None:
        if not self.length > 0:
            raise InvalidRangeError(f'Crystal length must be positive, got {self.length}')

@dataclass(frozen=True, eq=False)
class JointSpectralAmplitude(Record):
    grid1: FrequencyGrid
    grid2: FrequencyGrid
    values: np.ndarray
    # share of the untruncated |f|^2 lying outside the grids
    truncated_weight: float = 0.0

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=complex)
        if values.shape != (self.grid1.n_points, self.grid2.n_points):
            raise GridMismatchError(
                f'JSA shape {values.shape} does not match grids ({self.grid1.n_points}, {self.grid2.n_points})'
            )
        object.__setattr__(self, 'values', _read_only(values))

    @property
    def norm(self) -> float:
        return float(np.einsum('i,ij,j->', self.grid1.weights, np.abs(self.values) ** 2, self.grid2.weights))

@dataclass(frozen=True, eq=False)
class CwMarginal(Record):
    """g(nu) over detuning nu = omega - omega_bar (rad/s)."""
    g: ComplexSamples
    omega_bar: float
    truncated_weight: float = 0.0

@dataclass(frozen=True, eq=False)
class SchmidtDecomposition(Record):
    coefficients: np.ndarray
    modes1: List[ComplexSamples]
    modes2: List[ComplexSamples]
    truncation_tol: float
    discarded_weight: float = 0.0
    reconstruction_error: float = 0.0
    truncated_weight: float = 0.0

    def __post_init__(self) -> None:
        coefficients = np.array(self.coefficients, dtype=float)
        assert len(coefficients) == len(self.modes1) == len(self.modes2), 'Invalid Schmidt mode count'
        object.__setattr__(self, 'coefficients', _read_only(coefficients))

    @property
    def rank(self) -> int:
        return len(self.coefficients)

    @property
    def grid1(self) -> FrequencyGrid:
        return self.modes1[0].grid

    @property
    def grid2(self) -> FrequencyGrid:
        return self.modes2[0].grid

@dataclass(frozen=True, eq=False)
class SpectralEnsemble(Record):
    weights: np.ndarray
    modes: List[ComplexSamples]

    def __post_init__(self) -> None:
        weights = np.array(self.weights, dtype=float)
        assert len(weights) == len(self.modes) and len(weights) > 0, 'Invalid ensemble size'
        object.__setattr__(self, 'weights', _read_only(weights))

    @property
    def grid(self) -> FrequencyGrid:
        return self.modes[0].grid

@dataclass(frozen=True, eq=False)
class DipCurve(Record):
    taus: np.ndarray
    probabilities: np.ndarray
    scenario_descriptor: str = ''

    def __post_init__(self) -> None:
        taus = np.array(self.taus, dtype=float)
        probabilities = np.array(self.probabilities, dtype=float)
        if taus.shape != probabilities.shape or taus.ndim != 1:
            raise GridMismatchError('taus and probabilities must be 1-D arrays of equal length')
        if len(taus) > 1 and not np.all(np.diff(taus) > 0):
            raise InvalidRangeError('taus must be strictly increasing')
        object.__setattr__(self, 'taus', _read_only(taus))
        object.__setattr__(self, 'probabilities', _read_only(probabilities))

@dataclass(frozen=True)
class Visibility(Record):
    p_max: float
    p_min: float
    value: float

@dataclass
class Sweep(Record):
    tau_min: float = -10e-12
    tau_max: float = 10e-12
    n_tau: int = 201

@dataclass
class GridOverrides(Record):
    n_points: int | None = None
    window: float | None = None

@dataclass
class Scenario(Record):
    kind: ScenarioKind
    parameters: Dict[str, Any] = field(default_factory=dict)
    sweep: Sweep = field(default_factory=Sweep)
    grid: GridOverrides = field(default_factory=GridOverrides)

@dataclass
class RunSummary(Record):
    kind: ScenarioKind
    parameters: Dict[str, Any] = field(default_factory=dict)
    p_min: float | None = None
    p_max: float | None = None
    visibility: float | None = None
    probability: float | None = None
    purity: float | None = None
    schmidt_number: float | None = None
    schmidt_coefficients: List[float] | None = None
    wall_time: float = 0.0

    # wall_time varies run to run; summary.json must stay byte-identical
    _json_exclude = ('wall_time',)

    def to_json(self) -> dict:
        return {key: value for key, value in super().to_json().items() if value is not None}

ENUMS = set((
    SpectralShape,
    PhaseMatchingShape,
    PumpKind,
    ScenarioKind,
))

MODELS = set((
    FrequencyGrid,
    ComplexSamples,
    SpectralAmplitude,
    PhaseMatching,
    PumpEnvelope,
    DispersionParams,
    JointSpectralAmplitude,
    CwMarginal,
    SchmidtDecomposition,
    SpectralEnsemble,
    DipCurve,
    Visibility,
    Sweep,
    GridOverrides,
    Scenario,
    RunSummary,
))
