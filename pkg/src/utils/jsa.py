"""Joint spectral amplitudes for spontaneous parametric down-conversion.

f(w1, w2) ~ Phi(w1, w2) * alpha(w1 + w2), with the phase-matching function

    Phi_sinc  = sinc(A w1 + B w2 - C)
    Phi_gauss = exp(-gamma (A w1 + B w2 - C)^2)

and a Gaussian pulsed pump centered at 2*wbar. Internally everything is evaluated on
detunings nu = w - wbar; A w1 + B w2 = A nu1 + B nu2 + (A + B) wbar keeps the large
optical offset out of the per-sample arithmetic.

A CW pump is never discretized as a delta function: the pipeline reduces to the
1-D marginal g(nu) ~ Phi(wbar - nu, wbar + nu).
"""
import logging
from datetime import datetime
import numpy as np
from scipy.optimize import brentq

from src.models.errors import DegenerateSamplesError, InvalidRangeError
from src.models.model import (
    DEFAULT_GAMMA,
    ComplexSamples,
    CwMarginal,
    DispersionParams,
    FrequencyGrid,
    JointSpectralAmplitude,
    PhaseMatching,
    PhaseMatchingShape,
    PumpEnvelope,
    PumpKind,
)
from src.utils import freqgrid

logger = logging.getLogger(__name__)

DEFAULT_JSA_POINTS = 512
DEFAULT_JSA_WINDOW = 5
DEFAULT_CW_WINDOW = 8

def design_point_scale(sigma: float, gamma: float = DEFAULT_GAMMA) -> float:
    """A = 1/(sigma sqrt(2 gamma)): Gaussian phase matching then factorizes against the pump."""
    if not (sigma > 0 and gamma > 0):
        raise InvalidRangeError(f'sigma and gamma must be positive, got {sigma}, {gamma}')
    return 1.0 / (sigma * np.sqrt(2 * gamma))

def design_point_phase_matching(shape: PhaseMatchingShape, sigma: float, gamma: float = DEFAULT_GAMMA) -> PhaseMatching:
    scale = design_point_scale(sigma, gamma)
    return PhaseMatching(shape, a=scale, b=-scale, c=0.0, gamma=gamma)

def abc_from_dispersion(d: DispersionParams) -> tuple:
    half = d.length / 2
    a = half * (d.k1_prime - d.kp_prime)
    b = half * (d.k2_prime - d.kp_prime)
    c = half * (d.k_10 + d.k_20 - d.k_p0 + (d.k1_prime + d.k2_prime - 2 * d.kp_prime) * d.omega_bar)
    return a, b, c

def _profile(pm: PhaseMatching, argument: np.ndarray) -> np.ndarray:
    if pm.shape == PhaseMatchingShape.SINC:
        return np.sinc(argument / np.pi)
    return np.exp(-pm.gamma * argument ** 2)

def phase_matching_eval(pm: PhaseMatching, omega1, omega2):
    argument = pm.a * np.asarray(omega1, dtype=float) + pm.b * np.asarray(omega2, dtype=float) - pm.c
    values = _profile(pm, argument)
    return float(values) if np.ndim(values) == 0 else values

def phase_matching_fwhm(pm: PhaseMatching, intensity: bool = False) -> float:
    """Full width at half maximum of |Phi| (or |Phi|^2) in units of the argument A w1 + B w2 - C."""
    level = np.sqrt(0.5) if intensity else 0.5
    upper = np.pi if pm.shape == PhaseMatchingShape.SINC else 10.0 / np.sqrt(pm.gamma)
    half = brentq(lambda x: _profile(pm, np.asarray(x)) - level, 1e-12, upper, xtol=1e-14)
    return 2 * float(half)

def _detunings(grid: FrequencyGrid, omega_bar: float) -> np.ndarray:
    return grid.offsets + (grid.center - omega_bar)

def pump_eval(pump: PumpEnvelope, omega_sum):
    """alpha(w1 + w2) for a pulsed pump centered at 2*center."""
    assert pump.kind == PumpKind.PULSED, 'Invalid pump kind'
    detuning = np.asarray(omega_sum, dtype=float) - 2 * pump.center
    return np.exp(-detuning ** 2 / (2 * pump.width ** 2))

def default_jsa_grid(pump: PumpEnvelope, n_points: int = DEFAULT_JSA_POINTS, window: float = DEFAULT_JSA_WINDOW) -> FrequencyGrid:
    assert pump.kind == PumpKind.PULSED, 'Invalid pump kind'
    return freqgrid.centered_grid(pump.center, window * pump.width, n_points)

def _grid_norm(values: np.ndarray, weights1: np.ndarray, weights2: np.ndarray) -> float:
    norm = float(np.einsum('i,ij,j->', weights1, np.abs(values) ** 2, weights2))
    if not np.isfinite(norm) or norm <= 0:
        raise DegenerateSamplesError('Joint spectral amplitude vanishes on the grid; widen or recenter the grids')
    return norm

def _normalized(values: np.ndarray, weights1: np.ndarray, weights2: np.ndarray) -> np.ndarray:
    return values / np.sqrt(_grid_norm(values, weights1, weights2))

def profile_mass(pm: PhaseMatching) -> float:
    """int |Phi(x)|^2 dx over the whole line, x = A w1 + B w2 - C."""
    if pm.shape == PhaseMatchingShape.SINC:
        return float(np.pi)
    return float(np.sqrt(np.pi / (2 * pm.gamma)))

def jsa_mass(pm: PhaseMatching, pump: PumpEnvelope) -> float | None:
    """int int |Phi alpha|^2 dw1 dw2 over the plane; None when A == B leaves it unbounded."""
    if pm.a == pm.b:
        return None
    return profile_mass(pm) * pump.width * float(np.sqrt(np.pi)) / abs(pm.a - pm.b)

def _truncated_weight(grid_norm: float, mass: float | None) -> float:
    if mass is None:
        return 0.0
    return min(1.0, max(0.0, 1.0 - grid_norm / mass))

def build_jsa(pm: PhaseMatching, pump: PumpEnvelope, grid1: FrequencyGrid, grid2: FrequencyGrid) -> JointSpectralAmplitude:
    if pump.kind != PumpKind.PULSED:
        raise InvalidRangeError('build_jsa needs a pulsed pump; CW pumps reduce to build_cw_marginal')
    start_time = datetime.now()

    nu1 = _detunings(grid1, pump.center)[:, None]
    nu2 = _detunings(grid2, pump.center)[None, :]
    offset = (pm.a + pm.b) * pump.center - pm.c
    phase_matching = _profile(pm, pm.a * nu1 + pm.b * nu2 + offset)
    pump_amplitude = np.exp(-(nu1 + nu2) ** 2 / (2 * pump.width ** 2))
    values = phase_matching * pump_amplitude
    norm = _grid_norm(values, grid1.weights, grid2.weights)
    truncated_weight = _truncated_weight(norm, jsa_mass(pm, pump))

    end_time = datetime.now()
    logger.info('Total Time for building %dx%d JSA: %.3f seconds', grid1.n_points, grid2.n_points, (end_time - start_time).total_seconds())
    logger.debug('JSA weight outside the grids: %.3g', truncated_weight)
    return JointSpectralAmplitude(grid1, grid2, values / np.sqrt(norm), truncated_weight)

def jsa_from_factors(phi: ComplexSamples, varphi: ComplexSamples) -> JointSpectralAmplitude:
    """Separable JSA phi(w1) varphi(w2)."""
    values = np.outer(phi.values, varphi.values)
    return JointSpectralAmplitude(phi.grid, varphi.grid, _normalized(values, phi.grid.weights, varphi.grid.weights))

def _cw_offset(pm: PhaseMatching, omega_bar: float) -> float:
    return (pm.a + pm.b) * omega_bar - pm.c

def default_cw_grid(pm: PhaseMatching, omega_bar: float, n_points: int = freqgrid.DEFAULT_N_POINTS, window: float = DEFAULT_CW_WINDOW) -> FrequencyGrid:
    """Detuning grid symmetric about zero covering the peak of g +/- window widths."""
    slope = pm.b - pm.a
    if slope == 0:
        raise InvalidRangeError('Phase matching with A == B does not confine the CW marginal')
    if pm.shape == PhaseMatchingShape.SINC:
        width = 1.0 / abs(slope)
    else:
        width = 1.0 / (abs(slope) * np.sqrt(2 * pm.gamma))
    peak = -_cw_offset(pm, omega_bar) / slope
    return freqgrid.centered_grid(0.0, abs(peak) + window * width, n_points)

def build_cw_marginal(pm: PhaseMatching, omega_bar: float, grid: FrequencyGrid) -> CwMarginal:
    nu = grid.offsets + grid.center
    g = _profile(pm, (pm.b - pm.a) * nu + _cw_offset(pm, omega_bar)).astype(complex)
    norm = float(np.dot(grid.weights, np.abs(g) ** 2))
    if not np.isfinite(norm) or norm <= 0:
        raise DegenerateSamplesError('CW marginal vanishes on the grid')
    mass = None if pm.b == pm.a else profile_mass(pm) / abs(pm.b - pm.a)
    truncated_weight = _truncated_weight(norm, mass)
    return CwMarginal(ComplexSamples(grid, g / np.sqrt(norm)), omega_bar, truncated_weight)
