"""Coincidence-probability engines for a balanced beam splitter and the dip-curve layer.

Every engine reduces to overlaps O(tau) = int conj(x(w)) y(w) exp(-i w tau) dw on the
trapezoid grid. Second integrals that are complex conjugates of the first are never
evaluated separately: p = 1/2 - |O|^2 / 2.
"""
import logging
import warnings
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime
from typing import Callable, Sequence
import numpy as np

from src.models.errors import GridMismatchError, InvalidRangeError, NumericalContractError
from src.models.model import (
    ComplexSamples,
    CwMarginal,
    DipCurve,
    JointSpectralAmplitude,
    PhaseMatching,
    PhaseMatchingShape,
    SchmidtDecomposition,
    SpectralAmplitude,
    SpectralEnsemble,
    Visibility,
    FrequencyGrid,
)
from src.utils import freqgrid, spectra

logger = logging.getLogger(__name__)

PROBABILITY_TOLERANCE = 1e-6
IMAGINARY_TOLERANCE = 1e-8
EDGE_FRACTION = 0.05
ASYMPTOTE_TOLERANCE = 1e-2

def truncation_slack(truncated_weight: float) -> float:
    """How far above 1/2 p may drift when a share of |f|^2 is cut off by the grids."""
    if truncated_weight >= 1:
        return float('inf')
    return 0.5 * truncated_weight / (1 - truncated_weight)

def _checked(p: float, upper: float = 0.5, slack: float = 0.0) -> float:
    if not np.isfinite(p) or not -PROBABILITY_TOLERANCE <= p <= upper + PROBABILITY_TOLERANCE + slack:
        raise NumericalContractError(f'Coincidence probability {p!r} outside [0, {upper}]')
    return float(p)

def _real(value: complex) -> float:
    if abs(value.imag) > IMAGINARY_TOLERANCE:
        raise NumericalContractError(f'Exchange integral has imaginary part {value.imag:.3g}')
    return value.real

def overlap(phi: ComplexSamples, varphi: ComplexSamples, tau: float) -> complex:
    """J(tau) = int conj(phi) varphi exp(-i w tau) dw."""
    if phi.grid != varphi.grid:
        raise GridMismatchError('Overlap needs both amplitudes on one grid')
    return freqgrid.fourier_integral(ComplexSamples(phi.grid, np.conj(phi.values) * varphi.values), tau, -1)

def p_separable_samples(phi: ComplexSamples, varphi: ComplexSamples, tau: float) -> float:
    return _checked(0.5 - 0.5 * abs(overlap(phi, varphi, tau)) ** 2)

def p_separable(phi: SpectralAmplitude, varphi: SpectralAmplitude, tau: float, grid: FrequencyGrid) -> float:
    return p_separable_samples(spectra.sample(phi, grid), spectra.sample(varphi, grid), tau)

def p_entangled(jsa: JointSpectralAmplitude, tau: float, upper: float = 0.5) -> float:
    if jsa.grid1 != jsa.grid2:
        raise GridMismatchError('Exchanging w1 and w2 needs identical grids on both axes')
    grid = jsa.grid1
    kernel_minus = freqgrid.fourier_weights(grid, tau, -1)
    kernel_plus = freqgrid.fourier_weights(grid, tau, +1)
    exchange = np.einsum('i,ij,ji,j->', kernel_minus, np.conj(jsa.values), jsa.values, kernel_plus)
    return _checked(0.5 - 0.5 * _real(complex(exchange)), upper, truncation_slack(jsa.truncated_weight))

def _mode_matrix(modes: Sequence[ComplexSamples]) -> np.ndarray:
    return np.array([mode.values for mode in modes])

def _overlap_matrix(left: np.ndarray, right: np.ndarray, grid: FrequencyGrid, tau: float, sign: int) -> np.ndarray:
    """O[k, k'] = int conj(left_k) right_k' exp(i sign w tau) dw."""
    return (np.conj(left) * freqgrid.fourier_weights(grid, tau, sign)) @ right.T

def p_entangled_schmidt(decomposition: SchmidtDecomposition, tau: float, upper: float = 0.5) -> float:
    if decomposition.grid1 != decomposition.grid2:
        raise GridMismatchError('Schmidt modes of both photons must share one grid')
    grid = decomposition.grid1
    modes1 = _mode_matrix(decomposition.modes1)
    modes2 = _mode_matrix(decomposition.modes2)
    first = _overlap_matrix(modes1, modes2, grid, tau, -1)
    second = _overlap_matrix(modes2, modes1, grid, tau, +1)
    u = decomposition.coefficients
    exchange = complex(u @ (first * second) @ u)
    slack = truncation_slack(decomposition.truncated_weight) + truncation_error_bound(decomposition)
    return _checked(0.5 - 0.5 * _real(exchange), upper, slack)

def p_cw(marginal: CwMarginal, tau: float, upper: float = 0.5) -> float:
    grid = marginal.g.grid
    if not freqgrid.is_symmetric(grid):
        raise GridMismatchError('CW marginal grid must be symmetric about zero detuning')
    g = marginal.g.values
    integrand = ComplexSamples(grid, np.conj(g[::-1]) * g)
    exchange = freqgrid.fourier_integral(integrand, 2 * tau, +1)
    return _checked(0.5 - 0.5 * _real(exchange), upper, truncation_slack(marginal.truncated_weight))

def p_mixed(ensemble_a: SpectralEnsemble, ensemble_b: SpectralEnsemble, tau: float) -> float:
    grid = ensemble_a.grid
    if any(mode.grid != grid for mode in list(ensemble_a.modes) + list(ensemble_b.modes)):
        raise GridMismatchError('Ensemble modes must share one grid')
    cross = _overlap_matrix(_mode_matrix(ensemble_a.modes), _mode_matrix(ensemble_b.modes), grid, tau, -1)
    return _checked(0.5 - 0.5 * float(ensemble_a.weights @ np.abs(cross) ** 2 @ ensemble_b.weights))

def cw_dip_closed_form(pm: PhaseMatching, tau):
    """Analytic CW dip for B = -A and a centered C."""
    if pm.b != -pm.a or pm.c != 0:
        raise InvalidRangeError('The closed-form CW dip needs B == -A and C == 0')
    scale = abs(pm.a)
    tau = np.asarray(tau, dtype=float)
    if pm.shape == PhaseMatchingShape.SINC:
        p = 0.5 - 0.5 * np.maximum(0.0, 1 - np.abs(tau) / (2 * scale))
    else:
        p = 0.5 - 0.5 * np.exp(-tau ** 2 / (8 * pm.gamma * scale ** 2))
    return float(p) if p.ndim == 0 else p

def truncation_error_bound(decomposition: SchmidtDecomposition) -> float:
    """Upper bound on |p_truncated - p_full| from the discarded Schmidt weight."""
    d = decomposition.discarded_weight
    return float(np.sqrt(d * (1 - d)) + d)

def dip_curve(
    probability: Callable[[float], float],
    tau_min: float,
    tau_max: float,
    n_tau: int,
    descriptor: str = '',
    workers: int = 1,
) -> DipCurve:
    if n_tau < 2:
        raise InvalidRangeError(f'n_tau must be at least 2, got {n_tau}')
    if not tau_max > tau_min:
        raise InvalidRangeError(f'tau_max ({tau_max}) must exceed tau_min ({tau_min})')
    start_time = datetime.now()

    taus = np.linspace(tau_min, tau_max, n_tau)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            probabilities = list(executor.map(probability, taus))
    else:
        probabilities = [probability(tau) for tau in taus]

    end_time = datetime.now()
    logger.info('Total Time for sweeping %d delays: %.3f seconds', n_tau, (end_time - start_time).total_seconds())
    return DipCurve(taus, probabilities, descriptor)

def visibility(curve: DipCurve, edge_fraction: float = EDGE_FRACTION) -> Visibility:
    probabilities = curve.probabilities
    edge = max(1, int(round(edge_fraction * len(probabilities) / 2)))
    p_max = float(np.mean(np.concatenate((probabilities[:edge], probabilities[-edge:]))))
    p_min = float(np.min(probabilities))
    if not p_max > 0:
        raise NumericalContractError(f'Asymptotic probability estimate {p_max} is not positive')
    if abs(p_max - 0.5) > ASYMPTOTE_TOLERANCE:
        message = f'Delay window too narrow: asymptotic estimate p_max={p_max:.4g} differs from 1/2'
        logger.warning(message)
        warnings.warn(message, UserWarning, stacklevel=2)
    return Visibility(p_max, p_min, (p_max - p_min) / p_max)
