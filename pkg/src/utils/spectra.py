"""Single-photon spectral amplitudes and their closed-form HOM dips.

Built-in shapes are unit-norm on the real line:
 - gaussian:      pi^(-1/4) sigma^(-1/2) exp(-(w - wbar)^2 / (2 sigma^2))
 - sinc:          sqrt(A/pi) sinc(A (w - wbar)), sinc(x) = sin(x)/x
 - hermite_gauss: normalized Hermite-Gauss function of the given order
Tabulated amplitudes are interpolated onto the evaluation grid and renormalized.
"""
import logging
import warnings
import numpy as np
from scipy.special import eval_hermite, gammaln

from src.models.errors import DegenerateSamplesError, InvalidRangeError
from src.models.model import (
    FrequencyGrid,
    ComplexSamples,
    SpectralAmplitude,
    SpectralShape,
)
from src.utils import freqgrid

logger = logging.getLogger(__name__)

DEFAULT_WINDOW = 8
COVERAGE_WIDTHS = 6
NORM_TOLERANCE = 1e-6

def gaussian(center: float, sigma: float) -> SpectralAmplitude:
    return SpectralAmplitude(SpectralShape.GAUSSIAN, center=center, width=sigma)

def sinc(center: float, scale: float) -> SpectralAmplitude:
    return SpectralAmplitude(SpectralShape.SINC, center=center, width=scale)

def hermite_gauss(center: float, sigma: float, order: int) -> SpectralAmplitude:
    return SpectralAmplitude(SpectralShape.HERMITE_GAUSS, center=center, width=sigma, order=order)

def tabulated(samples: ComplexSamples) -> SpectralAmplitude:
    return SpectralAmplitude(SpectralShape.TABULATED, center=samples.grid.center, samples=samples)

def _profile(sa: SpectralAmplitude, detuning: np.ndarray) -> np.ndarray:
    if sa.shape == SpectralShape.GAUSSIAN:
        return np.pi ** -0.25 / np.sqrt(sa.width) * np.exp(-detuning ** 2 / (2 * sa.width ** 2))
    if sa.shape == SpectralShape.SINC:
        # numpy's sinc is sin(pi x)/(pi x)
        return np.sqrt(sa.width / np.pi) * np.sinc(sa.width * detuning / np.pi)
    if sa.shape == SpectralShape.HERMITE_GAUSS:
        x = detuning / sa.width
        log_norm = 0.5 * (sa.order * np.log(2.0) + gammaln(sa.order + 1) + 0.5 * np.log(np.pi) + np.log(sa.width))
        return eval_hermite(sa.order, x) * np.exp(-x ** 2 / 2 - log_norm)
    raise ValueError(f'Invalid analytic shape {sa.shape}')

def _interpolate(sa: SpectralAmplitude, omega: np.ndarray) -> np.ndarray:
    source = sa.samples
    real = np.interp(omega, source.grid.points, source.values.real, left=0.0, right=0.0)
    imag = np.interp(omega, source.grid.points, source.values.imag, left=0.0, right=0.0)
    return real + 1j * imag

def evaluate(sa: SpectralAmplitude, omega):
    omega_array = np.asarray(omega, dtype=float)
    if sa.shape == SpectralShape.TABULATED:
        values = _interpolate(sa, omega_array)
    else:
        values = _profile(sa, omega_array - sa.center).astype(complex)
    return complex(values) if values.ndim == 0 else values

def extent(sa: SpectralAmplitude) -> float:
    """One characteristic width in rad/s."""
    if sa.shape == SpectralShape.SINC:
        return 1.0 / sa.width
    if sa.shape == SpectralShape.HERMITE_GAUSS:
        return sa.width * max(1.0, np.sqrt(2 * sa.order + 1))
    if sa.shape == SpectralShape.GAUSSIAN:
        return sa.width
    return 0.5 * (sa.samples.grid.omega_max - sa.samples.grid.omega_min)

def default_grid(*amplitudes: SpectralAmplitude, n_points: int = freqgrid.DEFAULT_N_POINTS, window: float = DEFAULT_WINDOW) -> FrequencyGrid:
    """Smallest grid covering center +/- window widths of every amplitude."""
    assert len(amplitudes), 'Invalid amplitudes'
    lows, highs = [], []
    for sa in amplitudes:
        if sa.shape == SpectralShape.TABULATED:
            lows.append(sa.samples.grid.omega_min)
            highs.append(sa.samples.grid.omega_max)
        else:
            lows.append(sa.center - window * extent(sa))
            highs.append(sa.center + window * extent(sa))
    return FrequencyGrid(min(lows), max(highs), n_points)

def _check_coverage(sa: SpectralAmplitude, grid: FrequencyGrid) -> None:
    if sa.shape == SpectralShape.TABULATED:
        return
    reach = COVERAGE_WIDTHS * extent(sa)
    if grid.omega_min > sa.center - reach or grid.omega_max < sa.center + reach:
        message = (
            f'Grid [{grid.omega_min:.6g}, {grid.omega_max:.6g}] rad/s covers less than '
            f'+/-{COVERAGE_WIDTHS} widths of the {sa.shape.value} amplitude centered at {sa.center:.6g}'
        )
        logger.warning(message)
        warnings.warn(message, UserWarning, stacklevel=3)

def raw_samples(sa: SpectralAmplitude, grid: FrequencyGrid) -> ComplexSamples:
    """Tabulation without renormalization."""
    if sa.shape == SpectralShape.TABULATED:
        if sa.samples.grid == grid:
            return sa.samples
        return ComplexSamples(grid, _interpolate(sa, grid.points))
    detuning = grid.offsets + (grid.center - sa.center)
    return ComplexSamples(grid, _profile(sa, detuning))

def sampled_norm(sa: SpectralAmplitude, grid: FrequencyGrid) -> float:
    return freqgrid.discrete_norm(raw_samples(sa, grid))

def sample(sa: SpectralAmplitude, grid: FrequencyGrid) -> ComplexSamples:
    """Tabulate sa on grid, renormalized to unit discrete norm."""
    _check_coverage(sa, grid)
    samples = raw_samples(sa, grid)
    norm = freqgrid.discrete_norm(samples)
    if not np.isfinite(norm) or norm <= 0:
        raise DegenerateSamplesError(f'The {sa.shape.value} amplitude vanishes on the grid')
    if sa.shape == SpectralShape.TABULATED and abs(norm - 1) > NORM_TOLERANCE:
        message = f'Tabulated amplitude had norm {norm:.6g}; renormalized'
        logger.warning(message)
        warnings.warn(message, UserWarning, stacklevel=2)
    return ComplexSamples(grid, samples.values / np.sqrt(norm))

def gaussian_dip_closed_form(sigma_a: float, sigma_b: float, wbar_a: float, wbar_b: float, tau):
    if not (sigma_a > 0 and sigma_b > 0):
        raise InvalidRangeError(f'Gaussian widths must be positive, got {sigma_a}, {sigma_b}')
    tau = np.asarray(tau, dtype=float)
    total = sigma_a ** 2 + sigma_b ** 2
    exponent = ((sigma_a * sigma_b * tau) ** 2 + (wbar_a - wbar_b) ** 2) / total
    p = 0.5 - sigma_a * sigma_b / total * np.exp(-exponent)
    return float(p) if p.ndim == 0 else p

def sinc_dip_closed_form(scale: float, tau):
    if not scale > 0:
        raise InvalidRangeError(f'Sinc scale must be positive, got {scale}')
    tau = np.asarray(tau, dtype=float)
    bracket = np.abs(tau) - np.abs(tau / 2 - scale) - np.abs(tau / 2 + scale)
    p = 0.5 - bracket ** 2 / (8 * scale ** 2)
    return float(p) if p.ndim == 0 else p
