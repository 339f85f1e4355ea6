"""Frequency grids, composite trapezoid quadrature and Fourier-kernel integrals.

Every coincidence integral in the package is evaluated on a FrequencyGrid with the
weights defined here, so 1-D integrals, JSA norms and the weighted SVD share a
single quadrature rule.
"""
import numpy as np

from src.models.errors import AliasingError
from src.models.model import FrequencyGrid, ComplexSamples

DEFAULT_N_POINTS = 2048

# spacing * |tau| must stay below this
SAMPLING_LIMIT = np.pi / 4

def make_grid(omega_min: float, omega_max: float, n_points: int = DEFAULT_N_POINTS) -> FrequencyGrid:
    return FrequencyGrid(omega_min, omega_max, n_points)

def centered_grid(center: float, half_width: float, n_points: int = DEFAULT_N_POINTS) -> FrequencyGrid:
    return FrequencyGrid(center - half_width, center + half_width, n_points)

def same_grid(grid: FrequencyGrid, other: FrequencyGrid) -> bool:
    return grid == other

def is_symmetric(grid: FrequencyGrid, rtol: float = 1e-12) -> bool:
    """True when the grid is symmetric about zero, so that samples at -omega are on-grid."""
    span = grid.omega_max - grid.omega_min
    return abs(grid.omega_min + grid.omega_max) <= rtol * span

def integrate(samples: ComplexSamples) -> complex:
    return complex(np.dot(samples.grid.weights, samples.values))

def check_sampling(grid: FrequencyGrid, tau: float) -> None:
    if grid.spacing * abs(tau) >= SAMPLING_LIMIT:
        raise AliasingError(
            f'Grid spacing {grid.spacing:.4g} rad/s is too coarse for tau={tau:.4g} s '
            f'(spacing*|tau| = {grid.spacing * abs(tau):.3g}, limit {SAMPLING_LIMIT:.3g})'
        )

def fourier_weights(grid: FrequencyGrid, tau: float, sign: int) -> np.ndarray:
    """Quadrature weights times exp(i*sign*omega*tau).

    The phase is split into a grid-center part and an offset part so that
    absolute optical frequencies do not lose precision.
    """
    assert sign in (1, -1), 'Invalid Fourier sign'
    check_sampling(grid, tau)
    global_phase = np.exp(1j * sign * grid.center * tau)
    return grid.weights * np.exp(1j * sign * grid.offsets * tau) * global_phase

def fourier_integral(samples: ComplexSamples, tau: float, sign: int = -1) -> complex:
    if tau == 0:
        return integrate(samples)
    return complex(np.dot(fourier_weights(samples.grid, tau, sign), samples.values))

def discrete_norm(samples: ComplexSamples) -> float:
    return float(np.dot(samples.grid.weights, np.abs(samples.values) ** 2))

def inner_product(left: ComplexSamples, right: ComplexSamples) -> complex:
    """Integral of conj(left) * right."""
    assert same_grid(left.grid, right.grid), 'Samples live on different grids'
    return complex(np.dot(left.grid.weights, np.conj(left.values) * right.values))
