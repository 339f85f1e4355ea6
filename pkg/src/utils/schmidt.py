"""Schmidt decomposition of a sampled JSA and the reduced single-photon ensembles.

The continuous decomposition f(w1, w2) = sum_k u_k phi_k(w1) varphi_k(w2) is computed
from the SVD of M_ij = f_ij sqrt(w1_i w2_j), with w the trapezoid weights. Singular
vectors of M are orthonormal in the plain Euclidean sense; dividing by sqrt(w) turns
them into modes that are orthonormal under the quadrature rule.
"""
import logging
import warnings
from typing import List, Sequence
import numpy as np

from src.models.errors import GridMismatchError, InvalidRangeError, NumericalContractError
from src.models.model import (
    ComplexSamples,
    FrequencyGrid,
    JointSpectralAmplitude,
    SchmidtDecomposition,
    SpectralEnsemble,
)
from src.utils import spectra

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-6
ORTHONORMALITY_TOLERANCE = 1e-8
WEIGHT_TOLERANCE = 1e-6

def _fix_phase(left: np.ndarray, right: np.ndarray) -> None:
    """Largest-magnitude sample of each left mode made real positive; right absorbs the phase."""
    for k in range(left.shape[1]):
        peak = left[np.argmax(np.abs(left[:, k])), k]
        if peak == 0:
            continue
        phase = peak / abs(peak)
        left[:, k] *= np.conj(phase)
        right[:, k] *= phase

def schmidt_decompose(jsa: JointSpectralAmplitude, tol: float = DEFAULT_TOLERANCE) -> SchmidtDecomposition:
    if not 0 <= tol <= 1:
        raise InvalidRangeError(f'Truncation tolerance must lie in [0, 1], got {tol}')
    if not np.all(np.isfinite(jsa.values)):
        raise NumericalContractError('JSA contains non-finite samples')

    root1 = np.sqrt(jsa.grid1.weights)
    root2 = np.sqrt(jsa.grid2.weights)
    matrix = root1[:, None] * jsa.values * root2[None, :]
    try:
        left, singular, right_h = np.linalg.svd(matrix, full_matrices=False)
    except np.linalg.LinAlgError as e:
        raise NumericalContractError(f'SVD did not converge: {e}') from e

    total = float(np.sum(singular ** 2))
    if total <= 0:
        raise NumericalContractError('JSA has zero norm')

    keep = singular >= tol * singular[0]
    kept = singular[keep]
    discarded_weight = float(np.sum(singular[~keep] ** 2) / total)

    modes1 = left[:, keep] / root1[:, None]
    modes2 = right_h[keep, :].T / root2[:, None]
    reconstruction = np.einsum('k,ik,jk->ij', kept, modes1, modes2)
    reconstruction_error = float(np.max(np.abs(jsa.values - reconstruction)))

    _fix_phase(modes1, modes2)
    coefficients = kept / np.sqrt(np.sum(kept ** 2))

    logger.info(
        'Schmidt rank %d kept of %d (tol=%g, discarded weight %.3g)',
        len(kept), len(singular), tol, discarded_weight,
    )
    return SchmidtDecomposition(
        coefficients,
        [ComplexSamples(jsa.grid1, modes1[:, k]) for k in range(len(kept))],
        [ComplexSamples(jsa.grid2, modes2[:, k]) for k in range(len(kept))],
        truncation_tol=tol,
        discarded_weight=discarded_weight,
        reconstruction_error=reconstruction_error,
        truncated_weight=jsa.truncated_weight,
    )

def reconstruct(decomposition: SchmidtDecomposition) -> JointSpectralAmplitude:
    modes1 = np.array([mode.values for mode in decomposition.modes1])
    modes2 = np.array([mode.values for mode in decomposition.modes2])
    values = np.einsum('k,ki,kj->ij', decomposition.coefficients, modes1, modes2)
    return JointSpectralAmplitude(decomposition.grid1, decomposition.grid2, values, decomposition.truncated_weight)

def reduced_ensemble(decomposition: SchmidtDecomposition, which: int = 1) -> SpectralEnsemble:
    """rho_which = sum_k u_k^2 |mode_k><mode_k|."""
    if which not in (1, 2):
        raise InvalidRangeError(f'which must be 1 or 2, got {which}')
    modes = decomposition.modes1 if which == 1 else decomposition.modes2
    return SpectralEnsemble(decomposition.coefficients ** 2, list(modes))

def purity(ensemble: SpectralEnsemble) -> float:
    return float(np.sum(ensemble.weights ** 2))

def schmidt_number(source: SchmidtDecomposition | SpectralEnsemble) -> float:
    """Effective number of modes, 1 / purity."""
    if isinstance(source, SpectralEnsemble):
        return 1.0 / purity(source)
    return float(1.0 / np.sum(source.coefficients ** 4))

def _gram(modes: Sequence[ComplexSamples]) -> np.ndarray:
    matrix = np.array([mode.values for mode in modes])
    weights = modes[0].grid.weights
    return np.conj(matrix) @ (weights[:, None] * matrix.T)

def make_ensemble(weights: Sequence[float], modes: List[ComplexSamples]) -> SpectralEnsemble:
    weights = np.asarray(weights, dtype=float)
    if len(weights) != len(modes) or not len(modes):
        raise InvalidRangeError(f'Got {len(weights)} weights for {len(modes)} modes')
    if np.any(weights < 0):
        raise InvalidRangeError('Ensemble weights must be non-negative')
    grid = modes[0].grid
    if any(mode.grid != grid for mode in modes):
        raise GridMismatchError('Ensemble modes must share one grid')
    total = float(np.sum(weights))
    if abs(total - 1) > WEIGHT_TOLERANCE:
        message = f'Ensemble weights summed to {total:.6g}; renormalized'
        logger.warning(message)
        warnings.warn(message, UserWarning, stacklevel=2)
        weights = weights / total
    if not np.allclose(_gram(modes), np.eye(len(modes)), atol=ORTHONORMALITY_TOLERANCE):
        raise InvalidRangeError('Ensemble modes are not orthonormal on the grid')
    return SpectralEnsemble(weights, list(modes))

def hermite_gauss_ensemble(weights: Sequence[float], grid: FrequencyGrid, center: float, sigma: float) -> SpectralEnsemble:
    """Mixture of Hermite-Gauss orders 0..len(weights)-1."""
    modes = [spectra.sample(spectra.hermite_gauss(center, sigma, order), grid) for order in range(len(weights))]
    return make_ensemble(weights, modes)
