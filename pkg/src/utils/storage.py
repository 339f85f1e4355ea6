"""Module for reading and writing simulation files.

Assumptions:
 - Tabulated spectra are whitespace-separated `omega re [im]` rows on a uniform grid
 - JSA exports start with a `# jsa n1 n2 omega1_min omega1_max omega2_min omega2_max` header
 - Every number is written with 17 significant digits
"""
import json
import logging
import numpy as np
import pandas as pd

from src.models.errors import InvalidRangeError
from src.models.model import (
    ComplexSamples,
    DipCurve,
    FrequencyGrid,
    JointSpectralAmplitude,
    RunSummary,
    SpectralAmplitude,
)
from src.utils import spectra

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'
UNIFORMITY_RTOL = 1e-6

def load_spectral_amplitude(path: str) -> SpectralAmplitude:
    """Read a tabulated spectral amplitude."""
    try:
        frame = pd.read_csv(path, sep=r'\s+', comment='#', header=None, dtype=float)
    except (OSError, ValueError) as e:
        raise InvalidRangeError(f'{path}: cannot read spectral table ({e})') from e
    if frame.shape[1] not in (2, 3):
        raise InvalidRangeError(f'{path}: expected 2 or 3 columns (omega, re, im), got {frame.shape[1]}')
    omega = frame[0].to_numpy()
    values = frame[1].to_numpy() + 1j * (frame[2].to_numpy() if frame.shape[1] == 3 else 0.0)

    grid = FrequencyGrid(omega[0], omega[-1], len(omega))
    if not np.allclose(omega, grid.points, rtol=0, atol=UNIFORMITY_RTOL * grid.spacing):
        raise InvalidRangeError(f'{path}: tabulated frequencies must be uniformly spaced and increasing')
    logger.info('Loaded %d spectral samples from %s', len(omega), path)
    return spectra.tabulated(ComplexSamples(grid, values))

def export_jsa(jsa: JointSpectralAmplitude, path: str) -> None:
    header = ' '.join([
        'jsa',
        str(jsa.grid1.n_points),
        str(jsa.grid2.n_points),
        *(repr(bound) for bound in (jsa.grid1.omega_min, jsa.grid1.omega_max, jsa.grid2.omega_min, jsa.grid2.omega_max)),
    ])
    values = jsa.values.reshape(-1)
    np.savetxt(path, np.column_stack((values.real, values.imag)), fmt=FLOAT_FORMAT, header=header, comments='# ')

def load_jsa(path: str) -> JointSpectralAmplitude:
    with open(path, 'r') as f:
        header = f.readline().lstrip('#').split()
    if len(header) != 7 or header[0] != 'jsa':
        raise InvalidRangeError(f'{path}: missing "# jsa n1 n2 ..." header')
    n1, n2 = int(header[1]), int(header[2])
    bounds = [float(value) for value in header[3:]]
    pairs = np.loadtxt(path, comments='#', ndmin=2)
    if pairs.shape != (n1 * n2, 2):
        raise InvalidRangeError(f'{path}: expected {n1 * n2} re/im pairs, got {pairs.shape[0]}')
    values = (pairs[:, 0] + 1j * pairs[:, 1]).reshape(n1, n2)
    return JointSpectralAmplitude(FrequencyGrid(bounds[0], bounds[1], n1), FrequencyGrid(bounds[2], bounds[3], n2), values)

def write_dip_csv(curve: DipCurve, path: str) -> None:
    frame = pd.DataFrame({'tau_s': curve.taus, 'p': curve.probabilities})
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')

def read_dip_csv(path: str) -> DipCurve:
    frame = pd.read_csv(path, dtype=float, float_precision='round_trip')
    return DipCurve(frame['tau_s'].to_numpy(), frame['p'].to_numpy())

def write_summary(summary: RunSummary, path: str) -> None:
    with open(path, 'w') as f:
        json.dump(summary.to_json(), f, indent=2)
        f.write('\n')

def read_summary(path: str) -> dict:
    with open(path, 'r') as f:
        return json.load(f)
