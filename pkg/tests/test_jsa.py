import numpy as np
import pytest

from src.models.errors import DegenerateSamplesError, InvalidRangeError
from src.models.model import DispersionParams, PhaseMatching, PhaseMatchingShape, PumpEnvelope, PumpKind
from src.utils import freqgrid, jsa, schmidt, spectra
from tests.conftest import GAMMA, OMEGA_BAR, SIGMA

def dispersion(length: float = 1e-3, **overrides) -> DispersionParams:
    values = dict(length=length, k_p0=3.0, k_10=1.0, k_20=2.0, kp_prime=5e-9, k1_prime=5e-9, k2_prime=5e-9, omega_bar=OMEGA_BAR)
    values.update(overrides)
    return DispersionParams(**values)

def test_matched_dispersion_gives_zero_coefficients():
    assert jsa.abc_from_dispersion(dispersion()) == (0.0, 0.0, 0.0)

def test_dispersion_coefficients_scale_with_length():
    params = dict(k_p0=3.1, k_10=1.0, k_20=2.0, kp_prime=5e-9, k1_prime=5.2e-9, k2_prime=4.9e-9)
    single = np.array(jsa.abc_from_dispersion(dispersion(1e-3, **params)))
    double = np.array(jsa.abc_from_dispersion(dispersion(2e-3, **params)))
    np.testing.assert_allclose(double, 2 * single, rtol=1e-12)

def test_dispersion_scale_arithmetic():
    a, _, _ = jsa.abc_from_dispersion(dispersion(2.0, kp_prime=0.0, k1_prime=1e-12))
    assert a == pytest.approx(1e-12)

def test_dispersion_length_must_be_positive():
    with pytest.raises(InvalidRangeError):
        dispersion(0.0)

def test_phase_matching_values():
    for shape in PhaseMatchingShape:
        assert jsa.phase_matching_eval(PhaseMatching(shape, 1.0, -1.0), 2.0, 2.0) == pytest.approx(1.0)
    assert abs(jsa.phase_matching_eval(PhaseMatching(PhaseMatchingShape.SINC, 1.0, 0.0), np.pi, 0.0)) < 1e-15
    gaussian = PhaseMatching(PhaseMatchingShape.GAUSSIAN, 1.0, 0.0, gamma=0.193)
    assert jsa.phase_matching_eval(gaussian, 1.0, 0.0) == pytest.approx(np.exp(-0.193))

def test_gamma_matches_amplitude_widths():
    sinc_width = jsa.phase_matching_fwhm(PhaseMatching(PhaseMatchingShape.SINC, 1.0, -1.0))
    gaussian_width = jsa.phase_matching_fwhm(PhaseMatching(PhaseMatchingShape.GAUSSIAN, 1.0, -1.0, gamma=GAMMA))
    assert abs(sinc_width / gaussian_width - 1) < 0.02

def test_intensity_fwhm_of_sinc():
    assert jsa.phase_matching_fwhm(PhaseMatching(PhaseMatchingShape.SINC, 1.0, -1.0), intensity=True) == pytest.approx(2.7831, abs=1e-3)

def test_jsa_is_normalized(f_sinc, f_gauss):
    assert f_sinc.norm == pytest.approx(1.0, abs=1e-12)
    assert f_gauss.norm == pytest.approx(1.0, abs=1e-12)

def test_design_point_is_separable(f_gauss):
    decomposition = schmidt.schmidt_decompose(f_gauss)
    assert decomposition.coefficients[0] == pytest.approx(1.0, abs=1e-4)

def test_design_point_is_product_of_gaussians(f_gauss):
    grid = f_gauss.grid1
    photon = spectra.sample(spectra.gaussian(OMEGA_BAR, SIGMA / np.sqrt(2)), grid).values
    expected = np.outer(photon, photon)
    np.testing.assert_allclose(f_gauss.values, expected, atol=1e-8 * np.abs(expected).max())

def test_swapping_grids_transposes(sinc_pm, pump):
    grid1 = freqgrid.centered_grid(OMEGA_BAR, 5 * SIGMA, 64)
    grid2 = freqgrid.centered_grid(OMEGA_BAR, 4 * SIGMA, 48)
    forward = jsa.build_jsa(sinc_pm, pump, grid1, grid2)
    backward = jsa.build_jsa(sinc_pm, pump, grid2, grid1)
    np.testing.assert_allclose(backward.values, forward.values.T, rtol=1e-12, atol=0)

def test_energy_conservation_ridge(pump):
    broad = PhaseMatching(PhaseMatchingShape.GAUSSIAN, jsa.design_point_scale(SIGMA) / 10, -jsa.design_point_scale(SIGMA) / 10)
    grid = freqgrid.centered_grid(OMEGA_BAR, 5 * SIGMA, 101)
    magnitude = np.abs(jsa.build_jsa(broad, pump, grid, grid).values)
    anti_diagonal = grid.n_points - 1 - np.arange(grid.n_points)
    assert np.all(np.abs(np.argmax(magnitude, axis=1) - anti_diagonal) <= 2)
    assert np.all(np.abs(np.argmax(magnitude, axis=0) - anti_diagonal) <= 2)

def test_cw_pump_needs_marginal(sinc_pm, jsa_grid):
    with pytest.raises(InvalidRangeError):
        jsa.build_jsa(sinc_pm, PumpEnvelope(PumpKind.CW, OMEGA_BAR), jsa_grid, jsa_grid)

def test_vanishing_jsa_rejected(gaussian_pm, pump):
    far = freqgrid.centered_grid(OMEGA_BAR + 100 * SIGMA, 5 * SIGMA, 32)
    with pytest.raises(DegenerateSamplesError):
        jsa.build_jsa(gaussian_pm, pump, far, far)

def test_separable_factors_reproduce_product():
    grid = freqgrid.centered_grid(OMEGA_BAR, 12 * SIGMA, 192)
    phi = spectra.sample(spectra.gaussian(OMEGA_BAR, SIGMA), grid)
    varphi = spectra.sample(spectra.gaussian(OMEGA_BAR + SIGMA, 1.5 * SIGMA), grid)
    joint = jsa.jsa_from_factors(phi, varphi)
    assert joint.norm == pytest.approx(1.0, abs=1e-12)
    assert schmidt.schmidt_decompose(joint).coefficients[0] == pytest.approx(1.0, abs=1e-6)

@pytest.mark.parametrize('shape', list(PhaseMatchingShape))
def test_cw_marginal_shape(shape, scale):
    pm = PhaseMatching(shape, scale, -scale, 0.0, GAMMA)
    grid = jsa.default_cw_grid(pm, OMEGA_BAR)
    marginal = jsa.build_cw_marginal(pm, OMEGA_BAR, grid)
    nu = grid.points
    if shape == PhaseMatchingShape.SINC:
        expected = np.sinc(2 * scale * nu / np.pi)
    else:
        expected = np.exp(-4 * GAMMA * scale ** 2 * nu ** 2)
    expected = expected / np.sqrt(np.dot(grid.weights, expected ** 2))
    assert freqgrid.is_symmetric(grid)
    assert freqgrid.discrete_norm(marginal.g) == pytest.approx(1.0, abs=1e-6)
    np.testing.assert_allclose(marginal.g.values.real, expected, atol=1e-9 * expected.max())

def test_cw_grid_needs_confinement():
    with pytest.raises(InvalidRangeError):
        jsa.default_cw_grid(PhaseMatching(PhaseMatchingShape.SINC, 1e-12, 1e-12), OMEGA_BAR)

def test_truncated_weight_of_cut_sinc_tails(f_gauss, f_sinc, sinc_pm, pump, scale):
    assert f_gauss.truncated_weight == pytest.approx(0.0, abs=1e-9)
    # sinc^2 beyond |x| = X holds about 1/(pi X) of the total
    assert f_sinc.truncated_weight == pytest.approx(1 / (np.pi * scale * 10 * SIGMA), rel=0.2)
    grid = jsa.default_jsa_grid(pump, n_points=512, window=10)
    assert jsa.build_jsa(sinc_pm, pump, grid, grid).truncated_weight < f_sinc.truncated_weight

def test_cw_truncated_weight(sinc_pm, gaussian_pm):
    grid = jsa.default_cw_grid(sinc_pm, OMEGA_BAR, n_points=131073, window=4000)
    assert jsa.build_cw_marginal(sinc_pm, OMEGA_BAR, grid).truncated_weight == pytest.approx(1 / (np.pi * 4000), rel=0.05)
    grid = jsa.default_cw_grid(gaussian_pm, OMEGA_BAR)
    assert jsa.build_cw_marginal(gaussian_pm, OMEGA_BAR, grid).truncated_weight == pytest.approx(0.0, abs=1e-9)

def test_jsa_mass_needs_confinement(pump):
    assert jsa.jsa_mass(PhaseMatching(PhaseMatchingShape.SINC, 1e-12, 1e-12), pump) is None
