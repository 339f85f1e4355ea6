from datetime import datetime
from typing import Callable, Dict, List
import logging
import os
import numpy as np

from src.models import model as m
from src.models.errors import InvalidRangeError
from src.models.fock_model import FockState
from src.utils import freqgrid, fock, hom, jsa, schmidt, spectra, storage
from src.utils.serializer import DISPERSION_KEYS, validate_scenario

logger = logging.getLogger(__name__)

class Simulator:
    """Builds the coincidence engine for one scenario and sweeps the time delay.

    Assumptions:
    - The beam splitter is balanced for every spectral scenario
    - Grid sizes come from, in order of precedence: the setters, the scenario's
      [grid] section, then the HOMDIP_* environment variables
    """
    def __init__(self) -> None:
        self.__scenario = None
        self.__n_points = None
        self.__n_tau = None

        self.__workers = int(os.getenv('HOMDIP_WORKERS', 1))
        self.__tolerance = float(os.getenv('HOMDIP_SCHMIDT_TOL', schmidt.DEFAULT_TOLERANCE))

        self.__probability = None
        self.__oracle = None
        self.__fock_state = None
        self.__decomposition = None
        self.__ensembles = None
        self.__jsa = None
        self.__truncated_weight = 0.0

    # Attributes
    @property
    def scenario(self) -> m.Scenario:
        return self.__scenario

    @scenario.setter
    def scenario(self, _scenario: m.Scenario) -> None:
        assert isinstance(_scenario, m.Scenario), 'Invalid scenario'
        validate_scenario(_scenario)
        self.__scenario = _scenario

    @property
    def n_points(self) -> int | None:
        return self.__n_points

    @n_points.setter
    def n_points(self, _n_points: int | None) -> None:
        if _n_points is not None and _n_points < 3:
            raise InvalidRangeError(f'n_points must be at least 3, got {_n_points}')
        self.__n_points = _n_points

    @property
    def n_tau(self) -> int:
        return self.__n_tau if self.__n_tau is not None else self.__scenario.sweep.n_tau

    @n_tau.setter
    def n_tau(self, _n_tau: int | None) -> None:
        if _n_tau is not None and _n_tau < 2:
            raise InvalidRangeError(f'n_tau must be at least 2, got {_n_tau}')
        self.__n_tau = _n_tau

    @property
    def workers(self) -> int:
        return self.__workers

    @workers.setter
    def workers(self, _workers: int) -> None:
        assert _workers >= 1, 'Invalid number of workers'
        self.__workers = _workers

    @property
    def fock_state(self) -> FockState | None:
        return self.__fock_state

    @property
    def decomposition(self) -> m.SchmidtDecomposition | None:
        return self.__decomposition

    @property
    def ensembles(self) -> tuple | None:
        return self.__ensembles

    @property
    def joint_spectrum(self) -> m.JointSpectralAmplitude | None:
        return self.__jsa

    @property
    def descriptor(self) -> str:
        return f'{self.__scenario.kind.value}'

    # Engine construction
    def __grid_size(self, env_key: str, default: int) -> int:
        if self.__n_points is not None:
            return self.__n_points
        if self.__scenario.grid.n_points is not None:
            return self.__scenario.grid.n_points
        return int(os.getenv(env_key, default))

    def __window(self, env_key: str, default: float) -> float:
        if self.__scenario.grid.window is not None:
            return self.__scenario.grid.window
        return float(os.getenv(env_key, default))

    def __schmidt_tolerance(self) -> float:
        tol = self.__scenario.parameters.get('tol')
        return self.__tolerance if tol is None else tol

    def __spectral_amplitude(self, suffix: str) -> m.SpectralAmplitude:
        parameters = self.__scenario.parameters
        shape = parameters[f'shape_{suffix}']
        center = parameters[f'center_{suffix}']
        sigma = parameters[f'sigma_{suffix}']
        if shape == m.SpectralShape.GAUSSIAN:
            return spectra.gaussian(center, sigma)
        if shape == m.SpectralShape.SINC:
            scale = parameters[f'scale_{suffix}']
            return spectra.sinc(center, scale if scale is not None else jsa.design_point_scale(sigma, parameters['gamma']))
        if shape == m.SpectralShape.HERMITE_GAUSS:
            return spectra.hermite_gauss(center, sigma, parameters[f'order_{suffix}'])
        return storage.load_spectral_amplitude(parameters[f'file_{suffix}'])

    def __phase_matching(self, suffix: str = '') -> m.PhaseMatching:
        parameters = self.__scenario.parameters
        shape = parameters[f'phase_matching{suffix}']
        gamma = parameters['gamma']
        if not suffix and parameters.get('L') is not None:
            dispersion = m.DispersionParams(
                length=parameters['L'],
                omega_bar=parameters['omega_bar'],
                **{key: parameters[key] for key in DISPERSION_KEYS if key != 'L'},
            )
            a, b, c = jsa.abc_from_dispersion(dispersion)
            return m.PhaseMatching(shape, a, b, c, gamma)

        scale = jsa.design_point_scale(parameters[f'sigma{suffix}'], gamma)
        a = parameters[f'A{suffix}']
        a = scale if a is None else a
        b = parameters[f'B{suffix}']
        b = -a if b is None else b
        c = parameters[f'C{suffix}']
        # C defaults to the value that centers phase matching on the pump
        c = (a + b) * parameters['omega_bar'] if c is None else c
        return m.PhaseMatching(shape, a, b, c, gamma)

    def __pulsed_pump(self, suffix: str = '') -> m.PumpEnvelope:
        parameters = self.__scenario.parameters
        return m.PumpEnvelope(m.PumpKind.PULSED, parameters['omega_bar'], parameters[f'sigma{suffix}'])

    def __build_fock(self) -> None:
        parameters = self.__scenario.parameters
        self.__fock_state, probability = fock.hom_probabilities(parameters['eta'], (parameters['tag_a'], parameters['tag_b']))
        self.__probability = lambda tau: probability

    def __build_separable(self) -> None:
        phi = self.__spectral_amplitude('a')
        varphi = self.__spectral_amplitude('b')
        grid = spectra.default_grid(
            phi,
            varphi,
            n_points=self.__grid_size('HOMDIP_N_POINTS', freqgrid.DEFAULT_N_POINTS),
            window=self.__window('HOMDIP_WINDOW', spectra.DEFAULT_WINDOW),
        )
        samples_a = spectra.sample(phi, grid)
        samples_b = spectra.sample(varphi, grid)
        self.__probability = lambda tau: hom.p_separable_samples(samples_a, samples_b, tau)

        shapes = (phi.shape, varphi.shape)
        if shapes == (m.SpectralShape.GAUSSIAN, m.SpectralShape.GAUSSIAN):
            self.__oracle = lambda taus: spectra.gaussian_dip_closed_form(phi.width, varphi.width, phi.center, varphi.center, taus)
        elif shapes == (m.SpectralShape.SINC, m.SpectralShape.SINC) and phi.width == varphi.width and phi.center == varphi.center:
            self.__oracle = lambda taus: spectra.sinc_dip_closed_form(phi.width, taus)

    def __build_entangled_pulsed(self) -> None:
        pm = self.__phase_matching()
        pump = self.__pulsed_pump()
        grid = jsa.default_jsa_grid(
            pump,
            n_points=self.__grid_size('HOMDIP_JSA_POINTS', jsa.DEFAULT_JSA_POINTS),
            window=self.__window('HOMDIP_JSA_WINDOW', jsa.DEFAULT_JSA_WINDOW),
        )
        joint = jsa.build_jsa(pm, pump, grid, grid)
        self.__jsa = joint
        self.__truncated_weight = joint.truncated_weight
        self.__decomposition = schmidt.schmidt_decompose(joint, self.__schmidt_tolerance())
        self.__probability = lambda tau: hom.p_entangled(joint, tau)

    def __build_entangled_cw(self) -> None:
        pm = self.__phase_matching()
        omega_bar = self.__scenario.parameters['omega_bar']
        grid = jsa.default_cw_grid(
            pm,
            omega_bar,
            n_points=self.__grid_size('HOMDIP_N_POINTS', freqgrid.DEFAULT_N_POINTS),
            window=self.__window('HOMDIP_WINDOW', jsa.DEFAULT_CW_WINDOW),
        )
        marginal = jsa.build_cw_marginal(pm, omega_bar, grid)
        self.__truncated_weight = marginal.truncated_weight
        self.__probability = lambda tau: hom.p_cw(marginal, tau)
        if pm.b == -pm.a and pm.c == 0:
            self.__oracle = lambda taus: hom.cw_dip_closed_form(pm, taus)

    def __build_mixed_independent(self) -> None:
        pumps = [self.__pulsed_pump('_f'), self.__pulsed_pump('_h')]
        # both ensembles must live on one grid
        widest = max(pumps, key=lambda pump: pump.width)
        grid = jsa.default_jsa_grid(
            widest,
            n_points=self.__grid_size('HOMDIP_JSA_POINTS', jsa.DEFAULT_JSA_POINTS),
            window=self.__window('HOMDIP_JSA_WINDOW', jsa.DEFAULT_JSA_WINDOW),
        )
        tol = self.__schmidt_tolerance()
        decompositions = [
            schmidt.schmidt_decompose(jsa.build_jsa(self.__phase_matching(suffix), pump, grid, grid), tol)
            for suffix, pump in zip(('_f', '_h'), pumps)
        ]
        self.__decomposition = decompositions[0]
        ensemble_a = schmidt.reduced_ensemble(decompositions[0], 1)
        ensemble_b = schmidt.reduced_ensemble(decompositions[1], 1)
        self.__ensembles = (ensemble_a, ensemble_b)
        self.__probability = lambda tau: hom.p_mixed(ensemble_a, ensemble_b, tau)

    def prepare(self) -> None:
        """Build the engine without sweeping."""
        assert self.__scenario is not None, 'Invalid scenario'
        self.__oracle = None
        self.__decomposition = None
        self.__ensembles = None
        self.__fock_state = None
        self.__jsa = None
        self.__truncated_weight = 0.0

        builders: Dict[m.ScenarioKind, Callable[[], None]] = {
            m.ScenarioKind.FOCK: self.__build_fock,
            m.ScenarioKind.SEPARABLE: self.__build_separable,
            m.ScenarioKind.ENTANGLED_PULSED: self.__build_entangled_pulsed,
            m.ScenarioKind.ENTANGLED_CW: self.__build_entangled_cw,
            m.ScenarioKind.MIXED_INDEPENDENT: self.__build_mixed_independent,
        }
        start_time = datetime.now()
        builders[self.__scenario.kind]()
        end_time = datetime.now()
        logger.info('Total Time for building the %s engine: %.3f seconds', self.descriptor, (end_time - start_time).total_seconds())

    # Main simulation function
    def generate(self) -> m.DipCurve | float:
        """Probability for fock scenarios, otherwise the dip curve over the sweep."""
        self.prepare()

        if self.__scenario.kind == m.ScenarioKind.FOCK:
            return self.__probability(0.0)

        sweep = self.__scenario.sweep
        return hom.dip_curve(
            self.__probability,
            sweep.tau_min,
            sweep.tau_max,
            self.n_tau,
            descriptor=self.descriptor,
            workers=self.__workers,
        )

    def oracle(self, taus: np.ndarray) -> np.ndarray | None:
        """Closed-form dip for the scenario, when one exists."""
        return None if self.__oracle is None else np.asarray(self.__oracle(taus), dtype=float)

    def purity(self) -> float | None:
        if self.__ensembles is not None:
            return schmidt.purity(self.__ensembles[0])
        if self.__decomposition is not None:
            return schmidt.purity(schmidt.reduced_ensemble(self.__decomposition, 1))
        return None

    def schmidt_coefficients(self) -> List[float] | None:
        return None if self.__decomposition is None else [float(u) for u in self.__decomposition.coefficients]

    def schmidt_number(self) -> float | None:
        return None if self.__decomposition is None else schmidt.schmidt_number(self.__decomposition)

    def truncated_weight(self) -> float:
        """Share of |f|^2 the entangled engines lose to their finite grids."""
        return self.__truncated_weight
