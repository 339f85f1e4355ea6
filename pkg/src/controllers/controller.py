"""Controller module of the homdip command line.

Functions:
 - Calls serializer helper functions
 - Calls the simulator
 - Calls storage and plotting helper functions
 - Returns output
"""
from datetime import datetime
from typing import Dict, Tuple
import logging
import os

from src.models.errors import HomDipError, InvalidRangeError, NumericalContractError, ScenarioError
from src.models.model import DipCurve, RunSummary, Scenario, ScenarioKind
from src.utils import fock, hom, plotter, storage
from src.utils.serializer import parse_scenario
from src.utils.simulator import Simulator

logger = logging.getLogger(__name__)

DIP_CSV = 'dip.csv'
SUMMARY_JSON = 'summary.json'
DIP_SVG = 'dip.svg'

class Controller:
    @staticmethod
    def load_scenario(path: str) -> Scenario:
        with open(path, 'r') as f:
            text = f.read()
        return parse_scenario(text, base_dir=os.path.dirname(os.path.abspath(path)))

    @staticmethod
    def run(
        scenario: Scenario,
        output_dir: str,
        plot: bool = True,
        n_points: int | None = None,
        n_tau: int | None = None,
        source: str | None = None,
    ) -> RunSummary:
        """Run one scenario and write its results to output_dir.

        Engine errors are re-raised with the scenario kind (and source file, when known)
        prepended to the message.
        """
        start_time = datetime.now()
        label = scenario.kind.value if source is None else f'{source} ({scenario.kind.value})'

        simulator = Simulator()
        simulator.scenario = scenario
        simulator.n_points = n_points
        simulator.n_tau = n_tau
        try:
            result = simulator.generate()
        except ScenarioError:
            raise
        except HomDipError as e:
            raise type(e)(f'{label}: {e}') from e

        summary = RunSummary(kind=scenario.kind, parameters=scenario.parameters)
        if scenario.kind == ScenarioKind.FOCK:
            summary.probability = result
        else:
            Controller.__check_range(result, label, hom.truncation_slack(simulator.truncated_weight()))
            visibility = hom.visibility(result)
            summary.p_min = visibility.p_min
            summary.p_max = visibility.p_max
            summary.visibility = visibility.value
            summary.purity = simulator.purity()
            summary.schmidt_number = simulator.schmidt_number()
            summary.schmidt_coefficients = simulator.schmidt_coefficients()

        os.makedirs(output_dir, exist_ok=True)
        if scenario.kind != ScenarioKind.FOCK:
            storage.write_dip_csv(result, os.path.join(output_dir, DIP_CSV))
            if plot:
                plotter.render_dip(result, os.path.join(output_dir, DIP_SVG), oracle=simulator.oracle(result.taus))
        storage.write_summary(summary, os.path.join(output_dir, SUMMARY_JSON))

        end_time = datetime.now()
        summary.wall_time = (end_time - start_time).total_seconds()
        logger.info('Total Time for %s run: %.3f seconds', scenario.kind.value, summary.wall_time)
        return summary

    @staticmethod
    def run_file(path: str, output_dir: str, plot: bool = True, n_points: int | None = None, n_tau: int | None = None) -> RunSummary:
        return Controller.run(Controller.load_scenario(path), output_dir, plot=plot, n_points=n_points, n_tau=n_tau, source=path)

    @staticmethod
    def fock(eta: float, tags: Tuple[str, str]) -> Dict[str, object]:
        state, probability = fock.hom_probabilities(eta, tags)
        return {
            'state': str(state),
            'distribution': fock.output_distribution(state),
            'probability': probability,
        }

    @staticmethod
    def schmidt(path: str, n_points: int | None = None) -> Dict[str, object]:
        scenario = Controller.load_scenario(path)
        if scenario.kind not in (ScenarioKind.ENTANGLED_PULSED, ScenarioKind.MIXED_INDEPENDENT):
            raise InvalidRangeError(f'Schmidt decomposition needs a pulsed two-photon source, got kind {scenario.kind.value}')

        simulator = Simulator()
        simulator.scenario = scenario
        simulator.n_points = n_points
        simulator.prepare()
        return {
            'coefficients': simulator.schmidt_coefficients(),
            'purity': simulator.purity(),
            'schmidt_number': simulator.schmidt_number(),
            'discarded_weight': simulator.decomposition.discarded_weight,
        }

    @staticmethod
    def __check_range(curve: DipCurve, label: str, slack: float = 0.0) -> None:
        """Every spectral scenario uses a balanced beam splitter: p <= 1/2.

        slack is the most that cutting the source off at the grid edges can add above
        1/2; it is zero up to rounding unless sinc tails are cut.
        """
        upper = 0.5 + hom.PROBABILITY_TOLERANCE + slack
        bad = (curve.probabilities < -hom.PROBABILITY_TOLERANCE) | (curve.probabilities > upper)
        if bad.any():
            index = int(bad.argmax())
            raise NumericalContractError(
                f'{label}: p({curve.taus[index]:.6g} s) = {curve.probabilities[index]:.6g} outside [0, 1/2]'
            )
