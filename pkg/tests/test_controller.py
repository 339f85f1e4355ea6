import json
import os
import shutil

import numpy as np
import pytest
from click.testing import CliRunner

from main import cli
from src.controllers.controller import Controller
from src.models.errors import AliasingError, NumericalContractError
from src.utils import hom, spectra, storage
from tests.conftest import SCENARIOS_DIR

def scenario_path(name: str) -> str:
    return os.path.join(SCENARIOS_DIR, name)

def invoke(*args: str):
    return CliRunner().invoke(cli, list(args))

@pytest.mark.parametrize('tags,expected', [('H,H', 'p = 0\n'), ('H,V', 'p = 0.5\n')])
def test_fock_command(tags, expected):
    result = invoke('fock', '--eta', '0.5', '--tags', tags)
    assert result.exit_code == 0, result.output
    assert result.output.startswith('output: ')
    assert expected in result.output

def test_fock_command_rejects_bad_input():
    assert invoke('fock', '--tags', 'H').exit_code == 2
    assert invoke('fock', '--eta', '1.5').exit_code == 2

def test_run_separable_gaussian(tmp_path):
    result = invoke('run', scenario_path('separable_gaussian.txt'), '--out', str(tmp_path))
    assert result.exit_code == 0, result.output
    for name in ('dip.csv', 'summary.json', 'dip.svg'):
        assert (tmp_path / name).exists()

    summary = storage.read_summary(str(tmp_path / 'summary.json'))
    assert summary['kind'] == 'separable'
    assert summary['visibility'] == pytest.approx(1.0, abs=1e-3)
    assert summary['p_min'] == pytest.approx(0.0, abs=1e-4)
    assert summary['parameters']['sigma_a'] == 1e12
    assert 'purity' not in summary

    curve = storage.read_dip_csv(str(tmp_path / 'dip.csv'))
    assert len(curve.taus) == 201
    assert abs(hom.visibility(curve).value - summary['visibility']) < 1e-12

def test_run_is_deterministic(tmp_path):
    outputs = []
    for name in ('first', 'second'):
        output_dir = tmp_path / name
        result = invoke('run', scenario_path('separable_detuned.txt'), '--out', str(output_dir))
        assert result.exit_code == 0, result.output
        outputs.append(output_dir)
    for name in ('dip.csv', 'summary.json', 'dip.svg'):
        assert (outputs[0] / name).read_bytes() == (outputs[1] / name).read_bytes()

BUNDLED_SCENARIOS = sorted(name for name in os.listdir(SCENARIOS_DIR) if name.endswith('.txt'))

@pytest.mark.parametrize('name', BUNDLED_SCENARIOS)
def test_bundled_scenarios_run_deterministically(name, tmp_path):
    outputs = []
    for run in ('first', 'second'):
        output_dir = tmp_path / run
        Controller.run_file(scenario_path(name), str(output_dir), plot=False)
        outputs.append(output_dir)
    for path in sorted(outputs[0].iterdir()):
        assert path.read_bytes() == (outputs[1] / path.name).read_bytes()

@pytest.mark.parametrize('name', BUNDLED_SCENARIOS)
def test_bundled_scenarios_exit_cleanly(name, tmp_path):
    result = invoke('run', scenario_path(name), '--out', str(tmp_path), '--n-tau', '21', '--no-plot')
    assert result.exit_code == 0, result.output

def test_cw_sinc_scenario_stays_below_one_half(tmp_path):
    Controller.run_file(scenario_path('cw_sinc.txt'), str(tmp_path), plot=False)
    curve = storage.read_dip_csv(str(tmp_path / 'dip.csv'))
    assert curve.probabilities.max() <= 0.5 + hom.PROBABILITY_TOLERANCE

def test_engine_errors_name_the_scenario(tmp_path):
    path = tmp_path / 'scenario.txt'
    # a 1 ns delay aliases on the default separable grid
    path.write_text('kind = separable\n[source]\nshape_a = gaussian\n[sweep]\ntau_min = -1e-9\ntau_max = 1e-9\nn_tau = 3\n')
    with pytest.raises(AliasingError, match=r'scenario\.txt \(separable\): '):
        Controller.run_file(str(path), str(tmp_path / 'out'), plot=False)
    result = invoke('run', str(path), '--out', str(tmp_path / 'out'))
    assert result.exit_code == 1
    assert 'scenario.txt (separable)' in result.output

def test_run_overrides(tmp_path):
    result = invoke('run', scenario_path('cw_gaussian.txt'), '--out', str(tmp_path), '--n-tau', '31', '--n-points', '1025', '--no-plot')
    assert result.exit_code == 0, result.output
    assert len(storage.read_dip_csv(str(tmp_path / 'dip.csv')).taus) == 31
    assert not (tmp_path / 'dip.svg').exists()

def test_run_fock_writes_summary_only(tmp_path):
    result = invoke('run', scenario_path('fock_identical.txt'), '--out', str(tmp_path))
    assert result.exit_code == 0, result.output
    summary = storage.read_summary(str(tmp_path / 'summary.json'))
    assert summary['probability'] == pytest.approx(0.0, abs=1e-12)
    assert not (tmp_path / 'dip.csv').exists()

def test_run_mixed_sources_visibility_is_purity(tmp_path):
    result = invoke('run', scenario_path('mixed_sinc.txt'), '--out', str(tmp_path), '--n-points', '256', '--no-plot')
    assert result.exit_code == 0, result.output
    summary = storage.read_summary(str(tmp_path / 'summary.json'))
    assert summary['purity'] < 1
    assert summary['visibility'] == pytest.approx(summary['purity'], abs=1e-3)
    assert sum(u ** 2 for u in summary['schmidt_coefficients']) == pytest.approx(1.0, abs=1e-6)

def test_run_tabulated_photon(tmp_path):
    grid = spectra.default_grid(spectra.gaussian(1e15, 1e12), n_points=1025)
    values = spectra.evaluate(spectra.gaussian(1e15, 1e12), grid.points)
    rows = [f'{w!r} {v.real!r}' for w, v in zip(grid.points, values)]
    (tmp_path / 'phi.txt').write_text('\n'.join(rows) + '\n')
    (tmp_path / 'scenario.txt').write_text(
        'kind = separable\n[source]\nshape_a = tabulated\nfile_a = phi.txt\nshape_b = gaussian\n'
    )
    result = invoke('run', str(tmp_path / 'scenario.txt'), '--out', str(tmp_path / 'out'), '--no-plot')
    assert result.exit_code == 0, result.output
    summary = storage.read_summary(str(tmp_path / 'out' / 'summary.json'))
    assert summary['visibility'] == pytest.approx(1.0, abs=1e-3)

def test_invalid_scenario_exits_with_2(tmp_path):
    path = tmp_path / 'scenario.txt'
    path.write_text('kind = separable\n[source]\nsgima = 1e12\n')
    result = invoke('run', str(path), '--out', str(tmp_path))
    assert result.exit_code == 2
    assert 'sgima' in result.output

def test_out_of_range_probability_exits_with_3(tmp_path, monkeypatch):
    monkeypatch.setattr(hom, 'p_separable_samples', lambda phi, varphi, tau: 0.7)
    result = invoke('run', scenario_path('separable_gaussian.txt'), '--out', str(tmp_path), '--n-tau', '11', '--no-plot')
    assert result.exit_code == 3
    assert not (tmp_path / 'dip.csv').exists()

def test_controller_range_check(tmp_path, monkeypatch):
    monkeypatch.setattr(hom, 'p_separable_samples', lambda phi, varphi, tau: -0.1)
    scenario = Controller.load_scenario(scenario_path('separable_gaussian.txt'))
    with pytest.raises(NumericalContractError):
        Controller.run(scenario, str(tmp_path), plot=False, n_tau=5)

def test_schmidt_command():
    result = invoke('schmidt', scenario_path('pulsed_gaussian.txt'), '--n-points', '128')
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert lines[0].startswith('u_0 = ')
    assert float(lines[0].split('=')[1]) == pytest.approx(1.0, abs=1e-4)
    assert float(lines[-2].split('=')[1]) == pytest.approx(1.0, abs=1e-4)
    assert lines[-1].startswith('schmidt_number = ')

def test_schmidt_needs_pulsed_source():
    result = invoke('schmidt', scenario_path('separable_gaussian.txt'))
    assert result.exit_code == 2

def test_scenario_relative_to_working_copy(tmp_path):
    shutil.copy(scenario_path('fock_orthogonal.txt'), tmp_path / 'fock.txt')
    summary = Controller.run_file(str(tmp_path / 'fock.txt'), str(tmp_path / 'out'))
    assert summary.probability == pytest.approx(0.5)
    assert summary.wall_time >= 0
    data = json.loads((tmp_path / 'out' / 'summary.json').read_text())
    assert data == summary.to_json()
    assert np.isclose(data['probability'], 0.5)

def test_missing_tabulated_file_exits_with_2(tmp_path):
    path = tmp_path / 'scenario.txt'
    path.write_text('kind = separable\n[source]\nshape_a = tabulated\nfile_a = absent.txt\n')
    result = invoke('run', str(path), '--out', str(tmp_path / 'out'))
    assert result.exit_code == 2
    assert 'absent.txt' in result.output
