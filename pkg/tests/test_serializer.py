import os

import pytest

from src.models.errors import ScenarioError
from src.models.model import PhaseMatchingShape, Scenario, ScenarioKind, SpectralShape, Sweep
from src.utils.serializer import coerce, format_field, parse_scenario, serialize_scenario
from tests.conftest import SCENARIOS_DIR

MINIMAL_SEPARABLE = """\
kind = separable

[source]
shape_a = gaussian
shape_b = gaussian
"""

PULSED_DESIGN_POINT = """\
# sinc phase matching at the separable design point
kind = entangled_pulsed

[source]
phase_matching = sinc
sigma = 1e12
omega_bar = 1e15
gamma = 0.193
A = 1.6094e-12   # 1/(sigma sqrt(2 gamma))
B = -1.6094e-12
C = 0

[sweep]
tau_min = -10e-12
tau_max = 10e-12
n_tau = 201
"""

def error_of(text: str, base_dir: str | None = None) -> ScenarioError:
    with pytest.raises(ScenarioError) as info:
        parse_scenario(text, base_dir=base_dir)
    return info.value

def test_minimal_separable_defaults():
    scenario = parse_scenario(MINIMAL_SEPARABLE)
    assert scenario.kind == ScenarioKind.SEPARABLE
    assert scenario.parameters['shape_a'] == SpectralShape.GAUSSIAN
    assert scenario.parameters['sigma_a'] == scenario.parameters['sigma_b'] == 1e12
    assert scenario.parameters['file_a'] is None
    assert scenario.sweep == Sweep()
    assert scenario.grid.n_points is None

def test_pulsed_design_point_accepted():
    scenario = parse_scenario(PULSED_DESIGN_POINT)
    assert scenario.kind == ScenarioKind.ENTANGLED_PULSED
    assert scenario.parameters['phase_matching'] == PhaseMatchingShape.SINC
    assert scenario.parameters['B'] == -scenario.parameters['A']
    assert scenario.parameters['C'] == 0
    assert scenario.parameters['tol'] is None
    assert scenario.sweep.n_tau == 201

def test_unknown_key_names_line_and_field():
    error = error_of(MINIMAL_SEPARABLE + 'sgima = 1e12\n')
    assert error.field == 'sgima'
    assert error.line == 6
    assert 'sgima' in str(error)

@pytest.mark.parametrize('text,field', [
    ('[source]\neta = 0.5\n', 'kind'),
    ('kind = fock\n[source]\neta = 1.5\n', 'eta'),
    ('kind = fock\n[source]\neta = half\n', 'eta'),
    ('kind = separable\n[source]\nshape_a = tabulated\n', 'file_a'),
    ('kind = separable\n[source]\nfile_b = phi.txt\n', 'file_b'),
    ('kind = entangled_cw\n[source]\nL = 1e-3\nk_p0 = 1e7\n', 'k_10'),
    ('kind = entangled_pulsed\n[source]\ntol = 2\n', 'tol'),
    ('kind = fock\n[sweep]\nn_tau = 1\n', 'n_tau'),
    ('kind = fock\n[sweep]\nn_tau = 2.5\n', 'n_tau'),
    ('kind = fock\n[sweep]\ntau_min = 1e-12\ntau_max = -1e-12\n', 'tau_max'),
    ('kind = fock\n[grid]\nwindow = 0\n', 'window'),
    ('kind = mixed_independent\n[source]\nsigma_h = -1e12\n', 'sigma_h'),
])
def test_invalid_documents(text, field):
    assert error_of(text).field == field

def test_dispersion_excludes_explicit_coefficients():
    keys = 'L = 1e-3\nk_p0 = 2e7\nk_10 = 1e7\nk_20 = 1e7\nkp_prime = 5e-9\nk1_prime = 4.9e-9\nk2_prime = 5.1e-9\n'
    scenario = parse_scenario('kind = entangled_pulsed\n[source]\n' + keys)
    assert scenario.parameters['L'] == 1e-3
    assert error_of('kind = entangled_pulsed\n[source]\n' + keys + 'A = 1e-12\n').field == 'A'

@pytest.mark.parametrize('text,line', [
    ('kind = fock\n[output]\n', 2),
    ('kind = fock\n[source]\neta\n', 3),
    ('kind = fock\n[source]\neta = 0.5\neta = 0.4\n', 4),
    ('kind = fock\nkind = separable\n', 2),
    ('kind = bell\n', 1),
    ('eta = 0.5\n', 1),
])
def test_malformed_documents_report_line(text, line):
    assert error_of(text).line == line

def test_comments_and_blank_lines_ignored():
    scenario = parse_scenario('# two photons\n\nkind = fock   # discrete\n\n[source]\n  tag_b = V\n')
    assert scenario.parameters == {'eta': 0.5, 'tag_a': 'H', 'tag_b': 'V'}

def test_tabulated_file_resolves_against_base_dir(tmp_path):
    (tmp_path / 'phi.txt').write_text('0.0 1.0\n1.0 0.5\n2.0 0.0\n')
    text = 'kind = separable\n[source]\nshape_a = tabulated\nfile_a = phi.txt\n'
    scenario = parse_scenario(text, base_dir=str(tmp_path))
    assert scenario.parameters['file_a'] == os.path.join(str(tmp_path), 'phi.txt')

def test_missing_tabulated_file_is_a_scenario_error(tmp_path):
    error = error_of('kind = separable\n[source]\nshape_b = tabulated\nfile_b = absent.txt\n', base_dir=str(tmp_path))
    assert error.field == 'file_b'
    assert 'absent.txt' in str(error)

@pytest.mark.parametrize('name', sorted(os.listdir(SCENARIOS_DIR)))
def test_bundled_scenarios_round_trip(name):
    with open(os.path.join(SCENARIOS_DIR, name), 'r') as f:
        scenario = parse_scenario(f.read())
    text = serialize_scenario(scenario)
    assert parse_scenario(text) == scenario
    assert serialize_scenario(parse_scenario(text)) == text

def test_round_trip_keeps_full_precision():
    scenario = Scenario(ScenarioKind.FOCK, {'eta': 0.1 + 0.2, 'tag_a': 'H', 'tag_b': 'V'}, Sweep(-1 / 3 * 1e-11, 1e-11, 7))
    assert parse_scenario(serialize_scenario(scenario)) == scenario

def test_coerce():
    assert coerce(int, '1e3') == 1000
    assert coerce(int | None, '12') == 12
    assert coerce(SpectralShape, 'sinc') == SpectralShape.SINC
    with pytest.raises(ValueError):
        coerce(SpectralShape, 'lorentzian')
    with pytest.raises(ValueError):
        coerce(float | None, 'wide')

def test_format_field():
    assert format_field('nPoints') == 'n_points'
    assert format_field('tau_min') == 'tau_min'
