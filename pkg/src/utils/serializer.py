"""Helper functions for reading, validating and writing scenario documents.

Assumptions:
 - Documents are flat `key = value` text; `#` starts a comment
 - `kind = ...` precedes the first section
 - Sections are [source] (keys depend on kind), [sweep] and [grid]
"""
import os
import re
import types
from dataclasses import fields as fs
from enum import Enum
from typing import Any, Dict, Tuple

from src.models.errors import ScenarioError
from src.models.model import (
    DEFAULT_GAMMA,
    GridOverrides,
    PhaseMatchingShape,
    Scenario,
    ScenarioKind,
    SpectralShape,
    Sweep,
)

SECTIONS = ('source', 'sweep', 'grid')

DISPERSION_KEYS = ('L', 'k_p0', 'k_10', 'k_20', 'kp_prime', 'k1_prime', 'k2_prime')

_SINGLE_SOURCE = {
    'phase_matching': (PhaseMatchingShape, PhaseMatchingShape.SINC),
    'sigma': (float, 1e12),
    'omega_bar': (float, 1e15),
    'gamma': (float, DEFAULT_GAMMA),
    'A': (float, None),
    'B': (float, None),
    'C': (float, None),
    **{key: (float, None) for key in DISPERSION_KEYS},
}

def _photon(suffix: str) -> Dict[str, Tuple[type, Any]]:
    return {
        f'shape_{suffix}': (SpectralShape, SpectralShape.GAUSSIAN),
        f'sigma_{suffix}': (float, 1e12),
        f'center_{suffix}': (float, 1e15),
        f'scale_{suffix}': (float, None),
        f'order_{suffix}': (int, 0),
        f'file_{suffix}': (str, None),
    }

def _source(suffix: str) -> Dict[str, Tuple[type, Any]]:
    return {
        f'phase_matching_{suffix}': (PhaseMatchingShape, PhaseMatchingShape.SINC),
        f'sigma_{suffix}': (float, 1e12),
        f'A_{suffix}': (float, None),
        f'B_{suffix}': (float, None),
        f'C_{suffix}': (float, None),
    }

# key -> (type, default); None means optional with no default
SOURCE_SCHEMAS: Dict[ScenarioKind, Dict[str, Tuple[type, Any]]] = {
    ScenarioKind.FOCK: {
        'eta': (float, 0.5),
        'tag_a': (str, 'H'),
        'tag_b': (str, 'H'),
    },
    ScenarioKind.SEPARABLE: {
        **_photon('a'),
        **_photon('b'),
        'gamma': (float, DEFAULT_GAMMA),
    },
    ScenarioKind.ENTANGLED_PULSED: {
        **_SINGLE_SOURCE,
        'tol': (float, None),
    },
    ScenarioKind.ENTANGLED_CW: dict(_SINGLE_SOURCE),
    ScenarioKind.MIXED_INDEPENDENT: {
        **_source('f'),
        **_source('h'),
        'omega_bar': (float, 1e15),
        'gamma': (float, DEFAULT_GAMMA),
        'tol': (float, None),
    },
}

def coerce(field_type: Any, text: str) -> Any:
    """Convert document text to field_type; raises ValueError on failure."""
    if isinstance(field_type, types.UnionType):
        for _type in field_type.__args__:
            if _type is type(None):
                continue
            try:
                return coerce(_type, text)
            except ValueError:
                continue
        raise ValueError(f'{text!r} matches none of {field_type}')
    if isinstance(field_type, type) and issubclass(field_type, Enum):
        return field_type(text)
    if field_type is int:
        number = float(text)
        if not number.is_integer():
            raise ValueError(f'{text!r} is not an integer')
        return int(number)
    if field_type is float:
        return float(text)
    return field_type(text)

def format_field(key: str) -> str:
    return re.sub(r'[A-Z]', repl=lambda match: f'_{str(match.group(0)).lower()}', string=key)

def format_value(value: Any) -> str:
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, float):
        return repr(value)
    return str(value)

def serialize_as_dataclass(o: type, lines: Dict[str, int] | None = None, **kwargs) -> object:
    """Build dataclass o from document text values, rejecting keys it has no field for."""
    lines = lines or dict()
    field_types = {field.name: field.type for field in fs(o)}
    attributes = dict()
    for field, text in kwargs.items():
        formatted_field = format_field(field)
        field_type = field_types.get(formatted_field, None)

        if field_type is None:
            raise ScenarioError(f'Unknown key {field!r} in [{o.__name__.lower()}]', line=lines.get(field), field=field)

        try:
            attributes[formatted_field] = coerce(field_type, text)
        except ValueError as e:
            raise ScenarioError(f'Invalid value {text!r}: {e}', line=lines.get(field), field=field) from e

    return o(**attributes)

def _parse_source(kind: ScenarioKind, entries: Dict[str, str], lines: Dict[str, int], base_dir: str | None) -> Dict[str, Any]:
    schema = SOURCE_SCHEMAS[kind]
    parameters = {key: default for key, (_, default) in schema.items()}
    for key, text in entries.items():
        if key not in schema:
            raise ScenarioError(f'Unknown key {key!r} for kind {kind.value}', line=lines.get(key), field=key)
        field_type, _ = schema[key]
        try:
            value = coerce(field_type, text)
        except ValueError as e:
            raise ScenarioError(f'Invalid value {text!r}: {e}', line=lines.get(key), field=key) from e
        if key.startswith('file_') and base_dir is not None:
            value = os.path.join(base_dir, value)
        parameters[key] = value
    return parameters

def parse_scenario(text: str, base_dir: str | None = None) -> Scenario:
    """Parse and validate a scenario document. Relative data-file paths resolve against base_dir."""
    kind = None
    section = None
    entries = {name: dict() for name in SECTIONS}
    lines = {name: dict() for name in SECTIONS}

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue

        header = re.fullmatch(r'\[\s*(\w+)\s*\]', line)
        if header:
            section = header.group(1)
            if section not in entries:
                raise ScenarioError(f'Unknown section [{section}]', line=number)
            continue

        key, separator, value = line.partition('=')
        key, value = key.strip(), value.strip()
        if not separator or not key:
            raise ScenarioError("Expected 'key = value'", line=number)

        if section is None:
            if key != 'kind':
                raise ScenarioError(f'Unknown key {key!r} before the first section', line=number, field=key)
            if kind is not None:
                raise ScenarioError('Duplicate key', line=number, field=key)
            try:
                kind = ScenarioKind(value)
            except ValueError as e:
                raise ScenarioError(f'Unknown scenario kind {value!r}', line=number, field=key) from e
            continue

        if key in entries[section]:
            raise ScenarioError('Duplicate key', line=number, field=key)
        entries[section][key] = value
        lines[section][key] = number

    if kind is None:
        raise ScenarioError('Missing required key', field='kind')

    scenario = Scenario(
        kind,
        _parse_source(kind, entries['source'], lines['source'], base_dir),
        serialize_as_dataclass(Sweep, lines['sweep'], **entries['sweep']),
        serialize_as_dataclass(GridOverrides, lines['grid'], **entries['grid']),
    )
    validate_scenario(scenario)
    return scenario

def serialize_scenario(scenario: Scenario) -> str:
    output = [f'kind = {scenario.kind.value}', '', '[source]']
    output.extend(
        f'{key} = {format_value(value)}'
        for key, value in scenario.parameters.items()
        if value is not None
    )
    for name, record in (('sweep', scenario.sweep), ('grid', scenario.grid)):
        output.extend(('', f'[{name}]'))
        output.extend(
            f'{field.name} = {format_value(getattr(record, field.name))}'
            for field in fs(record)
            if getattr(record, field.name) is not None
        )
    return '\n'.join(output) + '\n'

def _require(condition: bool, message: str, field: str) -> None:
    if not condition:
        raise ScenarioError(message, field=field)

def _positive(parameters: Dict[str, Any], *keys: str) -> None:
    for key in keys:
        value = parameters.get(key)
        if value is not None:
            _require(value > 0, f'Must be positive, got {value}', key)

def _validate_dispersion(parameters: Dict[str, Any]) -> None:
    given = [key for key in DISPERSION_KEYS if parameters.get(key) is not None]
    if not given:
        return
    missing = [key for key in DISPERSION_KEYS if key not in given]
    _require(not missing, f'Dispersion parameters need all of {", ".join(DISPERSION_KEYS)}', missing[0] if missing else 'L')
    for key in ('A', 'B', 'C'):
        _require(parameters.get(key) is None, 'Give either A/B/C or dispersion parameters, not both', key)

def validate_scenario(scenario: Scenario) -> None:
    """Check required keys and value ranges before any computation."""
    parameters = scenario.parameters
    kind = scenario.kind

    missing = [key for key in SOURCE_SCHEMAS[kind] if key not in parameters]
    _require(not missing, 'Missing required key', missing[0] if missing else '')
    unknown = [key for key in parameters if key not in SOURCE_SCHEMAS[kind]]
    _require(not unknown, f'Unknown key for kind {kind.value}', unknown[0] if unknown else '')

    if kind == ScenarioKind.FOCK:
        _require(0 <= parameters['eta'] <= 1, f'Reflectivity must lie in [0, 1], got {parameters["eta"]}', 'eta')
        for key in ('tag_a', 'tag_b'):
            _require(bool(parameters[key]), 'Tag must be non-empty', key)
    elif kind == ScenarioKind.SEPARABLE:
        _positive(parameters, 'sigma_a', 'sigma_b', 'scale_a', 'scale_b', 'gamma')
        for suffix in ('a', 'b'):
            shape = parameters[f'shape_{suffix}']
            has_file = parameters[f'file_{suffix}'] is not None
            _require(parameters[f'order_{suffix}'] >= 0, 'Hermite-Gauss order must be non-negative', f'order_{suffix}')
            _require(has_file == (shape == SpectralShape.TABULATED), f'file_{suffix} is required exactly when shape_{suffix} = tabulated', f'file_{suffix}')
            if has_file:
                path = parameters[f'file_{suffix}']
                _require(os.path.isfile(path), f'No such file {path!r}', f'file_{suffix}')
    elif kind in (ScenarioKind.ENTANGLED_PULSED, ScenarioKind.ENTANGLED_CW):
        _positive(parameters, 'sigma', 'omega_bar', 'gamma')
        _validate_dispersion(parameters)
    else:
        _positive(parameters, 'sigma_f', 'sigma_h', 'omega_bar', 'gamma')

    tol = parameters.get('tol')
    if tol is not None:
        _require(0 <= tol <= 1, f'Truncation tolerance must lie in [0, 1], got {tol}', 'tol')

    sweep = scenario.sweep
    _require(sweep.n_tau >= 2, f'n_tau must be at least 2, got {sweep.n_tau}', 'n_tau')
    _require(sweep.tau_max > sweep.tau_min, 'tau_max must exceed tau_min', 'tau_max')
    grid = scenario.grid
    if grid.n_points is not None:
        _require(grid.n_points >= 3, f'n_points must be at least 3, got {grid.n_points}', 'n_points')
    if grid.window is not None:
        _require(grid.window > 0, f'window must be positive, got {grid.window}', 'window')
