"""
Experiment configuration file: schema, defaults, overrides and validation

The file is JSON with fixed sections. Missing keys take the defaults below;
unknown keys are errors. Beamwidths are degrees and gains are dB here and
nowhere else.
"""
import copy
import json
import math
import re
from contextlib import contextmanager
from dataclasses import replace
from typing import Any, Dict, Iterable, List, Optional, Tuple

from ..simulation.antenna import AntennaPattern
from ..simulation.blockage import BlockageMode, BlockageModel, BodyGeometry
from ..simulation.channel import CHANNEL_ROWS, RadioConfig
from ..simulation.engine import SCENARIOS, SimulationConfig, UePlacement, apply_scenario
from ..simulation.geometry import TWO_PI, Point2, Venue
from ..utils.units import db_to_linear

CUSTOM_SCENARIO = 'custom'

# ---------- SCHEMA ----------
DEFAULT_DOCUMENT: Dict[str, Dict[str, Any]] = {
    'venue': {
        'side_m': 400.0,
    },
    'deployment': {
        'inter_site_distance_m': 20.0,
        'ap_height_m': 10.0,
    },
    'antenna': {
        'ap_beamwidth_deg': 28.0,
        'ue_beamwidth_deg': 45.0,
        'side_lobe_gain_db': -10.0,
        'serving_always_main_lobe': False,
    },
    'body': {
        'width_m': 0.4,
        'height_above_ue_m': 0.4,
        'user_body_distance_m': 0.3,
        'rb_density_per_m2': 0.0,
        'mode': BlockageMode.ANALYTIC.value,
        'quadrature_tolerance': 1e-8,
    },
    'channel': {
        'row': 'hand',
        'shadowing_enabled': True,
        'fading_enabled': True,
    },
    'radio': {
        'tx_power_dbm': 20.0,
        'bandwidth_hz': 2e9,
        'carrier_hz': 60e9,
        'noise_figure_db': 9.0,
        'sinr_threshold_db': 5.0,
    },
    'simulation': {
        'trials': 10000,
        'seed': 1,
        'scenario': CUSTOM_SCENARIO,
        'ue_position_m': None,
        'association_excludes_fading': True,
    },
    'sweep': {
        'inter_site_distances_m': None,
        'ap_beamwidths_deg': None,
        'ue_beamwidths_deg': None,
        'scenarios': None,
    },
    'blockage_prob': {
        'd_max_m': 100.0,
        'd_step_m': 2.0,
        'validation_scenes': 100000,
    },
}

# Value kinds: number, integer, boolean, string, number-list, string-list, point
FIELD_KINDS: Dict[str, str] = {
    'venue.side_m': 'number',
    'deployment.inter_site_distance_m': 'number',
    'deployment.ap_height_m': 'number',
    'antenna.ap_beamwidth_deg': 'number',
    'antenna.ue_beamwidth_deg': 'number',
    'antenna.side_lobe_gain_db': 'number',
    'antenna.serving_always_main_lobe': 'boolean',
    'body.width_m': 'number',
    'body.height_above_ue_m': 'number',
    'body.user_body_distance_m': 'number',
    'body.rb_density_per_m2': 'number',
    'body.mode': 'string',
    'body.quadrature_tolerance': 'number',
    'channel.row': 'string',
    'channel.shadowing_enabled': 'boolean',
    'channel.fading_enabled': 'boolean',
    'radio.tx_power_dbm': 'number',
    'radio.bandwidth_hz': 'number',
    'radio.carrier_hz': 'number',
    'radio.noise_figure_db': 'number',
    'radio.sinr_threshold_db': 'number',
    'simulation.trials': 'integer',
    'simulation.seed': 'integer',
    'simulation.scenario': 'string',
    'simulation.ue_position_m': 'point',
    'simulation.association_excludes_fading': 'boolean',
    'sweep.inter_site_distances_m': 'number-list',
    'sweep.ap_beamwidths_deg': 'number-list',
    'sweep.ue_beamwidths_deg': 'number-list',
    'sweep.scenarios': 'string-list',
    'blockage_prob.d_max_m': 'number',
    'blockage_prob.d_step_m': 'number',
    'blockage_prob.validation_scenes': 'integer',
}

# Kinds that also accept null
NULLABLE = {'point', 'number-list', 'string-list'}


class ConfigError(ValueError):
    """Invalid configuration file, override or value"""


def _line_of(text: Optional[str], key: str) -> Optional[int]:
    if not text:
        return None
    match = re.search(r'"' + re.escape(key) + r'"\s*:', text)
    if match is None:
        return None
    return text.count('\n', 0, match.start()) + 1


def _where(source: str, text: Optional[str], key: str) -> str:
    line = _line_of(text, key)
    return f"{source}:{line}" if line is not None else source


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def _check_kind(path: str, value: Any, where: str):
    kind = FIELD_KINDS[path]
    if value is None and kind in NULLABLE:
        return
    valid = {
        'number': _is_number,
        'integer': lambda v: isinstance(v, int) and not isinstance(v, bool),
        'boolean': lambda v: isinstance(v, bool),
        'string': lambda v: isinstance(v, str),
        'number-list': lambda v: isinstance(v, list) and len(v) > 0 and all(_is_number(x) for x in v),
        'string-list': lambda v: isinstance(v, list) and len(v) > 0 and all(isinstance(x, str) for x in v),
        'point': lambda v: isinstance(v, list) and len(v) == 2 and all(_is_number(x) for x in v),
    }[kind]
    if not valid(value):
        expected = kind + (' or null' if kind in NULLABLE else '')
        raise ConfigError(f"{where}: {path} must be a {expected}, got {json.dumps(value)}")


def _reject_duplicates(pairs: List[Tuple[str, Any]]) -> Dict[str, Any]:
    result = {}
    for key, value in pairs:
        if key in result:
            raise ConfigError(f"duplicate key {key!r}")
        result[key] = value
    return result


# ---------- DOCUMENTS ----------
def normalize_document(raw: Any, text: Optional[str] = None,
                       source: str = '<document>') -> Dict[str, Dict[str, Any]]:
    """
    Merge a parsed document over the defaults and type-check every value

    Args:
        raw: Parsed JSON value
        text: Source text, used to report line numbers
        source: File name for diagnostics

    Returns:
        Complete document with every section and key present
    """
    if not isinstance(raw, dict):
        raise ConfigError(f"{source}: top level must be a JSON object with sections {list(DEFAULT_DOCUMENT)}")

    document = copy.deepcopy(DEFAULT_DOCUMENT)
    for section, values in raw.items():
        if section not in DEFAULT_DOCUMENT:
            raise ConfigError(
                f"{_where(source, text, section)}: unknown section {section!r}; "
                f"expected one of {list(DEFAULT_DOCUMENT)}"
            )
        if not isinstance(values, dict):
            raise ConfigError(f"{_where(source, text, section)}: section {section!r} must be an object")
        for key, value in values.items():
            path = f"{section}.{key}"
            if path not in FIELD_KINDS:
                raise ConfigError(
                    f"{_where(source, text, key)}: unknown key {path!r}; "
                    f"expected one of {sorted(DEFAULT_DOCUMENT[section])}"
                )
            _check_kind(path, value, _where(source, text, key))
            document[section][key] = value
    return document


def load_document(path) -> Dict[str, Dict[str, Any]]:
    """Read and normalize a configuration file"""
    source = str(path)
    try:
        with open(path, 'r', encoding='utf-8') as handle:
            text = handle.read()
    except OSError as e:
        raise ConfigError(f"{source}: cannot read configuration: {e}") from None

    if not text.strip():
        raise ConfigError(
            f"{source}: configuration is empty; expected a JSON object with sections "
            f"{list(DEFAULT_DOCUMENT)} ({{}} selects all defaults)"
        )
    try:
        raw = json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{source}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}") from None
    except ConfigError as e:
        raise ConfigError(f"{source}: {e}") from None
    return normalize_document(raw, text, source)


def apply_overrides(document: Dict[str, Dict[str, Any]],
                    overrides: Iterable[str]) -> Dict[str, Dict[str, Any]]:
    """
    Apply 'section.key=value' overrides

    Values are parsed as JSON literals, falling back to plain strings.
    """
    updated = copy.deepcopy(document)
    for item in overrides:
        if '=' not in item:
            raise ConfigError(f"override {item!r} must look like section.key=value")
        path, raw_value = item.split('=', 1)
        path = path.strip()
        if path not in FIELD_KINDS:
            raise ConfigError(f"override {item!r}: unknown key {path!r}")
        try:
            value = json.loads(raw_value)
        except json.JSONDecodeError:
            value = raw_value
        _check_kind(path, value, f"override {item!r}")
        section, key = path.split('.', 1)
        updated[section][key] = value
    return updated


def dump_document(document: Dict[str, Dict[str, Any]]) -> str:
    """Canonical JSON text of a document; loads back to an equal document"""
    return json.dumps(document, indent=2) + '\n'


# ---------- BUILDING ----------
@contextmanager
def _section(path: str):
    try:
        yield
    except ValueError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"{path}: {e}") from None


def _beamwidth_rad(degrees: float) -> float:
    if degrees == 360:
        return TWO_PI
    if degrees == 180:
        return math.pi
    return math.radians(degrees)


def build_config(document: Dict[str, Dict[str, Any]], apply_preset: bool = True) -> SimulationConfig:
    """
    Turn a normalized document into a SimulationConfig

    A catalogue scenario label overrides the body density, the user-body
    distance and the channel row. With apply_preset=False the label is only
    validated and the sections are kept as written.
    """
    venue_doc, deployment_doc = document['venue'], document['deployment']
    antenna_doc, body_doc = document['antenna'], document['body']
    channel_doc, radio_doc = document['channel'], document['radio']
    simulation_doc = document['simulation']

    with _section('venue'):
        venue = Venue(float(venue_doc['side_m']))
    with _section('antenna.side_lobe_gain_db'):
        side_lobe = db_to_linear(float(antenna_doc['side_lobe_gain_db']))
    with _section('antenna.ap_beamwidth_deg'):
        ap_pattern = AntennaPattern(_beamwidth_rad(antenna_doc['ap_beamwidth_deg']), side_lobe)
    with _section('antenna.ue_beamwidth_deg'):
        ue_pattern = AntennaPattern(_beamwidth_rad(antenna_doc['ue_beamwidth_deg']), side_lobe)
    with _section('body'):
        geometry = BodyGeometry(width=float(body_doc['width_m']),
                                height_above_ue=float(body_doc['height_above_ue_m']),
                                user_body_distance=float(body_doc['user_body_distance_m']))
        try:
            mode = BlockageMode(body_doc['mode'])
        except ValueError:
            raise ValueError(
                f"mode must be one of {[m.value for m in BlockageMode]}, got {body_doc['mode']!r}"
            ) from None
        blockage = BlockageModel(geometry=geometry, rb_density=float(body_doc['rb_density_per_m2']),
                                 mode=mode, quadrature_tolerance=float(body_doc['quadrature_tolerance']))
    with _section('channel'):
        if channel_doc['row'] not in CHANNEL_ROWS:
            raise ValueError(f"row must be one of {sorted(CHANNEL_ROWS)}, got {channel_doc['row']!r}")
        channel = replace(CHANNEL_ROWS[channel_doc['row']],
                          shadowing_enabled=channel_doc['shadowing_enabled'],
                          fading_enabled=channel_doc['fading_enabled'])
    with _section('radio'):
        radio = RadioConfig(tx_power_dbm=float(radio_doc['tx_power_dbm']),
                            bandwidth_hz=float(radio_doc['bandwidth_hz']),
                            carrier_hz=float(radio_doc['carrier_hz']),
                            noise_figure_db=float(radio_doc['noise_figure_db']),
                            sinr_threshold_db=float(radio_doc['sinr_threshold_db']))

    scenario = simulation_doc['scenario']
    if scenario != CUSTOM_SCENARIO and scenario not in SCENARIOS:
        raise ConfigError(
            f"simulation.scenario: expected {CUSTOM_SCENARIO!r} or one of {sorted(SCENARIOS)}, got {scenario!r}"
        )
    position = simulation_doc['ue_position_m']
    placement = UePlacement() if position is None else UePlacement(Point2(float(position[0]), float(position[1])))

    with _section('simulation'):
        config = SimulationConfig(
            venue=venue,
            delta=float(deployment_doc['inter_site_distance_m']),
            h_A=float(deployment_doc['ap_height_m']),
            ap_pattern=ap_pattern,
            ue_pattern=ue_pattern,
            blockage=blockage,
            channel=channel,
            radio=radio,
            trials=simulation_doc['trials'],
            seed=simulation_doc['seed'],
            ue_placement=placement,
            association_excludes_fading=simulation_doc['association_excludes_fading'],
            serving_always_main_lobe=antenna_doc['serving_always_main_lobe'],
            scenario=CUSTOM_SCENARIO,
        )
    if apply_preset and scenario != CUSTOM_SCENARIO:
        config = apply_scenario(config, scenario)
    return config


def load_config(path) -> SimulationConfig:
    return build_config(load_document(path))


def sweep_axes(document: Dict[str, Dict[str, Any]]) -> Tuple[List[float], List[float], List[float], List[str]]:
    """
    Sweep grids in engine units (metres, radians, labels)

    Unset lists fall back to the singleton of the base configuration.
    """
    sweep_doc = document['sweep']
    deltas = sweep_doc['inter_site_distances_m'] or [document['deployment']['inter_site_distance_m']]
    ap_deg = sweep_doc['ap_beamwidths_deg'] or [document['antenna']['ap_beamwidth_deg']]
    ue_deg = sweep_doc['ue_beamwidths_deg'] or [document['antenna']['ue_beamwidth_deg']]
    scenarios = sweep_doc['scenarios'] or [document['simulation']['scenario']]
    for label in scenarios:
        if label != CUSTOM_SCENARIO and label not in SCENARIOS:
            raise ConfigError(f"sweep.scenarios: unknown scenario {label!r}")
    return ([float(d) for d in deltas], [_beamwidth_rad(w) for w in ap_deg],
            [_beamwidth_rad(w) for w in ue_deg], list(scenarios))


def probe_distances(document: Dict[str, Dict[str, Any]]) -> List[float]:
    """0, step, 2*step, ... up to d_max inclusive"""
    section = document['blockage_prob']
    d_max, step = float(section['d_max_m']), float(section['d_step_m'])
    if d_max < 0:
        raise ConfigError(f"blockage_prob.d_max_m must be non-negative, got {d_max}")
    if not step > 0:
        raise ConfigError(f"blockage_prob.d_step_m must be positive, got {step}")
    if section['validation_scenes'] < 1:
        raise ConfigError(f"blockage_prob.validation_scenes must be at least 1, got {section['validation_scenes']}")
    count = int(math.floor(d_max / step + 1e-9)) + 1
    return [i * step for i in range(count)]
