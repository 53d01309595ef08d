"""
Monte Carlo engine

One trial drops one UE, draws blockage, shadowing and fading for every AP,
associates the UE to the strongest long-term AP and records the SINR.
Batches spread trial chunks over a thread pool; every trial owns a
counter-based stream, so results do not depend on the schedule.
"""
import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..utils.settings import RuntimeSettings
from ..utils.random_streams import StreamPurpose, trial_stream
from .antenna import AntennaPattern, BeamState, ap_gain_array, ue_gain_array, ue_gain_as_serving_array
from .blockage import (
    BlockageMode, BlockageModel, BlockageState, RandomBodyTable, p_blocked,
    p_blocked_array, random_body_table, sample_body_scene, scene_blocks,
)
from .channel import (
    CHANNEL_ROWS, ChannelParams, RadioConfig, noise_power_mw, path_gain, sample_fading, sample_shadowing,
)
from .geometry import TWO_PI, Deployment, Point2, Venue, generate_hex_grid, sample_uniform_point
from .reporting import MetricsRow, MetricsTable, aggregate_metrics

logger = logging.getLogger(__name__)

MAX_SEED = 2 ** 64 - 1


# ---------- SCENARIOS ----------
@dataclass(frozen=True)
class Scenario:
    """Crowd density, UE holding position and the matching channel row"""
    rb_density: float
    user_body_distance: float
    channel_row: str


SCENARIOS: Dict[str, Scenario] = {
    'empty-hand': Scenario(rb_density=0.0, user_body_distance=0.3, channel_row='hand'),
    'empty-pocket': Scenario(rb_density=0.0, user_body_distance=0.0, channel_row='pocket'),
    'crowded-hand': Scenario(rb_density=3.0, user_body_distance=0.3, channel_row='hand'),
    'crowded-pocket': Scenario(rb_density=3.0, user_body_distance=0.0, channel_row='pocket'),
}


# ---------- CONFIGURATION ----------
@dataclass(frozen=True)
class UePlacement:
    """Uniform over the venue unless a fixed point is given"""
    fixed_point: Optional[Point2] = None

    @property
    def is_fixed(self) -> bool:
        return self.fixed_point is not None


@dataclass(frozen=True)
class SimulationConfig:
    venue: Venue
    delta: float
    h_A: float
    ap_pattern: AntennaPattern
    ue_pattern: AntennaPattern
    blockage: BlockageModel
    channel: ChannelParams
    radio: RadioConfig
    trials: int
    seed: int
    ue_placement: UePlacement = field(default_factory=UePlacement)
    association_excludes_fading: bool = True
    serving_always_main_lobe: bool = False
    scenario: str = 'custom'
    grid_point: Tuple[int, ...] = (0, 0, 0, 0)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"Trials must be at least 1, got {self.trials}")
        if not 0 <= self.seed <= MAX_SEED:
            raise ValueError(f"Seed must be a 64-bit non-negative integer, got {self.seed}")
        if not self.association_excludes_fading:
            raise ValueError("Association always excludes small-scale fading")
        if self.ue_placement.is_fixed and not self.venue.contains(self.ue_placement.fixed_point):
            raise ValueError(f"Fixed UE position {self.ue_placement.fixed_point} lies outside the venue")
        # Validates delta and h_A
        generate_hex_grid(self.venue, self.delta, self.h_A)

    @property
    def deployment(self) -> Deployment:
        return generate_hex_grid(self.venue, self.delta, self.h_A)


def apply_scenario(config: SimulationConfig, label: str) -> SimulationConfig:
    """
    Switch a configuration to a catalogue scenario

    The configuration's own label is accepted and leaves it unchanged.
    """
    if label not in SCENARIOS:
        if label == config.scenario:
            return config
        if label == 'custom':
            raise ValueError(f"Cannot return to 'custom' from preset {config.scenario!r}; "
                             "start from a configuration without a preset")
        raise ValueError(f"Unknown scenario {label!r}; expected one of {sorted(SCENARIOS)}")
    preset = SCENARIOS[label]
    geometry = replace(config.blockage.geometry, user_body_distance=preset.user_body_distance)
    blockage = replace(config.blockage, geometry=geometry, rb_density=preset.rb_density)
    row = CHANNEL_ROWS[preset.channel_row]
    channel = replace(row, shadowing_enabled=config.channel.shadowing_enabled,
                      fading_enabled=config.channel.fading_enabled)
    return replace(config, blockage=blockage, channel=channel, scenario=label)


# ---------- TRIALS ----------
@dataclass(frozen=True)
class TrialResult:
    sinr_linear: float
    serving_index: int
    serving_state: BlockageState
    ue_pos: Point2


@dataclass(frozen=True, eq=False)
class TrialLinks:
    """Per-AP factors of one trial, arrays indexed like the deployment"""
    ue_pos: Point2
    distances: np.ndarray
    azimuths: np.ndarray
    nlos: np.ndarray
    ap_gain: np.ndarray
    ue_gain: np.ndarray
    path_gain: np.ndarray
    shadow_gain: np.ndarray
    fading_gain: np.ndarray
    long_term_power_mw: np.ndarray
    rx_power_mw: np.ndarray
    serving_index: int

    def sinr(self, noise_mw: float) -> float:
        serving_power = self.rx_power_mw[self.serving_index]
        others = np.ones(self.rx_power_mw.shape, dtype=bool)
        others[self.serving_index] = False
        return float(serving_power / (noise_mw + self.rx_power_mw[others].sum()))


def blockage_table(config: SimulationConfig,
                   settings: Optional[RuntimeSettings] = None) -> Optional[RandomBodyTable]:
    """Cached random-body table for analytic runs with random bodies, else None"""
    blockage = config.blockage
    if blockage.mode is not BlockageMode.ANALYTIC:
        return None
    if blockage.random_body_count(config.venue.side) == 0:
        return None
    settings = settings or RuntimeSettings()
    return random_body_table(blockage.geometry, float(config.h_A), float(config.venue.side),
                             float(blockage.quadrature_tolerance), settings.table_nodes)


def simulate_links(config: SimulationConfig, trial_index: int,
                   table: Optional[RandomBodyTable] = None) -> TrialLinks:
    """
    Every per-AP factor of one trial

    Draw order on the trial stream: UE position (uniform placement only),
    blockage, shadowing, fading.
    """
    if trial_index < 0:
        raise ValueError(f"Trial index must be non-negative, got {trial_index}")
    rng = trial_stream(config.seed, StreamPurpose.NETWORK_TRIAL, (*config.grid_point, trial_index))
    deployment = config.deployment
    venue, h_A = config.venue, config.h_A
    channel = config.channel

    if config.ue_placement.is_fixed:
        ue = config.ue_placement.fixed_point
    else:
        ue = sample_uniform_point(venue, rng)
    offsets = deployment.coordinates - np.array([ue.x, ue.y])
    distances = np.hypot(offsets[:, 0], offsets[:, 1])
    azimuths = np.mod(np.arctan2(offsets[:, 1], offsets[:, 0]), TWO_PI)

    # ---------- BLOCKAGE ----------
    blockage = config.blockage
    if blockage.mode is BlockageMode.ANALYTIC:
        probabilities = p_blocked_array(distances, blockage, h_A, venue.side, table)
        nlos = rng.random(distances.size) < probabilities
    else:
        geometry = blockage.geometry
        reach = float(distances.max()) * geometry.height_above_ue / h_A
        scene = sample_body_scene(ue, venue, geometry, blockage.random_body_count(venue.side), rng,
                                  max_body_distance=reach)
        nlos = scene_blocks(scene, distances, azimuths, geometry, h_A)

    # ---------- LONG-TERM POWER AND ASSOCIATION ----------
    shadow = sample_shadowing(nlos, channel, rng)
    path = path_gain(np.hypot(distances, h_A), nlos, channel)
    g_ap = ap_gain_array(distances, config.ap_pattern, h_A)
    g_ue_candidate = ue_gain_as_serving_array(distances, config.ue_pattern, h_A,
                                              config.serving_always_main_lobe)
    long_term = config.radio.tx_power_mw * g_ap * g_ue_candidate * path * shadow
    serving = int(np.argmax(long_term))

    # ---------- FADING AND SINR ----------
    fading = sample_fading(nlos, channel, rng)
    beam = BeamState(serving_orientation=float(azimuths[serving]),
                     serving_distance=float(distances[serving]))
    g_ue = ue_gain_array(distances, azimuths, beam, config.ue_pattern, h_A,
                         serving_always_main_lobe=config.serving_always_main_lobe,
                         serving_index=serving)
    rx_power = config.radio.tx_power_mw * g_ap * g_ue * path * shadow * fading

    return TrialLinks(ue_pos=ue, distances=distances, azimuths=azimuths, nlos=nlos,
                      ap_gain=g_ap, ue_gain=g_ue, path_gain=path, shadow_gain=shadow,
                      fading_gain=fading, long_term_power_mw=long_term, rx_power_mw=rx_power,
                      serving_index=serving)


def run_trial(config: SimulationConfig, trial_index: int,
              table: Optional[RandomBodyTable] = None) -> TrialResult:
    """One UE drop; a deterministic function of (seed, grid point, trial_index)"""
    links = simulate_links(config, trial_index, table)
    serving = links.serving_index
    state = BlockageState.NLOS if links.nlos[serving] else BlockageState.LOS
    return TrialResult(sinr_linear=links.sinr(noise_power_mw(config.radio)),
                       serving_index=serving, serving_state=state, ue_pos=links.ue_pos)


# ---------- BATCHES ----------
def _chunks(total: int, size: int) -> List[Tuple[int, int]]:
    return [(start, min(start + size, total)) for start in range(0, total, size)]


def _run_chunked(total: int, work: Callable[[int, int], np.ndarray],
                 settings: RuntimeSettings) -> List[np.ndarray]:
    """Run work(start, stop) over all chunks; results in chunk order"""
    chunks = _chunks(total, settings.chunk_trials)
    workers = min(settings.worker_count, len(chunks))
    if workers <= 1:
        return [work(start, stop) for start, stop in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(work, start, stop) for start, stop in chunks]
        return [future.result() for future in futures]


def run_sinr_samples(config: SimulationConfig,
                     settings: Optional[RuntimeSettings] = None) -> np.ndarray:
    """Linear SINR of every trial, indexed by trial"""
    settings = settings or RuntimeSettings()
    table = blockage_table(config, settings)
    noise_mw = noise_power_mw(config.radio)

    def work(start: int, stop: int) -> np.ndarray:
        values = np.array([simulate_links(config, index, table).sinr(noise_mw)
                           for index in range(start, stop)])
        logger.debug("Trials %d-%d done (grid point %s)", start, stop - 1, config.grid_point)
        return values

    return np.concatenate(_run_chunked(config.trials, work, settings))


def _beamwidth_deg(pattern: AntennaPattern) -> float:
    return round(math.degrees(pattern.beamwidth), 9)


def run_batch(config: SimulationConfig, settings: Optional[RuntimeSettings] = None) -> MetricsRow:
    """
    Coverage and ASE of one configuration point

    Returns:
        MetricsRow; coverage counts SINR strictly above the threshold
    """
    settings = settings or RuntimeSettings()
    logger.info("Batch %s: delta=%g m, %d trials, %d APs, up to %d workers",
                config.scenario, config.delta, config.trials, config.deployment.ap_count,
                settings.worker_count)
    sinr_values = run_sinr_samples(config, settings)
    coverage, coverage_ci, ase = aggregate_metrics(sinr_values, config.radio.sinr_threshold, config.delta)
    logger.info("Batch %s: delta=%g m done, coverage=%.4f, ASE=%.4g",
                config.scenario, config.delta, coverage, ase)
    return MetricsRow(
        delta_m=float(config.delta),
        omega_a_deg=_beamwidth_deg(config.ap_pattern),
        omega_u_deg=_beamwidth_deg(config.ue_pattern),
        scenario=config.scenario,
        coverage=coverage,
        coverage_ci=coverage_ci,
        ase_bps_hz_m2=ase,
        trials=config.trials,
        seed=config.seed,
    )


def sweep(base: SimulationConfig, deltas: Sequence[float], ap_beamwidths: Sequence[float],
          ue_beamwidths: Sequence[float], scenarios: Sequence[str],
          settings: Optional[RuntimeSettings] = None) -> MetricsTable:
    """
    run_batch over the Cartesian product of the grids

    Beamwidths are in radians. Each point draws from streams keyed by its
    grid indices, so any point reproduces on its own.
    """
    for name, values in (('deltas', deltas), ('ap_beamwidths', ap_beamwidths),
                         ('ue_beamwidths', ue_beamwidths), ('scenarios', scenarios)):
        if len(values) == 0:
            raise ValueError(f"Sweep list {name} must not be empty")

    rows = []
    grid = itertools.product(enumerate(deltas), enumerate(ap_beamwidths),
                             enumerate(ue_beamwidths), enumerate(scenarios))
    for (i, delta), (j, omega_a), (k, omega_u), (l, label) in grid:
        point = replace(
            base,
            delta=float(delta),
            ap_pattern=AntennaPattern(float(omega_a), base.ap_pattern.side_lobe_gain),
            ue_pattern=AntennaPattern(float(omega_u), base.ue_pattern.side_lobe_gain),
            grid_point=(i, j, k, l),
        )
        rows.append(run_batch(apply_scenario(point, label), settings))
    logger.info("Sweep finished: %d points", len(rows))
    return MetricsTable(rows)


# ---------- BLOCKAGE VALIDATION ----------
VALIDATION_COLUMNS = ['d_a_m', 'p_analytic', 'p_empirical', 'stderr']


def validate_blockage(config: SimulationConfig, d_bins: Sequence[float],
                      scenes: Optional[int] = None,
                      settings: Optional[RuntimeSettings] = None) -> pd.DataFrame:
    """
    Analytic blockage probability against explicit body scenes

    The UE stays at the fixed placement point (venue centre when placement is
    uniform). Each scene redraws the user body and the random bodies and puts
    one probe AP at every requested distance with a uniform azimuth.

    Args:
        config: Explicit-bodies configuration
        d_bins: Probe distances (m)
        scenes: Scene count, defaults to config.trials
        settings: Runtime settings

    Returns:
        DataFrame with VALIDATION_COLUMNS, one row per distance
    """
    blockage = config.blockage
    if blockage.mode is not BlockageMode.EXPLICIT_BODIES:
        raise ValueError("Blockage validation needs the explicit_bodies mode")
    distances = np.asarray(d_bins, dtype=float)
    if distances.size == 0 or np.any(distances < 0):
        raise ValueError("Validation distances must be a non-empty list of non-negative values")
    scenes = config.trials if scenes is None else int(scenes)
    if scenes < 1:
        raise ValueError(f"Scene count must be at least 1, got {scenes}")
    settings = settings or RuntimeSettings()

    venue, h_A, geometry = config.venue, config.h_A, blockage.geometry
    ue = config.ue_placement.fixed_point if config.ue_placement.is_fixed else venue.centre
    body_count = blockage.random_body_count(venue.side)
    reach = float(distances.max()) * geometry.height_above_ue / h_A
    logger.info("Blockage validation: %d scenes, %d random bodies, %d probe distances",
                scenes, body_count, distances.size)

    def work(start: int, stop: int) -> np.ndarray:
        counts = np.zeros(distances.size, dtype=np.int64)
        for index in range(start, stop):
            rng = trial_stream(config.seed, StreamPurpose.BLOCKAGE_VALIDATION, (index,))
            scene = sample_body_scene(ue, venue, geometry, body_count, rng, max_body_distance=reach)
            probe_azimuths = rng.uniform(0.0, TWO_PI, size=distances.size)
            counts += scene_blocks(scene, distances, probe_azimuths, geometry, h_A)
        return counts

    blocked = np.sum(_run_chunked(scenes, work, settings), axis=0)
    empirical = blocked / scenes
    stderr = np.sqrt(empirical * (1.0 - empirical) / scenes)
    analytic = [p_blocked(float(d), blockage, h_A, venue.side) for d in distances]
    return pd.DataFrame({'d_a_m': distances, 'p_analytic': analytic,
                         'p_empirical': empirical, 'stderr': stderr}, columns=VALIDATION_COLUMNS)
