"""
Two-state mmWave channel

Path loss, Gamma shadowing and Nakagami-m fading per blockage state, and the
received-power and SINR assembly. Everything is linear scale; dB only enters
through RadioConfig.
"""
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np

from ..utils.units import db_to_linear, dbm_to_mw
from .antenna import AntennaPattern, BeamState, ap_gain, ue_gain
from .blockage import BlockageState
from .geometry import euclidean_3d_distance

THERMAL_NOISE_DBM_PER_HZ = -174.0


# ---------- PARAMETERS ----------
@dataclass(frozen=True)
class StateParams:
    """
    Channel parameters of one blockage state

    Attributes:
        pl_exponent: Path-loss exponent
        pl_intercept_db: Path loss at 1 m (dB)
        shadow_shape: Gamma shape of the shadowing gain
        shadow_scale: Gamma scale of the shadowing gain
        nakagami_m: Nakagami-m fading parameter (not the antenna main-lobe gain)
    """
    pl_exponent: float
    pl_intercept_db: float
    shadow_shape: float
    shadow_scale: float
    nakagami_m: float

    def __post_init__(self):
        if self.pl_exponent < 0:
            raise ValueError(f"Path-loss exponent must be non-negative, got {self.pl_exponent}")
        if not self.shadow_shape > 0:
            raise ValueError(f"Shadowing shape must be positive, got {self.shadow_shape}")
        if not self.shadow_scale > 0:
            raise ValueError(f"Shadowing scale must be positive, got {self.shadow_scale}")
        if not self.nakagami_m >= 0.5:
            raise ValueError(f"Nakagami m must be at least 0.5, got {self.nakagami_m}")

    @property
    def intercept_gain(self) -> float:
        return db_to_linear(-self.pl_intercept_db)


@dataclass(frozen=True)
class ChannelParams:
    """LOS and NLOS parameter rows; disabled random gains are exactly 1"""
    los: StateParams
    nlos: StateParams
    shadowing_enabled: bool = True
    fading_enabled: bool = True

    def for_state(self, state: BlockageState) -> StateParams:
        return self.los if state is BlockageState.LOS else self.nlos


# Car-park measurements, keyed by UE position
CHANNEL_ROWS: Dict[str, ChannelParams] = {
    'hand': ChannelParams(
        los=StateParams(pl_exponent=1.72, pl_intercept_db=63.4, shadow_shape=4.48,
                        shadow_scale=0.27, nakagami_m=3.02),
        nlos=StateParams(pl_exponent=1.94, pl_intercept_db=65.3, shadow_shape=1.18,
                         shadow_scale=1.52, nakagami_m=4.68),
    ),
    'pocket': ChannelParams(
        los=StateParams(pl_exponent=1.70, pl_intercept_db=59.1, shadow_shape=1.96,
                        shadow_scale=0.75, nakagami_m=4.21),
        nlos=StateParams(pl_exponent=0.61, pl_intercept_db=88.5, shadow_shape=2.80,
                         shadow_scale=0.47, nakagami_m=2.46),
    ),
}


@dataclass(frozen=True)
class RadioConfig:
    tx_power_dbm: float = 20.0
    bandwidth_hz: float = 2e9
    carrier_hz: float = 60e9
    noise_figure_db: float = 9.0
    sinr_threshold_db: float = 5.0

    def __post_init__(self):
        if not self.bandwidth_hz > 0:
            raise ValueError(f"Bandwidth must be positive, got {self.bandwidth_hz}")
        if not self.carrier_hz > 0:
            raise ValueError(f"Carrier frequency must be positive, got {self.carrier_hz}")

    @property
    def tx_power_mw(self) -> float:
        return dbm_to_mw(self.tx_power_dbm)

    @property
    def sinr_threshold(self) -> float:
        return db_to_linear(self.sinr_threshold_db)


@dataclass(frozen=True)
class LinkSample:
    """Every factor of one AP-to-UE received power"""
    state: BlockageState
    ap_gain: float
    ue_gain: float
    path_gain: float
    shadow_gain: float
    fading_gain: float
    rx_power_mw: float


# ---------- CHANNEL COMPONENTS ----------
# `state` is one BlockageState, or a boolean NLOS mask with one entry per link.
LinkState = Union[BlockageState, np.ndarray]


def _row_values(state: LinkState, params: ChannelParams, name: str):
    if isinstance(state, BlockageState):
        return getattr(params.for_state(state), name)
    return np.where(np.asarray(state, dtype=bool), getattr(params.nlos, name), getattr(params.los, name))


def _unit_gains(state: LinkState, size: Optional[int]):
    if not isinstance(state, BlockageState):
        return np.ones(np.shape(state))
    return 1.0 if size is None else np.ones(size)


def path_gain(r_A, state: LinkState, params: ChannelParams):
    """Linear path gain l * r^-nu of the state's row"""
    r_A = np.asarray(r_A, dtype=float)
    if np.any(r_A <= 0):
        raise ValueError("AP-to-UE distance must be positive")
    gain = _row_values(state, params, 'intercept_gain') * r_A ** (-_row_values(state, params, 'pl_exponent'))
    return float(gain) if np.ndim(gain) == 0 else gain


def sample_shadowing(state: LinkState, params: ChannelParams, rng: np.random.Generator,
                     size: Optional[int] = None):
    """Gamma(shape, scale) shadowing gain; exactly 1 when shadowing is disabled"""
    if not params.shadowing_enabled:
        return _unit_gains(state, size)
    return rng.gamma(_row_values(state, params, 'shadow_shape'),
                     _row_values(state, params, 'shadow_scale'), size=size)


def sample_fading(state: LinkState, params: ChannelParams, rng: np.random.Generator,
                  size: Optional[int] = None):
    """Nakagami-m power gain, Gamma(m, 1/m) with unit mean; exactly 1 when fading is disabled"""
    if not params.fading_enabled:
        return _unit_gains(state, size)
    m = _row_values(state, params, 'nakagami_m')
    return rng.gamma(m, 1.0 / m, size=size)


def noise_power_mw(radio: RadioConfig) -> float:
    """Thermal noise over the bandwidth plus the noise figure"""
    noise_dbm = THERMAL_NOISE_DBM_PER_HZ + 10.0 * np.log10(radio.bandwidth_hz) + radio.noise_figure_db
    return dbm_to_mw(float(noise_dbm))


def received_power(d_A: float, theta_A: float, state: BlockageState, beam: BeamState,
                   patterns: Tuple[AntennaPattern, AntennaPattern], params: ChannelParams,
                   radio: RadioConfig, h_A: float, rng: np.random.Generator,
                   serving_always_main_lobe: bool = False, is_serving: bool = False) -> LinkSample:
    """
    Received power from one AP

    Draws shadowing then fading from rng, in that order.

    Args:
        d_A: Horizontal AP-to-UE distance
        theta_A: Azimuth of the AP seen from the UE
        state: Blockage state of the link
        beam: UE steering
        patterns: (AP pattern, UE pattern)
        params: Channel rows
        radio: Transmit power and noise settings
        h_A: AP height
        rng: Exclusive random stream
        serving_always_main_lobe: Forwarded to ue_gain
        is_serving: The AP is the serving AP

    Returns:
        LinkSample with every factor recorded
    """
    pattern_A, pattern_U = patterns
    g_ap = ap_gain(d_A, pattern_A, h_A)
    g_ue = ue_gain(d_A, theta_A, beam, pattern_U, h_A,
                   serving_always_main_lobe=serving_always_main_lobe, is_serving=is_serving)
    g_path = path_gain(euclidean_3d_distance(d_A, h_A), state, params)
    g_shadow = float(sample_shadowing(state, params, rng))
    g_fading = float(sample_fading(state, params, rng))
    power = radio.tx_power_mw * g_ap * g_ue * g_path * g_shadow * g_fading
    return LinkSample(state=state, ap_gain=g_ap, ue_gain=g_ue, path_gain=g_path,
                      shadow_gain=g_shadow, fading_gain=g_fading, rx_power_mw=power)


def sinr(serving: LinkSample, interferers: Sequence[LinkSample], noise_mw: float) -> float:
    """Serving power over noise plus the summed interference"""
    if not noise_mw > 0:
        raise ValueError(f"Noise power must be positive, got {noise_mw}")
    interference = sum(link.rx_power_mw for link in interferers)
    return serving.rx_power_mw / (noise_mw + interference)
