"""
Cone-bulb directivity model

A beam of width w has a constant main-lobe gain m inside the cone and a
constant side-lobe gain s outside, with m chosen so that the pattern
conserves energy over the sphere. All gains are linear.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import TWO_PI, normalize_angle, wrap_to_pi

# Narrowest beam accepted by the illumination-radius formulas
MIN_BEAMWIDTH = 1e-6


# ---------- DOMAIN TYPES ----------
@dataclass(frozen=True)
class AntennaPattern:
    """
    Two-level antenna pattern

    Attributes:
        beamwidth: Main-lobe width in radians, (0, 2*pi]
        side_lobe_gain: Linear side-lobe gain in (0, 1)
        main_lobe_gain: Derived from the energy balance, never passed in
    """
    beamwidth: float
    side_lobe_gain: float
    main_lobe_gain: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, 'main_lobe_gain', main_lobe_gain(self.beamwidth, self.side_lobe_gain))

    def gain(self, in_main_lobe: bool) -> float:
        return self.main_lobe_gain if in_main_lobe else self.side_lobe_gain


@dataclass(frozen=True)
class BeamState:
    """Where the UE main lobe points: towards the serving AP"""
    serving_orientation: float
    serving_distance: float

    def __post_init__(self):
        if self.serving_distance < 0:
            raise ValueError(f"Serving distance must be non-negative, got {self.serving_distance}")
        object.__setattr__(self, 'serving_orientation', normalize_angle(self.serving_orientation))


# ---------- GAIN MODEL ----------
def main_lobe_gain(beamwidth: float, side_lobe_gain: float) -> float:
    """
    Main-lobe gain that conserves the radiated energy

    Args:
        beamwidth: Beamwidth in radians, (0, 2*pi]
        side_lobe_gain: Linear side-lobe gain, (0, 1)

    Returns:
        m = (2 - s(1 + cos(w/2))) / (1 - cos(w/2)); exactly 1 for w = 2*pi
    """
    if not 0 < beamwidth <= TWO_PI:
        raise ValueError(f"Beamwidth must be in (0, 2*pi] radians, got {beamwidth}")
    if not 0 < side_lobe_gain < 1:
        raise ValueError(f"Side-lobe gain must be in (0, 1), got {side_lobe_gain}")

    if beamwidth == TWO_PI:
        return 1.0
    half_cos = math.cos(beamwidth / 2.0)
    return (2.0 - side_lobe_gain * (1.0 + half_cos)) / (1.0 - half_cos)


def _check_cone_beamwidth(beamwidth: float, name: str):
    if not MIN_BEAMWIDTH <= beamwidth <= math.pi:
        raise ValueError(
            f"{name} must be in [{MIN_BEAMWIDTH}, pi] radians for illumination geometry, got {beamwidth}"
        )


def ap_illumination_radius(h_A: float, beamwidth_A: float) -> float:
    """Radius of the floor circle lit by the AP main lobe: h_A * tan(w_A / 2)"""
    if not h_A > 0:
        raise ValueError(f"AP height must be positive, got {h_A}")
    _check_cone_beamwidth(beamwidth_A, "AP beamwidth")
    if beamwidth_A == math.pi:
        return math.inf
    return h_A * math.tan(beamwidth_A / 2.0)


def ue_main_lobe_radius(h_A: float, beamwidth_U: float) -> float:
    """Radius of the ceiling circle lit by the UE main lobe: h_A * tan(w_U / 2)"""
    if not h_A > 0:
        raise ValueError(f"AP height must be positive, got {h_A}")
    _check_cone_beamwidth(beamwidth_U, "UE beamwidth")
    if beamwidth_U == math.pi:
        return math.inf
    return h_A * math.tan(beamwidth_U / 2.0)


def ue_bound_distance(h_A: float, beamwidth_U: float) -> float:
    """Serving distance beyond which the UE cone no longer closes on the ceiling"""
    if not h_A > 0:
        raise ValueError(f"AP height must be positive, got {h_A}")
    _check_cone_beamwidth(beamwidth_U, "UE beamwidth")
    # Half-space beam: always in the sector regime
    if beamwidth_U == math.pi:
        return 0.0
    return h_A / math.tan(beamwidth_U / 2.0)


def _is_unsupported_wide(pattern: AntennaPattern) -> bool:
    return math.pi < pattern.beamwidth < TWO_PI


def ap_gain(d_A: float, pattern_A: AntennaPattern, h_A: float) -> float:
    """
    Transmit gain towards a UE at horizontal distance d_A

    Main lobe inside the illuminated circle (boundary included), side lobe
    outside. A half-space beam (pi) lights the whole floor; a beam of 2*pi
    radiates uniformly with gain 1.
    """
    if d_A < 0:
        raise ValueError(f"Horizontal distance must be non-negative, got {d_A}")
    if pattern_A.beamwidth == TWO_PI:
        return pattern_A.main_lobe_gain
    if _is_unsupported_wide(pattern_A):
        raise ValueError("AP beamwidths in (pi, 2*pi) have no bounded illumination circle")
    return pattern_A.gain(d_A <= ap_illumination_radius(h_A, pattern_A.beamwidth))


def ue_gain(d_A: float, theta_A: float, beam: BeamState, pattern_U: AntennaPattern,
            h_A: float, serving_always_main_lobe: bool = False, is_serving: bool = False) -> float:
    """
    Receive gain the UE applies to one AP

    Bounded regime (d_A < d_U): main lobe when d_A <= r_m^U.
    Unbounded regime (d_A >= d_U): main lobe when the AP azimuth is within
    w_U/2 of the serving azimuth (shortest-arc difference).

    Args:
        d_A: Horizontal distance to the evaluated AP
        theta_A: Azimuth of the evaluated AP seen from the UE
        beam: Current steering of the UE
        pattern_U: UE antenna pattern
        h_A: AP height
        serving_always_main_lobe: Give the serving AP the main lobe unconditionally
        is_serving: The evaluated AP is the serving AP

    Returns:
        Exactly the main-lobe or the side-lobe gain of pattern_U
    """
    if d_A < 0:
        raise ValueError(f"Horizontal distance must be non-negative, got {d_A}")
    if pattern_U.beamwidth == TWO_PI:
        return pattern_U.main_lobe_gain
    if _is_unsupported_wide(pattern_U):
        raise ValueError("UE beamwidths in (pi, 2*pi) have no bounded illumination cone")
    if serving_always_main_lobe and is_serving:
        return pattern_U.main_lobe_gain

    bound = ue_bound_distance(h_A, pattern_U.beamwidth)
    if d_A < bound:
        in_main = d_A <= ue_main_lobe_radius(h_A, pattern_U.beamwidth)
    else:
        difference = abs(wrap_to_pi(theta_A - beam.serving_orientation))
        in_main = difference < pattern_U.beamwidth / 2.0
    return pattern_U.gain(in_main)


def ue_gain_as_serving(d_S: float, pattern_U: AntennaPattern, h_A: float,
                       serving_always_main_lobe: bool = False) -> float:
    """
    Gain the UE would apply to a candidate if it steered towards it

    The candidate is evaluated against its own azimuth, so the sector test
    always passes and only the bounded-regime radius test can fail.
    """
    beam = BeamState(serving_orientation=0.0, serving_distance=d_S)
    return ue_gain(d_S, 0.0, beam, pattern_U, h_A,
                   serving_always_main_lobe=serving_always_main_lobe, is_serving=True)


# ---------- VECTORIZED FORMS ----------
def ap_gain_array(d_A: np.ndarray, pattern_A: AntennaPattern, h_A: float) -> np.ndarray:
    """ap_gain over an array of horizontal distances"""
    d_A = np.asarray(d_A, dtype=float)
    if pattern_A.beamwidth == TWO_PI:
        return np.full(d_A.shape, pattern_A.main_lobe_gain)
    if _is_unsupported_wide(pattern_A):
        raise ValueError("AP beamwidths in (pi, 2*pi) have no bounded illumination circle")
    radius = ap_illumination_radius(h_A, pattern_A.beamwidth)
    return np.where(d_A <= radius, pattern_A.main_lobe_gain, pattern_A.side_lobe_gain)


def ue_gain_array(d_A: np.ndarray, theta_A: np.ndarray, beam: BeamState,
                  pattern_U: AntennaPattern, h_A: float,
                  serving_always_main_lobe: bool = False, serving_index: int = -1) -> np.ndarray:
    """ue_gain over arrays of AP distances and azimuths"""
    d_A = np.asarray(d_A, dtype=float)
    theta_A = np.asarray(theta_A, dtype=float)
    if pattern_U.beamwidth == TWO_PI:
        return np.full(d_A.shape, pattern_U.main_lobe_gain)
    if _is_unsupported_wide(pattern_U):
        raise ValueError("UE beamwidths in (pi, 2*pi) have no bounded illumination cone")

    bound = ue_bound_distance(h_A, pattern_U.beamwidth)
    radius = ue_main_lobe_radius(h_A, pattern_U.beamwidth)
    in_sector = np.abs(wrap_to_pi(theta_A - beam.serving_orientation)) < pattern_U.beamwidth / 2.0
    in_main = np.where(d_A < bound, d_A <= radius, in_sector)
    if serving_always_main_lobe and serving_index >= 0:
        in_main[serving_index] = True
    return np.where(in_main, pattern_U.main_lobe_gain, pattern_U.side_lobe_gain)


def ue_gain_as_serving_array(d_S: np.ndarray, pattern_U: AntennaPattern, h_A: float,
                             serving_always_main_lobe: bool = False) -> np.ndarray:
    """ue_gain_as_serving for every candidate at once"""
    d_S = np.asarray(d_S, dtype=float)
    if pattern_U.beamwidth == TWO_PI or serving_always_main_lobe:
        return np.full(d_S.shape, pattern_U.main_lobe_gain)
    if _is_unsupported_wide(pattern_U):
        raise ValueError("UE beamwidths in (pi, 2*pi) have no bounded illumination cone")
    bound = ue_bound_distance(h_A, pattern_U.beamwidth)
    radius = ue_main_lobe_radius(h_A, pattern_U.beamwidth)
    in_main = (d_S >= bound) | (d_S <= radius)
    return np.where(in_main, pattern_U.main_lobe_gain, pattern_U.side_lobe_gain)
