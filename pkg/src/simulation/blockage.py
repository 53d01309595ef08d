"""
Human-body blockage

Bodies are vertical screens of width w_B rising h_B above the UE plane, all
facing the UE. An AP is blocked by a body when it lies outside the body's
blockage-free zone and inside the body's shadowing angle. The analytic
probabilities treat every AP independently; the explicit scenes place the
bodies and test the geometry directly.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import List, Optional

import numpy as np

from .geometry import EPSILON, TWO_PI, Point2, Venue, azimuth, horizontal_distance, normalize_angle
from .quadrature import adaptive_simpson

logger = logging.getLogger(__name__)

# ∫ of the point-pair distance density over (0, side], independent of side
TRUNCATED_MASS = math.pi - 8.0 / 3.0 + 0.5

# Bound on K_bodies * N_aps booleans materialised at once by scene_blocks
_SCENE_BLOCK_ELEMENTS = 4_000_000


# ---------- DOMAIN TYPES ----------
class BlockageState(Enum):
    LOS = "LOS"
    NLOS = "NLOS"


class BlockageMode(Enum):
    """Analytic: independent Bernoulli per AP. Explicit bodies: placed scene geometry."""
    ANALYTIC = "analytic"
    EXPLICIT_BODIES = "explicit_bodies"


@dataclass(frozen=True)
class BodyGeometry:
    """
    Body screen dimensions and the user's own body offset

    Attributes:
        width: Screen width w_B (m)
        height_above_ue: Screen height above the UE plane h_B (m)
        user_body_distance: UE to user-body distance r_0 (m); 0 when the UE is pocketed
    """
    width: float
    height_above_ue: float
    user_body_distance: float

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError(f"Body width must be positive, got {self.width}")
        if not self.height_above_ue > 0:
            raise ValueError(f"Body height above UE must be positive, got {self.height_above_ue}")
        if self.user_body_distance < 0:
            raise ValueError(f"User-body distance must be non-negative, got {self.user_body_distance}")


@dataclass(frozen=True)
class Body:
    """A body screen; orientation is the azimuth of the UE to right-shoulder line"""
    position: Point2
    orientation: float

    def __post_init__(self):
        object.__setattr__(self, 'orientation', normalize_angle(self.orientation))


@dataclass(frozen=True)
class BlockageModel:
    geometry: BodyGeometry
    rb_density: float
    mode: BlockageMode = BlockageMode.ANALYTIC
    quadrature_tolerance: float = 1e-8

    def __post_init__(self):
        if self.rb_density < 0:
            raise ValueError(f"Random-body density must be non-negative, got {self.rb_density}")
        if not 0 < self.quadrature_tolerance <= 1e-3:
            raise ValueError(
                f"Quadrature tolerance must be in (0, 1e-3], got {self.quadrature_tolerance}"
            )
        object.__setattr__(self, 'mode', BlockageMode(self.mode))

    def random_body_count(self, side: float) -> int:
        """N_B = round(density * side^2), halves rounded up"""
        return int(math.floor(self.rb_density * side * side + 0.5))


# ---------- SHADOWING GEOMETRY ----------
def shadow_angle(r, w_B: float):
    """
    Horizontal angle subtended by a body of width w_B at distance r

    Works on scalars and arrays; r = 0 gives pi.
    """
    if not w_B > 0:
        raise ValueError(f"Body width must be positive, got {w_B}")
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("Body distance must be non-negative")
    angle = 2.0 * np.arctan2(w_B, 2.0 * r)
    return float(angle) if angle.ndim == 0 else angle


def inverse_shadow_angle(phi: float, w_B: float) -> float:
    """Body distance at which the shadowing angle equals phi"""
    if not w_B > 0:
        raise ValueError(f"Body width must be positive, got {w_B}")
    if not 0 < phi <= math.pi:
        raise ValueError(f"Shadowing angle must be in (0, pi], got {phi}")
    if phi == math.pi:
        return 0.0
    return w_B / (2.0 * math.tan(phi / 2.0))


def free_zone_radius(r_body, h_A: float, h_B: float):
    """Radius around the UE inside which an AP clears a body at distance r_body"""
    if not h_A > 0:
        raise ValueError(f"AP height must be positive, got {h_A}")
    if not h_B > 0:
        raise ValueError(f"Body height must be positive, got {h_B}")
    return h_A * r_body / h_B


def is_blocked_geometric(ap_pos: Point2, d_A: float, ue_pos: Point2, body: Body,
                         geometry: BodyGeometry, h_A: float) -> bool:
    """
    Whether one body blocks the UE-AP line of sight

    Blocked iff the AP lies beyond the body's free zone and the body
    orientation relative to the AP direction is strictly inside the shadow.
    """
    r_B = horizontal_distance(ue_pos, body.position)
    if r_B <= EPSILON:
        raise ValueError("Body centre coincides with the UE; model the user body through r_0")
    if d_A <= free_zone_radius(r_B, h_A, geometry.height_above_ue):
        return False
    theta_B = normalize_angle(body.orientation - azimuth(ue_pos, ap_pos))
    return theta_B < shadow_angle(r_B, geometry.width)


# ---------- SHADOWING-ANGLE DISTRIBUTION ----------
def distance_pdf_square(r, side: float):
    """Density of the distance between two uniform points in a square, truncated at side"""
    if not side > 0:
        raise ValueError(f"Venue side must be positive, got {side}")
    r = np.asarray(r, dtype=float)
    value = 2.0 * math.pi * r / side ** 2 - 8.0 * r ** 2 / side ** 3 + 2.0 * r ** 3 / side ** 4
    value = np.where((r > 0) & (r <= side), value, 0.0)
    return float(value) if value.ndim == 0 else value


def distance_cdf_square(r, side: float):
    """Distribution function matching distance_pdf_square; saturates at TRUNCATED_MASS"""
    if not side > 0:
        raise ValueError(f"Venue side must be positive, got {side}")
    r = np.clip(np.asarray(r, dtype=float), 0.0, side)
    value = (math.pi * r ** 2 / side ** 2 - 8.0 * r ** 3 / (3.0 * side ** 3)
             + r ** 4 / (2.0 * side ** 4))
    return float(value) if value.ndim == 0 else value


def _shadow_angle_density(phi, w_B: float, side: float):
    half = np.asarray(phi, dtype=float) / 2.0
    rho = w_B / (2.0 * np.tan(half))
    polynomial = math.pi * rho / side ** 2 - 4.0 * rho ** 2 / side ** 3 + rho ** 3 / side ** 4
    # 1 - cos(phi) written as 2 sin^2(phi/2)
    return polynomial * w_B / (2.0 * np.sin(half) ** 2)


def shadow_angle_pdf(phi: float, w_B: float, side: float) -> float:
    """
    Density of the shadowing angle of a body dropped uniformly in the venue

    Args:
        phi: Shadowing angle in [shadow_angle(side, w_B), pi]
        w_B: Body width
        side: Venue side

    Returns:
        Non-negative density per radian
    """
    if not side > 0:
        raise ValueError(f"Venue side must be positive, got {side}")
    lower = shadow_angle(side, w_B)
    if not lower <= phi <= math.pi:
        raise ValueError(f"Shadowing angle {phi} outside the support [{lower}, pi]")
    if phi == math.pi:
        return 0.0
    return float(max(_shadow_angle_density(phi, w_B, side), 0.0))


# ---------- ANALYTIC PROBABILITIES ----------
def p_self(d_A: float, geometry: BodyGeometry, h_A: float) -> float:
    """Probability that the user's own body blocks an AP at horizontal distance d_A"""
    if d_A < 0:
        raise ValueError(f"Horizontal distance must be non-negative, got {d_A}")
    r_0 = geometry.user_body_distance
    if r_0 == 0:
        return 0.0 if d_A == 0 else 0.5
    if d_A >= free_zone_radius(r_0, h_A, geometry.height_above_ue):
        return math.atan(geometry.width / (2.0 * r_0)) / math.pi
    return 0.0


def _p_self_array(d_A: np.ndarray, geometry: BodyGeometry, h_A: float) -> np.ndarray:
    r_0 = geometry.user_body_distance
    if r_0 == 0:
        return np.where(d_A > 0, 0.5, 0.0)
    step = free_zone_radius(r_0, h_A, geometry.height_above_ue)
    return np.where(d_A >= step, math.atan(geometry.width / (2.0 * r_0)) / math.pi, 0.0)


def _random_body_integrand(w_B: float, side: float):
    def integrand(phi: float) -> float:
        if phi >= math.pi:
            return 0.0
        return phi / TWO_PI * float(_shadow_angle_density(phi, w_B, side))
    return integrand


def _blocking_body_radius(d_A: float, geometry: BodyGeometry, h_A: float, side: float) -> float:
    return min(d_A * geometry.height_above_ue / h_A, side)


def p_random_one(d_A: float, geometry: BodyGeometry, h_A: float, side: float,
                 tol: float = 1e-8) -> float:
    """
    Probability that one random body, dropped uniformly, blocks an AP at d_A

    Integrates the shadow-weighted shadowing-angle density from the angle of
    the farthest body that can still block (clamped at the venue side) to pi.
    """
    if d_A < 0:
        raise ValueError(f"Horizontal distance must be non-negative, got {d_A}")
    if not h_A > 0:
        raise ValueError(f"AP height must be positive, got {h_A}")
    radius = _blocking_body_radius(d_A, geometry, h_A, side)
    if radius <= 0:
        return 0.0
    lower = shadow_angle(radius, geometry.width)
    value = adaptive_simpson(_random_body_integrand(geometry.width, side), lower, math.pi, rel_tol=tol)
    return min(max(value, 0.0), 1.0 - 1e-15)


def _combine(p_zero, p_one, body_count: int):
    survive_random = np.exp(body_count * np.log1p(-np.asarray(p_one, dtype=float)))
    return np.clip(1.0 - survive_random * (1.0 - np.asarray(p_zero, dtype=float)), 0.0, 1.0)


def p_blocked(d_A: float, model: BlockageModel, h_A: float, side: float) -> float:
    """1 - (1 - p_1)^N_B (1 - p_0), evaluated in log space"""
    geometry = model.geometry
    p_zero = p_self(d_A, geometry, h_A)
    body_count = model.random_body_count(side)
    if body_count == 0:
        return p_zero
    p_one = p_random_one(d_A, geometry, h_A, side, model.quadrature_tolerance)
    return float(_combine(p_zero, p_one, body_count))


# ---------- TABULATED RANDOM-BODY PROBABILITY ----------
class RandomBodyTable:
    """
    p_random_one tabulated over the blocking-body radius

    The cumulative integral is built segment by segment between consecutive
    radius nodes and interpolated linearly. Distances beyond the tabulated
    range fall back to direct quadrature.
    """

    def __init__(self, geometry: BodyGeometry, h_A: float, side: float,
                 tol: float = 1e-8, nodes: int = 4096, d_max: Optional[float] = None):
        if nodes < 2:
            raise ValueError(f"Table needs at least 2 nodes, got {nodes}")
        self.geometry = geometry
        self.h_A = h_A
        self.side = side
        self.tol = tol
        self.d_max = side * math.sqrt(2.0) if d_max is None else float(d_max)
        self.radius_max = _blocking_body_radius(self.d_max, geometry, h_A, side)

        self.radii = np.linspace(0.0, self.radius_max, nodes)
        angles = shadow_angle(self.radii, geometry.width)
        integrand = _random_body_integrand(geometry.width, side)
        segments = np.zeros(nodes)
        for k in range(1, nodes):
            segments[k] = adaptive_simpson(integrand, float(angles[k]), float(angles[k - 1]), rel_tol=tol)
        self.cumulative = np.cumsum(segments)
        logger.debug("Random-body table: %d nodes up to r=%.4g m, p1_max=%.6g",
                     nodes, self.radius_max, self.cumulative[-1])

    def p_random_one(self, d_A) -> np.ndarray:
        d_A = np.asarray(d_A, dtype=float)
        radius = np.minimum(d_A * self.geometry.height_above_ue / self.h_A, self.side)
        values = np.interp(radius, self.radii, self.cumulative)
        beyond = d_A > self.d_max + EPSILON
        if np.any(beyond):
            values = np.array(values, dtype=float, copy=True)
            for index in np.flatnonzero(beyond.ravel()):
                values.flat[index] = p_random_one(float(d_A.flat[index]), self.geometry,
                                                  self.h_A, self.side, self.tol)
        return values


@lru_cache(maxsize=32)
def random_body_table(geometry: BodyGeometry, h_A: float, side: float, tol: float,
                      nodes: int) -> RandomBodyTable:
    """Shared table per parameter set"""
    return RandomBodyTable(geometry, h_A, side, tol=tol, nodes=nodes)


def p_blocked_array(d_A, model: BlockageModel, h_A: float, side: float,
                    table: Optional[RandomBodyTable] = None) -> np.ndarray:
    """
    p_blocked over an array of distances

    Without a table each distance is integrated directly; with one, the
    random-body term is interpolated. The self-body step is always exact.
    """
    d_A = np.asarray(d_A, dtype=float)
    if np.any(d_A < 0):
        raise ValueError("Horizontal distances must be non-negative")
    geometry = model.geometry
    p_zero = _p_self_array(d_A, geometry, h_A)
    body_count = model.random_body_count(side)
    if body_count == 0:
        return p_zero
    if table is None:
        p_one = np.array([p_random_one(float(d), geometry, h_A, side, model.quadrature_tolerance)
                          for d in d_A.ravel()]).reshape(d_A.shape)
    else:
        p_one = table.p_random_one(d_A)
    return _combine(p_zero, p_one, body_count)


def sample_blockage_state(d_A: float, model: BlockageModel, h_A: float, side: float,
                          rng: np.random.Generator) -> BlockageState:
    """Independent Bernoulli draw of the blockage state of one AP"""
    if model.mode is not BlockageMode.ANALYTIC:
        raise ValueError("sample_blockage_state needs analytic mode; explicit bodies use scene_blocks")
    return BlockageState.NLOS if rng.random() < p_blocked(d_A, model, h_A, side) else BlockageState.LOS


# ---------- EXPLICIT BODY SCENES ----------
@dataclass(frozen=True, eq=False)
class BodyScene:
    """
    Bodies around one UE, user body first

    Attributes:
        ue_position: The UE
        positions: (K, 2) body centres
        orientations: (K,) azimuths of the UE to right-shoulder lines
        distances: (K,) UE to body distances; the pocketed user body sits at 0
        shadow_angles: (K,) shadowing angle of each body
    """
    ue_position: Point2
    positions: np.ndarray
    orientations: np.ndarray
    distances: np.ndarray
    shadow_angles: np.ndarray

    @property
    def body_count(self) -> int:
        return int(self.distances.shape[0])

    def bodies(self) -> List[Body]:
        return [Body(Point2(float(x), float(y)), float(o))
                for (x, y), o in zip(self.positions, self.orientations)]


def sample_body_scene(ue_position: Point2, venue: Venue, geometry: BodyGeometry,
                      random_body_count: int, rng: np.random.Generator,
                      max_body_distance: Optional[float] = None) -> BodyScene:
    """
    Place the user body and random bodies around a UE

    The user body sits at r_0 with a uniform azimuth; random bodies are uniform
    over the venue. Every body faces the UE. Draws are made for all bodies
    before max_body_distance filters out those that cannot block anything.
    """
    if random_body_count < 0:
        raise ValueError(f"Random body count must be non-negative, got {random_body_count}")
    w_B = geometry.width
    r_0 = geometry.user_body_distance

    user_azimuth = rng.uniform(0.0, TWO_PI)
    user_shadow = shadow_angle(r_0, w_B)
    user_position = np.array([[ue_position.x + r_0 * math.cos(user_azimuth),
                               ue_position.y + r_0 * math.sin(user_azimuth)]])

    positions = rng.uniform(0.0, venue.side, size=(random_body_count, 2))
    offsets = positions - np.array([ue_position.x, ue_position.y])
    distances = np.hypot(offsets[:, 0], offsets[:, 1])
    keep = distances > EPSILON
    if max_body_distance is not None:
        keep &= distances <= max_body_distance
    positions, offsets, distances = positions[keep], offsets[keep], distances[keep]
    shadows = shadow_angle(distances, w_B)
    orientations = np.mod(np.arctan2(offsets[:, 1], offsets[:, 0]) + shadows / 2.0, TWO_PI)

    return BodyScene(
        ue_position=ue_position,
        positions=np.vstack([user_position, positions]),
        orientations=np.concatenate([[np.mod(user_azimuth + user_shadow / 2.0, TWO_PI)], orientations]),
        distances=np.concatenate([[r_0], distances]),
        shadow_angles=np.concatenate([[user_shadow], shadows]),
    )


def scene_blocks(scene: BodyScene, ap_distances, ap_azimuths, geometry: BodyGeometry,
                 h_A: float) -> np.ndarray:
    """
    Blocked flag of every AP against every body of the scene

    Args:
        scene: Placed bodies
        ap_distances: (N,) UE to AP horizontal distances
        ap_azimuths: (N,) UE to AP azimuths
        geometry: Body dimensions
        h_A: AP height

    Returns:
        (N,) boolean array, True where at least one body blocks
    """
    ap_distances = np.asarray(ap_distances, dtype=float)
    ap_azimuths = np.asarray(ap_azimuths, dtype=float)
    blocked = np.zeros(ap_distances.shape, dtype=bool)
    if ap_distances.size == 0:
        return blocked

    zones = free_zone_radius(scene.distances, h_A, geometry.height_above_ue)
    step = max(1, _SCENE_BLOCK_ELEMENTS // ap_distances.size)
    for start in range(0, scene.body_count, step):
        stop = start + step
        relative = np.mod(scene.orientations[start:stop, None] - ap_azimuths[None, :], TWO_PI)
        hit = ((ap_distances[None, :] > zones[start:stop, None])
               & (relative < scene.shadow_angles[start:stop, None]))
        blocked |= hit.any(axis=0)
    return blocked
