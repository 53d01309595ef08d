"""
Venue geometry and hexagonal AP deployment

The APs sit on a triangular lattice (hexagonal cells) centred on the venue
centre; lattice points outside the square venue are dropped.
"""
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import List

import numpy as np

# Tolerance for all geometric comparisons, far below any physical scale here
EPSILON = 1e-9
TWO_PI = 2.0 * math.pi


# ---------- DOMAIN TYPES ----------
@dataclass(frozen=True)
class Venue:
    """Square indoor venue of side `side` metres, corner at the origin"""
    side: float

    def __post_init__(self):
        if not self.side > 0:
            raise ValueError(f"Venue side must be positive, got {self.side}")

    @property
    def centre(self) -> 'Point2':
        return Point2(self.side / 2.0, self.side / 2.0)

    @property
    def area(self) -> float:
        return self.side * self.side

    def contains(self, point: 'Point2') -> bool:
        """True if the point lies in the closed venue square (within EPSILON)"""
        return (-EPSILON <= point.x <= self.side + EPSILON
                and -EPSILON <= point.y <= self.side + EPSILON)


@dataclass(frozen=True)
class Point2:
    """Point on the UE plane, metres"""
    x: float
    y: float


@dataclass(frozen=True, eq=False)
class Deployment:
    """AP centres of one hexagonal deployment"""
    coordinates: np.ndarray
    inter_site_distance: float
    ap_height: float

    def __post_init__(self):
        if not self.inter_site_distance > 0:
            raise ValueError(f"Inter-site distance must be positive, got {self.inter_site_distance}")
        if not self.ap_height > 0:
            raise ValueError(f"AP height must be positive, got {self.ap_height}")
        coordinates = np.asarray(self.coordinates, dtype=float)
        if coordinates.ndim != 2 or coordinates.shape[1] != 2:
            raise ValueError("AP coordinates must have shape (N, 2)")
        coordinates.setflags(write=False)
        object.__setattr__(self, 'coordinates', coordinates)

    @property
    def ap_count(self) -> int:
        return int(self.coordinates.shape[0])

    @cached_property
    def ap_positions(self) -> List[Point2]:
        return [Point2(float(x), float(y)) for x, y in self.coordinates]


# ---------- DEPLOYMENT ----------
def generate_hex_grid(venue: Venue, delta: float, h_A: float) -> Deployment:
    """
    Lay a triangular lattice of AP centres over the venue

    Rows are delta*sqrt(3)/2 apart and alternate rows are shifted by delta/2.
    One lattice point sits on the venue centre; points outside the venue
    square are dropped.

    Args:
        venue: The square venue
        delta: Inter-site distance (m)
        h_A: AP height above UE level (m)

    Returns:
        Deployment with APs ordered row by row (bottom to top, left to right)
    """
    if not delta > 0:
        raise ValueError(f"Inter-site distance must be positive, got {delta}")
    if not h_A > 0:
        raise ValueError(f"AP height must be positive, got {h_A}")
    if delta > venue.side * math.sqrt(2.0) + EPSILON:
        raise ValueError(
            f"Inter-site distance {delta} m exceeds the venue diagonal {venue.side * math.sqrt(2.0):.3f} m"
        )
    return _cached_hex_grid(venue.side, float(delta), float(h_A))


@lru_cache(maxsize=64)
def _cached_hex_grid(side: float, delta: float, h_A: float) -> Deployment:
    half = side / 2.0
    row_pitch = delta * math.sqrt(3.0) / 2.0
    max_row = int(math.floor((half + EPSILON) / row_pitch))
    max_col = int(math.floor((half + EPSILON) / delta)) + 1

    rows = np.arange(-max_row, max_row + 1)
    cols = np.arange(-max_col, max_col + 1)
    col_grid, row_grid = np.meshgrid(cols, rows)
    offsets = np.where(row_grid % 2 == 0, 0.0, 0.5)

    xs = half + (col_grid + offsets) * delta
    ys = half + row_grid * row_pitch
    inside = ((xs >= -EPSILON) & (xs <= side + EPSILON)
              & (ys >= -EPSILON) & (ys <= side + EPSILON))

    coordinates = np.column_stack([xs[inside], ys[inside]])
    if coordinates.shape[0] == 0:
        raise ValueError(f"No lattice point of spacing {delta} m falls inside a {side} m venue")
    coordinates = np.clip(coordinates, 0.0, side)

    return Deployment(coordinates=coordinates, inter_site_distance=delta, ap_height=h_A)


def hex_cell_area(delta: float) -> float:
    """Area of one hexagonal cell of the lattice with inter-site distance delta"""
    if not delta > 0:
        raise ValueError(f"Inter-site distance must be positive, got {delta}")
    return math.sqrt(3.0) / 2.0 * delta * delta


# ---------- PLACEMENT AND DISTANCES ----------
def sample_uniform_point(venue: Venue, rng: np.random.Generator) -> Point2:
    """Draw a point uniformly over the venue square"""
    x, y = rng.uniform(0.0, venue.side, size=2)
    return Point2(float(x), float(y))


def horizontal_distance(a: Point2, b: Point2) -> float:
    """2-D distance between two points on the UE plane"""
    return math.hypot(b.x - a.x, b.y - a.y)


def euclidean_3d_distance(d_A: float, h_A: float) -> float:
    """AP-to-UE distance from the horizontal distance and the AP height"""
    if d_A < 0:
        raise ValueError(f"Horizontal distance must be non-negative, got {d_A}")
    if not h_A > 0:
        raise ValueError(f"AP height must be positive, got {h_A}")
    return math.hypot(d_A, h_A)


def azimuth(origin: Point2, target: Point2) -> float:
    """Direction of target seen from origin, in [0, 2*pi)"""
    return normalize_angle(math.atan2(target.y - origin.y, target.x - origin.x))


def normalize_angle(theta: float) -> float:
    """Wrap an angle to [0, 2*pi)"""
    wrapped = theta % TWO_PI
    return 0.0 if wrapped >= TWO_PI else wrapped


def wrap_to_pi(theta):
    """Wrap angles (scalar or array) to (-pi, pi]"""
    wrapped = np.pi - np.mod(np.pi - np.asarray(theta, dtype=float), TWO_PI)
    return float(wrapped) if np.ndim(wrapped) == 0 else wrapped
