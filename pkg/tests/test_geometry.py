#!/usr/bin/env python3
"""
Tests for the venue geometry and the hexagonal deployment
"""
import math
import sys
import os

import numpy as np
import pytest

# Add the parent directory to the path so we can import from src
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.simulation.geometry import (
    EPSILON, Point2, Venue, azimuth, euclidean_3d_distance, generate_hex_grid,
    hex_cell_area, horizontal_distance, normalize_angle, sample_uniform_point, wrap_to_pi,
)


def _pairwise_min(coordinates):
    differences = coordinates[:, None, :] - coordinates[None, :, :]
    distances = np.hypot(differences[..., 0], differences[..., 1])
    np.fill_diagonal(distances, np.inf)
    return distances.min()


def _as_set(coordinates):
    return {(round(x, 6), round(y, 6)) for x, y in coordinates}


# ---------- VENUE ----------
def test_venue_rejects_degenerate_side():
    with pytest.raises(ValueError, match="positive"):
        Venue(0.0)
    with pytest.raises(ValueError):
        Venue(-1.0)


def test_venue_centre_and_area():
    venue = Venue(400.0)
    assert venue.centre == Point2(200.0, 200.0)
    assert venue.area == 160000.0
    assert venue.contains(Point2(0.0, 400.0))
    assert not venue.contains(Point2(-0.1, 10.0))


# ---------- HEX GRID ----------
class TestGenerateHexGrid:

    def test_single_ap_at_centre(self):
        deployment = generate_hex_grid(Venue(400.0), 400.0, 10.0)
        assert deployment.ap_count == 1
        assert deployment.ap_positions[0] == Point2(200.0, 200.0)

    def test_count_at_delta_20(self):
        deployment = generate_hex_grid(Venue(400.0), 20.0, 10.0)
        expected = 400.0 ** 2 / (math.sqrt(3.0) / 2.0 * 20.0 ** 2)
        assert abs(deployment.ap_count - expected) <= 2 * (400 / 20)
        # 11 even rows of 21 plus 12 odd rows of 20
        assert deployment.ap_count == 471

    def test_delta_200(self):
        deployment = generate_hex_grid(Venue(400.0), 200.0, 10.0)
        assert 4 <= deployment.ap_count <= 9
        assert deployment.ap_count == 7
        assert _pairwise_min(deployment.coordinates) >= 200.0 - EPSILON

    @pytest.mark.parametrize("delta", [13.0, 20.0, 37.5, 100.0, 150.0])
    def test_min_pairwise_distance(self, delta):
        deployment = generate_hex_grid(Venue(400.0), delta, 10.0)
        assert _pairwise_min(deployment.coordinates) >= delta - EPSILON

    @pytest.mark.parametrize("delta", [7.0, 20.0, 50.0, 200.0])
    def test_all_inside_venue(self, delta):
        venue = Venue(400.0)
        deployment = generate_hex_grid(venue, delta, 10.0)
        assert all(venue.contains(p) for p in deployment.ap_positions)

    @pytest.mark.parametrize("delta", [9.0, 20.0, 64.0])
    def test_reflection_symmetry(self, delta):
        coordinates = generate_hex_grid(Venue(400.0), delta, 10.0).coordinates
        original = _as_set(coordinates)
        mirrored_x = _as_set(np.column_stack([400.0 - coordinates[:, 0], coordinates[:, 1]]))
        mirrored_y = _as_set(np.column_stack([coordinates[:, 0], 400.0 - coordinates[:, 1]]))
        assert original == mirrored_x
        assert original == mirrored_y

    def test_density_converges(self):
        side, delta = 400.0, 10.0
        deployment = generate_hex_grid(Venue(side), delta, 10.0)
        density = deployment.ap_count / side ** 2
        assert density == pytest.approx(1.0 / hex_cell_area(delta), rel=0.05)

    def test_rejects_bad_arguments(self):
        venue = Venue(400.0)
        with pytest.raises(ValueError):
            generate_hex_grid(venue, 0.0, 10.0)
        with pytest.raises(ValueError):
            generate_hex_grid(venue, 20.0, 0.0)
        with pytest.raises(ValueError, match="diagonal"):
            generate_hex_grid(venue, 600.0, 10.0)

    def test_coordinates_are_read_only(self):
        deployment = generate_hex_grid(Venue(400.0), 100.0, 10.0)
        with pytest.raises(ValueError):
            deployment.coordinates[0, 0] = 1.0


def test_hex_cell_area():
    assert hex_cell_area(2.0) == pytest.approx(2.0 * math.sqrt(3.0))
    with pytest.raises(ValueError):
        hex_cell_area(0.0)


# ---------- PLACEMENT AND DISTANCES ----------
def test_sample_uniform_point_moments():
    venue = Venue(400.0)
    rng = np.random.default_rng(7)
    points = np.array([[p.x, p.y] for p in (sample_uniform_point(venue, rng) for _ in range(100000))])
    assert points.min() >= 0.0 and points.max() <= 400.0
    assert abs(points[:, 0].mean() - 200.0) < 1.5
    assert abs(points[:, 1].mean() - 200.0) < 1.5
    quadrant = np.mean((points[:, 0] < 200.0) & (points[:, 1] < 200.0))
    assert abs(quadrant - 0.25) < 0.006


def test_horizontal_distance():
    assert horizontal_distance(Point2(0, 0), Point2(3, 4)) == 5.0
    assert horizontal_distance(Point2(1, 1), Point2(1, 1)) == 0.0


def test_horizontal_distance_law_of_cosines():
    rng = np.random.default_rng(3)
    for _ in range(200):
        ax, ay, bx, by = rng.uniform(-50, 50, size=4)
        a, b = Point2(ax, ay), Point2(bx, by)
        ra, rb = math.hypot(ax, ay), math.hypot(bx, by)
        gamma = math.atan2(by, bx) - math.atan2(ay, ax)
        expected = math.sqrt(max(ra ** 2 + rb ** 2 - 2 * ra * rb * math.cos(gamma), 0.0))
        assert horizontal_distance(a, b) == pytest.approx(expected, rel=1e-9, abs=1e-9)
        assert horizontal_distance(a, b) == horizontal_distance(b, a)


def test_euclidean_3d_distance():
    assert euclidean_3d_distance(0.0, 10.0) == 10.0
    assert euclidean_3d_distance(10.0, 10.0) == pytest.approx(14.142135623730951)
    assert euclidean_3d_distance(3.0, 4.0) == 5.0
    with pytest.raises(ValueError):
        euclidean_3d_distance(-1.0, 10.0)
    with pytest.raises(ValueError):
        euclidean_3d_distance(1.0, 0.0)


def test_angles():
    assert azimuth(Point2(0, 0), Point2(0, -1)) == pytest.approx(1.5 * math.pi)
    assert normalize_angle(-1e-30) == 0.0
    assert 0.0 <= normalize_angle(-0.5) < 2 * math.pi
    assert wrap_to_pi(1.5 * math.pi) == pytest.approx(-0.5 * math.pi)
    assert wrap_to_pi(-math.pi) == pytest.approx(math.pi)


if __name__ == '__main__':
    sys.exit(pytest.main([__file__, '-v']))
