#!/usr/bin/env python3
"""
Tests for the body blockage model: geometry, shadowing-angle distribution,
analytic probabilities and explicit body scenes
"""
import math
import sys
import os

import numpy as np
import pytest
from scipy import integrate, stats

# Add the parent directory to the path so we can import from src
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.simulation.blockage import (
    TRUNCATED_MASS, BlockageMode, BlockageModel, BlockageState, Body, BodyGeometry, RandomBodyTable,
    distance_cdf_square, distance_pdf_square, free_zone_radius, inverse_shadow_angle,
    is_blocked_geometric, p_blocked, p_blocked_array, p_random_one, p_self, sample_blockage_state,
    sample_body_scene, scene_blocks, shadow_angle, shadow_angle_pdf,
)
from src.simulation.geometry import TWO_PI, Point2, Venue, azimuth, horizontal_distance
from src.simulation.quadrature import adaptive_simpson

SIDE = 400.0
H_A = 10.0
HAND = BodyGeometry(width=0.4, height_above_ue=0.4, user_body_distance=0.3)
POCKET = BodyGeometry(width=0.4, height_above_ue=0.4, user_body_distance=0.0)
P_SELF_HAND = math.atan(2.0 / 3.0) / math.pi


# ---------- GEOMETRY ----------
class TestShadowAngle:

    def test_known_values(self):
        assert shadow_angle(0.2, 0.4) == pytest.approx(math.pi / 2)
        assert shadow_angle(0.0, 0.4) == math.pi
        assert shadow_angle(0.3, 0.4) == pytest.approx(1.17601, abs=1e-5)

    def test_array_input(self):
        angles = shadow_angle(np.array([0.0, 0.2, 1e6]), 0.4)
        assert angles.shape == (3,)
        assert angles[0] == math.pi and angles[2] < 1e-6

    def test_inverse_round_trip(self):
        rng = np.random.default_rng(2)
        for phi in rng.uniform(0.001, math.pi - 0.001, 10000):
            assert abs(shadow_angle(inverse_shadow_angle(phi, 0.4), 0.4) - phi) < 1e-12
        assert inverse_shadow_angle(math.pi, 0.4) == 0.0

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            shadow_angle(-1.0, 0.4)
        with pytest.raises(ValueError):
            shadow_angle(1.0, 0.0)
        with pytest.raises(ValueError):
            inverse_shadow_angle(0.0, 0.4)


def test_free_zone_radius():
    assert free_zone_radius(0.3, 10.0, 0.4) == pytest.approx(7.5)
    with pytest.raises(ValueError):
        free_zone_radius(0.3, 10.0, 0.0)


class TestIsBlockedGeometric:

    def setup_method(self):
        self.ue = Point2(200.0, 200.0)
        self.body_position = Point2(201.0, 200.0)
        self.phi = shadow_angle(1.0, HAND.width)

    def _check(self, ap_x, orientation):
        ap = Point2(ap_x, 200.0)
        body = Body(self.body_position, orientation)
        return is_blocked_geometric(ap, horizontal_distance(self.ue, ap), self.ue, body, HAND, H_A)

    def test_blocked_beyond_free_zone(self):
        # free zone of a body 1 m away is 25 m
        assert self._check(230.0, self.phi / 2)

    def test_clear_inside_free_zone(self):
        assert not self._check(220.0, self.phi / 2)

    def test_shadow_edge_is_exclusive(self):
        assert not self._check(230.0, self.phi)
        assert self._check(230.0, 0.0)

    def test_coincident_body_rejected(self):
        with pytest.raises(ValueError):
            is_blocked_geometric(Point2(0, 0), 10.0, self.ue, Body(self.ue, 0.0), HAND, H_A)

    def test_uniform_orientation_frequency(self):
        rng = np.random.default_rng(31)
        ap = Point2(230.0, 200.0)
        draws = 200_000
        blocked = sum(
            is_blocked_geometric(ap, 30.0, self.ue, Body(self.body_position, o), HAND, H_A)
            for o in rng.uniform(0.0, TWO_PI, draws)
        )
        expected = self.phi / TWO_PI
        assert abs(blocked / draws - expected) < 4 * math.sqrt(expected * (1 - expected) / draws)


# ---------- DISTRIBUTIONS ----------
class TestDistanceDistribution:

    def test_mass(self):
        value, _ = integrate.quad(distance_pdf_square, 0.0, SIDE, args=(SIDE,), epsabs=1e-13)
        assert value == pytest.approx(TRUNCATED_MASS, abs=1e-10)
        assert distance_cdf_square(SIDE, SIDE) == pytest.approx(TRUNCATED_MASS, abs=1e-14)
        assert distance_cdf_square(2 * SIDE, SIDE) == pytest.approx(TRUNCATED_MASS, abs=1e-14)

    def test_support(self):
        assert distance_pdf_square(0.0, SIDE) == 0.0
        assert distance_pdf_square(SIDE + 1.0, SIDE) == 0.0
        assert distance_pdf_square(-1.0, SIDE) == 0.0

    def test_matches_sampled_distances(self):
        rng = np.random.default_rng(41)
        a = rng.uniform(0.0, SIDE, size=(1_000_000, 2))
        b = rng.uniform(0.0, SIDE, size=(1_000_000, 2))
        r = np.hypot(*(a - b).T)
        r = r[r <= SIDE]
        assert r.size / 1_000_000 == pytest.approx(TRUNCATED_MASS, abs=0.002)
        result = stats.kstest(r, lambda x: distance_cdf_square(x, SIDE) / TRUNCATED_MASS)
        assert result.statistic < 0.005


class TestShadowAnglePdf:

    def test_mass(self):
        lower = shadow_angle(SIDE, 0.4)
        breaks = [lower] + [shadow_angle(r, 0.4) for r in (100.0, 10.0, 1.0, 0.1)] + [math.pi]
        total = 0.0
        for a, b in zip(breaks, breaks[1:]):
            piece, _ = integrate.quad(shadow_angle_pdf, a, b, args=(0.4, SIDE),
                                      epsabs=1e-13, epsrel=1e-12, limit=200)
            total += piece
        assert total == pytest.approx(TRUNCATED_MASS, abs=1e-8)

    def test_mass_with_adaptive_simpson(self):
        lower = shadow_angle(SIDE, 0.4)
        total = adaptive_simpson(lambda phi: shadow_angle_pdf(phi, 0.4, SIDE), lower, math.pi, rel_tol=1e-10)
        assert total == pytest.approx(TRUNCATED_MASS, abs=1e-7)

    @pytest.mark.parametrize("phi", [0.01, 0.05, 0.2, 1.0, 2.0, 3.0])
    def test_matches_numerical_derivative(self, phi):
        h = 1e-7

        def cdf_of_radius(angle):
            return distance_cdf_square(inverse_shadow_angle(angle, 0.4), SIDE)

        derivative = -(cdf_of_radius(phi + h) - cdf_of_radius(phi - h)) / (2 * h)
        assert shadow_angle_pdf(phi, 0.4, SIDE) == pytest.approx(derivative, rel=1e-6, abs=1e-12)

    def test_endpoint_and_support(self):
        assert shadow_angle_pdf(math.pi, 0.4, SIDE) == 0.0
        with pytest.raises(ValueError, match="support"):
            shadow_angle_pdf(shadow_angle(SIDE, 0.4) / 2, 0.4, SIDE)


# ---------- ANALYTIC PROBABILITIES ----------
class TestPSelf:

    def test_hand_step(self):
        assert p_self(7.5 - 1e-9, HAND, H_A) == 0.0
        assert p_self(7.5 + 1e-9, HAND, H_A) == pytest.approx(0.187167, abs=1e-6)
        assert p_self(10.0, HAND, H_A) == pytest.approx(P_SELF_HAND, abs=1e-12)
        assert p_self(0.0, HAND, H_A) == 0.0

    def test_pocket(self):
        assert p_self(0.0, POCKET, H_A) == 0.0
        assert p_self(1e-6, POCKET, H_A) == 0.5
        assert p_self(100.0, POCKET, H_A) == 0.5

    def test_rejects_negative_distance(self):
        with pytest.raises(ValueError):
            p_self(-1.0, HAND, H_A)


class TestPRandomOne:

    def test_zero_distance(self):
        assert p_random_one(0.0, HAND, H_A, SIDE) == 0.0

    def test_monotone(self):
        values = [p_random_one(d, HAND, H_A, SIDE) for d in np.arange(0.0, 201.0, 10.0)]
        assert all(b >= a for a, b in zip(values, values[1:]))
        assert 0.0 < values[-1] < 1.0

    def test_matches_monte_carlo(self):
        side, d_A = 20.0, 50.0
        radius = d_A * HAND.height_above_ue / H_A
        rng = np.random.default_rng(53)
        a = rng.uniform(0.0, side, size=(1_000_000, 2))
        b = rng.uniform(0.0, side, size=(1_000_000, 2))
        r = np.hypot(*(a - b).T)
        weights = np.where(r < radius, shadow_angle(r, HAND.width) / TWO_PI, 0.0)
        estimate = weights.mean()
        stderr = weights.std(ddof=1) / math.sqrt(weights.size)
        assert abs(p_random_one(d_A, HAND, H_A, side) - estimate) < 4 * stderr

    def test_tolerance_stability(self):
        coarse = p_random_one(80.0, HAND, H_A, SIDE, tol=1e-6)
        fine = p_random_one(80.0, HAND, H_A, SIDE, tol=1e-10)
        assert coarse == pytest.approx(fine, rel=1e-5)


class TestPBlocked:

    def test_no_random_bodies_reduces_to_self(self):
        model = BlockageModel(HAND, rb_density=0.0)
        for d in (0.0, 5.0, 7.5 + 1e-9, 40.0):
            assert p_blocked(d, model, H_A, SIDE) == p_self(d, HAND, H_A)

    def test_monotone_in_density(self):
        values = [p_blocked(60.0, BlockageModel(HAND, rb_density=rho), H_A, SIDE)
                  for rho in (0.0, 0.01, 0.1, 1.0, 3.0)]
        assert all(b >= a for a, b in zip(values, values[1:]))
        assert values[-1] <= 1.0

    def test_combination_formula(self):
        model = BlockageModel(HAND, rb_density=1000.0 / SIDE ** 2)
        assert model.random_body_count(SIDE) == 1000
        p0 = p_self(60.0, HAND, H_A)
        p1 = p_random_one(60.0, HAND, H_A, SIDE)
        expected = 1.0 - (1.0 - p1) ** 1000 * (1.0 - p0)
        assert p_blocked(60.0, model, H_A, SIDE) == pytest.approx(expected, rel=1e-10)

    def test_body_count_rounds_half_up(self):
        assert BlockageModel(HAND, rb_density=2.5 / 100.0).random_body_count(10.0) == 3
        assert BlockageModel(HAND, rb_density=2.4 / 100.0).random_body_count(10.0) == 2

    def test_array_without_table_matches_scalar(self):
        model = BlockageModel(HAND, rb_density=0.01)
        distances = np.array([0.0, 3.0, 8.0, 50.0, 300.0])
        expected = [p_blocked(d, model, H_A, SIDE) for d in distances]
        assert np.allclose(p_blocked_array(distances, model, H_A, SIDE), expected, rtol=1e-12, atol=0)


class TestRandomBodyTable:

    def test_matches_direct_quadrature(self):
        table = RandomBodyTable(HAND, H_A, SIDE, nodes=1024)
        for d in (5.0, 10.0, 50.0, 200.0, 500.0):
            direct = p_random_one(d, HAND, H_A, SIDE)
            assert float(table.p_random_one(d)) == pytest.approx(direct, abs=1e-8)

    def test_falls_back_beyond_range(self):
        table = RandomBodyTable(HAND, H_A, SIDE, nodes=64, d_max=50.0)
        assert float(table.p_random_one(120.0)) == pytest.approx(
            p_random_one(120.0, HAND, H_A, SIDE), rel=1e-12)

    def test_p_blocked_array_with_table(self):
        model = BlockageModel(HAND, rb_density=1000.0 / SIDE ** 2)
        table = RandomBodyTable(HAND, H_A, SIDE, nodes=1024)
        distances = np.array([1.0, 7.0, 8.0, 30.0, 150.0, 450.0])
        direct = p_blocked_array(distances, model, H_A, SIDE)
        tabulated = p_blocked_array(distances, model, H_A, SIDE, table=table)
        assert np.allclose(tabulated, direct, atol=1e-5, rtol=0)


class TestSampleBlockageState:

    def test_frequency(self):
        model = BlockageModel(HAND, rb_density=0.0)
        rng = np.random.default_rng(61)
        draws = 100_000
        nlos = sum(sample_blockage_state(10.0, model, H_A, SIDE, rng) is BlockageState.NLOS
                   for _ in range(draws))
        assert abs(nlos / draws - P_SELF_HAND) < 0.005

    def test_free_zone_is_always_los(self):
        model = BlockageModel(HAND, rb_density=0.0)
        rng = np.random.default_rng(62)
        assert all(sample_blockage_state(5.0, model, H_A, SIDE, rng) is BlockageState.LOS
                   for _ in range(1000))

    def test_rejects_explicit_mode(self):
        model = BlockageModel(HAND, rb_density=0.0, mode=BlockageMode.EXPLICIT_BODIES)
        with pytest.raises(ValueError, match="analytic"):
            sample_blockage_state(10.0, model, H_A, SIDE, np.random.default_rng(0))


def test_blockage_model_validation():
    with pytest.raises(ValueError):
        BlockageModel(HAND, rb_density=-0.1)
    with pytest.raises(ValueError):
        BlockageModel(HAND, rb_density=0.1, quadrature_tolerance=0.1)
    assert BlockageModel(HAND, 0.0, mode="explicit_bodies").mode is BlockageMode.EXPLICIT_BODIES
    with pytest.raises(ValueError):
        BodyGeometry(width=0.0, height_above_ue=0.4, user_body_distance=0.3)


# ---------- EXPLICIT SCENES ----------
class TestBodyScene:

    def setup_method(self):
        self.venue = Venue(SIDE)
        self.ue = Point2(150.0, 220.0)

    def test_user_body_first(self):
        scene = sample_body_scene(self.ue, self.venue, HAND, 20, np.random.default_rng(70))
        assert scene.body_count == 21
        assert scene.distances[0] == HAND.user_body_distance
        user = scene.bodies()[0]
        assert horizontal_distance(self.ue, user.position) == pytest.approx(0.3, abs=1e-12)

    def test_bodies_face_the_ue(self):
        scene = sample_body_scene(self.ue, self.venue, HAND, 50, np.random.default_rng(71))
        for body, phi in zip(scene.bodies(), scene.shadow_angles):
            facing = azimuth(self.ue, body.position) + phi / 2
            difference = math.remainder(body.orientation - facing, TWO_PI)
            assert abs(difference) < 1e-9

    def test_max_body_distance_filter(self):
        scene = sample_body_scene(self.ue, self.venue, HAND, 500, np.random.default_rng(72),
                                  max_body_distance=30.0)
        assert np.all(scene.distances[1:] <= 30.0)
        assert scene.body_count < 501

    def test_pocket_user_body_blocks_half_plane(self):
        scene = sample_body_scene(self.ue, self.venue, POCKET, 0, np.random.default_rng(73))
        assert scene.shadow_angles[0] == math.pi
        azimuths = np.linspace(0.0, TWO_PI, 720, endpoint=False)
        blocked = scene_blocks(scene, np.full(azimuths.shape, 20.0), azimuths, POCKET, H_A)
        assert blocked.sum() == pytest.approx(360, abs=1)

    def test_scene_blocks_matches_scalar_check(self):
        rng = np.random.default_rng(74)
        scene = sample_body_scene(self.ue, self.venue, HAND, 80, rng, max_body_distance=40.0)
        aps = [Point2(float(x), float(y)) for x, y in rng.uniform(100.0, 300.0, size=(40, 2))]
        distances = np.array([horizontal_distance(self.ue, ap) for ap in aps])
        azimuths = np.array([azimuth(self.ue, ap) for ap in aps])
        blocked = scene_blocks(scene, distances, azimuths, HAND, H_A)
        bodies = scene.bodies()
        for ap, d, flag in zip(aps, distances, blocked):
            expected = any(is_blocked_geometric(ap, d, self.ue, body, HAND, H_A) for body in bodies)
            assert flag == expected

    def test_rejects_negative_count(self):
        with pytest.raises(ValueError):
            sample_body_scene(self.ue, self.venue, HAND, -1, np.random.default_rng(0))


if __name__ == '__main__':
    sys.exit(pytest.main([__file__, '-v']))
