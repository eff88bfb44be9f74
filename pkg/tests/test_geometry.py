"""Geometry unit tests, checked against independent matrix/trig oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dogfight2d.geometry import Pose, SectorSpec, in_sector, normalize_angle, to_relative_frame

FINITE_ANGLES = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


def relative_frame_oracle(reference: Pose, target: Pose) -> np.ndarray:
    """Brute-force oracle: explicit 2x2 rotation matrix applied to the
    translated position, heading handled separately."""
    h = reference.heading
    rot = np.array([[math.cos(-h), -math.sin(-h)], [math.sin(-h), math.cos(-h)]])
    xy = rot @ np.array([target.x - reference.x, target.y - reference.y])
    return np.array([xy[0], xy[1], normalize_angle(target.heading - reference.heading)])


def in_sector_oracle(owner: Pose, point, spec: SectorSpec) -> bool:
    """Independent distance + absolute-bearing computation."""
    dist = math.sqrt((point[0] - owner.x) ** 2 + (point[1] - owner.y) ** 2)
    if dist == 0.0:
        return True
    if dist > spec.range:
        return False
    bearing = math.atan2(point[1] - owner.y, point[0] - owner.x)
    return abs(normalize_angle(bearing - owner.heading)) <= spec.angle / 2


def rigid_transform(pose: Pose, angle: float, tx: float, ty: float) -> Pose:
    """Rotate the plane about the origin by ``angle`` and translate."""
    c, s = math.cos(angle), math.sin(angle)
    return Pose(c * pose.x - s * pose.y + tx, s * pose.x + c * pose.y + ty, pose.heading + angle)


class TestNormalizeAngle:
    def test_identity(self):
        assert normalize_angle(0.0) == 0.0

    def test_three_pi_wraps_to_pi(self):
        assert normalize_angle(3 * math.pi) == pytest.approx(math.pi, abs=1e-15)

    def test_negative_pi_maps_to_positive_pi(self):
        assert normalize_angle(-math.pi) == math.pi

    @pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
    def test_rejects_non_finite(self, bad):
        with pytest.raises(ValueError):
            normalize_angle(bad)

    @given(FINITE_ANGLES)
    def test_range_and_idempotence(self, theta):
        r = normalize_angle(theta)
        assert -math.pi < r <= math.pi
        assert normalize_angle(r) == r

    @given(FINITE_ANGLES)
    def test_preserves_value_mod_tau(self, theta):
        r = normalize_angle(theta)
        k = (theta - r) / math.tau
        assert abs(k - round(k)) < 1e-6


class TestPose:
    def test_heading_normalized_on_construction(self):
        assert Pose(0.0, 0.0, 3 * math.pi).heading == pytest.approx(math.pi)
        assert Pose(0.0, 0.0, -math.pi).heading == math.pi

    def test_rejects_non_finite_position(self):
        with pytest.raises(ValueError):
            Pose(math.nan, 0.0, 0.0)
        with pytest.raises(ValueError):
            Pose(0.0, math.inf, 0.0)

    def test_moved_travels_along_new_heading(self):
        p = Pose(1.0, 2.0, 0.0).moved(math.pi / 2, 0.5)
        assert p.x == pytest.approx(1.0, abs=1e-15)
        assert p.y == pytest.approx(2.5)
        assert p.heading == pytest.approx(math.pi / 2)


class TestSectorSpec:
    def test_rejects_bad_range(self):
        with pytest.raises(ValueError):
            SectorSpec(range=0.0)

    def test_rejects_bad_angle(self):
        with pytest.raises(ValueError):
            SectorSpec(angle=0.0)
        with pytest.raises(ValueError):
            SectorSpec(angle=math.tau)


class TestToRelativeFrame:
    def test_identity_frame(self):
        obs = to_relative_frame(Pose(0, 0, 0), Pose(1, 0, 0))
        assert obs == pytest.approx([1.0, 0.0, 0.0])

    def test_translated_rotated_reference(self):
        # by hand: translate by (-1,-1), rotate by -pi/2
        obs = to_relative_frame(Pose(1, 1, math.pi / 2), Pose(1, 2, math.pi))
        assert obs == pytest.approx([1.0, 0.0, math.pi / 2], abs=1e-12)

    def test_reference_facing_backwards(self):
        obs = to_relative_frame(Pose(0, 0, math.pi), Pose(-1, 0, math.pi))
        assert obs == pytest.approx([1.0, 0.0, 0.0], abs=1e-12)

    def test_matches_matrix_oracle(self):
        rng = np.random.default_rng(42)
        for _ in range(500):
            ref = Pose(*rng.uniform(-5, 5, 2), rng.uniform(-math.pi, math.pi))
            tgt = Pose(*rng.uniform(-5, 5, 2), rng.uniform(-math.pi, math.pi))
            assert to_relative_frame(ref, tgt) == pytest.approx(
                relative_frame_oracle(ref, tgt), abs=1e-12
            )

    def test_invariant_under_rigid_transform(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            a = Pose(*rng.uniform(-3, 3, 2), rng.uniform(-math.pi, math.pi))
            b = Pose(*rng.uniform(-3, 3, 2), rng.uniform(-math.pi, math.pi))
            angle, tx, ty = rng.uniform(-math.pi, math.pi), *rng.uniform(-10, 10, 2)
            base = to_relative_frame(a, b)
            moved = to_relative_frame(
                rigid_transform(a, angle, tx, ty), rigid_transform(b, angle, tx, ty)
            )
            np.testing.assert_allclose(moved, base, atol=1e-9)

    def test_round_trip_recovers_target(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            ref = Pose(*rng.uniform(-3, 3, 2), rng.uniform(-math.pi, math.pi))
            tgt = Pose(*rng.uniform(-3, 3, 2), rng.uniform(-math.pi, math.pi))
            rx, ry, rh = to_relative_frame(ref, tgt)
            # inverse transform: rotate by +heading, translate by reference position
            c, s = math.cos(ref.heading), math.sin(ref.heading)
            back = Pose(c * rx - s * ry + ref.x, s * rx + c * ry + ref.y, rh + ref.heading)
            assert back.x == pytest.approx(tgt.x, abs=1e-9)
            assert back.y == pytest.approx(tgt.y, abs=1e-9)
            assert normalize_angle(back.heading - tgt.heading) == pytest.approx(0.0, abs=1e-9)


class TestInSector:
    spec = SectorSpec(range=0.25, angle=math.pi / 6)

    def test_directly_ahead_within_range(self):
        assert in_sector(Pose(0, 0, 0), (0.1, 0.0), self.spec)

    def test_beyond_range(self):
        assert not in_sector(Pose(0, 0, 0), (0.3, 0.0), self.spec)

    def test_bearing_exactly_on_boundary(self):
        pt = (0.2 * math.cos(math.pi / 12), 0.2 * math.sin(math.pi / 12))
        assert in_sector(Pose(0, 0, 0), pt, self.spec)

    def test_bearing_just_outside_boundary(self):
        pt = (0.2 * math.cos(math.pi / 10), 0.2 * math.sin(math.pi / 10))
        assert not in_sector(Pose(0, 0, 0), pt, self.spec)

    def test_range_exactly_on_boundary(self):
        assert in_sector(Pose(0, 0, 0), (0.25, 0.0), self.spec)

    def test_coincident_point_counts_as_inside(self):
        owner = Pose(0.7, -0.3, 2.1)
        assert in_sector(owner, (0.7, -0.3), self.spec)

    def test_agrees_with_oracle_on_random_pairs(self):
        rng = np.random.default_rng(123)
        for _ in range(10_000):
            owner = Pose(*rng.uniform(-1, 1, 2), rng.uniform(-math.pi, math.pi))
            point = tuple(rng.uniform(-1, 1, 2))
            assert in_sector(owner, point, self.spec) == in_sector_oracle(owner, point, self.spec)
