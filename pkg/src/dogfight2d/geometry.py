"""Planar kinematics primitives: poses, angle arithmetic, frame transforms,
and targeting-sector containment.

All angles are radians, canonicalized to the half-open interval (-pi, pi]
with +pi as the inclusive endpoint so that ties at the branch cut resolve
deterministically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def normalize_angle(theta: float) -> float:
    """Wrap ``theta`` to (-pi, pi], preserving its value mod 2*pi.

    Raises ValueError on non-finite input.
    """
    if not math.isfinite(theta):
        raise ValueError(f"angle must be finite, got {theta!r}")
    # IEEE remainder lands in [-pi, pi]; fold the excluded -pi endpoint up.
    r = math.remainder(theta, math.tau)
    if r <= -math.pi:
        r += math.tau
    return r


@dataclass(frozen=True)
class Pose:
    """Position (m) and heading (rad) of one agent.

    The heading is normalized to (-pi, pi] on construction.
    """

    x: float
    y: float
    heading: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"pose position must be finite, got ({self.x!r}, {self.y!r})")
        object.__setattr__(self, "heading", normalize_angle(self.heading))

    def moved(self, turn: float, distance: float) -> "Pose":
        """Pose after turning by ``turn`` and translating ``distance`` along
        the new heading in a straight line."""
        h = normalize_angle(self.heading + turn)
        return Pose(self.x + distance * math.cos(h), self.y + distance * math.sin(h), h)


@dataclass(frozen=True)
class SectorSpec:
    """Circular targeting sector: radius ``range`` and full central angle
    ``angle``, attached symmetrically to the owner's heading."""

    range: float = 0.25
    angle: float = math.pi / 6

    def __post_init__(self) -> None:
        if not self.range > 0:
            raise ValueError(f"sector range must be > 0, got {self.range!r}")
        if not 0 < self.angle < math.tau:
            raise ValueError(f"sector angle must be in (0, 2*pi), got {self.angle!r}")


def bearing_to(origin: Pose, x: float, y: float) -> float:
    """Absolute bearing from ``origin``'s position to the point (x, y)."""
    return math.atan2(y - origin.y, x - origin.x)


def to_relative_frame(reference: Pose, target: Pose) -> np.ndarray:
    """Express ``target`` in the frame where ``reference`` sits at the origin
    with heading 0.

    Returns the 3-vector (rel_x, rel_y, rel_heading), rel_heading in (-pi, pi].
    """
    dx = target.x - reference.x
    dy = target.y - reference.y
    c = math.cos(reference.heading)
    s = math.sin(reference.heading)
    return np.array(
        (c * dx + s * dy, -s * dx + c * dy, normalize_angle(target.heading - reference.heading)),
        dtype=np.float64,
    )


def in_sector(owner: Pose, target_point: tuple[float, float], spec: SectorSpec) -> bool:
    """True iff ``target_point`` lies inside ``owner``'s targeting sector.

    Both boundaries are inclusive: distance <= range and |bearing error|
    <= angle/2. A point coincident with the owner counts as inside
    (distance 0; the bearing is undefined there and treated as 0).
    """
    dx = target_point[0] - owner.x
    dy = target_point[1] - owner.y
    if dx == 0.0 and dy == 0.0:
        return True
    if math.hypot(dx, dy) > spec.range:
        return False
    off = normalize_angle(math.atan2(dy, dx) - owner.heading)
    return abs(off) <= spec.angle / 2
