"""Velocity selection over ORCA half-planes.

A sequence of 2D linear programs picks the velocity inside the speed disc that
satisfies every half-plane and is closest to the preferred velocity. When the
half-planes leave no admissible velocity, a projected 3D program minimizes the
largest penetration instead. The hot loop works on plain float tuples.

Classes:
    HalfPlane: Boundary line with the admissible side to the left of ``direction``.

Functions:
    det: 2D cross product.
    linear_program1: Optimize on one boundary line.
    linear_program2: Incremental 2D program over all lines.
    linear_program3: Least-penetration fallback.
    solve_velocity: The full chain.
"""

import math
from typing import NamedTuple

from crowdbench.services.geometry.kinematics import Vec2

EPSILON = 1e-5


class HalfPlane(NamedTuple):
    """Admissible velocities ``v`` with ``det(direction, point - v) <= 0``.

    Attributes:
        point (Vec2): A point on the boundary line, m/s.
        direction (Vec2): Unit direction of the line.
    """

    point: Vec2
    direction: Vec2

    def violation(self, velocity: Vec2) -> float:
        """Signed distance of ``velocity`` into the forbidden side; positive means violated.

        Args:
            velocity (Vec2): Velocity to test.

        Returns:
            float: Penetration depth, m/s.
        """
        return det(self.direction, (self.point[0] - velocity[0], self.point[1] - velocity[1]))


def det(a: Vec2, b: Vec2) -> float:
    """Cross product ``a_x b_y - a_y b_x``.

    Args:
        a (Vec2): First vector.
        b (Vec2): Second vector.

    Returns:
        float: The determinant.
    """
    return a[0] * b[1] - a[1] * b[0]


def linear_program1(
    lines: list[HalfPlane],
    line_no: int,
    radius: float,
    opt_velocity: Vec2,
    direction_opt: bool,  # noqa: FBT001
) -> Vec2 | None:
    """Optimize on the boundary of ``lines[line_no]`` subject to the earlier lines and the disc.

    Args:
        lines (list[HalfPlane]): Constraints.
        line_no (int): Index of the line to move along.
        radius (float): Speed limit.
        opt_velocity (Vec2): Target velocity, or target direction when ``direction_opt``.
        direction_opt (bool): Maximize along ``opt_velocity`` instead of approaching it.

    Returns:
        Vec2 | None: The optimum, or None when the line has no admissible point.
    """
    line = lines[line_no]
    (px, py), (dx, dy) = line.point, line.direction
    dot = px * dx + py * dy
    discriminant = dot * dot + radius * radius - (px * px + py * py)
    if discriminant < 0.0:
        return None
    root = math.sqrt(discriminant)
    t_left, t_right = -dot - root, -dot + root
    for other in lines[:line_no]:
        denominator = det(line.direction, other.direction)
        numerator = det(other.direction, (px - other.point[0], py - other.point[1]))
        if abs(denominator) <= EPSILON:
            if numerator < 0.0:
                return None
            continue
        t = numerator / denominator
        if denominator >= 0.0:
            t_right = min(t_right, t)
        else:
            t_left = max(t_left, t)
        if t_left > t_right:
            return None
    if direction_opt:
        t = t_right if opt_velocity[0] * dx + opt_velocity[1] * dy > 0.0 else t_left
    else:
        t = dx * (opt_velocity[0] - px) + dy * (opt_velocity[1] - py)
        t = min(max(t, t_left), t_right)
    return (px + t * dx, py + t * dy)


def linear_program2(
    lines: list[HalfPlane],
    radius: float,
    opt_velocity: Vec2,
    direction_opt: bool,  # noqa: FBT001
) -> tuple[int, Vec2]:
    """Add constraints one by one, re-optimizing on each violated boundary.

    Args:
        lines (list[HalfPlane]): Constraints, processed in order.
        radius (float): Speed limit.
        opt_velocity (Vec2): Target velocity, or target direction when ``direction_opt``.
        direction_opt (bool): Maximize along ``opt_velocity``.

    Returns:
        tuple[int, Vec2]: Index of the first infeasible line (``len(lines)`` on success) and the
        best velocity found so far.
    """
    ox, oy = opt_velocity
    if direction_opt:
        result = (ox * radius, oy * radius)
    elif ox * ox + oy * oy > radius * radius:
        norm = math.hypot(ox, oy)
        result = (ox / norm * radius, oy / norm * radius)
    else:
        result = opt_velocity
    for index, line in enumerate(lines):
        if line.violation(result) > 0.0:
            candidate = linear_program1(lines, index, radius, opt_velocity, direction_opt)
            if candidate is None:
                return index, result
            result = candidate
    return len(lines), result


def linear_program3(lines: list[HalfPlane], begin_line: int, radius: float, result: Vec2) -> Vec2:
    """Minimize the largest penetration over lines ``begin_line..`` by projecting into 2D.

    Args:
        lines (list[HalfPlane]): Constraints.
        begin_line (int): First line the 2D program failed on.
        radius (float): Speed limit.
        result (Vec2): Velocity returned by the failed 2D program.

    Returns:
        Vec2: The least-penetrating velocity.
    """
    distance = 0.0
    for index in range(begin_line, len(lines)):
        line = lines[index]
        if line.violation(result) <= distance:
            continue
        projected = []
        for other in lines[:index]:
            determinant = det(line.direction, other.direction)
            if abs(determinant) <= EPSILON:
                if line.direction[0] * other.direction[0] + line.direction[1] * other.direction[1] > 0.0:
                    # same direction
                    continue
                point = (
                    0.5 * (line.point[0] + other.point[0]),
                    0.5 * (line.point[1] + other.point[1]),
                )
            else:
                offset = det(other.direction, (line.point[0] - other.point[0], line.point[1] - other.point[1]))
                scale = offset / determinant
                point = (line.point[0] + scale * line.direction[0], line.point[1] + scale * line.direction[1])
            dx = other.direction[0] - line.direction[0]
            dy = other.direction[1] - line.direction[1]
            norm = math.hypot(dx, dy)
            projected.append(HalfPlane(point, (dx / norm, dy / norm)))
        normal = (-line.direction[1], line.direction[0])
        failed, candidate = linear_program2(projected, radius, normal, True)  # noqa: FBT003
        if failed == len(projected):
            result = candidate
        distance = line.violation(result)
    return result


def solve_velocity(lines: list[HalfPlane], pref_velocity: Vec2, max_speed: float) -> Vec2:
    """Admissible velocity closest to ``pref_velocity`` within ``max_speed``.

    Args:
        lines (list[HalfPlane]): Constraints in processing order.
        pref_velocity (Vec2): Preferred velocity.
        max_speed (float): Radius of the speed disc, ``> 0``.

    Returns:
        Vec2: The selected velocity; the least-penetrating one when no velocity is admissible.
    """
    failed, result = linear_program2(lines, max_speed, pref_velocity, False)  # noqa: FBT003
    if failed < len(lines):
        result = linear_program3(lines, failed, max_speed, result)
    return result
