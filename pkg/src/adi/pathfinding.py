"""Grid pathfinding over a binary traversability mask.

8-connected A* with unit axis steps and sqrt(2) diagonal steps. Costs are
tracked as integer (straight, diagonal) step counts so the reported length
is exact: length_m = (straight + diagonal * sqrt(2)) * gsd, with no
accumulation drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from heapq import heappop, heappush

import numpy as np

from .errors import OutOfBounds

SQRT2 = math.sqrt(2.0)

SNAP_RADIUS = 10  # Chebyshev radius for snapping endpoints onto the mask

_NEIGHBORS = (
    (1, 0, 0),
    (-1, 0, 0),
    (0, 1, 0),
    (0, -1, 0),
    (1, 1, 1),
    (1, -1, 1),
    (-1, 1, 1),
    (-1, -1, 1),
)  # dx, dy, is_diagonal


@dataclass
class PathResult:
    reachable: bool
    length_m: float | None = None
    waypoints: list[tuple[int, int]] | None = None


def step_cost(straight: int, diagonal: int) -> float:
    return straight + diagonal * SQRT2

def _octile(ax: int, ay: int, bx: int, by: int) -> float:
    dx = abs(ax - bx)
    dy = abs(ay - by)
    return max(dx, dy) + (SQRT2 - 1.0) * min(dx, dy)


def snap_to_mask(
    mask: np.ndarray, point: tuple[int, int], radius: int = SNAP_RADIUS
) -> tuple[int, int] | None:
    """Nearest traversable pixel within a Chebyshev radius, or None.

    Identity when the point is already traversable. Ties broken by
    Euclidean distance, then row-major order, for determinism.
    """
    x, y = point
    height, width = mask.shape
    if mask[y, x]:
        return (x, y)
    best = None
    for r in range(1, radius + 1):
        candidates = []
        for cy in range(max(0, y - r), min(height, y + r + 1)):
            for cx in range(max(0, x - r), min(width, x + r + 1)):
                if max(abs(cx - x), abs(cy - y)) == r and mask[cy, cx]:
                    candidates.append(((cx - x) ** 2 + (cy - y) ** 2, cy, cx))
        if candidates:
            _, cy, cx = min(candidates)
            best = (cx, cy)
            break
    return best


def find_path(
    mask: np.ndarray,
    start: tuple[int, int],
    dest: tuple[int, int],
    gsd: float,
    snap_radius: int = SNAP_RADIUS,
) -> PathResult:
    """Cost-optimal 8-connected path between two pixel coordinates.

    Endpoints off the mask are snapped within `snap_radius`; unreachable
    when no snap target exists or the snapped endpoints are disconnected.
    Raises OutOfBounds for points outside the image.
    """
    height, width = mask.shape
    for px, py in (start, dest):
        if not (0 <= px < width and 0 <= py < height):
            raise OutOfBounds(f"point ({px},{py}) outside {width}x{height} image")

    snapped_start = snap_to_mask(mask, start, snap_radius)
    snapped_dest = snap_to_mask(mask, dest, snap_radius)
    if snapped_start is None or snapped_dest is None:
        return PathResult(reachable=False)

    if snapped_start == snapped_dest:
        return PathResult(reachable=True, length_m=0.0, waypoints=[snapped_start])

    sx, sy = snapped_start
    dx_, dy_ = snapped_dest

    # g-costs as (straight, diagonal) integer pairs keyed by float value;
    # heap entries carry a tiebreaker to keep ordering deterministic.
    g_cost: dict[tuple[int, int], tuple[int, int]] = {(sx, sy): (0, 0)}
    came_from: dict[tuple[int, int], tuple[int, int]] = {}
    counter = 0
    heap = [(_octile(sx, sy, dx_, dy_), counter, sx, sy)]
    closed: set[tuple[int, int]] = set()

    while heap:
        _, _, cx, cy = heappop(heap)
        if (cx, cy) in closed:
            continue
        closed.add((cx, cy))
        if (cx, cy) == (dx_, dy_):
            break
        cs, cd = g_cost[(cx, cy)]
        for ddx, ddy, diag in _NEIGHBORS:
            nx, ny = cx + ddx, cy + ddy
            if not (0 <= nx < width and 0 <= ny < height) or not mask[ny, nx]:
                continue
            ns, nd = cs + (1 - diag), cd + diag
            new_cost = step_cost(ns, nd)
            old = g_cost.get((nx, ny))
            if old is None or new_cost < step_cost(*old):
                g_cost[(nx, ny)] = (ns, nd)
                came_from[(nx, ny)] = (cx, cy)
                counter += 1
                heappush(heap, (new_cost + _octile(nx, ny, dx_, dy_), counter, nx, ny))

    if (dx_, dy_) not in g_cost or (dx_, dy_) not in closed:
        return PathResult(reachable=False)

    waypoints = [(dx_, dy_)]
    while waypoints[-1] != (sx, sy):
        waypoints.append(came_from[waypoints[-1]])
    waypoints.reverse()
    straight, diagonal = g_cost[(dx_, dy_)]
    return PathResult(
        reachable=True,
        length_m=step_cost(straight, diagonal) * gsd,
        waypoints=waypoints,
    )
