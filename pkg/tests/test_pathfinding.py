import heapq
import math
from collections import deque

import numpy as np
import pytest

from adi.errors import OutOfBounds
from adi.pathfinding import find_path, snap_to_mask, step_cost

SQRT2 = math.sqrt(2.0)

NEIGHBORS = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)]


def bfs_reachable(mask, start, dest):
    """Oracle: 8-connected reachability by breadth-first search."""
    if not mask[start[1], start[0]] or not mask[dest[1], dest[0]]:
        return False
    height, width = mask.shape
    seen = {start}
    queue = deque([start])
    while queue:
        x, y = queue.popleft()
        if (x, y) == dest:
            return True
        for dx, dy in NEIGHBORS:
            nx, ny = x + dx, y + dy
            if 0 <= nx < width and 0 <= ny < height and mask[ny, nx] and (nx, ny) not in seen:
                seen.add((nx, ny))
                queue.append((nx, ny))
    return False


def dijkstra_cost(mask, start, dest):
    """Oracle: minimal cost with unit/sqrt(2) steps, tracked as exact
    integer step counts."""
    height, width = mask.shape
    best = {start: (0, 0)}
    heap = [(0.0, 0, start)]
    tick = 0
    while heap:
        cost, _, (x, y) = heapq.heappop(heap)
        if (x, y) == dest:
            return cost
        if cost > step_cost(*best[(x, y)]):
            continue
        s, d = best[(x, y)]
        for dx, dy in NEIGHBORS:
            nx, ny = x + dx, y + dy
            if not (0 <= nx < width and 0 <= ny < height and mask[ny, nx]):
                continue
            diag = dx != 0 and dy != 0
            ns, nd = s + (not diag), d + diag
            ncost = step_cost(ns, nd)
            if (nx, ny) not in best or ncost < step_cost(*best[(nx, ny)]):
                best[(nx, ny)] = (ns, nd)
                tick += 1
                heapq.heappush(heap, (ncost, tick, (nx, ny)))
    return None


def random_mask(rng, size=64, density=0.6):
    return rng.random((size, size)) < density


def sample_traversable(rng, mask, n=2):
    ys, xs = np.nonzero(mask)
    idx = rng.integers(0, len(xs), size=n)
    return [(int(xs[i]), int(ys[i])) for i in idx]


class TestBasics:
    def test_start_equals_dest(self):
        mask = np.ones((8, 8), dtype=bool)
        result = find_path(mask, (3, 3), (3, 3), gsd=0.5)
        assert result.reachable
        assert result.length_m == 0.0
        assert result.waypoints == [(3, 3)]

    def test_straight_corridor_length(self):
        mask = np.zeros((5, 10), dtype=bool)
        mask[2, :] = True
        result = find_path(mask, (0, 2), (9, 2), gsd=0.5)
        assert result.reachable
        assert result.length_m == 9 * 0.5

    def test_diagonal_length(self):
        mask = np.ones((6, 6), dtype=bool)
        result = find_path(mask, (0, 0), (5, 5), gsd=1.0)
        assert result.reachable
        assert result.length_m == pytest.approx(5 * SQRT2)

    def test_disjoint_components_unreachable(self):
        mask = np.zeros((8, 8), dtype=bool)
        mask[:, 0] = True
        mask[:, 7] = True
        result = find_path(mask, (0, 0), (7, 7), gsd=1.0)
        assert not result.reachable
        assert result.length_m is None
        assert result.waypoints is None

    def test_out_of_bounds(self):
        mask = np.ones((8, 8), dtype=bool)
        with pytest.raises(OutOfBounds):
            find_path(mask, (0, 0), (8, 0), gsd=1.0)
        with pytest.raises(OutOfBounds):
            find_path(mask, (-1, 0), (3, 3), gsd=1.0)

    def test_blocked_cell_not_crossed(self):
        mask = np.ones((3, 3), dtype=bool)
        mask[1, :] = False  # wall across the middle
        assert not find_path(mask, (1, 0), (1, 2), gsd=1.0).reachable


class TestSnapping:
    def test_snap_is_identity_on_mask(self):
        mask = np.zeros((20, 20), dtype=bool)
        mask[5, 5] = True
        assert snap_to_mask(mask, (5, 5)) == (5, 5)

    def test_snap_to_nearest_within_radius(self):
        mask = np.zeros((30, 30), dtype=bool)
        mask[10, 14] = True
        assert snap_to_mask(mask, (10, 10)) == (14, 10)

    def test_snap_beyond_radius_fails(self):
        mask = np.zeros((40, 40), dtype=bool)
        mask[0, 39] = True
        assert snap_to_mask(mask, (0, 0)) is None

    def test_path_with_snapped_endpoints(self):
        mask = np.zeros((20, 20), dtype=bool)
        mask[10, 2:18] = True
        result = find_path(mask, (2, 7), (17, 13), gsd=1.0)
        assert result.reachable
        assert result.waypoints[0] == (2, 10)
        assert result.waypoints[-1] == (17, 10)

    def test_unreachable_when_no_snap_target(self):
        mask = np.zeros((40, 40), dtype=bool)
        mask[39, 39] = True
        assert not find_path(mask, (0, 0), (39, 39), gsd=1.0).reachable


class TestWaypointInvariants:
    def test_waypoints_are_8_connected_traversable_and_cost_consistent(self):
        rng = np.random.default_rng(21)
        checked = 0
        while checked < 40:
            mask = random_mask(rng, density=0.7)
            if not mask.any():
                continue
            start, dest = sample_traversable(rng, mask)
            result = find_path(mask, start, dest, gsd=0.5)
            if not result.reachable:
                continue
            checked += 1
            straight = diagonal = 0
            for a, b in zip(result.waypoints, result.waypoints[1:]):
                dx, dy = abs(a[0] - b[0]), abs(a[1] - b[1])
                assert max(dx, dy) == 1
                if dx and dy:
                    diagonal += 1
                else:
                    straight += 1
            for x, y in result.waypoints:
                assert mask[y, x]
            assert result.length_m == step_cost(straight, diagonal) * 0.5


class TestOracleAgreement:
    def test_reachability_matches_bfs(self):
        rng = np.random.default_rng(33)
        for i in range(60):
            mask = random_mask(rng, density=(0.4, 0.6, 0.8)[i % 3])
            if not mask.any():
                continue
            start, dest = sample_traversable(rng, mask)
            got = find_path(mask, start, dest, gsd=1.0).reachable
            assert got == bfs_reachable(mask, start, dest)

    def test_cost_matches_dijkstra_exactly(self):
        rng = np.random.default_rng(34)
        compared = 0
        while compared < 30:
            mask = random_mask(rng, density=0.6)
            if not mask.any():
                continue
            start, dest = sample_traversable(rng, mask)
            result = find_path(mask, start, dest, gsd=1.0)
            oracle = dijkstra_cost(mask, start, dest)
            if oracle is None:
                assert not result.reachable
                continue
            compared += 1
            assert result.reachable
            assert result.length_m == oracle  # bit-exact, not approx
