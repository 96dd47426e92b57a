"""Collision-avoiding shuttle distances on an occupancy grid, and shuttle timing."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .budget import Deadline, check
from .errors import DegenerateInput, UnknownTrap

SQRT2 = math.sqrt(2.0)
_STEPS = [
    (1, 0, 1.0), (-1, 0, 1.0), (0, 1, 1.0), (0, -1, 1.0),
    (1, 1, SQRT2), (1, -1, SQRT2), (-1, 1, SQRT2), (-1, -1, SQRT2),
]


@dataclass
class MotionGrid:
    """Square cells over [0,1]^2; a cell is blocked when its center lies
    strictly within ``d_min`` of a trap.  Queries unblock the exclusion disks
    of their own source and destination traps."""

    cell_size: float
    n: int
    traps: np.ndarray
    d_min: float
    disks: list[np.ndarray] = field(repr=False)
    blocked: np.ndarray = field(repr=False)

    @property
    def trap_cells(self) -> list[tuple[int, int]]:
        return [self.cell_of(p) for p in self.traps]

    def cell_of(self, point) -> tuple[int, int]:
        ix = min(self.n - 1, max(0, int(point[0] / self.cell_size)))
        iy = min(self.n - 1, max(0, int(point[1] / self.cell_size)))
        return ix, iy

    def center(self, cell: tuple[int, int]) -> np.ndarray:
        return (np.asarray(cell, dtype=float) + 0.5) * self.cell_size

    def blocked_for(self, src: int, dst: int) -> np.ndarray:
        self._check(src)
        self._check(dst)
        return self.blocked & ~self.disks[src] & ~self.disks[dst]

    def _check(self, trap: int) -> None:
        if not 0 <= trap < len(self.traps):
            raise UnknownTrap(trap)


def build_grid(traps, d_min: float, cell_size: float | None = None) -> MotionGrid:
    if cell_size is None:
        cell_size = d_min / 2
    if cell_size <= 0:
        raise DegenerateInput("cell_size must be positive")
    pts = np.asarray(traps, dtype=float).reshape(-1, 2)
    n = max(1, math.ceil(1.0 / cell_size - 1e-9))
    centers = (np.arange(n) + 0.5) * cell_size
    cx, cy = np.meshgrid(centers, centers, indexing="ij")
    disks = [np.hypot(cx - p[0], cy - p[1]) < d_min for p in pts]
    blocked = np.zeros((n, n), dtype=bool)
    for disk in disks:
        blocked |= disk
    return MotionGrid(cell_size, n, pts, d_min, disks, blocked)


def grid_path_length(grid: MotionGrid, blocked: np.ndarray, start, goal) -> float | None:
    """8-connected A* between two cells; diagonal moves may not cut a blocked corner."""
    n = grid.n
    s = start[0] * n + start[1]
    t = goal[0] * n + goal[1]
    if s == t:
        return 0.0
    free = (~blocked).ravel().tolist()
    free[s] = free[t] = True
    gx, gy = goal
    cs = grid.cell_size

    def h(ix: int, iy: int) -> float:
        dx, dy = abs(ix - gx), abs(iy - gy)
        return (max(dx, dy) + (SQRT2 - 1.0) * min(dx, dy)) * cs

    dist = {s: 0.0}
    heap = [(h(*start), 0.0, s)]
    closed = set()
    while heap:
        _, g, u = heapq.heappop(heap)
        if u == t:
            return g
        if u in closed:
            continue
        closed.add(u)
        ux, uy = divmod(u, n)
        for dx, dy, c in _STEPS:
            vx, vy = ux + dx, uy + dy
            if not (0 <= vx < n and 0 <= vy < n):
                continue
            v = vx * n + vy
            if not free[v] or v in closed:
                continue
            if dx and dy and not (free[ux * n + vy] and free[vx * n + uy]):
                continue
            ng = g + c * cs
            if ng < dist.get(v, math.inf):
                dist[v] = ng
                heapq.heappush(heap, (ng + h(vx, vy), ng, v))
    return None


def astar_distance(grid: MotionGrid, src: int, dst: int) -> float | None:
    """Normalized shuttle length between two traps, or ``None`` if unreachable.

    The grid length is floored at the straight-line distance, so a result is
    never shorter than the Euclidean separation of the two traps.
    """
    if src == dst:
        grid._check(src)
        return 0.0
    blocked = grid.blocked_for(src, dst)
    a, b = grid.traps[src], grid.traps[dst]
    length = grid_path_length(grid, blocked, grid.cell_of(a), grid.cell_of(b))
    if length is None:
        return None
    return max(float(np.hypot(*(a - b))), length)


class DistanceCache:
    """Symmetric memo of trap-to-trap shuttle lengths; ``None`` marks unreachable."""

    def __init__(self, num_traps: int, entries: dict[tuple[int, int], float | None] | None = None):
        self.num_traps = num_traps
        self._d: dict[tuple[int, int], float | None] = dict(entries or {})

    def __len__(self) -> int:
        return len(self._d)

    def __contains__(self, key) -> bool:
        a, b = key
        return a == b or (min(a, b), max(a, b)) in self._d

    def get(self, a: int, b: int) -> float | None:
        if not (0 <= a < self.num_traps and 0 <= b < self.num_traps):
            raise UnknownTrap((a, b))
        if a == b:
            return 0.0
        return self._d[(min(a, b), max(a, b))]

    def set(self, a: int, b: int, value: float | None) -> None:
        self._d[(min(a, b), max(a, b))] = value

    def items(self):
        return self._d.items()

    def to_list(self) -> list[list]:
        return [[a, b, d] for (a, b), d in sorted(self._d.items())]

    @classmethod
    def from_list(cls, num_traps: int, rows) -> "DistanceCache":
        return cls(num_traps, {(int(a), int(b)): d for a, b, d in rows})


def precompute_distances(
    traps,
    d_min: float,
    cell_size: float | None = None,
    deadline: Deadline | None = None,
) -> DistanceCache:
    grid = build_grid(traps, d_min, cell_size)
    m = len(grid.traps)
    cache = DistanceCache(m)
    for a in range(m):
        check(deadline, "distance precomputation")
        for b in range(a + 1, m):
            cache.set(a, b, astar_distance(grid, a, b))
    return cache


def shuttle_duration(d: float, s: float, t_act: float, v_sh: float) -> float:
    """Two trap (de)activations plus travel at constant speed, in μs."""
    if v_sh <= 0:
        raise DegenerateInput("shuttle speed must be positive")
    if d < 0:
        raise DegenerateInput("shuttle distance must be non-negative")
    return 2.0 * t_act + s * d / v_sh
