"""Step 2a: greedy hub-trap placement from CZ geometry, with endpoint rings."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .budget import Deadline, check
from .frontend import InteractionGraph
from .placement import Placement


@dataclass
class HubConfig:
    n_hub: int = 8
    ring_enabled: bool = False
    long_range_factor: float = 1.1
    ring_radius_factor: float = 0.9
    ring_directions: int = 8

    def __post_init__(self):
        if self.n_hub < 0:
            raise ValueError("n_hub must be non-negative")
        if self.long_range_factor <= 0 or self.ring_radius_factor <= 0:
            raise ValueError("hub factors must be positive")
        if self.ring_directions < 1:
            raise ValueError("ring_directions must be >= 1")


@dataclass(frozen=True)
class Candidate:
    position: tuple[float, float]
    source: str  # "midpoint" | "ring"
    pair: tuple[int, int]
    endpoint: int | None = None
    direction: int | None = None


@dataclass
class HubSet:
    positions: list[tuple[float, float]] = field(default_factory=list)
    provenance: list[Candidate] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.positions)

    def to_dict(self) -> dict:
        return {
            "positions": [list(p) for p in self.positions],
            "provenance": [
                {
                    "source": c.source,
                    "pair": list(c.pair),
                    "endpoint": c.endpoint,
                    "direction": c.direction,
                }
                for c in self.provenance
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "HubSet":
        positions = [tuple(p) for p in d["positions"]]
        prov = [
            Candidate(pos, c["source"], tuple(c["pair"]), c.get("endpoint"), c.get("direction"))
            for pos, c in zip(positions, d.get("provenance", []))
        ]
        return cls(positions, prov)


def _coords(p) -> np.ndarray:
    return p.coords if isinstance(p, Placement) else np.asarray(p, dtype=float).reshape(-1, 2)


def long_range_pairs(
    g: InteractionGraph, p, r_b: float, factor: float = 1.1
) -> list[tuple[int, int]]:
    """CZ pairs longer than ``factor * r_b``; every CZ pair when none is."""
    x = _coords(p)
    edges = g.edges
    long = [(i, j) for i, j in edges if float(np.linalg.norm(x[i] - x[j])) > factor * r_b]
    return long if long else edges


def generate_candidates(pairs, p, cfg: HubConfig, r_b: float) -> list[Candidate]:
    x = _coords(p)
    out: list[Candidate] = []
    ring_r = cfg.ring_radius_factor * r_b
    for i, j in sorted(pairs):
        mid = (x[i] + x[j]) / 2
        out.append(Candidate((float(mid[0]), float(mid[1])), "midpoint", (i, j)))
        if not cfg.ring_enabled:
            continue
        for end in (i, j):
            for k in range(cfg.ring_directions):
                ang = 2 * math.pi * k / cfg.ring_directions
                cx = float(x[end][0] + ring_r * math.cos(ang))
                cy = float(x[end][1] + ring_r * math.sin(ang))
                if 0.0 <= cx <= 1.0 and 0.0 <= cy <= 1.0:
                    out.append(Candidate((cx, cy), "ring", (i, j), end, k))
    return out


def _score_rows(points: np.ndarray, xi: np.ndarray, xj: np.ndarray, w: np.ndarray) -> np.ndarray:
    di = np.hypot(points[:, None, 0] - xi[None, :, 0], points[:, None, 1] - xi[None, :, 1])
    dj = np.hypot(points[:, None, 0] - xj[None, :, 0], points[:, None, 1] - xj[None, :, 1])
    return (w * (1.0 / (1.0 + di) + 1.0 / (1.0 + dj))).sum(axis=1)


def _pair_arrays(long_pairs, g: InteractionGraph, x: np.ndarray):
    idx = np.array(long_pairs, dtype=int).reshape(-1, 2)
    w = np.array([g.weight(i, j) for i, j in long_pairs], dtype=float)
    return x[idx[:, 0]], x[idx[:, 1]], w


def hub_score(c, long_pairs, g: InteractionGraph, p) -> float:
    """Endpoint-proximity score weighted by CZ counts."""
    if not long_pairs:
        return 0.0
    xi, xj, w = _pair_arrays(long_pairs, g, _coords(p))
    return float(_score_rows(np.asarray(c, dtype=float).reshape(1, 2), xi, xj, w)[0])


def score_candidates(points, long_pairs, g: InteractionGraph, p, deadline=None, chunk_cells: int = 1 << 20) -> np.ndarray:
    """``hub_score`` for many points at once, row for row identical to the scalar call."""
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    if not long_pairs:
        return np.zeros(len(points))
    xi, xj, w = _pair_arrays(long_pairs, g, _coords(p))
    step = max(1, chunk_cells // len(w))
    out = []
    for k in range(0, len(points), step):
        check(deadline, "hubs")
        out.append(_score_rows(points[k : k + step], xi, xj, w))
    return np.concatenate(out)


def place_hubs(
    g: InteractionGraph, p, r_b: float, cfg: HubConfig | None = None, deadline: Deadline | None = None
) -> HubSet:
    """Greedy max-score selection of up to ``n_hub`` mutually feasible candidates.

    A candidate is feasible when it lies at least ``r_b / 3`` from every home
    trap and every hub chosen so far.  Scores do not depend on the chosen
    hubs, so they are evaluated once; ties go to the earlier candidate.
    """
    cfg = cfg or HubConfig()
    x = _coords(p)
    hubs = HubSet()
    if cfg.n_hub == 0 or not g.weights:
        return hubs
    d_min = r_b / 3.0
    pairs = long_range_pairs(g, x, r_b, cfg.long_range_factor)
    cands = generate_candidates(pairs, x, cfg, r_b)
    if not cands:
        return hubs
    pos = np.array([c.position for c in cands])
    scores = score_candidates(pos, pairs, g, x, deadline)

    def far_from(points: np.ndarray) -> np.ndarray:
        diff = pos[:, None, :] - points[None, :, :]
        return (np.sqrt((diff**2).sum(-1)) >= d_min).all(axis=1)

    alive = far_from(x)
    while len(hubs) < cfg.n_hub and alive.any():
        k = int(np.argmax(np.where(alive, scores, -np.inf)))
        hubs.positions.append(cands[k].position)
        hubs.provenance.append(cands[k])
        alive &= far_from(pos[k : k + 1])
    return hubs
