"""Step 1: circuit-aware 2D placement and normalized blockade radius."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .budget import Deadline, check
from .errors import DegenerateInput, PlacementInfeasible
from .frontend import InteractionGraph

CANDIDATE_TOL = 1e-12


@dataclass
class AnnealOptions:
    maxiter: int = 10000
    seed: int = 0
    separation_penalty_weight: float = 1.0
    initial_temp: float = 0.1
    final_temp: float = 1e-5
    initial_step: float = 0.25
    min_step: float = 0.005
    # Pearson over interacting pairs only instead of all pairs
    interacting_pairs_only: bool = False

    def __post_init__(self):
        if self.maxiter < 1:
            raise DegenerateInput("maxiter must be >= 1")


@dataclass
class Placement:
    coords: np.ndarray
    seed: int = 0
    objective_value: float = 0.0

    @property
    def num_qubits(self) -> int:
        return len(self.coords)


@dataclass
class RadiusSelection:
    r_b: float
    rule: str  # "connected_diameter" | "mst_fallback"
    scale_s: float


def _pairwise(coords: np.ndarray) -> np.ndarray:
    diff = coords[:, None, :] - coords[None, :, :]
    return np.sqrt((diff**2).sum(-1))


def _weight_matrix(g: InteractionGraph, n: int) -> np.ndarray:
    w = np.zeros((n, n))
    for (i, j), c in g.weights.items():
        w[i, j] = w[j, i] = c
    return w


def _pearson(w: np.ndarray, d: np.ndarray) -> float:
    if len(w) < 2:
        return 0.0
    wc = w - w.mean()
    dc = d - d.mean()
    sw = float(wc @ wc)
    sd = float(dc @ dc)
    if sw <= 0.0 or sd <= 1e-20 * max(1.0, float(d @ d)):
        return 0.0
    return float(np.clip((wc @ dc) / math.sqrt(sw * sd), -1.0, 1.0))


def placement_objective(g: InteractionGraph, coords, interacting_pairs_only: bool = False) -> float:
    """Pearson correlation between CZ counts and pair distances; lower is better.

    All unordered pairs enter the two vectors, zero-weight pairs included.
    Returns 0 when either vector has no variance.
    """
    coords = np.asarray(coords, dtype=float).reshape(-1, 2)
    n = len(coords)
    if n < 2:
        raise DegenerateInput("placement objective needs at least two qubits")
    iu = np.triu_indices(n, 1)
    w = _weight_matrix(g, n)[iu]
    d = _pairwise(coords)[iu]
    if interacting_pairs_only:
        mask = w > 0
        w, d = w[mask], d[mask]
    return _pearson(w, d)


def mst_max_edge(coords) -> float:
    """Largest edge of the Euclidean minimum spanning tree (dense Prim)."""
    coords = np.asarray(coords, dtype=float).reshape(-1, 2)
    if len(coords) < 2:
        return 0.0
    return _mst_max(_pairwise(coords))


def _mst_max(dist: np.ndarray) -> float:
    n = len(dist)
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best = dist[0].copy()
    best[0] = np.inf
    longest = 0.0
    for _ in range(n - 1):
        k = int(best.argmin())
        longest = max(longest, float(best[k]))
        in_tree[k] = True
        np.minimum(best, dist[k], out=best)
        best[in_tree] = np.inf
    return longest


class _Energy:
    def __init__(self, g: InteractionGraph, n: int, opts: AnnealOptions):
        self.iu = np.triu_indices(n, 1)
        w = _weight_matrix(g, n)[self.iu]
        self.mask = w > 0 if opts.interacting_pairs_only else None
        if self.mask is not None:
            w = w[self.mask]
        self.wc = w - w.mean() if len(w) else w
        self.sw = float(self.wc @ self.wc)
        self.penalty_weight = opts.separation_penalty_weight

    def correlation(self, d: np.ndarray) -> float:
        if self.mask is not None:
            d = d[self.mask]
        if len(d) < 2 or self.sw <= 0.0:
            return 0.0
        dc = d - d.mean()
        sd = float(dc @ dc)
        if sd <= 1e-20 * max(1.0, float(d @ d)):
            return 0.0
        return min(1.0, max(-1.0, float(self.wc @ dc) / math.sqrt(self.sw * sd)))

    def __call__(self, coords: np.ndarray) -> float:
        full = _pairwise(coords)
        d = full[self.iu]
        corr = self.correlation(d)
        if self.penalty_weight == 0.0:
            return corr
        floor = _mst_max(full) / 3.0
        if floor <= 0.0:
            return corr + self.penalty_weight * len(d)
        short = np.maximum(0.0, floor - d) / floor
        return corr + self.penalty_weight * float(short @ short)


def optimize_placement(
    g: InteractionGraph, opts: AnnealOptions | None = None, deadline: Deadline | None = None
) -> Placement:
    """Seeded simulated annealing over the ``2 |V|``-dimensional unit box.

    One Gaussian move of a single qubit per temperature step, geometric
    cooling over ``maxiter`` steps.  The best visited state is returned, so the
    recorded energy never exceeds that of the seeded initial candidate.
    """
    opts = opts or AnnealOptions()
    n = g.num_qubits
    if n < 1:
        raise DegenerateInput("cannot place an empty qubit set")
    if n == 1:
        return Placement(np.array([[0.5, 0.5]]), opts.seed, 0.0)

    rng = np.random.default_rng(opts.seed)
    energy = _Energy(g, n, opts)
    x = rng.random((n, 2))
    e = energy(x)
    best_x, best_e = x.copy(), e
    temp = opts.initial_temp
    cooling = (opts.final_temp / opts.initial_temp) ** (1.0 / opts.maxiter)
    for step in range(opts.maxiter):
        if step % 512 == 0:
            check(deadline, "placement")
        i = int(rng.integers(n))
        sigma = max(opts.min_step, opts.initial_step * math.sqrt(temp / opts.initial_temp))
        cand = x.copy()
        cand[i] = (x[i] + rng.normal(0.0, sigma, 2)).clip(0.0, 1.0)
        ec = energy(cand)
        u = rng.random()
        if ec <= e or u < math.exp(-(ec - e) / temp):
            x, e = cand, ec
            if e < best_e:
                best_x, best_e = x.copy(), e
        temp *= cooling
    return Placement(best_x, opts.seed, float(best_e))


def candidate_radii(coords) -> list[float]:
    coords = np.asarray(coords, dtype=float).reshape(-1, 2)
    d = np.sort(_pairwise(coords)[np.triu_indices(len(coords), 1)])
    out: list[float] = []
    for v in d:
        if not out or v - out[-1] > CANDIDATE_TOL:
            out.append(float(v))
    return out


def within_hops(dist: np.ndarray, r: float, hops: int) -> bool:
    """True iff every pair is joined by a path of at most ``hops`` edges in G_r."""
    adj = dist <= r + CANDIDATE_TOL
    reach = adj.copy()
    np.fill_diagonal(reach, True)
    a = adj.astype(np.int64)
    for _ in range(hops - 1):
        if reach.all():
            return True
        reach = reach | ((reach.astype(np.int64) @ a) > 0)
    return bool(reach.all())


def select_radius(
    p: Placement | np.ndarray,
    g: InteractionGraph | None = None,
    r_b_phys: float = 6.0,
    deadline: Deadline | None = None,
) -> RadiusSelection:
    """Smallest candidate radius whose contact graph is connected with hop-diameter <= sqrt(|V|).

    Candidates are the distinct pairwise distances in ascending order.
    Radii below the MST bottleneck cannot give a connected graph and are
    skipped without changing the result.
    """
    coords = p.coords if isinstance(p, Placement) else np.asarray(p, dtype=float).reshape(-1, 2)
    n = len(coords)
    if n < 2:
        raise DegenerateInput("radius selection needs at least two qubits")
    dist = _pairwise(coords)
    # a walk of k hops covers hop-diameter <= sqrt(n) iff k = floor(sqrt(n))
    hops = math.isqrt(n)
    bottleneck = mst_max_edge(coords)
    for r in candidate_radii(coords):
        if r < bottleneck - CANDIDATE_TOL:
            continue
        check(deadline, "radius")
        if within_hops(dist, r, hops):
            return RadiusSelection(r, "connected_diameter", scale_factor(r, r_b_phys))
    r = bottleneck
    return RadiusSelection(r, "mst_fallback", scale_factor(r, r_b_phys))


def scale_factor(r_b: float, r_b_phys: float) -> float:
    """μm per normalized unit."""
    if r_b <= 0:
        raise DegenerateInput("normalized blockade radius must be positive")
    return r_b_phys / r_b


def validate_min_separation(points, d_min: float) -> list[tuple[int, int]]:
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) < 2:
        return []
    dist = _pairwise(pts)
    i, j = np.nonzero(np.triu(dist < d_min - 1e-12, 1))
    return [(int(a), int(b)) for a, b in zip(i, j)]


def repair_separation(
    p: Placement, d_min: float, max_iter: int = 1000, deadline: Deadline | None = None
) -> Placement:
    """Push apart the closest violating pair until no pair is closer than ``d_min``.

    Displacements are equal and opposite along the pair axis; when the box
    boundary clips one side, the other side takes up the remainder.
    """
    x = np.array(p.coords, dtype=float)
    n = len(x)
    target = d_min * (1 + 1e-9)
    for _ in range(max_iter):
        check(deadline, "placement")
        if not validate_min_separation(x, d_min):
            return Placement(x, p.seed, p.objective_value)
        dist = _pairwise(x)
        np.fill_diagonal(dist, np.inf)
        i, j = np.unravel_index(int(np.argmin(dist)), dist.shape)
        i, j = min(i, j), max(i, j)
        d = dist[i, j]
        if d > 1e-15:
            u = (x[j] - x[i]) / d
        else:
            ang = 2.399963229728653 * (i * n + j)
            u = np.array([math.cos(ang), math.sin(ang)])
        push = (target - d) / 2
        xi = np.clip(x[i] - u * push, 0.0, 1.0)
        xj = np.clip(x[j] + u * push, 0.0, 1.0)
        if np.linalg.norm(xj - xi) < target:
            # one side hit the wall: move the freer point the rest of the way
            if np.allclose(xi, x[i] - u * push):
                xi = np.clip(xj - u * target, 0.0, 1.0)
            else:
                xj = np.clip(xi + u * target, 0.0, 1.0)
        x[i], x[j] = xi, xj
    if validate_min_separation(x, d_min):
        raise PlacementInfeasible(f"separation repair did not converge for d_min={d_min:g}")
    return Placement(x, p.seed, p.objective_value)
