"""SWAP-vs-shuttle transport decision for a CZ whose atoms are out of range."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .config import CompileConfig
from .errors import NoValidTransport
from .metrics import OperatingPoint
from .motion import DistanceCache, shuttle_duration
from .schedule import RYDBERG_KINDS, Occupancy, Op, ShuttleOp, SwapOp

RADIUS_TOL = 1e-12


def within(d: float, r: float) -> bool:
    """Closed radius test; the tolerance absorbs rounding in recomputed distances."""
    return d <= r + RADIUS_TOL


@dataclass
class TransportPlan:
    steps: list
    kind: str  # "swap" | "shuttle" | "evict"
    total_duration: float
    neg_log_fidelity: float
    score: float
    moving: int | None = None
    target: int | None = None
    swap_available: bool = False
    n_direct_shuttle: int = 0
    n_eviction: int = 0

    @property
    def signature(self) -> tuple:
        out = []
        for s in self.steps:
            if isinstance(s, ShuttleOp):
                out.append(("shuttle", s.atom, s.src, s.dst))
            else:
                out.append(("swap", s.trap_u, s.trap_v))
        return tuple(out)


def step_log_fidelity(step, op: OperatingPoint) -> float:
    if isinstance(step, SwapOp):
        return op.log_f_swap
    return math.log(op.f_sh)


def plan_score(plan, op: OperatingPoint, alpha: float = 1.0) -> float:
    """``(t / T_eff - sum ln f_k) / alpha`` over the serialized plan steps."""
    steps = plan.steps if isinstance(plan, TransportPlan) else list(plan)
    if not steps:
        return 0.0
    t = math.fsum(s.duration for s in steps)
    neg_log = -math.fsum(step_log_fidelity(s, op) for s in steps)
    return (t / op.t_eff + neg_log) / alpha


def _make_plan(steps, kind, op: OperatingPoint, moving=None, target=None) -> TransportPlan:
    alpha = op.alpha_g if kind == "swap" else op.alpha_s
    return TransportPlan(
        steps=list(steps),
        kind=kind,
        total_duration=math.fsum(s.duration for s in steps),
        neg_log_fidelity=-math.fsum(step_log_fidelity(s, op) for s in steps),
        score=plan_score(steps, op, alpha),
        moving=moving,
        target=target,
    )


def cz_feasible(occ: Occupancy, a: int, b: int, r_b: float) -> bool:
    return within(occ.atom_distance(a, b), r_b)


def layer_admits(layer: list[Op], op: Op, occ: Occupancy, r_b: float) -> bool:
    """CZ-type ops conflict when any cross-pair distance is strictly below ``r_b``.

    SWAP macros are made of CZs and take part in the same check; 1Q gates
    and shuttles never do.
    """
    if op.kind not in RYDBERG_KINDS:
        return True
    pos = occ.positions
    mine = [pos[t] for t in op.traps]
    for other in layer:
        if other.kind not in RYDBERG_KINDS:
            continue
        for t in other.traps:
            for p in mine:
                if float(np.hypot(*(pos[t] - p))) < r_b - RADIUS_TOL:
                    return False
    return True


def _coupling_bfs(occ: Occupancy, r_b: float, root: int) -> dict[int, int]:
    """Hop distances from ``root`` over occupied traps joined within ``r_b``."""
    occupied = [t for t, at in enumerate(occ.trap_atom) if at is not None]
    dist = {root: 0}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in occupied:
            if v not in dist and within(occ.trap_distance(u, v), r_b):
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def swap_plan(a: int, b: int, occ: Occupancy, r_b: float, op: OperatingPoint) -> TransportPlan | None:
    """SWAPs along the lexicographically smallest shortest path from a's trap to b's.

    ``hops - 1`` SWAP macros carry a's logical state next to b.
    """
    src, dst = occ.trap_of(a), occ.trap_of(b)
    dist = _coupling_bfs(occ, r_b, dst)
    if src not in dist:
        return None
    path = [src]
    while path[-1] != dst:
        u = path[-1]
        nxt = min(
            v for v, h in dist.items() if h == dist[u] - 1 and within(occ.trap_distance(u, v), r_b)
        )
        path.append(nxt)
    steps = [
        SwapOp(u, v, occ.atom_at(u), occ.atom_at(v), op.t_swap)
        for u, v in zip(path[:-2], path[1:-1])
    ]
    return _make_plan(steps, "swap", op, moving=a, target=path[-2])


def _shuttle(atom, src, dst, length, scale_s, op: OperatingPoint) -> ShuttleOp:
    return ShuttleOp(atom, src, dst, length, shuttle_duration(length, scale_s, op.t_act, op.v_sh))


def _eviction_chain(c, occ, ready, cache, cap, scale_s, op):
    """Shuttles returning ``c`` (and, recursively, whoever sits in its home) home.

    Returned in execution order: the deepest eviction first.  ``None`` when an
    atom on the chain is busy, already home, unreachable, revisited or the
    chain exceeds ``cap`` shuttles.
    """
    chain = []
    seen = set()
    cur = c
    while True:
        if cur in ready or occ.is_home(cur) or cur in seen:
            return None
        if len(chain) >= cap:
            return None
        seen.add(cur)
        src, home = occ.trap_of(cur), occ.home(cur)
        length = cache.get(src, home)
        if length is None:
            return None
        chain.append(_shuttle(cur, src, home, length, scale_s, op))
        cur = occ.atom_at(home)
        if cur is None:
            return chain[::-1]


def shuttle_plans(
    a: int,
    b: int,
    occ: Occupancy,
    cache: DistanceCache,
    cfg: CompileConfig,
    ready,
    *,
    r_b: float,
    scale_s: float,
    op: OperatingPoint,
) -> list[TransportPlan]:
    """Every single-shuttle and eviction-then-shuttle plan for CZ(a, b).

    Both directions are tried; targets are traps within ``r_b`` of the
    stationary atom, in ascending trap id.
    """
    plans: list[TransportPlan] = []
    n_traps = len(occ.trap_atom)
    busy = set(ready) | {a, b}
    for moving, stationary in ((a, b), (b, a)):
        ts, tm = occ.trap_of(stationary), occ.trap_of(moving)
        for t in range(n_traps):
            if t in (ts, tm) or not within(occ.trap_distance(t, ts), r_b):
                continue
            length = cache.get(tm, t)
            if length is None:
                continue
            main = _shuttle(moving, tm, t, length, scale_s, op)
            occupant = occ.atom_at(t)
            if occupant is None:
                plans.append(_make_plan([main], "shuttle", op, moving, t))
            elif cfg.eviction_enabled:
                chain = _eviction_chain(occupant, occ, busy, cache, cfg.eviction_depth_cap, scale_s, op)
                if chain is not None:
                    plans.append(_make_plan(chain + [main], "evict", op, moving, t))
    return plans


def decide_transport(
    a: int,
    b: int,
    occ: Occupancy,
    cache: DistanceCache | None,
    cfg: CompileConfig,
    ready,
    *,
    r_b: float,
    scale_s: float,
    op: OperatingPoint,
) -> TransportPlan:
    """Lowest-score plan among the SWAP route and all shuttle plans.

    Exact score ties go to shuttling; equal-score shuttle plans are ordered
    by total duration, then target trap id, then enumeration order.

    Raises:
        NoValidTransport: no candidate of any kind exists.
    """
    swap = swap_plan(a, b, occ, r_b, op)
    shuttles = []
    if cfg.hubs_enabled and cache is not None:
        shuttles = shuttle_plans(a, b, occ, cache, cfg, ready, r_b=r_b, scale_s=scale_s, op=op)
    n_direct = sum(p.kind == "shuttle" for p in shuttles)
    n_evict = len(shuttles) - n_direct
    if swap is None and not shuttles:
        raise NoValidTransport(
            (occ.atom_logical[a], occ.atom_logical[b]),
            swap_unavailable=True,
            shuttle_unavailable=True,
            eviction_unavailable=True,
        )
    best = None
    if shuttles:
        order = sorted(range(len(shuttles)), key=lambda i: (shuttles[i].score, shuttles[i].total_duration, shuttles[i].target, i))
        best = shuttles[order[0]]
    if swap is not None and (best is None or swap.score < best.score):
        best = swap
    best.swap_available = swap is not None
    best.n_direct_shuttle = n_direct
    best.n_eviction = n_evict
    return best
