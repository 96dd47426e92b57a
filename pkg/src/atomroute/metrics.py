"""Analytic execution-time and fidelity estimates for a layered schedule.

Fidelity is accumulated as a natural log throughout; the linear value is only
derived for display and may underflow to 0.0 on very deep schedules.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateInput
from .schedule import Schedule, ShuttleOp


@dataclass(frozen=True)
class OperatingPoint:
    """Fixed device operating point.  Times in μs, distances in μm."""

    r_b_phys: float = 6.0
    d_min_phys: float = 2.0
    t_1q: float = 2.0
    t_cz: float = 0.8
    t_act: float = 100.0
    v_sh: float = 0.55
    f_1q: float = 0.999
    f_cz: float = 0.995
    f_sh: float = 1.0
    t1: float = 1e8
    t2: float = 1.5e6
    alpha_g: float = 1.0
    alpha_s: float = 1.0

    cz_per_swap: int = 3
    oneq_per_swap: int = 4

    def __post_init__(self):
        for name in ("r_b_phys", "d_min_phys", "t_1q", "t_cz", "t_act", "v_sh", "t1", "t2"):
            if not getattr(self, name) > 0:
                raise DegenerateInput(f"{name} must be positive")
        for name in ("f_1q", "f_cz", "f_sh"):
            if not 0 < getattr(self, name) <= 1:
                raise DegenerateInput(f"{name} must lie in (0, 1]")
        if self.alpha_g <= 0 or self.alpha_s <= 0:
            raise DegenerateInput("score scaling factors must be positive")

    @property
    def t_eff(self) -> float:
        return t_eff(self.t1, self.t2)

    @property
    def t_swap(self) -> float:
        return self.cz_per_swap * self.t_cz + self.oneq_per_swap * self.t_1q

    @property
    def log_f_swap(self) -> float:
        return self.cz_per_swap * math.log(self.f_cz) + self.oneq_per_swap * math.log(self.f_1q)

    def with_(self, **changes) -> "OperatingPoint":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "OperatingPoint":
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ValueError(f"unknown operating-point fields: {sorted(unknown)}")
        return cls(**d)


def t_eff(t1: float, t2: float) -> float:
    if t1 <= 0 or t2 <= 0:
        raise DegenerateInput("T1 and T2 must be positive")
    return (t1 * t2) / (t1 + t2)


def execution_time(schedule: Schedule, op: OperatingPoint | None = None) -> float:
    """Sum over layers of the longest operation in the layer (M0 model)."""
    return math.fsum(max((o.duration for o in layer), default=0.0) for layer in schedule.layers)


def _log_fidelity_parts(schedule: Schedule, op: OperatingPoint) -> tuple[float, int]:
    teff = op.t_eff
    ln1, ln2 = math.log(op.f_1q), math.log(op.f_cz)
    terms = []
    n_shuttle = 0
    for layer in schedule.layers:
        if not layer:
            continue
        terms.append(-max(o.duration for o in layer) / teff)
        for o in layer:
            if o.kind == "oneq":
                terms.append(ln1)
            elif o.kind == "cz":
                terms.append(ln2)
            elif o.kind == "swap":
                terms.append(op.cz_per_swap * ln2 + op.oneq_per_swap * ln1)
            else:
                n_shuttle += 1
    return math.fsum(terms), n_shuttle


def log_fidelity(schedule: Schedule, op: OperatingPoint) -> float:
    """Natural log of the per-layer multiplicative fidelity proxy.

    The shuttle contribution ``n_shuttle * ln(F_sh)`` is added last so that
    sweeping ``F_sh`` changes the result by exactly that term.
    """
    base, n_shuttle = _log_fidelity_parts(schedule, op)
    return base + n_shuttle * math.log(op.f_sh)


def sweep_fsh(schedule: Schedule, op: OperatingPoint, values: Iterable[float]) -> list[tuple[float, float]]:
    base, n_shuttle = _log_fidelity_parts(schedule, op)
    out = []
    for v in values:
        if not 0 < v <= 1:
            raise DegenerateInput(f"F_sh={v} outside (0, 1]")
        out.append((v, base + n_shuttle * math.log(v)))
    return out


# --- M2 parallel shuttle model ---------------------------------------------


def _orient(p, q, r) -> float:
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def _on_segment(p, q, r, eps: float) -> bool:
    return (
        min(p[0], q[0]) - eps <= r[0] <= max(p[0], q[0]) + eps
        and min(p[1], q[1]) - eps <= r[1] <= max(p[1], q[1]) + eps
    )


def segments_intersect(p1, p2, q1, q2, eps: float = 1e-12) -> bool:
    """Closed segment intersection; touching endpoints and collinear overlap count."""
    d1 = _orient(q1, q2, p1)
    d2 = _orient(q1, q2, p2)
    d3 = _orient(p1, p2, q1)
    d4 = _orient(p1, p2, q2)
    if ((d1 > eps and d2 < -eps) or (d1 < -eps and d2 > eps)) and (
        (d3 > eps and d4 < -eps) or (d3 < -eps and d4 > eps)
    ):
        return True
    if abs(d1) <= eps and _on_segment(q1, q2, p1, eps):
        return True
    if abs(d2) <= eps and _on_segment(q1, q2, p2, eps):
        return True
    if abs(d3) <= eps and _on_segment(p1, p2, q1, eps):
        return True
    if abs(d4) <= eps and _on_segment(p1, p2, q2, eps):
        return True
    return False


@dataclass
class M2Result:
    exec_time_us: float
    batches: list[list[tuple[int, int]]]  # (layer, index-in-layer) per member

    @property
    def n_batches(self) -> int:
        return len(self.batches)


def batch_shuttles_m2(schedule: Schedule, positions: Sequence) -> M2Result:
    """Greedy first-fit batching of shuttles into single AOD transfers.

    A shuttle joins an open batch when its segment meets none of the
    members' segments, its atom is not already in the batch, and across the
    widened layer window no other operation touches any batch atom and no
    other shuttle uses a member's source or destination trap.  Each batch is
    charged once, in the layer of its longest member; the schedule itself is
    left untouched.
    """
    pos = np.asarray(positions, dtype=float)
    shuttles: list[tuple[int, int, ShuttleOp]] = []
    touches: dict[int, list[tuple[int, int]]] = {}
    for li, layer in enumerate(schedule.layers):
        for k, o in enumerate(layer):
            for a in o.atoms:
                touches.setdefault(a, []).append((li, k))
            if o.kind == "shuttle":
                shuttles.append((li, k, o))

    batches: list[list[tuple[int, int, ShuttleOp]]] = []
    for li, k, s in shuttles:
        seg = (pos[s.src], pos[s.dst])
        for batch in batches:
            atoms = {m.atom for _, _, m in batch}
            if s.atom in atoms:
                continue
            if any(segments_intersect(*seg, pos[m.src], pos[m.dst]) for _, _, m in batch):
                continue
            start = batch[0][0]
            members = {(l, i) for l, i, _ in batch} | {(li, k)}
            if not _window_clear(atoms | {s.atom}, members, start, li, touches):
                continue
            traps = {t for _, _, m in batch for t in (m.src, m.dst)} | {s.src, s.dst}
            if any(
                (l2, k2) not in members and (m2.src in traps or m2.dst in traps)
                for l2, k2, m2 in shuttles
                if start <= l2 <= li
            ):
                continue
            batch.append((li, k, s))
            break
        else:
            batches.append([(li, k, s)])

    skipped: set[tuple[int, int]] = set()
    for batch in batches:
        rep = max(batch, key=lambda e: (e[2].duration, -e[0], -e[1]))
        skipped.update((l, i) for l, i, _ in batch if (l, i) != (rep[0], rep[1]))
    total = math.fsum(
        max((o.duration for k, o in enumerate(layer) if (li, k) not in skipped), default=0.0)
        for li, layer in enumerate(schedule.layers)
    )
    return M2Result(total, [[(l, i) for l, i, _ in b] for b in batches])


def _window_clear(atoms, members, start, end, touches) -> bool:
    for a in atoms:
        for l, i in touches.get(a, ()):
            if start <= l <= end and (l, i) not in members:
                return False
    return True


# --- report ------------------------------------------------------------------


@dataclass
class MetricsReport:
    exec_time_us: float
    log_fidelity: float
    counts: dict[str, int]
    m2_exec_time_us: float | None = None
    m2_batches: int | None = None

    @property
    def fidelity(self) -> float:
        return math.exp(self.log_fidelity)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["fidelity"] = self.fidelity
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "MetricsReport":
        d = {k: v for k, v in d.items() if k != "fidelity"}
        return cls(**d)


def compute_metrics(schedule: Schedule, op: OperatingPoint, positions=None) -> MetricsReport:
    report = MetricsReport(
        exec_time_us=execution_time(schedule, op),
        log_fidelity=log_fidelity(schedule, op),
        counts=schedule.counts,
    )
    if positions is not None:
        m2 = batch_shuttles_m2(schedule, positions)
        report.m2_exec_time_us = m2.exec_time_us
        report.m2_batches = m2.n_batches
    return report
