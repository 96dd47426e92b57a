"""Replay checker for compiled schedules.

The checker rebuilds occupancy from the initial layout and walks the layers
in order, independently of how the schedule was produced.  Logical order is
checked against the circuit per qubit after following every SWAP macro, so
gate provenance tags are cross-checked rather than trusted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .frontend import Circuit
from .metrics import OperatingPoint
from .motion import shuttle_duration
from .schedule import RYDBERG_KINDS, Layout, Occupancy, Schedule

TOL = 1e-12


@dataclass(frozen=True)
class Violation:
    kind: str
    layer: int | None
    detail: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first(self) -> Violation | None:
        return self.violations[0] if self.violations else None

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def __str__(self) -> str:
        if self.ok:
            return "OK"
        v = self.first
        return f"{v.kind} at layer {v.layer}: {v.detail} ({len(self.violations)} violation(s))"


def validate_schedule(
    schedule: Schedule,
    circuit: Circuit,
    layout: Layout,
    op: OperatingPoint | None = None,
    blockade_factor: float | None = None,
) -> ValidationReport:
    report = ValidationReport()

    def bad(kind: str, layer: int | None, detail: str) -> None:
        report.violations.append(Violation(kind, layer, detail))

    n = circuit.num_qubits
    if schedule.num_qubits != n or layout.num_qubits != n:
        bad("LogicalMismatch", None, "qubit count differs between circuit, layout and schedule")
        return report
    if blockade_factor is None:
        blockade_factor = schedule.config.get("blockade_factor", 1.0)
    pos = layout.positions
    r_b = layout.r_b
    r_block = r_b * blockade_factor
    n_traps = len(pos)
    occ = Occupancy(pos, n)

    per_qubit: list[list[int]] = [[] for _ in range(n)]
    for gi, g in enumerate(circuit.gates):
        for q in g.qubits:
            per_qubit[q].append(gi)
    ptr = [0] * n

    def dist(u: int, v: int) -> float:
        return float(np.hypot(*(pos[u] - pos[v])))

    def expect(qs: tuple[int, ...]) -> int | None:
        nxt = {per_qubit[q][ptr[q]] if ptr[q] < len(per_qubit[q]) else None for q in qs}
        return nxt.pop() if len(nxt) == 1 else None

    for li, layer in enumerate(schedule.layers):
        used: set[int] = set()
        for o in layer:
            for a in o.atoms:
                if not 0 <= a < n:
                    bad("UnknownAtom", li, f"atom {a} does not exist")
                elif a in used:
                    bad("AtomConflict", li, f"atom {a} used twice")
                used.add(a)
        if any(not 0 <= a < n for o in layer for a in o.atoms):
            continue

        advanced: list[tuple[int, ...]] = []
        for o in layer:
            if o.kind == "oneq":
                q = occ.atom_logical[o.atom]
                gi = expect((q,))
                if gi is None or circuit.gates[gi].is_cz or (o.gate is not None and o.gate != gi):
                    bad("LogicalMismatch", li, f"1Q '{o.name}' on qubit {q} is out of program order")
                else:
                    advanced.append((q,))
            elif o.kind == "cz":
                ta, tb = occ.trap_of(o.a), occ.trap_of(o.b)
                if (ta, tb) != (o.trap_a, o.trap_b):
                    bad("TrapMismatch", li, f"CZ atoms sit in traps {(ta, tb)}, op says {(o.trap_a, o.trap_b)}")
                if dist(ta, tb) > r_b + TOL:
                    bad("CzOutOfRange", li, f"CZ({o.a},{o.b}) at distance {dist(ta, tb):.6g} > r_b={r_b:.6g}")
                qs = (occ.atom_logical[o.a], occ.atom_logical[o.b])
                gi = expect(qs)
                if (
                    gi is None
                    or not circuit.gates[gi].is_cz
                    or set(circuit.gates[gi].qubits) != set(qs)
                    or (o.gate is not None and o.gate != gi)
                ):
                    bad("LogicalMismatch", li, f"CZ on qubits {qs} is out of program order")
                else:
                    advanced.append(qs)
            elif o.kind == "swap":
                if occ.atom_at(o.trap_u) != o.atom_u or occ.atom_at(o.trap_v) != o.atom_v:
                    bad("TrapMismatch", li, f"SWAP traps {(o.trap_u, o.trap_v)} do not hold atoms {(o.atom_u, o.atom_v)}")
                elif dist(o.trap_u, o.trap_v) > r_b + TOL:
                    bad("CzOutOfRange", li, f"SWAP between traps {(o.trap_u, o.trap_v)} beyond r_b")
            elif o.kind == "shuttle":
                if not (0 <= o.dst < n_traps and 0 <= o.src < n_traps):
                    bad("UnknownTrap", li, f"shuttle {o.src}->{o.dst} references a missing trap")
                elif occ.trap_of(o.atom) != o.src:
                    bad("ShuttleSource", li, f"atom {o.atom} is not in trap {o.src}")
                elif occ.atom_at(o.dst) is not None:
                    bad("OccupancyClash", li, f"shuttle into trap {o.dst} already holding atom {occ.atom_at(o.dst)}")
            if op is not None:
                want = _expected_duration(o, op, layout.scale_s)
                if want is not None and not math.isclose(o.duration, want, rel_tol=1e-9, abs_tol=1e-9):
                    bad("DurationMismatch", li, f"{o.kind} lasts {o.duration}, model gives {want}")

        ryd = [o for o in layer if o.kind in RYDBERG_KINDS]
        for i in range(len(ryd)):
            for j in range(i + 1, len(ryd)):
                cross = min(dist(u, v) for u in ryd[i].traps for v in ryd[j].traps)
                if cross < r_block - TOL:
                    bad("LayerBlockade", li, f"ops on traps {ryd[i].traps} and {ryd[j].traps} are {cross:.6g} apart")

        for qs in advanced:
            for q in qs:
                ptr[q] += 1
        targets = [o.dst for o in layer if o.kind == "shuttle"]
        if len(targets) != len(set(targets)):
            bad("OccupancyClash", li, "two shuttles end in the same trap")
        for o in layer:
            if o.kind == "swap" and occ.atom_at(o.trap_u) == o.atom_u and occ.atom_at(o.trap_v) == o.atom_v:
                occ.swap_states(o.trap_u, o.trap_v)
            elif o.kind == "shuttle" and 0 <= o.dst < n_traps and occ.trap_of(o.atom) == o.src:
                if occ.atom_at(o.dst) is None:
                    occ.move(o.atom, o.dst)
        if not occ.is_consistent():
            bad("OccupancyClash", li, "atom/trap map is no longer a bijection")

    missing = [q for q in range(n) if ptr[q] != len(per_qubit[q])]
    if missing:
        bad("LogicalMismatch", None, f"qubits {missing} did not execute all of their gates")
    if list(occ.atom_trap) != list(schedule.final_atom_trap) or list(occ.logical_atom) != list(
        schedule.final_logical_atom
    ):
        bad("FinalStateMismatch", None, "replayed final occupancy differs from the recorded one")
    return report


def _expected_duration(o, op: OperatingPoint, scale_s: float) -> float | None:
    if o.kind == "oneq":
        return op.t_1q
    if o.kind == "cz":
        return op.t_cz
    if o.kind == "swap":
        return op.t_swap
    if o.kind == "shuttle":
        return shuttle_duration(o.path_length, scale_s, op.t_act, op.v_sh)
    return None
