"""Step 2b: layered scheduling with on-demand SWAP / shuttle transport."""

from __future__ import annotations

import logging

from .budget import Deadline, check
from .config import CompileConfig
from .errors import NoValidTransport
from .frontend import Circuit, dependency_dag
from .metrics import OperatingPoint
from .motion import DistanceCache, precompute_distances
from .schedule import (
    CZOp,
    Layout,
    Occupancy,
    OneQOp,
    Schedule,
    ShuttleOp,
    TransportRecord,
    with_plan,
)
from .transport import cz_feasible, decide_transport, layer_admits

log = logging.getLogger(__name__)


class _Layers:
    """Growing layer list with per-atom earliest-free layer."""

    def __init__(self, num_atoms: int):
        self.layers: list[list] = []
        self.free_from = [0] * num_atoms

    def earliest(self, atoms) -> int:
        return max(self.free_from[a] for a in atoms)

    def put(self, index: int, op) -> None:
        while len(self.layers) <= index:
            self.layers.append([])
        self.layers[index].append(op)
        for a in op.atoms:
            self.free_from[a] = max(self.free_from[a], index + 1)

    def append(self, op) -> int:
        self.put(len(self.layers), op)
        return len(self.layers) - 1


def transpile(
    circuit: Circuit,
    layout: Layout,
    cfg: CompileConfig | None = None,
    op: OperatingPoint | None = None,
    cache: DistanceCache | None = None,
    deadline: Deadline | None = None,
) -> Schedule:
    """Greedy ASAP layering in program order.

    1Q gates and in-range CZs go to the earliest layer their atoms allow
    (CZs also skip layers where they would blockade another CZ).  A CZ out of
    range first gets a transport plan; every plan step is appended as a
    layer of its own, and occupancy is updated as it goes.  Atoms stay where
    they were moved until something evicts them.

    Raises:
        NoValidTransport: a blocked CZ has no candidate plan.
        BudgetExceeded: the deadline passed between gate placements.
    """
    cfg = cfg or CompileConfig()
    op = op or OperatingPoint()
    n = circuit.num_qubits
    occ = Occupancy(layout.positions, n)
    r_b = layout.r_b
    r_block = r_b * cfg.blockade_factor
    if cfg.hubs_enabled and cache is None:
        cache = precompute_distances(layout.positions, layout.d_min, cfg.cell_size, deadline)

    gates = circuit.gates
    dag = dependency_dag(circuit)
    succs = dag.succs
    indeg = [len(p) for p in dag.preds]
    ready = {g for g, d in enumerate(indeg) if d == 0}
    sched = _Layers(n)
    transports: list[TransportRecord] = []

    for gi, gate in enumerate(gates):
        check(deadline, "transpile")
        if gate.is_cz:
            qa, qb = gate.qubits
            a, b = occ.logical_atom[qa], occ.logical_atom[qb]
            if not cz_feasible(occ, a, b, r_b):
                ready_atoms = {occ.logical_atom[q] for g in ready for q in gates[g].qubits}
                try:
                    plan = decide_transport(
                        a, b, occ, cache, cfg, ready_atoms,
                        r_b=r_b, scale_s=layout.scale_s, op=op,
                    )
                except NoValidTransport as exc:
                    raise NoValidTransport((qa, qb), *exc.reasons, gate_index=gi) from None
                pid = len(transports)
                transports.append(
                    TransportRecord(
                        plan=pid, gate=gi, pair=(qa, qb), kind=plan.kind, score=plan.score,
                        n_steps=len(plan.steps), swap_available=plan.swap_available,
                        n_direct_shuttle=plan.n_direct_shuttle, n_eviction=plan.n_eviction,
                    )
                )
                for step in plan.steps:
                    sched.append(with_plan(step, pid))
                    if isinstance(step, ShuttleOp):
                        occ.move(step.atom, step.dst)
                    else:
                        occ.swap_states(step.trap_u, step.trap_v)
                a, b = occ.logical_atom[qa], occ.logical_atom[qb]
            czop = CZOp(a, b, occ.trap_of(a), occ.trap_of(b), op.t_cz, gi)
            layer = sched.earliest((a, b))
            while layer < len(sched.layers) and not layer_admits(sched.layers[layer], czop, occ, r_block):
                layer += 1
            sched.put(layer, czop)
        else:
            (q,) = gate.qubits
            atom = occ.logical_atom[q]
            sched.put(sched.earliest((atom,)), OneQOp(atom, gate.name, op.t_1q, gi))

        ready.discard(gi)
        for s in succs[gi]:
            indeg[s] -= 1
            if indeg[s] == 0:
                ready.add(s)

    log.debug("transpiled %s: %d layers, %d transports", circuit.name, len(sched.layers), len(transports))
    return Schedule(
        layers=sched.layers,
        num_qubits=n,
        final_atom_trap=list(occ.atom_trap),
        final_logical_atom=list(occ.logical_atom),
        transports=transports,
        config=cfg.to_dict(),
    )
