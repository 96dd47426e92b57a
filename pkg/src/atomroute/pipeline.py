"""End-to-end compilation: placement, radius, hubs, transpile, metrics."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .budget import Deadline
from .config import CompileConfig
from .errors import BudgetExceeded, NoValidTransport
from .frontend import Circuit, interaction_graph
from .hubs import HubConfig, HubSet, place_hubs
from .metrics import MetricsReport, OperatingPoint, compute_metrics
from .motion import precompute_distances
from .placement import (
    AnnealOptions,
    Placement,
    RadiusSelection,
    optimize_placement,
    repair_separation,
    scale_factor,
    select_radius,
)
from .schedule import Layout, Schedule
from .transpiler import transpile

log = logging.getLogger(__name__)

OK = "Ok"
NO_VALID_TRANSPORT = "NoValidTransport"
BUDGET_EXCEEDED = "BudgetExceeded"


@dataclass
class CompileResult:
    circuit: Circuit
    config: CompileConfig
    op: OperatingPoint
    anneal: AnnealOptions
    outcome: str = OK
    detail: dict = field(default_factory=dict)
    placement: Placement | None = None
    radius: RadiusSelection | None = None
    hubs: HubSet | None = None
    layout: Layout | None = None
    schedule: Schedule | None = None
    metrics: MetricsReport | None = None
    compile_seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.outcome == OK


def build_layout(
    circuit: Circuit,
    cfg: CompileConfig,
    op: OperatingPoint,
    anneal: AnnealOptions,
    deadline: Deadline | None = None,
) -> tuple[Placement, RadiusSelection, HubSet, Layout]:
    """Step 1 and hub placement.

    The radius is chosen on the annealed coordinates; separation repair then
    runs at ``d_min = d_min_phys / s`` and the radius is kept as chosen.
    """
    g = interaction_graph(circuit)
    placement = optimize_placement(g, anneal, deadline)
    if circuit.num_qubits >= 2:
        radius = select_radius(placement, g, op.r_b_phys, deadline)
    else:
        radius = RadiusSelection(1.0, "single_qubit", scale_factor(1.0, op.r_b_phys))
    d_min = op.d_min_phys / radius.scale_s
    placement = repair_separation(placement, d_min, deadline=deadline)
    hubs = place_hubs(
        g,
        placement,
        radius.r_b,
        HubConfig(
            n_hub=cfg.effective_n_hub,
            ring_enabled=cfg.ring_enabled,
            long_range_factor=cfg.long_range_factor,
            ring_radius_factor=cfg.ring_radius_factor,
            ring_directions=cfg.ring_directions,
        ),
        deadline,
    )
    layout = Layout(
        home=[tuple(float(v) for v in p) for p in np.asarray(placement.coords)],
        hubs=[tuple(float(v) for v in p) for p in hubs.positions],
        r_b=radius.r_b,
        scale_s=radius.scale_s,
        d_min=d_min,
    )
    return placement, radius, hubs, layout


def compile_circuit(
    circuit: Circuit,
    cfg: CompileConfig | None = None,
    op: OperatingPoint | None = None,
    anneal: AnnealOptions | None = None,
    clock=time.monotonic,
) -> CompileResult:
    """Run the full flow under one wall-clock budget.

    Routing failures and budget overruns are reported through ``outcome``
    rather than raised, and such results carry no schedule.
    """
    cfg = cfg or CompileConfig()
    op = op or OperatingPoint()
    anneal = anneal or AnnealOptions()
    circuit.validate()
    deadline = Deadline(cfg.budget_seconds, clock)
    res = CompileResult(circuit=circuit, config=cfg, op=op, anneal=anneal)
    try:
        res.placement, res.radius, res.hubs, res.layout = build_layout(circuit, cfg, op, anneal, deadline)
        layout = res.layout
        cache = None
        if cfg.hubs_enabled:
            cache = precompute_distances(layout.positions, layout.d_min, cfg.cell_size, deadline)
        schedule = transpile(circuit, layout, cfg, op, cache, deadline)
        res.metrics = compute_metrics(schedule, op, layout.positions)
        res.schedule = schedule
    except NoValidTransport as exc:
        res.outcome = NO_VALID_TRANSPORT
        res.detail = {"message": str(exc), **exc.to_dict()}
    except BudgetExceeded as exc:
        res.outcome = BUDGET_EXCEEDED
        res.detail = {"message": str(exc), "budget_seconds": exc.budget_seconds, "stage": exc.stage}
    res.compile_seconds = deadline.elapsed
    log.info("compiled %s [%s]: %s in %.2f s", circuit.name, cfg.method, res.outcome, res.compile_seconds)
    return res
