"""Self-contained JSON record of one compilation."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import CompileConfig
from .frontend import Circuit, Gate
from .hubs import HubSet
from .metrics import MetricsReport, OperatingPoint, compute_metrics
from .pipeline import OK, CompileResult
from .placement import AnnealOptions
from .schedule import Layout, Schedule

SCHEMA_VERSION = 1


class ArtifactError(ValueError):
    pass


@dataclass
class Artifact:
    circuit: Circuit
    outcome: str
    detail: dict
    config: CompileConfig
    op: OperatingPoint
    anneal: dict
    compile_seconds: float
    placement: dict | None = None
    radius: dict | None = None
    hubs: HubSet | None = None
    layout: Layout | None = None
    schedule: Schedule | None = None
    metrics: MetricsReport | None = None

    @property
    def ok(self) -> bool:
        return self.outcome == OK

    def require_schedule(self) -> Schedule:
        if self.schedule is None or self.layout is None:
            raise ArtifactError(f"artifact has no schedule (outcome {self.outcome})")
        return self.schedule

    def recompute_metrics(self, op: OperatingPoint | None = None) -> MetricsReport:
        return compute_metrics(self.require_schedule(), op or self.op, self.layout.positions)

    @classmethod
    def from_result(cls, res: CompileResult) -> "Artifact":
        placement = None
        if res.placement is not None:
            placement = {
                "coords": np.asarray(res.placement.coords).tolist(),
                "seed": res.placement.seed,
                "objective_value": res.placement.objective_value,
            }
        radius = None
        if res.radius is not None:
            radius = {"r_b": res.radius.r_b, "rule": res.radius.rule, "scale_s": res.radius.scale_s}
        ok = res.ok
        return cls(
            circuit=res.circuit,
            outcome=res.outcome,
            detail=dict(res.detail),
            config=res.config,
            op=res.op,
            anneal=vars(res.anneal).copy(),
            compile_seconds=res.compile_seconds,
            placement=placement,
            radius=radius,
            hubs=res.hubs,
            layout=res.layout,
            schedule=res.schedule if ok else None,
            metrics=res.metrics if ok else None,
        )

    def to_dict(self) -> dict:
        c = self.circuit
        return {
            "schema_version": SCHEMA_VERSION,
            "circuit": {
                "name": c.name,
                "num_qubits": c.num_qubits,
                "gates": [[g.name, list(g.qubits), g.params] for g in c.gates],
            },
            "outcome": self.outcome,
            "detail": self.detail,
            "config": self.config.to_dict(),
            "operating_point": self.op.to_dict(),
            "anneal": self.anneal,
            "compile_seconds": self.compile_seconds,
            "placement": self.placement,
            "radius": self.radius,
            "r_b": self.layout.r_b if self.layout else None,
            "scale_s": self.layout.scale_s if self.layout else None,
            "hubs": self.hubs.to_dict() if self.hubs is not None else None,
            "layout": self.layout.to_dict() if self.layout else None,
            "schedule": self.schedule.to_dict() if self.schedule else None,
            "metrics": self.metrics.to_dict() if self.metrics else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Artifact":
        version = d.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ArtifactError(f"unsupported artifact schema version {version!r}")
        cd = d["circuit"]
        circuit = Circuit(
            cd["num_qubits"],
            [Gate(name, tuple(qs), params) for name, qs, params in cd["gates"]],
            cd["name"],
        )
        return cls(
            circuit=circuit,
            outcome=d["outcome"],
            detail=d.get("detail", {}),
            config=CompileConfig.from_dict(d["config"]),
            op=OperatingPoint.from_dict(d["operating_point"]),
            anneal=d.get("anneal", {}),
            compile_seconds=d["compile_seconds"],
            placement=d.get("placement"),
            radius=d.get("radius"),
            hubs=HubSet.from_dict(d["hubs"]) if d.get("hubs") is not None else None,
            layout=Layout.from_dict(d["layout"]) if d.get("layout") else None,
            schedule=Schedule.from_dict(d["schedule"]) if d.get("schedule") else None,
            metrics=MetricsReport.from_dict(d["metrics"]) if d.get("metrics") else None,
        )

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, allow_nan=False)

    def write(self, path) -> None:
        Path(path).write_text(self.dumps() + "\n")

    @classmethod
    def loads(cls, text: str) -> "Artifact":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ArtifactError(f"artifact is not valid JSON: {exc}") from None
        return cls.from_dict(d)

    @classmethod
    def read(cls, path) -> "Artifact":
        return cls.loads(Path(path).read_text())


def anneal_from_dict(d: dict) -> AnnealOptions:
    names = AnnealOptions.__dataclass_fields__
    return AnnealOptions(**{k: v for k, v in d.items() if k in names})
