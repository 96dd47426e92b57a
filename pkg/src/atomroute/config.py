from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace

# method-matrix rows: (hubs, eviction, endpoint ring)
METHODS: dict[str, tuple[bool, bool, bool]] = {
    "proposed-ring": (True, True, True),
    "proposed": (True, True, False),
    "no-eviction": (True, False, False),
    "no-hub": (False, False, False),
}


@dataclass(frozen=True)
class CompileConfig:
    hubs_enabled: bool = True
    eviction_enabled: bool = True
    ring_enabled: bool = True
    n_hub: int = 8
    budget_seconds: float | None = 900.0
    eviction_depth_cap: int = 8
    # CZ-CZ parallelism radius as a multiple of r_b
    blockade_factor: float = 1.0
    cell_size: float | None = None
    long_range_factor: float = 1.1
    ring_radius_factor: float = 0.9
    ring_directions: int = 8
    method: str = "proposed-ring"

    @classmethod
    def for_method(cls, method: str, **overrides) -> "CompileConfig":
        if method not in METHODS:
            raise ValueError(f"unknown method '{method}'; choose from {sorted(METHODS)}")
        hubs, evict, ring = METHODS[method]
        base = cls(
            hubs_enabled=hubs,
            eviction_enabled=evict,
            ring_enabled=ring,
            n_hub=8 if hubs else 0,
            method=method,
        )
        return replace(base, **overrides)

    @property
    def effective_n_hub(self) -> int:
        return self.n_hub if self.hubs_enabled else 0

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "CompileConfig":
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in names})
