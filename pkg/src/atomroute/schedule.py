"""Traps, occupancy and the layered schedule representation."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import ClassVar, Union

import numpy as np


@dataclass(frozen=True)
class Trap:
    id: int
    position: tuple[float, float]
    kind: str  # "home" | "hub"
    owner: int | None = None


@dataclass
class Layout:
    """Home traps (one per logical qubit, trap id == qubit index) followed by hubs."""

    home: list[tuple[float, float]]
    hubs: list[tuple[float, float]]
    r_b: float
    scale_s: float
    d_min: float

    @property
    def num_qubits(self) -> int:
        return len(self.home)

    @property
    def num_traps(self) -> int:
        return len(self.home) + len(self.hubs)

    @property
    def positions(self) -> np.ndarray:
        pts = list(self.home) + list(self.hubs)
        return np.asarray(pts, dtype=float).reshape(len(pts), 2)

    @property
    def traps(self) -> list[Trap]:
        out = [Trap(i, tuple(p), "home", i) for i, p in enumerate(self.home)]
        n = len(self.home)
        out += [Trap(n + k, tuple(p), "hub") for k, p in enumerate(self.hubs)]
        return out

    def to_dict(self) -> dict:
        return {
            "home": [list(p) for p in self.home],
            "hubs": [list(p) for p in self.hubs],
            "r_b": self.r_b,
            "scale_s": self.scale_s,
            "d_min": self.d_min,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Layout":
        return cls(
            home=[tuple(p) for p in d["home"]],
            hubs=[tuple(p) for p in d["hubs"]],
            r_b=d["r_b"],
            scale_s=d["scale_s"],
            d_min=d["d_min"],
        )


class Occupancy:
    """Atom/trap bookkeeping plus the logical-state location of every qubit.

    Atom ``i`` starts in home trap ``i`` holding logical qubit ``i``.  Shuttles
    move atoms between traps; SWAP macros exchange logical states between the
    atoms of two traps without moving them.
    """

    def __init__(self, positions, num_atoms: int):
        self.positions = np.asarray(positions, dtype=float)
        n_traps = len(self.positions)
        if num_atoms > n_traps:
            raise ValueError("more atoms than traps")
        self.atom_trap = list(range(num_atoms))
        self.trap_atom: list[int | None] = [i if i < num_atoms else None for i in range(n_traps)]
        self.logical_atom = list(range(num_atoms))
        self.atom_logical = list(range(num_atoms))

    @property
    def num_atoms(self) -> int:
        return len(self.atom_trap)

    def home(self, atom: int) -> int:
        return atom

    def trap_of(self, atom: int) -> int:
        return self.atom_trap[atom]

    def atom_at(self, trap: int) -> int | None:
        return self.trap_atom[trap]

    def is_home(self, atom: int) -> bool:
        return self.atom_trap[atom] == atom

    def empty_traps(self) -> list[int]:
        return [t for t, a in enumerate(self.trap_atom) if a is None]

    def trap_distance(self, u: int, v: int) -> float:
        return float(np.hypot(*(self.positions[u] - self.positions[v])))

    def atom_distance(self, a: int, b: int) -> float:
        return self.trap_distance(self.atom_trap[a], self.atom_trap[b])

    def move(self, atom: int, dst: int) -> None:
        if self.trap_atom[dst] is not None:
            raise ValueError(f"trap {dst} is occupied by atom {self.trap_atom[dst]}")
        src = self.atom_trap[atom]
        self.trap_atom[src] = None
        self.trap_atom[dst] = atom
        self.atom_trap[atom] = dst

    def swap_states(self, u: int, v: int) -> None:
        x, y = self.trap_atom[u], self.trap_atom[v]
        if x is None or y is None:
            raise ValueError("SWAP between traps that are not both occupied")
        lx, ly = self.atom_logical[x], self.atom_logical[y]
        self.atom_logical[x], self.atom_logical[y] = ly, lx
        self.logical_atom[lx], self.logical_atom[ly] = y, x

    def copy(self) -> "Occupancy":
        new = Occupancy.__new__(Occupancy)
        new.positions = self.positions
        new.atom_trap = list(self.atom_trap)
        new.trap_atom = list(self.trap_atom)
        new.logical_atom = list(self.logical_atom)
        new.atom_logical = list(self.atom_logical)
        return new

    def is_consistent(self) -> bool:
        for a, t in enumerate(self.atom_trap):
            if self.trap_atom[t] != a:
                return False
        if sum(x is not None for x in self.trap_atom) != self.num_atoms:
            return False
        return all(self.atom_logical[self.logical_atom[q]] == q for q in range(self.num_atoms))


# --- scheduled operations -------------------------------------------------


@dataclass(frozen=True)
class OneQOp:
    kind: ClassVar[str] = "oneq"
    atom: int
    name: str
    duration: float
    gate: int | None = None

    @property
    def atoms(self) -> tuple[int, ...]:
        return (self.atom,)


@dataclass(frozen=True)
class CZOp:
    kind: ClassVar[str] = "cz"
    a: int
    b: int
    trap_a: int
    trap_b: int
    duration: float
    gate: int | None = None

    @property
    def atoms(self) -> tuple[int, ...]:
        return (self.a, self.b)

    @property
    def traps(self) -> tuple[int, int]:
        return (self.trap_a, self.trap_b)


@dataclass(frozen=True)
class SwapOp:
    """Logical-state exchange between the atoms in two adjacent occupied traps."""

    kind: ClassVar[str] = "swap"
    trap_u: int
    trap_v: int
    atom_u: int
    atom_v: int
    duration: float
    plan: int | None = None

    @property
    def atoms(self) -> tuple[int, ...]:
        return (self.atom_u, self.atom_v)

    @property
    def traps(self) -> tuple[int, int]:
        return (self.trap_u, self.trap_v)


@dataclass(frozen=True)
class ShuttleOp:
    kind: ClassVar[str] = "shuttle"
    atom: int
    src: int
    dst: int
    path_length: float
    duration: float
    plan: int | None = None

    @property
    def atoms(self) -> tuple[int, ...]:
        return (self.atom,)


Op = Union[OneQOp, CZOp, SwapOp, ShuttleOp]
_OP_TYPES = {cls.kind: cls for cls in (OneQOp, CZOp, SwapOp, ShuttleOp)}
RYDBERG_KINDS = frozenset({"cz", "swap"})


def op_to_dict(op: Op) -> dict:
    d = asdict(op)
    d["kind"] = op.kind
    return d


def op_from_dict(d: dict) -> Op:
    d = dict(d)
    cls = _OP_TYPES[d.pop("kind")]
    return cls(**d)


def with_plan(op: Op, plan: int) -> Op:
    from dataclasses import replace

    return replace(op, plan=plan)


@dataclass
class TransportRecord:
    """Why a blocked CZ was routed the way it was."""

    plan: int
    gate: int
    pair: tuple[int, int]
    kind: str  # "swap" | "shuttle" | "evict"
    score: float
    n_steps: int
    swap_available: bool
    n_direct_shuttle: int
    n_eviction: int


@dataclass
class Schedule:
    layers: list[list[Op]]
    num_qubits: int
    final_atom_trap: list[int]
    final_logical_atom: list[int]
    transports: list[TransportRecord] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def ops(self):
        for layer in self.layers:
            yield from layer

    def count(self, kind: str) -> int:
        return sum(1 for op in self.ops() if op.kind == kind)

    @property
    def counts(self) -> dict[str, int]:
        c = {"oneq": 0, "cz": 0, "swap": 0, "shuttle": 0}
        for op in self.ops():
            c[op.kind] += 1
        return {
            "swaps": c["swap"],
            "shuttles": c["shuttle"],
            "cz": c["cz"],
            "oneq": c["oneq"],
            "layers": len(self.layers),
        }

    def to_dict(self) -> dict:
        return {
            "num_qubits": self.num_qubits,
            "layers": [[op_to_dict(op) for op in layer] for layer in self.layers],
            "final_atom_trap": list(self.final_atom_trap),
            "final_logical_atom": list(self.final_logical_atom),
            "transports": [
                {**asdict(t), "pair": list(t.pair)} for t in self.transports
            ],
            "config": dict(self.config),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Schedule":
        return cls(
            layers=[[op_from_dict(o) for o in layer] for layer in d["layers"]],
            num_qubits=d["num_qubits"],
            final_atom_trap=list(d["final_atom_trap"]),
            final_logical_atom=list(d["final_logical_atom"]),
            transports=[
                TransportRecord(**{**t, "pair": tuple(t["pair"])}) for t in d.get("transports", [])
            ],
            config=dict(d.get("config", {})),
        )
