"""Exception hierarchy shared by every compiler stage."""

from __future__ import annotations


class AtomRouteError(Exception):
    """Base class for all compiler errors."""


class ParseError(AtomRouteError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnsupportedGate(ParseError):
    """A gate outside the 1Q whitelist + ``cz`` gate set.

    Multi-qubit gates other than ``cz`` must be decomposed before the
    circuit reaches this compiler.
    """

    def __init__(self, name: str, line: int | None = None):
        self.name = name
        super().__init__(f"unsupported gate '{name}' (pre-transpile to 1Q + cz)", line)


class DegenerateInput(AtomRouteError, ValueError):
    pass


class UnknownTrap(AtomRouteError, KeyError):
    pass


class PlacementInfeasible(AtomRouteError):
    """Separation repair could not reach a layout with all pairs >= d_min."""


class NoValidTransport(AtomRouteError):
    """No SWAP path, no shuttle target and no eviction chain for a blocked CZ."""

    def __init__(
        self,
        pair: tuple[int, int],
        swap_unavailable: bool = True,
        shuttle_unavailable: bool = True,
        eviction_unavailable: bool = True,
        gate_index: int | None = None,
    ):
        self.pair = tuple(pair)
        self.swap_unavailable = swap_unavailable
        self.shuttle_unavailable = shuttle_unavailable
        self.eviction_unavailable = eviction_unavailable
        self.gate_index = gate_index
        super().__init__(self._message())

    @property
    def reasons(self) -> tuple[bool, bool, bool]:
        return (self.swap_unavailable, self.shuttle_unavailable, self.eviction_unavailable)

    def _message(self) -> str:
        parts = []
        if self.swap_unavailable:
            parts.append("SWAP path unavailable")
        if self.shuttle_unavailable:
            parts.append("shuttling unavailable")
        if self.eviction_unavailable:
            parts.append("eviction unavailable")
        where = f" (gate {self.gate_index})" if self.gate_index is not None else ""
        return f"no valid transport for qubit pair {self.pair}{where}: " + ", ".join(parts)

    def to_dict(self) -> dict:
        return {
            "pair": list(self.pair),
            "gate_index": self.gate_index,
            "swap_unavailable": self.swap_unavailable,
            "shuttle_unavailable": self.shuttle_unavailable,
            "eviction_unavailable": self.eviction_unavailable,
        }


class BudgetExceeded(AtomRouteError):
    def __init__(self, budget_seconds: float, stage: str = "transpile"):
        self.budget_seconds = budget_seconds
        self.stage = stage
        super().__init__(f"compile budget of {budget_seconds:g} s exceeded during {stage}")
