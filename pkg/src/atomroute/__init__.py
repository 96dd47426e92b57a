"""Circuit-aware placement, hub traps and SWAP-vs-shuttle routing for neutral-atom arrays."""

from .artifact import Artifact
from .config import METHODS, CompileConfig
from .errors import (
    AtomRouteError,
    BudgetExceeded,
    DegenerateInput,
    NoValidTransport,
    ParseError,
    UnknownTrap,
    UnsupportedGate,
)
from .frontend import Circuit, Gate, dependency_dag, interaction_graph, load_qasm, parse_qasm
from .hubs import HubConfig, HubSet, place_hubs
from .metrics import OperatingPoint, compute_metrics, execution_time, log_fidelity, sweep_fsh, t_eff
from .motion import astar_distance, build_grid, precompute_distances, shuttle_duration
from .pipeline import CompileResult, compile_circuit
from .placement import AnnealOptions, optimize_placement, select_radius
from .schedule import Layout, Schedule
from .transpiler import transpile
from .validate import validate_schedule

__version__ = "0.1.0"

__all__ = [
    "METHODS", "AnnealOptions", "Artifact", "AtomRouteError", "BudgetExceeded", "Circuit", "CompileConfig",
    "CompileResult", "DegenerateInput", "Gate", "HubConfig", "HubSet", "Layout", "NoValidTransport",
    "OperatingPoint", "ParseError", "Schedule", "UnknownTrap", "UnsupportedGate", "astar_distance",
    "build_grid", "compile_circuit", "compute_metrics", "dependency_dag", "execution_time",
    "interaction_graph", "load_qasm", "log_fidelity", "optimize_placement", "parse_qasm",
    "place_hubs", "precompute_distances", "select_radius", "shuttle_duration", "sweep_fsh",
    "t_eff", "transpile", "validate_schedule",
]
