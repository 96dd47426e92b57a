"""Shared generators for randomized tests."""

from __future__ import annotations

import random
import time
from pathlib import Path

import numpy as np

from atomroute import AnnealOptions, Circuit, Gate, Layout
from atomroute.placement import select_radius

FIXTURES = Path(__file__).parent / "fixtures"
ONE_Q = ["h", "x", "rz", "t", "sdg"]

# shorter anneal for the randomized suites; placement quality is not what they test
SUITE_ANNEAL_STEPS = 1500
SUITE_SIZE = 50
METHOD_ROWS = ("proposed-ring", "proposed", "no-eviction", "no-hub")

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def random_circuit(n: int, n_cz: int, seed: int, oneq_prob: float = 0.5) -> Circuit:
    rng = random.Random(seed)
    gates = []
    for _ in range(n_cz):
        if rng.random() < oneq_prob:
            name = rng.choice(ONE_Q)
            gates.append(Gate(name, (rng.randrange(n),), "0.25" if name == "rz" else ""))
        a, b = rng.sample(range(n), 2)
        gates.append(Gate("cz", (a, b)))
    return Circuit(n, gates, f"rand_{n}_{n_cz}_{seed}")


def suite_circuits() -> list[Circuit]:
    """The randomized 8-12 qubit suite shared by several acceptance criteria."""
    return [random_circuit(8 + i % 5, 20 + (7 * i) % 41, 1000 + i) for i in range(SUITE_SIZE)]


def suite_anneal(i: int) -> AnnealOptions:
    return AnnealOptions(maxiter=SUITE_ANNEAL_STEPS, seed=i)


def spread_points(k: int, d_min: float, rng: np.random.Generator, avoid=None, tries: int = 5000) -> np.ndarray:
    """Uniform points in the unit square, pairwise (and to ``avoid``) at least ``d_min`` apart."""
    pts: list[np.ndarray] = [] if avoid is None else [np.asarray(p) for p in avoid]
    fixed = len(pts)
    for _ in range(tries):
        if len(pts) - fixed == k:
            break
        p = rng.random(2)
        if all(np.hypot(*(p - q)) >= d_min * (1 + 1e-9) for q in pts):
            pts.append(p)
    if len(pts) - fixed != k:
        raise RuntimeError("could not place points")
    return np.array(pts[fixed:]).reshape(k, 2)


def random_layout(n: int, n_hubs: int, seed: int, spacing: float = 0.12) -> Layout:
    """Home traps with r_b from the radius rule, plus randomly placed hubs."""
    rng = np.random.default_rng(seed)
    home = spread_points(n, spacing, rng)
    r_b = select_radius(home).r_b
    d_min = min(spacing, r_b / 3)
    hubs = spread_points(n_hubs, d_min, rng, avoid=home) if n_hubs else np.zeros((0, 2))
    return Layout(
        home=[tuple(map(float, p)) for p in home],
        hubs=[tuple(map(float, p)) for p in hubs],
        r_b=float(r_b),
        scale_s=6.0 / r_b,
        d_min=float(d_min),
    )


class Stopwatch:
    def __init__(self):
        self.start = time.perf_counter()

    @property
    def seconds(self) -> float:
        return time.perf_counter() - self.start


def random_micro_instance(seed: int, max_traps: int = 6, max_atoms: int = 4, crowded: bool = False):
    """A scrambled small trap array with one blocked CZ, for transport-decision tests.

    ``crowded`` keeps exactly one trap spare and scrambles harder, which makes
    eviction plans far more common.
    """
    from atomroute import CompileConfig, OperatingPoint
    from atomroute.motion import precompute_distances
    from atomroute.schedule import Occupancy

    rng = np.random.default_rng(seed)
    while True:
        if crowded:
            n_traps = int(rng.integers(4, max_traps + 1))
            n_atoms = min(max_atoms, n_traps - 1)
            moves, p_move = int(rng.integers(2, 9)), 0.85
        else:
            n_traps = int(rng.integers(3, max_traps + 1))
            n_atoms = int(rng.integers(2, min(max_atoms, n_traps) + 1))
            moves, p_move = int(rng.integers(0, 6)), 0.6
        pos = spread_points(n_traps, 0.12, rng)
        r_b = float(rng.uniform(0.2, 0.6))
        occ = Occupancy(pos, n_atoms)
        for _ in range(moves):
            empty = occ.empty_traps()
            if empty and rng.random() < p_move:
                occ.move(int(rng.integers(n_atoms)), int(rng.choice(empty)))
            else:
                u, v = (occ.trap_of(int(x)) for x in rng.choice(n_atoms, 2, replace=False))
                occ.swap_states(u, v)
        blocked = [
            (x, y) for x in range(n_atoms) for y in range(x + 1, n_atoms) if occ.atom_distance(x, y) > r_b + 1e-12
        ]
        if blocked:
            break
    a, b = blocked[int(rng.integers(len(blocked)))]
    if rng.random() < 0.5:
        a, b = b, a
    others = [x for x in range(n_atoms) if x not in (a, b)]
    ready = {x for x in others if rng.random() < 0.3}
    cfg = CompileConfig(
        hubs_enabled=True,
        eviction_enabled=bool(rng.random() < 0.8),
        eviction_depth_cap=int(rng.integers(1, 4)),
    )
    op = OperatingPoint(f_sh=float(rng.choice([1.0, 0.999, 0.99])))
    cache = precompute_distances(pos, 0.06)
    return dict(a=a, b=b, occ=occ, cache=cache, cfg=cfg, ready=ready, r_b=r_b, scale_s=6.0 / r_b, op=op)


MICRO_KINDS = ("shuttle", "swap", "evict", "none")


def oracle_kind(best) -> str:
    if best is None:
        return "none"
    sig = best[0]
    if sig[0][0] == "swap":
        return "swap"
    return "evict" if len(sig) > 1 else "shuttle"


def stratified_micro_instance(seed: int, max_draws: int = 5000):
    """A micro-instance whose brute-force optimum is of kind ``MICRO_KINDS[seed % 4]``.

    Instances are selected by the oracle alone, so every plan kind is
    exercised equally often without looking at the code under test.
    """
    from oracles import brute_force_transport

    want = MICRO_KINDS[seed % len(MICRO_KINDS)]
    for k in range(max_draws):
        inst = random_micro_instance(seed * max_draws + k, crowded=want == "evict")
        best = brute_force_transport(
            inst["a"], inst["b"], inst["occ"], inst["cache"], inst["r_b"], inst["scale_s"], inst["op"],
            inst["ready"], True, inst["cfg"].eviction_enabled, inst["cfg"].eviction_depth_cap,
        )
        if oracle_kind(best) == want:
            return inst
    raise RuntimeError(f"no {want} instance in {max_draws} draws")
