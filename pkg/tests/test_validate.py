import copy
import dataclasses

from hypothesis import given, settings
from hypothesis import strategies as st

from atomroute import Circuit, CompileConfig, Gate, Layout, NoValidTransport, OperatingPoint, transpile, validate_schedule
from atomroute.schedule import CZOp, OneQOp, Schedule, ShuttleOp
from helpers import random_circuit, random_layout

OP = OperatingPoint()


def hub_case():
    home = [(0.1, 0.5), (0.3, 0.9), (0.9, 0.5)]
    layout = Layout(home=home, hubs=[(0.75, 0.5)], r_b=0.2, scale_s=30.0, d_min=0.2 / 3)
    c = Circuit(3, [Gate("h", (0,)), Gate("cz", (0, 2)), Gate("cz", (1, 2))])
    return c, layout, transpile(c, layout, CompileConfig(), OP)


def blockade_case():
    home = [(0.1, 0.1), (0.2, 0.1), (0.8, 0.8), (0.9, 0.8), (0.85, 0.7), (0.95, 0.7)]
    layout = Layout(home=home, hubs=[], r_b=0.15, scale_s=40.0, d_min=0.05)
    c = Circuit(6, [Gate("cz", (0, 1)), Gate("cz", (2, 3)), Gate("cz", (4, 5))])
    return c, layout, transpile(c, layout, CompileConfig.for_method("no-hub"), OP)


def edited(s, fn):
    s = copy.deepcopy(s)
    fn(s.layers)
    return s


def test_valid_cases_pass():
    for c, layout, s in (hub_case(), blockade_case()):
        r = validate_schedule(s, c, layout, OP)
        assert r.ok and str(r) == "OK"


def test_merged_layer_violates_blockade():
    c, layout, s = blockade_case()
    bad = edited(s, lambda L: (L[0].extend(L[1]), L.pop(1)))
    r = validate_schedule(bad, c, layout, OP)
    assert r.first.kind == "LayerBlockade"
    # a looser factor accepts the same layer
    assert validate_schedule(bad, c, layout, OP, blockade_factor=0.1).ok


def test_dropped_cz_is_reported():
    c, layout, s = blockade_case()
    bad = edited(s, lambda L: L.pop())
    r = validate_schedule(bad, c, layout, OP)
    assert r.kinds() == {"LogicalMismatch"}
    assert "did not execute" in r.first.detail


def test_reordered_gates_are_reported():
    c, layout, s = hub_case()
    # the H on qubit 0 moved after its CZ
    bad = edited(s, lambda L: L.insert(2, L.pop(0)))
    r = validate_schedule(bad, c, layout, OP)
    assert r.first.kind == "LogicalMismatch"
    assert r.first.layer == 1


def test_cz_out_of_range():
    c, layout, s = blockade_case()
    bad = copy.deepcopy(s)
    bad.layers = [[CZOp(0, 2, 0, 2, OP.t_cz)]]
    c2 = Circuit(6, [Gate("cz", (0, 2))])
    assert "CzOutOfRange" in validate_schedule(bad, c2, layout, OP).kinds()


def _first_shuttle(s):
    return next((li, k) for li, layer in enumerate(s.layers) for k, o in enumerate(layer) if isinstance(o, ShuttleOp))


def test_shuttle_from_wrong_trap():
    c, layout, s = hub_case()
    li, k = _first_shuttle(s)
    bad = edited(s, lambda L: L[li].__setitem__(k, dataclasses.replace(L[li][k], src=1)))
    assert validate_schedule(bad, c, layout, OP).first.kind == "ShuttleSource"


def test_shuttle_into_occupied_trap():
    c, layout, s = hub_case()
    li, k = _first_shuttle(s)
    bad = edited(s, lambda L: L[li].__setitem__(k, dataclasses.replace(L[li][k], dst=1)))
    assert validate_schedule(bad, c, layout, OP).first.kind == "OccupancyClash"


def test_shuttle_to_missing_trap():
    c, layout, s = hub_case()
    li, k = _first_shuttle(s)
    bad = edited(s, lambda L: L[li].__setitem__(k, dataclasses.replace(L[li][k], dst=9)))
    assert validate_schedule(bad, c, layout, OP).first.kind == "UnknownTrap"


def test_duration_mismatch_only_with_operating_point():
    c, layout, s = hub_case()
    li, k = _first_shuttle(s)
    bad = edited(s, lambda L: L[li].__setitem__(k, dataclasses.replace(L[li][k], duration=1.0)))
    assert validate_schedule(bad, c, layout, OP).kinds() == {"DurationMismatch"}
    assert validate_schedule(bad, c, layout).ok


def test_atom_used_twice_in_a_layer():
    c, layout, s = blockade_case()
    bad = copy.deepcopy(s)
    bad.layers[0].append(OneQOp(0, "h", OP.t_1q))
    assert "AtomConflict" in validate_schedule(bad, c, layout, OP).kinds()


def test_final_state_tampering():
    c, layout, s = hub_case()
    bad = copy.deepcopy(s)
    bad.final_atom_trap = list(range(3))
    assert validate_schedule(bad, c, layout, OP).kinds() == {"FinalStateMismatch"}


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 10), st.integers(1, 60), st.integers(0, 10**6), st.data())
def test_any_single_deletion_is_caught(n, k, seed, data):
    layout = random_layout(n, 4, seed)
    c = random_circuit(n, k, seed)
    try:
        s = transpile(c, layout, CompileConfig(), OP)
    except NoValidTransport:
        return
    flat = [(li, j) for li, layer in enumerate(s.layers) for j in range(len(layer))]
    if not flat:
        return
    li, j = data.draw(st.sampled_from(flat))
    bad = Schedule.from_dict(s.to_dict())
    del bad.layers[li][j]
    assert not validate_schedule(bad, c, layout, OP).ok
