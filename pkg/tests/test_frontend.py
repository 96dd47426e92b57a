import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atomroute import Circuit, Gate, ParseError, UnsupportedGate, dependency_dag, interaction_graph, load_qasm, parse_qasm
from atomroute.frontend import to_qasm
from helpers import FIXTURES, random_circuit

HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'


def test_empty_program():
    c = parse_qasm('OPENQASM 2.0; include "qelib1.inc"; qreg q[3];')
    assert c.num_qubits == 3
    assert c.gates == []


def test_cx_is_unsupported():
    with pytest.raises(UnsupportedGate) as exc:
        parse_qasm(HEADER + "qreg q[2];\ncx q[0],q[1];\n")
    assert exc.value.name == "cx"
    assert exc.value.line == 4


@pytest.mark.parametrize("name", ["ccx", "swap", "cu1", "mygate"])
def test_other_multi_qubit_gates_unsupported(name):
    text = HEADER + "gate mygate a,b { cz a,b; }\nqreg q[3];\n" + f"{name} q[0],q[1];\n"
    with pytest.raises(UnsupportedGate):
        parse_qasm(text)


def test_classical_control_unsupported():
    with pytest.raises(UnsupportedGate):
        parse_qasm(HEADER + "qreg q[1];\ncreg c[1];\nif(c==1) x q[0];\n")


@pytest.mark.parametrize(
    "body",
    [
        "qreg q[2];\ncz q[0],q[2];",
        "qreg q[2];\ncz r[0],q[1];",
        "qreg q[2];\ncz q[0],q[0];",
        "qreg q[2];\nh q[0],q[1];",
        "qreg q[2];\nqreg q[3];",
        "qreg q[2];\ncz q[0] q[1];",
    ],
)
def test_malformed_programs(body):
    with pytest.raises(ParseError):
        parse_qasm(HEADER + body + "\n")


def test_missing_header():
    with pytest.raises(ParseError):
        parse_qasm("qreg q[2];\ncz q[0],q[1];\n")


def test_other_versions_rejected():
    with pytest.raises(ParseError):
        parse_qasm("OPENQASM 3.0;\nqubit[2] q;\n")


def test_mixed_register_fixture_gate_list():
    c = load_qasm(FIXTURES / "mixed_registers.qasm")
    assert c.num_qubits == 5
    assert c.name == "mixed_registers"
    # register a -> 0,1 and b -> 2,3,4
    expected = [
        Gate("h", (0,)), Gate("h", (1,)),
        Gate("cz", (0, 3)),
        Gate("rz", (4,), "pi/4"),
        Gate("cz", (1, 2)),
        Gate("u3", (0,), "0.1,0.2,-pi/2"),
        Gate("cz", (0, 4)), Gate("cz", (1, 4)),
        Gate("sdg", (2,)), Gate("t", (3,)),
    ]
    assert c.gates == expected
    assert c.gates[2].source_line == 9


def test_fixture_counts_match_ground_truth():
    truth = json.loads((FIXTURES / "ground_truth.json").read_text())
    for name, t in truth.items():
        c = load_qasm(FIXTURES / f"{name}.qasm")
        assert (c.num_qubits, c.cz_count, len(c.gates)) == (t["qubits"], t["cz"], t["total"])
        assert interaction_graph(c).total_weight() == t["cz"]


def test_comments_and_whitespace():
    text = HEADER + "qreg q[2]; // two\n/* block\ncomment */ h q[0];\ncz\n  q[0] ,\n q[1] ;\n"
    c = parse_qasm(text)
    assert [g.name for g in c.gates] == ["h", "cz"]
    assert c.gates[1].source_line == 6


def test_interaction_graph_counts_unordered_pairs():
    c = Circuit(3, [Gate("cz", (0, 1)), Gate("cz", (1, 0)), Gate("cz", (0, 2))])
    g = interaction_graph(c)
    assert g.weights == {(0, 1): 2, (0, 2): 1}
    assert g.weight(1, 0) == 2
    assert g.weight(1, 2) == 0


def test_interaction_graph_empty():
    assert interaction_graph(Circuit(4, [])).weights == {}


def test_dag_examples():
    dag = dependency_dag(Circuit(2, [Gate("h", (0,)), Gate("cz", (0, 1)), Gate("h", (1,))]))
    assert dag.preds == [frozenset(), frozenset({0}), frozenset({1})]
    dag = dependency_dag(Circuit(4, [Gate("cz", (0, 1)), Gate("cz", (2, 3))]))
    assert dag.preds == [frozenset(), frozenset()]
    dag = dependency_dag(Circuit(2, [Gate("cz", (0, 1)), Gate("cz", (0, 1))]))
    assert dag.preds[1] == frozenset({0})


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 9), st.integers(0, 40), st.integers(0, 10**6))
def test_round_trip_through_qasm(n, k, seed):
    c = random_circuit(n, k, seed)
    again = parse_qasm(to_qasm(c))
    assert again.num_qubits == c.num_qubits
    assert again.gates == c.gates


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 8), st.integers(0, 40), st.integers(0, 10**6))
def test_any_topological_order_keeps_per_qubit_program_order(n, k, seed):
    c = random_circuit(n, k, seed)
    dag = dependency_dag(c)
    rng = random.Random(seed)
    indeg = [len(p) for p in dag.preds]
    succs = dag.succs
    ready = [g for g, d in enumerate(indeg) if d == 0]
    order = []
    while ready:
        g = ready.pop(rng.randrange(len(ready)))
        order.append(g)
        for s in succs[g]:
            indeg[s] -= 1
            if indeg[s] == 0:
                ready.append(s)
    assert sorted(order) == list(range(len(c.gates)))  # acyclic
    for q in range(n):
        on_q = [g for g in order if q in c.gates[g].qubits]
        assert on_q == sorted(on_q)
    assert dag.topological_order() == list(range(len(c.gates)))
