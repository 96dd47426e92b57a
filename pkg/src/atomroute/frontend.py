"""OpenQASM 2.0 frontend for the 1Q + CZ gate set.

Only the subset consumed by the compiler is understood: register
declarations, whitelisted single-qubit gates and ``cz``.  ``barrier``,
``measure`` and ``creg`` are accepted and dropped.  Gate matrices are never
needed, so single-qubit gates keep their name and raw parameter text only.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field

from .errors import ParseError, UnsupportedGate

ONE_QUBIT_GATES = frozenset(
    {
        "u1", "u2", "u3", "u", "U", "u0", "p",
        "rz", "rx", "ry",
        "h", "x", "y", "z",
        "s", "sdg", "t", "tdg", "sx", "sxdg",
        "id",
    }
)
TWO_QUBIT_GATES = frozenset({"cz"})
_IGNORED = frozenset({"barrier", "measure", "creg"})

_HEADER = re.compile(r"^OPENQASM\s+(\d+(?:\.\d+)?)$")
_INCLUDE = re.compile(r'^include\s+"[^"]*"$')
_QREG = re.compile(r"^qreg\s+([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]$")
_GATE_STMT = re.compile(r"^([A-Za-z_]\w*)\s*(\(([^()]*(?:\([^()]*\)[^()]*)*)\))?\s*(.*)$", re.S)
_ARG = re.compile(r"^([A-Za-z_]\w*)\s*(?:\[\s*(\d+)\s*\])?$")


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]
    params: str = ""
    source_line: int = field(default=0, compare=False)

    @property
    def is_cz(self) -> bool:
        return self.name == "cz"


@dataclass
class Circuit:
    num_qubits: int
    gates: list[Gate] = field(default_factory=list)
    name: str = ""

    @property
    def cz_count(self) -> int:
        return sum(1 for g in self.gates if g.is_cz)

    @property
    def oneq_count(self) -> int:
        return sum(1 for g in self.gates if not g.is_cz)

    def validate(self) -> None:
        for i, g in enumerate(self.gates):
            if any(q < 0 or q >= self.num_qubits for q in g.qubits):
                raise ParseError(f"gate {i} addresses a qubit outside [0, {self.num_qubits})")
            if g.is_cz and (len(g.qubits) != 2 or g.qubits[0] == g.qubits[1]):
                raise ParseError(f"gate {i}: cz needs two distinct qubits")
            if not g.is_cz and len(g.qubits) != 1:
                raise ParseError(f"gate {i}: single-qubit gate with {len(g.qubits)} operands")


@dataclass
class InteractionGraph:
    num_qubits: int
    weights: dict[tuple[int, int], int] = field(default_factory=dict)

    def weight(self, i: int, j: int) -> int:
        return self.weights.get(_pair(i, j), 0)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return sorted(self.weights)

    def total_weight(self) -> int:
        return sum(self.weights.values())


def _pair(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


def _statements(text: str):
    """Yield ``(line_number, statement)`` with comments stripped.

    ``gate``/``opaque`` definitions are yielded whole, braces included.
    """
    # block comments keep their newlines so line numbers stay right
    text = re.sub(r"/\*.*?\*/", lambda m: "\n" * m.group(0).count("\n"), text, flags=re.S)
    cleaned = "\n".join(line.split("//", 1)[0] for line in text.splitlines())
    pos, line = 0, 1
    n = len(cleaned)
    while pos < n:
        while pos < n and cleaned[pos].isspace():
            if cleaned[pos] == "\n":
                line += 1
            pos += 1
        if pos >= n:
            break
        start_line = line
        if re.match(r"gate\b", cleaned[pos : pos + 5]):
            end = cleaned.find("}", pos)
            if end < 0:
                raise ParseError("unterminated gate definition", start_line)
            stmt, nxt = cleaned[pos : end + 1], end + 1
        else:
            end = cleaned.find(";", pos)
            if end < 0:
                raise ParseError("missing ';'", start_line)
            stmt, nxt = cleaned[pos:end], end + 1
        line += cleaned.count("\n", pos, nxt)
        pos = nxt
        yield start_line, stmt.strip()


def parse_qasm(text: str, name: str = "") -> Circuit:
    """Parse OpenQASM 2.0 text into a :class:`Circuit`.

    Qubits from several ``qreg`` declarations are flattened in declaration
    order, then index order.

    Raises:
        ParseError: malformed syntax or out-of-range operands.
        UnsupportedGate: any gate other than a whitelisted 1Q gate or ``cz``.
    """
    registers: dict[str, tuple[int, int]] = {}
    num_qubits = 0
    gates: list[Gate] = []
    seen_header = False

    def resolve(arg: str, line: int) -> list[int]:
        m = _ARG.match(arg.strip())
        if not m:
            raise ParseError(f"bad operand '{arg.strip()}'", line)
        reg, idx = m.group(1), m.group(2)
        if reg not in registers:
            raise ParseError(f"unknown register '{reg}'", line)
        offset, size = registers[reg]
        if idx is None:
            return list(range(offset, offset + size))
        k = int(idx)
        if k >= size:
            raise ParseError(f"index {k} out of range for {reg}[{size}]", line)
        return [offset + k]

    for line, stmt in _statements(text):
        if not stmt:
            continue
        if _HEADER.match(stmt):
            if _HEADER.match(stmt).group(1) not in ("2", "2.0"):
                raise ParseError("only OpenQASM 2.0 is supported", line)
            seen_header = True
            continue
        if not seen_header:
            raise ParseError("missing 'OPENQASM 2.0;' header", line)
        if _INCLUDE.match(stmt):
            continue
        if stmt.startswith("gate ") or stmt.startswith("opaque "):
            # definitions are skipped; using the defined name fails the whitelist
            continue
        m = _QREG.match(stmt)
        if m:
            reg, size = m.group(1), int(m.group(2))
            if reg in registers:
                raise ParseError(f"register '{reg}' redeclared", line)
            registers[reg] = (num_qubits, size)
            num_qubits += size
            continue
        keyword = stmt.split(None, 1)[0].split("(", 1)[0]
        if keyword in _IGNORED:
            continue
        if keyword == "if":
            raise UnsupportedGate("if", line)
        m = _GATE_STMT.match(stmt)
        if not m:
            raise ParseError(f"cannot parse statement '{stmt}'", line)
        gname, params, operands = m.group(1), (m.group(3) or ""), m.group(4)
        params = re.sub(r"\s+", "", params)
        if gname not in ONE_QUBIT_GATES and gname not in TWO_QUBIT_GATES:
            raise UnsupportedGate(gname, line)
        args = [a for a in operands.split(",")] if operands.strip() else []
        if gname in ONE_QUBIT_GATES:
            if len(args) != 1:
                raise ParseError(f"'{gname}' takes one operand", line)
            for q in resolve(args[0], line):
                gates.append(Gate(gname, (q,), params, line))
            continue
        if len(args) != 2:
            raise ParseError("'cz' takes two operands", line)
        qa, qb = resolve(args[0], line), resolve(args[1], line)
        if len(qa) > 1 and len(qb) > 1 and len(qa) != len(qb):
            raise ParseError("register size mismatch in broadcast cz", line)
        width = max(len(qa), len(qb))
        qa = qa * width if len(qa) == 1 else qa
        qb = qb * width if len(qb) == 1 else qb
        for x, y in zip(qa, qb):
            if x == y:
                raise ParseError("cz on identical qubits", line)
            gates.append(Gate("cz", (x, y), params, line))

    if not seen_header:
        raise ParseError("missing 'OPENQASM 2.0;' header")
    circuit = Circuit(num_qubits=num_qubits, gates=gates, name=name)
    circuit.validate()
    return circuit


def load_qasm(path) -> Circuit:
    from pathlib import Path

    path = Path(path)
    return parse_qasm(path.read_text(encoding="utf-8"), name=path.stem)


def to_qasm(circuit: Circuit) -> str:
    """Serialize over a single flat register ``q``."""
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{circuit.num_qubits}];"]
    for g in circuit.gates:
        head = f"{g.name}({g.params})" if g.params else g.name
        lines.append(f"{head} " + ",".join(f"q[{q}]" for q in g.qubits) + ";")
    return "\n".join(lines) + "\n"


def interaction_graph(circuit: Circuit) -> InteractionGraph:
    counts = Counter(_pair(*g.qubits) for g in circuit.gates if g.is_cz)
    return InteractionGraph(circuit.num_qubits, dict(sorted(counts.items())))


@dataclass
class DependencyDag:
    preds: list[frozenset[int]]

    @property
    def succs(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.preds]
        for g, ps in enumerate(self.preds):
            for p in sorted(ps):
                out[p].append(g)
        return out

    def topological_order(self) -> list[int]:
        import heapq

        indeg = [len(p) for p in self.preds]
        succs = self.succs
        heap = [g for g, d in enumerate(indeg) if d == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            g = heapq.heappop(heap)
            order.append(g)
            for s in succs[g]:
                indeg[s] -= 1
                if indeg[s] == 0:
                    heapq.heappush(heap, s)
        return order


def dependency_dag(circuit: Circuit) -> DependencyDag:
    """Each gate depends on the most recent earlier gate on each of its qubits."""
    last: dict[int, int] = {}
    preds = []
    for i, g in enumerate(circuit.gates):
        preds.append(frozenset(last[q] for q in g.qubits if q in last))
        for q in g.qubits:
            last[q] = i
    return DependencyDag(preds)
