"""Circuit container, greedy layering, and rewriting to single-qubit + CZ form."""
from __future__ import annotations

from dataclasses import dataclass, field

from .gates import Gate, GateKind, TWO_QUBIT_KINDS


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over n_qubits named qubits.

    Gate order is execution order: gates[0] hits the initial state first.
    """
    n_qubits: int
    gates: tuple[Gate, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.n_qubits < 1:
            raise ValueError("circuit needs at least one qubit")
        for g in self.gates:
            for q in g.qubits:
                if q >= self.n_qubits:
                    raise ValueError(
                        f"gate {g.kind.value} uses qubit {q}, "
                        f"but circuit has {self.n_qubits} qubits")

    def __len__(self) -> int:
        return len(self.gates)


@dataclass(frozen=True)
class LayerSchedule:
    """Greedy ASAP grouping of gates into layers of qubit-disjoint gates."""
    layers: tuple[tuple[int, ...], ...]
    depth: int


def compute_depth(c: Circuit) -> LayerSchedule:
    """Greedy ASAP layering: each gate lands in the earliest layer after the
    last layer touching any of its qubits."""
    last_layer = [-1] * c.n_qubits  # last layer index occupying each qubit
    layers: list[list[int]] = []
    for i, g in enumerate(c.gates):
        layer = max(last_layer[q] for q in g.qubits) + 1
        if layer == len(layers):
            layers.append([])
        layers[layer].append(i)
        for q in g.qubits:
            last_layer[q] = layer
    return LayerSchedule(tuple(tuple(l) for l in layers), len(layers))


def _rewrite_gate(g: Gate) -> list[Gate]:
    if g.kind is GateKind.CNOT:
        a, b = g.qubits
        return [Gate(GateKind.H, (b,)), Gate(GateKind.CZ, (a, b)), Gate(GateKind.H, (b,))]
    if g.kind is GateKind.SWAP:
        a, b = g.qubits
        out: list[Gate] = []
        for cn in (Gate(GateKind.CNOT, (a, b)), Gate(GateKind.CNOT, (b, a)),
                   Gate(GateKind.CNOT, (a, b))):
            out.extend(_rewrite_gate(cn))
        return out
    return [g]


def rewrite_to_cz_basis(c: Circuit) -> Circuit:
    """Rewrite every entangling gate into single-qubit gates plus CZ.

    CNOT(a,b) -> H(b), CZ(a,b), H(b); SWAP via 3 CNOTs. Single-qubit gates
    and CZ pass through unchanged; the result is unitarily equivalent.
    """
    if not any(g.kind in (GateKind.CNOT, GateKind.SWAP) for g in c.gates):
        return c
    gates: list[Gate] = []
    for g in c.gates:
        gates.extend(_rewrite_gate(g))
    return Circuit(c.n_qubits, tuple(gates), c.name)
