"""Native circuit assembly format.

One statement per line; `#` starts a comment. The first statement must be
`qubits N`. Gate statements are `MNEMONIC q [q2] [angle...]` with angles as
decimal literals in radians.
"""
from __future__ import annotations

from .circuit import Circuit
from .gates import Gate, GateKind, N_PARAMS, TWO_QUBIT_KINDS

MNEMONICS = {
    "I": GateKind.I, "X": GateKind.X, "Y": GateKind.Y, "Z": GateKind.Z,
    "H": GateKind.H, "S": GateKind.S, "SDG": GateKind.SDG,
    "T": GateKind.T, "TDG": GateKind.TDG, "V": GateKind.V, "VY": GateKind.VY,
    "RX": GateKind.RX, "RY": GateKind.RY, "RZ": GateKind.RZ, "U3": GateKind.U3,
    "CNOT": GateKind.CNOT, "CZ": GateKind.CZ, "SWAP": GateKind.SWAP,
}


class CircuitSyntaxError(ValueError):
    """Syntax or range error in native circuit text, with 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def parse_circuit(text: str, name: str = "") -> Circuit:
    """Parse native-format text into a Circuit."""
    n_qubits = None
    gates: list[Gate] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        head = fields[0].upper()
        if n_qubits is None:
            if head != "QUBITS":
                raise CircuitSyntaxError(line_no, "missing `qubits N` header")
            if len(fields) != 2:
                raise CircuitSyntaxError(line_no, "header must be `qubits N`")
            try:
                n_qubits = int(fields[1])
            except ValueError:
                raise CircuitSyntaxError(line_no, f"bad qubit count {fields[1]!r}") from None
            if n_qubits < 1:
                raise CircuitSyntaxError(line_no, "qubit count must be >= 1")
            continue
        kind = MNEMONICS.get(head)
        if kind is None:
            raise CircuitSyntaxError(line_no, f"unknown mnemonic {fields[0]!r}")
        n_q = 2 if kind in TWO_QUBIT_KINDS else 1
        n_p = N_PARAMS.get(kind, 0)
        args = fields[1:]
        if len(args) != n_q + n_p:
            raise CircuitSyntaxError(
                line_no, f"{head} takes {n_q} qubit(s) and {n_p} angle(s), "
                         f"got {len(args)} argument(s)")
        try:
            qubits = tuple(int(a) for a in args[:n_q])
        except ValueError:
            raise CircuitSyntaxError(line_no, f"bad qubit index in {args[:n_q]}") from None
        for q in qubits:
            if not 0 <= q < n_qubits:
                raise CircuitSyntaxError(line_no, f"qubit index {q} out of range [0, {n_qubits})")
        try:
            params = tuple(float(a) for a in args[n_q:])
        except ValueError:
            raise CircuitSyntaxError(line_no, f"bad angle literal in {args[n_q:]}") from None
        try:
            gates.append(Gate(kind, qubits, params))
        except ValueError as exc:
            raise CircuitSyntaxError(line_no, str(exc)) from None
    if n_qubits is None:
        raise CircuitSyntaxError(1, "missing `qubits N` header")
    return Circuit(n_qubits, tuple(gates), name)


def _fmt_angle(x: float) -> str:
    # 17 significant digits: lossless float64 round-trip.
    return f"{x:.16E}"


def emit_circuit(c: Circuit) -> str:
    """Print a Circuit in native format; parse_circuit inverts it gate-for-gate."""
    lines = [f"qubits {c.n_qubits}"]
    for g in c.gates:
        if g.kind is GateKind.DIAG1:
            raise ValueError("DIAG1 is internal to the path-sum engine and has no text form")
        parts = [g.kind.value, *map(str, g.qubits), *(_fmt_angle(p) for p in g.params)]
        lines.append(" ".join(parts))
    return "\n".join(lines)
