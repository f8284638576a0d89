"""OpenQASM 2.0 subset parser.

Supported: one `qreg`, the gates h,x,y,z,s,sdg,t,tdg,rx,ry,rz,u3,cx,cz,swap,
`include "qelib1.inc"`, and constant angle expressions over pi with + - * / ^
and parentheses. Classical registers, measurement, conditionals, barriers and
user gate definitions are rejected with a named error.
"""
from __future__ import annotations

import ast
import math
import operator
import re

from .circuit import Circuit
from .gates import Gate, GateKind

_GATE_MAP = {
    "h": GateKind.H, "x": GateKind.X, "y": GateKind.Y, "z": GateKind.Z,
    "s": GateKind.S, "sdg": GateKind.SDG, "t": GateKind.T, "tdg": GateKind.TDG,
    "rx": GateKind.RX, "ry": GateKind.RY, "rz": GateKind.RZ, "u3": GateKind.U3,
    "cx": GateKind.CNOT, "cz": GateKind.CZ, "swap": GateKind.SWAP,
}
_UNSUPPORTED = {"creg", "measure", "if", "reset", "barrier", "gate", "opaque",
                "u1", "u2", "u", "id", "ccx", "cswap", "crz", "cu1", "cu3"}

_BIN_OPS = {ast.Add: operator.add, ast.Sub: operator.sub,
            ast.Mult: operator.mul, ast.Div: operator.truediv,
            ast.Pow: operator.pow}


class QasmError(ValueError):
    """Unsupported construct or syntax error in an OpenQASM program."""

    def __init__(self, message: str, statement: str | None = None):
        if statement is not None:
            message = f"{message} (in statement {statement!r})"
        super().__init__(message)


def _eval_angle(expr: str, stmt: str) -> float:
    expr = expr.replace("^", "**")
    try:
        node = ast.parse(expr, mode="eval").body
    except SyntaxError:
        raise QasmError(f"bad angle expression {expr!r}", stmt) from None

    def ev(n: ast.expr) -> float:
        if isinstance(n, ast.Constant) and isinstance(n.value, (int, float)):
            return float(n.value)
        if isinstance(n, ast.Name) and n.id == "pi":
            return math.pi
        if isinstance(n, ast.UnaryOp) and isinstance(n.op, (ast.USub, ast.UAdd)):
            v = ev(n.operand)
            return -v if isinstance(n.op, ast.USub) else v
        if isinstance(n, ast.BinOp) and type(n.op) in _BIN_OPS:
            return _BIN_OPS[type(n.op)](ev(n.left), ev(n.right))
        raise QasmError(f"unsupported term in angle expression {expr!r}", stmt)

    return ev(node)


def _split_args(text: str) -> list[str]:
    # Split on commas not nested inside parentheses.
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if cur:
        out.append("".join(cur).strip())
    return out


def parse_openqasm(text: str, name: str = "") -> Circuit:
    """Parse an OpenQASM 2.0 program (supported subset) into a Circuit."""
    # Strip // comments, then split into ;-terminated statements.
    stripped = re.sub(r"//[^\n]*", "", text)
    statements = [s.strip() for s in stripped.split(";") if s.strip()]
    if not statements or not re.fullmatch(r"OPENQASM\s+2\.0", statements[0]):
        raise QasmError("missing `OPENQASM 2.0;` version header")

    reg_name: str | None = None
    n_qubits = 0
    gates: list[Gate] = []

    for stmt in statements[1:]:
        if re.fullmatch(r'include\s+"[^"]*"', stmt):
            continue
        m = re.fullmatch(r"qreg\s+([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]", stmt)
        if m:
            if reg_name is not None:
                raise QasmError("only one qreg is supported", stmt)
            reg_name, n_qubits = m.group(1), int(m.group(2))
            if n_qubits < 1:
                raise QasmError("qreg must hold at least one qubit", stmt)
            continue
        m = re.fullmatch(r"([A-Za-z_]\w*)\s*(?:\(([^)]*)\))?\s+(.*)", stmt, re.S)
        if not m:
            raise QasmError("unparseable statement", stmt)
        mnemonic, angle_text, operand_text = m.group(1).lower(), m.group(2), m.group(3)
        if mnemonic in _UNSUPPORTED:
            raise QasmError(f"unsupported construct `{mnemonic}`", stmt)
        kind = _GATE_MAP.get(mnemonic)
        if kind is None:
            raise QasmError(f"unknown gate `{mnemonic}`", stmt)
        if reg_name is None:
            raise QasmError("gate before qreg declaration", stmt)
        qubits = []
        for operand in _split_args(operand_text):
            qm = re.fullmatch(rf"{re.escape(reg_name)}\s*\[\s*(\d+)\s*\]", operand)
            if not qm:
                raise QasmError(f"bad operand {operand!r} (whole-register "
                                "broadcast is not supported)", stmt)
            q = int(qm.group(1))
            if q >= n_qubits:
                raise QasmError(f"qubit index {q} out of range [0, {n_qubits})", stmt)
            qubits.append(q)
        params = tuple(_eval_angle(a, stmt) for a in _split_args(angle_text)) \
            if angle_text is not None else ()
        try:
            gates.append(Gate(kind, tuple(qubits), params))
        except ValueError as exc:
            raise QasmError(str(exc), stmt) from None

    if reg_name is None:
        raise QasmError("program declares no qreg")
    return Circuit(n_qubits, tuple(gates), name)
