import math

import numpy as np
import pytest

from qusim.gates import GateKind
from qusim.parser import parse_circuit
from qusim.qasm import QasmError, parse_openqasm
from qusim import statevector as sv

_HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'


def test_basic_program():
    c = parse_openqasm(_HEADER + "qreg q[3];\nh q[0];\ncx q[0], q[1];\ncx q[1],q[2];")
    assert c.n_qubits == 3
    assert [g.kind for g in c.gates] == [GateKind.H, GateKind.CNOT, GateKind.CNOT]


def test_angle_expressions():
    c = parse_openqasm(_HEADER + "qreg q[1];\nrz(pi/2) q[0];\n"
                       "rx(-pi) q[0];\nu3(pi/2, 0, 2*pi - pi) q[0];\nry(pi^2/8) q[0];")
    assert c.gates[0].params == (math.pi / 2,)
    assert c.gates[1].params == (-math.pi,)
    assert c.gates[2].params == (math.pi / 2, 0.0, math.pi)
    assert abs(c.gates[3].params[0] - math.pi ** 2 / 8) < 1e-15


def test_comments_and_whitespace():
    c = parse_openqasm("OPENQASM 2.0; // version\nqreg q[2]; // two qubits\n"
                       "h q[0]; // mix\n  cz q[0] , q[1] ;")
    assert len(c.gates) == 2


def test_matches_native_equivalent():
    qasm = _HEADER + ("qreg q[4];\n" + "h q[0];\nh q[1];\nh q[2];\nh q[3];\n"
                      "cx q[0],q[1];\ncz q[1],q[2];\nswap q[2],q[3];\n"
                      "t q[0];\nsdg q[1];\nrz(pi/4) q[2];")
    native = ("qubits 4\nH 0\nH 1\nH 2\nH 3\nCNOT 0 1\nCZ 1 2\nSWAP 2 3\n"
              "T 0\nSDG 1\nRZ 2 " + f"{math.pi/4:.16E}")
    a = sv.run_circuit(parse_openqasm(qasm))
    b = sv.run_circuit(parse_circuit(native))
    assert np.max(np.abs(a.amps - b.amps)) < 1e-12


@pytest.mark.parametrize("body,needle", [
    ("creg c[2];", "creg"),
    ("measure q[0] -> c[0];", "measure"),
    ("barrier q;", "barrier"),
    ("gate foo a { h a; }", "gate"),
    ("u1(pi) q[0];", "u1"),
    ("ccx q[0],q[1],q[2];", "ccx"),
    ("reset q[0];", "reset"),
])
def test_unsupported_constructs_are_named(body, needle):
    with pytest.raises(QasmError, match=needle):
        parse_openqasm(_HEADER + "qreg q[3];\n" + body)


def test_error_cases():
    with pytest.raises(QasmError, match="version header"):
        parse_openqasm("qreg q[2];")
    with pytest.raises(QasmError, match="one qreg"):
        parse_openqasm(_HEADER + "qreg a[2]; qreg b[2];")
    with pytest.raises(QasmError, match="no qreg"):
        parse_openqasm("OPENQASM 2.0;")
    with pytest.raises(QasmError, match="out of range"):
        parse_openqasm(_HEADER + "qreg q[2]; h q[2];")
    with pytest.raises(QasmError, match="broadcast"):
        parse_openqasm(_HEADER + "qreg q[2]; h q;")
    with pytest.raises(QasmError, match="unknown gate"):
        parse_openqasm(_HEADER + "qreg q[2]; frob q[0];")
    with pytest.raises(QasmError, match="angle expression"):
        parse_openqasm(_HEADER + "qreg q[1]; rz(import) q[0];")
    with pytest.raises(QasmError):
        parse_openqasm(_HEADER + "qreg q[1]; rz(__builtins__) q[0];")
