import math

import numpy as np
import pytest

from qusim.gates import (DIAGONAL_KINDS, Gate, GateKind, N_PARAMS,
                         TWO_QUBIT_KINDS, gate_matrix)


def _all_parameterless_kinds():
    return [k for k in GateKind
            if k not in N_PARAMS and k is not GateKind.DIAG1]


def test_fixed_matrices_are_unitary():
    for kind in _all_parameterless_kinds():
        m = gate_matrix(kind)
        assert np.allclose(m.conj().T @ m, np.eye(m.shape[0]), atol=1e-14), kind


def test_rotation_matrices_are_unitary():
    for kind in (GateKind.RX, GateKind.RY, GateKind.RZ):
        for t in (-2.1, 0.0, 0.3, math.pi, 5.0):
            m = gate_matrix(kind, (t,))
            assert np.allclose(m.conj().T @ m, np.eye(2), atol=1e-14)
    m = gate_matrix(GateKind.U3, (0.7, -1.2, 2.5))
    assert np.allclose(m.conj().T @ m, np.eye(2), atol=1e-14)


def test_v_squares_to_x_and_vy_to_y():
    v = gate_matrix(GateKind.V)
    vy = gate_matrix(GateKind.VY)
    assert np.allclose(v @ v, gate_matrix(GateKind.X), atol=1e-14)
    assert np.allclose(vy @ vy, gate_matrix(GateKind.Y), atol=1e-14)


def test_u3_special_cases():
    # U3(pi/2, 0, pi) = H
    h = gate_matrix(GateKind.U3, (math.pi / 2, 0.0, math.pi))
    assert np.allclose(h, gate_matrix(GateKind.H), atol=1e-12)
    # U3(pi, 0, pi) = X
    x = gate_matrix(GateKind.U3, (math.pi, 0.0, math.pi))
    assert np.allclose(x, gate_matrix(GateKind.X), atol=1e-12)


def test_s_t_relations():
    s = gate_matrix(GateKind.S)
    t = gate_matrix(GateKind.T)
    assert np.allclose(t @ t, s, atol=1e-14)
    assert np.allclose(s @ gate_matrix(GateKind.SDG), np.eye(2), atol=1e-14)
    assert np.allclose(t @ gate_matrix(GateKind.TDG), np.eye(2), atol=1e-14)


def test_cnot_basis_convention():
    # b = bit(qubits[1])*2 + bit(qubits[0]); control = qubits[0] = low bit.
    # Control-set columns are b=1 (01) and b=3 (11); CNOT swaps them.
    m = gate_matrix(GateKind.CNOT)
    e1 = np.zeros(4); e1[1] = 1
    assert np.allclose(m @ e1, np.eye(4)[3])
    e3 = np.zeros(4); e3[3] = 1
    assert np.allclose(m @ e3, np.eye(4)[1])


def test_gate_validation_arity():
    with pytest.raises(ValueError):
        Gate(GateKind.H, (0, 1))
    with pytest.raises(ValueError):
        Gate(GateKind.CNOT, (3,))
    with pytest.raises(ValueError):
        Gate(GateKind.CZ, (2, 2))
    with pytest.raises(ValueError):
        Gate(GateKind.X, (-1,))


def test_gate_validation_params():
    with pytest.raises(ValueError):
        Gate(GateKind.RX, (0,))          # missing angle
    with pytest.raises(ValueError):
        Gate(GateKind.U3, (0,), (1.0,))  # wrong count
    with pytest.raises(ValueError):
        Gate(GateKind.H, (0,), (1.0,))   # H takes none


def test_diag1_carries_entries_and_may_be_nonunitary():
    g = Gate(GateKind.DIAG1, (0,), diag=(1.5, 0.5j))
    assert np.allclose(g.matrix, np.diag([1.5, 0.5j]))
    with pytest.raises(ValueError):
        Gate(GateKind.DIAG1, (0,))  # entries required
    with pytest.raises(ValueError):
        Gate(GateKind.H, (0,), diag=(1.0, 1.0))  # diag only for DIAG1


def test_diagonal_kind_set_matches_matrices():
    for kind in _all_parameterless_kinds():
        m = gate_matrix(kind)
        is_diag = np.allclose(m, np.diag(np.diag(m)))
        assert (kind in DIAGONAL_KINDS) == is_diag, kind
    assert GateKind.RZ in DIAGONAL_KINDS
    assert GateKind.DIAG1 in DIAGONAL_KINDS
