"""Gate kinds, parameter conventions, and matrix construction.

Conventions fixed here and shared by every engine:
  - qubit 0 is the least-significant bit of a state index
  - angles are radians
  - two-qubit matrices are written in the basis b = bit(qubits[1])*2 + bit(qubits[0]),
    i.e. qubits[0] is the low bit of the 2-bit sub-index
  - U3(theta, phi, lam) = [[cos(t/2), -e^{i lam} sin(t/2)],
                           [e^{i phi} sin(t/2), e^{i(phi+lam)} cos(t/2)]]
    which equals e^{i(phi+lam)/2} RZ(phi) RY(theta) RZ(lam)
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


class GateKind(str, Enum):
    I = "I"
    X = "X"
    Y = "Y"
    Z = "Z"
    H = "H"
    S = "S"
    SDG = "SDG"
    T = "T"
    TDG = "TDG"
    V = "V"      # X^{1/2}
    VY = "VY"    # Y^{1/2}
    RX = "RX"
    RY = "RY"
    RZ = "RZ"
    U3 = "U3"
    CNOT = "CNOT"
    CZ = "CZ"
    SWAP = "SWAP"
    DIAG1 = "DIAG1"  # general diagonal 1-qubit operator, may be non-unitary


TWO_QUBIT_KINDS = frozenset({GateKind.CNOT, GateKind.CZ, GateKind.SWAP})

# Diagonal gates never mix amplitudes; the distributed engine applies them
# without communication even on rank-selecting qubits.
DIAGONAL_KINDS = frozenset(
    {GateKind.I, GateKind.Z, GateKind.S, GateKind.SDG, GateKind.T,
     GateKind.TDG, GateKind.RZ, GateKind.CZ, GateKind.DIAG1}
)

N_PARAMS = {
    GateKind.RX: 1,
    GateKind.RY: 1,
    GateKind.RZ: 1,
    GateKind.U3: 3,
}

_FIXED_1Q = {
    GateKind.I: np.eye(2, dtype=complex),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=complex) * _INV_SQRT2,
    GateKind.S: np.array([[1, 0], [0, 1j]], dtype=complex),
    GateKind.SDG: np.array([[1, 0], [0, -1j]], dtype=complex),
    GateKind.T: np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex),
    GateKind.TDG: np.array([[1, 0], [0, np.exp(-1j * math.pi / 4)]], dtype=complex),
    GateKind.V: 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex),
    GateKind.VY: 0.5 * np.array([[1 + 1j, -1 - 1j], [1 + 1j, 1 + 1j]], dtype=complex),
}


def _rx(t: float) -> np.ndarray:
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _ry(t: float) -> np.ndarray:
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz(t: float) -> np.ndarray:
    return np.array([[np.exp(-0.5j * t), 0], [0, np.exp(0.5j * t)]], dtype=complex)


def _u3(t: float, p: float, l: float) -> np.ndarray:
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array(
        [[c, -np.exp(1j * l) * s],
         [np.exp(1j * p) * s, np.exp(1j * (p + l)) * c]],
        dtype=complex,
    )


# Two-qubit basis: b = bit(qubits[1])*2 + bit(qubits[0]).
# CNOT: control = qubits[0], target = qubits[1].
_CNOT = np.array(
    [[1, 0, 0, 0],
     [0, 0, 0, 1],
     [0, 0, 1, 0],
     [0, 1, 0, 0]], dtype=complex)
_CZ = np.diag([1, 1, 1, -1]).astype(complex)
_SWAP = np.array(
    [[1, 0, 0, 0],
     [0, 0, 1, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1]], dtype=complex)


def gate_matrix(kind: GateKind, params: tuple[float, ...] = (),
                diag: tuple[complex, complex] | None = None) -> np.ndarray:
    """Matrix of a gate kind (2x2 for single-qubit, 4x4 for two-qubit)."""
    if kind in _FIXED_1Q:
        return _FIXED_1Q[kind].copy()
    if kind is GateKind.RX:
        return _rx(params[0])
    if kind is GateKind.RY:
        return _ry(params[0])
    if kind is GateKind.RZ:
        return _rz(params[0])
    if kind is GateKind.U3:
        return _u3(*params)
    if kind is GateKind.CNOT:
        return _CNOT.copy()
    if kind is GateKind.CZ:
        return _CZ.copy()
    if kind is GateKind.SWAP:
        return _SWAP.copy()
    if kind is GateKind.DIAG1:
        if diag is None:
            raise ValueError("DIAG1 requires two diagonal entries")
        return np.diag([complex(diag[0]), complex(diag[1])])
    raise ValueError(f"unknown gate kind {kind!r}")


@dataclass(frozen=True)
class Gate:
    """One gate application: kind, real-angle params, qubit indices.

    DIAG1 additionally carries its two (possibly non-unitary) diagonal
    entries in `diag`; every other kind must be unitary to 1e-12.
    """
    kind: GateKind
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()
    diag: tuple[complex, complex] | None = None

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        n_q = 2 if self.kind in TWO_QUBIT_KINDS else 1
        if len(self.qubits) != n_q:
            raise ValueError(f"{self.kind.value} takes {n_q} qubit(s), got {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"duplicate qubit indices in {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise ValueError(f"negative qubit index in {self.qubits}")
        want = N_PARAMS.get(self.kind, 0)
        if len(self.params) != want:
            raise ValueError(f"{self.kind.value} takes {want} angle(s), got {len(self.params)}")
        if self.kind is GateKind.DIAG1:
            if self.diag is None or len(self.diag) != 2:
                raise ValueError("DIAG1 requires exactly two diagonal entries")
            object.__setattr__(self, "diag", (complex(self.diag[0]), complex(self.diag[1])))
            if not all(np.isfinite([d.real, d.imag]).all() for d in self.diag):
                raise ValueError("DIAG1 entries must be finite")
        else:
            if self.diag is not None:
                raise ValueError("diag entries only valid for DIAG1")
            m = self.matrix
            if not np.allclose(m.conj().T @ m, np.eye(m.shape[0]), atol=1e-12):
                raise ValueError(f"{self.kind.value}{self.params} is not unitary to 1e-12")

    @property
    def matrix(self) -> np.ndarray:
        return gate_matrix(self.kind, self.params, self.diag)

    @property
    def is_diagonal(self) -> bool:
        return self.kind in DIAGONAL_KINDS
