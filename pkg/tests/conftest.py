"""Shared test helpers: a dense brute-force oracle and circuit generators.

The oracle builds the full 2^N x 2^N operator of every gate and multiplies
state vectors with it -- deliberately independent of the engine kernels, so
agreement is meaningful.
"""
import numpy as np

from qusim.circuit import Circuit
from qusim.gates import Gate, GateKind
from qusim.generate import rng_from_seed


def embed_gate(g: Gate, n: int) -> np.ndarray:
    """Dense 2^n x 2^n operator for one gate (qubit 0 = LSB of the index)."""
    m = g.matrix
    k = len(g.qubits)
    dim = 1 << n
    clear = 0
    for q in g.qubits:
        clear |= 1 << q
    u = np.zeros((dim, dim), dtype=complex)
    for j in range(dim):
        sub_j = 0
        for t, q in enumerate(g.qubits):
            sub_j |= ((j >> q) & 1) << t
        base = j & ~clear
        for sub_i in range(1 << k):
            i = base
            for t, q in enumerate(g.qubits):
                if (sub_i >> t) & 1:
                    i |= 1 << q
            u[i, j] = m[sub_i, sub_j]
    return u


def oracle_state(c: Circuit) -> np.ndarray:
    """Run a circuit by dense matrix-vector products (slow, trusted)."""
    psi = np.zeros(1 << c.n_qubits, dtype=complex)
    psi[0] = 1.0
    for g in c.gates:
        psi = embed_gate(g, c.n_qubits) @ psi
    return psi


def oracle_unitary(c: Circuit) -> np.ndarray:
    u = np.eye(1 << c.n_qubits, dtype=complex)
    for g in c.gates:
        u = embed_gate(g, c.n_qubits) @ u
    return u


# every parseable kind (DIAG1 is internal to the path-sum engine)
_SOUP_1Q = (GateKind.I, GateKind.X, GateKind.Y, GateKind.Z, GateKind.H,
            GateKind.S, GateKind.SDG, GateKind.T, GateKind.TDG,
            GateKind.V, GateKind.VY)
_SOUP_ROT = (GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.U3)
_SOUP_2Q = (GateKind.CNOT, GateKind.CZ, GateKind.SWAP)


def random_soup_circuit(n: int, n_gates: int, seed: int) -> Circuit:
    """Unstructured random circuit over the full parseable gate set."""
    rng = rng_from_seed(seed)
    gates = []
    for _ in range(n_gates):
        r = rng.integers(10)
        if r < 4:
            kind = _SOUP_1Q[int(rng.integers(len(_SOUP_1Q)))]
            gates.append(Gate(kind, (int(rng.integers(n)),)))
        elif r < 7:
            kind = _SOUP_ROT[int(rng.integers(len(_SOUP_ROT)))]
            n_params = 3 if kind is GateKind.U3 else 1
            params = tuple(float(a) for a in rng.uniform(-np.pi, np.pi, n_params))
            gates.append(Gate(kind, (int(rng.integers(n)),), params))
        elif n >= 2:
            kind = _SOUP_2Q[int(rng.integers(len(_SOUP_2Q)))]
            a, b = rng.choice(n, size=2, replace=False)
            gates.append(Gate(kind, (int(a), int(b))))
    return Circuit(n, tuple(gates), name=f"soup-{n}-g{n_gates}-s{seed}")
