import numpy as np

from qusim.circuit import compute_depth
from qusim.gates import GateKind
from qusim.generate import (gen_ghz_chain, gen_random_circuit,
                            gen_uniform_superposition, rng_from_seed)
from qusim import statevector as sv


def test_superposition_structure():
    c = gen_uniform_superposition(5)
    assert len(c.gates) == 5
    assert all(g.kind is GateKind.H for g in c.gates)
    s = sv.run_circuit(c)
    assert np.allclose(s.amps, np.full(32, 1 / np.sqrt(32)), atol=1e-14)


def test_ghz_structure_and_state():
    c = gen_ghz_chain(4)
    assert c.gates[0].kind is GateKind.H and c.gates[0].qubits == (0,)
    assert [g.qubits for g in c.gates[1:]] == [(0, 1), (1, 2), (2, 3)]
    s = sv.run_circuit(c)
    expect = np.zeros(16, dtype=complex)
    expect[0] = expect[15] = 1 / np.sqrt(2)
    assert np.max(np.abs(s.amps - expect)) < 1e-14


def test_random_circuit_deterministic():
    a = gen_random_circuit(2, 3, 9, seed=5)
    b = gen_random_circuit(2, 3, 9, seed=5)
    assert a.gates == b.gates
    c = gen_random_circuit(2, 3, 9, seed=6)
    assert a.gates != c.gates


def test_random_circuit_1x2_depth1():
    # smallest grid: only horizontal tilings exist, so the first cycle is
    # the single CZ link after the opening Hadamard layer
    c = gen_random_circuit(1, 2, 1, seed=0)
    kinds = [(g.kind, g.qubits) for g in c.gates]
    assert kinds == [(GateKind.H, (0,)), (GateKind.H, (1,)),
                     (GateKind.CZ, (0, 1))]


def test_random_circuit_layer0_is_all_h():
    c = gen_random_circuit(2, 4, 6, seed=11)
    assert all(g.kind is GateKind.H for g in c.gates[:8])
    assert {g.qubits[0] for g in c.gates[:8]} == set(range(8))


def test_random_circuit_single_qubit_gate_rules():
    c = gen_random_circuit(2, 4, 12, seed=4)
    first_single = {}
    prev_single = {}
    for g in c.gates:
        if g.kind in (GateKind.T, GateKind.V, GateKind.VY):
            q = g.qubits[0]
            if q not in first_single:
                # the first single-qubit gate on a qubit is always T
                assert g.kind is GateKind.T
                first_single[q] = g.kind
            else:
                # never repeats the qubit's previous single-qubit gate
                assert g.kind is not prev_single[q]
            prev_single[q] = g.kind


def test_random_circuit_depth_accounting():
    # the opening H layer adds exactly one layer on top of the cycles
    for depth in (1, 4, 10):
        c = gen_random_circuit(2, 3, depth, seed=2)
        assert compute_depth(c).depth == depth + 1


def test_rng_is_philox_and_stable():
    g = rng_from_seed(123)
    assert isinstance(g.bit_generator, np.random.Philox)
    assert rng_from_seed(123).integers(1 << 30) == g.integers(1 << 30)
