"""Circuit generators: uniform superposition, GHZ chain, and random 2D-grid
circuits in the CZ-tiling style used for hard sampling benchmarks.

Reproducibility: all randomness comes from numpy's Philox counter-based
64-bit generator keyed with the caller's seed, so generated circuits are
bitwise identical across runs and platforms.
"""
from __future__ import annotations

import numpy as np

from .circuit import Circuit
from .gates import Gate, GateKind


def rng_from_seed(seed: int) -> np.random.Generator:
    """The package-wide PRNG: Philox4x64 keyed by `seed`."""
    return np.random.Generator(np.random.Philox(key=seed & (2**64 - 1)))


def gen_uniform_superposition(n: int) -> Circuit:
    """One Hadamard per qubit: |0..0> -> uniform superposition over 2^n states."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Circuit(n, tuple(Gate(GateKind.H, (q,)) for q in range(n)),
                   name=f"superposition-{n}")


def gen_ghz_chain(n: int) -> Circuit:
    """H on qubit 0 followed by CNOT(i, i+1) for i = 0..n-2."""
    if n < 2:
        raise ValueError("n must be >= 2")
    gates = [Gate(GateKind.H, (0,))]
    gates += [Gate(GateKind.CNOT, (i, i + 1)) for i in range(n - 1)]
    return Circuit(n, tuple(gates), name=f"ghz-{n}")


def _cz_tiling(rows: int, cols: int, tiling: int) -> list[tuple[int, int]]:
    """CZ pairs of one of the 8 standard 2D-grid tilings.

    tiling 0..7 alternates horizontal and vertical neighbor links (horizontal
    first); offset = (tiling >> 1) % 4 selects the diagonal phase class of
    anchor sites.
    """
    dx = 1 - tiling % 2
    dy = 1 - dx
    offset = (tiling >> 1) % 4
    pairs = []
    for r in range(rows):
        for c in range(cols):
            r2, c2 = r + dy, c + dx
            if r2 >= rows or c2 >= cols:
                continue
            if (c * (2 - dx) + r * (2 - dy)) % 4 == offset:
                pairs.append((r * cols + c, r2 * cols + c2))
    return pairs


_SINGLE_CHOICES = (GateKind.T, GateKind.V, GateKind.VY)


def gen_random_circuit(rows: int, cols: int, depth: int, seed: int) -> Circuit:
    """Deterministic random grid circuit.

    Layer 0 is H on every qubit. Then `depth` cycles, each one CZ tiling
    (empty tilings are skipped); every qubit that had a CZ in the previous
    cycle and none in the current one receives a single-qubit gate from
    {T, X^1/2, Y^1/2}: the first such gate on a qubit is always T, later
    ones are drawn by the PRNG and never repeat that qubit's previous one.
    """
    n = rows * cols
    if n < 2:
        raise ValueError("grid must contain at least 2 qubits")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if not any(_cz_tiling(rows, cols, t) for t in range(8)):
        raise ValueError(f"no CZ tiling fits a {rows}x{cols} grid")

    rng = rng_from_seed(seed)
    gates = [Gate(GateKind.H, (q,)) for q in range(n)]
    prev_cz_qubits: set[int] = set()
    last_single: dict[int, GateKind] = {}
    tiling = 0
    for _ in range(depth):
        pairs = _cz_tiling(rows, cols, tiling % 8)
        while not pairs:
            tiling += 1
            pairs = _cz_tiling(rows, cols, tiling % 8)
        tiling += 1
        cz_qubits = {q for pair in pairs for q in pair}
        for q in sorted(prev_cz_qubits - cz_qubits):
            prev = last_single.get(q)
            if prev is None:
                kind = GateKind.T
            else:
                choices = [k for k in _SINGLE_CHOICES if k is not prev]
                kind = choices[int(rng.integers(len(choices)))]
            last_single[q] = kind
            gates.append(Gate(kind, (q,)))
        gates.extend(Gate(GateKind.CZ, pair) for pair in pairs)
        prev_cz_qubits = cz_qubits
    return Circuit(n, tuple(gates),
                   name=f"random-{rows}x{cols}-d{depth}-s{seed}")
