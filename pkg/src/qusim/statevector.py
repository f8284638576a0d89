"""Numerically exact full state-vector engine.

The state of N qubits is 2^N complex128 amplitudes; qubit 0 is the
least-significant bit of an amplitude index. Gates are applied in place as
strided pair/quadruple updates -- no dense N-qubit operator is ever built.
CZ, CNOT and the diagonal gates use specialized kernels (sign flips, swaps
and scalar multiplies).
"""
from __future__ import annotations

import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit
from .gates import Gate, GateKind

_DUMP_MAGIC = b"QUSIMSV"
_DUMP_VERSION = 1


class MemoryBudgetError(MemoryError):
    pass


@dataclass
class StateVector:
    n_qubits: int
    amps: np.ndarray  # complex128, length 2**n_qubits

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amps.copy())


def memory_bytes(n: int) -> int:
    """Amplitude storage for n qubits: 2^(n+4) bytes (2^n complex128)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return 1 << (n + 4)


def init_state(n: int, mem_budget: int | None = None) -> StateVector:
    """|0...0>: amplitude 0 is 1, all others 0."""
    if n < 1:
        raise ValueError("n must be >= 1")
    need = memory_bytes(n)
    if mem_budget is not None and need > mem_budget:
        raise MemoryBudgetError(
            f"{n} qubits need {need} bytes of amplitude storage, "
            f"budget is {mem_budget} bytes")
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(n, amps)


def norm(s: StateVector) -> float:
    return float(np.sqrt(np.sum(np.abs(s.amps) ** 2)))


# ---------------------------------------------------------------------------
# kernels

def _chunks(n_rows: int, workers: int):
    workers = max(1, min(workers, n_rows))
    step = -(-n_rows // workers)
    return [(lo, min(lo + step, n_rows)) for lo in range(0, n_rows, step)]


def _run_chunked(n_rows: int, workers: int, fn) -> None:
    spans = _chunks(n_rows, workers)
    if len(spans) == 1:
        fn(*spans[0])
        return
    # numpy releases the GIL inside array ops, so plain threads scale for
    # these bandwidth-bound kernels; chunks touch disjoint rows.
    with ThreadPoolExecutor(max_workers=len(spans)) as pool:
        list(pool.map(lambda span: fn(*span), spans))


def _view1(psi: np.ndarray, q: int) -> np.ndarray:
    return psi.reshape(-1, 2, 1 << q)


def _apply_1q_diag(psi: np.ndarray, q: int, d0: complex, d1: complex,
                   workers: int = 1) -> None:
    v = _view1(psi, q)

    def kernel(lo, hi):
        if d0 != 1.0:
            v[lo:hi, 0, :] *= d0
        if d1 != 1.0:
            v[lo:hi, 1, :] *= d1

    _run_chunked(v.shape[0], workers, kernel)


def _apply_1q_x(psi: np.ndarray, q: int, workers: int = 1) -> None:
    v = _view1(psi, q)

    def kernel(lo, hi):
        a = v[lo:hi, 0, :].copy()
        v[lo:hi, 0, :] = v[lo:hi, 1, :]
        v[lo:hi, 1, :] = a

    _run_chunked(v.shape[0], workers, kernel)


def _apply_1q_generic(psi: np.ndarray, q: int, u: np.ndarray,
                      workers: int = 1) -> None:
    v = _view1(psi, q)
    u00, u01, u10, u11 = u[0, 0], u[0, 1], u[1, 0], u[1, 1]

    def kernel(lo, hi):
        a = v[lo:hi, 0, :].copy()
        b = v[lo:hi, 1, :]
        v[lo:hi, 0, :] = u00 * a + u01 * b
        v[lo:hi, 1, :] = u10 * a + u11 * b

    _run_chunked(v.shape[0], workers, kernel)


def _view2(psi: np.ndarray, qa: int, qb: int) -> tuple[np.ndarray, bool]:
    """5-axis view (rows, bit_hi, mid, bit_lo, low); returns (view, a_is_hi)."""
    qh, ql = (qa, qb) if qa > qb else (qb, qa)
    v = psi.reshape(-1, 2, 1 << (qh - ql - 1), 2, 1 << ql)
    return v, qa > qb


def _apply_cz(psi: np.ndarray, qa: int, qb: int, workers: int = 1) -> None:
    v, _ = _view2(psi, qa, qb)

    def kernel(lo, hi):
        v[lo:hi, 1, :, 1, :] *= -1.0

    _run_chunked(v.shape[0], workers, kernel)


def _apply_cnot(psi: np.ndarray, control: int, target: int,
                workers: int = 1) -> None:
    v, control_is_hi = _view2(psi, control, target)
    # selecting the control bit drops one axis, so in the 4-axis sub-view the
    # target bit sits at axis 2 (low position) or axis 1 (high position)
    sub = v[:, 1, :, :, :] if control_is_hi else v[:, :, :, 1, :]
    t_axis = 2 if control_is_hi else 1
    i0 = [slice(None)] * 4
    i1 = [slice(None)] * 4
    i0[t_axis], i1[t_axis] = 0, 1

    def kernel(lo, hi):
        s0 = (slice(lo, hi), *i0[1:])
        s1 = (slice(lo, hi), *i1[1:])
        a = sub[s0].copy()
        sub[s0] = sub[s1]
        sub[s1] = a

    _run_chunked(sub.shape[0], workers, kernel)


def _apply_swap(psi: np.ndarray, qa: int, qb: int, workers: int = 1) -> None:
    v, _ = _view2(psi, qa, qb)

    def kernel(lo, hi):
        a = v[lo:hi, 0, :, 1, :].copy()
        v[lo:hi, 0, :, 1, :] = v[lo:hi, 1, :, 0, :]
        v[lo:hi, 1, :, 0, :] = a

    _run_chunked(v.shape[0], workers, kernel)


def _apply_2q_generic(psi: np.ndarray, qubits: tuple[int, int],
                      u: np.ndarray) -> None:
    """Generic 4x4 kernel; u is in the basis b = bit(qubits[1])*2 + bit(qubits[0])."""
    q0, q1 = qubits
    n = psi.shape[0]
    idx = np.arange(n)
    base = idx[((idx >> q0) & 1 == 0) & ((idx >> q1) & 1 == 0)]
    cols = [base, base | (1 << q0), base | (1 << q1), base | (1 << q0) | (1 << q1)]
    vec = np.stack([psi[c] for c in cols])
    res = u @ vec
    for c, row in zip(cols, res):
        psi[c] = row


_DIAG_ENTRIES = {
    GateKind.I: (1.0, 1.0),
    GateKind.Z: (1.0, -1.0),
    GateKind.S: (1.0, 1j),
    GateKind.SDG: (1.0, -1j),
    GateKind.T: (1.0, np.exp(1j * np.pi / 4)),
    GateKind.TDG: (1.0, np.exp(-1j * np.pi / 4)),
}


def apply_gate(s: StateVector, g: Gate, workers: int = 1) -> StateVector:
    """Apply one gate in place (the mutated state is also returned)."""
    for q in g.qubits:
        if q >= s.n_qubits:
            raise ValueError(f"qubit {q} out of range for {s.n_qubits}-qubit state")
    psi = s.amps
    k = g.kind
    if k in _DIAG_ENTRIES:
        d0, d1 = _DIAG_ENTRIES[k]
        _apply_1q_diag(psi, g.qubits[0], d0, d1, workers)
    elif k is GateKind.RZ:
        t = g.params[0]
        _apply_1q_diag(psi, g.qubits[0], np.exp(-0.5j * t), np.exp(0.5j * t), workers)
    elif k is GateKind.DIAG1:
        _apply_1q_diag(psi, g.qubits[0], g.diag[0], g.diag[1], workers)
    elif k is GateKind.X:
        _apply_1q_x(psi, g.qubits[0], workers)
    elif k is GateKind.CZ:
        _apply_cz(psi, *g.qubits, workers)
    elif k is GateKind.CNOT:
        _apply_cnot(psi, *g.qubits, workers)
    elif k is GateKind.SWAP:
        _apply_swap(psi, *g.qubits, workers)
    elif k in (GateKind.H, GateKind.Y, GateKind.V, GateKind.VY,
               GateKind.RX, GateKind.RY, GateKind.U3):
        _apply_1q_generic(psi, g.qubits[0], g.matrix, workers)
    else:  # pragma: no cover - all kinds handled above
        raise ValueError(f"no kernel for gate kind {k!r}")
    return s


def run_circuit(c: Circuit, workers: int = 1,
                mem_budget: int | None = None) -> StateVector:
    """init_state then apply every gate in order."""
    s = init_state(c.n_qubits, mem_budget)
    for g in c.gates:
        apply_gate(s, g, workers)
    return s


# ---------------------------------------------------------------------------
# observables and queries

def expectation(s: StateVector, axis: str, qubit: int) -> float:
    """<Q_axis(qubit)> = (1 - <sigma^axis>)/2, a real value in [0, 1].

    <sigma^z> = P(bit=0) - P(bit=1); with z = sum over pairs of
    conj(a_{bit=0}) * a_{bit=1}: <sigma^x> = 2 Re z and <sigma^y> = 2 Im z
    (sign convention sigma^y = [[0, -i], [i, 0]]).
    """
    if not 0 <= qubit < s.n_qubits:
        raise ValueError(f"qubit {qubit} out of range")
    v = _view1(s.amps, qubit)
    if axis == "z":
        p0 = np.sum(np.abs(v[:, 0, :]) ** 2)
        p1 = np.sum(np.abs(v[:, 1, :]) ** 2)
        sigma = float(p0 - p1)
    elif axis in ("x", "y"):
        cross = np.sum(np.conj(v[:, 0, :]) * v[:, 1, :])
        sigma = 2.0 * (cross.real if axis == "x" else cross.imag)
    else:
        raise ValueError(f"axis must be x, y or z, got {axis!r}")
    return (1.0 - sigma) / 2.0


def expectation_report(s: StateVector) -> dict[str, list[float]]:
    """Per-qubit <Q_x>, <Q_y>, <Q_z> triples for all qubits."""
    return {axis: [expectation(s, axis, q) for q in range(s.n_qubits)]
            for axis in ("x", "y", "z")}


def bitstring_index(z: str) -> int:
    """Index of bitstring z; character k of z is the value of qubit k (LSB first)."""
    if any(ch not in "01" for ch in z):
        raise ValueError(f"bitstring must be over {{0,1}}, got {z!r}")
    return sum(1 << k for k, ch in enumerate(z) if ch == "1")


def index_bitstring(i: int, n: int) -> str:
    return "".join("1" if (i >> k) & 1 else "0" for k in range(n))


def amplitude(s: StateVector, z: str) -> complex:
    """Amplitude of basis state z (qubit 0 = first character = LSB)."""
    if len(z) != s.n_qubits:
        raise ValueError(f"bitstring length {len(z)} != {s.n_qubits} qubits")
    return complex(s.amps[bitstring_index(z)])


def sample(s: StateVector, shots: int, seed: int) -> dict[str, int]:
    """Multinomial bitstring counts from |amps|^2; deterministic per seed."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    probs = np.abs(s.amps) ** 2
    total = probs.sum()
    if abs(total - 1.0) > 1e-6:
        raise ValueError(f"state is not normalized (norm^2 = {total})")
    rng = np.random.Generator(np.random.Philox(key=seed & (2**64 - 1)))
    counts = rng.multinomial(shots, probs / total)
    nz = np.nonzero(counts)[0]
    return {index_bitstring(int(i), s.n_qubits): int(counts[i]) for i in nz}


# ---------------------------------------------------------------------------
# binary dump format

def dump_state(s: StateVector) -> bytes:
    """16-byte header (magic, version, N) then little-endian (re, im) pairs."""
    header = struct.pack("<7sBII", _DUMP_MAGIC, 0, _DUMP_VERSION, s.n_qubits)
    body = np.ascontiguousarray(s.amps, dtype="<c16").tobytes()
    return header + body


def load_state(data: bytes) -> StateVector:
    magic, _, version, n = struct.unpack_from("<7sBII", data)
    if magic != _DUMP_MAGIC:
        raise ValueError("bad state dump magic")
    if version != _DUMP_VERSION:
        raise ValueError(f"unsupported dump version {version}")
    amps = np.frombuffer(data[16:], dtype="<c16").astype(np.complex128)
    if amps.size != 1 << n:
        raise ValueError("dump body size does not match qubit count")
    return StateVector(n, amps)
