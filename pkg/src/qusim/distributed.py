"""Distributed state-vector execution over R = 2^r in-process ranks.

Each rank owns a block of 2^(N-r) amplitudes. A permutation maps logical
qubits to physical bit positions: positions 0..N-r-1 address bits inside a
rank's block ("local"), positions N-r..N-1 select the rank ("global").

Gate dispatch:
  - gates whose qubits are all local run inside each block;
  - diagonal gates are always local -- a global qubit only contributes a
    rank-dependent phase;
  - CNOT with a global control and local target is local (each rank knows
    its control bit);
  - anything else moves data: either a transient pair exchange for one gate
    or a permanent remap that swaps a global position with a local one.

Ranks execute deterministically in rank order inside one process; the
Transport records every inter-rank message so tests can audit traffic.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit
from .gates import Gate, GateKind, gate_matrix
from . import statevector as sv
from .statevector import StateVector

LOCAL = "local"
PAIR_EXCHANGE = "pair_exchange"
REMAP = "remap"

_AMP_BYTES = 16


@dataclass(frozen=True)
class CommPlan:
    kind: str
    partner_offsets: tuple[int, ...] = ()
    bytes_per_rank: int = 0

    def __post_init__(self):
        if (self.bytes_per_rank == 0) != (self.kind == LOCAL):
            raise ValueError("bytes_per_rank must be 0 exactly for local plans")


class Transport:
    """Point-to-point reliable transport with per-pair FIFO and byte audit."""

    def __init__(self):
        self.total_bytes = 0
        self.messages = 0
        self.bytes_by_pair: dict[tuple[int, int], int] = {}

    def record(self, src: int, dst: int, nbytes: int) -> None:
        self.total_bytes += nbytes
        self.messages += 1
        key = (src, dst)
        self.bytes_by_pair[key] = self.bytes_by_pair.get(key, 0) + nbytes


@dataclass
class DistributedState:
    n_qubits: int
    n_ranks: int
    rank_blocks: list[np.ndarray]
    pos_to_qubit: list[int]  # physical position -> logical qubit label
    transport: Transport = field(default_factory=Transport)
    remap_count: int = 0

    @property
    def r(self) -> int:
        return self.n_ranks.bit_length() - 1

    @property
    def local_bits(self) -> int:
        return self.n_qubits - self.r

    @property
    def perm(self) -> tuple[int, ...]:
        return tuple(self.pos_to_qubit)

    def pos_of(self, qubit: int) -> int:
        return self.pos_to_qubit.index(qubit)


def partition_state(n: int, ranks: int) -> DistributedState:
    """|0...0> split over `ranks` blocks; identity qubit mapping."""
    if ranks < 1 or ranks & (ranks - 1):
        raise ValueError(f"rank count must be a power of two, got {ranks}")
    r = ranks.bit_length() - 1
    if r > n:
        raise ValueError(f"{ranks} ranks need at least {r} qubits, got {n}")
    blocks = [np.zeros(1 << (n - r), dtype=np.complex128) for _ in range(ranks)]
    blocks[0][0] = 1.0
    return DistributedState(n, ranks, blocks, list(range(n)))


def gather(d: DistributedState, mem_budget: int | None = None) -> StateVector:
    """Concatenate blocks and unwind the qubit permutation."""
    need = sv.memory_bytes(d.n_qubits)
    if mem_budget is not None and need > mem_budget:
        raise sv.MemoryBudgetError(
            f"gathering {d.n_qubits} qubits needs {need} bytes, "
            f"budget is {mem_budget} bytes")
    full = np.concatenate(d.rank_blocks)
    if d.pos_to_qubit == list(range(d.n_qubits)):
        return StateVector(d.n_qubits, full)
    phys = np.arange(full.size, dtype=np.int64)
    logical = np.zeros_like(phys)
    for pos, qubit in enumerate(d.pos_to_qubit):
        logical |= ((phys >> pos) & 1) << qubit
    out = np.empty_like(full)
    out[logical] = full
    return StateVector(d.n_qubits, out)


# ---------------------------------------------------------------------------
# planning

def _is_local_without_comm(d: DistributedState, g: Gate) -> bool:
    m = d.local_bits
    positions = [d.pos_of(q) for q in g.qubits]
    if all(p < m for p in positions):
        return True
    if g.is_diagonal:
        return True
    if g.kind is GateKind.CNOT:
        # only the target mixes amplitudes; a global control is free
        return d.pos_of(g.qubits[1]) < m
    return False


def plan_gate(d: DistributedState, g: Gate) -> CommPlan:
    """Choose how a gate executes.

    Pair exchange and a one-position remap move the same half-block volume
    for a single gate, so the greedy one-gate-window policy prefers the
    transient pair exchange (it leaves the qubit mapping unchanged).
    """
    if _is_local_without_comm(d, g):
        return CommPlan(LOCAL)
    m = d.local_bits
    offsets = tuple(sorted(1 << (d.pos_of(q) - m)
                           for q in g.qubits if d.pos_of(q) >= m))
    half_block = max(1 << (m - 1), 1) if m >= 1 else 1
    n_moves = 3 if g.kind is GateKind.SWAP else 1
    return CommPlan(PAIR_EXCHANGE, offsets, half_block * _AMP_BYTES * n_moves)


# ---------------------------------------------------------------------------
# execution

def _record_pair_exchange(d: DistributedState, rank_a: int, rank_b: int) -> None:
    # layout-preserving exchange: compute-input halves out, results back
    half_bytes = max((1 << d.local_bits) // 2, 1) * _AMP_BYTES
    for _ in range(2):
        d.transport.record(rank_a, rank_b, half_bytes)
        d.transport.record(rank_b, rank_a, half_bytes)


def _exchange_apply_1q(d: DistributedState, gbit: int, u: np.ndarray,
                       control: tuple[str, int] | None = None,
                       workers: int = 1) -> None:
    """Apply a 2x2 operator across the rank-selecting bit `gbit`.

    `control` restricts the update: ("local", pos) masks block offsets,
    ("global", gbit_c) restricts to rank pairs whose shared bit is 1.
    """
    mask = 1 << gbit
    u00, u01, u10, u11 = u[0, 0], u[0, 1], u[1, 0], u[1, 1]
    for rank_a in range(d.n_ranks):
        if rank_a & mask:
            continue
        rank_b = rank_a | mask
        if control is not None and control[0] == "global":
            if not (rank_a >> control[1]) & 1:
                continue
        a, b = d.rank_blocks[rank_a], d.rank_blocks[rank_b]
        _record_pair_exchange(d, rank_a, rank_b)
        if control is not None and control[0] == "local":
            cview_a = a.reshape(-1, 2, 1 << control[1])
            cview_b = b.reshape(-1, 2, 1 << control[1])
            sa, sb = cview_a[:, 1, :], cview_b[:, 1, :]
            ta = sa.copy()
            sa[...] = u00 * ta + u01 * sb
            sb[...] = u10 * ta + u11 * sb
        else:
            ta = a.copy()
            a[...] = u00 * ta + u01 * b
            b[...] = u10 * ta + u11 * b


def _apply_diagonal_global(d: DistributedState, g: Gate) -> None:
    m = d.local_bits
    if g.kind is GateKind.CZ:
        pa, pb = (d.pos_of(q) for q in g.qubits)
        ga = pa - m if pa >= m else None
        gb = pb - m if pb >= m else None
        for rank, block in enumerate(d.rank_blocks):
            bit_a = (rank >> ga) & 1 if ga is not None else None
            bit_b = (rank >> gb) & 1 if gb is not None else None
            if bit_a == 0 or bit_b == 0:
                continue
            if bit_a == 1 and bit_b == 1:
                block *= -1.0
            else:
                local_pos = pa if ga is None else pb
                view = block.reshape(-1, 2, 1 << local_pos)
                view[:, 1, :] *= -1.0
        return
    # single-qubit diagonal on a global position: rank bit picks the phase
    mat = g.matrix
    d0, d1 = mat[0, 0], mat[1, 1]
    gbit = d.pos_of(g.qubits[0]) - m
    for rank, block in enumerate(d.rank_blocks):
        factor = d1 if (rank >> gbit) & 1 else d0
        if factor != 1.0:
            block *= factor


_X_MAT = gate_matrix(GateKind.X)


def apply_gate_distributed(d: DistributedState, g: Gate,
                           plan: CommPlan | None = None,
                           workers: int = 1) -> DistributedState:
    """Execute one gate under its communication plan (in place)."""
    for q in g.qubits:
        if q >= d.n_qubits:
            raise ValueError(f"qubit {q} out of range")
    if plan is None:
        plan = plan_gate(d, g)
    m = d.local_bits
    positions = [d.pos_of(q) for q in g.qubits]

    if plan.kind == LOCAL:
        if all(p < m for p in positions):
            local_gate = Gate(g.kind, tuple(positions), g.params, g.diag)
            for block in d.rank_blocks:
                sv.apply_gate(StateVector(m, block), local_gate, workers)
        elif g.is_diagonal:
            _apply_diagonal_global(d, g)
        elif g.kind is GateKind.CNOT:
            # global control, local target: ranks with control bit 1 flip
            cbit = positions[0] - m
            tpos = positions[1]
            for rank, block in enumerate(d.rank_blocks):
                if (rank >> cbit) & 1:
                    sv._apply_1q_x(block, tpos, workers)
        else:  # pragma: no cover
            raise AssertionError("unplannable local gate")
        return d

    if plan.kind == REMAP:
        gpos = next(p for p in positions if p >= m)
        # evict the local position holding the lowest-numbered idle qubit
        evict_pos = min((p for p in range(m) if p not in positions),
                        key=lambda p: d.pos_to_qubit[p])
        remap_qubits(d, evict_pos, gpos)
        return apply_gate_distributed(d, g, workers=workers)

    # pair exchange
    if g.kind is GateKind.SWAP:
        a, b = g.qubits
        for cn in ((a, b), (b, a), (a, b)):
            apply_gate_distributed(d, Gate(GateKind.CNOT, cn), workers=workers)
        return d
    if g.kind is GateKind.CNOT:
        cpos, tpos = positions
        gbit = tpos - m
        control = ("global", cpos - m) if cpos >= m else ("local", cpos)
        _exchange_apply_1q(d, gbit, _X_MAT, control, workers)
        return d
    # single-qubit non-diagonal on a global position
    _exchange_apply_1q(d, positions[0] - m, g.matrix, None, workers)
    return d


def remap_qubits(d: DistributedState, pos_a: int, pos_b: int) -> DistributedState:
    """Swap the roles of a local and a global physical position (in place)."""
    if pos_a == pos_b:
        raise ValueError("positions must differ")
    for p in (pos_a, pos_b):
        if not 0 <= p < d.n_qubits:
            raise ValueError(f"position {p} out of range")
    m = d.local_bits
    lpos, gpos = (pos_a, pos_b) if pos_a < m else (pos_b, pos_a)
    if not (lpos < m <= gpos):
        raise ValueError("exactly one position must be local and one global")
    gbit = gpos - m
    mask = 1 << gbit
    half_bytes = max((1 << m) // 2, 1) * _AMP_BYTES
    for rank_a in range(d.n_ranks):
        if rank_a & mask:
            continue
        rank_b = rank_a | mask
        va = d.rank_blocks[rank_a].reshape(-1, 2, 1 << lpos)
        vb = d.rank_blocks[rank_b].reshape(-1, 2, 1 << lpos)
        tmp = va[:, 1, :].copy()
        va[:, 1, :] = vb[:, 0, :]
        vb[:, 0, :] = tmp
        d.transport.record(rank_a, rank_b, half_bytes)
        d.transport.record(rank_b, rank_a, half_bytes)
    d.pos_to_qubit[lpos], d.pos_to_qubit[gpos] = \
        d.pos_to_qubit[gpos], d.pos_to_qubit[lpos]
    d.remap_count += 1
    return d


def run_circuit_distributed(c: Circuit, ranks: int,
                            workers: int = 1) -> DistributedState:
    d = partition_state(c.n_qubits, ranks)
    for g in c.gates:
        apply_gate_distributed(d, g, workers=workers)
    return d
