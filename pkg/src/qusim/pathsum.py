"""Path-sum engine: decompose cross-partition CZ gates into diagonal
single-qubit factors and sum products of subcircuit amplitudes.

A CZ between partitions is replaced, for a path variable s in {-1, +1}, by
the diagonal operator diag(e^{i(xs - pi/4)}, e^{-i(xs - pi/4)}) on each of
its two qubits, with x = pi/4 - (i/2) ln(1 + sqrt 2) (a solution of
cos 2x = i); the per-gate factor 1/2 is applied once per path as a 2^-S
prefactor. Summing the product of subcircuit amplitudes over all 2^S
assignments reconstructs any requested amplitude of the full circuit.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit
from .gates import Gate, GateKind, TWO_QUBIT_KINDS
from . import statevector as sv

# branch of cos(2x) = i used throughout; other branches also reproduce CZ
X_SOLUTION = math.pi / 4 - 0.5j * math.log(1.0 + math.sqrt(2.0))


@dataclass(frozen=True)
class PartitionPlan:
    partitions: tuple[tuple[int, ...], ...]
    subspace_dims: tuple[int, ...]
    cut_gates: tuple[int, ...]  # gate indices of CZs crossing partitions

    @property
    def S(self) -> int:
        return len(self.cut_gates)

    @property
    def P(self) -> int:
        return len(self.partitions)


@dataclass(frozen=True)
class PathAssignment:
    s: tuple[int, ...]  # values in {-1, +1}

    def __post_init__(self):
        if any(v not in (-1, 1) for v in self.s):
            raise ValueError("assignment values must be -1 or +1")


@dataclass(frozen=True)
class Subcircuit:
    """Gates of one partition, re-indexed to partition-local qubits."""
    partition_index: int
    n_qubits: int
    gates: tuple[Gate, ...]
    qubits: tuple[int, ...]  # local index -> global qubit label


@dataclass
class PathStats:
    paths_evaluated: int = 0
    subcircuit_evals: int = 0


def parse_partition_spec(spec: str, n_qubits: int) -> list[list[int]]:
    """Parse a spec like "0-20;21-41" or "0,2;1,3" into qubit blocks."""
    blocks: list[list[int]] = []
    for part in spec.split(";"):
        block: list[int] = []
        for item in part.split(","):
            item = item.strip()
            if not item:
                continue
            if "-" in item:
                lo, hi = item.split("-", 1)
                block.extend(range(int(lo), int(hi) + 1))
            else:
                block.append(int(item))
        if block:
            blocks.append(block)
    if not blocks:
        raise ValueError(f"empty partition spec {spec!r}")
    return blocks


def default_bisection(n_qubits: int) -> list[list[int]]:
    """Contiguous halves (the default when no partition spec is given)."""
    half = n_qubits // 2
    if half == 0:
        return [list(range(n_qubits))]
    return [list(range(half)), list(range(half, n_qubits))]


def make_partition_plan(c: Circuit, blocks: list[list[int]]) -> PartitionPlan:
    """Identify the CZ gates crossing the given qubit blocks.

    The circuit must already be in single-qubit + CZ form.
    """
    seen: set[int] = set()
    for block in blocks:
        for q in block:
            if q in seen:
                raise ValueError(f"qubit {q} appears in more than one block")
            if not 0 <= q < c.n_qubits:
                raise ValueError(f"qubit {q} out of range")
            seen.add(q)
    if len(seen) != c.n_qubits:
        missing = sorted(set(range(c.n_qubits)) - seen)
        raise ValueError(f"blocks miss qubits {missing}")
    owner = {q: p for p, block in enumerate(blocks) for q in block}
    cut: list[int] = []
    for i, g in enumerate(c.gates):
        if g.kind in TWO_QUBIT_KINDS and g.kind is not GateKind.CZ:
            raise ValueError(
                f"gate {i} is {g.kind.value}; rewrite to the CZ basis first")
        if g.kind is GateKind.CZ and owner[g.qubits[0]] != owner[g.qubits[1]]:
            cut.append(i)
    parts = tuple(tuple(b) for b in blocks)
    return PartitionPlan(parts, tuple(1 << len(b) for b in parts), tuple(cut))


def cz_path_gates(assignment_value: int) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal entries of the two single-qubit factors replacing one CZ for
    one path value; identical on both endpoints. The 1/2 per decomposed gate
    is applied separately as a 2^-S path prefactor."""
    if assignment_value not in (-1, 1):
        raise ValueError("assignment value must be -1 or +1")
    phase = X_SOLUTION * assignment_value - math.pi / 4
    d = np.array([cmath.exp(1j * phase), cmath.exp(-1j * phase)], dtype=complex)
    return d, d


def split_circuit(c: Circuit, plan: PartitionPlan,
                  a: PathAssignment) -> list[Subcircuit]:
    """Restrict the circuit to each partition under one path assignment.

    Intra-partition gates pass through (with local qubit indices); every cut
    CZ becomes one DIAG1 factor on each endpoint, placed where the CZ was.
    """
    if len(a.s) != plan.S:
        raise ValueError(f"assignment has {len(a.s)} values, plan cuts {plan.S} gates")
    local = {}
    owner = {}
    for p, block in enumerate(plan.partitions):
        for j, q in enumerate(block):
            local[q] = j
            owner[q] = p
    gate_lists: list[list[Gate]] = [[] for _ in plan.partitions]
    cut_pos = {gi: k for k, gi in enumerate(plan.cut_gates)}
    for i, g in enumerate(c.gates):
        if i in cut_pos:
            d, _ = cz_path_gates(a.s[cut_pos[i]])
            for q in g.qubits:
                gate_lists[owner[q]].append(
                    Gate(GateKind.DIAG1, (local[q],), diag=(d[0], d[1])))
            continue
        p = owner[g.qubits[0]]
        gate_lists[p].append(Gate(g.kind, tuple(local[q] for q in g.qubits),
                                  g.params, g.diag))
    return [Subcircuit(p, len(block), tuple(gate_lists[p]), tuple(block))
            for p, block in enumerate(plan.partitions)]


def eval_subcircuit(w: Subcircuit, targets_local: list[str],
                    workers: int = 1) -> np.ndarray:
    """<z_p| W_p |0_p> for each partition-local bitstring z_p.

    The vector W_p|0_p> is built once and all targets are read from it;
    DIAG1 factors make it unnormalized, which is expected.
    """
    state = sv.init_state(w.n_qubits) if w.n_qubits else None
    if w.n_qubits == 0:
        return np.ones(len(targets_local), dtype=complex)
    for g in w.gates:
        sv.apply_gate(state, g, workers)
    idx = []
    for z in targets_local:
        if len(z) != w.n_qubits:
            raise ValueError(
                f"target width {len(z)} != partition width {w.n_qubits}")
        idx.append(sv.bitstring_index(z))
    return state.amps[np.asarray(idx, dtype=np.int64)]


@dataclass(frozen=True)
class CoefficientRequest:
    targets: tuple[str, ...]

    @property
    def M(self) -> int:
        return len(self.targets)


def lexicographic_targets(n_qubits: int, m: int) -> list[str]:
    """The M lexicographically-first width-N bitstrings."""
    if m < 1:
        raise ValueError("M must be >= 1")
    m = min(m, 1 << n_qubits)
    return [format(i, f"0{n_qubits}b") for i in range(m)]


def _local_targets(plan: PartitionPlan, targets: tuple[str, ...]
                   ) -> list[list[str]]:
    """Per-partition restriction z_p of each full-width bitstring."""
    out = []
    for block in plan.partitions:
        out.append(["".join(z[q] for q in block) for z in targets])
    return out


def _pairwise_add(stack: list[tuple[int, np.ndarray]], level: int,
                  term: np.ndarray) -> None:
    # binary-counter pairwise reduction: deterministic summation order
    while stack and stack[-1][0] == level:
        _, prev = stack.pop()
        term = prev + term
        level += 1
    stack.append((level, term))


def compute_amplitudes(c: Circuit, plan: PartitionPlan,
                       req: CoefficientRequest, workers: int = 1,
                       stats: PathStats | None = None) -> list[complex]:
    """2^-S sum over all path assignments of the per-partition amplitude
    products, for each requested bitstring."""
    if req.M == 0:
        raise ValueError("at least one target is required")
    for z in req.targets:
        if len(z) != c.n_qubits:
            raise ValueError(f"target {z!r} has width {len(z)}, circuit has "
                             f"{c.n_qubits} qubits")
    locals_per_p = _local_targets(plan, req.targets)
    s_count = plan.S
    stack: list[tuple[int, np.ndarray]] = []
    for k in range(1 << s_count):
        # bit j of k == 0 -> s_j = +1
        assignment = PathAssignment(
            tuple(1 if not (k >> j) & 1 else -1 for j in range(s_count)))
        subs = split_circuit(c, plan, assignment)
        term = np.ones(req.M, dtype=complex)
        for w, tloc in zip(subs, locals_per_p):
            term = term * eval_subcircuit(w, tloc, workers)
            if stats is not None:
                stats.subcircuit_evals += 1
        if stats is not None:
            stats.paths_evaluated += 1
        _pairwise_add(stack, 0, term)
    total = stack[0][1]
    for _, part in stack[1:]:
        total = part + total
    total = total * (0.5 ** s_count)
    return [complex(v) for v in total]


def cost_estimate(plan: PartitionPlan, M: int, R: int, T: int) -> dict[str, float]:
    """Worst-case cost model: time 2^S * P * max(D_p, M) / (R * T),
    space R * max(D_p, M) (unitless)."""
    if min(M, R, T) < 1:
        raise ValueError("M, R and T must be >= 1")
    d_max = max(plan.subspace_dims)
    scale = max(d_max, M)
    return {
        "time_units": (2.0 ** plan.S) * plan.P * scale / (R * T),
        "space_units": float(R) * scale,
    }
