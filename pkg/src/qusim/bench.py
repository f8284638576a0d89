"""Benchmark and validation workloads behind the CLI.

Timing wraps circuit execution only (no parsing, no result I/O); each
measurement is the median of 3 runs. "Operations" counts gates plus one
expectation-value measurement per qubit, because the scaling workload ends
with a measurement of every qubit's expectation values.
"""
from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, asdict, field

import numpy as np
import psutil

from .circuit import Circuit, rewrite_to_cz_basis
from .generate import gen_ghz_chain, gen_random_circuit, gen_uniform_superposition
from . import statevector as sv
from . import encoded as enc
from . import distributed as dist
from . import pathsum as ps

CSV_FIELDS = [
    "circuit", "n_qubits", "backend", "ranks", "threads", "partitions",
    "S", "M", "gate_count", "elapsed_seconds", "seconds_per_gate",
    "normalized_time", "peak_memory_bytes",
]


@dataclass
class BenchRecord:
    circuit: str
    n_qubits: int
    backend: str
    ranks: int
    threads: int
    partitions: str
    S: int
    M: int
    gate_count: int
    elapsed_seconds: float
    seconds_per_gate: float
    normalized_time: float
    peak_memory_bytes: int
    error: str = ""

    def csv_row(self) -> dict:
        d = asdict(self)
        d.pop("error")
        return d


def records_to_csv(records: list[BenchRecord]) -> str:
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=CSV_FIELDS)
    writer.writeheader()
    for rec in records:
        writer.writerow(rec.csv_row())
    return out.getvalue()


def _median3(fn) -> float:
    times = []
    for _ in range(3):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return sorted(times)[1]


def _rss() -> int:
    return psutil.Process().memory_info().rss


def run_ghz_workload(n: int, backend: str, ranks: int = 1, threads: int = 1,
                     mem_budget: int | None = None) -> tuple[float, int]:
    """GHZ chain plus expectation measurement of all qubits.

    Returns (median elapsed seconds, operation count = gates + n).
    """
    c = gen_ghz_chain(n)
    ops = len(c.gates) + n

    if backend == "exact":
        def work():
            s = sv.run_circuit(c, workers=threads, mem_budget=mem_budget)
            for q in range(n):
                sv.expectation(s, "z", q)
    elif backend == "adaptive":
        def work():
            e = enc.run_circuit_encoded(c, workers=threads)
            s = enc.decode_state(e)
            for q in range(n):
                sv.expectation(s, "z", q)
    elif backend == "distributed":
        def work():
            d = dist.run_circuit_distributed(c, ranks, workers=threads)
            s = dist.gather(d)
            for q in range(n):
                sv.expectation(s, "z", q)
    else:
        raise ValueError(f"unsupported backend for the GHZ sweep: {backend!r}")
    if mem_budget is not None and sv.memory_bytes(n) > mem_budget:
        raise sv.MemoryBudgetError(
            f"{n} qubits need {sv.memory_bytes(n)} bytes, budget {mem_budget}")
    return _median3(work), ops


def bench_ghz(n_min: int, n_max: int, backend: str, ranks: int, threads: int,
              normalize_at: int, double_threads: bool = False,
              mem_budget: int | None = None) -> list[BenchRecord]:
    """One record per N; normalized_time is relative to N = normalize_at.

    With double_threads, the thread count doubles with each added qubit
    (desk-scale weak scaling).
    """
    if not n_min <= normalize_at <= n_max:
        raise ValueError("need n_min <= normalize_at <= n_max")
    records = []
    for n in range(n_min, n_max + 1):
        t = threads * (1 << (n - n_min)) if double_threads else threads
        try:
            elapsed, ops = run_ghz_workload(n, backend, ranks, t, mem_budget)
            spg = elapsed / ops
            err = ""
        except sv.MemoryBudgetError as exc:
            elapsed, ops, spg, err = math.nan, n + n, math.nan, str(exc)
        records.append(BenchRecord(
            circuit=f"ghz-{n}", n_qubits=n, backend=backend, ranks=ranks,
            threads=t, partitions="", S=0, M=0, gate_count=ops,
            elapsed_seconds=elapsed, seconds_per_gate=spg,
            normalized_time=math.nan, peak_memory_bytes=_rss(), error=err))
    base = next(r for r in records if r.n_qubits == normalize_at)
    for rec in records:
        rec.normalized_time = rec.seconds_per_gate / base.seconds_per_gate
    return records


def bench_random(rows: int, cols: int, depth_min: int, depth_max: int,
                 partition_spec: str, m_coeffs: int, ranks: int, threads: int,
                 seed: int) -> list[BenchRecord]:
    """Path-sum depth sweep over random grid circuits; records S per row."""
    n = rows * cols
    blocks = ps.parse_partition_spec(partition_spec, n) if partition_spec \
        else ps.default_bisection(n)
    records = []
    base_spg = None
    for depth in range(depth_min, depth_max + 1):
        c = rewrite_to_cz_basis(gen_random_circuit(rows, cols, depth, seed))
        plan = ps.make_partition_plan(c, blocks)
        targets = ps.lexicographic_targets(n, m_coeffs)
        req = ps.CoefficientRequest(tuple(targets))
        ops = len(c.gates)
        elapsed = _median3(
            lambda: ps.compute_amplitudes(c, plan, req, workers=threads))
        spg = elapsed / ops
        if base_spg is None:
            base_spg = spg
        records.append(BenchRecord(
            circuit=c.name, n_qubits=n, backend="pathsum", ranks=ranks,
            threads=threads, partitions=partition_spec, S=plan.S,
            M=req.M, gate_count=ops, elapsed_seconds=elapsed,
            seconds_per_gate=spg, normalized_time=spg / base_spg,
            peak_memory_bytes=_rss()))
    return records


# ---------------------------------------------------------------------------
# validation suite

@dataclass
class Check:
    name: str
    expected: float
    observed: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return abs(self.observed - self.expected) <= self.tolerance


@dataclass
class ValidationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, expected: float, observed: float,
            tolerance: float) -> None:
        self.checks.append(Check(name, float(expected), float(observed),
                                 float(tolerance)))

    def rows(self) -> list[dict]:
        return [{"name": c.name, "expected": c.expected,
                 "observed": c.observed, "tolerance": c.tolerance,
                 "pass": c.passed} for c in self.checks]


def cz_reconstruction_error() -> float:
    """Entrywise error of rebuilding the CZ matrix from the two-path sum."""
    total = np.zeros((4, 4), dtype=complex)
    for s in (-1, 1):
        d, _ = ps.cz_path_gates(s)
        total += 0.5 * np.kron(np.diag(d), np.diag(d))
    cz = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)
    return float(np.max(np.abs(total - cz)))


def validate(max_qubits: int = 12) -> ValidationReport:
    """Fixed validation suite over circuits with known exact outcomes."""
    rep = ValidationReport()
    inv_sqrt2 = 1.0 / math.sqrt(2.0)

    # uniform superposition expectation values, exact and adaptive
    n_sup = min(max_qubits, 12)
    c_sup = gen_uniform_superposition(n_sup)
    s_exact = sv.run_circuit(c_sup)
    s_adapt = enc.decode_state(enc.run_circuit_encoded(c_sup))
    for label, state in (("exact", s_exact), ("adaptive", s_adapt)):
        for axis, want in (("x", 0.0), ("y", 0.5), ("z", 0.5)):
            worst = max(sv.expectation(state, axis, q) for q in range(n_sup))
            best = min(sv.expectation(state, axis, q) for q in range(n_sup))
            obs = worst if abs(worst - want) >= abs(best - want) else best
            rep.add(f"superposition-{n_sup} <Q_{axis}> ({label})", want, obs, 1e-12)

    # GHZ amplitudes: exact, adaptive, distributed, pathsum
    n_ghz = min(max_qubits, 10)
    c_ghz = gen_ghz_chain(n_ghz)
    s_ghz = sv.run_circuit(c_ghz)
    for z in ("0" * n_ghz, "1" * n_ghz):
        rep.add(f"ghz-{n_ghz} amp {z} (exact)", inv_sqrt2,
                abs(sv.amplitude(s_ghz, z)), 1e-12)
    rep.add(f"ghz-{n_ghz} adaptive max-abs vs exact", 0.0,
            enc.max_abs_error(enc.run_circuit_encoded(c_ghz), s_ghz), 1e-12)
    for ranks in (1, 2, 4):
        d = dist.run_circuit_distributed(c_ghz, ranks)
        err = float(np.max(np.abs(dist.gather(d).amps - s_ghz.amps)))
        rep.add(f"ghz-{n_ghz} distributed R={ranks} vs exact", 0.0, err, 1e-12)
    cz_c = rewrite_to_cz_basis(c_ghz)
    plan = ps.make_partition_plan(cz_c, ps.default_bisection(n_ghz))
    amps = ps.compute_amplitudes(
        cz_c, plan, ps.CoefficientRequest(("0" * n_ghz, "1" * n_ghz)))
    for z, a in zip(("0" * n_ghz, "1" * n_ghz), amps):
        rep.add(f"ghz-{n_ghz} amp {z} (pathsum)", inv_sqrt2, abs(a), 1e-10)

    # CZ decomposition identity
    rep.add("cz two-path reconstruction", 0.0, cz_reconstruction_error(), 1e-12)

    # adaptive precision on a random circuit
    n_rnd = min(max_qubits, 10)
    cols = n_rnd // 2
    c_rnd = gen_random_circuit(2, cols, 12, seed=1234)
    s_rnd = sv.run_circuit(c_rnd)
    rep.add(f"random-{c_rnd.n_qubits} adaptive max-abs vs exact", 0.0,
            enc.max_abs_error(enc.run_circuit_encoded(c_rnd), s_rnd), 5e-3)
    for ranks in (1, 2, 4):
        d = dist.run_circuit_distributed(c_rnd, ranks)
        err = float(np.max(np.abs(dist.gather(d).amps - s_rnd.amps)))
        rep.add(f"random-{c_rnd.n_qubits} distributed R={ranks} vs exact",
                0.0, err, 1e-12)
    return rep
