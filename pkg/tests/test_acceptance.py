"""Top-level acceptance criteria, one test per criterion.

The shared corpus is 50 seeded random circuits (N <= 10, depth <= 15): a mix
of unstructured gate-soup circuits over the full gate set and 2D-grid
CZ-tiling circuits. Criteria 4 and 5 run against this corpus; the rest use
the fixed families (GHZ, uniform superposition) or synthetic sweeps.
"""
import gc
import math
import os
import time

import numpy as np
import pytest

from conftest import oracle_state, random_soup_circuit
from qusim.circuit import Circuit, rewrite_to_cz_basis
from qusim.gates import Gate, GateKind
from qusim.generate import (gen_ghz_chain, gen_random_circuit,
                            gen_uniform_superposition)
from qusim.parser import emit_circuit, parse_circuit
from qusim.qasm import parse_openqasm
from qusim import bench
from qusim import distributed as dist
from qusim import encoded as enc
from qusim import pathsum as ps
from qusim import statevector as sv

# bisections with more cut gates than this are skipped in criterion 4's
# path-sum sweep (2^S paths each; the cap bounds the whole sweep's runtime)
_S_CAP = 12

_GRID_SPECS = [
    (1, 2, 3), (1, 2, 8), (1, 2, 15), (1, 3, 5), (1, 3, 10), (1, 3, 15),
    (1, 4, 6), (1, 4, 12), (1, 5, 8), (1, 5, 15), (2, 2, 5), (2, 2, 10),
    (2, 2, 15), (2, 3, 3), (2, 3, 6), (2, 3, 9), (2, 3, 12), (2, 3, 15),
    (2, 4, 4), (2, 4, 8), (2, 4, 12), (2, 4, 15), (2, 5, 3), (2, 5, 5),
    (2, 5, 8), (2, 5, 10), (2, 5, 12), (2, 5, 15), (1, 6, 9), (1, 6, 15),
    (1, 8, 10), (1, 8, 15), (1, 10, 12), (1, 10, 15), (2, 4, 10),
]
_SOUP_SPECS = [(2, 12), (3, 14), (3, 18), (4, 16), (4, 20), (5, 18), (5, 22),
               (6, 20), (6, 24), (7, 22), (8, 18), (8, 24), (9, 24), (10, 26),
               (10, 30)]


def _corpus():
    circuits = [random_soup_circuit(n, g, seed=100 + i)
                for i, (n, g) in enumerate(_SOUP_SPECS)]
    circuits += [gen_random_circuit(r, c, d, seed=i)
                 for i, (r, c, d) in enumerate(_GRID_SPECS)]
    assert len(circuits) == 50
    return circuits


_CORPUS = _corpus()
_EXACT = {c.name: sv.run_circuit(c) for c in _CORPUS}


def _report(criterion: int, detail: str):
    print(f"[criterion {criterion:2d}] PASS  {detail}")


def test_criterion_01_ghz_correctness():
    """GHZ amplitudes at 0...0 and 1...1 are 1/sqrt(2)."""
    t0 = time.perf_counter()
    inv = 1 / math.sqrt(2)
    for n in (2, 8, 16, 24):
        s = sv.run_circuit(gen_ghz_chain(n))
        assert abs(sv.amplitude(s, "0" * n) - inv) <= 1e-12
        assert abs(sv.amplitude(s, "1" * n) - inv) <= 1e-12
        cz = rewrite_to_cz_basis(gen_ghz_chain(n))
        plan = ps.make_partition_plan(cz, ps.default_bisection(n))
        amps = ps.compute_amplitudes(cz, plan,
                                     ps.CoefficientRequest(("0" * n, "1" * n)))
        for a in amps:
            assert abs(abs(a) - inv) <= 1e-10
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    _report(1, f"N in {{2,8,16,24}}, exact+pathsum, {elapsed:.1f}s")


def test_criterion_02_superposition_expectations():
    """<Q_x> = 0, <Q_y> = <Q_z> = 1/2 on exact and adaptive backends."""
    for n in (4, 12, 20):
        c = gen_uniform_superposition(n)
        states = [sv.run_circuit(c),
                  enc.decode_state(enc.run_circuit_encoded(c))]
        for s in states:
            for q in range(n):
                assert abs(sv.expectation(s, "x", q) - 0.0) <= 1e-12
                assert abs(sv.expectation(s, "y", q) - 0.5) <= 1e-12
                assert abs(sv.expectation(s, "z", q) - 0.5) <= 1e-12
    _report(2, "N in {4,12,20}, exact and adaptive within 1e-12")


def test_criterion_03_cz_decomposition_identity():
    """Entrywise CZ reconstruction from the two-path sum."""
    total = np.zeros((4, 4), dtype=complex)
    for s_val in (-1, 1):
        d, _ = ps.cz_path_gates(s_val)
        total += 0.5 * np.kron(np.diag(d), np.diag(d))
    err = np.max(np.abs(total - np.diag([1, 1, 1, -1])))
    assert err <= 1e-12
    _report(3, f"entrywise error {err:.2e}")


def test_criterion_04_oracle_equivalence():
    """Exact vs dense oracle; pathsum per bisection; distributed per R."""
    worst_exact = worst_path = worst_dist = 0.0
    bisections_tested = 0
    for c in _CORPUS:
        ref = _EXACT[c.name]
        err = np.max(np.abs(ref.amps - oracle_state(c)))
        worst_exact = max(worst_exact, err)
        assert err <= 1e-12, c.name

        for ranks in (1, 2, 4, 8):
            if ranks > 1 << c.n_qubits:
                continue
            d = dist.run_circuit_distributed(c, ranks)
            err = np.max(np.abs(dist.gather(d).amps - ref.amps))
            worst_dist = max(worst_dist, err)
            assert err <= 1e-12, (c.name, ranks)

        cz = rewrite_to_cz_basis(c)
        targets = tuple(sv.index_bitstring(i, c.n_qubits)
                        for i in range(min(8, 1 << c.n_qubits)))
        ref_amps = [ref.amps[sv.bitstring_index(z)] for z in targets]
        for cut in range(1, c.n_qubits):
            blocks = [list(range(cut)), list(range(cut, c.n_qubits))]
            plan = ps.make_partition_plan(cz, blocks)
            if plan.S > _S_CAP:
                continue
            amps = ps.compute_amplitudes(cz, plan, ps.CoefficientRequest(targets))
            err = max(abs(a - b) for a, b in zip(amps, ref_amps))
            worst_path = max(worst_path, err)
            assert err <= 1e-10, (c.name, cut, plan.S)
            bisections_tested += 1
    assert bisections_tested >= len(_CORPUS)  # every circuit covered
    _report(4, f"50 circuits: exact {worst_exact:.1e}, "
               f"pathsum {worst_path:.1e} over {bisections_tested} bisections, "
               f"distributed {worst_dist:.1e}")


def test_criterion_05_adaptive_precision():
    """Adaptive backend within 5e-3 of exact on the corpus; 0 on the fixed
    families."""
    worst = 0.0
    for c in _CORPUS:
        err = enc.max_abs_error(enc.run_circuit_encoded(c), _EXACT[c.name])
        worst = max(worst, err)
        assert err <= 5e-3, (c.name, err)
    for n in (4, 10, 16):
        for fam in (gen_uniform_superposition(n), gen_ghz_chain(n)):
            err = enc.max_abs_error(enc.run_circuit_encoded(fam),
                                    sv.run_circuit(fam))
            assert err == 0.0, fam.name
    _report(5, f"corpus max-abs {worst:.2e} <= 5e-3; families exact")


def test_criterion_06_memory_accounting():
    for n in (10, 20):
        s = sv.init_state(n)
        assert s.amps.nbytes == 2 ** (n + 4)
        assert sv.memory_bytes(n) == 2 ** (n + 4)
        e = enc.init_encoded(n)
        assert e.code_bytes == 2 ** (n + 1)
        assert s.amps.nbytes == 8 * e.code_bytes
    _report(6, "2^(N+4) exact vs 2^(N+1) adaptive for N in {10,20}")


def _synthetic_cut_circuit(b: int, n_cross: int, n_total: int) -> Circuit:
    """Two b-qubit blocks, fixed gate count; n_cross of the CZs cross."""
    n = 2 * b
    gates = [Gate(GateKind.H, (q,)) for q in range(n)]
    for j in range(n_total):
        gates.append(Gate(GateKind.T, (j % b,)))
        if j < n_cross:
            gates.append(Gate(GateKind.CZ, (j % b, b + j % b)))
        else:
            gates.append(Gate(GateKind.CZ, (j % b, (j + 1) % b)))
    return Circuit(n, tuple(gates), name=f"cut-{b}-{n_cross}")


def test_criterion_07_path_count_and_cost_model():
    """Paths = 2^S exactly; runtime doubles (2.0x +- 0.5x) per unit S."""
    blocks = [list(range(8)), list(range(8, 16))]
    req = ps.CoefficientRequest(("0" * 16,))
    times = []
    for s_val in (7, 8, 9, 10):
        c = _synthetic_cut_circuit(8, s_val, 12)
        plan = ps.make_partition_plan(c, blocks)
        assert plan.S == s_val
        stats = ps.PathStats()
        runs = []
        for _ in range(5):
            # min-of-5 with the collector quiet: scheduling noise only ever
            # inflates a run, so the minimum is the stable scaling signal
            gc.collect()
            gc.disable()
            t0 = time.perf_counter()
            ps.compute_amplitudes(c, plan, req, stats=stats)
            runs.append(time.perf_counter() - t0)
            gc.enable()
        assert stats.paths_evaluated == 5 * 2 ** s_val  # 2^S per run
        assert stats.subcircuit_evals == 5 * plan.P * 2 ** s_val
        times.append(min(runs))
    # growth per unit S over the whole sweep (geometric rate; single-step
    # ratios wobble with scheduler noise, the overall rate does not)
    rate = (times[-1] / times[0]) ** (1.0 / (len(times) - 1))
    assert 1.5 <= rate <= 2.5, (rate, times)
    _report(7, f"paths = 2^S; runtime grows {rate:.2f}x per unit S")


@pytest.mark.skipif((os.cpu_count() or 1) < 8,
                    reason="weak-scaling property needs a >= 8-core machine")
def test_criterion_08_desk_weak_scaling():
    """Thread-doubling GHZ sweep keeps normalized time per gate in
    [0.5, 2.0]; adaptive/exact per-gate ratio in [1, 4]."""
    n_min, n_max = 14, 17
    records = bench.bench_ghz(n_min, n_max, "exact", ranks=1, threads=1,
                              normalize_at=n_min, double_threads=True)
    for rec in records:
        assert 0.5 <= rec.normalized_time <= 2.0, rec
    for n in (n_min, n_max):
        t_exact, ops = bench.run_ghz_workload(n, "exact")
        t_adapt, _ = bench.run_ghz_workload(n, "adaptive")
        ratio = (t_adapt / ops) / (t_exact / ops)
        assert 1.0 <= ratio <= 4.0, (n, ratio)
    _report(8, f"normalized times within [0.5,2] over N {n_min}..{n_max}")


def test_criterion_09_large_n_pathsum_reach():
    """Desk-scale stand-in for the N=128 run: N=48, two 24-qubit blocks,
    S = 1, both GHZ amplitudes within 1e-10, under 5 minutes."""
    t0 = time.perf_counter()
    n = 48
    cz = rewrite_to_cz_basis(gen_ghz_chain(n))
    plan = ps.make_partition_plan(
        cz, ps.parse_partition_spec("0-23;24-47", n))
    assert plan.S == 1
    amps = ps.compute_amplitudes(cz, plan,
                                 ps.CoefficientRequest(("0" * n, "1" * n)))
    inv = 1 / math.sqrt(2)
    for a in amps:
        assert abs(abs(a) - inv) <= 1e-10
    elapsed = time.perf_counter() - t0
    assert elapsed < 300.0
    _report(9, f"N=48 S=1 both amplitudes 1/sqrt2, {elapsed:.0f}s")


def test_criterion_10_parser_roundtrip():
    """1000 seeded circuits survive parse(emit(.)); OpenQASM subset matches
    native equivalents."""
    for seed in range(1000):
        c = random_soup_circuit(2 + seed % 8, 10 + seed % 15, seed=seed)
        again = parse_circuit(emit_circuit(c))
        assert again.n_qubits == c.n_qubits and again.gates == c.gates

    pairs = [
        ('OPENQASM 2.0;\nqreg q[2];\nh q[0];\ncx q[0],q[1];',
         "qubits 2\nH 0\nCNOT 0 1"),
        ('OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[3];\n'
         'h q[0];\nh q[1];\nh q[2];\ncz q[0],q[2];\nt q[1];\n'
         'rz(pi/4) q[0];\nu3(pi/2,0,pi) q[2];\nswap q[1],q[2];',
         "qubits 3\nH 0\nH 1\nH 2\nCZ 0 2\nT 1\n"
         f"RZ 0 {math.pi/4:.16E}\nU3 2 {math.pi/2:.16E} 0.0 {math.pi:.16E}\n"
         "SWAP 1 2"),
        ('OPENQASM 2.0;\nqreg r[4];\nx r[0];\ny r[1];\nsdg r[2];\n'
         'rx(-pi/3) r[3];\ncx r[3],r[0];',
         f"qubits 4\nX 0\nY 1\nSDG 2\nRX 3 {-math.pi/3:.16E}\nCNOT 3 0"),
    ]
    for qasm_text, native_text in pairs:
        a = sv.run_circuit(parse_openqasm(qasm_text))
        b = sv.run_circuit(parse_circuit(native_text))
        assert np.max(np.abs(a.amps - b.amps)) <= 1e-12
    _report(10, "1000 round-trips; qasm/native state agreement 1e-12")
