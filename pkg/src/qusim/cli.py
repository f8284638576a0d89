"""Command-line interface: run, validate, bench-ghz, bench-random, estimate.

Exit codes: 0 success, 1 validation failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .circuit import Circuit, rewrite_to_cz_basis
from .parser import parse_circuit
from .qasm import parse_openqasm
from . import statevector as sv
from . import encoded as enc
from . import distributed as dist
from . import pathsum as ps
from . import bench


class UsageError(Exception):
    pass


def _load_circuit(path: str) -> Circuit:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".qasm") or text.lstrip().startswith("OPENQASM"):
        return parse_openqasm(text, name=path)
    return parse_circuit(text, name=path)


def _parse_targets(spec: str, n_qubits: int) -> list[str]:
    targets = []
    for item in spec.split(","):
        item = item.strip()
        if item == "all0":
            targets.append("0" * n_qubits)
        elif item == "all1":
            targets.append("1" * n_qubits)
        elif item.startswith("@"):
            with open(item[1:], "r", encoding="utf-8") as fh:
                targets.extend(line.strip() for line in fh if line.strip())
        elif item:
            targets.append(item)
    if not targets:
        raise UsageError(f"no targets in {spec!r}")
    for z in targets:
        if len(z) != n_qubits or any(ch not in "01" for ch in z):
            raise UsageError(f"bad target bitstring {z!r} for {n_qubits} qubits")
    return targets


def _write_output(data, json_path: str | None) -> None:
    text = json.dumps(data, indent=2)
    if json_path:
        with open(json_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _cmd_run(args) -> int:
    c = _load_circuit(args.circuit)
    pathsum_flags = args.partitions or args.coeffs or args.targets
    if args.backend != "pathsum" and pathsum_flags:
        raise UsageError("--partitions/--coeffs/--targets only apply to the "
                         "pathsum backend")
    result = {"circuit": c.name, "n_qubits": c.n_qubits, "backend": args.backend,
              "gate_count": len(c.gates)}
    if args.backend == "pathsum":
        cz = rewrite_to_cz_basis(c)
        blocks = ps.parse_partition_spec(args.partitions, c.n_qubits) \
            if args.partitions else ps.default_bisection(c.n_qubits)
        plan = ps.make_partition_plan(cz, blocks)
        if args.targets:
            targets = _parse_targets(args.targets, c.n_qubits)
        elif args.coeffs:
            targets = ps.lexicographic_targets(c.n_qubits, args.coeffs)
        else:
            raise UsageError("pathsum needs --targets or --coeffs")
        est = ps.cost_estimate(plan, len(targets), args.ranks, args.threads)
        amps = ps.compute_amplitudes(cz, plan, ps.CoefficientRequest(tuple(targets)),
                                     workers=args.threads)
        result.update({
            "S": plan.S, "M": len(targets), "cost_estimate": est,
            "amplitudes": [{"bitstring": z, "re": a.real, "im": a.imag}
                           for z, a in zip(targets, amps)],
        })
        _write_output(result, args.json)
        return 0

    if args.backend == "exact":
        state = sv.run_circuit(c, workers=args.threads, mem_budget=args.mem_budget)
    elif args.backend == "adaptive":
        e = enc.run_circuit_encoded(c, workers=args.threads)
        state = enc.decode_state(e)
        result["codebook"] = {"entries": e.codebook.used - 1,
                              "saturated": e.codebook.saturated}
    elif args.backend == "distributed":
        d = dist.run_circuit_distributed(c, args.ranks, workers=args.threads)
        state = dist.gather(d, mem_budget=args.mem_budget)
        result["communicated_bytes"] = d.transport.total_bytes
    else:
        raise UsageError(f"unknown backend {args.backend!r}")
    result["expectations"] = sv.expectation_report(state)
    if args.dump_state:
        with open(args.dump_state, "wb") as fh:
            fh.write(sv.dump_state(state))
        result["state_dump"] = args.dump_state
    _write_output(result, args.json)
    return 0


def _cmd_validate(args) -> int:
    rep = bench.validate(args.max_qubits)
    for row in rep.rows():
        status = "PASS" if row["pass"] else "FAIL"
        print(f"[{status}] {row['name']}: expected {row['expected']:.12g}, "
              f"observed {row['observed']:.12g} (tol {row['tolerance']:g})")
    if args.json:
        _write_output({"pass": rep.passed, "checks": rep.rows()}, args.json)
    print(f"overall: {'PASS' if rep.passed else 'FAIL'}")
    return 0 if rep.passed else 1


def _emit_records(records, csv_path: str | None) -> None:
    text = bench.records_to_csv(records)
    if csv_path:
        with open(csv_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_bench_ghz(args) -> int:
    normalize_at = args.normalize_at if args.normalize_at is not None else args.n_min
    records = bench.bench_ghz(args.n_min, args.n_max, args.backend, args.ranks,
                              args.threads, normalize_at,
                              double_threads=args.double_threads,
                              mem_budget=args.mem_budget)
    _emit_records(records, args.csv)
    return 0


def _cmd_bench_random(args) -> int:
    records = bench.bench_random(args.rows, args.cols, args.depth_min,
                                 args.depth_max, args.partitions or "",
                                 args.coeffs, args.ranks, args.threads,
                                 args.seed)
    _emit_records(records, args.csv)
    return 0


def _cmd_estimate(args) -> int:
    n = args.n
    exact = sv.memory_bytes(n)
    report = {"n_qubits": n}
    if args.backend in ("exact", "all"):
        report["exact_bytes"] = exact
    if args.backend in ("adaptive", "all"):
        report["adaptive_code_bytes"] = 1 << (n + 1)
        report["adaptive_table_bytes"] = 256 * 8
    if args.backend in ("pathsum", "all"):
        blocks = ps.parse_partition_spec(args.partitions, n) \
            if args.partitions else ps.default_bisection(n)
        d_max = max(1 << len(b) for b in blocks)
        m = args.coeffs or 1
        report["pathsum_per_rank_bytes"] = max(d_max, m) * 16
    _write_output(report, args.json)
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="qusim",
                                  description="Gate-based quantum circuit "
                                              "simulator and benchmark harness")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, backend_default="exact"):
        p.add_argument("--backend", default=backend_default,
                       choices=["exact", "adaptive", "pathsum", "distributed"])
        p.add_argument("--ranks", type=int, default=1)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--mem-budget", type=int, default=None,
                       help="max amplitude-storage bytes per state")
        p.add_argument("--json", default=None, help="write JSON output here")

    p_run = sub.add_parser("run", help="simulate one circuit file")
    p_run.add_argument("--circuit", required=True)
    common(p_run)
    p_run.add_argument("--partitions", default=None,
                       help='pathsum qubit blocks, e.g. "0-20;21-41"')
    p_run.add_argument("--coeffs", type=int, default=None,
                       help="extract the M lexicographically-first amplitudes")
    p_run.add_argument("--targets", default=None,
                       help="comma list of bitstrings, all0, all1, or @file")
    p_run.add_argument("--dump-state", default=None,
                       help="write the binary state dump here")
    p_run.set_defaults(fn=_cmd_run)

    p_val = sub.add_parser("validate", help="run the fixed validation suite")
    p_val.add_argument("--max-qubits", type=int, default=12)
    p_val.add_argument("--json", default=None)
    p_val.set_defaults(fn=_cmd_validate)

    p_ghz = sub.add_parser("bench-ghz", help="GHZ-chain weak-scaling sweep")
    p_ghz.add_argument("--n-min", type=int, required=True)
    p_ghz.add_argument("--n-max", type=int, required=True)
    common(p_ghz)
    p_ghz.add_argument("--normalize-at", type=int, default=None)
    p_ghz.add_argument("--double-threads", action="store_true",
                       help="double worker threads with each added qubit")
    p_ghz.add_argument("--csv", default=None)
    p_ghz.set_defaults(fn=_cmd_bench_ghz)

    p_rnd = sub.add_parser("bench-random", help="random-circuit depth sweep "
                                                "on the pathsum backend")
    p_rnd.add_argument("--rows", type=int, required=True)
    p_rnd.add_argument("--cols", type=int, required=True)
    p_rnd.add_argument("--depth-min", type=int, required=True)
    p_rnd.add_argument("--depth-max", type=int, required=True)
    p_rnd.add_argument("--partitions", default=None)
    p_rnd.add_argument("--coeffs", type=int, default=1)
    p_rnd.add_argument("--ranks", type=int, default=1)
    p_rnd.add_argument("--threads", type=int, default=1)
    p_rnd.add_argument("--seed", type=int, default=0)
    p_rnd.add_argument("--csv", default=None)
    p_rnd.set_defaults(fn=_cmd_bench_random)

    p_est = sub.add_parser("estimate", help="memory estimates per backend")
    p_est.add_argument("n", type=int)
    p_est.add_argument("--backend", default="all",
                       choices=["exact", "adaptive", "pathsum", "all"])
    p_est.add_argument("--partitions", default=None)
    p_est.add_argument("--coeffs", type=int, default=None)
    p_est.add_argument("--json", default=None)
    p_est.set_defaults(fn=_cmd_estimate)
    return top


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (sv.MemoryBudgetError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
