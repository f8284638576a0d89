"""qusim: gate-based quantum circuit simulation with exact, adaptive-encoded,
path-sum and distributed backends, plus a benchmark harness."""

from .gates import Gate, GateKind, gate_matrix
from .circuit import Circuit, LayerSchedule, compute_depth, rewrite_to_cz_basis
from .parser import CircuitSyntaxError, emit_circuit, parse_circuit
from .qasm import QasmError, parse_openqasm
from .generate import (gen_ghz_chain, gen_random_circuit,
                       gen_uniform_superposition)
from .statevector import (StateVector, amplitude, apply_gate, expectation,
                          expectation_report, init_state, memory_bytes,
                          run_circuit, sample)
from .encoded import (Codebook, EncodedState, apply_gate_encoded, decode_state,
                      encode_state, max_abs_error, run_circuit_encoded)
from .distributed import (CommPlan, DistributedState, apply_gate_distributed,
                          gather, partition_state, plan_gate, remap_qubits,
                          run_circuit_distributed)
from .pathsum import (CoefficientRequest, PartitionPlan, PathAssignment,
                      Subcircuit, compute_amplitudes, cost_estimate,
                      cz_path_gates, eval_subcircuit, make_partition_plan,
                      split_circuit)

__version__ = "0.1.0"
