"""Two-byte-per-amplitude adaptive encoding engine.

Each amplitude is stored as two byte codes (real part, imaginary part) into
a shared table of up to 255 distinct reals; code 0 always decodes to exact
zero. Storage is 2^(N+1) bytes, one eighth of the exact representation.
While the state's distinct values fit in the table the encoding is
lossless; once they overflow it the codebook is saturated and values map to
the nearest entry.

Permutation and sign gates (X, Y, Z, S, SDG, CNOT, CZ, SWAP) are executed
as pure code moves with no decode; everything else goes through a
decode -> exact kernel -> re-encode cycle. The re-encode rewrites every
code, so the table is rebuilt deterministically from the new state's values
each time (a sign-symmetric k-center fill once it overflows). The table
update is a
serialized merge before any re-encode, so codebooks are identical
regardless of worker count.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit
from .gates import Gate, GateKind
from . import statevector as sv
from .statevector import StateVector

_CAPACITY = 256  # code 0 reserved for exact zero, 255 value slots
_DUMP_MAGIC = b"QUSIMEA"
_DUMP_VERSION = 1


def _greedy_cover_count(a: np.ndarray, r: float) -> int:
    """Centers needed to cover sorted values a within radius r (greedy sweep)."""
    count, i = 0, 0
    while i < a.size:
        count += 1
        i = int(np.searchsorted(a, a[i] + 2.0 * r, side="right"))
    return count


def _kcenter_cover(uniq: np.ndarray, k: int) -> np.ndarray:
    """At most k table values minimizing the worst snap distance over uniq.

    1-D k-center: binary-search the radius, then place each center at the
    midpoint of the segment it covers. Minimax (not quantiles) because the
    reconstruction error is a max-abs bound, so rare outlying values matter
    as much as dense clusters.
    """
    lo, hi = 0.0, (float(uniq[-1]) - float(uniq[0])) / 2.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _greedy_cover_count(uniq, mid) <= k:
            hi = mid
        else:
            lo = mid
    centers, i = [], 0
    while i < uniq.size:
        j = int(np.searchsorted(uniq, uniq[i] + 2.0 * hi, side="right"))
        centers.append(0.5 * (uniq[i] + uniq[j - 1]))
        i = j
    return np.unique(np.asarray(centers))


class Codebook:
    """Adaptively grown table of real values addressed by one-byte codes."""

    def __init__(self):
        self.values = np.zeros(_CAPACITY, dtype=np.float64)
        self.used = 1  # slot 0 = 0.0
        self.insertion_count = 0
        self.saturated = False
        self._sorted_vals = np.empty(0, dtype=np.float64)
        self._sorted_codes = np.empty(0, dtype=np.uint8)
        # False = not computed yet; None = no exact negation map fits
        self._neg_map: np.ndarray | None | bool = False

    def _rebuild_index(self) -> None:
        vals = self.values[1:self.used]
        order = np.argsort(vals, kind="stable")
        self._sorted_vals = vals[order]
        self._sorted_codes = (order + 1).astype(np.uint8)
        self._neg_map = False

    def _insert(self, new_vals: np.ndarray) -> None:
        """Merge sorted unique values into the table until it is full."""
        space = _CAPACITY - self.used
        if new_vals.size > space:
            self.saturated = True
            new_vals = new_vals[:space]
        if new_vals.size:
            self.values[self.used:self.used + new_vals.size] = new_vals
            self.used += new_vals.size
            self.insertion_count += int(new_vals.size)
            self._rebuild_index()

    def rebuild(self, parts: np.ndarray) -> None:
        """Rebuild the whole table from the current state's value population.

        Only legal when every code referencing this table is about to be
        rewritten (a full re-encode). If the distinct nonzero values fit, the
        table is exact; negated values are added too while room remains so
        sign gates stay pure code moves. Otherwise the table becomes the
        values at evenly spaced ranks of the sorted (multiplicity-weighted)
        population, so nearest-value gaps track where the amplitudes live.
        """
        nz = parts[parts != 0.0]
        uniq = np.unique(nz)
        if uniq.size > _CAPACITY - 1:
            # lossy: sign-symmetric centers so sign gates stay exact code
            # moves (a lossy negation map would leak error on every Z/CZ/S)
            self.saturated = True
            centers = _kcenter_cover(np.unique(np.abs(nz)), (_CAPACITY - 1) // 2)
            uniq = np.unique(np.concatenate([centers, -centers]))
        else:
            symmetric = np.unique(np.concatenate([uniq, -uniq]))
            if symmetric.size <= _CAPACITY - 1:
                uniq = symmetric
        if self._sorted_vals.size:
            pos = np.searchsorted(self._sorted_vals, uniq)
            cpos = np.minimum(pos, self._sorted_vals.size - 1)
            fresh = int(np.count_nonzero(self._sorted_vals[cpos] != uniq))
        else:
            fresh = uniq.size
        self.insertion_count += fresh
        self.values[:] = 0.0
        self.values[1:1 + uniq.size] = uniq
        self.used = 1 + uniq.size
        self._rebuild_index()

    def encode(self, x: np.ndarray) -> np.ndarray:
        """Byte codes for an array of reals, growing the table as needed."""
        x = np.asarray(x, dtype=np.float64)
        codes = np.zeros(x.shape, dtype=np.uint8)
        nz = x != 0.0
        if not nz.any():
            return codes
        vals = x[nz]
        if not self.saturated:
            # values are inserted together with their negatives, so sign
            # gates stay exact code moves even once the table is full
            missing = self._missing(np.concatenate([vals, -vals]))
            if missing.size:
                self._insert(missing)
        codes[nz] = self._lookup(vals)
        return codes

    def _missing(self, vals: np.ndarray) -> np.ndarray:
        uniq = np.unique(vals)
        if self._sorted_vals.size == 0:
            return uniq
        pos = np.searchsorted(self._sorted_vals, uniq)
        hit = (pos < self._sorted_vals.size) & \
              (self._sorted_vals[np.minimum(pos, self._sorted_vals.size - 1)] == uniq)
        return uniq[~hit]

    def _lookup(self, vals: np.ndarray) -> np.ndarray:
        """Exact-match codes; unmatched values (saturated table) map to the
        nearest entry, with exact zero (code 0) among the candidates."""
        svals, scodes = self._sorted_vals, self._sorted_codes
        if svals.size == 0:
            raise ValueError("codebook holds no nonzero values")
        pos = np.searchsorted(svals, vals)
        cpos = np.minimum(pos, svals.size - 1)
        out = scodes[cpos].copy()
        exact = svals[cpos] == vals
        if not exact.all():
            miss = ~exact
            mv = vals[miss]
            hi = np.minimum(pos[miss], svals.size - 1)
            lo = np.maximum(pos[miss] - 1, 0)
            cand_v = np.stack([svals[lo], svals[hi], np.zeros_like(mv)])
            cand_c = np.stack([scodes[lo], scodes[hi],
                               np.zeros_like(scodes[lo])])
            pick = np.argmin(np.abs(cand_v - mv[None, :]), axis=0)
            out[miss] = cand_c[pick, np.arange(mv.size)]
        return out

    def decode(self, codes: np.ndarray) -> np.ndarray:
        if codes.size and int(codes.max()) >= self.used:
            raise ValueError("code references an unset table slot")
        return self.values[codes]

    def negation_codes(self) -> np.ndarray | None:
        """Map each used code to the code of its negated value, or None.

        Missing negatives are inserted first (the table may grow); if they
        cannot all fit, no map is returned and the caller must take the
        decode/re-encode path, which keeps sign gates exact instead of
        silently snapping negated values to neighbours.
        """
        if self._neg_map is False:
            vals = self.values[1:self.used]
            missing = self._missing(-vals)
            if missing.size > _CAPACITY - self.used:
                self._neg_map = None
            else:
                if missing.size:
                    self._insert(missing)
                    self._neg_map = False  # _rebuild_index cleared the cache
                neg = np.zeros(self.used, dtype=np.uint8)
                neg[1:] = self._lookup(-self.values[1:self.used])
                self._neg_map = neg
        return self._neg_map


@dataclass
class EncodedState:
    """2^N two-byte cells: codes[:, 0] = real-part code, codes[:, 1] = imag."""
    n_qubits: int
    codes: np.ndarray  # uint8, shape (2^N, 2)
    codebook: Codebook

    @property
    def code_bytes(self) -> int:
        return self.codes.nbytes


def encode_state(s: StateVector) -> EncodedState:
    cb = Codebook()
    cb.rebuild(np.concatenate([s.amps.real, s.amps.imag]))
    codes = np.empty((s.amps.size, 2), dtype=np.uint8)
    codes[:, 0] = cb.encode(s.amps.real)
    codes[:, 1] = cb.encode(s.amps.imag)
    return EncodedState(s.n_qubits, codes, cb)


def decode_state(e: EncodedState) -> StateVector:
    amps = e.codebook.decode(e.codes[:, 0]) + 1j * e.codebook.decode(e.codes[:, 1])
    return StateVector(e.n_qubits, amps)


def init_encoded(n: int) -> EncodedState:
    return encode_state(sv.init_state(n))


def max_abs_error(e: EncodedState, ref: StateVector) -> float:
    if e.n_qubits != ref.n_qubits:
        raise ValueError("qubit count mismatch")
    return float(np.max(np.abs(decode_state(e).amps - ref.amps)))


# ---------------------------------------------------------------------------
# gate application

def _cell_view1(codes: np.ndarray, q: int) -> np.ndarray:
    return codes.reshape(-1, 2, 1 << q, 2)


def _cell_view2(codes: np.ndarray, qa: int, qb: int) -> tuple[np.ndarray, bool]:
    qh, ql = (qa, qb) if qa > qb else (qb, qa)
    v = codes.reshape(-1, 2, 1 << (qh - ql - 1), 2, 1 << ql, 2)
    return v, qa > qb


_RE, _IM = 0, 1


def _negate(cells: np.ndarray, neg: np.ndarray) -> None:
    cells[...] = neg[cells]


def apply_gate_encoded(e: EncodedState, g: Gate, workers: int = 1) -> EncodedState:
    """Apply one gate to the encoded state in place.

    Permutation/sign gates are code moves; anything else decodes, runs the
    exact kernel, and re-encodes (inserting any new values first).
    """
    for q in g.qubits:
        if q >= e.n_qubits:
            raise ValueError(f"qubit {q} out of range for {e.n_qubits}-qubit state")
    k = g.kind
    codes, cb = e.codes, e.codebook

    if k is GateKind.I:
        return e
    if k is GateKind.X:
        v = _cell_view1(codes, g.qubits[0])
        a = v[:, 0].copy()
        v[:, 0] = v[:, 1]
        v[:, 1] = a
        return e
    if k is GateKind.SWAP:
        v, _ = _cell_view2(codes, *g.qubits)
        a = v[:, 0, :, 1].copy()
        v[:, 0, :, 1] = v[:, 1, :, 0]
        v[:, 1, :, 0] = a
        return e
    if k is GateKind.CNOT:
        control, target = g.qubits
        v, control_is_hi = _cell_view2(codes, control, target)
        if control_is_hi:
            a = v[:, 1, :, 0].copy()
            v[:, 1, :, 0] = v[:, 1, :, 1]
            v[:, 1, :, 1] = a
        else:
            a = v[:, 0, :, 1].copy()
            v[:, 0, :, 1] = v[:, 1, :, 1]
            v[:, 1, :, 1] = a
        return e
    # sign gates are code moves only while an exact negation map exists;
    # otherwise they fall through to the decode/re-encode path below
    if k is GateKind.Z:
        neg = cb.negation_codes()
        if neg is not None:
            v = _cell_view1(codes, g.qubits[0])
            _negate(v[:, 1], neg)
            return e
    if k is GateKind.CZ:
        neg = cb.negation_codes()
        if neg is not None:
            v, _ = _cell_view2(codes, *g.qubits)
            _negate(v[:, 1, :, 1], neg)
            return e
    if k is GateKind.S:
        # a -> i a on the bit=1 half: (re, im) -> (-im, re)
        neg = cb.negation_codes()
        if neg is not None:
            v = _cell_view1(codes, g.qubits[0])
            re = v[:, 1, :, _RE].copy()
            v[:, 1, :, _RE] = neg[v[:, 1, :, _IM]]
            v[:, 1, :, _IM] = re
            return e
    if k is GateKind.SDG:
        # a -> -i a on the bit=1 half: (re, im) -> (im, -re)
        neg = cb.negation_codes()
        if neg is not None:
            v = _cell_view1(codes, g.qubits[0])
            re = v[:, 1, :, _RE].copy()
            v[:, 1, :, _RE] = v[:, 1, :, _IM]
            v[:, 1, :, _IM] = neg[re]
            return e
    if k is GateKind.Y:
        # new a0 = -i a1, new a1 = i a0
        neg = cb.negation_codes()
        if neg is not None:
            v = _cell_view1(codes, g.qubits[0])
            re0, im0 = v[:, 0, :, _RE].copy(), v[:, 0, :, _IM].copy()
            v[:, 0, :, _RE] = v[:, 1, :, _IM]
            v[:, 0, :, _IM] = neg[v[:, 1, :, _RE]]
            v[:, 1, :, _RE] = neg[im0]
            v[:, 1, :, _IM] = re0
            return e

    # general path: decode, exact kernel, full re-encode. Every code is
    # rewritten here, so the table can be rebuilt around the new state's
    # value population instead of dragging along stale historical entries.
    state = decode_state(e)
    sv.apply_gate(state, g, workers)
    cb.rebuild(np.concatenate([state.amps.real, state.amps.imag]))
    codes[:, 0] = cb.encode(state.amps.real)
    codes[:, 1] = cb.encode(state.amps.imag)
    return e


def run_circuit_encoded(c: Circuit, workers: int = 1) -> EncodedState:
    e = init_encoded(c.n_qubits)
    for g in c.gates:
        apply_gate_encoded(e, g, workers)
    return e


def expectation_encoded(e: EncodedState, axis: str, qubit: int) -> float:
    return sv.expectation(decode_state(e), axis, qubit)


# ---------------------------------------------------------------------------
# binary dump format

def dump_encoded(e: EncodedState) -> bytes:
    """Header (magic, version, N, table length), table of reals, code array."""
    cb = e.codebook
    header = struct.pack("<7sBIII", _DUMP_MAGIC, 0, _DUMP_VERSION,
                         e.n_qubits, cb.used)
    table = np.ascontiguousarray(cb.values[:cb.used], dtype="<f8").tobytes()
    return header + table + e.codes.tobytes()


def load_encoded(data: bytes) -> EncodedState:
    magic, _, version, n, used = struct.unpack_from("<7sBIII", data)
    if magic != _DUMP_MAGIC:
        raise ValueError("bad encoded-state dump magic")
    if version != _DUMP_VERSION:
        raise ValueError(f"unsupported dump version {version}")
    off = struct.calcsize("<7sBIII")
    cb = Codebook()
    table = np.frombuffer(data[off:off + 8 * used], dtype="<f8")
    cb.values[:used] = table
    cb.used = used
    cb._rebuild_index()
    codes = np.frombuffer(data[off + 8 * used:], dtype=np.uint8).reshape(-1, 2).copy()
    if codes.shape[0] != 1 << n:
        raise ValueError("dump body size does not match qubit count")
    return EncodedState(n, codes, cb)
