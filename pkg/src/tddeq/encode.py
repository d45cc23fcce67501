"""Compile a circuit spec into a tensor decision diagram.

Every gate, fixed input state, measurement and classically controlled gate
becomes a small tensor over wire-segment indices; the diagram of the circuit
is the contraction of all of them.  Measurements follow the COPY-tensor
encoding: a measurement whose qubit ends there is a rank-2 COPY (identity)
whose output leg doubles as the classical outcome index, a measurement whose
qubit continues is a rank-3 COPY with a separate outcome leg.  Classical
controls attach to outcome indices pointwise, so one bit may drive several
gates.

Index ranking ("grouped", the default used for checking): classical outcome
indices of output bits on top, then internal outcomes and discarded-qubit
legs, then principal output legs, then wire segments by (qubit, segment).
The alternative "interleaved" ranking keeps each qubit's wires and outcome
adjacent; it reproduces the construction node counts reported for
conventional-circuit checking and is used for statistics.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .circuits import (Branch, CircuitSpec, CondGate, Conventional, DynCircuit,
                       Gate, INIT_STATES, Measure, flatten, lower_controls,
                       qvar)
from .logic import BoolFunc, func_to_tensor
from .tdd import (KIND_OUTCOME, KIND_PRINCIPAL, KIND_WIRE, IndexId, Tdd,
                  TddManager)


class CompileError(Exception):
    pass


class CompileScaleError(CompileError):
    pass


COPY3 = np.zeros((2, 2, 2))
COPY3[0, 0, 0] = COPY3[1, 1, 1] = 1.0
COPY3.setflags(write=False)


def measurement_tensor(mgr: TddManager, x: IndexId, y: IndexId,
                       c: IndexId | None = None) -> Tdd:
    """Measurement as a COPY tensor.

    With a control leg ``c`` this is the rank-3 COPY whose c-slices are the
    projectors |0><0| and |1><1|; without one it degenerates to the rank-2
    identity (the measurement only relabels the wire).
    """
    if c is None:
        return mgr.from_dense(np.eye(2), [x, y])
    return mgr.from_dense(COPY3, [c, x, y])


def controlled_gate_tensor(mgr: TddManager, u: np.ndarray, c: IndexId,
                           x: IndexId, y: IndexId) -> Tdd:
    """Classically controlled single-qubit gate: identity at c=0, U at c=1."""
    u = np.asarray(u, dtype=complex)
    arr = np.zeros((2, 2, 2), dtype=complex)
    arr[0] = np.eye(2)
    arr[1] = u.T  # entry at (c=1, x, y) is U[y, x]
    return mgr.from_dense(arr, [c, x, y])


# -- netlist ------------------------------------------------------------------


@dataclass
class _Entry:
    kind: str            # init | gate | cond | measure2 | measure3 | dispatch | ident
    label: str
    indices: tuple[str, ...]
    payload: object = None
    partition: str = ""


@dataclass
class _IndexDecl:
    name: str
    kind: str
    zone: int            # 1 output bits, 2 internal outcomes/discards, 3 principal, 4 wires
    sort_key: tuple
    qpos: int | None = None      # owning qubit position, for interleaved ranking
    seg: tuple = ()              # wire segment key, for interleaved ranking


@dataclass
class _Netlist:
    spec: CircuitSpec = None
    mode: str = "m"
    entries: list[_Entry] = field(default_factory=list)
    decls: dict[str, _IndexDecl] = field(default_factory=dict)
    open_names: set[str] = field(default_factory=set)
    m_set: list[str] = field(default_factory=list)
    peel_set: set[str] = field(default_factory=set)
    in_names: list[str] = field(default_factory=list)
    out_names: list[str] = field(default_factory=list)
    qubit_pos: dict[str, int] = field(default_factory=dict)


def _wire_name(q: str, key: tuple) -> str:
    return f"w:{q}." + ".".join(str(k) for k in key)


class _Builder:
    """Pass 1: walk the lowered circuit and emit netlist entries."""

    def __init__(self, spec: CircuitSpec, mode: str, open_inputs: bool):
        self.spec = spec
        self.mode = mode
        self.open_inputs = open_inputs
        self.net = _Netlist(spec=spec, mode=mode)
        self.net.qubit_pos = {q: k for k, q in enumerate(spec.qubits)}
        self.seg: dict[str, tuple] = {q: (0,) for q in spec.qubits}
        self.touches_left: dict[str, int] = {q: 0 for q in spec.qubits}
        self.bit_outcome: dict[str, str] = {}
        self.bit_source: dict[str, str] = {}
        self.ended: dict[str, str] = {}
        self.uid = itertools.count(1)

    # index declarations

    def _decl(self, name, kind, zone, sort_key, qpos=None, seg=()):
        if name not in self.net.decls:
            self.net.decls[name] = _IndexDecl(name, kind, zone, sort_key, qpos, seg)
        return name

    def wire(self, q: str, key: tuple) -> str:
        qpos = self.net.qubit_pos[q]
        return self._decl(_wire_name(q, key), KIND_WIRE, 4, (qpos, key),
                          qpos=qpos, seg=key)

    def outcome_index(self, bit: str, q: str) -> str:
        qpos = self.net.qubit_pos[q]
        if bit in self.spec.output_bits:
            pos = self.spec.output_bits.index(bit)
            return self._decl(f"outbit:{pos}", KIND_OUTCOME, 1, (pos,), qpos=qpos)
        return self._decl(f"bit:{bit}", KIND_OUTCOME, 2, (0, bit), qpos=qpos)

    def discard_index(self, q: str) -> str:
        # a discarded qubit's leg is peeled like an outcome, so it lives in
        # the classical zone
        name = self._decl(f"disc:{q}", KIND_OUTCOME, 2, (1, q),
                          qpos=self.net.qubit_pos[q])
        self.net.peel_set.add(name)
        return name

    def principal_out(self, q: str) -> str:
        return self._decl(f"out:{q}", KIND_PRINCIPAL, 3,
                          (self.spec.outputs.index(q),),
                          qpos=self.net.qubit_pos[q])

    # walking

    def build(self) -> _Netlist:
        steps = flatten(lower_controls(self.spec.circuit))
        for st in steps:
            for q in self._touched(st):
                self.touches_left[q] += 1
        for q in self.spec.qubits:
            if q in self.spec.inputs or self.open_inputs:
                self.net.open_names.add(self.wire(q, (0,)))
            else:
                state = self.spec.fixed_init.get(q, "0")
                idx = (self.wire(q, (0,)) if self.touches_left[q]
                       else self._final_leg(q, fresh=False))
                self.net.entries.append(_Entry("init", f"init {q}={state}",
                                               (idx,), (q, state), partition=q))
        for st in steps:
            self._emit(st)
        self._finish_qubits()
        self.net.in_names = [_wire_name(q, (0,)) for q in self.spec.inputs]
        self.net.out_names = [f"out:{q}" for q in self.spec.outputs
                              if f"out:{q}" in self.net.decls]
        self.net.m_set = [f"outbit:{k}" for k in range(len(self.spec.output_bits))]
        return self.net

    def _touched(self, st) -> tuple[str, ...]:
        if isinstance(st, Conventional):
            return tuple(q for g in st.gates for q in g.qubits)
        if isinstance(st, Measure):
            return st.step.qubits
        if isinstance(st, CondGate):
            return st.gate.qubits
        if isinstance(st, Branch):
            return st.measure.qubits + tuple(sorted(qvar(st)))
        raise TypeError(st)

    def _final_leg(self, q: str, fresh: bool = True) -> str:
        """Name of the qubit's terminal leg and its open/peel registration.

        ``fresh`` allocates the next wire segment (the output leg of the
        qubit's last gate); inits on untouched qubits land on segment 0.
        Not called for qubits ending in a merged measurement.
        """
        if q in self.spec.outputs and (self.mode == "q" or not self.spec.output_bits):
            name = self.principal_out(q)
        elif self.mode == "q":
            name = self.discard_index(q)
        else:
            name = self.wire(q, self._next_key(q) if fresh else self.seg[q])
        self.net.open_names.add(name)
        self.ended[q] = name
        return name

    def _next_key(self, q: str) -> tuple:
        key = self.seg[q][:-1] + (self.seg[q][-1] + 1,)
        self.seg[q] = key
        return key

    def _advance(self, q: str) -> tuple[str, str]:
        """Consume the current segment of ``q``; return (in, out) names."""
        cur = self.wire(q, self.seg[q])
        self.touches_left[q] -= 1
        if self.touches_left[q] == 0:
            return cur, self._final_leg(q)
        return cur, self.wire(q, self._next_key(q))

    def _emit(self, st):
        if isinstance(st, Conventional):
            for g in st.gates:
                self._emit_gate(g)
        elif isinstance(st, Measure):
            for q, b in zip(st.step.qubits, st.step.bits):
                self._emit_measure(q, b)
        elif isinstance(st, CondGate):
            self._emit_cond(st)
        elif isinstance(st, Branch):
            self._emit_branch(st)
        else:
            raise TypeError(st)

    def _emit_gate(self, g: Gate):
        ins, outs = [], []
        for q in g.qubits:
            i, o = self._advance(q)
            ins.append(i)
            outs.append(o)
        self.net.entries.append(_Entry("gate", g.label(),
                                       tuple(outs + ins),
                                       (g, tuple(outs), tuple(ins)),
                                       partition=self._owner(g.qubits)))

    def _owner(self, qubits, extra=()) -> str:
        cands = list(qubits) + list(extra)
        return min(cands, key=lambda q: self.net.qubit_pos[q])

    def _emit_measure(self, q: str, bit: str):
        c = self.outcome_index(bit, q)
        self.bit_outcome[bit] = c
        self.bit_source[bit] = q
        self.net.open_names.add(c)
        if bit not in self.spec.output_bits and self.mode == "q":
            self.net.peel_set.add(c)
        cur = self.wire(q, self.seg[q])
        self.touches_left[q] -= 1
        continues = self.touches_left[q] > 0
        keeps_quantum_leg = q in self.spec.outputs and self.mode == "q"
        if continues or keeps_quantum_leg:
            if continues:
                y = self.wire(q, self._next_key(q))
            else:
                y = self.principal_out(q)
                self.net.open_names.add(y)
                self.ended[q] = y
            self.net.entries.append(_Entry("measure3", f"measure {q}->{bit}",
                                           (c, cur, y), (c, cur, y), partition=q))
        else:
            # the qubit ends here: the outcome leg is also the final wire
            self.net.entries.append(_Entry("measure2", f"measure {q}->{bit}",
                                           (cur, c), (cur, c), partition=q))
            self.ended[q] = c

    def _emit_cond(self, st: CondGate):
        bits = tuple(self.bit_outcome[b] for b in st.bits)
        ins, outs = [], []
        for q in st.gate.qubits:
            i, o = self._advance(q)
            ins.append(i)
            outs.append(o)
        part = self._owner(st.gate.qubits,
                           extra=[self.bit_source[b] for b in st.bits])
        self.net.entries.append(_Entry("cond", f"if[{st.expr or '*'}] {st.gate.label()}",
                                       bits + tuple(outs + ins),
                                       (st, bits, tuple(outs), tuple(ins)),
                                       partition=part))

    def _emit_branch(self, st: Branch):
        for q, b in zip(st.measure.qubits, st.measure.bits):
            self._emit_measure(q, b)
        bits = tuple(self.bit_outcome[b] for b in st.measure.bits)
        body_qubits = tuple(sorted(qvar(st), key=lambda q: self.net.qubit_pos[q]))
        uid = next(self.uid)
        pre, post = {}, {}
        for q in body_qubits:
            i, o = self._advance(q)
            pre[q], post[q] = i, o
        sel_idx = self._decl(f"dsp:{uid}", KIND_OUTCOME, 2, (2, uid))
        bodies = [self._build_body(body, uid, i, pre, post, body_qubits)
                  for i, body in enumerate(st.branches)]
        part = self._owner(st.measure.qubits, extra=body_qubits)
        self.net.entries.append(_Entry(
            "dispatch", f"dispatch#{uid}",
            bits + tuple(pre[q] for q in body_qubits) + tuple(post[q] for q in body_qubits),
            (st, bits, bodies, sel_idx), partition=part))

    def _build_body(self, body: DynCircuit, uid: int, i: int, pre, post,
                    body_qubits) -> list[_Entry]:
        """Sub-netlist of one branch body, bridged onto the shared segments."""
        entries: list[_Entry] = []
        cur = dict(pre)
        counter = itertools.count(1)

        def advance_sub(q):
            k = next(counter)
            inn = cur[q]
            base = self.net.decls[pre[q]].sort_key[1]
            out = self._decl(f"w:{q}.{uid}.{i}.{k}", KIND_WIRE, 4,
                             (self.net.qubit_pos[q], tuple(base) + (uid, i, k)))
            cur[q] = out
            return inn, out

        for st in flatten(lower_controls(body)):
            if isinstance(st, Conventional):
                for g in st.gates:
                    ins, outs = [], []
                    for q in g.qubits:
                        inn, out = advance_sub(q)
                        ins.append(inn)
                        outs.append(out)
                    entries.append(_Entry("gate", g.label(), tuple(outs + ins),
                                          (g, tuple(outs), tuple(ins))))
            elif isinstance(st, CondGate):
                bits = tuple(self.bit_outcome[b] for b in st.bits)
                ins, outs = [], []
                for q in st.gate.qubits:
                    inn, out = advance_sub(q)
                    ins.append(inn)
                    outs.append(out)
                entries.append(_Entry("cond", f"if {st.gate.label()}",
                                      bits + tuple(outs + ins),
                                      (st, bits, tuple(outs), tuple(ins))))
            elif isinstance(st, (Measure, Branch)):
                # the COPY/controlled-gate tensor repertoire covers
                # measurements and classically controlled gates only
                raise CompileError("measurements nested inside branch bodies "
                                   "have no tensor encoding; flatten the circuit")
            else:
                raise TypeError(st)
        for q in body_qubits:
            entries.append(_Entry("ident", f"bridge {q}", (cur[q], post[q]),
                                  (cur[q], post[q])))
        return entries

    def _finish_qubits(self):
        for q in self.spec.qubits:
            if self.touches_left[q] != 0:
                raise CompileError(f"internal: touches left on {q}")
            if q in self.ended:
                continue
            # untouched qubit, or an open-input qubit with no gates
            if q in self.spec.inputs or self.open_inputs:
                final = self.wire(q, self.seg[q])
                if q in self.spec.outputs and (self.mode == "q" or not self.spec.output_bits):
                    out = self.principal_out(q)
                    self.net.entries.append(_Entry("ident", f"out {q}",
                                                   (final, out), (final, out),
                                                   partition=q))
                    self.net.open_names.add(out)
                elif self.mode == "q" and q not in self.spec.outputs:
                    disc = self.discard_index(q)
                    self.net.entries.append(_Entry("ident", f"discard {q}",
                                                   (final, disc), (final, disc),
                                                   partition=q))
                    self.net.open_names.add(disc)
                else:
                    self.net.open_names.add(final)
                self.ended[q] = q
            # untouched fixed-init qubits already had their init emitted
            # directly on the final leg by _final_leg


# -- index ordering -------------------------------------------------------------


def _order_indices(decls: dict[str, _IndexDecl], policy: str) -> list[tuple[str, str]]:
    """Root-first (name, kind) list for the manager."""
    items = list(decls.values())
    if policy == "grouped":
        items.sort(key=lambda d: (d.zone, d.sort_key))
    elif policy == "interleaved":
        # each qubit's wire segments followed by its outcome/principal legs;
        # indices with no owning qubit sink to the bottom
        def key(d):
            if d.qpos is None:
                return (10 ** 6, d.zone, 0, d.sort_key)
            if d.zone == 4:
                return (d.qpos, 0, 0, tuple(d.seg))
            return (d.qpos, 1, d.zone, d.sort_key)
        items.sort(key=key)
    else:
        raise CompileError(f"unknown order policy {policy!r}")
    return [(d.name, d.kind) for d in items]


# -- plans ------------------------------------------------------------------------


@dataclass(frozen=True)
class ContractionPlan:
    mode: str  # "sequential" | "per-qubit-partition"
    partitions: tuple[tuple[str, tuple[str, ...]], ...] = ()


def plan_sequential(spec: CircuitSpec) -> ContractionPlan:
    net = _Builder(spec, _infer_mode(spec), False).build()
    return ContractionPlan("sequential",
                           (("all", tuple(e.label for e in net.entries)),))


def plan_per_qubit(spec: CircuitSpec) -> ContractionPlan:
    net = _Builder(spec, _infer_mode(spec), False).build()
    groups: dict[str, list[str]] = {}
    for e in net.entries:
        groups.setdefault(e.partition, []).append(e.label)
    parts = tuple((q, tuple(groups[q])) for q in spec.qubits if q in groups)
    return ContractionPlan("per-qubit-partition", parts)


def _infer_mode(spec: CircuitSpec) -> str:
    return "m" if spec.output_bits else "q"


# -- evaluation --------------------------------------------------------------------


@dataclass
class CompileStats:
    final_nodes: int = 0
    max_nodes: int = 0
    tdd_time: float = 0.0


@dataclass
class CompileResult:
    tdd: Tdd
    mgr: TddManager
    m_set: tuple[IndexId, ...]
    peel_set: frozenset[IndexId]
    inputs: tuple[IndexId, ...]
    outputs: tuple[IndexId, ...]
    stats: CompileStats
    net: _Netlist


def prepare(specs: Sequence[CircuitSpec], *, mode: str | None = None,
            order: str = "grouped", open_inputs: bool = False):
    """Build netlists for all specs and one shared manager."""
    nets = [
        _Builder(spec, mode or _infer_mode(spec), open_inputs).build()
        for spec in specs
    ]
    decls: dict[str, _IndexDecl] = {}
    for net in nets:
        for name, d in net.decls.items():
            old = decls.get(name)
            if old is not None and (old.kind, old.zone) != (d.kind, d.zone):
                raise CompileError(f"index {name} declared inconsistently")
            decls.setdefault(name, d)
    mgr = TddManager(_order_indices(decls, order))
    return mgr, nets


def _count_uses(entries) -> dict[str, int]:
    uses: dict[str, int] = {}

    def bump(names):
        for n in names:
            uses[n] = uses.get(n, 0) + 1

    for e in entries:
        bump(e.indices)
        if e.kind == "dispatch":
            _, _, bodies, _ = e.payload
            for body in bodies:
                for b in body:
                    bump(b.indices)
    return uses


def _track(mgr, stats, t: Tdd):
    n = mgr.node_count(t)
    if n > stats.max_nodes:
        stats.max_nodes = n


def _entry_tensor(mgr: TddManager, e: _Entry, net: _Netlist, stats,
                  max_open, uses) -> Tdd:
    if e.kind == "init":
        _, state = e.payload
        return mgr.from_dense(INIT_STATES[state], [mgr.index(e.indices[0])])
    if e.kind == "gate":
        g, outs, ins = e.payload
        arr = g.matrix.reshape((2,) * (2 * len(g.qubits)))
        return mgr.from_dense(arr, [mgr.index(n) for n in outs + ins])
    if e.kind == "measure2":
        x, c = e.payload
        return measurement_tensor(mgr, mgr.index(x), mgr.index(c))
    if e.kind == "measure3":
        c, x, y = e.payload
        return measurement_tensor(mgr, mgr.index(x), mgr.index(y), mgr.index(c))
    if e.kind == "ident":
        a, b = e.payload
        return mgr.from_dense(np.eye(2), [mgr.index(a), mgr.index(b)])
    if e.kind == "cond":
        st, bits, outs, ins = e.payload
        return _cond_tensor(mgr, st, bits, outs, ins)
    if e.kind == "dispatch":
        return _dispatch_tensor(mgr, e, net, stats, max_open, uses)
    raise CompileError(f"unknown entry kind {e.kind}")


def _cond_tensor(mgr: TddManager, st: CondGate, bits, outs, ins) -> Tdd:
    k = len(st.gate.qubits)
    if k == 1 and st.func.arity == 1 and st.func.table == (0, 1):
        return controlled_gate_tensor(mgr, st.gate.matrix, mgr.index(bits[0]),
                                      mgr.index(ins[0]), mgr.index(outs[0]))
    arity = st.func.arity
    arr = np.zeros((2,) * arity + (1 << k, 1 << k), dtype=complex)
    eye = np.eye(1 << k, dtype=complex)
    for i in range(1 << arity):
        bvals = tuple((i >> (arity - 1 - j)) & 1 for j in range(arity))
        arr[bvals] = (st.gate.matrix if st.func(bvals) else eye).T  # [x, y] layout
    arr = arr.reshape((2,) * (arity + 2 * k))
    idx = ([mgr.index(n) for n in bits]
           + [mgr.index(n) for n in ins]
           + [mgr.index(n) for n in outs])
    return mgr.from_dense(arr, idx)


def _dispatch_tensor(mgr: TddManager, e: _Entry, net, stats, max_open, uses) -> Tdd:
    st, bits, bodies, sel_name = e.payload
    sel_idx = mgr.index(sel_name)
    bit_idx = [mgr.index(b) for b in bits]
    total = None
    for i, body in enumerate(bodies):
        t = _fold(mgr, body, net, stats, max_open, uses)
        sel = BoolFunc(st.func.arity, 1,
                       tuple(1 if v == i else 0 for v in st.func.table))
        kappa = mgr.slice(func_to_tensor(mgr, sel, bit_idx, sel_idx), sel_idx, 1)
        picked = mgr.contract(kappa, t, set())
        total = picked if total is None else mgr.add(total, picked)
        _track(mgr, stats, total)
    return total if total is not None else mgr.scalar(0.0)


def _fold(mgr: TddManager, entries, net: _Netlist, stats, max_open, uses) -> Tdd:
    out = mgr.scalar(1.0)
    for e in entries:
        g = _entry_tensor(mgr, e, net, stats, max_open, uses)
        for n in e.indices:
            uses[n] -= 1
        dead = {i for i in set(out.indices) & set(g.indices)
                if uses[i.name] == 0 and i.name not in net.open_names}
        out = mgr.contract(out, g, dead)
        if len(out.indices) > max_open:
            raise CompileScaleError(
                f"open rank {len(out.indices)} exceeds the limit {max_open}")
        _track(mgr, stats, out)
    return out


def evaluate(mgr: TddManager, net: _Netlist, plan: ContractionPlan | str = "sequential",
             max_open: int = 26) -> CompileResult:
    plan_mode = plan.mode if isinstance(plan, ContractionPlan) else plan
    stats = CompileStats()
    t0 = time.perf_counter()
    uses = _count_uses(net.entries)
    if plan_mode in ("sequential", "basic"):
        t = _fold(mgr, net.entries, net, stats, max_open, uses)
    elif plan_mode in ("per-qubit-partition", "per-qubit", "partitioned"):
        pieces = list(evaluate_pieces(mgr, net, stats, max_open).values())
        carry: dict[str, int] = {}
        for p in pieces:
            for i in p.indices:
                carry[i.name] = carry.get(i.name, 0) + 1
        t = mgr.scalar(1.0)
        for p in pieces:
            for i in p.indices:
                carry[i.name] -= 1
            dead = {i for i in set(t.indices) & set(p.indices)
                    if carry[i.name] == 0 and i.name not in net.open_names}
            t = mgr.contract(t, p, dead)
            if len(t.indices) > max_open:
                raise CompileScaleError(
                    f"open rank {len(t.indices)} exceeds the limit {max_open}")
            _track(mgr, stats, t)
    else:
        raise CompileError(f"unknown plan {plan_mode!r}")
    stats.tdd_time = time.perf_counter() - t0
    stats.final_nodes = mgr.node_count(t)
    stats.max_nodes = max(stats.max_nodes, stats.final_nodes)
    return CompileResult(
        tdd=t, mgr=mgr,
        m_set=tuple(mgr.index(n) for n in net.m_set),
        peel_set=frozenset(mgr.index(n) for n in net.peel_set),
        inputs=tuple(mgr.index(n) for n in net.in_names),
        outputs=tuple(mgr.index(n) for n in net.out_names),
        stats=stats, net=net)


def evaluate_pieces(mgr: TddManager, net: _Netlist, stats: CompileStats,
                    max_open: int = 26) -> dict[str, Tdd]:
    """Per-qubit partition diagrams; cross-partition cut indices stay open."""
    spec = net.spec
    order_pos = {q: k for k, q in enumerate(spec.qubits)}
    groups: dict[str, list[_Entry]] = {}
    for e in net.entries:
        groups.setdefault(e.partition or spec.qubits[0], []).append(e)
    uses = _count_uses(net.entries)
    pieces: dict[str, Tdd] = {}
    for q in sorted(groups, key=lambda q: order_pos.get(q, 10 ** 6)):
        pieces[q] = _fold(mgr, groups[q], net, stats, max_open, dict(uses))
    return pieces


def compile_spec(spec: CircuitSpec, plan: ContractionPlan | str = "sequential",
                 *, mode: str | None = None, order: str = "grouped",
                 open_inputs: bool = False, max_open: int = 26) -> CompileResult:
    mgr, nets = prepare([spec], mode=mode, order=order, open_inputs=open_inputs)
    return evaluate(mgr, nets[0], plan, max_open)


def compile_pair(spec_a: CircuitSpec, spec_b: CircuitSpec,
                 plan: ContractionPlan | str = "sequential", *,
                 mode: str | None = None, order: str = "grouped",
                 open_inputs: bool = False, max_open: int = 26):
    """Compile two specs in one manager with shared open indices."""
    mgr, nets = prepare([spec_a, spec_b], mode=mode, order=order,
                        open_inputs=open_inputs)
    return (evaluate(mgr, nets[0], plan, max_open),
            evaluate(mgr, nets[1], plan, max_open))
