"""Dynamic quantum circuit model.

A dynamic circuit is built inductively from conventional gate segments, a
measurement-dispatched branch construct, and sequential composition.  Two
additional step forms, ``Measure`` and ``CondGate``, are the lowered shape of
a branch (measure first, then classically controlled gates); generators and
the text format use them directly and ``lower_controls`` rewrites branches
into them where possible.

A ``CircuitSpec`` wraps a circuit with its declared qubits, a fixed product
input state on the non-principal inputs, the principal input/output qubits,
and the classical output bits.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .logic import BoolFunc

UNITARY_TOL = 1e-10


def _frozen(mat) -> np.ndarray:
    arr = np.asarray(mat, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Gate:
    """A named unitary on an ordered qubit tuple, params in radians."""

    name: str
    params: tuple[float, ...]
    qubits: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self):
        k = len(self.qubits)
        if self.matrix.shape != (1 << k, 1 << k):
            raise ValueError(f"{self.name}: matrix shape does not match {k} qubits")
        if len(set(self.qubits)) != k:
            raise ValueError(f"{self.name}: repeated qubit")

    def label(self) -> str:
        if self.params:
            inner = ",".join(repr(p) for p in self.params)
            return f"{self.name}({inner})"
        return self.name


_SQ2 = 1.0 / math.sqrt(2.0)

_FIXED = {
    "H": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]]),
    "X": np.array([[0, 1], [1, 0]]),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.array([[1, 0], [0, -1]]),
    "S": np.diag([1, 1j]),
    "SDG": np.diag([1, -1j]),
    "T": np.diag([1, cmath.exp(0.25j * math.pi)]),
    "TDG": np.diag([1, cmath.exp(-0.25j * math.pi)]),
    "CX": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]),
    "CZ": np.diag([1, 1, 1, -1]),
    "SWAP": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]),
}


def gate(name: str, qubits: Sequence[str], params: Sequence[float] = ()) -> Gate:
    """Library constructor; knows H X Y Z S SDG T TDG CX CZ SWAP P CP."""
    name = name.upper()
    params = tuple(float(p) for p in params)
    if name in _FIXED:
        if params:
            raise ValueError(f"{name} takes no parameters")
        mat = _FIXED[name]
    elif name == "P":
        (theta,) = params
        mat = np.diag([1.0, cmath.exp(1j * theta)])
    elif name == "CP":
        (theta,) = params
        mat = np.diag([1.0, 1.0, 1.0, cmath.exp(1j * theta)])
    else:
        raise ValueError(f"unknown gate {name!r}")
    g = Gate(name, params, tuple(qubits), _frozen(mat))
    _check_unitary(g)
    return g


def controlled_power(phi: float, j: int, control: str, target: str) -> Gate:
    """controlled-U^(2^j) for the diagonal phase U = diag(1, e^{2 pi i phi})."""
    return gate("CP", (control, target), (2.0 * math.pi * phi * (1 << j) % (2.0 * math.pi),))


def _check_unitary(g: Gate):
    d = g.matrix.shape[0]
    err = np.max(np.abs(g.matrix.conj().T @ g.matrix - np.eye(d)))
    if err > UNITARY_TOL:
        raise ValueError(f"{g.name}: matrix is not unitary (deviation {err:.2e})")


@dataclass(frozen=True)
class MeasureStep:
    """Computational-basis measurement of ``qubits`` into classical ``bits``."""

    qubits: tuple[str, ...]
    bits: tuple[str, ...]

    def __post_init__(self):
        if len(self.qubits) != len(self.bits):
            raise ValueError("one classical bit per measured qubit")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError("measured qubits must be distinct")


@dataclass(frozen=True)
class Conventional:
    gates: tuple[Gate, ...]


@dataclass(frozen=True)
class Measure:
    step: MeasureStep


@dataclass(frozen=True)
class CondGate:
    """Gate applied when ``func`` of the (already measured) bits equals 1."""

    gate: Gate
    bits: tuple[str, ...]
    func: BoolFunc
    expr: str = ""

    def __post_init__(self):
        if self.func.arity != len(self.bits) or self.func.outputs != 1:
            raise ValueError("control function shape mismatch")


@dataclass(frozen=True)
class Branch:
    """Measure ``measure.qubits``, dispatch through ``func``, run one branch."""

    measure: MeasureStep
    func: BoolFunc
    branches: tuple["DynCircuit", ...]
    exprs: tuple[str, ...] = ()

    def __post_init__(self):
        if self.func.arity != len(self.measure.qubits):
            raise ValueError("dispatch arity must equal the number of measured qubits")
        if len(self.branches) != 1 << self.func.outputs:
            raise ValueError("need exactly 2^t branches")


@dataclass(frozen=True)
class Seq:
    first: "DynCircuit"
    second: "DynCircuit"


DynCircuit = Union[Conventional, Measure, CondGate, Branch, Seq]


def seq(*parts: DynCircuit) -> DynCircuit:
    parts = [p for p in parts if not (isinstance(p, Conventional) and not p.gates)]
    if not parts:
        return Conventional(())
    out = parts[0]
    for p in parts[1:]:
        out = Seq(out, p)
    return out


def qvar(c: DynCircuit) -> frozenset[str]:
    """Qubits the circuit operates on; a branch contributes only its bodies."""
    if isinstance(c, Conventional):
        out: frozenset[str] = frozenset()
        for g in c.gates:
            out |= frozenset(g.qubits)
        return out
    if isinstance(c, Measure):
        return frozenset(c.step.qubits)
    if isinstance(c, CondGate):
        return frozenset(c.gate.qubits)
    if isinstance(c, Branch):
        out = frozenset()
        for b in c.branches:
            out |= qvar(b)
        return out
    if isinstance(c, Seq):
        return qvar(c.first) | qvar(c.second)
    raise TypeError(f"not a circuit: {c!r}")


INIT_STATES = {
    "0": np.array([1.0, 0.0], dtype=complex),
    "1": np.array([0.0, 1.0], dtype=complex),
    "+": np.array([_SQ2, _SQ2], dtype=complex),
}


@dataclass(frozen=True)
class CircuitSpec:
    """(circuit, fixed input state, principal inputs, principal outputs)."""

    qubits: tuple[str, ...]
    circuit: DynCircuit
    fixed_init: dict[str, str] = field(default_factory=dict)
    inputs: tuple[str, ...] = ()
    outputs: tuple[str, ...] = ()
    output_bits: tuple[str, ...] = ()


@dataclass(frozen=True)
class Verdict:
    """Equivalent, NotEquivalent (with a witness), or Inconclusive."""

    status: str  # "equivalent" | "not-equivalent" | "inconclusive"
    witness: object = None
    reason: str = ""

    @staticmethod
    def equivalent() -> "Verdict":
        return Verdict("equivalent")

    @staticmethod
    def not_equivalent(witness) -> "Verdict":
        return Verdict("not-equivalent", witness=witness)

    @staticmethod
    def inconclusive(reason: str) -> "Verdict":
        return Verdict("inconclusive", reason=reason)

    def __bool__(self):
        return self.status == "equivalent"


# -- validation -------------------------------------------------------------


def _walk_bits(c: DynCircuit, measured: dict[str, int], errors: list[str],
               guaranteed: set[str], loc: str = "circuit"):
    """Collect measured bits, check write-once bits and bit-before-use order.

    ``guaranteed`` receives bits measured on every execution path.
    """
    if isinstance(c, Conventional):
        return
    if isinstance(c, Measure):
        for b in c.step.bits:
            if b in measured:
                errors.append(f"{loc}: bit {b} measured twice")
            measured[b] = 1
            guaranteed.add(b)
        return
    if isinstance(c, CondGate):
        for b in c.bits:
            if b not in measured:
                errors.append(f"{loc}: control bit {b} used before measurement")
        return
    if isinstance(c, Branch):
        for b in c.measure.bits:
            if b in measured:
                errors.append(f"{loc}: bit {b} measured twice")
            measured[b] = 1
            guaranteed.add(b)
        sub_guaranteed = None
        for i, body in enumerate(c.branches):
            overlap = frozenset(c.measure.qubits) & qvar(body)
            if overlap:
                errors.append(f"{loc}: branch {i} acts on measured qubits {sorted(overlap)}")
            g: set[str] = set()
            _walk_bits(body, measured, errors, g, f"{loc}/branch{i}")
            sub_guaranteed = g if sub_guaranteed is None else (sub_guaranteed & g)
        if sub_guaranteed:
            guaranteed.update(sub_guaranteed)
        return
    if isinstance(c, Seq):
        _walk_bits(c.first, measured, errors, guaranteed, loc)
        _walk_bits(c.second, measured, errors, guaranteed, loc)
        return
    errors.append(f"{loc}: unknown construct {type(c).__name__}")


def _all_gates(c: DynCircuit):
    if isinstance(c, Conventional):
        yield from c.gates
    elif isinstance(c, CondGate):
        yield c.gate
    elif isinstance(c, Branch):
        for b in c.branches:
            yield from _all_gates(b)
    elif isinstance(c, Seq):
        yield from _all_gates(c.first)
        yield from _all_gates(c.second)


def _all_measured_qubits(c: DynCircuit):
    if isinstance(c, Measure):
        yield from c.step.qubits
    elif isinstance(c, Branch):
        yield from c.measure.qubits
        for b in c.branches:
            yield from _all_measured_qubits(b)
    elif isinstance(c, Seq):
        yield from _all_measured_qubits(c.first)
        yield from _all_measured_qubits(c.second)


def validate(spec: CircuitSpec) -> list[str]:
    """All structural invariants; returns an error list, empty when valid."""
    errors: list[str] = []
    declared = set(spec.qubits)
    if len(declared) != len(spec.qubits):
        errors.append("duplicate qubit declaration")
    for q in qvar(spec.circuit) | set(_all_measured_qubits(spec.circuit)):
        if q not in declared:
            errors.append(f"undeclared qubit {q}")
    for q in spec.inputs:
        if q not in declared:
            errors.append(f"principal input {q} not declared")
    for q in spec.outputs:
        if q not in declared:
            errors.append(f"principal output {q} not declared")
    expected_init = declared - set(spec.inputs)
    if set(spec.fixed_init) != expected_init:
        missing = expected_init - set(spec.fixed_init)
        extra = set(spec.fixed_init) - expected_init
        if missing:
            errors.append(f"missing fixed init for {sorted(missing)}")
        if extra:
            errors.append(f"fixed init on principal inputs {sorted(extra)}")
    for q, s in spec.fixed_init.items():
        if s not in INIT_STATES:
            errors.append(f"unknown init state {s!r} for {q}")
    for g in _all_gates(spec.circuit):
        try:
            _check_unitary(g)
        except ValueError as exc:
            errors.append(str(exc))
        for q in g.qubits:
            if q not in declared:
                errors.append(f"gate {g.name} on undeclared qubit {q}")
    measured: dict[str, int] = {}
    guaranteed: set[str] = set()
    _walk_bits(spec.circuit, measured, errors, guaranteed)
    for b in spec.output_bits:
        if b not in measured:
            errors.append(f"output bit {b} is never measured")
        elif b not in guaranteed:
            errors.append(f"output bit {b} is not measured on every path")
    if spec.output_bits and spec.inputs:
        errors.append("m-mode spec (with output bits) requires empty principal inputs")
    return errors


# -- lowering -----------------------------------------------------------------


def _branch_unitary(c: DynCircuit) -> np.ndarray | None:
    """Product matrix of a purely conventional branch body over qvar order."""
    if isinstance(c, Conventional):
        qs = sorted(qvar(c))
        dim = 1 << len(qs)
        mat = np.eye(dim, dtype=complex)
        for g in c.gates:
            mat = _embed(g.matrix, [qs.index(q) for q in g.qubits], len(qs)) @ mat
        return mat
    return None


def _embed(mat: np.ndarray, positions: list[int], n: int) -> np.ndarray:
    """Expand a k-qubit matrix to n qubits (MSB-first qubit positions)."""
    k = len(positions)
    tensor = mat.reshape((2,) * (2 * k))
    full = np.eye(1 << n, dtype=complex).reshape((2,) * (2 * n))
    full = np.tensordot(tensor, full, axes=(list(range(k, 2 * k)), positions))
    # tensordot puts the k fresh output axes first; move them back in place
    remaining = [a for a in range(2 * n) if a not in positions]
    perm = [0] * (2 * n)
    for i, p in enumerate(positions):
        perm[p] = i
    for i, p in enumerate(remaining):
        perm[p] = k + i
    full = np.transpose(full, perm)
    return full.reshape(1 << n, 1 << n)


def lower_controls(c: DynCircuit) -> DynCircuit:
    """Rewrite branches over conventional bodies into measure + cond-gate steps.

    When the branch family factorises as products of per-bit gates the
    rewrite emits one single-bit controlled gate per dispatch bit; otherwise
    each branch body's gates are guarded by the indicator of its dispatch
    value.  Branches with non-conventional bodies are lowered recursively but
    keep their branch structure.
    """
    if isinstance(c, (Conventional, Measure, CondGate)):
        return c
    if isinstance(c, Seq):
        return Seq(lower_controls(c.first), lower_controls(c.second))
    if isinstance(c, Branch):
        if all(isinstance(b, Conventional) for b in c.branches):
            steps: list[DynCircuit] = [Measure(c.measure)]
            lowered = _lower_branch_gates(c)
            steps.extend(lowered)
            return seq(*steps)
        return Branch(c.measure, c.func,
                      tuple(lower_controls(b) for b in c.branches), c.exprs)
    raise TypeError(f"not a circuit: {c!r}")


def _lower_branch_gates(c: Branch) -> list[CondGate]:
    factored = _try_factor(c)
    if factored is not None:
        return factored
    out: list[CondGate] = []
    for i, body in enumerate(c.branches):
        if not body.gates:
            continue
        sel = BoolFunc(c.func.arity, 1,
                       tuple(1 if v == i else 0 for v in c.func.table))
        for g in body.gates:
            out.append(CondGate(g, c.measure.bits, sel))
    return out


def _try_factor(c: Branch) -> list[CondGate] | None:
    """Detect branch families of the form prod_b G_b^{bit_b(i)}.

    When the family factorises, one classically controlled gate per dispatch
    bit is emitted instead of one guard per branch value (e.g. the
    teleportation corrections {I, X, Z, ZX} become X under the low bit
    followed by Z under the high bit).
    """
    t = c.func.outputs
    all_qs = sorted(qvar(c))
    if not all_qs:
        return []
    mats = [_branch_unitary(b) for b in c.branches]
    if any(m is None for m in mats):
        return None
    dim = 1 << len(all_qs)
    full = []
    for b, m in zip(c.branches, mats):
        qs = sorted(qvar(b))
        full.append(_embed(m, [all_qs.index(q) for q in qs], len(all_qs))
                    if qs else np.eye(dim, dtype=complex))
    gens = [full[1 << (t - 1 - b)] for b in range(t)]

    def matches(low_bit_first: bool) -> bool:
        for i in range(1 << t):
            prod = np.eye(dim, dtype=complex)
            order = range(t) if low_bit_first else reversed(range(t))
            for b in order:
                if (i >> (t - 1 - b)) & 1:
                    prod = prod @ gens[b]   # rightmost factor acts first
            if np.max(np.abs(prod - full[i])) > 1e-9:
                return False
        return True

    if matches(low_bit_first=True):
        emit_order = list(reversed(range(t)))
    elif matches(low_bit_first=False):
        emit_order = list(range(t))
    else:
        return None
    out = []
    for b in emit_order:
        gen_circ = c.branches[1 << (t - 1 - b)]
        if not isinstance(gen_circ, Conventional) or not gen_circ.gates:
            continue
        sel = c.func.output_bit(b)
        for g in gen_circ.gates:
            out.append(CondGate(g, c.measure.bits, sel))
    return out


def flatten(c: DynCircuit) -> list[DynCircuit]:
    """Temporal step list; Branch constructs stay as single steps."""
    if isinstance(c, Seq):
        return flatten(c.first) + flatten(c.second)
    if isinstance(c, Conventional):
        return [Conventional((g,)) for g in c.gates]
    return [c]
