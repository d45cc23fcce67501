import math
import random

import numpy as np
import pytest

from tddeq import benchmarks as B
from tddeq.circuits import (Branch, CircuitSpec, CondGate, Conventional,
                            Measure, MeasureStep, Seq, flatten, gate,
                            lower_controls, qvar, seq, validate)
from tddeq.logic import BoolFunc
from tddeq.oracle import superoperator


@pytest.mark.parametrize("name,k", [
    ("H", 1), ("X", 1), ("Y", 1), ("Z", 1), ("S", 1), ("SDG", 1), ("T", 1),
    ("TDG", 1), ("CX", 2), ("CZ", 2), ("SWAP", 2),
])
def test_library_gates_are_unitary(name, k):
    g = gate(name, [f"q{i}" for i in range(k)])
    d = 1 << k
    assert np.max(np.abs(g.matrix.conj().T @ g.matrix - np.eye(d))) < 1e-10


@pytest.mark.parametrize("theta", [0.0, 0.1, math.pi / 3, 2.5])
def test_parametric_gates_are_unitary(theta):
    for name, qs in (("P", ["a"]), ("CP", ["a", "b"])):
        g = gate(name, qs, [theta])
        d = g.matrix.shape[0]
        assert np.max(np.abs(g.matrix.conj().T @ g.matrix - np.eye(d))) < 1e-10


def test_sdg_matrix_value():
    assert np.allclose(gate("SDG", ["q"]).matrix, np.diag([1, -1j]))


def test_unknown_gate_rejected():
    with pytest.raises(ValueError):
        gate("FOO", ["q"])


def test_qvar_single_gate():
    assert qvar(Conventional((gate("H", ["q1"]),))) == {"q1"}


def test_qvar_teleport_circuit():
    assert qvar(B.teleport().circuit) == {"q", "q1", "q2"}


def test_qvar_seq_union():
    a = Conventional((gate("H", ["q0"]),))
    b = Conventional((gate("X", ["q1"]),))
    assert qvar(Seq(a, b)) == qvar(a) | qvar(b)


def test_validate_teleport_ok():
    assert validate(B.teleport()) == []


def test_validate_branch_on_measured_qubit():
    # a branch body acting on a measured qubit violates the side condition
    bad = Branch(MeasureStep(("q0",), ("c",)), BoolFunc.identity(1),
                 (Conventional(()), Conventional((gate("X", ["q0"]),))))
    spec = CircuitSpec(qubits=("q0",), circuit=bad, fixed_init={"q0": "0"})
    errs = validate(spec)
    assert any("acts on measured" in e for e in errs)


def test_validate_m_mode_requires_no_principal_inputs():
    spec = CircuitSpec(qubits=("q0",),
                       circuit=Measure(MeasureStep(("q0",), ("c",))),
                       fixed_init={}, inputs=("q0",), outputs=("q0",),
                       output_bits=("c",))
    errs = validate(spec)
    assert any("principal inputs" in e for e in errs)


def test_validate_reports_unmeasured_output_bit():
    spec = CircuitSpec(qubits=("q0",), circuit=Conventional(()),
                       fixed_init={"q0": "0"}, output_bits=("c",))
    errs = validate(spec)
    assert any("never measured" in e for e in errs)


def test_validate_bit_used_before_measurement():
    spec = CircuitSpec(
        qubits=("q0",),
        circuit=CondGate(gate("X", ["q0"]), ("c",), BoolFunc.identity(1)),
        fixed_init={"q0": "0"})
    errs = validate(spec)
    assert any("before measurement" in e for e in errs)


def test_validate_is_total_on_junk():
    # arbitrary wrong shapes produce error lists, not crashes
    spec = CircuitSpec(qubits=("q0", "q0"), circuit=Conventional(()),
                       fixed_init={}, inputs=("nope",), outputs=("also-no",))
    errs = validate(spec)
    assert errs


def test_lower_controls_teleport_factorises():
    lowered = lower_controls(B.teleport().circuit)
    steps = flatten(lowered)
    conds = [s for s in steps if isinstance(s, CondGate)]
    assert [c.gate.name for c in conds] == ["X", "Z"]
    # X is driven by the second measured bit (q1's), Z by the first (q's)
    assert conds[0].func.table == (0, 1, 0, 1)
    assert conds[1].func.table == (0, 0, 1, 1)
    assert all(c.bits == ("c0", "c1") for c in conds)


def test_lower_controls_without_branch_is_identity():
    c = Conventional((gate("H", ["q0"]), gate("CX", ["q0", "q1"])))
    assert lower_controls(c) is c


def test_lower_controls_general_fallback():
    # branches {I, X, H, Z} do not factorise into per-bit generators
    br = Branch(MeasureStep(("a", "b"), ("c0", "c1")), BoolFunc.identity(2),
                (Conventional(()), Conventional((gate("X", ["t"]),)),
                 Conventional((gate("H", ["t"]),)),
                 Conventional((gate("Z", ["t"]),))))
    steps = flatten(lower_controls(br))
    conds = [s for s in steps if isinstance(s, CondGate)]
    assert len(conds) == 3
    for c in conds:
        assert sum(c.func.table) == 1  # one guard per branch value


def test_lower_controls_preserves_semantics_on_random_circuits():
    rng = random.Random(99)
    for trial in range(15):
        prep = Conventional(tuple(
            gate(rng.choice(["H", "X", "S", "T"]), [rng.choice(["q0", "q1", "q2"])])
            for _ in range(4)))
        branches = []
        for i in range(4):
            gates = tuple(gate(rng.choice(["X", "Z", "S"]), ["q2"])
                          for _ in range(rng.randint(0, 2)))
            branches.append(Conventional(gates))
        br = Branch(MeasureStep(("q0", "q1"), ("c0", "c1")),
                    BoolFunc.identity(2), tuple(branches))
        spec = CircuitSpec(qubits=("q0", "q1", "q2"), circuit=Seq(prep, br),
                           fixed_init={"q0": "0", "q1": "+", "q2": "0"},
                           inputs=(), outputs=("q2",))
        lowered = CircuitSpec(qubits=spec.qubits,
                              circuit=lower_controls(spec.circuit),
                              fixed_init=dict(spec.fixed_init),
                              inputs=spec.inputs, outputs=spec.outputs)
        assert validate(lowered) == []
        c1 = superoperator(spec)
        c2 = superoperator(lowered)
        assert np.max(np.abs(c1 - c2)) < 1e-10


def test_qvar_invariant_under_lower_controls():
    circ = B.teleport().circuit
    assert qvar(lower_controls(circ)) == qvar(circ)


def test_seq_builder_drops_empty_segments():
    c = seq(Conventional(()), Conventional((gate("H", ["q"]),)), Conventional(()))
    assert isinstance(c, Conventional)
    assert len(c.gates) == 1
