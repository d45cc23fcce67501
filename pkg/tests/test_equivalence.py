import math
import random

import numpy as np
import pytest

from tddeq import benchmarks as B
from tddeq.circuits import CircuitSpec, Conventional, gate
from tddeq.encode import compile_pair
from tddeq.equivalence import (IndexOrderError, check, get_nodes, m_eq,
                               outcome_masses, q_eq)
from tddeq.oracle import oracle_m_eq, oracle_q_eq
from tddeq.tdd import KIND_OUTCOME, KIND_WIRE, Tdd, TddEdge, TddManager


def meas_mgr(n_meas=1, n_wire=2):
    order = [(f"c{k}", KIND_OUTCOME) for k in range(n_meas)] + \
            [(f"x{k}", KIND_WIRE) for k in range(n_wire)]
    return TddManager(order)


def state_tdd(m, amps, names):
    arr = np.asarray(amps, dtype=complex).reshape((2,) * len(names))
    return m.from_dense(arr, [m.index(n) for n in names])


def test_m_eq_identical_is_true():
    m = meas_mgr()
    t = state_tdd(m, [0.5, 0.5, 0.5, 0.5], ["c0", "x0"])
    assert m_eq(m, t, t, {m.index("c0")})


def test_m_eq_compiled_pe_pair():
    pair = B.pe_pair(2, 0.25)
    ra, rb = compile_pair(pair.spec_a, pair.spec_b)
    assert m_eq(ra.mgr, ra.tdd, rb.tdd, set(ra.m_set))


def test_m_eq_global_scale_is_detected():
    # t vs 2t: branch masses differ by a factor 4
    m = meas_mgr()
    amps = np.array([0.5, 0.5, 0.5, -0.5])
    t1 = state_tdd(m, amps, ["c0", "x0"])
    t2 = state_tdd(m, 2 * amps, ["c0", "x0"])
    witness = []
    assert not m_eq(m, t1, t2, {m.index("c0")}, witness=witness)
    w = witness[0]
    assert abs(w["mass_b"] - 4 * w["mass_a"]) < 1e-9


def test_m_eq_phase_only_difference_is_equivalent():
    m = meas_mgr()
    amps = np.array([0.5, 0.5, 0.5, -0.5])
    t1 = state_tdd(m, amps, ["c0", "x0"])
    t2 = state_tdd(m, np.exp(0.7j) * amps, ["c0", "x0"])
    assert m_eq(m, t1, t2, {m.index("c0")})


def test_m_eq_scaling_property():
    # for single-measurement-index diagrams, m_eq(t, c*t) iff | |c|^2 - 1 | <= eps
    m = meas_mgr()
    rng = np.random.default_rng(3)
    amps = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    amps /= np.linalg.norm(amps)
    t = state_tdd(m, amps, ["c0", "x0"])
    for c, expected in ((1.0, True), (np.exp(1.2j), True), (1.0000001, False),
                        (0.5, False), (-1.0, True)):
        t2 = Tdd(TddEdge(t.root.weight * c, t.root.node), t.indices)
        assert m_eq(m, t, t2, {m.index("c0")}) == expected, c


def test_m_eq_reflexive_symmetric():
    rng = np.random.default_rng(5)
    m = meas_mgr(2, 2)
    names = ["c0", "c1", "x0", "x1"]
    for _ in range(10):
        a = state_tdd(m, rng.standard_normal(16), names)
        b = state_tdd(m, rng.standard_normal(16), names)
        ms = {m.index("c0"), m.index("c1")}
        assert m_eq(m, a, a, ms)
        assert m_eq(m, a, b, ms) == m_eq(m, b, a, ms)


def test_m_eq_index_order_violation_raises():
    # a measurement index below a wire index violates the precondition
    m = TddManager([("x0", KIND_WIRE), ("c0", KIND_OUTCOME)])
    t1 = state_tdd(m, [1.0, 0.0, 0.0, 1.0], ["x0", "c0"])
    t2 = state_tdd(m, [0.0, 1.0, 1.0, 0.0], ["x0", "c0"])
    with pytest.raises(IndexOrderError):
        m_eq(m, t1, t2, {m.index("c0")})


def test_get_nodes_non_measurement_root():
    m = meas_mgr()
    t = state_tdd(m, [1.0, 2.0], ["x0"])
    nodes = get_nodes(m, t, {m.index("c0")})
    assert nodes == {t.root.node}


def test_get_nodes_identical_children_singleton():
    m = meas_mgr()
    # tensor independent of c0: the node is reduced away entirely
    t = state_tdd(m, [1.0, 2.0, 1.0, 2.0], ["c0", "x0"])
    assert len(get_nodes(m, t, {m.index("c0")})) == 1


def test_get_nodes_skips_zero_branches():
    m = meas_mgr()
    t = state_tdd(m, [1.0, 2.0, 0.0, 0.0], ["c0", "x0"])
    nodes = get_nodes(m, t, {m.index("c0")})
    assert len(nodes) == 1


def test_get_nodes_teleport_singleton():
    pair = B.teleport_pair()
    ra, rb = compile_pair(pair.spec_a, pair.spec_b)
    peel = set(ra.peel_set) | set(rb.peel_set)
    na = get_nodes(ra.mgr, ra.tdd, peel)
    nb = get_nodes(rb.mgr, rb.tdd, peel)
    assert len(na) == 1 and na == nb


def test_q_eq_teleport_vs_swap():
    pair = B.teleport_pair()
    ra, rb = compile_pair(pair.spec_a, pair.spec_b)
    peel = set(ra.peel_set) | set(rb.peel_set)
    assert q_eq(ra.mgr, ra.tdd, rb.tdd, peel)
    assert q_eq(ra.mgr, ra.tdd, rb.tdd, peel, strict=True)


def test_q_eq_no_measurement_indices():
    m = meas_mgr()
    t = state_tdd(m, [1.0, 2.0, 3.0, 4.0], ["x0", "x1"])
    assert q_eq(m, t, t, set())


def test_q_eq_dropped_correction_detected():
    from tddeq.circuits import Branch, MeasureStep, Seq
    from tddeq.logic import BoolFunc
    broken = Branch(MeasureStep(("q", "q1"), ("c0", "c1")), BoolFunc.identity(2),
                    (Conventional(()), Conventional((gate("X", ["q2"]),)),
                     Conventional(()),
                     Conventional((gate("X", ["q2"]),))))
    prep = Conventional((gate("H", ["q2"]), gate("CX", ["q2", "q1"]),
                         gate("CX", ["q", "q1"]), gate("H", ["q"])))
    spec = CircuitSpec(qubits=("q", "q1", "q2"), circuit=Seq(prep, broken),
                       fixed_init={"q1": "0", "q2": "0"},
                       inputs=("q",), outputs=("q2",))
    v, _ = check(spec, B.swap_teleport(), "q")
    assert v.status == "not-equivalent"
    assert not oracle_q_eq(spec, B.swap_teleport())


def test_check_qft_pairs_small():
    for n in (2, 3, 4):
        v, _ = check(B.qft(n), B.dyn_qft(n), "m")
        assert v.status == "equivalent"
        assert oracle_m_eq(B.qft(n), B.dyn_qft(n))


def test_check_bitflip_and_identity():
    for err in (None, "q0", "q1", "q2"):
        pair = B.bitflip_pair(err)
        v, _ = check(pair.spec_a, pair.spec_b, "q")
        assert v.status == "equivalent", err


def test_check_mutated_pe_not_equivalent():
    spec = B.dyn_pe(2, 0.25)
    import tddeq.circuits as C
    steps = C.flatten(spec.circuit)
    # replace the S-dagger correction angle: changes the distribution
    mutated = []
    for st in steps:
        if isinstance(st, C.CondGate):
            st = C.CondGate(gate("P", list(st.gate.qubits), [math.pi / 8]),
                            st.bits, st.func, expr=st.expr)
        mutated.append(st)
    bad = CircuitSpec(qubits=spec.qubits, circuit=C.seq(*mutated),
                      fixed_init=dict(spec.fixed_init), inputs=(),
                      outputs=spec.outputs, output_bits=spec.output_bits)
    v, rep = check(B.pe(2, 0.25), bad, "m")
    assert v.status == "not-equivalent"
    assert v.witness
    assert not oracle_m_eq(B.pe(2, 0.25), bad)


def test_check_plans_agree():
    cases = [(B.qft(3), B.dyn_qft(3), "m"),
             (B.pe(3, 0.625), B.dyn_pe(3, 0.625), "m"),
             (B.teleport(), B.swap_teleport(), "q"),
             (B.bitflip_code("q2"), B.identity_on("q0"), "q"),
             (B.state_inject("S"), B.bare_gate("S"), "q")]
    for a, b, mode in cases:
        v1, _ = check(a, b, mode, plan="basic")
        v2, _ = check(a, b, mode, plan="partitioned")
        assert v1.status == v2.status == "equivalent"


def test_partitioned_equivalent_implies_basic_equivalent():
    rng = random.Random(31)
    for _ in range(20):
        mode = rng.choice(["m", "q"])
        a = B.random_dqc(rng, mode, n_qubits=3)
        b = B.rewrite(rng, a) if rng.random() < 0.5 else \
            next(B.mutations(a, rng))[1]
        vp, _ = check(a, b, mode, plan="partitioned")
        if vp.status == "equivalent":
            vb, _ = check(a, b, mode, plan="basic")
            assert vb.status == "equivalent"


def test_verdict_agreement_with_oracle_random():
    rng = random.Random(37)
    for k in range(40):
        mode = "m" if k % 2 == 0 else "q"
        a = B.random_dqc(rng, mode)
        b = B.rewrite(rng, a) if k % 4 < 2 else next(B.mutations(a, rng))[1]
        v, _ = check(a, b, mode)
        assert v.status in ("equivalent", "not-equivalent")
        oracle = oracle_m_eq(a, b) if mode == "m" else oracle_q_eq(a, b)
        assert (v.status == "equivalent") == oracle, (k, mode)


def test_check_incompatible_interfaces_inconclusive():
    v, _ = check(B.teleport(), B.identity_on("q0"), "q")
    assert v.status == "inconclusive"


def test_outcome_masses_uniform_split_on_absent_index():
    m = meas_mgr(2, 1)
    # tensor ignores c1: its mass splits evenly
    amps = np.zeros((2, 2, 2))
    amps[0, :, 0] = 1.0
    amps[1, :, 1] = 1.0
    t = m.from_dense(amps / np.sqrt(4.0),
                     [m.index("c0"), m.index("c1"), m.index("x0")])
    masses = outcome_masses(m, t, {m.index("c0"), m.index("c1")})
    assert all(abs(v - 0.25) < 1e-9 for v in masses.values())
