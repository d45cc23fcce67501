import json
import pathlib

import pytest

from tddeq.cli import main

GOLDEN = pathlib.Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    records = [json.loads(line) for line in out.out.splitlines() if line.strip()]
    return code, records


def test_check_qft4_exit_zero_and_nodes(capsys):
    code, recs = run(capsys, "check", str(GOLDEN / "qft_4.dqc"),
                     str(GOLDEN / "dyn_qft_4.dqc"), "--mode", "m")
    assert code == 0
    assert recs[0]["verdict"] == "equivalent"
    assert recs[0]["nodes"] == 31  # conventional-side construction size


def test_check_teleport_q_mode(capsys):
    code, recs = run(capsys, "check", str(GOLDEN / "teleport.dqc"),
                     str(GOLDEN / "swap_teleport.dqc"), "--mode", "q")
    assert code == 0
    assert recs[0]["verdict"] == "equivalent"


def test_check_full_mode_oracle(capsys):
    code, recs = run(capsys, "check", str(GOLDEN / "state_inject_t.dqc"),
                     str(GOLDEN / "bare_t.dqc"), "--mode", "full")
    assert code == 0


def test_check_mutated_exits_one(tmp_path, capsys):
    import random
    from tddeq import benchmarks as B
    from tddeq.oracle import oracle_q_eq
    from tddeq.textfmt import print_spec
    rng = random.Random(2)
    for desc, mut in B.mutations(B.teleport(), rng, count=30):
        from tddeq.circuits import validate
        if validate(mut) or oracle_q_eq(mut, B.swap_teleport()):
            continue
        f = tmp_path / "mutated.dqc"
        f.write_text(print_spec(mut))
        code, recs = run(capsys, "check", str(f),
                         str(GOLDEN / "swap_teleport.dqc"), "--mode", "q")
        assert code == 1
        assert recs[0]["verdict"] == "not-equivalent"
        assert "witness" in recs[0]
        return
    pytest.fail("no breaking mutation found")


def test_check_parse_error_exits_two(tmp_path, capsys):
    f = tmp_path / "bad.dqc"
    f.write_text("qubits q0\ngate NOPE q0\n")
    code, _ = run(capsys, "check", str(f), str(GOLDEN / "bare_t.dqc"),
                  "--mode", "q")
    assert code == 2


def test_check_missing_file_exits_two(capsys):
    code, _ = run(capsys, "check", "/nonexistent/a.dqc", "/nonexistent/b.dqc")
    assert code == 2


def test_bench_qec_rows(capsys):
    code, recs = run(capsys, "bench", "--suite", "qec")
    assert code == 0
    names = [r["benchmark"] for r in recs]
    assert names == ["Bitflip", "Phaseflip", "State_inject_S",
                     "State_inject_T", "Teleportation"]
    for r in recs:
        assert r["verdict"] == "equivalent"
        for field in ("benchmark", "mode", "plan", "verdict", "tdd_time",
                      "time", "nodes", "m_nodes"):
            assert field in r


def test_bench_qft_small(capsys):
    code, recs = run(capsys, "bench", "--suite", "qft", "--max-n", "4")
    assert code == 0
    assert len(recs) == 3
    by_name = {r["benchmark"]: r for r in recs}
    assert by_name["qft_4"]["nodes"] == 31
    assert by_name["qft_3"]["nodes"] == 15
    assert by_name["qft_2"]["nodes"] == 7


def test_bench_partitioned_plan(capsys):
    code, recs = run(capsys, "bench", "--suite", "qft", "--max-n", "3",
                     "--plan", "partitioned")
    assert code == 0
    assert all(r["verdict"] == "equivalent" for r in recs)


def test_bench_requires_suite(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bench"])
    assert exc.value.code == 2  # argparse usage error


def test_exit_codes_are_verdict_function(tmp_path, capsys):
    # same pair, both plans: identical verdict, identical exit code
    args = ["check", str(GOLDEN / "pe_2.dqc"), str(GOLDEN / "dyn_pe_2.dqc"),
            "--mode", "m"]
    c1, r1 = run(capsys, *args)
    c2, r2 = run(capsys, *args, "--plan", "partitioned")
    assert c1 == c2 == 0
    assert r1[0]["verdict"] == r2[0]["verdict"]
