"""Equivalence checking: the measurement-distribution and output-state modes.

Compares conventional and dynamic phase estimation (m-mode), teleportation
against a plain SWAP (q-mode), and shows how a dropped correction is caught
with an oracle-checkable witness.
"""

import random

from tddeq import check
from tddeq.benchmarks import (bitflip_pair, mutations, pe_pair, state_inject_pair,
                              teleport_pair)
from tddeq.circuits import validate
from tddeq.oracle import oracle_q_eq

print("== m-equivalence: conventional vs dynamic phase estimation ==")
pair = pe_pair(3, 0.625)
verdict, report = check(pair.spec_a, pair.spec_b, "m")
print(f"  {pair.name}: {verdict.status}  "
      f"(max {report.max_nodes} nodes, {report.total_time:.3f}s)")

print("\n== q-equivalence: teleportation vs SWAP, codes, injection ==")
for pair in (teleport_pair(), bitflip_pair("q2"), state_inject_pair("T")):
    verdict, report = check(pair.spec_a, pair.spec_b, "q")
    print(f"  {pair.name}: {verdict.status}")

print("\n== both contraction plans give one verdict ==")
pair = teleport_pair()
for plan in ("basic", "partitioned"):
    verdict, report = check(pair.spec_a, pair.spec_b, "q", plan=plan)
    print(f"  plan={plan}: {verdict.status} (discarded {report.discarded} partitions)")

print("\n== a dropped correction is caught ==")
rng = random.Random(5)
pair = teleport_pair()
for desc, mutated in mutations(pair.spec_a, rng):
    if validate(mutated) or oracle_q_eq(mutated, pair.spec_b):
        continue
    verdict, report = check(mutated, pair.spec_b, "q")
    print(f"  mutation: {desc}")
    print(f"  checker: {verdict.status}, witness: {verdict.witness}")
    print(f"  dense oracle agrees: {not oracle_q_eq(mutated, pair.spec_b)}")
    break
