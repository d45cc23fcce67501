"""Boolean functions, reduced ordered BDDs, and their lift to tensors.

A Boolean function f : {0,1}^n -> {0,1}^t dispatches classically controlled
parts of a circuit.  For the tensor network it is lifted to a 0/1 tensor
phi(x1..xn, y) = [f(x) = y], one output index per output bit; composing
classical gates is then plain contraction over the wired indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .tdd import IndexId, Tdd, TddEdge, TddManager


@dataclass(frozen=True)
class BoolFunc:
    """Total function {0,1}^n -> {0,1}^t stored as a truth table.

    ``table[i]`` is the integer output for input ``i`` read MSB-first
    (input bit 0 is the most significant position).
    """

    arity: int
    outputs: int
    table: tuple[int, ...]

    def __post_init__(self):
        if len(self.table) != 1 << self.arity:
            raise ValueError("truth table size does not match arity")
        if any(v < 0 or v >= 1 << self.outputs for v in self.table):
            raise ValueError("table value out of range")

    def __call__(self, bits: Sequence[int]) -> int:
        i = 0
        for b in bits:
            i = (i << 1) | (b & 1)
        return self.table[i]

    def output_bit(self, b: int) -> "BoolFunc":
        """Single-output restriction to output bit ``b`` (MSB first)."""
        shift = self.outputs - 1 - b
        return BoolFunc(self.arity, 1, tuple((v >> shift) & 1 for v in self.table))

    @staticmethod
    def identity(n: int) -> "BoolFunc":
        return BoolFunc(n, n, tuple(range(1 << n)))

    @staticmethod
    def constant(n: int, value: int, outputs: int = 1) -> "BoolFunc":
        return BoolFunc(n, outputs, tuple(value for _ in range(1 << n)))

    @staticmethod
    def from_callable(n: int, outputs: int, fn) -> "BoolFunc":
        vals = []
        for i in range(1 << n):
            bits = [(i >> (n - 1 - k)) & 1 for k in range(n)]
            vals.append(int(fn(bits)))
        return BoolFunc(n, outputs, tuple(vals))

    # line-oriented truth table text: one `bits -> bits` line per assignment
    def to_text(self) -> str:
        lines = []
        for i in range(1 << self.arity):
            ins = format(i, f"0{self.arity}b") if self.arity else ""
            outs = format(self.table[i], f"0{self.outputs}b")
            lines.append(f"{ins} -> {outs}")
        return "\n".join(lines)

    @staticmethod
    def from_text(text: str) -> "BoolFunc":
        rows = {}
        arity = outputs = None
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            left, _, right = line.partition("->")
            ins, outs = left.strip(), right.strip()
            if arity is None:
                arity, outputs = len(ins), len(outs)
            if len(ins) != arity or len(outs) != outputs:
                raise ValueError(f"inconsistent truth table row: {line!r}")
            rows[int(ins, 2) if ins else 0] = int(outs, 2)
        if arity is None:
            raise ValueError("empty truth table")
        if len(rows) != 1 << arity:
            raise ValueError("truth table is not total")
        return BoolFunc(arity, outputs, tuple(rows[i] for i in range(1 << arity)))


class BddNode:
    """ROBDD node; terminals are the shared ``ZERO``/``ONE`` singletons."""

    __slots__ = ("var", "lo", "hi")

    def __init__(self, var, lo, hi):
        self.var = var
        self.lo = lo
        self.hi = hi


class Bdd:
    """Reduced ordered BDD over an explicit variable order (root first)."""

    def __init__(self, order: Sequence[str]):
        self.order = tuple(order)
        self._level = {v: k for k, v in enumerate(self.order)}
        self.zero = BddNode(None, None, None)
        self.one = BddNode(None, None, None)
        self._unique: dict[tuple, BddNode] = {}
        self.root = self.zero

    def _mk(self, var, lo, hi):
        if lo is hi:
            return lo
        key = (var, id(lo), id(hi))
        node = self._unique.get(key)
        if node is None:
            node = BddNode(var, lo, hi)
            self._unique[key] = node
        return node

    @staticmethod
    def from_func(f: BoolFunc, order: Sequence[str]) -> "Bdd":
        """Build the canonical BDD of a single-output function."""
        if f.outputs != 1:
            raise ValueError("from_func expects a single-output function")
        if len(order) != f.arity:
            raise ValueError("order length does not match arity")
        b = Bdd(order)

        def build(level, prefix):
            if level == f.arity:
                return b.one if f.table[prefix] else b.zero
            lo = build(level + 1, prefix << 1)
            hi = build(level + 1, (prefix << 1) | 1)
            return b._mk(b.order[level], lo, hi)

        b.root = build(0, 0)
        return b

    def evaluate(self, bits: Sequence[int]) -> int:
        env = dict(zip(self.order, bits))
        node = self.root
        while node not in (self.zero, self.one):
            node = node.hi if env[node.var] else node.lo
        return 1 if node is self.one else 0

    def node_count(self) -> int:
        seen = set()
        stack = [self.root]
        while stack:
            n = stack.pop()
            if id(n) in seen:
                continue
            seen.add(id(n))
            if n not in (self.zero, self.one):
                stack.extend((n.lo, n.hi))
        return len(seen)


def func_to_tensor(mgr: TddManager, f: BoolFunc, inputs: Sequence[IndexId],
                   y: IndexId) -> Tdd:
    """Lift a single-output function to the 0/1 tensor [f(x) = y]."""
    if f.outputs != 1:
        raise ValueError("func_to_tensor expects a single-output function")
    if len(inputs) != f.arity:
        raise ValueError("input index count does not match arity")
    shape = (2,) * (f.arity + 1)
    arr = np.zeros(shape)
    for i in range(1 << f.arity):
        bits = tuple((i >> (f.arity - 1 - k)) & 1 for k in range(f.arity))
        arr[bits + (f.table[i],)] = 1.0
    return mgr.from_dense(arr, list(inputs) + [y])


def bdd_to_tdd(mgr: TddManager, b: Bdd, var_index: dict[str, IndexId],
               y: IndexId) -> Tdd:
    """Structural BDD import: terminal-0 edges are redirected to the y-node
    with successors (1, 0), terminal-1 edges to the y-node with (0, 1).
    """
    for v, a in zip(b.order, b.order[1:]):
        if var_index[v].rank <= var_index[a].rank:
            raise ValueError("BDD variable order conflicts with the index order")
    if any(var_index[v].rank <= y.rank for v in b.order):
        raise ValueError("output index must sit below every BDD variable")
    y0 = mgr.mk_edge(y, mgr.one, mgr.zero)   # indicator [y = 0]
    y1 = mgr.mk_edge(y, mgr.zero, mgr.one)   # indicator [y = 1]
    memo: dict[int, TddEdge] = {id(b.zero): y0, id(b.one): y1}

    def rec(node):
        got = memo.get(id(node))
        if got is not None:
            return got
        edge = mgr.mk_edge(var_index[node.var], rec(node.lo), rec(node.hi))
        memo[id(node)] = edge
        return edge

    root = rec(b.root)
    return mgr.tdd(root, [var_index[v] for v in b.order] + [y])


def compose_logic(mgr: TddManager, parts: Iterable[Tdd],
                  internal: Iterable[IndexId]) -> Tdd:
    """Contract lifted gate tensors over their wired output/input indices."""
    parts = list(parts)
    internal = set(internal)
    if not parts:
        raise ValueError("nothing to compose")
    out = parts[0]
    for k, part in enumerate(parts[1:], start=1):
        seen_later = set()
        for later in parts[k + 1:]:
            seen_later.update(later.indices)
        dead = (set(out.indices) & set(part.indices) & internal) - seen_later
        out = mgr.contract(out, part, dead)
    return out
