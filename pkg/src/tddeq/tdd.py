"""Tensor decision diagrams over Boolean indices.

A TDD represents a complex tensor phi : {0,1}^I -> C as a reduced, weighted,
ordered decision diagram.  Every node is hash-consed in a per-manager unique
table, so structural equality of tensors (up to the weight grid) is pointer
equality of root nodes.  Outgoing weights of every node are normalised by the
first nonzero weight (low successor first), which fixes a canonical form.

All diagrams built by one ``TddManager`` share a single global index order;
the root of a diagram carries the highest-ranked index, the terminal node has
rank 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

KIND_WIRE = "quantum-wire"
KIND_OUTCOME = "classical-outcome"
KIND_PRINCIPAL = "principal-output"

_KINDS = (KIND_WIRE, KIND_OUTCOME, KIND_PRINCIPAL)

ZERO_KEY = (0, 0)


@dataclass(frozen=True)
class IndexId:
    """One position of the shared global index order."""

    name: str
    rank: int  # higher rank = nearer the root; terminal is rank 0
    kind: str

    def __repr__(self):
        return f"{self.name}@{self.rank}"


class TddNode:
    """Hash-consed diagram node; the terminal has ``index None`` and rank 0."""

    __slots__ = ("index", "low", "high", "rank")

    def __init__(self, index, low, high):
        self.index = index
        self.low = low
        self.high = high
        self.rank = 0 if index is None else index.rank

    def __repr__(self):
        if self.index is None:
            return "<terminal>"
        return f"<node {self.index!r}>"


class TddEdge(NamedTuple):
    weight: complex
    node: TddNode


@dataclass(frozen=True)
class Tdd:
    """A rooted diagram together with its declared open indices.

    ``indices`` is kept sorted by descending rank.  Indices absent from the
    diagram structure contribute a factor 1 (the tensor does not depend on
    them); they still count for dense conversion and norms.
    """

    root: TddEdge
    indices: tuple[IndexId, ...]


class TddError(Exception):
    pass


class DenseLimitError(TddError):
    pass


class TddManager:
    """Owner of the unique table, computed tables and the global index order.

    ``order`` lists the indices root-first: earlier entries sit nearer the
    root of every diagram.  A manager is single-threaded; independent
    managers may be used concurrently.
    """

    def __init__(self, order: Iterable[tuple[str, str]], grid: float = 1e-9,
                 dense_limit: int = 20):
        names = list(order)
        self.grid = float(grid)
        self.dense_limit = int(dense_limit)
        self._by_name: dict[str, IndexId] = {}
        self._by_rank: dict[int, IndexId] = {}
        n = len(names)
        for pos, (name, kind) in enumerate(names):
            if kind not in _KINDS:
                raise TddError(f"unknown index kind {kind!r}")
            if name in self._by_name:
                raise TddError(f"duplicate index name {name!r}")
            idx = IndexId(name, n - pos, kind)
            self._by_name[name] = idx
            self._by_rank[idx.rank] = idx
        self.terminal = TddNode(None, None, None)
        self.zero = TddEdge(0.0 + 0.0j, self.terminal)
        self.one = TddEdge(1.0 + 0.0j, self.terminal)
        self._unique: dict[tuple, TddNode] = {}
        self._add_cache: dict[tuple, TddEdge] = {}
        self._cont_cache: dict[tuple, TddEdge] = {}
        self._conj_cache: dict[TddNode, TddNode] = {}
        self._slice_cache: dict[tuple, TddEdge] = {}
        self._norm_cache: dict[tuple, float] = {}
        self._support_cache: dict[TddNode, frozenset] = {}

    # -- index bookkeeping -------------------------------------------------

    def index(self, name: str) -> IndexId:
        return self._by_name[name]

    def has_index(self, name: str) -> bool:
        return name in self._by_name

    def index_at_rank(self, rank: int) -> IndexId:
        return self._by_rank[rank]

    @property
    def indices(self) -> tuple[IndexId, ...]:
        return tuple(sorted(self._by_name.values(), key=lambda i: -i.rank))

    # -- weights -----------------------------------------------------------

    def wkey(self, w) -> tuple[int, int]:
        """Quantised grid key; grid-equal weights get equal keys and hashes."""
        g = self.grid
        return (int(round(w.real / g)), int(round(w.imag / g)))

    def weights_equal(self, a, b) -> bool:
        return self.wkey(a) == self.wkey(b)

    def _canon(self, w, node) -> TddEdge:
        if self.wkey(w) == ZERO_KEY:
            return self.zero
        return TddEdge(complex(w), node)

    # -- node construction -------------------------------------------------

    def mk_edge(self, index: IndexId, low: TddEdge, high: TddEdge) -> TddEdge:
        """Canonical normalised edge over ``index`` with the given successors.

        Applies, in order: zero snapping of grid-zero successors, the
        redundant node rule, extraction of the first nonzero weight, and
        unique-table lookup.
        """
        if low.node.rank >= index.rank or high.node.rank >= index.rank:
            raise TddError(f"successor rank not below {index!r}")
        lk = self.wkey(low.weight)
        hk = self.wkey(high.weight)
        if lk == ZERO_KEY:
            low, lk = self.zero, ZERO_KEY
        if hk == ZERO_KEY:
            high, hk = self.zero, ZERO_KEY
        if lk == ZERO_KEY and hk == ZERO_KEY:
            return self.zero
        if low.node is high.node and lk == hk:
            return low
        if lk != ZERO_KEY:
            factor = low.weight
            slow = TddEdge(1.0 + 0.0j, low.node)
            shigh = self._canon(high.weight / factor, high.node)
        else:
            factor = high.weight
            slow = self.zero
            shigh = TddEdge(1.0 + 0.0j, high.node)
        key = (index.rank, self.wkey(slow.weight), slow.node,
               self.wkey(shigh.weight), shigh.node)
        node = self._unique.get(key)
        if node is None:
            node = TddNode(index, slow, shigh)
            self._unique[key] = node
        return TddEdge(complex(factor), node)

    def tdd(self, root: TddEdge, indices: Iterable[IndexId]) -> Tdd:
        idx = tuple(sorted(set(indices), key=lambda i: -i.rank))
        return Tdd(root, idx)

    def scalar(self, w) -> Tdd:
        return Tdd(self._canon(w, self.terminal), ())

    # -- dense conversion --------------------------------------------------

    def from_dense(self, values, indices: Sequence[IndexId]) -> Tdd:
        """Build the diagram of a dense tensor.

        ``values`` has shape (2,)*n with axes matching ``indices``; the
        result's index tuple is re-sorted into rank order.
        """
        arr = np.asarray(values, dtype=complex)
        indices = list(indices)
        if arr.shape != (2,) * len(indices):
            raise TddError(f"shape {arr.shape} does not match {len(indices)} indices")
        if len(indices) > self.dense_limit:
            raise DenseLimitError(f"{len(indices)} indices exceed dense limit {self.dense_limit}")
        order = sorted(range(len(indices)), key=lambda k: -indices[k].rank)
        arr = np.transpose(arr, order) if indices else arr
        sorted_idx = [indices[k] for k in order]
        root = self._from_dense_rec(arr, sorted_idx)
        return Tdd(root, tuple(sorted_idx))

    def _from_dense_rec(self, arr, idx) -> TddEdge:
        if not idx:
            return self._canon(complex(arr), self.terminal)
        low = self._from_dense_rec(arr[0], idx[1:])
        high = self._from_dense_rec(arr[1], idx[1:])
        return self.mk_edge(idx[0], low, high)

    def to_dense(self, t: Tdd) -> np.ndarray:
        """Dense tensor with axes ordered like ``t.indices``."""
        if len(t.indices) > self.dense_limit:
            raise DenseLimitError(f"{len(t.indices)} indices exceed dense limit {self.dense_limit}")
        memo: dict[tuple, np.ndarray] = {}

        def rec(node, pos):
            if pos == len(t.indices):
                if node is not self.terminal:
                    raise TddError("node below the declared index set")
                return np.ones((), dtype=complex)
            key = (node, pos)
            got = memo.get(key)
            if got is not None:
                return got
            x = t.indices[pos]
            if node.rank > x.rank:
                raise TddError(f"index {node.index!r} missing from declared indices")
            if node.rank == x.rank:
                lo = node.low.weight * rec(node.low.node, pos + 1)
                hi = node.high.weight * rec(node.high.node, pos + 1)
            else:
                sub = rec(node, pos + 1)
                lo = hi = sub
            out = np.stack([lo, hi], axis=0)
            memo[key] = out
            return out

        return t.root.weight * rec(t.root.node, 0)

    # -- slicing -----------------------------------------------------------

    def slice(self, t: Tdd, x: IndexId, c: int) -> Tdd:
        """Cofactor phi|_{x=c}; a no-op when ``x`` is not an index of ``t``."""
        if x not in t.indices:
            return t
        root = self._slice_edge(t.root, x.rank, c)
        return Tdd(root, tuple(i for i in t.indices if i is not x))

    def _slice_edge(self, edge: TddEdge, rank: int, c: int) -> TddEdge:
        node = edge.node
        if node.rank < rank:
            return edge
        if node.rank == rank:
            succ = node.high if c else node.low
            return self._canon(edge.weight * succ.weight, succ.node)
        key = (node, rank, c)
        res = self._slice_cache.get(key)
        if res is None:
            lo = self._slice_edge(node.low, rank, c)
            hi = self._slice_edge(node.high, rank, c)
            res = self.mk_edge(node.index, lo, hi)
            self._slice_cache[key] = res
        return self._canon(edge.weight * res.weight, res.node)

    # -- addition ----------------------------------------------------------

    def add(self, a: Tdd, b: Tdd) -> Tdd:
        """Entrywise sum; index sets may differ (absent indices broadcast)."""
        root = self._add(a.root, b.root)
        return self.tdd(root, a.indices + b.indices)

    def _add(self, e1: TddEdge, e2: TddEdge) -> TddEdge:
        if self.wkey(e1.weight) == ZERO_KEY:
            return self._canon(e2.weight, e2.node)
        if self.wkey(e2.weight) == ZERO_KEY:
            return self._canon(e1.weight, e1.node)
        if e1.node is e2.node:
            return self._canon(e1.weight + e2.weight, e1.node)
        if (e1.node.rank, id(e1.node)) > (e2.node.rank, id(e2.node)):
            e1, e2 = e2, e1
        w1 = e1.weight
        ratio = e2.weight / w1
        key = (e1.node, e2.node, self.wkey(ratio))
        res = self._add_cache.get(key)
        if res is None:
            n1 = TddEdge(1.0 + 0.0j, e1.node)
            n2 = TddEdge(ratio, e2.node)
            r = max(e1.node.rank, e2.node.rank)
            lo = self._add(self._slice_edge(n1, r, 0), self._slice_edge(n2, r, 0))
            hi = self._add(self._slice_edge(n1, r, 1), self._slice_edge(n2, r, 1))
            res = self.mk_edge(self.index_at_rank(r), lo, hi)
            self._add_cache[key] = res
        return self._canon(w1 * res.weight, res.node)

    # -- contraction -------------------------------------------------------

    def contract(self, a: Tdd, b: Tdd, shared: Iterable[IndexId]) -> Tdd:
        """Sum over ``shared`` of the pointwise product of ``a`` and ``b``.

        Indices carried by both operands but not listed in ``shared`` are
        matched pointwise and stay open, so classical wires may fan out.
        """
        shared = set(shared)
        for x in shared:
            if x not in a.indices or x not in b.indices:
                raise TddError(f"shared index {x!r} not common to both operands")
        srt = tuple(sorted((x.rank for x in shared), reverse=True))
        root = self._cont(a.root, b.root, srt)
        keep = [x for x in a.indices + b.indices if x not in shared]
        return self.tdd(root, keep)

    def _cont(self, e1: TddEdge, e2: TddEdge, srt: tuple) -> TddEdge:
        if self.wkey(e1.weight) == ZERO_KEY or self.wkey(e2.weight) == ZERO_KEY:
            return self.zero
        r = max(e1.node.rank, e2.node.rank)
        k = 0
        while k < len(srt) and srt[k] > r:
            k += 1
        if k:
            # shared indices absent from both operands each contribute a factor 2
            res = self._cont(e1, e2, srt[k:])
            return self._canon((1 << k) * res.weight, res.node)
        if r == 0:
            return self._canon(e1.weight * e2.weight, self.terminal)
        w = e1.weight * e2.weight
        n1, n2 = e1.node, e2.node
        if id(n1) > id(n2):
            n1, n2 = n2, n1
        key = (n1, n2, srt)
        res = self._cont_cache.get(key)
        if res is None:
            u1 = TddEdge(1.0 + 0.0j, e1.node)
            u2 = TddEdge(1.0 + 0.0j, e2.node)
            if srt and srt[0] == r:
                lo = self._cont(self._slice_edge(u1, r, 0), self._slice_edge(u2, r, 0), srt[1:])
                hi = self._cont(self._slice_edge(u1, r, 1), self._slice_edge(u2, r, 1), srt[1:])
                res = self._add(lo, hi)
            else:
                lo = self._cont(self._slice_edge(u1, r, 0), self._slice_edge(u2, r, 0), srt)
                hi = self._cont(self._slice_edge(u1, r, 1), self._slice_edge(u2, r, 1), srt)
                res = self.mk_edge(self.index_at_rank(r), lo, hi)
            self._cont_cache[key] = res
        return self._canon(w * res.weight, res.node)

    # -- conjugation and norm ------------------------------------------------

    def conjugate(self, t: Tdd) -> Tdd:
        return Tdd(TddEdge(complex(t.root.weight).conjugate(),
                           self._conj_node(t.root.node)), t.indices)

    def _conj_node(self, node: TddNode) -> TddNode:
        if node is self.terminal:
            return node
        got = self._conj_cache.get(node)
        if got is not None:
            return got
        lo = TddEdge(complex(node.low.weight).conjugate(), self._conj_node(node.low.node))
        hi = TddEdge(complex(node.high.weight).conjugate(), self._conj_node(node.high.node))
        edge = self.mk_edge(node.index, lo, hi)
        # normalisation of a conjugated node never rescales: the first nonzero
        # weight was 1 and stays 1
        if self.wkey(edge.weight) not in (ZERO_KEY, self.wkey(1.0)):
            raise TddError("conjugation changed normalisation")
        self._conj_cache[node] = edge.node
        return edge.node

    def norm(self, t: Tdd) -> float:
        """Sum of squared entry magnitudes over all declared indices.

        Equals the full contraction of ``t`` with its conjugate.
        """
        return self.norm_edge(t.root, t.indices)

    def norm_edge(self, edge: TddEdge, indices: tuple[IndexId, ...]) -> float:
        w2 = abs(edge.weight) ** 2
        if w2 == 0.0:
            return 0.0
        return w2 * self._norm_node(edge.node, indices)

    def _norm_node(self, node: TddNode, indices: tuple) -> float:
        if not indices:
            if node is not self.terminal:
                raise TddError("node below the declared index set")
            return 1.0
        key = (node, indices)
        got = self._norm_cache.get(key)
        if got is not None:
            return got
        x = indices[0]
        if node.rank > x.rank:
            raise TddError(f"index {node.index!r} missing from declared indices")
        if node.rank == x.rank:
            out = (abs(node.low.weight) ** 2 * self._norm_node(node.low.node, indices[1:])
                   + abs(node.high.weight) ** 2 * self._norm_node(node.high.node, indices[1:]))
        else:
            out = 2.0 * self._norm_node(node, indices[1:])
        self._norm_cache[key] = out
        return out

    # -- structural queries --------------------------------------------------

    def identical(self, a: Tdd, b: Tdd) -> bool:
        """Canonical identity: equal root weights (grid) and the same node."""
        if a.root.node is not b.root.node and (
                self._foreign(a.root.node) or self._foreign(b.root.node)):
            raise TddError("identical() across managers is not defined")
        return a.root.node is b.root.node and self.weights_equal(a.root.weight, b.root.weight)

    def _foreign(self, node) -> bool:
        if node is self.terminal:
            return False
        if node.index is None:  # another manager's terminal
            return True
        key = (node.index.rank, self.wkey(node.low.weight), node.low.node,
               self.wkey(node.high.weight), node.high.node)
        return self._unique.get(key) is not node

    def node_count(self, t: Tdd) -> int:
        """Number of reachable unique nodes, terminal included."""
        seen = set()
        stack = [t.root.node]
        while stack:
            node = stack.pop()
            if id(node) in seen:
                continue
            seen.add(id(node))
            if node is not self.terminal:
                stack.append(node.low.node)
                stack.append(node.high.node)
        return len(seen)

    def support(self, t: Tdd) -> frozenset[IndexId]:
        """Indices actually occurring on nodes of the diagram."""
        return self._support_node(t.root.node)

    def _support_node(self, node) -> frozenset:
        if node is self.terminal:
            return frozenset()
        got = self._support_cache.get(node)
        if got is None:
            got = (frozenset((node.index,))
                   | self._support_node(node.low.node)
                   | self._support_node(node.high.node))
            self._support_cache[node] = got
        return got

    def import_tdd(self, t: Tdd, source: "TddManager") -> Tdd:
        """Re-canonicalise a diagram built by another manager.

        Index names are mapped by identity; their relative order must agree.
        """
        names = [i.name for i in t.indices]
        mapped = [self.index(n) for n in names]
        for a, b in zip(mapped, mapped[1:]):
            if a.rank <= b.rank:
                raise TddError("index order mismatch between managers")
        memo: dict[TddNode, TddEdge] = {}

        def rec(node):
            if node is source.terminal:
                return self.one
            got = memo.get(node)
            if got is not None:
                return got
            lo = rec(node.low.node)
            hi = rec(node.high.node)
            lo = self._canon(node.low.weight * lo.weight, lo.node)
            hi = self._canon(node.high.weight * hi.weight, hi.node)
            edge = self.mk_edge(self.index(node.index.name), lo, hi)
            memo[node] = edge
            return edge

        root = rec(t.root.node)
        return Tdd(self._canon(t.root.weight * root.weight, root.node), tuple(mapped))

    # -- debug export ----------------------------------------------------------

    def to_dot(self, t: Tdd) -> str:
        """Graphviz text dump: nodes, 0/1 edges and their weights."""
        ids: dict[TddNode, str] = {}
        decls: list[str] = []
        edges: list[str] = []

        def fmt(w):
            return f"{w.real:.4g}{'+' if w.imag >= 0 else '-'}{abs(w.imag):.4g}j"

        def nid(node):
            if node not in ids:
                ids[node] = f"n{len(ids)}"
                label = "1" if node is self.terminal else node.index.name
                shape = "box" if node is self.terminal else "circle"
                decls.append(f'  {ids[node]} [label="{label}", shape={shape}];')
            return ids[node]

        def walk(node):
            me = nid(node)
            if node is self.terminal:
                return
            for edge, style in ((node.low, "dashed"), (node.high, "solid")):
                known = edge.node in ids
                edges.append(f'  {me} -> {nid(edge.node)} '
                             f'[style={style}, label="{fmt(edge.weight)}"];')
                if not known:
                    walk(edge.node)

        walk(t.root.node)
        tail = ['  r [shape=none, label=""];',
                f'  r -> {ids[t.root.node]} [label="{fmt(t.root.weight)}"];', "}"]
        return "\n".join(["digraph tdd {", "  rankdir=TB;"] + decls + edges + tail)
