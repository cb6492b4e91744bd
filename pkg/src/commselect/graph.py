"""Undirected weighted graph and partition types plus edge-list / partition file I/O.

Everything downstream (generation, detection, scoring) works on these two
containers. Graphs are simple (no self-loops, no parallel edges), weights are
strictly positive, and node ids are dense in ``[0, N)``. Both containers are
immutable after construction and safe to share across threads or processes.
"""

from __future__ import annotations

from typing import IO, Iterable, Sequence

import numpy as np

Edge = tuple[int, int, float]


class Graph:
    """Simple undirected weighted graph with dense integer node ids.

    Args:
        node_count: number of nodes N; ids are 0..N-1.
        edges: iterable of (u, v, w) with u != v, w > 0. Each unordered pair
            may appear at most once.
        labels: optional original node labels (length N), kept when a parsed
            file used sparse or non-contiguous ids. ``None`` means identity.
    """

    __slots__ = ("n", "edges", "_adj", "_adj_map", "degrees", "strengths",
                 "total_weight", "_csr_indptr", "_csr_nbr", "_csr_wt", "labels")

    def __init__(self, node_count: int, edges: Iterable[Edge],
                 labels: Sequence[int] | None = None):
        if node_count < 0:
            raise ValueError(f"node_count must be >= 0, got {node_count}")
        n = int(node_count)
        canon: dict[tuple[int, int], float] = {}
        for u, v, w in edges:
            u, v, w = int(u), int(v), float(w)
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) outside node range [0,{n})")
            if not w > 0.0:
                raise ValueError(f"non-positive weight {w} on edge ({u},{v})")
            key = (u, v) if u < v else (v, u)
            if key in canon:
                raise ValueError(f"duplicate edge ({key[0]},{key[1]})")
            canon[key] = w
        if labels is not None:
            labels = tuple(int(x) for x in labels)
            if len(labels) != n:
                raise ValueError("labels length must equal node_count")

        self.n = n
        self.edges: tuple[Edge, ...] = tuple(
            (u, v, canon[(u, v)]) for u, v in sorted(canon))
        self.labels = labels

        adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        self._adj = tuple(tuple(sorted(a)) for a in adj)
        self._adj_map = tuple(dict(a) for a in self._adj)

        self.degrees = np.array([len(a) for a in self._adj], dtype=np.int64)
        self.strengths = np.array(
            [sum(w for _, w in a) for a in self._adj], dtype=np.float64)
        self.total_weight = float(sum(w for _, _, w in self.edges))

        # CSR view of the adjacency, used by the vectorised algorithms.
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(self.degrees, out=indptr[1:])
        nbr = np.empty(int(indptr[-1]), dtype=np.int64)
        wt = np.empty(int(indptr[-1]), dtype=np.float64)
        pos = 0
        for v in range(n):
            for j, w in self._adj[v]:
                nbr[pos] = j
                wt[pos] = w
                pos += 1
        self._csr_indptr, self._csr_nbr, self._csr_wt = indptr, nbr, wt

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> tuple[tuple[int, float], ...]:
        """(neighbor, weight) pairs of v, sorted by neighbor id."""
        return self._adj[v]

    def neighbor_map(self, v: int) -> dict[int, float]:
        """Neighbor -> weight mapping of v (do not mutate)."""
        return self._adj_map[v]

    def degree(self, v: int) -> int:
        return int(self.degrees[v])

    def strength(self, v: int) -> float:
        return float(self.strengths[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj_map[u]

    def weight(self, u: int, v: int) -> float:
        return self._adj_map[u][v]

    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(indptr, neighbors, weights) arrays of the adjacency."""
        return self._csr_indptr, self._csr_nbr, self._csr_wt

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count})"


class Partition:
    """Total assignment of nodes 0..N-1 to dense community ids 0..C-1."""

    __slots__ = ("membership", "community_count", "_members")

    def __init__(self, membership: Sequence[int]):
        m = np.asarray(membership, dtype=np.int64)
        if m.ndim != 1 or m.size == 0:
            raise ValueError("membership must be a non-empty 1-d sequence")
        c = int(m.max()) + 1
        if m.min() < 0:
            raise ValueError("community ids must be >= 0")
        present = np.bincount(m, minlength=c)
        if (present == 0).any():
            missing = int(np.flatnonzero(present == 0)[0])
            raise ValueError(f"community ids not dense: {missing} is empty")
        m.setflags(write=False)
        self.membership = m
        self.community_count = c
        self._members = None

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "Partition":
        """Build a Partition from arbitrary labels, renumbering them densely
        in order of first appearance."""
        remap: dict[int, int] = {}
        out = []
        for x in labels:
            x = int(x)
            if x not in remap:
                remap[x] = len(remap)
            out.append(remap[x])
        return cls(out)

    @property
    def n(self) -> int:
        return int(self.membership.size)

    def members(self) -> tuple[tuple[int, ...], ...]:
        """Node ids per community, cached."""
        if self._members is None:
            groups: list[list[int]] = [[] for _ in range(self.community_count)]
            for v, c in enumerate(self.membership):
                groups[int(c)].append(v)
            self._members = tuple(tuple(g) for g in groups)
        return self._members

    def __getitem__(self, v: int) -> int:
        return int(self.membership[v])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return bool(np.array_equal(self.membership, other.membership))

    def __hash__(self):
        return hash(self.membership.tobytes())

    def __repr__(self) -> str:
        return f"Partition(n={self.n}, communities={self.community_count})"


def node_stats(g: Graph, v: int) -> tuple[int, float]:
    """Return (degree, strength) of node v.

    Degree is the neighbor count, strength the sum of incident link weights.
    """
    if not 0 <= v < g.n:
        raise ValueError(f"node {v} outside [0,{g.n})")
    return g.degree(v), g.strength(v)


def with_unit_weights(g: Graph) -> Graph:
    """Copy of g with identical topology and every weight set to 1.0."""
    return Graph(g.n, ((u, v, 1.0) for u, v, _ in g.edges), labels=g.labels)


def _format_weight(w: float) -> str:
    # fixed point matches the documented format for ordinary weights;
    # scientific keeps >= 9 significant digits for very small ones
    if w >= 0.5:
        return f"{w:.9f}"
    return f"{w:.9e}"


def parse_edge_list(text: str | IO[str]) -> Graph:
    """Parse an edge-list text stream into a validated Graph.

    Each non-empty, non-comment line is ``u v [w]`` separated by tabs or
    spaces; a missing weight defaults to 1.0, so plain unweighted files are
    accepted. Lines starting with ``#`` are comments; a ``# nodes N`` comment
    (as written by :func:`write_edge_list`) declares the node count so graphs
    with trailing isolated nodes round-trip. Without it, N is one more than
    the largest id observed.

    Node ids may be arbitrary non-negative integers; sparse ids are compacted
    to a dense 0..N-1 range and the original ids kept as ``Graph.labels``.

    Raises:
        ValueError: on self-loops, duplicate pairs, non-positive weights, or
            malformed tokens, naming the offending line.
    """
    if hasattr(text, "read"):
        lines = text.read().splitlines()
    else:
        lines = text.splitlines()

    declared_n = None
    raw_edges: list[tuple[int, int, float]] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].split()
            if len(body) == 2 and body[0] == "nodes":
                try:
                    declared_n = int(body[1])
                except ValueError:
                    raise ValueError(f"line {lineno}: bad node count comment")
            continue
        parts = line.replace("\t", " ").split()
        if len(parts) not in (2, 3):
            raise ValueError(f"line {lineno}: expected 'u v [w]', got {raw!r}")
        try:
            u = int(parts[0])
            v = int(parts[1])
        except ValueError:
            raise ValueError(f"line {lineno}: malformed node id in {raw!r}")
        if u < 0 or v < 0:
            raise ValueError(f"line {lineno}: negative node id in {raw!r}")
        if len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError:
                raise ValueError(f"line {lineno}: malformed weight in {raw!r}")
        else:
            w = 1.0
        if u == v:
            raise ValueError(f"line {lineno}: self-loop on node {u}")
        if not w > 0.0:
            raise ValueError(f"line {lineno}: non-positive weight {w}")
        raw_edges.append((u, v, w))

    seen: set[tuple[int, int]] = set()
    for lineno, (u, v, _) in zip(
            (i for i, raw in enumerate(lines, start=1)
             if raw.strip() and not raw.strip().startswith("#")), raw_edges):
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise ValueError(f"line {lineno}: duplicate edge ({key[0]},{key[1]})")
        seen.add(key)

    ids = sorted({u for u, _, _ in raw_edges} | {v for _, v, _ in raw_edges})
    if not ids:
        return Graph(declared_n if declared_n is not None else 0, [])
    if declared_n is not None:
        # a declared node count fixes the id space; gaps are isolated nodes
        return Graph(max(declared_n, ids[-1] + 1), raw_edges)
    if ids[-1] == len(ids) - 1:
        return Graph(len(ids), raw_edges)
    # sparse ids without a declared count: compact, remember the original
    # labels for output
    remap = {x: i for i, x in enumerate(ids)}
    edges = [(remap[u], remap[v], w) for u, v, w in raw_edges]
    return Graph(len(ids), edges, labels=ids)


def write_edge_list(g: Graph, header_comments: Sequence[str] = ()) -> str:
    """Serialise a Graph to edge-list text.

    Edges are written in ascending (u, v) order with u < v, one per line,
    tab-separated, weights with at least nine significant digits. A
    ``# nodes N`` comment always leads so the node count survives the round
    trip even for graphs with isolated nodes or no edges at all.
    ``parse_edge_list(write_edge_list(g))`` reproduces ``g``.
    """
    out = [f"# nodes {g.n}"]
    for comment in header_comments:
        out.append(f"# {comment}")
    lab = g.labels
    for u, v, w in g.edges:
        a, b = (u, v) if lab is None else (lab[u], lab[v])
        out.append(f"{a}\t{b}\t{_format_weight(w)}")
    return "\n".join(out) + "\n"


def load_edge_list(path) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edge_list(fh)


def save_edge_list(g: Graph, path, header_comments: Sequence[str] = ()) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(write_edge_list(g, header_comments))


def write_partition(p: Partition, labels: Sequence[int] | None = None) -> str:
    """Serialise a Partition as one ``node<TAB>community`` pair per line."""
    lab = labels
    lines = []
    for v in range(p.n):
        a = v if lab is None else lab[v]
        lines.append(f"{a}\t{p[v]}")
    return "\n".join(lines) + "\n"


def parse_partition(text: str | IO[str]) -> Partition:
    """Parse a ``node<TAB>community`` file back into a Partition.

    Node ids must cover 0..N-1 exactly once; community ids are renumbered
    densely in order of first appearance.
    """
    if hasattr(text, "read"):
        lines = text.read().splitlines()
    else:
        lines = text.splitlines()
    pairs: dict[int, int] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.replace("\t", " ").split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'node community'")
        try:
            v, c = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError(f"line {lineno}: malformed pair {raw!r}")
        if v in pairs:
            raise ValueError(f"line {lineno}: node {v} assigned twice")
        pairs[v] = c
    if not pairs:
        raise ValueError("empty partition file")
    n = len(pairs)
    if sorted(pairs) != list(range(n)):
        raise ValueError("partition node ids must be dense in [0, N)")
    return Partition.from_labels([pairs[v] for v in range(n)])


def save_partition(p: Partition, path, labels: Sequence[int] | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(write_partition(p, labels))


def load_partition(path) -> Partition:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_partition(fh)
