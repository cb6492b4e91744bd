"""Label-propagation community detection in hard-partition mode.

Every node starts with a unique label; synchronous iterations then reassign
each node the label with the largest support among its neighbours, where
support is the neighbour count (unweighted) or the sum of connecting link
weights (weighted). Ties are broken uniformly at random. Because single runs
are stochastic, detection repeats the propagation several times and keeps the
run with the highest weighted modularity.

Updates are synchronous so a run is a pure function of its seed. Iteration
stops at a fixed point (every node's label is among its neighbourhood's most
supported), on an exact deterministic two-step oscillation, or at the
iteration cap, whichever comes first. Nodes left sharing a label without being
connected are split into separate communities at the end.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, Partition, with_unit_weights
from .metrics import modularity
from .seeds import check_seed, spawn_rng


@dataclass(frozen=True)
class CopraConfig:
    """Settings for repeated label-propagation detection."""
    seed: int = 0
    runs: int = 10
    max_iters: int = 100
    weighted: bool = True
    # hard partitions only; the knob exists for a future overlapping variant
    v_max: int = 1

    def __post_init__(self):
        check_seed(self.seed)
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.v_max != 1:
            raise ValueError("only v_max=1 (hard partitions) is supported")


@dataclass(frozen=True)
class LabelState:
    """Per-node labels after some number of synchronous iterations."""
    labels: tuple[int, ...]
    iteration: int = 0

    @classmethod
    def initial(cls, g: Graph) -> "LabelState":
        return cls(labels=tuple(range(g.n)), iteration=0)


def _step(g: Graph, labels: np.ndarray, weighted: bool, rng) -> tuple[np.ndarray, bool]:
    """One synchronous update; returns (new labels, whether a tie was rolled)."""
    n = g.n
    indptr, nbr, wt = g.csr()
    rows = np.repeat(np.arange(n), g.degrees)
    vals = wt if weighted else np.ones(nbr.size)
    width = int(labels.max()) + 1 if labels.size else 1
    support = np.bincount(rows * width + labels[nbr], weights=vals,
                          minlength=n * width).reshape(n, width)
    peak = support.max(axis=1)
    at_peak = support == peak[:, None]
    tie_rolled = bool((at_peak.sum(axis=1) > 1).any())
    # uniform choice among tied labels via random keys
    keys = np.where(at_peak, rng.random((n, width)), -1.0)
    new = keys.argmax(axis=1).astype(np.int64)
    isolated = g.degrees == 0
    if isolated.any():
        new[isolated] = labels[isolated]
    return new, tie_rolled


def propagate_step(g: Graph, state: LabelState, cfg: CopraConfig, rng) -> LabelState:
    """Apply one synchronous propagation step to ``state``."""
    labels = np.asarray(state.labels, dtype=np.int64)
    if labels.size != g.n:
        raise ValueError("label state does not cover all nodes")
    new, _ = _step(g, labels, cfg.weighted, rng)
    return LabelState(labels=tuple(int(x) for x in new),
                      iteration=state.iteration + 1)


def _split_into_communities(g: Graph, labels: np.ndarray) -> Partition:
    # connected nodes sharing a label form one community; a shared label on
    # disconnected node sets is split
    comm = np.full(g.n, -1, dtype=np.int64)
    next_id = 0
    for start in range(g.n):
        if comm[start] >= 0:
            continue
        lab = labels[start]
        stack = [start]
        comm[start] = next_id
        while stack:
            v = stack.pop()
            for u, _ in g.neighbors(v):
                if comm[u] < 0 and labels[u] == lab:
                    comm[u] = next_id
                    stack.append(u)
        next_id += 1
    return Partition(comm)


def run_once(g: Graph, cfg: CopraConfig, rng) -> Partition:
    """Single seeded propagation run, returning the resulting hard partition."""
    if g.n == 0:
        raise ValueError("cannot partition a graph with zero nodes")
    labels = np.arange(g.n, dtype=np.int64)
    prev = None
    tie_cur = tie_prev = False
    for _ in range(cfg.max_iters):
        new, tie = _step(g, labels, cfg.weighted, rng)
        if np.array_equal(new, labels):
            labels = new
            break
        if (prev is not None and np.array_equal(new, prev)
                and not tie and not tie_cur):
            labels = new
            break
        prev, tie_prev = labels, tie_cur
        labels, tie_cur = new, tie
    return _split_into_communities(g, labels)


def detect(g: Graph, cfg: CopraConfig) -> Partition:
    """Best-of-``cfg.runs`` label propagation.

    Each run gets an RNG stream derived from (seed, run index); the partition
    with the highest weighted modularity wins, earlier runs winning ties. With
    ``weighted=False`` both the propagation and the modularity selection see
    the graph with unit weights.
    """
    work = g if cfg.weighted else with_unit_weights(g)
    best_q = -np.inf
    best: Partition | None = None
    for run in range(cfg.runs):
        part = run_once(work, cfg, spawn_rng(cfg.seed, run))
        if work.edge_count == 0:
            return part
        q = modularity(work, part)
        if q > best_q:
            best_q = q
            best = part
    return best
