"""Partition scoring and the two observable clustering-coefficient features.

The unweighted local clustering coefficient of a node is the fraction of its
neighbor pairs that are themselves linked. The weighted variant rescales each
linked pair by the weights of the links from the node to that pair, so it
responds to how strongly the node's weight is concentrated on triangle-closing
links:

    C_uw(v) = sum_{i<j in N(v)} e_ij / (k_v (k_v - 1) / 2)
    C_w(v)  = sum_{i<j in N(v)} (w_vi + w_vj) e_ij / (s_v (k_v - 1))

Nodes of degree < 2 contribute 0 and are included in network means.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, Partition


@dataclass(frozen=True)
class ClusteringSummary:
    """Network means of the two local clustering coefficients."""
    mean_c_uw: float
    mean_c_w: float
    per_node_uw: tuple[float, ...] | None = None
    per_node_w: tuple[float, ...] | None = None


def local_clustering_uw(g: Graph, v: int) -> float:
    """Unweighted local clustering coefficient of v (0 when degree < 2)."""
    if not 0 <= v < g.n:
        raise ValueError(f"node {v} outside [0,{g.n})")
    nbrs = g.neighbor_map(v)
    k = len(nbrs)
    if k < 2:
        return 0.0
    closed = 0
    for i in nbrs:
        adj_i = g.neighbor_map(i)
        if len(adj_i) < len(nbrs):
            closed += sum(1 for j in adj_i if j > i and j in nbrs)
        else:
            closed += sum(1 for j in nbrs if j > i and j in adj_i)
    return closed / (k * (k - 1) / 2)


def local_clustering_w(g: Graph, v: int) -> float:
    """Weighted local clustering coefficient of v (0 when degree < 2)."""
    if not 0 <= v < g.n:
        raise ValueError(f"node {v} outside [0,{g.n})")
    nbrs = g.neighbor_map(v)
    k = len(nbrs)
    if k < 2:
        return 0.0
    num = 0.0
    for i, w_vi in nbrs.items():
        adj_i = g.neighbor_map(i)
        for j, w_vj in nbrs.items():
            if j > i and j in adj_i:
                num += w_vi + w_vj
    return num / (g.strength(v) * (k - 1))


def mean_clustering(g: Graph, keep_per_node: bool = False) -> ClusteringSummary:
    """Arithmetic means of both local clustering coefficients over all nodes.

    Degree-0/1 nodes enter the mean with value 0; an edgeless graph therefore
    scores (0, 0).
    """
    if g.n < 1:
        raise ValueError("graph must have at least one node")
    c_uw = [local_clustering_uw(g, v) for v in range(g.n)]
    c_w = [local_clustering_w(g, v) for v in range(g.n)]
    return ClusteringSummary(
        mean_c_uw=float(sum(c_uw) / g.n),
        mean_c_w=float(sum(c_w) / g.n),
        per_node_uw=tuple(c_uw) if keep_per_node else None,
        per_node_w=tuple(c_w) if keep_per_node else None,
    )


def _entropy(counts: np.ndarray, n: int) -> float:
    p = counts[counts > 0] / n
    return float(-(p * np.log(p)).sum())


def nmi(a: Partition, b: Partition) -> float:
    """Normalized mutual information 2*I(A;B)/(H(A)+H(B)) between partitions.

    Computed from the co-membership contingency table; the log base cancels.
    Degenerate conventions: both partitions single-community -> 1.0, exactly
    one single-community -> 0.0. Raises if the node sets differ.
    """
    if a.n != b.n:
        raise ValueError(f"node-set mismatch: {a.n} vs {b.n} nodes")
    n = a.n
    ca, cb = a.community_count, b.community_count
    cont = np.zeros((ca, cb), dtype=np.int64)
    np.add.at(cont, (a.membership, b.membership), 1)
    row = cont.sum(axis=1)
    col = cont.sum(axis=0)
    h_a = _entropy(row, n)
    h_b = _entropy(col, n)
    if h_a == 0.0 and h_b == 0.0:
        return 1.0
    if h_a == 0.0 or h_b == 0.0:
        return 0.0
    nz = cont > 0
    if ((nz.sum(axis=0) == 1).all() and (nz.sum(axis=1) == 1).all()):
        # identical partitions up to relabeling: exactly 1 by definition,
        # and this sidesteps last-ulp rounding in the entropy sums
        return 1.0
    nij = cont[nz].astype(np.float64)
    outer = np.outer(row, col)[nz]
    info = float((nij / n * np.log(nij * n / outer)).sum())
    val = 2.0 * info / (h_a + h_b)
    return min(max(val, 0.0), 1.0)


def modularity(g: Graph, p: Partition) -> float:
    """Weighted Newman modularity of a partition.

    Q = sum_c [ W_c / W - (S_c / 2W)^2 ] with W_c the intra-community weight,
    S_c the community's total node strength, and W the total edge weight.
    """
    if g.edge_count == 0:
        raise ValueError("modularity undefined on an edgeless graph")
    if p.n != g.n:
        raise ValueError(f"partition covers {p.n} nodes, graph has {g.n}")
    w_total = g.total_weight
    m = p.membership
    intra = np.zeros(p.community_count, dtype=np.float64)
    for u, v, w in g.edges:
        cu = m[u]
        if cu == m[v]:
            intra[cu] += w
    s_c = np.zeros(p.community_count, dtype=np.float64)
    np.add.at(s_c, m, g.strengths)
    q = intra / w_total - (s_c / (2.0 * w_total)) ** 2
    return float(q.sum())
