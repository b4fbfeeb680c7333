"""
Minimum Spanning Trees for projclust
Exact dense Prim, evaluation of a fixed tree in any space, and a labeled-tree oracle
"""

import math
import heapq
import logging
from itertools import product
from typing import NamedTuple, Tuple

import numpy as np

from projclust.models import PointSet, SpanningTree
from projclust.utils import InvalidInputError, SizeGuardError
from projclust.utils.geometry import cross_sq_distances, paired_distances, row_sq_distances

logger = logging.getLogger(__name__)


class PullbackRatio(NamedTuple):
    """Tree found on the projection, measured against the original MST cost M"""
    ratio_pullback: float
    ratio_cost: float


def mst_exact(ps: PointSet) -> SpanningTree:
    """
    Exact MST by dense Prim in O(n^2 m)

    Candidate edges compare by (length, smaller index, larger index), so the
    tree is fully determined by the input even when lengths tie.
    """
    n = ps.n
    if n == 1:
        return SpanningTree(n=1)

    vertices = np.arange(n)
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best = row_sq_distances(ps, 0).copy()
    parent = np.zeros(n, dtype=np.intp)
    edges = []

    for _ in range(n - 1):
        outside = np.flatnonzero(~in_tree)
        lo = np.minimum(parent[outside], outside)
        hi = np.maximum(parent[outside], outside)
        v = int(outside[np.lexsort((hi, lo, best[outside]))[0]])
        edges.append((int(parent[v]), v))
        in_tree[v] = True

        dv = row_sq_distances(ps, v)
        new_lo = np.minimum(vertices, v)
        new_hi = np.maximum(vertices, v)
        old_lo = np.minimum(vertices, parent)
        old_hi = np.maximum(vertices, parent)
        tie_wins = (new_lo < old_lo) | ((new_lo == old_lo) & (new_hi < old_hi))
        better = ~in_tree & ((dv < best) | ((dv == best) & tie_wins))
        best = np.where(better, dv, best)
        parent = np.where(better, v, parent)

    return SpanningTree(n=n, edges=tuple(edges))


def edge_lengths(tree: SpanningTree, ps: PointSet) -> np.ndarray:
    """Length in ps of every tree edge, in the tree's edge order"""
    if tree.n != ps.n:
        raise InvalidInputError(f"Tree on {tree.n} points cannot be evaluated on {ps.n} points")
    if not tree.edges:
        return np.zeros(0)
    pairs = np.asarray(tree.edges, dtype=np.intp)
    return paired_distances(ps, pairs[:, 0], pairs[:, 1])


def tree_cost_in(tree: SpanningTree, ps: PointSet) -> float:
    """Sum of edge lengths of a fixed tree measured in ps"""
    return math.fsum(edge_lengths(tree, ps))


def _prufer_edges(sequence, n):
    degree = [1] * n
    for v in sequence:
        degree[v] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for v in sequence:
        leaf = heapq.heappop(leaves)
        edges.append((min(leaf, v), max(leaf, v)))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    a, b = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((min(a, b), max(a, b)))
    return tuple(sorted(edges))


def brute_force_mst(ps: PointSet, max_n: int = 7) -> Tuple[SpanningTree, float]:
    """
    Exhaustive minimum over all n^(n-2) labeled trees, enumerated by Pruefer sequence

    Ties go to the lexicographically smallest sorted edge list.
    """
    n = ps.n
    if n > max_n:
        raise SizeGuardError('brute_force_mst', n, max_n)
    if n == 1:
        return SpanningTree(n=1), 0.0
    if n == 2:
        tree = SpanningTree(n=2, edges=((0, 1),))
        return tree, tree_cost_in(tree, ps)

    lengths = np.sqrt(cross_sq_distances(ps, np.arange(n)))
    best_edges, best_cost = None, math.inf
    for sequence in product(range(n), repeat=n - 2):
        edges = _prufer_edges(sequence, n)
        cost = math.fsum(lengths[a, b] for a, b in edges)
        tol = 1e-12 * max(1.0, best_cost if math.isfinite(best_cost) else 1.0)
        if cost < best_cost - tol or (abs(cost - best_cost) <= tol and edges < best_edges):
            best_edges, best_cost = edges, cost
    tree = SpanningTree(n=n, edges=best_edges)
    return tree, tree_cost_in(tree, ps)


def pullback_ratio(ps_original: PointSet, ps_projected: PointSet) -> PullbackRatio:
    """
    Compare the projected-space MST against the original MST cost M

    Returns (cost of the projected tree in the original space / M,
    cost of the projected tree in the projected space / M). The first
    component is >= 1 because M is minimal.
    """
    if ps_original.n != ps_projected.n:
        raise InvalidInputError(f"Point counts differ: {ps_original.n} vs {ps_projected.n}")
    optimal_cost = tree_cost_in(mst_exact(ps_original), ps_original)
    projected_tree = mst_exact(ps_projected)
    pulled = tree_cost_in(projected_tree, ps_original)
    projected = tree_cost_in(projected_tree, ps_projected)
    if optimal_cost == 0.0:
        return PullbackRatio(1.0, 1.0 if projected == 0.0 else math.inf)
    return PullbackRatio(pulled / optimal_cost, projected / optimal_cost)


def cycle_property_holds(tree: SpanningTree, ps: PointSet, tol: float = 1e-12) -> bool:
    """
    Exchange certificate: every non-tree edge is at least as long as the
    longest tree edge on the cycle it closes
    """
    n = tree.n
    if n != ps.n:
        raise InvalidInputError(f"Tree on {n} points cannot be checked on {ps.n} points")
    if n <= 2:
        return True
    lengths = edge_lengths(tree, ps)
    adjacency = [[] for _ in range(n)]
    for (a, b), length in zip(tree.edges, lengths):
        adjacency[a].append((b, length))
        adjacency[b].append((a, length))

    tree_edges = set(tree.edges)
    for root in range(n):
        # max edge on the tree path from root to every vertex
        path_max = np.full(n, -1.0)
        path_max[root] = 0.0
        stack = [root]
        while stack:
            u = stack.pop()
            for w, length in adjacency[u]:
                if path_max[w] < 0:
                    path_max[w] = max(path_max[u], length)
                    stack.append(w)
        direct = np.sqrt(row_sq_distances(ps, root))
        for w in range(root + 1, n):
            if (root, w) not in tree_edges and direct[w] < path_max[w] - tol * max(1.0, path_max[w]):
                return False
    return True
