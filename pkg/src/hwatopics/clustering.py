"""Density-based clustering of patterns (HDBSCAN) over a precomputed distance matrix.

Steps: core distances -> mutual reachability -> minimum spanning tree (Prim)
-> single-linkage dendrogram -> condensed tree -> excess-of-mass selection.
Everything is exact and deterministic; pattern counts per window are small
enough for dense O(n^2) work.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from hwatopics.errors import ConfigError

logger = logging.getLogger(__name__)

NOISE = -1

# Density assigned to zero-distance merges (1 / 0).
MAX_LAMBDA = 1e12


@dataclass(frozen=True)
class HdbscanParams:
    min_cluster_size: int = 5
    min_samples: int | None = None
    allow_single_cluster: bool = True

    def __post_init__(self) -> None:
        if self.min_cluster_size < 2:
            raise ConfigError(
                f"min_cluster_size must be >= 2, got {self.min_cluster_size}"
            )
        if self.min_samples is not None and self.min_samples < 1:
            raise ConfigError(f"min_samples must be >= 1, got {self.min_samples}")

    @property
    def k(self) -> int:
        """Neighbour rank used for core distances."""
        return self.min_samples if self.min_samples is not None else self.min_cluster_size


# ---------------------------------------------------------------------------
# Core distances and mutual reachability
# ---------------------------------------------------------------------------


def core_distances(D: np.ndarray, k: int) -> np.ndarray:
    """Distance from each point to its k-th nearest other point.

    When k >= n there are not enough neighbours and the row maximum is used.
    """
    D = np.asarray(D, dtype=np.float64)
    n = D.shape[0]
    if n == 0:
        return np.zeros(0)
    if k >= n:
        return D.max(axis=1)
    others = D[~np.eye(n, dtype=bool)].reshape(n, n - 1)
    return np.sort(others, axis=1)[:, k - 1]


def mutual_reachability(D: np.ndarray, core: np.ndarray) -> np.ndarray:
    """MR(a, b) = max(core(a), core(b), D(a, b))."""
    D = np.asarray(D, dtype=np.float64)
    return np.maximum(D, np.maximum.outer(core, core))


# ---------------------------------------------------------------------------
# Minimum spanning tree and single linkage
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Dendrogram:
    """Single-linkage hierarchy in scipy linkage layout.

    `merges` row i joins clusters left, right (ids < n are points, id n + i is
    the cluster made by row i) at `distance` into a cluster of `size` points.
    `mst` holds the spanning-tree edges (a, b, weight) with a < b, sorted by
    (weight, a, b).
    """

    n_points: int
    merges: np.ndarray
    mst: np.ndarray

    @property
    def mst_weight(self) -> float:
        return float(self.mst[:, 2].sum()) if len(self.mst) else 0.0


def minimum_spanning_tree(MR: np.ndarray) -> np.ndarray:
    """Prim's algorithm over a dense matrix.

    Edges compare by (weight, smaller endpoint, larger endpoint), a strict
    total order, so the tree is unique.
    """
    MR = np.asarray(MR, dtype=np.float64)
    n = MR.shape[0]
    if n < 2:
        return np.zeros((0, 3))
    ids = np.arange(n)
    in_tree = np.zeros(n, dtype=bool)
    best_w = np.full(n, np.inf)
    best_lo = np.full(n, n, dtype=np.int64)
    best_hi = np.full(n, n, dtype=np.int64)
    best_from = np.full(n, -1, dtype=np.int64)

    edges = []
    current = 0
    in_tree[0] = True
    for _ in range(n - 1):
        w = MR[current]
        lo = np.minimum(ids, current)
        hi = np.maximum(ids, current)
        better = (w < best_w) | (
            (w == best_w) & ((lo < best_lo) | ((lo == best_lo) & (hi < best_hi)))
        )
        better &= ~in_tree
        best_w[better] = w[better]
        best_lo[better] = lo[better]
        best_hi[better] = hi[better]
        best_from[better] = current

        candidates = np.flatnonzero(~in_tree)
        order = np.lexsort(
            (best_hi[candidates], best_lo[candidates], best_w[candidates])
        )
        nxt = int(candidates[order[0]])
        edges.append((best_lo[nxt], best_hi[nxt], best_w[nxt]))
        in_tree[nxt] = True
        current = nxt

    mst = np.array(edges, dtype=np.float64)
    return mst[np.lexsort((mst[:, 1], mst[:, 0], mst[:, 2]))]


class _UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(2 * n - 1))
        self.next_label = n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> int:
        label = self.next_label
        self.parent[a] = self.parent[b] = label
        self.next_label += 1
        return label


def build_hierarchy(MR: np.ndarray) -> Dendrogram:
    """Minimum spanning tree over MR, turned into a single-linkage dendrogram."""
    MR = np.asarray(MR, dtype=np.float64)
    n = MR.shape[0]
    mst = minimum_spanning_tree(MR)
    merges = np.zeros((max(n - 1, 0), 4))
    if n < 2:
        return Dendrogram(n_points=n, merges=merges, mst=mst)

    uf = _UnionFind(n)
    size = [1] * n + [0] * (n - 1)
    for i, (a, b, w) in enumerate(mst):
        ra, rb = uf.find(int(a)), uf.find(int(b))
        left, right = min(ra, rb), max(ra, rb)
        label = uf.union(ra, rb)
        size[label] = size[left] + size[right]
        merges[i] = (left, right, w, size[label])
    return Dendrogram(n_points=n, merges=merges, mst=mst)


# ---------------------------------------------------------------------------
# Condensed tree and cluster selection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CondensedTree:
    """Rows (parent, child, lambda, child_size).

    Cluster ids start at n_points; the root is n_points. A child below
    n_points is a single point falling out of `parent` at density `lambda`.
    """

    n_points: int
    parent: np.ndarray
    child: np.ndarray
    lam: np.ndarray
    child_size: np.ndarray

    @property
    def root(self) -> int:
        return self.n_points

    def cluster_children(self, cluster: int) -> list[int]:
        mask = (self.parent == cluster) & (self.child >= self.n_points)
        return [int(c) for c in self.child[mask]]


def _leaves(merges: np.ndarray, n: int, node: int) -> list[int]:
    out, stack = [], [node]
    while stack:
        x = stack.pop()
        if x < n:
            out.append(x)
        else:
            left, right = merges[x - n, :2]
            stack.extend((int(right), int(left)))
    return sorted(out)


def condense_tree(dendrogram: Dendrogram, min_cluster_size: int) -> CondensedTree:
    """Walk the dendrogram from the root, keeping only splits into two sides of
    at least `min_cluster_size` points; smaller sides fall out as points."""
    n = dendrogram.n_points
    merges = dendrogram.merges
    rows: list[tuple[int, int, float, int]] = []

    def size_of(node: int) -> int:
        return 1 if node < n else int(merges[node - n, 3])

    root = 2 * n - 2
    relabel = {root: n}
    next_label = n + 1
    queue = deque([root])
    while queue:
        node = queue.popleft()
        left, right, dist, _ = merges[node - n]
        left, right = int(left), int(right)
        lam = 1.0 / dist if dist > 0 else MAX_LAMBDA
        lam = min(lam, MAX_LAMBDA)
        parent = relabel[node]
        big_left = size_of(left) >= min_cluster_size
        big_right = size_of(right) >= min_cluster_size

        if big_left and big_right:
            for side in (left, right):
                relabel[side] = next_label
                rows.append((parent, next_label, lam, size_of(side)))
                next_label += 1
                queue.append(side)
            continue
        for side, big in ((left, big_left), (right, big_right)):
            if big:
                relabel[side] = parent
                queue.append(side)
            else:
                rows.extend((parent, leaf, lam, 1) for leaf in _leaves(merges, n, side))

    arr = np.array(rows, dtype=np.float64).reshape(-1, 4)
    return CondensedTree(
        n_points=n,
        parent=arr[:, 0].astype(np.int64),
        child=arr[:, 1].astype(np.int64),
        lam=arr[:, 2],
        child_size=arr[:, 3].astype(np.int64),
    )


def cluster_stabilities(tree: CondensedTree) -> dict[int, float]:
    """stability(C) = sum over rows leaving C of (lambda - lambda_birth(C)) * size."""
    birth = {tree.root: 0.0}
    for c, lam in zip(tree.child, tree.lam):
        if c >= tree.n_points:
            birth[int(c)] = float(lam)
    stability = {c: 0.0 for c in birth}
    for p, lam, size in zip(tree.parent, tree.lam, tree.child_size):
        stability[int(p)] += (float(lam) - birth[int(p)]) * int(size)
    return stability


def select_clusters(
    tree: CondensedTree, stability: dict[int, float], allow_single_cluster: bool = True
) -> set[int]:
    """Excess-of-mass selection: keep a cluster unless its descendants are
    jointly more stable; a selected cluster excludes its descendants."""
    nodes = sorted(stability, reverse=True)
    if not allow_single_cluster:
        nodes = [c for c in nodes if c != tree.root]
    selected = {c: True for c in nodes}
    total = dict(stability)
    for node in nodes:
        children = tree.cluster_children(node)
        subtree = sum(total[c] for c in children)
        if subtree > total[node]:
            selected[node] = False
            total[node] = subtree
        else:
            stack = list(children)
            while stack:
                c = stack.pop()
                selected[c] = False
                stack.extend(tree.cluster_children(c))
    return {c for c, keep in selected.items() if keep}


@dataclass(frozen=True)
class Clustering:
    """Labels per point (NOISE = -1) plus per-cluster stability and members.

    Cluster ids are renumbered 0.. in order of each cluster's smallest member.
    """

    labels: np.ndarray
    stabilities: dict[int, float] = field(default_factory=dict)
    members: tuple[tuple[int, ...], ...] = ()

    @property
    def n_clusters(self) -> int:
        return len(self.members)

    @property
    def noise(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.labels == NOISE))


def _all_noise(n: int) -> Clustering:
    return Clustering(labels=np.full(n, NOISE, dtype=np.int64))


def extract_clusters(dendrogram: Dendrogram, params: HdbscanParams) -> Clustering:
    """Condense, score and select clusters; unselected points are noise."""
    n = dendrogram.n_points
    if n < params.min_cluster_size or n < 2:
        return _all_noise(n)

    tree = condense_tree(dendrogram, params.min_cluster_size)
    stability = cluster_stabilities(tree)
    chosen = select_clusters(tree, stability, params.allow_single_cluster)
    if not chosen:
        return _all_noise(n)

    cluster_parent = {
        int(c): int(p)
        for p, c in zip(tree.parent, tree.child)
        if c >= tree.n_points
    }
    raw = np.full(n, NOISE, dtype=np.int64)
    for p, c in zip(tree.parent, tree.child):
        if c >= n:
            continue
        node = int(p)
        while node not in chosen and node in cluster_parent:
            node = cluster_parent[node]
        if node in chosen:
            raw[int(c)] = node

    order = sorted(set(raw[raw != NOISE]), key=lambda c: int(np.flatnonzero(raw == c)[0]))
    rename = {int(c): i for i, c in enumerate(order)}
    labels = np.array([rename.get(int(c), NOISE) for c in raw], dtype=np.int64)
    members = tuple(
        tuple(int(i) for i in np.flatnonzero(labels == k)) for k in range(len(order))
    )
    return Clustering(
        labels=labels,
        stabilities={rename[int(c)]: float(stability[int(c)]) for c in order},
        members=members,
    )


def hdbscan(D: np.ndarray, params: HdbscanParams) -> Clustering:
    """Cluster points given their pairwise distance matrix."""
    D = np.asarray(D, dtype=np.float64)
    n = D.shape[0]
    if n < params.min_cluster_size or params.k > n:
        return _all_noise(n)
    core = core_distances(D, params.k)
    dendrogram = build_hierarchy(mutual_reachability(D, core))
    clustering = extract_clusters(dendrogram, params)
    logger.debug(
        "Clustered %d points into %d clusters (%d noise)",
        n, clustering.n_clusters, len(clustering.noise),
    )
    return clustering
