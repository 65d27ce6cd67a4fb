"""Seeded random instances and small brute-force oracles.

All randomness flows through ``numpy.random.default_rng`` (PCG64), so a
fixed seed reproduces the same instance on any platform.  The oracles
recompute quantities by definition (path sums, spanning-tree enumeration)
and are deliberately independent of the fast routes they cross-check.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from enum import Enum
from itertools import combinations

import numpy as np

from .errors import BadConfigError, TooLargeError
from .graphs import MatrixWeightedGraph, check_structure, tree_path
from .linalg import BlockMatrix

# Redraws allowed while rejecting ill-conditioned or singular weight sums.
_MAX_REDRAWS = 1000
# Spanning-tree enumeration refuses above this many edge subsets.
_MAX_SUBSETS = 5_000_000


class WeightKind(Enum):
    """Weight families the generators can draw from."""

    SPD = "spd"
    NONSINGULAR = "nonsingular"
    SCALAR_POSITIVE = "scalar-positive"
    SCALAR_ANY_NONZERO = "scalar-any-nonzero"


@dataclass(frozen=True)
class GenConfig:
    """Ranges and knobs for the random instance generators.

    ``n_range`` and ``s_range`` are inclusive; ``condition_cap`` bounds the
    condition number of each drawn weight (and of the weight sum, for the
    kinds that do not guarantee it by construction).
    """

    n_range: tuple[int, int] = (2, 10)
    s_range: tuple[int, int] = (1, 4)
    kind: WeightKind = WeightKind.SPD
    condition_cap: float = 1e4
    seed: int = 0

    def __post_init__(self):
        n_lo, n_hi = self.n_range
        s_lo, s_hi = self.s_range
        if not (2 <= n_lo <= n_hi):
            raise BadConfigError(f"bad vertex range {self.n_range}")
        if not (1 <= s_lo <= s_hi):
            raise BadConfigError(f"bad block size range {self.s_range}")
        if not self.condition_cap > 1.0:
            raise BadConfigError(
                f"condition cap must exceed 1, got {self.condition_cap}"
            )
        if not isinstance(self.kind, WeightKind):
            raise BadConfigError(f"bad weight kind {self.kind!r}")


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_spd(s: int, condition_cap: float = 1e4, seed=0) -> np.ndarray:
    """Random s x s SPD matrix with condition number at most
    ``condition_cap``.

    Built as V diag(lam) V^T with a random orthogonal V and eigenvalues
    drawn log-uniformly from [1/sqrt(cap), sqrt(cap)].
    """
    rng = _as_rng(seed)
    half = 0.5 * math.log(condition_cap)
    lam = np.exp(rng.uniform(-half, half, size=s))
    vec = np.linalg.qr(rng.standard_normal((s, s)))[0]
    w = (vec * lam) @ vec.T
    return 0.5 * (w + w.T)


def random_nonsingular(s: int, condition_cap: float = 1e4, seed=0) -> np.ndarray:
    """Random s x s invertible matrix, generally asymmetric.

    Entries are uniform(-1, 1); draws with tiny determinant or condition
    number above ``condition_cap`` are rejected and retried.
    """
    rng = _as_rng(seed)
    for _ in range(_MAX_REDRAWS):
        w = rng.uniform(-1.0, 1.0, size=(s, s))
        if abs(np.linalg.det(w)) < 0.05:
            continue
        if np.linalg.cond(w) > condition_cap:
            continue
        return w
    raise BadConfigError(
        f"could not draw a well-conditioned {s}x{s} matrix "
        f"(cap {condition_cap:g})"
    )


def _random_weight(kind: WeightKind, s: int, cap: float,
                   rng: np.random.Generator) -> np.ndarray:
    if kind is WeightKind.SPD:
        return random_spd(s, cap, rng)
    if kind is WeightKind.NONSINGULAR:
        return random_nonsingular(s, cap, rng)
    if kind is WeightKind.SCALAR_POSITIVE:
        return np.eye(s) * rng.uniform(0.1, 10.0)
    # SCALAR_ANY_NONZERO: nonzero multiple of the identity, either sign
    value = rng.uniform(0.1, 10.0) * (1.0 if rng.uniform() < 0.5 else -1.0)
    return np.eye(s) * value


def _weight_sum_acceptable(weights: list[np.ndarray], kind: WeightKind,
                           s: int, cap: float) -> bool:
    # SPD and positive scalar sums are automatically invertible; the signed
    # kinds can cancel, so reject sums that are singular or ill-conditioned
    if kind in (WeightKind.SPD, WeightKind.SCALAR_POSITIVE):
        return True
    total = np.zeros((s, s))
    for w in weights:
        total += w
    sv = np.linalg.svd(total, compute_uv=False)
    return sv[-1] > sv[0] / cap and sv[0] > 0.0


def _draw_weights(edge_count: int, kind: WeightKind, s: int, cap: float,
                  rng: np.random.Generator) -> list[np.ndarray]:
    for _ in range(_MAX_REDRAWS):
        weights = [_random_weight(kind, s, cap, rng) for _ in range(edge_count)]
        if _weight_sum_acceptable(weights, kind, s, cap):
            return weights
    raise BadConfigError("could not draw weights with an invertible sum")


def _prufer_decode(seq: list[int], n: int) -> list[tuple[int, int]]:
    """Edges of the labeled tree encoded by a length n-2 sequence over 1..n."""
    degree = [1] * (n + 1)
    degree[0] = 0
    for x in seq:
        degree[x] += 1
    leaves = [v for v in range(1, n + 1) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((min(leaf, x), max(leaf, x)))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append((min(u, v), max(u, v)))
    return edges


def random_tree(config: GenConfig) -> MatrixWeightedGraph:
    """Random matrix-weighted tree drawn uniformly over labeled topologies.

    The topology comes from decoding a uniform random sequence (a bijection
    onto labeled trees, so every tree on n vertices is equally likely);
    weights are drawn per ``config.kind`` in edge order after sorting edges
    by endpoints.
    """
    rng = np.random.default_rng(config.seed)
    n = int(rng.integers(config.n_range[0], config.n_range[1] + 1))
    s = int(rng.integers(config.s_range[0], config.s_range[1] + 1))
    if n == 2:
        topo = [(1, 2)]
    else:
        seq = [int(x) for x in rng.integers(1, n + 1, size=n - 2)]
        topo = sorted(_prufer_decode(seq, n))
    weights = _draw_weights(len(topo), config.kind, s, config.condition_cap, rng)
    return MatrixWeightedGraph(
        n, s, [(u, v, w) for (u, v), w in zip(topo, weights)]
    )


def random_connected_nontree(config: GenConfig) -> MatrixWeightedGraph:
    """Random connected graph with at least one cycle.

    Starts from a random tree topology and adds one to three extra distinct
    non-tree edges, so the result is connected and never a tree.  Needs
    n >= 3 (no extra edge exists on two vertices).
    """
    if config.n_range[0] < 3:
        raise BadConfigError("connected non-trees need n >= 3")
    rng = np.random.default_rng(config.seed)
    n = int(rng.integers(config.n_range[0], config.n_range[1] + 1))
    s = int(rng.integers(config.s_range[0], config.s_range[1] + 1))
    if n == 3:
        tree_topo = [(1, 2), (1, 3)] if rng.uniform() < 0.5 else [(1, 2), (2, 3)]
    else:
        seq = [int(x) for x in rng.integers(1, n + 1, size=n - 2)]
        tree_topo = sorted(_prufer_decode(seq, n))
    present = set(tree_topo)
    missing = [
        (u, v)
        for u in range(1, n + 1)
        for v in range(u + 1, n + 1)
        if (u, v) not in present
    ]
    extra_count = int(rng.integers(1, min(3, len(missing)) + 1))
    picks = rng.choice(len(missing), size=extra_count, replace=False)
    topo = sorted(tree_topo + [missing[int(i)] for i in picks])
    weights = _draw_weights(len(topo), config.kind, s, config.condition_cap, rng)
    return MatrixWeightedGraph(
        n, s, [(u, v, w) for (u, v), w in zip(topo, weights)]
    )


def spanning_tree_oracle(
    g: MatrixWeightedGraph, marked_edge: int
) -> tuple[int, int]:
    """Count spanning trees containing and avoiding one edge, by brute force.

    Enumerates every (n-1)-subset of the edges and tests it for being a
    spanning tree with a union-find; refuses graphs with more than 9
    vertices or too many subsets.  Returns (with_marked, without_marked).
    """
    check_structure(g)
    if g.n > 9:
        raise TooLargeError(f"spanning-tree oracle is capped at 9 vertices, got {g.n}")
    if not 0 <= marked_edge < g.m:
        raise ValueError(f"edge index {marked_edge} out of range 0..{g.m - 1}")
    if g.n >= 2 and math.comb(g.m, g.n - 1) > _MAX_SUBSETS:
        raise TooLargeError(
            f"{math.comb(g.m, g.n - 1)} edge subsets exceed the oracle cap"
        )
    with_marked = 0
    without_marked = 0
    for subset in combinations(range(g.m), g.n - 1):
        parent = list(range(g.n + 1))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        acyclic = True
        for k in subset:
            e = g.edges[k]
            ru, rv = find(e.u), find(e.v)
            if ru == rv:
                acyclic = False
                break
            parent[ru] = rv
        if not acyclic:
            continue
        if marked_edge in subset:
            with_marked += 1
        else:
            without_marked += 1
    return with_marked, without_marked


def distance_oracle(g: MatrixWeightedGraph) -> BlockMatrix:
    """Tree distance matrix recomputed pairwise from scratch.

    Walks the unique path for every vertex pair independently and sums the
    weights in ascending edge-index order, mirroring the definition rather
    than the batched construction, so the two routes can be compared
    bit for bit.
    """
    check_structure(g)
    n, s = g.n, g.s
    data = np.zeros((n * s, n * s))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            block = np.zeros((s, s))
            for k in sorted(tree_path(g, i, j)):
                block = block + g.edges[k].weight
            data[(i - 1) * s : i * s, (j - 1) * s : j * s] = block
            data[(j - 1) * s : j * s, (i - 1) * s : i * s] = block
    return BlockMatrix(data, s)


def random_instances(
    count: int, config: GenConfig, tree: bool = True
) -> list[MatrixWeightedGraph]:
    """A reproducible batch: instance i uses seed ``config.seed + i``."""
    out = []
    for i in range(count):
        cfg = GenConfig(
            n_range=config.n_range,
            s_range=config.s_range,
            kind=config.kind,
            condition_cap=config.condition_cap,
            seed=config.seed + i,
        )
        out.append(random_tree(cfg) if tree else random_connected_nontree(cfg))
    return out
