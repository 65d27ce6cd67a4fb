"""Block matrices attached to a matrix-weighted graph.

Three operators: the tree distance matrix D, the block Laplacian L (raw or
inverse-weighted), and the scaled incidence matrix Q with L = Q Q^T for SPD
weights.  All are returned as :class:`~mwtrees.linalg.BlockMatrix` with the
graph's block size.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .errors import NotSPDError, SingularMatrixError, SingularWeightError
from .graphs import (
    MatrixWeightedGraph,
    bfs_parents,
    check_structure,
    require_tree,
)
from .linalg import BlockMatrix, inverse, is_spd, spd_inverse_sqrt


class LaplacianMode(Enum):
    """Which matrix sits in the off-diagonal Laplacian blocks."""

    RAW = "raw"          # blocks use the edge weights themselves
    INVERTED = "inverted"  # blocks use the inverses of the edge weights


def distance_matrix(g: MatrixWeightedGraph) -> BlockMatrix:
    """Block distance matrix of a matrix-weighted tree.

    Block (i, j) is the sum of the weights on the unique i-to-j path, taken
    in ascending edge-index order so the result is bit-for-bit reproducible;
    diagonal blocks are zero.  Blocks (i, j) and (j, i) are the same matrix,
    so the full array is symmetric exactly when every path sum is.
    """
    check_structure(g)
    require_tree(g)
    n, s = g.n, g.s
    data = np.zeros((n * s, n * s))
    weights = [e.weight for e in g.edges]
    for i in range(1, n):
        parent, via = bfs_parents(g, i)
        for j in range(i + 1, n + 1):
            ids = []
            x = j
            while x != i:
                ids.append(via[x])
                x = parent[x]
            block = np.zeros((s, s))
            for k in sorted(ids):
                block = block + weights[k]
            data[(i - 1) * s : i * s, (j - 1) * s : j * s] = block
            data[(j - 1) * s : j * s, (i - 1) * s : i * s] = block
    return BlockMatrix(data, s)


def laplacian(
    g: MatrixWeightedGraph, mode: LaplacianMode = LaplacianMode.INVERTED
) -> BlockMatrix:
    """Block Laplacian of a matrix-weighted graph.

    Off-diagonal block (i, j) is minus the (possibly inverted) weight of the
    edge {i, j}; diagonal block (i, i) is the sum of those matrices over the
    edges at vertex i, accumulated in ascending edge order.  Block rows and
    columns sum to zero by construction.  In INVERTED mode a singular edge
    weight raises SingularWeightError naming the edge.
    """
    check_structure(g)
    n, s = g.n, g.s
    data = np.zeros((n * s, n * s))
    for k, e in enumerate(g.edges):
        if mode is LaplacianMode.INVERTED:
            try:
                block = inverse(e.weight)
            except SingularMatrixError:
                raise SingularWeightError(
                    f"edge {k} ({e.u}, {e.v}) has a singular weight",
                    edge_index=k,
                    endpoints=(e.u, e.v),
                ) from None
        else:
            block = e.weight
        iu = (e.u - 1) * s
        iv = (e.v - 1) * s
        data[iu : iu + s, iu : iu + s] += block
        data[iv : iv + s, iv : iv + s] += block
        data[iu : iu + s, iv : iv + s] -= block
        data[iv : iv + s, iu : iu + s] -= block
    return BlockMatrix(data, s)


def incidence_matrix(g: MatrixWeightedGraph) -> BlockMatrix:
    """Scaled incidence matrix Q of a graph with SPD weights.

    Column block k (one per edge, (n s) x (m s) overall) carries
    ``+inverse_sqrt(W_k)`` at the smaller endpoint and the negated copy at
    the larger one, so that ``Q @ Q.T`` equals the inverse-weighted
    Laplacian and block rows of Q sum to zero.  A non-SPD weight raises
    NotSPDError naming the edge.
    """
    check_structure(g)
    n, s = g.n, g.s
    data = np.zeros((n * s, g.m * s))
    for k, e in enumerate(g.edges):
        try:
            root = spd_inverse_sqrt(e.weight)
        except NotSPDError as exc:
            raise NotSPDError(
                f"edge {k} ({e.u}, {e.v}): {exc}", edge_index=k
            ) from None
        col = k * s
        data[(e.u - 1) * s : e.u * s, col : col + s] = root
        data[(e.v - 1) * s : e.v * s, col : col + s] = -root
    return BlockMatrix(data, s)


def weights_are_spd(g: MatrixWeightedGraph) -> bool:
    """True when every edge weight is symmetric positive definite."""
    return all(is_spd(e.weight) for e in g.edges)
