"""Matrix cones attached to a decomposable graph.

Two cones appear throughout: incomplete symmetric matrices whose clique
submatrices are positive definite (only entries on the diagonal and on
edges are meaningful), and sparse positive definite matrices that vanish
off the diagonal and edge set.  The two are in bijection: an incomplete
matrix has a unique positive definite completion whose inverse lands in
the sparse cone, and inversion maps one cone onto the other.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    GraphMismatch,
    MalformedInput,
    NotInPG,
    NotInQG,
    ShapeMismatch,
)
from .graphs import decompose

__all__ = [
    "IncompleteMatrix",
    "SparsePrecision",
    "Blocks",
    "project",
    "trace_pair",
    "complete",
    "precision_of",
    "phi",
    "logdet_hat",
    "split_blocks",
    "assemble_blocks",
    "schur_pad",
]


def _idx(vertices):
    """1-based vertex tuple to 0-based numpy index array."""
    return np.asarray(vertices, dtype=int) - 1


def _as_matrix(data, r):
    arr = np.asarray(data, dtype=float)
    if arr.shape != (r, r):
        raise DimensionMismatch("matrix has wrong shape",
                                expected=[r, r], got=list(arr.shape))
    return arr


@dataclass(frozen=True)
class IncompleteMatrix:
    """Symmetric matrix known only on the diagonal and edge entries.

    ``data`` is stored dense with exact zeros at the unknown positions,
    which keeps all the linear algebra plain numpy.
    """

    graph: object
    data: np.ndarray

    def __post_init__(self):
        arr = _as_matrix(self.data, self.graph.vertex_count)
        object.__setattr__(self, "data", arr * self.graph.edge_mask())

    def submatrix(self, vertices):
        ix = _idx(vertices)
        return self.data[np.ix_(ix, ix)]


@dataclass(frozen=True)
class SparsePrecision:
    """Positive definite matrix vanishing off the diagonal and edges."""

    graph: object
    data: np.ndarray

    def __post_init__(self):
        arr = _as_matrix(self.data, self.graph.vertex_count)
        object.__setattr__(self, "data", arr * self.graph.edge_mask())

    def submatrix(self, vertices):
        ix = _idx(vertices)
        return self.data[np.ix_(ix, ix)]


def _check_symmetric(arr, tol=1e-12):
    gap = float(np.max(np.abs(arr - arr.T))) if arr.size else 0.0
    if gap > tol:
        raise MalformedInput("matrix is not symmetric", asymmetry=gap)


def _is_pd(block):
    try:
        np.linalg.cholesky(block)
        return True
    except np.linalg.LinAlgError:
        return False


def project(full, graph):
    """Restrict a dense symmetric matrix to the pattern of the graph."""
    arr = _as_matrix(full, graph.vertex_count)
    _check_symmetric(arr)
    sym = 0.5 * (arr + arr.T)
    return IncompleteMatrix(graph, sym)


def require_qg(x, ordering=None):
    """Check positive definiteness of every clique submatrix."""
    ordering = ordering or decompose(x.graph)
    for c in ordering.cliques:
        if not _is_pd(x.submatrix(c)):
            raise NotInQG("clique submatrix is not positive definite",
                          clique=list(c))
    return ordering


def trace_pair(x, y):
    """Inner product summing x_ij * y_ij over all ordered pairs of the
    pattern (off-diagonal entries count twice).

    Equals the trace of (completion of x) times y whenever y is sparse
    with respect to the same graph.
    """
    if x.graph != y.graph:
        raise GraphMismatch("operands live on different graphs")
    mask = x.graph.edge_mask()
    return float(np.sum(x.data * y.data * mask))


def complete(x, ordering=None):
    """Unique positive definite completion as a dense array.

    Filled in along a perfect clique order: each new residual block is
    regressed onto the current history through its separator.
    """
    ordering = require_qg(x, ordering)
    r = x.graph.vertex_count
    out = np.zeros((r, r))
    c1 = _idx(ordering.cliques[0])
    out[np.ix_(c1, c1)] = x.submatrix(ordering.cliques[0])
    for j in range(1, ordering.k):
        sep = ordering.separators[j - 1]
        res = ordering.residuals[j]
        hist = _idx(ordering.histories[j - 1])
        si = _idx(sep)
        ri = _idx(res)
        xs = x.submatrix(sep)
        xrs = x.data[np.ix_(ri, si)]
        ratio = np.linalg.solve(xs, xrs.T).T if len(sep) else \
            np.zeros((len(res), 0))
        cross = ratio @ out[np.ix_(si, hist)] if len(sep) else \
            np.zeros((len(res), len(hist)))
        out[np.ix_(ri, hist)] = cross
        out[np.ix_(hist, ri)] = cross.T
        out[np.ix_(ri, ri)] = x.submatrix(res)
    return 0.5 * (out + out.T)


def precision_of(x, ordering=None):
    """Inverse of the completion of x, computed blockwise.

    The result is exactly zero off the pattern: it accumulates padded
    clique inverses minus padded separator inverses.
    """
    ordering = require_qg(x, ordering)
    r = x.graph.vertex_count
    out = np.zeros((r, r))
    for c in ordering.cliques:
        ix = _idx(c)
        out[np.ix_(ix, ix)] += np.linalg.inv(x.submatrix(c))
    for sep in ordering.separators:
        if not sep:
            continue
        ix = _idx(sep)
        out[np.ix_(ix, ix)] -= np.linalg.inv(x.submatrix(sep))
    return SparsePrecision(x.graph, 0.5 * (out + out.T))


def phi(y):
    """Projection of the dense inverse of y onto the pattern of y."""
    try:
        np.linalg.cholesky(y.data)
    except np.linalg.LinAlgError:
        raise NotInPG("matrix is not positive definite") from None
    return project(np.linalg.inv(y.data), y.graph)


def _logdet(block):
    sign, val = np.linalg.slogdet(block) if block.size else (1.0, 0.0)
    if sign <= 0:
        raise NotInQG("block has non-positive determinant")
    return val


def logdet_hat(x, ordering=None):
    """Log determinant of the completion of x.

    Computed as the clique log determinants minus the separator ones,
    never forming the completion itself.
    """
    ordering = ordering or decompose(x.graph)
    total = 0.0
    for c in ordering.cliques:
        total += _logdet(x.submatrix(c))
    for sep in ordering.separators:
        if sep:
            total -= _logdet(x.submatrix(sep))
    return total


@dataclass(frozen=True)
class Blocks:
    """Regression coordinates of an incomplete matrix.

    The first clique is split against the first separator into a
    conditional block, a regression coefficient and the separator block
    itself; every later clique contributes a conditional block and a
    regression coefficient onto its separator.
    """

    ordering: object
    c1_cond: np.ndarray
    c1_ratio: np.ndarray
    c1_sep: np.ndarray
    conds: tuple  # j = 1..k-1 (0-based list index j-1)
    ratios: tuple

    @property
    def k(self):
        return self.ordering.k


def _regress(x, rows, cols):
    """Return (conditional block, coefficient) of x[rows] onto x[cols]."""
    if len(cols) == 0:
        return x.data[np.ix_(_idx(rows), _idx(rows))].copy(), \
            np.zeros((len(rows), 0))
    ri, ci = _idx(rows), _idx(cols)
    xs = x.data[np.ix_(ci, ci)]
    xrs = x.data[np.ix_(ri, ci)]
    ratio = np.linalg.solve(xs, xrs.T).T
    cond = x.data[np.ix_(ri, ri)] - ratio @ xrs.T
    return cond, ratio


def split_blocks(x, ordering=None):
    """Decompose x into independent regression coordinates."""
    ordering = require_qg(x, ordering)
    if ordering.k == 1:
        c = ordering.cliques[0]
        return Blocks(ordering, x.submatrix(c),
                      np.zeros((len(c), 0)), np.zeros((0, 0)), (), ())
    s2 = ordering.separators[0]
    r1 = tuple(v for v in ordering.cliques[0] if v not in s2)
    c1_cond, c1_ratio = _regress(x, r1, s2)
    c1_sep = x.submatrix(s2)
    conds = []
    ratios = []
    for j in range(1, ordering.k):
        cond, ratio = _regress(x, ordering.residuals[j],
                               ordering.separators[j - 1])
        conds.append(cond)
        ratios.append(ratio)
    return Blocks(ordering, c1_cond, c1_ratio, c1_sep,
                  tuple(conds), tuple(ratios))


def assemble_blocks(blocks):
    """Inverse of :func:`split_blocks`."""
    ordering = blocks.ordering
    g = ordering.graph
    r = g.vertex_count
    out = np.zeros((r, r))
    if ordering.k == 1:
        ix = _idx(ordering.cliques[0])
        out[np.ix_(ix, ix)] = blocks.c1_cond
        return IncompleteMatrix(g, out)
    s2 = ordering.separators[0]
    r1 = tuple(v for v in ordering.cliques[0] if v not in s2)
    si = _idx(s2)
    ri = _idx(r1)
    out[np.ix_(si, si)] = blocks.c1_sep
    cross = blocks.c1_ratio @ blocks.c1_sep
    out[np.ix_(ri, si)] = cross
    out[np.ix_(si, ri)] = cross.T
    out[np.ix_(ri, ri)] = blocks.c1_cond + cross @ blocks.c1_ratio.T
    for j in range(1, ordering.k):
        sep = ordering.separators[j - 1]
        res = ordering.residuals[j]
        si = _idx(sep)
        ri = _idx(res)
        xs = out[np.ix_(si, si)]
        cross = blocks.ratios[j - 1] @ xs
        out[np.ix_(ri, si)] = cross
        out[np.ix_(si, ri)] = cross.T
        out[np.ix_(ri, ri)] = blocks.conds[j - 1] + \
            cross @ blocks.ratios[j - 1].T
    return IncompleteMatrix(g, 0.5 * (out + out.T))


def schur_pad(m, vertices, size=None):
    """Schur complement of the block on ``vertices``, zero padded.

    Given a dense symmetric matrix m and a 1-based vertex list A, the
    result is zero on the rows and columns of A and carries
    m_B - m_BA m_A^{-1} m_AB on the complement B.
    """
    arr = np.asarray(m, dtype=float)
    r = arr.shape[0] if size is None else size
    if arr.shape != (r, r):
        raise DimensionMismatch("matrix has wrong shape",
                                expected=[r, r], got=list(arr.shape))
    a = _idx(vertices)
    if len(a) and (a.min() < 0 or a.max() >= r):
        raise ShapeMismatch("vertex label out of range",
                            vertices=list(vertices), r=r)
    b = np.setdiff1d(np.arange(r), a)
    out = np.zeros((r, r))
    if len(a) == 0:
        out[np.ix_(b, b)] = arr[np.ix_(b, b)]
        return out
    maa = arr[np.ix_(a, a)]
    mba = arr[np.ix_(b, a)]
    out[np.ix_(b, b)] = arr[np.ix_(b, b)] - \
        mba @ np.linalg.solve(maa, mba.T)
    return out
