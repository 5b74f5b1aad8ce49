"""Shape parameters and the power functions built from them.

A shape is a pair of real vectors: one exponent per clique and one per
distinct separator of a fixed perfect order.  The central scalar object
is the product of clique determinant powers divided by separator
determinant powers; all densities, normalizing constants and
admissibility conditions are phrased through it.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import (
    OutOfDomain,
    ShapeMismatch,
    ShapeNotAdmissible,
)
from .graphs import hasse_exponents

__all__ = [
    "ShapeParam",
    "ShapeClass",
    "log_multigamma",
    "log_h",
    "canonical_shape",
    "shape_class",
    "log_gamma_I",
    "log_gamma_II",
]

_TOL = 1e-12


@dataclass(frozen=True)
class ShapeParam:
    """Clique exponents ``alpha`` and distinct-separator exponents
    ``beta``, aligned with one perfect clique order."""

    alpha: tuple
    beta: tuple

    def __post_init__(self):
        object.__setattr__(self, "alpha",
                           tuple(float(a) for a in self.alpha))
        object.__setattr__(self, "beta",
                           tuple(float(b) for b in self.beta))

    def __add__(self, other):
        if len(self.alpha) != len(other.alpha) or \
                len(self.beta) != len(other.beta):
            raise ShapeMismatch("shape lengths differ")
        return ShapeParam(
            tuple(a + b for a, b in zip(self.alpha, other.alpha)),
            tuple(a + b for a, b in zip(self.beta, other.beta)))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return ShapeParam(tuple(-a for a in self.alpha),
                          tuple(-b for b in self.beta))


def check_alignment(shape, ordering):
    if len(shape.alpha) != ordering.k or \
            len(shape.beta) != ordering.k_prime:
        raise ShapeMismatch(
            "shape does not match the clique order",
            alpha=len(shape.alpha), beta=len(shape.beta),
            k=ordering.k, k_prime=ordering.k_prime)


def realign_shape(shape, ord_from, ord_to):
    """Re-index a shape from one perfect order to another.

    Clique exponents follow the clique vertex sets, separator exponents
    follow the separator vertex sets; both collections are invariants of
    the graph, only their order changes.
    """
    check_alignment(shape, ord_from)
    amap = dict(zip(ord_from.cliques, shape.alpha))
    bmap = dict(zip(ord_from.distinct_separators, shape.beta))
    try:
        return ShapeParam(
            tuple(amap[c] for c in ord_to.cliques),
            tuple(bmap[s] for s in ord_to.distinct_separators))
    except KeyError as exc:
        raise ShapeMismatch("orders describe different graphs") from exc


def size_shift(ordering, factor=0.5, offset=1):
    """Shape with entries factor * (block size + offset) per block."""
    return ShapeParam(
        tuple(factor * (c + offset) for c in ordering.clique_sizes),
        tuple(factor * (len(s) + offset)
              for s in ordering.distinct_separators))


def log_multigamma(dim, p):
    """Logarithm of the multivariate gamma function of dimension dim.

    Requires p > (dim - 1) / 2; dim = 0 gives 0.
    """
    if dim == 0:
        return 0.0
    if p <= (dim - 1) / 2.0:
        raise OutOfDomain("multivariate gamma argument out of range",
                          dim=dim, p=p)
    return dim * (dim - 1) / 4.0 * math.log(math.pi) + float(
        sum(gammaln(p - j / 2.0) for j in range(dim)))


def _block_logdets(x, ordering):
    from .cones import _logdet
    ld_c = [_logdet(x.submatrix(c)) for c in ordering.cliques]
    ld_s = [_logdet(x.submatrix(s)) for s in ordering.distinct_separators]
    return ld_c, ld_s


def log_h(shape, x, ordering=None):
    """Log of the clique/separator determinant power product at x.

    Separator factors are weighted by their multiplicity in the order.
    """
    from .graphs import decompose
    ordering = ordering or decompose(x.graph)
    check_alignment(shape, ordering)
    ld_c, ld_s = _block_logdets(x, ordering)
    total = sum(a * ld for a, ld in zip(shape.alpha, ld_c))
    total -= sum(nu * b * ld for nu, b, ld
                 in zip(ordering.multiplicity, shape.beta, ld_s))
    return float(total)


def canonical_shape(kind, ordering, value):
    """Classical one-parameter shape families.

    ``hyper``: every clique and separator exponent equals ``value``,
    which must exceed (max clique size - 1) / 2.  ``gwishart``: exponent
    -(value + size - 1) / 2 per block, ``value`` > 0.
    """
    if kind == "hyper":
        p = float(value)
        cmax = max(ordering.clique_sizes)
        if p <= (cmax - 1) / 2.0:
            raise OutOfDomain("hyper parameter too small",
                              p=p, max_clique=cmax)
        return ShapeParam((p,) * ordering.k, (p,) * ordering.k_prime)
    if kind == "gwishart":
        d = float(value)
        if d <= 0:
            raise OutOfDomain("degrees of freedom must be positive",
                              delta=d)
        return ShapeParam(
            tuple(-(d + c - 1) / 2.0 for c in ordering.clique_sizes),
            tuple(-(d + len(s) - 1) / 2.0
                  for s in ordering.distinct_separators))
    raise OutOfDomain("unknown canonical shape kind", kind=kind)


@dataclass(frozen=True)
class ShapeClass:
    """Membership flags of a shape in the admissible parameter sets.

    ``in_a_hom`` / ``in_b_hom`` are None when no class tree was given.
    ``delta2`` and ``gamma2`` are the slack terms entering the first
    separator condition on each side (None when the graph is prime).
    """

    in_a1: bool
    in_b1: bool
    in_a_p: bool
    in_b_p: bool
    in_a_hom: object
    in_b_hom: object
    delta2: object
    gamma2: object


def _delta2(shape, ordering):
    occ = ordering.occurrences[ordering.sep_index[0]]
    nu = ordering.multiplicity[ordering.sep_index[0]]
    return sum(shape.alpha[j] for j in occ) - \
        nu * shape.beta[ordering.sep_index[0]]


def _gamma2(shape, ordering):
    s2 = len(ordering.separators[0])
    occ = ordering.occurrences[ordering.sep_index[0]]
    b2 = shape.beta[ordering.sep_index[0]]
    return sum(shape.alpha[j] - b2 +
               (ordering.clique_sizes[j] - s2) / 2.0 for j in occ)


def shape_class(shape, ordering, hasse=None, tol=_TOL):
    """Classify a shape against every admissibility system.

    All inequalities are tested strictly up to ``tol``; equality
    constraints must hold within ``tol``.
    """
    check_alignment(shape, ordering)
    alpha, beta = shape.alpha, shape.beta
    csize = ordering.clique_sizes

    in_a1 = len(set(alpha)) == 1 and set(beta) <= set(alpha) and \
        (not beta or len(set(beta)) == 1) and \
        alpha[0] > (max(csize) - 1) / 2.0 + tol
    if in_a1 and beta:
        in_a1 = abs(beta[0] - alpha[0]) <= tol

    in_b1 = False
    deltas = [-2.0 * a - c + 1.0 for a, c in zip(alpha, csize)]
    if max(deltas) - min(deltas) <= tol and deltas[0] > tol:
        in_b1 = all(
            abs(-2.0 * beta[i] - len(s) + 1.0 - deltas[0]) <= tol
            for i, s in enumerate(ordering.distinct_separators))

    if ordering.k == 1:
        c1 = csize[0]
        in_a_p = alpha[0] > (c1 - 1) / 2.0 + tol
        in_b_p = -alpha[0] > (c1 - 1) / 2.0 + tol
        d2 = g2 = None
    else:
        ssize = [len(s) for s in ordering.separators]
        d2 = _delta2(shape, ordering)
        g2 = _gamma2(shape, ordering)
        first = ordering.sep_index[0]
        in_a_p = all(
            abs(sum(alpha[j] for j in ordering.occurrences[i]) -
                ordering.multiplicity[i] * beta[i]) <= tol
            for i in range(ordering.k_prime) if i != first)
        in_a_p = in_a_p and all(
            alpha[j] > (csize[j] - 1) / 2.0 + tol
            for j in range(ordering.k))
        in_a_p = in_a_p and \
            alpha[0] + d2 > (ssize[0] - 1) / 2.0 + tol

        in_b_p = all(
            abs(sum(alpha[j] + (csize[j] - ssize[j - 1]) / 2.0
                    for j in ordering.occurrences[i]) -
                ordering.multiplicity[i] * beta[i]) <= tol
            for i in range(ordering.k_prime) if i != first)
        in_b_p = in_b_p and all(
            -alpha[j] > (csize[j] - ssize[j - 1] - 1) / 2.0 + tol
            for j in range(1, ordering.k))
        in_b_p = in_b_p and \
            -alpha[0] > (csize[0] - ssize[0] - 1) / 2.0 + tol
        in_b_p = in_b_p and \
            -alpha[0] - (csize[0] - ssize[0]) / 2.0 - g2 > \
            (ssize[0] - 1) / 2.0 + tol

    in_a_hom = in_b_hom = None
    if hasse is not None:
        rho, _ = hasse_exponents(hasse, shape)
        m_u = [hasse.weights[u] + hasse.depth_weights[u]
               for u in range(hasse.node_count)]
        sub = [hasse.weights[u] + hasse.subtree_weights[u]
               for u in range(hasse.node_count)]
        in_a_hom = all(rho[u] > (m_u[u] - 1) / 2.0 + tol
                       for u in range(hasse.node_count))
        in_b_hom = all(-rho[u] > (sub[u] - 1) / 2.0 + tol
                       for u in range(hasse.node_count))

    return ShapeClass(in_a1, in_b1, in_a_p, in_b_p,
                      in_a_hom, in_b_hom, d2, g2)


def log_gamma_I(shape, ordering, hasse=None):
    """Log normalizing constant of the first-cone family.

    Uses the per-order formula when the shape is admissible for the
    given order, falling back to the class-tree formula for homogeneous
    graphs; raises ShapeNotAdmissible otherwise.
    """
    check_alignment(shape, ordering)
    cls = shape_class(shape, ordering, hasse)
    if ordering.k == 1:
        if not cls.in_a_p:
            raise ShapeNotAdmissible(
                "shape outside the admissible set for this cone")
        return log_multigamma(ordering.clique_sizes[0], shape.alpha[0])
    if cls.in_a_p:
        s2 = len(ordering.separators[0])
        c1 = ordering.clique_sizes[0]
        total = log_multigamma(s2, shape.alpha[0] + cls.delta2)
        total += _ratio_shifted(c1, s2, shape.alpha[0])
        for j in range(1, ordering.k):
            total += _ratio_shifted(ordering.clique_sizes[j],
                                    len(ordering.separators[j - 1]),
                                    shape.alpha[j])
        return total
    if hasse is not None and cls.in_a_hom:
        return _log_gamma_hom(shape, hasse, side="first")
    raise ShapeNotAdmissible(
        "shape outside the admissible set for this cone")


def log_gamma_II(shape, ordering, hasse=None):
    """Log normalizing constant of the second-cone family."""
    check_alignment(shape, ordering)
    cls = shape_class(shape, ordering, hasse)
    if ordering.k == 1:
        if not cls.in_b_p:
            raise ShapeNotAdmissible(
                "shape outside the admissible set for this cone")
        return log_multigamma(ordering.clique_sizes[0], -shape.alpha[0])
    if cls.in_b_p:
        s2 = len(ordering.separators[0])
        c1 = ordering.clique_sizes[0]
        a1 = shape.alpha[0]
        total = log_multigamma(
            s2, -a1 - (c1 - s2) / 2.0 - cls.gamma2)
        total += _ratio_plain(c1, s2, -a1)
        for j in range(1, ordering.k):
            total += _ratio_plain(ordering.clique_sizes[j],
                                  len(ordering.separators[j - 1]),
                                  -shape.alpha[j])
        return total
    if hasse is not None and cls.in_b_hom:
        return _log_gamma_hom(shape, hasse, side="second")
    raise ShapeNotAdmissible(
        "shape outside the admissible set for this cone")


def _ratio_shifted(c, s, a):
    """log of (dim-c multigamma at a) / (dim-s multigamma at a)."""
    return (c - s) * s / 2.0 * math.log(math.pi) + \
        log_multigamma(c - s, a - s / 2.0)


def _ratio_plain(c, s, a):
    """log of (dim-c multigamma at a) / (dim-s at a - (c - s)/2)."""
    return (c - s) * s / 2.0 * math.log(math.pi) + \
        log_multigamma(c - s, a)


def _log_gamma_hom(shape, hasse, side):
    rho, _ = hasse_exponents(hasse, shape)
    total = 0.0
    for u in range(hasse.node_count):
        n_u = hasse.weights[u]
        total += n_u * hasse.depth_weights[u] / 2.0 * math.log(math.pi)
        if side == "first":
            total += log_multigamma(
                n_u, rho[u] - hasse.depth_weights[u] / 2.0)
        else:
            total += log_multigamma(
                n_u, -rho[u] - hasse.subtree_weights[u] / 2.0)
    return total
