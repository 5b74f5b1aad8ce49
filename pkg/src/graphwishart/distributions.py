"""The four Wishart-type families on the cones of a decomposable graph.

Families: ``type1`` lives on the incomplete-matrix cone, ``type2`` on
the sparse positive definite cone, and ``inv_type1`` / ``inv_type2``
are their images under inversion (completion followed by matrix
inverse, projected back to the pattern).  A fifth pair of families with
densities of beta-prime type is exposed through :func:`logpdf_f`.

All densities are taken with respect to Lebesgue measure on the free
entries of the pattern.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import cones
from .cones import (
    IncompleteMatrix,
    SparsePrecision,
    complete,
    phi,
    precision_of,
    project,
    schur_pad,
    trace_pair,
)
from .errors import (
    DimensionMismatch,
    NotPositiveDefinite,
    GraphMismatch,
    NotHomogeneous,
    NotInPG,
    NotInQG,
    OutOfDomain,
    OutOfSupport,
    ShapeNotAdmissible,
)
from .graphs import decompose, homogeneous_structure, hasse_exponents
from .shapes import (
    ShapeParam,
    check_alignment,
    log_gamma_I,
    log_gamma_II,
    log_h,
    log_multigamma,
    shape_class,
    size_shift,
)

__all__ = [
    "RngStream",
    "WishartSpec",
    "sample_base_wishart",
    "sample_matrix_normal",
    "logpdf",
    "logpdf_f",
    "sample",
    "mean_type1",
    "mean_type2",
    "laplace",
]

FAMILIES = ("type1", "type2", "inv_type1", "inv_type2")


class RngStream:
    """Counter-based random stream, reproducible across platforms.

    A (seed, substream) pair keys a Philox generator; distinct
    substreams of one seed are statistically independent.
    """

    def __init__(self, seed, substream=0):
        self.seed = int(seed)
        self.substream = int(substream)
        self.gen = np.random.Generator(
            np.random.Philox(key=[self.seed, self.substream]))

    def spawn(self, substream):
        """Independent stream under the same seed."""
        return RngStream(self.seed, substream)


def _as_stream(rng):
    if isinstance(rng, RngStream):
        return rng
    return RngStream(rng)


def _tr(a):
    return np.swapaxes(a, -1, -2)


def sample_base_wishart(r, p, scale, rng, size=None):
    """Wishart draws with density proportional to
    det(x)^(p - (r+1)/2) exp(-tr(scale^{-1} x)); the mean is p * scale.

    Returns an (n, r, r) array when size is given, one (r, r) matrix
    otherwise.
    """
    rng = _as_stream(rng)
    scale = np.asarray(scale, dtype=float)
    if scale.shape != (r, r):
        raise DimensionMismatch("scale has wrong shape",
                                expected=[r, r], got=list(scale.shape))
    if p <= (r - 1) / 2.0:
        raise OutOfDomain("shape parameter too small for dimension",
                          p=p, r=r)
    n = 1 if size is None else int(size)
    if r == 0:
        out = np.zeros((n, 0, 0))
        return out if size is not None else out[0]
    left = np.linalg.cholesky(scale)
    t = np.zeros((n, r, r))
    for i in range(r):
        t[:, i, i] = np.sqrt(rng.gen.gamma(p - i / 2.0, 1.0, size=n))
    if r > 1:
        rows, colidx = np.tril_indices(r, -1)
        t[:, rows, colidx] = rng.gen.normal(
            0.0, math.sqrt(0.5), size=(n, len(rows)))
    lt = left @ t
    out = lt @ _tr(lt)
    return out if size is not None else out[0]


def sample_matrix_normal(mean, row_cov, col_prec_mate, rng, size=None):
    """Matrix normal draws with density proportional to
    exp(-tr[row_cov^{-1} (d - mean) col_prec_mate (d - mean)^T]).

    The columns are coupled through ``col_prec_mate``: large values
    there mean small spread.  Entrywise the covariance of the deltas is
    0.5 * col_prec_mate^{-1} (x) row_cov.
    """
    rng = _as_stream(rng)
    mean = np.asarray(mean, dtype=float)
    a, b = mean.shape
    n = 1 if size is None else int(size)
    if a == 0 or b == 0:
        out = np.broadcast_to(mean, (n, a, b)).copy()
        return out if size is not None else out[0]
    try:
        lu = np.linalg.cholesky(np.asarray(row_cov, dtype=float))
        lv = np.linalg.cholesky(np.asarray(col_prec_mate, dtype=float))
    except np.linalg.LinAlgError:
        raise NotPositiveDefinite(
            "row or column matrix is not positive definite") from None
    z = rng.gen.normal(0.0, math.sqrt(0.5), size=(n, a, b))
    delta = mean + lu @ np.linalg.solve(
        np.broadcast_to(lv.T, (n, b, b)).copy(), _tr(z))\
        .swapaxes(1, 2)
    return delta if size is not None else delta[0]


def _mn_batch_colcov(mean, row_cov, col_mats, rng, n):
    """Matrix normal batch where the column coupling varies per draw."""
    a = mean.shape[0]
    b = mean.shape[1]
    if a == 0 or b == 0:
        return np.broadcast_to(mean, (n, a, b)).copy()
    lu = np.linalg.cholesky(row_cov)
    lv = np.linalg.cholesky(col_mats)
    z = rng.gen.normal(0.0, math.sqrt(0.5), size=(n, a, b))
    right = np.linalg.solve(_tr(lv), _tr(z))
    return mean + lu @ _tr(right)


def _mn_batch_rowcov(mean, row_mats, col_mat, rng, n):
    """Matrix normal batch where the row covariance varies per draw."""
    a = mean.shape[0]
    b = mean.shape[1]
    if a == 0 or b == 0:
        return np.broadcast_to(mean, (n, a, b)).copy()
    lu = np.linalg.cholesky(row_mats)
    lv = np.linalg.cholesky(col_mat)
    z = rng.gen.normal(0.0, math.sqrt(0.5), size=(n, a, b))
    right = np.linalg.solve(
        np.broadcast_to(lv.T, (n, b, b)).copy(), _tr(z))
    return mean + lu @ _tr(right)


def log_wishart_pdf(x, p, scale):
    """Log density matching :func:`sample_base_wishart`."""
    x = np.asarray(x, dtype=float)
    scale = np.asarray(scale, dtype=float)
    r = x.shape[0]
    if r == 0:
        return 0.0
    sign, ldx = np.linalg.slogdet(x)
    if sign <= 0:
        return -np.inf
    _, lds = np.linalg.slogdet(scale)
    return float((p - (r + 1) / 2.0) * ldx
                 - np.trace(np.linalg.solve(scale, x))
                 - log_multigamma(r, p) - p * lds)


def log_inv_wishart_pdf(u, p, rate):
    """Log density of the inverse of a Wishart draw with the given rate
    matrix: u = x^{-1} where x has scale rate^{-1}."""
    u = np.asarray(u, dtype=float)
    rate = np.asarray(rate, dtype=float)
    r = u.shape[0]
    if r == 0:
        return 0.0
    sign, ldu = np.linalg.slogdet(u)
    if sign <= 0:
        return -np.inf
    _, ldr = np.linalg.slogdet(rate)
    return float(-(p + (r + 1) / 2.0) * ldu
                 - np.trace(np.linalg.solve(u, rate))
                 - log_multigamma(r, p) + p * ldr)


def log_matrix_normal_pdf(d, mean, row_cov, col_prec_mate):
    """Log density matching :func:`sample_matrix_normal`."""
    d = np.asarray(d, dtype=float)
    a, b = d.shape
    if a == 0 or b == 0:
        return 0.0
    dev = d - np.asarray(mean, dtype=float)
    u = np.asarray(row_cov, dtype=float)
    v = np.asarray(col_prec_mate, dtype=float)
    _, ldu = np.linalg.slogdet(u)
    _, ldv = np.linalg.slogdet(v)
    quad = np.trace(np.linalg.solve(u, dev) @ v @ dev.T)
    return float(-quad - a * b / 2.0 * math.log(math.pi)
                 - b / 2.0 * ldu + a / 2.0 * ldv)


@dataclass
class WishartSpec:
    """A fully validated member of one of the four families.

    ``scale`` is an IncompleteMatrix for type1 / inv_type1 and a
    SparsePrecision for type2 / inv_type2.  Construction checks cone
    membership of the scale and admissibility of the shape; derived
    quantities (clique order, class tree when the graph is homogeneous,
    log normalizing constant) are cached on the instance.
    """

    graph: object
    shape: ShapeParam
    scale: object
    family: str
    ordering: object = field(default=None)
    hasse: object = field(default=None)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise OutOfDomain("unknown family", family=self.family)
        if self.ordering is None:
            self.ordering = decompose(self.graph)
        check_alignment(self.shape, self.ordering)
        if self.hasse is None:
            try:
                self.hasse = homogeneous_structure(self.graph)
            except NotHomogeneous:
                self.hasse = None
        wants_q = self.family in ("type1", "inv_type1")
        if isinstance(self.scale, SparsePrecision):
            self.scale = IncompleteMatrix(self.scale.graph,
                                          self.scale.data)
        if not isinstance(self.scale, IncompleteMatrix):
            raise OutOfDomain("scale must be an incomplete matrix",
                              family=self.family)
        if self.scale.graph != self.graph:
            raise GraphMismatch("scale lives on a different graph")
        cones.require_qg(self.scale, self.ordering)
        cls = shape_class(self.shape, self.ordering, self.hasse)
        self.shape_info = cls
        if wants_q:
            self.admissible_per_order = cls.in_a_p
            ok = cls.in_a_p or bool(cls.in_a_hom)
        else:
            self.admissible_per_order = cls.in_b_p
            ok = cls.in_b_p or bool(cls.in_b_hom)
        if not ok:
            raise ShapeNotAdmissible(
                "shape is not admissible for this family",
                family=self.family)
        if wants_q:
            self.log_gamma = log_gamma_I(
                self.shape, self.ordering, self.hasse)
        else:
            self.log_gamma = log_gamma_II(
                self.shape, self.ordering, self.hasse)
        self.log_h_scale = log_h(self.shape, self.scale, self.ordering)

    @property
    def r(self):
        return self.graph.vertex_count


def _mu_weight(ordering):
    return size_shift(ordering, -0.5, 1)


def _nu_weight(ordering):
    return size_shift(ordering, 0.5, 1)


def logpdf(spec, point):
    """Log density of a spec at a point of the matching cone.

    type1 and inv_type2 take incomplete matrices with positive definite
    clique blocks; type2 and inv_type1 take sparse positive definite
    matrices.  Points outside the cone raise OutOfSupport.
    """
    ordering = spec.ordering
    if spec.family in ("type1", "inv_type2"):
        if not isinstance(point, IncompleteMatrix):
            raise OutOfSupport("point must be an incomplete matrix",
                               family=spec.family)
        if point.graph != spec.graph:
            raise GraphMismatch("point lives on a different graph")
        try:
            cones.require_qg(point, ordering)
        except NotInQG as exc:
            raise OutOfSupport(
                "point has a non positive definite clique block",
                **exc.context) from None
        x = point
    else:
        if not isinstance(point, SparsePrecision):
            raise OutOfSupport("point must be a sparse precision",
                               family=spec.family)
        if point.graph != spec.graph:
            raise GraphMismatch("point lives on a different graph")
        try:
            x = phi(point)
        except NotInPG:
            raise OutOfSupport(
                "point is not positive definite") from None

    base = log_h(spec.shape, x, ordering) \
        - spec.log_gamma - spec.log_h_scale
    if spec.family == "type1":
        pair = trace_pair(x, precision_of(spec.scale, ordering))
        return base - pair + log_h(_mu_weight(ordering), x, ordering)
    if spec.family == "inv_type2":
        xinv = np.linalg.inv(complete(x, ordering))
        pair = float(np.sum(spec.scale.data * xinv *
                            spec.graph.edge_mask()))
        return base - pair + log_h(_mu_weight(ordering), x, ordering)
    if spec.family == "type2":
        pair = float(np.sum(spec.scale.data * point.data *
                            spec.graph.edge_mask()))
        return base - pair + log_h(_nu_weight(ordering), x, ordering)
    # inv_type1
    pair = trace_pair(x, precision_of(spec.scale, ordering))
    return base - pair + log_h(_nu_weight(ordering), x, ordering)


def logpdf_f(graph, shape_a, shape_b, scale, point, kind="first"):
    """Log density of the beta-prime type families.

    ``kind='first'`` lives on the incomplete cone with an incomplete
    scale; it needs shape_a admissible on the first side, shape_b and
    shape_b - shape_a on the second.  ``kind='second'`` lives on the
    sparse cone with a sparse scale; it needs shape_a and
    shape_a - shape_b on the first side and shape_b on the second.
    """
    ordering = decompose(graph)
    try:
        hasse = homogeneous_structure(graph)
    except NotHomogeneous:
        hasse = None
    if kind == "first":
        if not isinstance(scale, IncompleteMatrix) or \
                scale.graph != graph:
            raise OutOfDomain("scale must be an incomplete matrix "
                              "on the same graph")
        cones.require_qg(scale, ordering)
        if not isinstance(point, IncompleteMatrix) or \
                point.graph != graph:
            raise OutOfSupport("point must be an incomplete matrix")
        try:
            cones.require_qg(point, ordering)
        except NotInQG:
            raise OutOfSupport("point outside the cone") from None
        lg = log_gamma_II(shape_b - shape_a, ordering, hasse) \
            - log_gamma_I(shape_a, ordering, hasse) \
            - log_gamma_II(shape_b, ordering, hasse)
        shifted = IncompleteMatrix(graph, scale.data + point.data)
        return lg - log_h(shape_b, scale, ordering) \
            + log_h(shape_b - shape_a, shifted, ordering) \
            + log_h(shape_a, point, ordering) \
            + log_h(_mu_weight(ordering), point, ordering)
    if kind == "second":
        if not isinstance(scale, SparsePrecision) or \
                scale.graph != graph:
            raise OutOfDomain("scale must be a sparse precision "
                              "on the same graph")
        if not isinstance(point, SparsePrecision) or \
                point.graph != graph:
            raise OutOfSupport("point must be a sparse precision")
        try:
            x = phi(point)
        except NotInPG:
            raise OutOfSupport("point outside the cone") from None
        lg = log_gamma_I(shape_a - shape_b, ordering, hasse) \
            - log_gamma_I(shape_a, ordering, hasse) \
            - log_gamma_II(shape_b, ordering, hasse)
        shifted = SparsePrecision(graph, scale.data + point.data)
        return lg - log_h(shape_a, phi(scale), ordering) \
            + log_h(shape_a - shape_b, phi(shifted), ordering) \
            + log_h(shape_b, x, ordering) \
            + log_h(_nu_weight(ordering), x, ordering)
    raise OutOfDomain("unknown kind", kind=kind)


def _gather(arr, rows, cols):
    return arr[:, rows[:, None], cols[None, :]]


def _set_block(arr, rows, cols, value):
    arr[:, rows[:, None], cols[None, :]] = value


def _sample_first_cone_batch(spec, rng, n):
    """Draws from the incomplete-cone family along the clique order."""
    ordering = spec.ordering
    r = spec.r
    blocks = cones.split_blocks(spec.scale, ordering)
    alpha = spec.shape.alpha
    out = np.zeros((n, r, r))
    if ordering.k == 1:
        ix = cones._idx(ordering.cliques[0])
        dim = ordering.clique_sizes[0]
        draw = sample_base_wishart(dim, alpha[0], blocks.c1_cond, rng, n)
        _set_block(out, ix, ix, draw)
        return out
    s2 = ordering.separators[0]
    r1 = tuple(v for v in ordering.cliques[0] if v not in s2)
    si = cones._idx(s2)
    ri = cones._idx(r1)
    d2 = spec.shape_info.delta2
    xs2 = sample_base_wishart(len(s2), alpha[0] + d2, blocks.c1_sep, rng, n)
    cond1 = sample_base_wishart(len(r1), alpha[0] - len(s2) / 2.0,
                                blocks.c1_cond, rng, n)
    ratio1 = _mn_batch_colcov(blocks.c1_ratio, blocks.c1_cond,
                              xs2, rng, n)
    _set_block(out, si, si, xs2)
    cross = ratio1 @ xs2
    _set_block(out, ri, si, cross)
    _set_block(out, si, ri, _tr(cross))
    _set_block(out, ri, ri, cond1 + cross @ _tr(ratio1))
    for j in range(1, ordering.k):
        sep = ordering.separators[j - 1]
        res = ordering.residuals[j]
        sj = cones._idx(sep)
        rj = cones._idx(res)
        xsj = _gather(out, sj, sj)
        condj = sample_base_wishart(
            len(res), alpha[j] - len(sep) / 2.0,
            blocks.conds[j - 1], rng, n)
        ratioj = _mn_batch_colcov(blocks.ratios[j - 1],
                                  blocks.conds[j - 1], xsj, rng, n)
        cross = ratioj @ xsj
        _set_block(out, rj, sj, cross)
        _set_block(out, sj, rj, _tr(cross))
        _set_block(out, rj, rj, condj + cross @ _tr(ratioj))
    return out


def _sample_first_cone_hom_batch(spec, rng, n):
    """Homogeneous-graph sampler walking the class tree root first."""
    tree = spec.hasse
    rho, _ = hasse_exponents(tree, spec.shape)
    r = spec.r
    sigma = spec.scale
    out = np.zeros((n, r, r))
    order = tree.nodes_below(tree.root)
    for u in order:
        members = tree.classes[u]
        anc = tuple(v for v in tree.vertex_sets[u] if v not in members)
        mi = cones._idx(members)
        ai = cones._idx(anc)
        cond, ratio = cones._regress(sigma, members, anc)
        p_u = rho[u] - tree.depth_weights[u] / 2.0
        cond_draw = sample_base_wishart(len(members), p_u, cond, rng, n)
        if anc:
            xanc = _gather(out, ai, ai)
            ratio_draw = _mn_batch_colcov(ratio, cond, xanc, rng, n)
            cross = ratio_draw @ xanc
            _set_block(out, mi, ai, cross)
            _set_block(out, ai, mi, _tr(cross))
            _set_block(out, mi, mi,
                       cond_draw + cross @ _tr(ratio_draw))
        else:
            _set_block(out, mi, mi, cond_draw)
    return out


def _sample_inverse_second_batch(spec, rng, n):
    """Draws from the incomplete-cone image of the sparse family.

    All regression blocks are independent here; conditional blocks are
    inverted Wishart draws and the couplings are matrix normal given
    the conditional block of their own clique.
    """
    ordering = spec.ordering
    r = spec.r
    theta = spec.scale
    blocks = cones.split_blocks(theta, ordering)
    alpha = spec.shape.alpha
    out = np.zeros((n, r, r))
    if ordering.k == 1:
        ix = cones._idx(ordering.cliques[0])
        w = sample_base_wishart(
            ordering.clique_sizes[0], -alpha[0],
            np.linalg.inv(blocks.c1_cond), rng, n)
        _set_block(out, ix, ix, np.linalg.inv(w))
        return out
    s2 = ordering.separators[0]
    r1 = tuple(v for v in ordering.cliques[0] if v not in s2)
    si = cones._idx(s2)
    ri = cones._idx(r1)
    c1 = ordering.clique_sizes[0]
    g2 = spec.shape_info.gamma2
    p_sep = -alpha[0] - (c1 - len(s2)) / 2.0 - g2
    xs2 = np.linalg.inv(sample_base_wishart(
        len(s2), p_sep, np.linalg.inv(blocks.c1_sep), rng, n))
    cond1 = np.linalg.inv(sample_base_wishart(
        len(r1), -alpha[0], np.linalg.inv(blocks.c1_cond), rng, n))
    ratio1 = _mn_batch_rowcov(blocks.c1_ratio, cond1,
                              blocks.c1_sep, rng, n)
    _set_block(out, si, si, xs2)
    cross = ratio1 @ xs2
    _set_block(out, ri, si, cross)
    _set_block(out, si, ri, _tr(cross))
    _set_block(out, ri, ri, cond1 + cross @ _tr(ratio1))
    for j in range(1, ordering.k):
        sep = ordering.separators[j - 1]
        res = ordering.residuals[j]
        sj = cones._idx(sep)
        rj = cones._idx(res)
        condj = np.linalg.inv(sample_base_wishart(
            len(res), -alpha[j],
            np.linalg.inv(blocks.conds[j - 1]), rng, n))
        ratioj = _mn_batch_rowcov(blocks.ratios[j - 1], condj,
                                  theta.submatrix(sep), rng, n)
        xsj = _gather(out, sj, sj)
        cross = ratioj @ xsj
        _set_block(out, rj, sj, cross)
        _set_block(out, sj, rj, _tr(cross))
        _set_block(out, rj, rj, condj + cross @ _tr(ratioj))
    return out


def _precision_of_batch(batch, ordering):
    """Batched counterpart of :func:`cones.precision_of`."""
    n, r, _ = batch.shape
    out = np.zeros((n, r, r))
    for c in ordering.cliques:
        ix = cones._idx(c)
        out[:, ix[:, None], ix[None, :]] += np.linalg.inv(
            _gather(batch, ix, ix))
    for sep in ordering.separators:
        if not sep:
            continue
        ix = cones._idx(sep)
        out[:, ix[:, None], ix[None, :]] -= np.linalg.inv(
            _gather(batch, ix, ix))
    return 0.5 * (out + _tr(out))


def sample_batch(spec, rng, size):
    """Dense (n, r, r) array of draws, pattern-masked.

    For type1 and inv_type2 the entries are those of the incomplete
    draw; for type2 and inv_type1 they are the sparse matrix itself.
    """
    rng = _as_stream(rng)
    n = int(size)
    if spec.family in ("type1", "inv_type1"):
        if spec.admissible_per_order:
            x = _sample_first_cone_batch(spec, rng, n)
        else:
            x = _sample_first_cone_hom_batch(spec, rng, n)
        if spec.family == "type1":
            return x * spec.graph.edge_mask()
        return _precision_of_batch(x, spec.ordering) * \
            spec.graph.edge_mask()
    if not spec.admissible_per_order:
        raise ShapeNotAdmissible(
            "sampling on the second side needs per-order admissibility",
            family=spec.family)
    x = _sample_inverse_second_batch(spec, rng, n)
    if spec.family == "inv_type2":
        return x * spec.graph.edge_mask()
    return _precision_of_batch(x, spec.ordering) * spec.graph.edge_mask()


def sample(spec, rng, n):
    """List of n draws wrapped in the cone type matching the family."""
    batch = sample_batch(spec, rng, n)
    if spec.family in ("type1", "inv_type2"):
        return [IncompleteMatrix(spec.graph, b) for b in batch]
    return [SparsePrecision(spec.graph, b) for b in batch]


def mean_type1(spec):
    """Closed-form mean of a type1 member.

    Built from the completed scale: each clique contributes its shape
    weight times (completion minus the padded conditional variance
    given the clique), separators subtract the analogous term per
    occurrence.
    """
    if spec.family != "type1":
        raise OutOfDomain("mean_type1 needs a type1 spec",
                          family=spec.family)
    ordering = spec.ordering
    hat = complete(spec.scale, ordering)
    total = np.zeros_like(hat)
    for j, c in enumerate(ordering.cliques):
        total += spec.shape.alpha[j] * (hat - schur_pad(hat, c))
    for j in range(1, ordering.k):
        b = spec.shape.beta[ordering.sep_index[j - 1]]
        sep = ordering.separators[j - 1]
        total -= b * (hat - schur_pad(hat, sep))
    return project(total, spec.graph)


def mean_type2(spec):
    """Closed-form mean of a type2 member: padded inverse scale blocks
    weighted by the shape, cliques negative and separators positive."""
    if spec.family != "type2":
        raise OutOfDomain("mean_type2 needs a type2 spec",
                          family=spec.family)
    ordering = spec.ordering
    r = spec.r
    theta = spec.scale
    total = np.zeros((r, r))
    for j, c in enumerate(ordering.cliques):
        ix = cones._idx(c)
        total[np.ix_(ix, ix)] -= spec.shape.alpha[j] * \
            np.linalg.inv(theta.submatrix(c))
    for j in range(1, ordering.k):
        sep = ordering.separators[j - 1]
        if not sep:
            continue
        ix = cones._idx(sep)
        total[np.ix_(ix, ix)] += \
            spec.shape.beta[ordering.sep_index[j - 1]] * \
            np.linalg.inv(theta.submatrix(sep))
    return SparsePrecision(spec.graph, 0.5 * (total + total.T))


def laplace(spec, t):
    """Log Laplace transform at a symmetric pattern matrix t.

    For type1 this is the log expectation of exp of the pattern pairing
    with t; type2 analogously.  The shifted parameter must stay inside
    the matching cone, else OutOfDomain.
    """
    ordering = spec.ordering
    tm = np.asarray(t, dtype=float) * spec.graph.edge_mask()
    if spec.family == "type1":
        shifted = precision_of(spec.scale, ordering).data - tm
        try:
            np.linalg.cholesky(shifted)
        except np.linalg.LinAlgError:
            raise OutOfDomain(
                "shifted precision leaves the cone") from None
        x = phi(SparsePrecision(spec.graph, shifted))
        return log_h(spec.shape, x, ordering) - spec.log_h_scale
    if spec.family == "type2":
        shifted = IncompleteMatrix(spec.graph, spec.scale.data - tm)
        try:
            cones.require_qg(shifted, ordering)
        except NotInQG:
            raise OutOfDomain(
                "shifted scale leaves the cone") from None
        return log_h(spec.shape, shifted, ordering) - spec.log_h_scale
    raise OutOfDomain("laplace transform implemented for type1 and "
                      "type2 only", family=spec.family)
