"""Independent numerical oracles.

Everything here is deliberately redundant with the analytic machinery
in the other modules: hypergeometric series summed directly, closed
forms for the four-vertex path, Monte Carlo estimates of the cone
integrals, and pointwise identity checks.  Agreement between the two
routes is the main correctness evidence for the package.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from . import cones
from .cones import IncompleteMatrix, split_blocks
from .distributions import (
    RngStream,
    WishartSpec,
    log_inv_wishart_pdf,
    log_matrix_normal_pdf,
    logpdf,
    sample_base_wishart,
    sample_batch,
)
from .errors import (
    DegenerateWeights,
    NonConvergent,
    OutOfDomain,
    PoleAtC,
    ShapeOutsideA4B4,
    WrongGraph,
)
from .graphs import decompose
from .shapes import (
    ShapeParam,
    canonical_shape,
    log_gamma_I,
    log_gamma_II,
    log_h,
)

__all__ = [
    "McEstimate",
    "gauss_2f1",
    "a4_closed_form",
    "mc_normalizer",
    "mellin_2x2",
    "check_identity_327",
    "check_factorization",
    "check_mean426",
]


@dataclass
class McEstimate:
    """Monte Carlo result with its standard error and provenance."""

    value: float
    std_error: float
    n_draws: int
    seed: int
    substream: int = 0
    proposal: object = None
    contributions: object = None


def _series_2f1(a, b, c, z, tol=1e-15, max_terms=100000):
    term = 1.0
    total = 1.0
    for n in range(max_terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
        total += term
        if abs(term) <= tol * abs(total):
            return total
    raise NonConvergent("series did not reach tolerance",
                        a=a, b=b, c=c, z=z, max_terms=max_terms)


def gauss_2f1(a, b, c, z):
    """Gauss hypergeometric function on z in [0, 1).

    Direct power series, switching to the determinant-power transform
    of the parameters when z is close to 1 (which converts the
    convergence exponent and speeds the tail).
    """
    if not 0.0 <= z < 1.0:
        raise OutOfDomain("argument must lie in [0, 1)", z=z)
    if c <= 0 and c == int(c):
        raise PoleAtC("lower parameter is a non-positive integer", c=c)
    if a == 0.0 or b == 0.0 or z == 0.0:
        return 1.0
    if z > 0.9:
        return (1.0 - z) ** (c - a - b) * _series_2f1(c - a, c - b, c, z)
    return _series_2f1(a, b, c, z)


def check_identity_327(a, b, c, z):
    """Residual of the parameter-swap identity for the hypergeometric
    series: (1-z)^(a+b-c) F(a,b;c;z) versus F(c-a,c-b;c;z)."""
    if not 0.0 <= z < 1.0:
        raise OutOfDomain("argument must lie in [0, 1)", z=z)
    lhs = (1.0 - z) ** (a + b - c) * _series_2f1(a, b, c, z)
    rhs = _series_2f1(c - a, c - b, c, z)
    return abs(lhs - rhs)


_PATH4_EDGES = frozenset({(1, 2), (2, 3), (3, 4)})


def _require_path4(graph):
    if graph.vertex_count != 4 or graph.edges != _PATH4_EDGES:
        raise WrongGraph("closed form applies to the 4-vertex path only",
                         n=graph.vertex_count,
                         edges=sorted(map(list, graph.edges)))


def a4_closed_form(kind, shape, scale):
    """Log of the closed-form cone integral on the 4-vertex path.

    ``kind='I'`` integrates the clique-power kernel against the
    incomplete-cone base measure at inverse-completion rate built from
    ``scale``; ``kind='II'`` is the analogue on the sparse cone with
    ``scale`` read as the rate pattern.  Every factor is positive, so
    the value is returned as a plain log.
    """
    _require_path4(scale.graph)
    a1, a2, a3 = shape.alpha
    b2, b3 = shape.beta
    m = scale.data
    s1, s2, s3, s4 = m[0, 0], m[1, 1], m[2, 2], m[3, 3]
    s12, s23, s34 = m[0, 1], m[1, 2], m[2, 3]
    z = s23 * s23 / (s2 * s3)
    if kind == "I":
        ok = a1 > 0.5 and a2 > 0.5 and a3 > 0.5 and \
            a1 + a2 > b2 and a2 + a3 > b3
        if not ok:
            raise ShapeOutsideA4B4("shape outside the first-kind "
                                   "convergence set")
        cond12 = s1 - s12 * s12 / s2
        cond23 = s2 - s23 * s23 / s3
        cond32 = s3 - s23 * s23 / s2
        cond43 = s4 - s34 * s34 / s3
        return 1.5 * math.log(math.pi) \
            + float(gammaln(a1 - 0.5) + gammaln(a2 - 0.5)
                    + gammaln(a3 - 0.5) + gammaln(a1 + a2 - b2)
                    + gammaln(a2 + a3 - b3) - gammaln(a2)) \
            + a1 * math.log(cond12) \
            + (a1 + a2 - b2) * math.log(cond23) \
            + (a2 + a3 - b3) * math.log(cond32) \
            + a3 * math.log(cond43) \
            + math.log(gauss_2f1(a1 + a2 - b2, a2 + a3 - b3, a2, z))
    if kind == "II":
        e2 = b2 - a1 - a2 - 0.5
        e3 = b3 - a2 - a3 - 0.5
        etot = b2 + b3 - a1 - a2 - a3 - 1.5
        ok = a1 < 0 and a3 < 0 and e2 > 0 and e3 > 0 and etot > 0
        if not ok:
            raise ShapeOutsideA4B4("shape outside the second-kind "
                                   "convergence set")
        cond12 = s1 - s12 * s12 / s2
        cond43 = s4 - s34 * s34 / s3
        return 1.5 * math.log(math.pi) \
            + float(gammaln(-a1) + gammaln(e2) + gammaln(etot)
                    + gammaln(e3) + gammaln(-a3)
                    - gammaln(etot + 0.5)) \
            + a1 * math.log(cond12) \
            + (a1 + a2 - b2) * math.log(s2) \
            + (a2 + a3 - b3) * math.log(s3) \
            + a3 * math.log(cond43) \
            + math.log(gauss_2f1(e2, e3, etot + 0.5, z))
    raise OutOfDomain("kind must be 'I' or 'II'", kind=kind)


def _log_h_batch(shape, batch, ordering):
    """Vectorized determinant power product over a draw batch."""
    n = batch.shape[0]
    total = np.zeros(n)
    for j, c in enumerate(ordering.cliques):
        ix = cones._idx(c)
        sign, ld = np.linalg.slogdet(batch[:, ix[:, None], ix[None, :]])
        total += shape.alpha[j] * ld
    for i, s in enumerate(ordering.distinct_separators):
        ix = cones._idx(s)
        sign, ld = np.linalg.slogdet(batch[:, ix[:, None], ix[None, :]])
        total -= ordering.multiplicity[i] * shape.beta[i] * ld
    return total


def _hyper_candidates(shape, ordering):
    floor = (max(ordering.clique_sizes) - 1) / 2.0
    stats = [min(shape.alpha), float(np.mean(shape.alpha)),
             max(shape.alpha)]
    raw = stats + [stats[1] + d for d in
                   (-0.5, -0.25, 0.25, 0.5, 0.75, 1.0)] + \
        [floor + 0.5, floor + 1.0]
    return sorted({round(max(v, floor + 0.25), 6) for v in raw})


def _gwishart_candidates(shape, ordering):
    implied = [-2.0 * a - c + 1.0
               for a, c in zip(shape.alpha, ordering.clique_sizes)]
    stats = [min(implied), float(np.mean(implied)), max(implied)]
    raw = stats + [stats[1] + d for d in (-1.0, -0.5, 0.5, 1.0)]
    return sorted({round(max(v, 0.25), 6) for v in raw})


def mc_normalizer(kind, graph, ordering, shape, scale, rng, n,
                  keep_contributions=False):
    """Importance-sampling estimate of the cone integral.

    ``kind='I'`` estimates the first-cone integral at rate equal to the
    inverse completion of ``scale``; ``kind='II'`` the second-cone
    integral at rate pattern ``scale``.  The proposal is the matching
    one-parameter family at the same scale, whose normalizer is known,
    and the proposal parameter is picked by effective sample size on a
    pilot run.  Weights that collapse on every candidate raise
    DegenerateWeights.
    """
    if not isinstance(rng, RngStream):
        rng = RngStream(rng)
    n = int(n)
    ordering = ordering or decompose(graph)
    if kind == "I":
        family = "type1"
        cands = _hyper_candidates(shape, ordering)
        make = lambda v: canonical_shape("hyper", ordering, v)
    elif kind == "II":
        family = "inv_type2"
        cands = _gwishart_candidates(shape, ordering)
        make = lambda v: canonical_shape("gwishart", ordering, v)
    else:
        raise OutOfDomain("kind must be 'I' or 'II'", kind=kind)

    n_pilot = min(4000, max(500, n // 50))
    best = None
    for i, v in enumerate(cands):
        try:
            prop = make(v)
            spec = WishartSpec(graph, prop, scale, family,
                               ordering=ordering)
        except Exception:
            continue
        pilot = sample_batch(spec, rng.spawn(10_000 + i), n_pilot)
        logw = _log_h_batch(shape - prop, pilot, ordering)
        if not np.all(np.isfinite(logw)):
            continue
        w = np.exp(logw - logw.max())
        ess = float(w.sum() ** 2 / (w * w).sum())
        if best is None or ess > best[0]:
            best = (ess, v, prop, spec)
    if best is None or best[0] < 0.01 * n_pilot:
        raise DegenerateWeights(
            "no proposal achieved a workable effective sample size",
            best_ess=None if best is None else best[0],
            pilot=n_pilot)
    _, v, prop, spec = best

    draws = sample_batch(spec, rng, n)
    logw = _log_h_batch(shape - prop, draws, ordering)
    if not np.all(np.isfinite(logw)):
        raise DegenerateWeights(
            "importance weights overflowed on the final run",
            proposal=v)
    if kind == "I":
        log_const = log_gamma_I(prop, ordering) + \
            log_h(prop, scale, ordering)
    else:
        log_const = log_gamma_II(prop, ordering) + \
            log_h(prop, scale, ordering)
    contrib = np.exp(logw + log_const)
    value = float(contrib.mean())
    se = float(contrib.std(ddof=1) / math.sqrt(n))
    return McEstimate(value, se, n, rng.seed, rng.substream,
                      proposal=(family, v),
                      contributions=contrib if keep_contributions
                      else None)


def mellin_2x2(p, a1, a2, c, rng, n):
    """Joint diagonal moment of a 2x2 Wishart: closed form and MC.

    The matrix follows the rate-1 Wishart with rate matrix ``c``;
    returns (closed_form, McEstimate of E[X11^a1 X22^a2]).
    """
    c = np.asarray(c, dtype=float)
    if p < 0.5:
        raise OutOfDomain("shape parameter below one half", p=p)
    if a1 <= -p or a2 <= -p:
        raise OutOfDomain("moment exponent too negative",
                          a1=a1, a2=a2, p=p)
    c11, c22, c12 = c[0, 0], c[1, 1], c[0, 1]
    z = c12 * c12 / (c11 * c22)
    sign, ldc = np.linalg.slogdet(c)
    if sign <= 0:
        raise OutOfDomain("rate matrix must be positive definite")
    closed = math.exp(
        p * ldc - (a1 + p) * math.log(c11) - (a2 + p) * math.log(c22)
        + float(gammaln(a1 + p) + gammaln(a2 + p) - 2.0 * gammaln(p))
    ) * gauss_2f1(a1 + p, a2 + p, p, z)
    if not isinstance(rng, RngStream):
        rng = RngStream(rng)
    draws = sample_base_wishart(2, p, np.linalg.inv(c), rng, int(n))
    vals = draws[:, 0, 0] ** a1 * draws[:, 1, 1] ** a2
    est = McEstimate(float(vals.mean()),
                     float(vals.std(ddof=1) / math.sqrt(n)),
                     int(n), rng.seed, rng.substream)
    return closed, est


def check_factorization(spec, point):
    """Pointwise additivity of the inverse second-family density.

    The joint log density at a point of the incomplete cone must equal
    the sum of the log densities of its regression blocks minus the
    log Jacobian of the block coordinates.
    """
    if spec.family != "inv_type2":
        raise OutOfDomain("factorization check needs an inv_type2 spec",
                          family=spec.family)
    ordering = spec.ordering
    joint = logpdf(spec, point)
    bx = split_blocks(point, ordering)
    bt = split_blocks(spec.scale, ordering)
    alpha = spec.shape.alpha
    if ordering.k == 1:
        parts = log_inv_wishart_pdf(bx.c1_cond, -alpha[0], bt.c1_cond)
        return abs(joint - parts)
    c1 = ordering.clique_sizes[0]
    s2 = len(ordering.separators[0])
    g2 = spec.shape_info.gamma2
    p_sep = -alpha[0] - (c1 - s2) / 2.0 - g2
    parts = log_inv_wishart_pdf(bx.c1_sep, p_sep, bt.c1_sep)
    parts += log_inv_wishart_pdf(bx.c1_cond, -alpha[0], bt.c1_cond)
    parts += log_matrix_normal_pdf(bx.c1_ratio, bt.c1_ratio,
                                   bx.c1_cond, bt.c1_sep)
    jac = (c1 - s2) * _logdet(bx.c1_sep)
    for j in range(1, ordering.k):
        sep = ordering.separators[j - 1]
        cj = ordering.clique_sizes[j]
        sj = len(sep)
        theta_sep = spec.scale.submatrix(sep)
        parts += log_inv_wishart_pdf(bx.conds[j - 1], -alpha[j],
                                     bt.conds[j - 1])
        parts += log_matrix_normal_pdf(bx.ratios[j - 1],
                                       bt.ratios[j - 1],
                                       bx.conds[j - 1], theta_sep)
        jac += (cj - sj) * _logdet(point.submatrix(sep))
    return abs(joint - (parts - jac))


def _logdet(block):
    sign, val = np.linalg.slogdet(block)
    return float(val)


def _schur_pad_batch(batch, vertices, r):
    a = cones._idx(vertices)
    b = np.setdiff1d(np.arange(r), a)
    out = np.zeros_like(batch)
    if len(a) == 0:
        out[:, b[:, None], b[None, :]] = batch[:, b[:, None], b[None, :]]
        return out
    if len(b) == 0:
        return out
    maa = batch[:, a[:, None], a[None, :]]
    mba = batch[:, b[:, None], a[None, :]]
    out[:, b[:, None], b[None, :]] = \
        batch[:, b[:, None], b[None, :]] - \
        mba @ np.linalg.solve(maa, np.swapaxes(mba, 1, 2))
    return out


def check_mean426(spec, rng, n):
    """Monte Carlo residual of the rate-recovery identity.

    For a member of the sparse-cone family, the rate pattern can be
    reconstructed from expectations of the inverse draw and its padded
    Schur complements; this estimates the right-hand side by sampling
    and returns the sup-norm residual against the negated rate with
    the standard error of the worst entry.
    """
    if spec.family != "type2":
        raise OutOfDomain("identity check needs a type2 spec",
                          family=spec.family)
    if not isinstance(rng, RngStream):
        rng = RngStream(rng)
    n = int(n)
    ordering = spec.ordering
    r = spec.r
    inv_spec = WishartSpec(spec.graph, spec.shape, spec.scale,
                           "inv_type2", ordering=ordering,
                           hasse=spec.hasse)
    y = sample_batch(WishartSpec(spec.graph, spec.shape, spec.scale,
                                 "type2", ordering=ordering,
                                 hasse=spec.hasse), rng, n)
    del inv_spec
    m = np.linalg.inv(y)
    per_draw = np.zeros_like(m)
    for j, c in enumerate(ordering.cliques):
        coef = spec.shape.alpha[j] + (len(c) + 1) / 2.0
        per_draw += coef * (m - _schur_pad_batch(m, c, r))
    for j in range(1, ordering.k):
        sep = ordering.separators[j - 1]
        coef = spec.shape.beta[ordering.sep_index[j - 1]] + \
            (len(sep) + 1) / 2.0
        per_draw -= coef * (m - _schur_pad_batch(m, sep, r))
    mask = spec.graph.edge_mask()
    per_draw = per_draw * mask
    target = -spec.scale.data * mask
    resid = target - per_draw.mean(axis=0)
    se = per_draw.std(axis=0, ddof=1) / math.sqrt(n)
    flat = np.argmax(np.abs(resid))
    return McEstimate(float(np.abs(resid).max()),
                      float(se.flat[flat]), n, rng.seed, rng.substream)
