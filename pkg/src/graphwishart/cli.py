"""Command line front end.

Everything speaks JSON: graphs as {"n": ..., "edges": [[i, j], ...]},
matrices as {"graph": ..., "matrix": [[...]]} with null at non-pattern
positions, shapes as {"alpha": [...], "beta": [...]} in the order of
the canonical clique decomposition.  Floating point numbers are
printed with 17 significant digits so identical inputs give
byte-identical output.
"""

import argparse
import csv
import json
import math
import sys

import numpy as np

from .bayes import ingest, posterior_summaries, posterior_update
from .cones import (
    IncompleteMatrix,
    SparsePrecision,
    complete,
    phi,
)
from .distributions import (
    RngStream,
    WishartSpec,
    logpdf,
    mean_type1,
    mean_type2,
    sample_batch,
)
from .errors import (
    GraphWishartError,
    MalformedInput,
    NonNumeric,
    OutOfDomain,
    ShapeMismatch,
)
from .graphs import (
    decompose,
    enumerate_perfect_orders,
    homogeneous_structure,
    parse_graph,
)
from .errors import NotHomogeneous
from .shapes import ShapeParam, log_gamma_I, log_gamma_II, log_h
from .verify import (
    a4_closed_form,
    check_factorization,
    check_mean426,
    mc_normalizer,
    mellin_2x2,
)

__all__ = ["main", "run"]


def _fmt(value):
    if isinstance(value, np.bool_):
        value = bool(value)
    if isinstance(value, bool) or value is None:
        return "true" if value is True else \
            ("false" if value is False else "null")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return '"nan"'
        if math.isinf(v):
            return '"inf"' if v > 0 else '"-inf"'
        return "%.17g" % v
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        inner = ",".join(
            "%s:%s" % (json.dumps(str(k)), _fmt(v))
            for k, v in value.items())
        return "{" + inner + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_fmt(v) for v in value) + "]"
    raise TypeError("cannot serialize %r" % (value,))


def _emit(obj, output=None):
    text = _fmt(obj) + "\n"
    if output:
        with open(output, "a") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedInput("cannot read JSON file",
                             path=path, reason=str(exc)) from exc


def _load_graph(path):
    return parse_graph(_load_json(path))


def _load_matrix(path, graph=None):
    obj = _load_json(path)
    if not isinstance(obj, dict) or "matrix" not in obj:
        raise MalformedInput("matrix file needs a 'matrix' key",
                             path=path)
    if "graph" in obj:
        graph = parse_graph(obj["graph"])
    if graph is None:
        raise MalformedInput(
            "matrix file has no graph; pass --graph", path=path)
    r = graph.vertex_count
    rows = obj["matrix"]
    if len(rows) != r or any(len(row) != r for row in rows):
        raise MalformedInput("matrix has wrong dimensions",
                             expected=r, path=path)
    mask = graph.edge_mask()
    data = np.zeros((r, r))
    for i in range(r):
        for j in range(r):
            v = rows[i][j]
            if mask[i, j]:
                if not isinstance(v, (int, float)) or \
                        isinstance(v, bool):
                    raise NonNumeric("pattern entry is not a number",
                                     row=i + 1, col=j + 1)
                data[i, j] = float(v)
            else:
                if v is not None and v != 0:
                    raise MalformedInput(
                        "non-null entry off the graph pattern",
                        row=i + 1, col=j + 1)
    gap = float(np.max(np.abs(data - data.T)))
    if gap > 1e-12:
        raise MalformedInput("matrix is not symmetric", asymmetry=gap)
    return graph, data


def _load_shape(path, ordering):
    obj = _load_json(path)
    try:
        shape = ShapeParam(tuple(obj["alpha"]), tuple(obj["beta"]))
    except (KeyError, TypeError) as exc:
        raise MalformedInput("shape file needs 'alpha' and 'beta'",
                             path=path) from exc
    if len(shape.alpha) != ordering.k or \
            len(shape.beta) != ordering.k_prime:
        raise ShapeMismatch("shape length does not match the graph",
                            alpha=len(shape.alpha),
                            beta=len(shape.beta),
                            k=ordering.k, k_prime=ordering.k_prime)
    return shape


def _graph_json(graph):
    return {"n": graph.vertex_count,
            "edges": [list(e) for e in sorted(graph.edges)]}


def _matrix_json(graph, data, full=False):
    mask = graph.edge_mask()
    rows = []
    for i in range(graph.vertex_count):
        row = []
        for j in range(graph.vertex_count):
            if full or mask[i, j]:
                row.append(float(data[i, j]))
            else:
                row.append(None)
        rows.append(row)
    return {"graph": _graph_json(graph), "matrix": rows}


def _spec_from_args(args, family=None):
    graph = _load_graph(args.graph) if args.graph else None
    graph, data = _load_matrix(args.scale, graph)
    ordering = decompose(graph)
    shape = _load_shape(args.shape, ordering)
    scale = IncompleteMatrix(graph, data)
    return WishartSpec(graph, shape, scale,
                       family or args.family, ordering=ordering)


def _require_graph(args):
    if not args.graph:
        raise MalformedInput("this command needs --graph")
    return _load_graph(args.graph)


def _cmd_graph_analyze(args):
    graph = _require_graph(args)
    ordering = decompose(graph)
    if args.order is not None:
        orders = enumerate_perfect_orders(graph)
        if not 0 <= args.order < len(orders):
            raise OutOfDomain("order index out of range",
                              order=args.order, count=len(orders))
        ordering = orders[args.order]
    try:
        homogeneous_structure(graph)
        homogeneous = True
    except NotHomogeneous:
        homogeneous = False
    _emit({
        "n": graph.vertex_count,
        "edges": [list(e) for e in sorted(graph.edges)],
        "cliques": [list(c) for c in ordering.cliques],
        "separators": [list(s) for s in ordering.separators],
        "distinct_separators": [list(s) for s in
                                ordering.distinct_separators],
        "multiplicities": list(ordering.multiplicity),
        "residuals": [list(rv) for rv in ordering.residuals],
        "homogeneous": homogeneous,
    }, args.output)
    return 0


def _cmd_graph_hasse(args):
    graph = _require_graph(args)
    tree = homogeneous_structure(graph)
    nu = {}
    for u in range(tree.node_count):
        if tree.children[u]:
            key = "{" + ",".join(str(v) for v in tree.vertex_sets[u]) \
                + "}"
            nu[key] = len(tree.children[u]) - 1
    _emit({
        "classes": [list(c) for c in tree.classes],
        "parent": list(tree.parent),
        "vertex_sets": [list(v) for v in tree.vertex_sets],
        "roles": ["separator" if tree.children[u] else "clique"
                  for u in range(tree.node_count)],
        "nu": nu,
        "root": tree.root,
    }, args.output)
    return 0


def _cmd_cone_complete(args):
    graph = _load_graph(args.graph) if args.graph else None
    graph, data = _load_matrix(args.matrix, graph)
    hat = complete(IncompleteMatrix(graph, data))
    _emit(_matrix_json(graph, hat, full=True), args.output)
    return 0


def _cmd_cone_phi(args):
    graph = _load_graph(args.graph) if args.graph else None
    graph, data = _load_matrix(args.matrix, graph)
    x = phi(SparsePrecision(graph, data))
    _emit(_matrix_json(graph, x.data), args.output)
    return 0


def _cmd_dist_logpdf(args):
    spec = _spec_from_args(args)
    _, pdata = _load_matrix(args.matrix, spec.graph)
    if spec.family in ("type1", "inv_type2"):
        point = IncompleteMatrix(spec.graph, pdata)
    else:
        point = SparsePrecision(spec.graph, pdata)
    _emit({"family": spec.family, "logpdf": logpdf(spec, point)},
          args.output)
    return 0


def _cmd_dist_sample(args):
    spec = _spec_from_args(args)
    rng = RngStream(args.seed)
    batch = sample_batch(spec, rng, args.n)
    for i in range(args.n):
        obj = _matrix_json(spec.graph, batch[i])
        obj["seed"] = args.seed
        obj["index"] = i
        _emit(obj, args.output)
    return 0


def _cmd_dist_mean(args):
    spec = _spec_from_args(args)
    if spec.family == "type1":
        mean = mean_type1(spec).data
    elif spec.family == "type2":
        mean = mean_type2(spec).data
    else:
        raise OutOfDomain("closed-form mean available for type1 and "
                          "type2 only", family=spec.family)
    _emit(_matrix_json(spec.graph, mean), args.output)
    return 0


def _cmd_bayes_fit(args):
    graph = _require_graph(args)
    prior_obj = _load_json(args.prior)
    ordering = decompose(graph)
    try:
        shape = ShapeParam(tuple(prior_obj["shape"]["alpha"]),
                           tuple(prior_obj["shape"]["beta"]))
        scale_rows = prior_obj["scale"]
    except (KeyError, TypeError) as exc:
        raise MalformedInput(
            "prior file needs 'shape' and 'scale'") from exc
    r = graph.vertex_count
    data = np.array([[0.0 if v is None else float(v) for v in row]
                     for row in scale_rows], dtype=float)
    if data.shape != (r, r):
        raise MalformedInput("prior scale has wrong dimensions")
    prior = WishartSpec(graph, shape,
                        IncompleteMatrix(graph, data), "inv_type2",
                        ordering=ordering)
    with open(args.data) as fh:
        rows = [[cell for cell in row] for row in csv.reader(fh)
                if row]
    try:
        table = [[float(c) for c in row] for row in rows]
    except ValueError as exc:
        raise NonNumeric("data file has non-numeric cells") from exc
    sample_stats = ingest(table, graph)
    post = posterior_update(prior, sample_stats)
    rng = RngStream(args.seed)
    summ = posterior_summaries(post, rng, n_draws=args.n or 4000)
    _emit({
        "seed": args.seed,
        "n_obs": sample_stats.n,
        "posterior_shape": {"alpha": list(post.shape.alpha),
                            "beta": list(post.shape.beta)},
        "posterior_scale": _matrix_json(graph, post.scale.data),
        "precision_mean": _matrix_json(
            graph, summ["precision_mean"].data),
        "sigma_mean": _matrix_json(graph, summ["sigma_mean"].data),
        "sigma_se": _matrix_json(graph, summ["sigma_se"]),
        "convention": "prior on twice the covariance pattern; "
                      "summaries are on the covariance scale",
    }, args.output)
    return 0


def _cmd_verify_normalizer(args):
    graph = _load_graph(args.graph) if args.graph else None
    graph, data = _load_matrix(args.scale, graph)
    ordering = decompose(graph)
    shape = _load_shape(args.shape, ordering)
    scale = IncompleteMatrix(graph, data)
    kind = args.kind
    rng = RngStream(args.seed)
    est = mc_normalizer(kind, graph, ordering, shape, scale, rng,
                        args.n or 100000)
    closed = None
    try:
        if kind == "I":
            closed = math.exp(log_gamma_I(shape, ordering)
                              + log_h(shape, scale, ordering))
        else:
            closed = math.exp(log_gamma_II(shape, ordering)
                              + log_h(shape, scale, ordering))
    except GraphWishartError:
        closed = None
    verdict = None
    if closed is not None and est.std_error > 0:
        verdict = abs(est.value - closed) <= 3.0 * est.std_error
    _emit({
        "seed": args.seed, "kind": kind, "n": est.n_draws,
        "estimate": est.value, "std_error": est.std_error,
        "closed_form": closed, "within_3_se": verdict,
        "proposal": list(est.proposal),
    }, args.output)
    return 0


def _cmd_verify_a4(args):
    graph = _load_graph(args.graph) if args.graph else None
    graph, data = _load_matrix(args.scale, graph)
    ordering = decompose(graph)
    shape = _load_shape(args.shape, ordering)
    val = a4_closed_form(args.kind, shape,
                         IncompleteMatrix(graph, data))
    _emit({"kind": args.kind, "log_value": val}, args.output)
    return 0


def _cmd_verify_mellin(args):
    graph = _load_graph(args.graph) if args.graph else None
    graph, data = _load_matrix(args.matrix, graph)
    if graph.vertex_count != 2:
        raise OutOfDomain("rate matrix must be 2x2",
                          n=graph.vertex_count)
    closed, est = mellin_2x2(args.p, args.a1, args.a2, data,
                             RngStream(args.seed), args.n or 100000)
    verdict = abs(closed - est.value) <= 3.0 * est.std_error \
        if est.std_error > 0 else None
    _emit({
        "seed": args.seed, "closed_form": closed,
        "estimate": est.value, "std_error": est.std_error,
        "within_3_se": verdict, "n": est.n_draws,
    }, args.output)
    return 0


def _cmd_verify_factorization(args):
    spec = _spec_from_args(args, family="inv_type2")
    rng = RngStream(args.seed)
    npts = args.n or 50
    batch = sample_batch(spec, rng, npts)
    worst = 0.0
    for i in range(npts):
        point = IncompleteMatrix(spec.graph, batch[i])
        worst = max(worst, check_factorization(spec, point))
    _emit({
        "seed": args.seed, "points": npts, "max_residual": worst,
        "within_tolerance": worst < 1e-10,
    }, args.output)
    return 0


def _cmd_verify_mean426(args):
    spec = _spec_from_args(args, family="type2")
    est = check_mean426(spec, RngStream(args.seed), args.n or 100000)
    verdict = est.value <= 4.0 * est.std_error \
        if est.std_error > 0 else None
    _emit({
        "seed": args.seed, "residual": est.value,
        "std_error": est.std_error, "n": est.n_draws,
        "within_4_se": verdict,
    }, args.output)
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="graphwishart",
        description="Wishart families on decomposable graph cones")
    sub = parser.add_subparsers(dest="group", required=True)

    def add(group_parser, name, fn, flags):
        p = group_parser.add_parser(name)
        for flag in flags:
            if flag in ("--n", "--seed", "--order"):
                p.add_argument(flag, type=int,
                               default=0 if flag == "--seed" else None)
            elif flag in ("--p", "--a1", "--a2"):
                p.add_argument(flag, type=float, required=True)
            elif flag == "--kind":
                p.add_argument(flag, choices=("I", "II"), default="I")
            elif flag == "--family":
                p.add_argument(flag, required=True,
                               choices=("type1", "type2",
                                        "inv_type1", "inv_type2"))
            else:
                required = flag in ("--matrix", "--shape", "--scale",
                                    "--data", "--prior") and \
                    name not in ("analyze", "hasse")
                p.add_argument(flag, required=required)
        p.set_defaults(fn=fn)
        return p

    graph = sub.add_parser("graph").add_subparsers(
        dest="cmd", required=True)
    add(graph, "analyze", _cmd_graph_analyze,
        ["--graph", "--order", "--seed", "--output"])
    add(graph, "hasse", _cmd_graph_hasse,
        ["--graph", "--seed", "--output"])

    cone = sub.add_parser("cone").add_subparsers(
        dest="cmd", required=True)
    add(cone, "complete", _cmd_cone_complete,
        ["--matrix", "--graph", "--seed", "--output"])
    add(cone, "phi", _cmd_cone_phi,
        ["--matrix", "--graph", "--seed", "--output"])

    dist = sub.add_parser("dist").add_subparsers(
        dest="cmd", required=True)
    add(dist, "logpdf", _cmd_dist_logpdf,
        ["--family", "--shape", "--scale", "--matrix", "--graph",
         "--seed", "--output"])
    add(dist, "sample", _cmd_dist_sample,
        ["--family", "--shape", "--scale", "--graph", "--n", "--seed",
         "--output"])
    add(dist, "mean", _cmd_dist_mean,
        ["--family", "--shape", "--scale", "--graph", "--seed",
         "--output"])

    bayes = sub.add_parser("bayes").add_subparsers(
        dest="cmd", required=True)
    add(bayes, "fit", _cmd_bayes_fit,
        ["--graph", "--data", "--prior", "--n", "--seed", "--output"])

    verify = sub.add_parser("verify").add_subparsers(
        dest="cmd", required=True)
    add(verify, "normalizer", _cmd_verify_normalizer,
        ["--graph", "--shape", "--scale", "--kind", "--n", "--seed",
         "--output"])
    add(verify, "a4", _cmd_verify_a4,
        ["--graph", "--shape", "--scale", "--kind", "--seed",
         "--output"])
    add(verify, "mellin", _cmd_verify_mellin,
        ["--matrix", "--graph", "--p", "--a1", "--a2", "--n",
         "--seed", "--output"])
    add(verify, "factorization", _cmd_verify_factorization,
        ["--shape", "--scale", "--graph", "--n", "--seed",
         "--output"])
    add(verify, "mean426", _cmd_verify_mean426,
        ["--shape", "--scale", "--graph", "--n", "--seed",
         "--output"])
    return parser


def run(argv):
    parser = _build_parser()
    args = parser.parse_args(argv)
    # sampling defaults for dist sample
    if getattr(args, "n", None) is None and \
            getattr(args, "fn", None) is _cmd_dist_sample:
        args.n = 1
    try:
        return args.fn(args)
    except GraphWishartError as exc:
        sys.stdout.write(_fmt(exc.to_dict()) + "\n")
        return 1


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
