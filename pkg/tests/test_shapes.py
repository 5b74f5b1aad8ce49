import math

import numpy as np
import pytest
from scipy.special import gammaln

from graphwishart import (
    IncompleteMatrix,
    OutOfDomain,
    ShapeParam,
    canonical_shape,
    decompose,
    enumerate_perfect_orders,
    homogeneous_structure,
    log_gamma_I,
    log_gamma_II,
    log_h,
    log_multigamma,
    project,
    shape_class,
)
from graphwishart.shapes import realign_shape

from conftest import random_first_admissible, random_second_admissible

LOG_PI = math.log(math.pi)


class TestLogMultigamma:

    def test_scalar_case(self):
        assert log_multigamma(1, 2.0) == pytest.approx(0.0, abs=1e-15)

    def test_dim_two(self):
        assert log_multigamma(2, 1.0) == pytest.approx(LOG_PI,
                                                       abs=1e-14)

    def test_dim_three(self):
        expect = math.log(math.pi ** 2 / 2)
        assert log_multigamma(3, 2.0) == pytest.approx(expect,
                                                       abs=1e-13)

    def test_domain(self):
        with pytest.raises(OutOfDomain):
            log_multigamma(3, 0.9)

    def test_recursion_identities(self):
        # reduction identities for the ratio of two multivariate
        # gamma values at shifted and unshifted arguments
        for c in range(2, 7):
            for s in range(1, c):
                for a in (0.6 * c, 0.5 * c + 1.3, c):
                    lhs = log_multigamma(c, a) - log_multigamma(s, a)
                    rhs = ((c - s) * s / 2.0) * LOG_PI + \
                        log_multigamma(c - s, a - s / 2.0)
                    assert lhs == pytest.approx(rhs, abs=1e-12)
                    lhs2 = log_multigamma(c, a + s / 2.0) - \
                        log_multigamma(s, a + s / 2.0)
                    rhs2 = ((c - s) * s / 2.0) * LOG_PI + \
                        log_multigamma(c - s, a)
                    assert lhs2 == pytest.approx(rhs2, abs=1e-12)


class TestLogH:

    def test_identity_scale(self, a4, a4_ord):
        shape = ShapeParam((1.0, 2.0, 3.0), (0.5, 0.25))
        x = project(np.eye(4), a4)
        assert log_h(shape, x, a4_ord) == pytest.approx(0.0)

    def test_hand_value(self, a4, a4_ord):
        m = np.eye(4)
        for i, j in ((0, 1), (1, 2), (2, 3)):
            m[i, j] = m[j, i] = 0.5
        shape = ShapeParam((1.0, 1.0, 1.0), (1.0, 1.0))
        x = IncompleteMatrix(a4, m)
        assert log_h(shape, x, a4_ord) == pytest.approx(
            3 * math.log(0.75), abs=1e-13)


class TestCanonicalShape:

    def test_hyper_on_path(self, a4_ord):
        s = canonical_shape("hyper", a4_ord, 1.0)
        assert s.alpha == (1.0, 1.0, 1.0)
        assert s.beta == (1.0, 1.0)

    def test_gwishart_on_path(self, a4_ord):
        s = canonical_shape("gwishart", a4_ord, 2.0)
        assert s.alpha == (-1.5, -1.5, -1.5)
        assert s.beta == (-1.0, -1.0)

    def test_hyper_domain(self, a4_ord):
        with pytest.raises(OutOfDomain):
            canonical_shape("hyper", a4_ord, 0.25)


class TestShapeClass:

    def test_first_family_membership(self, a4_ord):
        info = shape_class(ShapeParam((1.0, 1.0, 1.0), (1.0, 1.0)),
                           a4_ord)
        assert info.in_a_p
        assert info.delta2 == pytest.approx(0.0)

    def test_second_family_membership(self, a4_ord):
        info = shape_class(ShapeParam((-1.0, -1.0, -1.0),
                                      (1.0, -0.5)), a4_ord)
        assert info.in_b_p

    def test_broken_equality_rejected(self, a4_ord):
        info = shape_class(ShapeParam((2.0, 2.0, 2.0), (1.0, 1.0)),
                           a4_ord)
        assert not info.in_a_p

    def test_homogeneous_membership(self, g0, g0_ord):
        tree = homogeneous_structure(g0)
        alpha = tuple(1.0 if len(c) == 2 else 2.0
                      for c in g0_ord.cliques)
        info = shape_class(ShapeParam(alpha, (1.0, 1.0)), g0_ord,
                           hasse=tree)
        assert info.in_a_hom

    def test_hyper_grid_inside_every_order(self, a4, a4_ord):
        for p in (0.6, 1.0, 1.7, 3.2, 5.0):
            s = canonical_shape("hyper", a4_ord, p)
            for o in enumerate_perfect_orders(a4):
                s2 = realign_shape(s, a4_ord, o)
                assert shape_class(s2, o).in_a_p

    def test_gwishart_grid_inside_every_order(self, a4, a4_ord):
        for d in (0.5, 1.0, 2.0, 3.5, 5.0):
            s = canonical_shape("gwishart", a4_ord, d)
            for o in enumerate_perfect_orders(a4):
                s2 = realign_shape(s, a4_ord, o)
                assert shape_class(s2, o).in_b_p


class TestLogGammaI:

    def test_path_all_ones(self, a4_ord):
        shape = ShapeParam((1.0, 1.0, 1.0), (1.0, 1.0))
        assert log_gamma_I(shape, a4_ord) == pytest.approx(
            3 * LOG_PI, abs=1e-14)

    def test_complete_graph_degenerate(self, k2):
        ordering = decompose(k2)
        shape = ShapeParam((1.5,), ())
        assert log_gamma_I(shape, ordering) == pytest.approx(
            math.log(math.pi / 2), abs=1e-13)

    def test_cross_formula_agreement(self, g0, g0_ord):
        tree = homogeneous_structure(g0)
        rng = np.random.default_rng(5)
        hits = 0
        trials = 0
        while hits < 20:
            trials += 1
            assert trials < 2000
            shape = random_first_admissible(g0_ord, rng)
            info = shape_class(shape, g0_ord, hasse=tree)
            if not (info.in_a_p and info.in_a_hom):
                continue
            per_order = log_gamma_I(shape, g0_ord)
            hom = log_gamma_I(shape, g0_ord, hasse=tree)
            assert abs(per_order - hom) < 1e-10
            hits += 1

    def test_order_invariance(self, a4, a4_ord):
        shape = canonical_shape("hyper", a4_ord, 1.4)
        vals = []
        for o in enumerate_perfect_orders(a4):
            s2 = realign_shape(shape, a4_ord, o)
            vals.append(log_gamma_I(s2, o))
        assert max(vals) - min(vals) < 1e-10


class TestLogGammaII:

    def test_scalar(self):
        g = decompose(
            __import__("graphwishart").parse_graph(
                {"n": 1, "edges": []}))
        shape = ShapeParam((-2.0,), ())
        assert log_gamma_II(shape, g) == pytest.approx(0.0, abs=1e-14)

    def test_gwishart_reduction(self, a4_ord):
        delta = 2.0
        shape = canonical_shape("gwishart", a4_ord, delta)
        expect = 0.0
        for c in a4_ord.clique_sizes:
            expect += log_multigamma(c, (delta + c - 1) / 2.0)
        for s in a4_ord.separator_sizes:
            expect -= log_multigamma(s, (delta + s - 1) / 2.0)
        assert log_gamma_II(shape, a4_ord) == pytest.approx(
            expect, abs=1e-12)

    def test_cross_formula_agreement(self, g0, g0_ord):
        tree = homogeneous_structure(g0)
        rng = np.random.default_rng(9)
        hits = 0
        trials = 0
        while hits < 20:
            trials += 1
            assert trials < 2000
            shape = random_second_admissible(g0_ord, rng)
            info = shape_class(shape, g0_ord, hasse=tree)
            if not (info.in_b_p and info.in_b_hom):
                continue
            per_order = log_gamma_II(shape, g0_ord)
            hom = log_gamma_II(shape, g0_ord, hasse=tree)
            assert abs(per_order - hom) < 1e-10
            hits += 1

    def test_scalar_gamma_consistency(self, k2):
        ordering = decompose(k2)
        shape = ShapeParam((-2.5,), ())
        assert log_gamma_II(shape, ordering) == pytest.approx(
            float(log_multigamma(2, 2.5)), abs=1e-13)


def test_shape_arithmetic():
    a = ShapeParam((1.0, 2.0), (0.5,))
    b = ShapeParam((0.5, 0.5), (0.25,))
    assert (a + b).alpha == (1.5, 2.5)
    assert (a - b).beta == (0.25,)
    assert (-a).alpha == (-1.0, -2.0)


def test_log_multigamma_against_scipy():
    for r in (1, 2, 3, 4):
        for p in (2.0, 3.7, 5.5):
            direct = (r * (r - 1) / 4.0) * LOG_PI + sum(
                gammaln(p - j / 2.0) for j in range(r))
            assert log_multigamma(r, p) == pytest.approx(
                direct, abs=1e-12)
