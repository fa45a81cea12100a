import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import brentq

from paulimix.channel_core import MixWeights
from paulimix.generator import decay_rates, rates_array
from paulimix.region import (
    QuadratureError,
    RegionLabel,
    SimplexTransform,
    beta_plus,
    boundary_distance,
    boundary_polyline,
    classify,
    classify_array,
    g_of,
    integrate,
    monte_carlo_measure,
    nm_conditions,
    region_measure,
    region_measure_estimate,
    to_equilateral,
    x_bounds,
)
from strategies import mix_weights

# pinned by adaptive quadrature, a 10^6-point midpoint rule and 10^7-sample Monte Carlo
MEASURE_N2 = 0.86940636205081667


def gy_at_limit(x, y, n):
    return decay_rates(MixWeights.from_xy(x, y), 1 / n - 1e-9).gy


def midpoint_measure(n, m=10**6):
    """Plain midpoint rule in y for 6 * integral of g(n, y) / (y + n - 1)."""
    bp, bm = math.sqrt(n * n + 1) - n, -math.sqrt(n * n + 1) - n
    y = (np.arange(m) + 0.5) * bp / m
    g = np.sqrt((1 - n + y) * (n - 1 + y) * (bp - y) * (bm - y))
    return 6 * np.sum(g / (y + n - 1)) * bp / m


class TestBeta:
    def test_values(self):
        assert beta_plus(2) == pytest.approx(math.sqrt(5) - 2, abs=1e-15)
        assert beta_plus(3) == pytest.approx(math.sqrt(10) - 3, abs=1e-15)
        assert beta_plus(1e8) == pytest.approx(5e-9, rel=1e-12)

    def test_decreasing(self):
        b = [beta_plus(n) for n in np.linspace(2, 100, 300)]
        assert np.all(np.diff(b) < 0)

    def test_rejects_small_n(self):
        with pytest.raises(ValueError):
            beta_plus(1.9)


class TestG:
    @pytest.mark.parametrize("n", [2, 3.5, 10])
    def test_at_zero(self, n):
        assert g_of(n, 0.0) == pytest.approx(n - 1, rel=1e-14)

    @pytest.mark.parametrize("n", [2, 3.5, 10])
    def test_at_tip(self, n):
        assert g_of(n, beta_plus(n)) == 0.0

    def test_n2(self):
        assert g_of(2, 0.1) == pytest.approx(0.764264, abs=1e-6)

    def test_domain(self):
        with pytest.raises(ValueError):
            g_of(2, 0.3)
        with pytest.raises(ValueError):
            g_of(2, -0.01)


class TestXBounds:
    def test_at_zero(self):
        assert x_bounds(4, 0.0) == pytest.approx((0.0, 1.0), abs=1e-15)

    def test_at_tip(self):
        b = beta_plus(3)
        lo, hi = x_bounds(3, b)
        assert lo == pytest.approx(0.5 * (1 - b)) and hi == pytest.approx(0.5 * (1 - b))

    def test_n2(self):
        lo, hi = x_bounds(2, 0.1)
        assert lo == pytest.approx(0.102607, abs=1e-6)
        assert hi == pytest.approx(0.797393, abs=1e-6)

    @pytest.mark.parametrize("n", [2, 3, 5, 12])
    def test_root_finding_oracle(self, n):
        """The curves are the roots of gamma_y(., y) at q -> 1/n."""
        for y in np.linspace(0.02, 0.95, 7) * beta_plus(n):
            lo, hi = x_bounds(n, y)
            mid = 0.5 * (1 - y)
            r_lo = brentq(gy_at_limit, 1e-12, mid, args=(y, n), xtol=1e-14)
            r_hi = brentq(gy_at_limit, mid, 1 - y - 1e-12, args=(y, n), xtol=1e-14)
            assert lo == pytest.approx(r_lo, abs=1e-7)
            assert hi == pytest.approx(r_hi, abs=1e-7)

    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_boundary_zero(self, n):
        for y in np.linspace(0, beta_plus(n), 200):
            for x in x_bounds(n, y):
                assert abs(gy_at_limit(x, y, n)) <= 1e-6

    @pytest.mark.parametrize("n", [2, 4, 9])
    def test_interior_sign(self, n, rng):
        q = 1 / n - 1e-9
        for y in rng.uniform(0, beta_plus(n), 40):
            lo, hi = x_bounds(n, y)
            inside = rng.uniform(lo, hi, 5)
            outside = np.concatenate([rng.uniform(0, lo, 3), rng.uniform(hi, 1 - y, 3)])
            w_in = np.column_stack([inside, np.full(5, y), 1 - y - inside])
            w_out = np.column_stack([outside, np.full(6, y), 1 - y - outside])
            assert np.all(rates_array(w_in, q)[:, 1] < 0)
            assert np.all(rates_array(w_out, q)[:, 1] > 0)


class TestClassify:
    def test_center(self):
        for n in (2, 3, 50):
            assert classify(MixWeights(1 / 3, 1 / 3, 1 / 3), n) is RegionLabel.MARKOVIAN

    def test_known_point(self):
        assert classify(MixWeights(0.5, 0.02, 0.48), 2) is RegionLabel.NM_Y

    def test_vertices(self):
        for n in (2, 7):
            for v in np.eye(3):
                assert classify(MixWeights(*v), n) is RegionLabel.MARKOVIAN

    def test_near_vertex_single_label(self):
        w = MixWeights(5.5e-287, 4e-219, 1.0)
        assert classify(w, 2) is RegionLabel.NM_X
        assert nm_conditions(w.as_array(), 2).sum() == 1

    def test_edges_nonmarkovian(self):
        # any finite mixing of two channels is non-Markovian
        for n in (2, 5):
            assert classify(MixWeights(0.3, 0.0, 0.7), n) is RegionLabel.NM_Y
            assert classify(MixWeights(0.0, 0.3, 0.7), n) is RegionLabel.NM_X
            assert classify(MixWeights(0.3, 0.7, 0.0), n) is RegionLabel.NM_Z

    def test_non_overlap(self, rng):
        w = rng.dirichlet(np.ones(3), 100_000)
        for n in np.arange(2, 10.01, 0.5):
            assert np.all(nm_conditions(w, n).sum(axis=1) <= 1)

    @given(mix_weights(), st.floats(2, 40), st.sampled_from(list(itertools.permutations(range(3)))))
    def test_permutation_symmetry(self, w, n, perm):
        lab = classify(w, n)
        lab_p = classify(w.permuted(perm), n)
        if lab is RegionLabel.MARKOVIAN:
            assert lab_p is RegionLabel.MARKOVIAN
        else:
            # coordinate k of the permuted point is coordinate perm[k] of the original
            assert lab_p.value - 1 == list(perm).index(lab.value - 1)

    @pytest.mark.parametrize("n", [2, 3.5, 8])
    def test_matches_rate_signs(self, n, rng):
        w = rng.dirichlet(np.ones(3), 20000)
        far = boundary_distance(w, n) > 1e-4
        g = rates_array(w, (1 - 1e-12) / n)
        expected = np.where((g < 0).any(axis=1), np.argmax(g < 0, axis=1) + 1, 0)
        assert np.array_equal(classify_array(w, n)[far], expected[far])


class TestMeasure:
    def test_golden_n2(self):
        assert region_measure(2) == pytest.approx(MEASURE_N2, abs=1e-6)

    def test_midpoint_oracle(self):
        assert midpoint_measure(2) == pytest.approx(MEASURE_N2, abs=1e-6)
        assert midpoint_measure(5) == pytest.approx(region_measure(5), abs=1e-6)

    def test_error_estimate(self):
        value, err = region_measure_estimate(3, 1e-9)
        assert 0 <= err <= 1e-9

    def test_large_n_vanishes(self):
        assert region_measure(1e6) < 1e-5

    def test_monotone(self):
        m = [region_measure(n) for n in (2, 3, 4, 6, 8, 10)]
        assert np.all(np.diff(m) < 0)
        assert region_measure(6) < region_measure(2)

    def test_quadrature_failure_reported(self):
        with pytest.raises(QuadratureError) as info:
            integrate(lambda t: 1 / math.sqrt(abs(t - 0.3)) if t != 0.3 else 0.0, 0, 1, 1e-15)
        assert info.value.error > 0


class TestMonteCarlo:
    def test_deterministic(self):
        assert monte_carlo_measure(3, 10**4, 5) == monte_carlo_measure(3, 10**4, 5)

    def test_seed_matters(self):
        assert monte_carlo_measure(3, 10**4, 5) != monte_carlo_measure(3, 10**4, 6)

    def test_agrees_with_quadrature(self):
        mc = monte_carlo_measure(2, 10**6, 42)
        assert abs(mc.estimate - MEASURE_N2) <= 3 * mc.std_error

    def test_huge_n(self):
        assert monte_carlo_measure(1e6, 10**5, 1).estimate < 0.01

    def test_min_samples(self):
        with pytest.raises(ValueError):
            monte_carlo_measure(2, 999, 0)


class TestTransform:
    def test_area_preserving(self):
        tr = SimplexTransform.area_preserving()
        assert tr.determinant() == pytest.approx(1.0, abs=1e-15)
        assert tr.m21 == 0 and tr.m11 == 2 * tr.k and tr.m12 == tr.k
        assert tr.m22 == pytest.approx(tr.k * math.sqrt(3))

    @given(st.lists(st.floats(-5, 5), min_size=6, max_size=6))
    def test_triangle_area_preserved(self, c):
        tri = np.array(c).reshape(3, 2)
        def area(p):
            (a, b), (c, d) = p[1] - p[0], p[2] - p[0]
            return 0.5 * abs(a * d - b * c)

        img = SimplexTransform.area_preserving().apply(tri)
        assert area(img) == pytest.approx(area(tri), rel=1e-12, abs=1e-12)

    def test_unit_side_vertices(self):
        tr = SimplexTransform.unit_side()
        assert to_equilateral(tr, (0, 0)) == (0.0, 0.0)
        assert to_equilateral(tr, (1, 0)) == pytest.approx((1.0, 0.0))
        assert to_equilateral(tr, (0, 1)) == pytest.approx((0.5, math.sqrt(3) / 2))

    def test_outside_rejected(self):
        with pytest.raises(ValueError):
            to_equilateral(SimplexTransform.unit_side(), (0.8, 0.8))


class TestPolyline:
    def test_endpoints(self):
        curves = boundary_polyline(2, 3)
        s, lo, hi = curves[RegionLabel.NM_Y].samples.T
        assert (lo[0], hi[0]) == pytest.approx((0.0, 1.0))
        assert s[-1] == pytest.approx(beta_plus(2))
        assert lo[-1] == pytest.approx(hi[-1])

    def test_permuted_copies_on_boundary(self):
        n = 3
        for label, bd in boundary_polyline(n, 50).items():
            for xy in bd.branches_xy():
                w = np.column_stack([xy, 1 - xy.sum(axis=1)])
                g = rates_array(np.clip(w, 0, 1), 1 / n - 1e-9)
                assert np.max(np.abs(g[:, label.value - 1])) <= 1e-6

    @pytest.mark.parametrize("n", [2, 5])
    def test_continuity(self, n):
        bd = boundary_polyline(n, 20001)[RegionLabel.NM_Y]
        _, lo, hi = bd.samples.T
        step = beta_plus(n) / 20000
        # square-root tip aside, neighbours differ by O(step)
        assert np.max(np.abs(np.diff(lo[:-200]))) < 50 * step
        assert np.max(np.abs(np.diff(hi[:-200]))) < 50 * step

    def test_containment(self):
        ns = [2, 3, 4, 6, 8]
        for n, m in itertools.combinations(ns, 2):
            for y in np.linspace(0, beta_plus(m), 200):
                lo_n, hi_n = x_bounds(n, y)
                lo_m, hi_m = x_bounds(m, y)
                assert lo_m >= lo_n and hi_m <= hi_n

    def test_small_samples(self):
        with pytest.raises(ValueError):
            boundary_polyline(2, 1)


def test_boundary_distance_on_curve():
    n = 2.5
    bd = boundary_polyline(n, 37)[RegionLabel.NM_Y]
    lo, _ = bd.branches_xy()
    w = np.column_stack([lo, 1 - lo.sum(axis=1)])
    assert np.all(boundary_distance(w, n) < 1e-6)
    assert boundary_distance(np.array([[1 / 3, 1 / 3, 1 / 3]]), n)[0] > 0.05
