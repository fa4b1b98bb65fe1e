# SPDX-License-Identifier: Apache-2.0.

from affdim.exceptions import DomainError
from affdim.fields import DeterministicModel, FieldPath, OfbmModel, StableLevyModel, simulate_ofbm, simulate_stable_levy
from affdim.matrix import ExponentPair
from affdim.occupation import *
from affdim.svf import Kind
from test import AffdimTest
import math
import numpy as np
import unittest


def _zero_path(n, d=1, m=1):
    return FieldPath.from_function(lambda t: np.zeros((t.shape[0], m)), d=d, m=m, n=n)


def _identity_path(n):
    return FieldPath.from_function(lambda t: t, d=1, m=1, n=n)


class OccupationHistogramTest(AffdimTest):
    def test_zero_path_range(self):
        hist = occupation_histogram(_zero_path(16), Kind.RANGE)
        self.assertEqual(((-0.5, 0.5),), hist.bounds)
        self.assertEqual(16, hist.counts[8])
        self.assertEqual(16, int(hist.counts.sum()))
        self.assertEqual(0, hist.overflow)

    def test_diagonal_graph(self):
        hist = occupation_histogram(_identity_path(16), Kind.GRAPH, bounds=[(0.0, 1.0)], cells=4)
        self.assertEqual((4, 4), hist.cells)
        self.assertArrayAlmostEqual(np.eye(4) * 0.25, hist.mass)

    def test_conservation(self):
        path = simulate_ofbm(0.5, n=256, replicas=1, seed=3)[0]
        for kind in (Kind.GRAPH, Kind.RANGE):
            hist = occupation_histogram(path, kind, bounds=[(-0.2, 0.2)], cells=8)
            self.assertEqual(256, int(hist.counts.sum()) + hist.overflow)
            self.assertAlmostEqual(1.0, float(hist.mass.sum()) + hist.overflow_mass, places=14)

    def test_default_bounds_keep_every_point(self):
        path = simulate_ofbm([[0.5, 0.1], [0.0, 0.7]], n=128, replicas=1, seed=4)[0]
        hist = occupation_histogram(path, Kind.RANGE, cells=(4, 8))
        self.assertEqual((4, 8), hist.cells)
        self.assertEqual(0, hist.overflow)

    def test_mean_over_replicas(self):
        paths = simulate_ofbm(0.5, n=64, replicas=3, seed=5)
        hist = mean_occupation_histogram(paths, Kind.GRAPH, cells=4)
        self.assertEqual(192, hist.n_points)
        self.assertEqual(0, hist.overflow)
        self.assertAlmostEqual(1.0, float(hist.mass.sum()), places=14)

    def test_errors(self):
        path = _zero_path(16)
        with self.assertRaises(DomainError):
            occupation_histogram(path, cells=1)
        with self.assertRaises(DomainError):
            occupation_histogram(path, bounds=[(1.0, 0.0)])
        with self.assertRaises(DomainError):
            occupation_histogram(path, bounds=[(0.0, 1.0), (0.0, 1.0)])
        with self.assertRaises(DomainError):
            mean_occupation_histogram([])


class BoxCountTest(AffdimTest):
    def test_segment(self):
        u = self.rng.uniform(0.0, 1.0, 10000)
        report = box_count_dimension(np.stack([u, 0.5 * u], axis=-1))
        self.assertAlmostEqual(1.0, report.slope, delta=0.05)
        self.assertFalse(report.degenerate)

    def test_square(self):
        report = box_count_dimension(self.rng.uniform(0.0, 1.0, (10000, 2)))
        self.assertAlmostEqual(2.0, report.slope, delta=0.05)
        self.assertEqual(4, len(report.fit_range))

    def test_lattice_diagonal_is_exact(self):
        report = box_count_dimension(_identity_path(2 ** 14).graph_points())
        self.assertEqual(tuple(2 ** j for j in DEFAULT_BOX_SCALES), report.counts)
        self.assertAlmostEqual(1.0, report.slope, places=10)
        self.assertEqual(tuple(range(1, 10)), report.fit_range)

    def test_brownian_graph(self):
        path = simulate_ofbm(0.5, n=2 ** 16, replicas=1, seed=7)[0]
        self.assertAlmostEqual(1.5, box_count_dimension(path.graph_points()).slope, delta=0.15)

    def test_fbm_graph_slopes(self):
        for hurst, seed in ((0.3, 41), (0.5, 42), (0.7, 43)):
            paths = simulate_ofbm(hurst, n=2 ** 16, replicas=8, seed=seed)
            slopes = [box_count_dimension(p.graph_points(), policy=FitPolicy.for_kind(Kind.GRAPH)).slope for p in paths]
            self.assertAlmostEqual(2.0 - hurst, float(np.mean(slopes)), delta=0.15)

    def test_stable_levy_range_slope(self):
        paths = simulate_stable_levy([1.8, 1.8], n=2 ** 16, replicas=4, seed=44)
        slopes = [box_count_dimension(p.range_points(), policy=FitPolicy.for_kind(Kind.RANGE)).slope for p in paths]
        self.assertAlmostEqual(1.8, float(np.mean(slopes)), delta=0.2)

    def test_range_policy_drops_coarse_scales(self):
        self.assertEqual(FitPolicy(), FitPolicy.for_kind(Kind.GRAPH))
        report = box_count_dimension(self.rng.uniform(0.0, 1.0, (10000, 2)), policy=FitPolicy.for_kind(Kind.RANGE))
        self.assertEqual(3, report.fit_range[0])

    def test_degenerate(self):
        report = box_count_dimension(np.ones((1000, 2)))
        self.assertTrue(report.degenerate)
        self.assertEqual(0.0, report.slope)

    def test_duplicates_and_order_do_not_matter(self):
        points = self.rng.uniform(0.0, 1.0, (5000, 2))
        base = box_count_dimension(points)
        doubled = box_count_dimension(np.vstack([points, points]))
        shuffled = box_count_dimension(points[self.rng.permutation(5000)])
        self.assertEqual(base.counts, doubled.counts)
        self.assertEqual(base.slope, doubled.slope)
        self.assertEqual(base, shuffled)

    def test_policy(self):
        u = self.rng.uniform(0.0, 1.0, 10000)
        report = box_count_dimension(u, policy=FitPolicy(drop_coarse=3, drop_fine=4))
        self.assertEqual(3, report.fit_range[0])
        self.assertLessEqual(report.fit_range[-1], 7)

    def test_errors(self):
        with self.assertRaises(DomainError):
            box_count_dimension(np.zeros((999, 1)))
        with self.assertRaises(DomainError):
            box_count_dimension(self.rng.uniform(size=(2000, 1)), scales=(1, 2, 3))
        with self.assertRaises(DomainError):
            box_count_dimension(self.rng.uniform(size=(2000, 1)), scales=(1, 3, 2, 4))


class EnergyTest(AffdimTest):
    def test_two_points(self):
        for gamma in (0.0, 0.7, 2.5):
            estimate = energy_integral(_zero_path(2), gamma)
            self.assertEqual(1.0, estimate.value)
            self.assertEqual(1, estimate.pairs)
            self.assertTrue(estimate.exhaustive)

    def test_zero_exponent(self):
        path = simulate_ofbm(0.5, n=256, replicas=1, seed=11)[0]
        self.assertEqual(1.0, energy_integral(path, 0.0).value)
        self.assertEqual(1.0, energy_integral(path, 0.0, pair_budget=1000, kind=Kind.RANGE).value)

    def test_constant_path_double_integral(self):
        estimate = energy_integral(_zero_path(2048), 0.5)
        self.assertAlmostEqual(8.0 / 3.0, estimate.value, delta=0.1)
        self.assertEqual(2048 * 2047 // 2, estimate.pairs)
        self.assertEqual(0, estimate.duplicate_pairs)

    def test_duplicates_are_capped(self):
        path = _zero_path(16)
        estimate = energy_integral(path, 0.5, kind=Kind.RANGE)
        self.assertEqual(120, estimate.duplicate_pairs)
        self.assertAlmostEqual(math.sqrt(15.0), estimate.value, places=12)

    def test_sampled_pairs_are_reproducible(self):
        path = simulate_ofbm(0.5, n=512, replicas=1, seed=12)[0]
        first = energy_integral(path, 1.2, pair_budget=5000, seed=3, workers=1)
        second = energy_integral(path, 1.2, pair_budget=5000, seed=3, workers=4)
        self.assertFalse(first.exhaustive)
        self.assertLessEqual(first.pairs, 5000)
        self.assertEqual(first, second)

    def test_tiny_budget(self):
        path = simulate_ofbm(0.5, n=512, replicas=1, seed=13)[0]
        estimate = energy_integral(path, 0.5, pair_budget=100)
        self.assertEqual(100, estimate.pairs)
        self.assertGreater(estimate.value, 0.0)

    def test_errors(self):
        with self.assertRaises(DomainError):
            energy_integral(_zero_path(16), -0.1)
        with self.assertRaises(DomainError):
            energy_integral(_zero_path(16), 0.5, pair_budget=0)
        with self.assertRaises(DomainError):
            energy_integral(FieldPath.from_function(lambda t: 0.0 * t, d=1, m=1, n=1), 0.5)


class BlowupScanTest(AffdimTest):
    def test_constant_path_diverges_from_one(self):
        scan = energy_blowup_scan(_zero_path(1024), [0.5, 0.9, 1.1])
        self.assertEqual(1.1, scan.gamma_star)
        self.assertEqual([False, False, True], [r.divergent for r in scan.rows])
        self.assertEqual(4, len(scan.spacings))
        self.assertAlmostEqual(1.0 / 1023, scan.spacings[-1], places=15)

    def test_zero_exponent_never_flagged(self):
        scan = energy_blowup_scan(_zero_path(256), [1.1, 0.0])
        self.assertEqual(0.0, scan.rows[0].gamma)
        self.assertFalse(scan.rows[0].divergent)
        self.assertIsNone(scan.rows[0].growth)
        self.assertTrue(scan.rows[1].divergent)

    def test_brownian_graph(self):
        paths = simulate_ofbm(0.5, n=2048, replicas=4, seed=17)
        scan = energy_blowup_scan(paths, [1.0, 1.3, 1.45, 1.55, 1.7])
        self.assertIn(scan.gamma_star, (1.45, 1.55))
        flags = [r.divergent for r in scan.rows]
        self.assertEqual(sorted(flags), flags)

    def test_errors(self):
        with self.assertRaises(DomainError):
            energy_blowup_scan(_zero_path(64), [0.5], refinements=1)
        with self.assertRaises(DomainError):
            energy_blowup_scan(_zero_path(8), [0.5], refinements=3)
        with self.assertRaises(DomainError):
            energy_blowup_scan(_zero_path(64), [])
        with self.assertRaises(DomainError):
            energy_blowup_scan([], [0.5])


class DensityProbeTest(AffdimTest):
    def test_brownian(self):
        model = OfbmModel(0.5)
        report = density_sup_probe(model, model.pair(0.5))
        self.assertAlmostEqual(1.0 / math.sqrt(math.pi), report.sup, delta=0.05)
        self.assertAlmostEqual(0.5 * (1.0 + EDGE_OFFSET), report.t[0], places=9)
        self.assertAlmostEqual(0.0, report.x[0], delta=0.1)
        self.assertFalse(report.unbounded)
        self.assertTrue(report.heuristic)

    def test_cauchy(self):
        model = StableLevyModel([1.0])
        report = density_sup_probe(model, model.pair(0.5))
        self.assertAlmostEqual(2.0 / math.pi, report.sup, delta=0.05)
        self.assertAlmostEqual(0.5 * (1.0 + EDGE_OFFSET), report.t[0], places=9)

    def test_grid_follows_scale(self):
        grid = annulus_time_grid(ExponentPair([[1.0]], [[0.5]], 0.25))
        self.assertEqual(len(DEFAULT_PROBE_TIMES) + 1, len(grid))
        self.assertTrue(any(abs(t[0] - 0.25 * (1.0 + EDGE_OFFSET)) < 1e-12 for t in grid))
        grid = annulus_time_grid(ExponentPair(np.diag([1.0, 2.0]), [[0.5]], 0.5))
        self.assertTrue(any(abs(t[0] - 0.5 * (1.0 + EDGE_OFFSET)) < 1e-12 and t[1] == 0.0 for t in grid))
        grid = annulus_time_grid(ExponentPair([[1.0]], [[0.5]], 0.9999))
        self.assertEqual([(t,) for t in DEFAULT_PROBE_TIMES], [tuple(t.tolist()) for t in grid])

    def test_degenerate_law(self):
        model = DeterministicModel(lambda t: 0.0 * t, d=1, m=1)
        report = density_sup_probe(model, ExponentPair([[1.0]], [[0.5]], 0.5), samples_per_t=100)
        self.assertTrue(report.unbounded)
        self.assertTrue(math.isinf(report.sup))

    def test_errors(self):
        model = OfbmModel(0.5)
        with self.assertRaises(DomainError):
            density_sup_probe(model, ExponentPair(np.eye(2), [[0.5]]))
        with self.assertRaises(DomainError):
            density_sup_probe(model, model.pair(0.5), t_grid=[[0.0]])
        with self.assertRaises(DomainError):
            density_sup_probe(model, model.pair(0.5), t_grid=[[1.5]])


class FrostmanMomentTest(AffdimTest):
    def test_constant_path(self):
        model = DeterministicModel(lambda t: 0.0 * t, d=1, m=1)
        moment = frostman_moment(model, 0.5, samples=16)
        self.assertAlmostEqual(2.0, moment.value, delta=0.1)
        self.assertEqual(0.0, moment.stderr)

    def test_brownian_below_graph_exponent(self):
        moment = frostman_moment(OfbmModel(0.5), 1.2, samples=2048, seed=5)
        self.assertTrue(math.isfinite(moment.value))
        self.assertGreater(moment.value, 1.0)
        self.assertGreater(moment.stderr, 0.0)

    def test_errors(self):
        with self.assertRaises(DomainError):
            frostman_moment(OfbmModel(0.5), -1.0)


if __name__ == '__main__':
    unittest.main()
