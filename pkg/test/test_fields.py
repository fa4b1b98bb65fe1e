# SPDX-License-Identifier: Apache-2.0.

from affdim._test import lattice_times
from affdim.exceptions import DomainError, UnsupportedModelError
from affdim.fields import *
from test import AffdimTest
import math
import numpy as np
import os
import unittest


def _column(paths, t, coordinate=0):
    index = paths[0].index_of(t)
    return np.array([p.values[index, coordinate] for p in paths])


class LatticeTest(AffdimTest):
    def test_row_major(self):
        points = lattice_points(3, 2)
        self.assertEqual((9, 2), points.shape)
        self.assertArrayAlmostEqual([0.0, 0.5], points[1])
        self.assertArrayAlmostEqual([0.5, 0.0], points[3])

    def test_index_of(self):
        path = FieldPath.from_function(lambda t: t[:, :1] + 2.0 * t[:, 1:], d=2, m=1, n=5)
        self.assertEqual(5 * 2 + 3, path.index_of([0.5, 0.75]))
        self.assertAlmostEqual(2.0, path.value_at([0.5, 0.75])[0], places=14)

    def test_off_lattice(self):
        path = FieldPath.from_function(lambda t: 0.0 * t, d=1, m=1, n=16)
        for t in ([0.5], [1.5], [0.2, 0.4]):
            with self.assertRaises(DomainError):
                path.index_of(t)


class FieldPathTest(AffdimTest):
    def test_must_start_at_origin(self):
        with self.assertRaises(DomainError):
            FieldPath.from_function(lambda t: t + 1.0, d=1, m=1, n=8)

    def test_shape_and_finiteness(self):
        with self.assertRaises(DomainError):
            FieldPath(d=1, m=1, n=8, values=np.zeros(7), model=Model.DETERMINISTIC)
        values = np.zeros(8)
        values[3] = math.inf
        with self.assertRaises(DomainError):
            FieldPath(d=1, m=1, n=8, values=values, model=Model.DETERMINISTIC)

    def test_csv_with_sidecar(self):
        path = simulate_ofbm(0.7, n=32, replicas=3, seed=5)[2]
        target = os.path.join(self.make_temp_dir(), 'path_00002.csv')
        path.to_csv(target, replicas=3)
        self.assertTrue(os.path.exists(target + '.meta'))

        loaded = FieldPath.from_csv(target)
        self.assertEqual((1, 1, 32), (loaded.d, loaded.m, loaded.n))
        self.assertTrue(np.array_equal(path.values, loaded.values))
        self.assertEqual(Model.OFBM, loaded.model)
        self.assertEqual((5, 2), (loaded.seed, loaded.replica))
        self.assertEqual({'D': (0.7,)}, loaded.params)

    def test_csv_without_sidecar(self):
        path = FieldPath.from_function(lambda t: np.hstack([t, t ** 2]), d=1, m=2, n=8)
        target = os.path.join(self.make_temp_dir(), 'x.csv')
        path.to_csv(target)
        os.remove(target + '.meta')
        loaded = FieldPath.from_csv(target)
        self.assertEqual(Model.DETERMINISTIC, loaded.model)
        self.assertEqual(2, loaded.m)
        self.assertArrayAlmostEqual(path.values, loaded.values, atol=0)

    def test_malformed_csv(self):
        target = os.path.join(self.make_temp_dir(), 'bad.csv')
        with open(target, 'w') as f:
            f.write('t1,x1\n0,0\n0.5,1\n1,abc\n')
        with self.assertRaises(DomainError):
            FieldPath.from_csv(target)
        with self.assertRaises(DomainError):
            FieldPath.from_csv(os.path.join(self.make_temp_dir(), 'missing.csv'))


class OfbmTest(AffdimTest):
    def test_same_seed_is_bitwise_identical(self):
        first = simulate_ofbm(0.6, n=64, replicas=4, seed=7, workers=1)
        second = simulate_ofbm(0.6, n=64, replicas=4, seed=7, workers=4)
        for a, b in zip(first, second):
            self.assertTrue(np.array_equal(a.values, b.values))
        other = simulate_ofbm(0.6, n=64, replicas=1, seed=8)[0]
        self.assertFalse(np.array_equal(first[0].values, other.values))

    def test_brownian_normalization(self):
        paths = simulate_ofbm(0.5, n=16, replicas=10000, seed=1)
        self.assertAlmostEqual(1.0, float(np.var(_column(paths, [1.0]))), delta=0.05)

    def test_self_similar_variance(self):
        paths = simulate_ofbm(0.7, n=16, replicas=10000, seed=2)
        ks = (1, 2, 4, 8, 15)
        times = lattice_times(16, ks)
        variances = [np.var(_column(paths, [t])) for t in times]
        slope = np.polyfit(np.log(times), np.log(variances), 1)[0]
        self.assertAlmostEqual(1.4, slope, delta=0.05)

    def test_mixed_coordinates(self):
        model = OfbmModel([[0.5, 0.1], [0.0, 0.7]])
        self.assertEqual(2, model.m)
        self.assertArrayAlmostEqual([0.5, 0.7], np.sort(model.hurst), atol=1e-14)
        path = model.simulate(32, replicas=1, seed=3)[0]
        self.assertEqual((32, 2), path.values.shape)
        self.assertEqual({'D': (0.5, 0.1, 0.0, 0.7)}, path.params)

    def test_field_normalization(self):
        paths = simulate_ofbm(0.7, d=2, n=8, replicas=2000, seed=4)
        self.assertEqual((64, 1), paths[0].values.shape)
        self.assertAlmostEqual(1.0, float(np.var(_column(paths, [1.0, 0.0]))), delta=0.15)
        self.assertAlmostEqual(1.0, float(np.var(_column(paths, [0.0, 1.0]))), delta=0.15)

    def test_unsupported(self):
        for exponent, d in (([[0.5, -0.2], [0.2, 0.5]], 1), ([[0.5, 1.0], [0.0, 0.5]], 1), (1.2, 1),
                            (0.5 * np.eye(3), 1), (0.5, 3)):
            with self.assertRaises(UnsupportedModelError):
                OfbmModel(exponent, d)

    def test_lattice_size(self):
        with self.assertRaises(DomainError):
            simulate_ofbm(0.5, n=100)

    def test_pair(self):
        pair = OfbmModel(0.5).pair(0.25)
        self.assertEqual((1, 1, 0.25), (pair.d, pair.m, pair.c))


class StableLevyTest(AffdimTest):
    def test_same_seed_is_bitwise_identical(self):
        first = simulate_stable_levy([1.5, 0.8], n=64, replicas=3, seed=9, workers=1)
        second = simulate_stable_levy([1.5, 0.8], n=64, replicas=3, seed=9, workers=3)
        for a, b in zip(first, second):
            self.assertTrue(np.array_equal(a.values, b.values))

    def test_gaussian_case(self):
        paths = simulate_stable_levy([2.0], n=16, replicas=10000, seed=10)
        self.assertAlmostEqual(1.0, float(np.var(_column(paths, [1.0]))), delta=0.05)

    def test_cauchy_quartiles(self):
        sample = _column(simulate_stable_levy([1.0], n=2, replicas=100000, seed=11), [1.0])
        lower, median, upper = np.percentile(sample, [25, 50, 75])
        self.assertAlmostEqual(0.0, median, delta=0.02)
        self.assertAlmostEqual(2.0, upper - lower, delta=0.05)

    def test_index_validation(self):
        for alphas in ([0.0], [2.5], [1.0, -1.0], []):
            with self.assertRaises(DomainError):
                StableLevyModel(alphas)

    def test_exponent(self):
        model = StableLevyModel([1.5, 0.8])
        self.assertArrayAlmostEqual(np.diag([1.0 / 1.5, 1.25]), model.D)
        self.assertEqual({'alpha': (1.5, 0.8)}, model.params)


class DeterministicModelTest(AffdimTest):
    def test_marginal_repeats_value(self):
        model = DeterministicModel(lambda t: 3.0 * t, d=1, m=1)
        sample = model.sample_marginal([0.5], 4, self.rng)
        self.assertArrayAlmostEqual(np.full((4, 1), 1.5), sample)
        self.assertEqual(2, len(model.simulate(8, replicas=2)))


class VerifyScalingTest(AffdimTest):
    def test_brownian_passes(self):
        paths = simulate_ofbm(0.5, n=16, replicas=1000, seed=21)
        report = verify_scaling(paths, 0.5, [[0.5]], lattice_times(16, [8, 12]))
        self.assertTrue(report.passed, report)
        self.assertEqual(2, len(report.per_point))
        self.assertEqual((500, 500), report.per_point[0].sizes)
        self.assertAlmostEqual(ks_critical_value(500, 500, 0.005), report.threshold, places=14)

    def test_mixed_exponent_passes(self):
        D = [[0.5, 0.1], [0.0, 0.7]]
        paths = OfbmModel(D).simulate(16, replicas=1000, seed=22)
        self.assertTrue(verify_scaling(paths, 0.5, D, lattice_times(16, [12])).passed)

    def test_true_exponent_passes_at_both_scales(self):
        paths = simulate_ofbm(0.7, n=16, replicas=1000, seed=26)
        for c in (0.25, 0.5):
            report = verify_scaling(paths, c, [[0.7]], lattice_times(16, [8, 12]))
            self.assertTrue(report.passed, report)

    def test_wrong_exponent_fails(self):
        # marginal scales differ by c^0.2; at c = 1/64 that is 0.435, a KS distance near 0.19
        for hurst, seed in ((0.5, 23), (0.7, 27)):
            paths = simulate_ofbm(hurst, n=256, replicas=1000, seed=seed)
            report = verify_scaling(paths, 1.0 / 64.0, [[hurst + 0.2]], lattice_times(256, [128, 192]))
            self.assertFalse(report.passed, report)
            self.assertGreater(report.max_ks, report.threshold)
            self.assertTrue(verify_scaling(paths, 1.0 / 64.0, [[hurst]], lattice_times(256, [128, 192])).passed)

    def test_origin_probe_is_degenerate(self):
        paths = simulate_ofbm(0.5, n=16, replicas=200, seed=24)
        report = verify_scaling(paths, 0.5, [[0.5]], [[0.0]])
        self.assertEqual(0.0, report.max_ks)
        self.assertTrue(report.passed)

    def test_errors(self):
        paths = simulate_ofbm(0.5, n=16, replicas=200, seed=25)
        with self.assertRaises(DomainError):
            verify_scaling(paths, 0.5, [[0.5]], lattice_times(16, [1]))
        with self.assertRaises(DomainError):
            verify_scaling(paths[:100], 0.5, [[0.5]], lattice_times(16, [8]))
        with self.assertRaises(DomainError):
            verify_scaling(paths, 1.0, [[0.5]], lattice_times(16, [8]))
        with self.assertRaises(DomainError):
            verify_scaling(paths, 0.5, np.eye(2), lattice_times(16, [8]))


class StationaryIncrementsTest(AffdimTest):
    def test_brownian_increments(self):
        paths = simulate_ofbm(0.7, n=16, replicas=1000, seed=31)
        report = verify_stationary_increments(paths, [0.0], lattice_times(16, [8]), lattice_times(16, [4]))
        self.assertIsNone(report.c)
        self.assertTrue(report.passed, report)

    def test_nonstationary_increments_fail(self):
        paths = DeterministicModel(lambda t: t ** 2, d=1, m=1).simulate(16, replicas=200)
        report = verify_stationary_increments(paths, [0.0], lattice_times(16, [8]), lattice_times(16, [4]))
        self.assertEqual(1.0, report.max_ks)
        self.assertFalse(report.passed)


if __name__ == '__main__':
    unittest.main()
