# SPDX-License-Identifier: Apache-2.0.

from test import AffdimTest
from affdim.common import *
import numpy as np
import os
import threading
import unittest
from unittest import mock


class TestWorkerCount(AffdimTest):
    def test_env_var_sets_count(self):
        with mock.patch.dict(os.environ, {THREADS_ENV_VAR: '3'}):
            self.assertEqual(3, get_worker_count())

    def test_bad_env_var_falls_back_to_cpu_count(self):
        for value in ('zero', '0', '-4', ''):
            with mock.patch.dict(os.environ, {THREADS_ENV_VAR: value}):
                self.assertEqual(os.cpu_count() or 1, get_worker_count())


class TestReplicaGenerator(AffdimTest):
    def test_same_key_same_stream(self):
        a = replica_generator(7, 3).standard_normal(16)
        b = replica_generator(7, 3).standard_normal(16)
        self.assertTrue(np.array_equal(a, b))

    def test_different_keys_differ(self):
        base = replica_generator(7, 3).standard_normal(16)
        self.assertFalse(np.array_equal(base, replica_generator(7, 4).standard_normal(16)))
        self.assertFalse(np.array_equal(base, replica_generator(8, 3).standard_normal(16)))

    def test_negative_seed_is_accepted(self):
        replica_generator(-1, 0).standard_normal(1)


class TestMapOrdered(AffdimTest):
    def test_keeps_input_order(self):
        items = list(range(50))
        self.assertEqual([i * i for i in items], map_ordered(lambda i: i * i, items, workers=4))

    def test_inline_when_single_worker(self):
        threads = set()

        def record(i):
            threads.add(threading.get_ident())
            return i

        self.assertEqual([0, 1, 2], map_ordered(record, range(3), workers=1))
        self.assertEqual({threading.get_ident()}, threads)

    def test_results_do_not_depend_on_worker_count(self):
        def draw(i):
            return replica_generator(11, i).standard_normal(4)

        one = map_ordered(draw, range(20), workers=1)
        many = map_ordered(draw, range(20), workers=8)
        for a, b in zip(one, many):
            self.assertTrue(np.array_equal(a, b))


if __name__ == '__main__':
    unittest.main()
