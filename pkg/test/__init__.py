# SPDX-License-Identifier: Apache-2.0.

# The worker count must be set before affdim reads it.
# the "noqa" comment prevents the autoformatter from moving this line below other imports
import os
os.environ.setdefault('AFFDIM_THREADS', '2')  # noqa

from affdim.io import init_logging, LogLevel
import numpy as np
import numpy.testing
import tempfile
import unittest


class AffdimTest(unittest.TestCase):
    """
    Test fixture with a seeded random generator and array assertions.
    """

    seed = 1234

    def setUp(self):
        self.rng = np.random.default_rng(self.seed)
        # init_logging(LogLevel.Trace, 'stderr')

    def make_temp_dir(self) -> str:
        """Returns a temporary directory removed when the test finishes."""
        tmp = tempfile.TemporaryDirectory()
        self.addCleanup(tmp.cleanup)
        return tmp.name

    def assertArrayAlmostEqual(self, expected, actual, atol=1e-12, rtol=0.0):
        numpy.testing.assert_allclose(np.asarray(actual, dtype=np.float64), np.asarray(expected, dtype=np.float64),
                                      rtol=rtol, atol=atol)
