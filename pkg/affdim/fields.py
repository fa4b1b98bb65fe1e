"""
Sample paths of operator fractional Brownian motion and stable Lévy processes
on a regular lattice over [0,1]^d, and Kolmogorov-Smirnov checks of the
self-affine scaling law and of stationary increments.
"""
# SPDX-License-Identifier: Apache-2.0.

import csv
from dataclasses import dataclass, field
from enum import IntEnum
import logging
import math
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.stats

from affdim import io
from affdim.common import map_ordered, replica_generator
from affdim.exceptions import DomainError, NumericError, UnsupportedModelError
from affdim.matrix import ExponentPair, as_square_matrix, matrix_power_scale

_log = logging.getLogger(__name__)

MIN_SCALING_REPLICAS = 200


class Model(IntEnum):
    OFBM = 0
    """Operator fractional Brownian motion or field."""

    STABLE_LEVY = 1
    """Lévy process with independent strictly stable coordinates."""

    DETERMINISTIC = 2
    """Path given by a function, used as a control case."""


def lattice_points(n: int, d: int) -> np.ndarray:
    """Regular grid over [0,1]^d with n points per axis, row-major, shape (n^d, d)."""
    axis = np.linspace(0.0, 1.0, n)
    grids = np.meshgrid(*([axis] * d), indexing='ij')
    return np.stack([g.ravel() for g in grids], axis=-1)


def _check_lattice_size(n: int) -> int:
    n = int(n)
    if n < 2 or n & (n - 1):
        raise DomainError('lattice size n must be a power of two >= 2, got {}'.format(n))
    return n


@dataclass
class FieldPath:
    """
    One sample path on the lattice k/(n-1), k = 0..n-1, along each of d axes.

    Args:
        d (int): Parameter dimension.
        m (int): Value dimension.
        n (int): Points per axis.
        values (numpy.ndarray): Shape (n^d, m), row-major lattice order. X(0) must be 0.
        model (Model): Generating model.
        params (dict): Model parameters, name to tuple of reals.
        seed (int): Run seed.
        replica (int): Replica index within the run.
    """
    d: int
    m: int
    n: int
    values: np.ndarray
    model: Model
    params: Dict[str, Tuple[float, ...]] = field(default_factory=dict)
    seed: int = 0
    replica: int = 0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64).reshape(-1, self.m)
        if self.values.shape[0] != self.n ** self.d:
            raise DomainError('path has {} points, expected n^d = {}'.format(self.values.shape[0], self.n ** self.d))
        if not np.all(np.isfinite(self.values)):
            raise DomainError('path values must be finite')
        if np.any(self.values[0] != 0.0):
            raise DomainError('path must start at X(0) = 0')

    @classmethod
    def from_function(cls, fn: Callable[[np.ndarray], np.ndarray], d: int, m: int, n: int) -> 'FieldPath':
        """Deterministic path X(t) = fn(t), evaluated on all lattice points at once."""
        points = lattice_points(n, d)
        values = np.asarray(fn(points), dtype=np.float64).reshape(points.shape[0], m)
        return cls(d=d, m=m, n=n, values=values, model=Model.DETERMINISTIC)

    @property
    def spacing(self) -> float:
        return 1.0 / (self.n - 1)

    @property
    def points(self) -> np.ndarray:
        return lattice_points(self.n, self.d)

    def graph_points(self) -> np.ndarray:
        """Points (t, X(t)) in R^{d+m}."""
        return np.hstack([self.points, self.values])

    def range_points(self) -> np.ndarray:
        return self.values

    def index_of(self, t) -> int:
        """Row of `values` holding X(t); t must lie on the lattice."""
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        if t.shape != (self.d,):
            raise DomainError('lattice point must have {} coordinates'.format(self.d))
        scaled = t * (self.n - 1)
        index = np.rint(scaled)
        if np.any(np.abs(scaled - index) > 1e-9) or np.any(index < 0) or np.any(index > self.n - 1):
            raise DomainError('t={} is not on the lattice'.format(t.tolist()))
        return int(np.ravel_multi_index(tuple(index.astype(int)), (self.n,) * self.d))

    def value_at(self, t) -> np.ndarray:
        return self.values[self.index_of(t)]

    def to_csv(self, path, replicas: int = 1):
        """Write the path CSV and its `.meta` sidecar."""
        header = ['t{}'.format(i + 1) for i in range(self.d)] + ['x{}'.format(i + 1) for i in range(self.m)]
        io.write_table(path, header, self.graph_points().tolist())
        io.write_report(str(path) + '.meta', {
            'path': {'model': self.model, 'd': self.d, 'm': self.m, 'n': self.n, 'seed': self.seed,
                     'replica': self.replica, 'replicas': replicas},
            'params': dict(self.params),
        })

    @classmethod
    def from_csv(cls, path) -> 'FieldPath':
        """Read a path CSV; the sidecar is used when present."""
        try:
            with open(path, newline='') as f:
                rows = list(csv.reader(f))
        except OSError as e:
            raise DomainError('cannot read path file {}: {}'.format(path, e.strerror))
        if len(rows) < 2:
            raise DomainError('path file {} has no data rows'.format(path))
        header = rows[0]
        d = sum(1 for name in header if name.startswith('t'))
        m = len(header) - d
        try:
            data = np.array(rows[1:], dtype=np.float64)
        except ValueError:
            raise DomainError('path file {} is not numeric'.format(path))
        n = int(round(data.shape[0] ** (1.0 / d))) if d else 0
        if d < 1 or m < 1 or n ** d != data.shape[0]:
            raise DomainError('path file {} is not a full lattice'.format(path))

        model, params, seed, replica = Model.DETERMINISTIC, {}, 0, 0
        meta = Path(str(path) + '.meta')
        if meta.exists():
            parser = io.read_report(meta)
            section = parser['path'] if parser.has_section('path') else {}
            model = Model[section.get('model', 'deterministic').upper()]
            seed = int(section.get('seed', 0))
            replica = int(section.get('replica', 0))
            if parser.has_section('params'):
                params = {key: tuple(io.parse_float_list(value)) for key, value in parser['params'].items()}
        return cls(d=d, m=m, n=n, values=data[:, d:], model=model, params=params, seed=seed, replica=replica)


def _fbm_path(hurst: float, n: int, rng: np.random.Generator) -> np.ndarray:
    # exact circulant embedding of fractional Gaussian noise
    N = n - 1
    k = np.arange(N + 1, dtype=np.float64)
    two_h = 2.0 * hurst
    cov = 0.5 * (np.abs(k + 1) ** two_h - 2.0 * k ** two_h + np.abs(k - 1) ** two_h)
    row = np.concatenate([cov, cov[-2:0:-1]])
    eig = np.fft.fft(row).real
    if eig.min() < -1e-10 * eig.max():
        raise NumericError('circulant embedding is not nonnegative definite', {'hurst': hurst, 'n': n})
    eig = np.clip(eig, 0.0, None)
    size = row.shape[0]
    z = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    noise = np.fft.fft(np.sqrt(eig / size) * z).real[:N]
    return np.concatenate([[0.0], np.cumsum(noise)]) * (1.0 / N) ** hurst


def _fbf_field(hurst: float, n: int, rng: np.random.Generator) -> np.ndarray:
    # truncated harmonizable sum on a doubled periodic grid, Var X(e_1) = 1
    M = 2 * n
    h = 1.0 / (n - 1)
    freq = 2.0 * np.pi * np.fft.fftfreq(M, d=h)
    kx, ky = np.meshgrid(freq, freq, indexing='ij')
    radius = np.hypot(kx, ky)
    amp = np.zeros_like(radius)
    nonzero = radius > 0.0
    amp[nonzero] = radius[nonzero] ** (-hurst - 1.0) * (2.0 * np.pi / (M * h))
    z = rng.standard_normal((M, M)) + 1j * rng.standard_normal((M, M))
    field_values = (M * M * np.fft.ifft2(amp * z)).real[:n, :n]
    field_values = field_values - field_values[0, 0]
    variance_e1 = np.sum(amp ** 2 * (2.0 - 2.0 * np.cos(kx)))
    return (field_values / math.sqrt(variance_e1)).ravel()


def _standard_stable(alpha: float, size, rng: np.random.Generator) -> np.ndarray:
    # Chambers-Mallows-Stuck, symmetric, unit scale; alpha = 2 gives N(0, 1)
    if alpha == 2.0:
        return rng.standard_normal(size)
    v = rng.uniform(-0.5 * np.pi, 0.5 * np.pi, size)
    w = rng.standard_exponential(size)
    if alpha == 1.0:
        return np.tan(v)
    return (np.sin(alpha * v) / np.cos(v) ** (1.0 / alpha)
            * (np.cos((1.0 - alpha) * v) / w) ** ((1.0 - alpha) / alpha))


class OfbmModel:
    """
    Operator fractional Brownian motion (d = 1) or field (d = 2), E = I_d.

    X = P·Y where D = P·diag(H)·P⁻¹ and the coordinates of Y are independent
    fractional Brownian motions or isotropic fields with Hurst indices H.

    Args:
        exponent: Hurst index (m = 1) or an m×m matrix D, real-diagonalizable
            with eigenvalues in (0, 1).
        d (int): 1 or 2.
    """

    model = Model.OFBM

    def __init__(self, exponent, d: int = 1):
        self.D = as_square_matrix(exponent, 'D')
        self.d = int(d)
        if self.d not in (1, 2):
            raise UnsupportedModelError('ofbm simulation supports d in {{1, 2}}, got {}'.format(d))
        if self.m not in (1, 2):
            raise UnsupportedModelError('ofbm simulation supports m in {{1, 2}}, got {}'.format(self.m))
        values, vectors = np.linalg.eig(self.D)
        if np.max(np.abs(values.imag)) > 1e-12:
            raise UnsupportedModelError('D must have real eigenvalues, got {}'.format(values.tolist()))
        if np.linalg.cond(vectors) > 1e8:
            raise UnsupportedModelError('D must be diagonalizable')
        self.hurst = values.real
        if np.any(self.hurst <= 0.0) or np.any(self.hurst >= 1.0):
            raise UnsupportedModelError('eigenvalues of D must lie in (0, 1), got {}'.format(self.hurst.tolist()))
        self.mixing = vectors.real / np.linalg.norm(vectors.real, axis=0)

    @property
    def m(self) -> int:
        return self.D.shape[0]

    @property
    def params(self) -> Dict[str, Tuple[float, ...]]:
        return {'D': tuple(self.D.ravel().tolist())}

    def pair(self, c: float = 0.5) -> ExponentPair:
        return ExponentPair(np.eye(self.d), self.D, c)

    def _replica(self, n: int, seed: int, index: int) -> FieldPath:
        rng = replica_generator(seed, index)
        synth = _fbm_path if self.d == 1 else _fbf_field
        coords = np.stack([synth(h, n, rng) for h in self.hurst], axis=-1)
        return FieldPath(d=self.d, m=self.m, n=n, values=coords @ self.mixing.T, model=self.model,
                         params=self.params, seed=seed, replica=index)

    def simulate(self, n: int, replicas: int = 1, seed: int = 0, workers: Optional[int] = None) -> List[FieldPath]:
        n = _check_lattice_size(n)
        _log.info('simulating %d ofbm replicas, d=%d m=%d n=%d seed=%d', replicas, self.d, self.m, n, seed)
        return map_ordered(lambda i: self._replica(n, seed, i), range(int(replicas)), workers)

    def sample_marginal(self, t, size: int, rng: np.random.Generator) -> np.ndarray:
        """Draw `size` samples of X(t), shape (size, m)."""
        norm = float(np.linalg.norm(np.atleast_1d(t)))
        scales = norm ** self.hurst
        return (rng.standard_normal((size, self.m)) * scales) @ self.mixing.T


class StableLevyModel:
    """
    Lévy process (d = 1) with independent symmetric strictly stable coordinates.

    Coordinate i has stability index α_i and unit scale at t = 1, so
    D = diag(1/α_1, ..., 1/α_m).

    Args:
        alphas: Stability indices in (0, 2].
    """

    model = Model.STABLE_LEVY
    d = 1

    def __init__(self, alphas: Sequence[float]):
        self.alphas = tuple(float(a) for a in np.atleast_1d(alphas))
        if not self.alphas:
            raise DomainError('at least one stability index is needed')
        for alpha in self.alphas:
            if not 0.0 < alpha <= 2.0:
                raise DomainError('stability index must lie in (0, 2], got {!r}'.format(alpha))

    @property
    def m(self) -> int:
        return len(self.alphas)

    @property
    def D(self) -> np.ndarray:
        return np.diag([1.0 / a for a in self.alphas])

    @property
    def params(self) -> Dict[str, Tuple[float, ...]]:
        return {'alpha': self.alphas}

    def pair(self, c: float = 0.5) -> ExponentPair:
        return ExponentPair(np.eye(1), self.D, c)

    def _replica(self, n: int, seed: int, index: int) -> FieldPath:
        rng = replica_generator(seed, index)
        h = 1.0 / (n - 1)
        coords = []
        for alpha in self.alphas:
            increments = h ** (1.0 / alpha) * _standard_stable(alpha, n - 1, rng)
            coords.append(np.concatenate([[0.0], np.cumsum(increments)]))
        return FieldPath(d=1, m=self.m, n=n, values=np.stack(coords, axis=-1), model=self.model,
                         params=self.params, seed=seed, replica=index)

    def simulate(self, n: int, replicas: int = 1, seed: int = 0, workers: Optional[int] = None) -> List[FieldPath]:
        n = _check_lattice_size(n)
        _log.info('simulating %d stable Lévy replicas, alphas=%s n=%d seed=%d', replicas, self.alphas, n, seed)
        return map_ordered(lambda i: self._replica(n, seed, i), range(int(replicas)), workers)

    def sample_marginal(self, t, size: int, rng: np.random.Generator) -> np.ndarray:
        t = abs(float(np.atleast_1d(t)[0]))
        return np.stack([t ** (1.0 / a) * _standard_stable(a, size, rng) for a in self.alphas], axis=-1)


class DeterministicModel:
    """
    Degenerate model X(t) = fn(t).

    Args:
        fn: Maps an array of d-vectors, shape (k, d), to values of shape (k, m).
        d (int): Parameter dimension.
        m (int): Value dimension.
    """

    model = Model.DETERMINISTIC

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray], d: int, m: int):
        self.fn = fn
        self.d = d
        self.m = m

    def simulate(self, n: int, replicas: int = 1, seed: int = 0, workers: Optional[int] = None) -> List[FieldPath]:
        path = FieldPath.from_function(self.fn, self.d, self.m, _check_lattice_size(n))
        return [path] * int(replicas)

    def sample_marginal(self, t, size: int, rng: np.random.Generator) -> np.ndarray:
        value = np.asarray(self.fn(np.atleast_2d(np.asarray(t, dtype=np.float64))), dtype=np.float64)
        return np.repeat(value.reshape(1, self.m), size, axis=0)


def simulate_ofbm(exponent, d: int = 1, n: int = 1024, replicas: int = 1, seed: int = 0,
                  workers: Optional[int] = None) -> List[FieldPath]:
    """Simulate operator fractional Brownian motion paths.

    Args:
        exponent: Hurst index or m×m matrix D (m in {1, 2}).
        d (int): 1 (exact circulant embedding) or 2 (spectral sum).
        n (int): Points per axis, a power of two.
        replicas (int): Number of independent paths.
        seed (int): Run seed; replica i draws from the stream keyed by (seed, i).
        workers (Optional[int]): Worker threads; never changes the output.

    Returns:
        list of FieldPath
    """
    return OfbmModel(exponent, d).simulate(n, replicas, seed, workers)


def simulate_stable_levy(alphas: Sequence[float], n: int = 1024, replicas: int = 1, seed: int = 0,
                         workers: Optional[int] = None) -> List[FieldPath]:
    """Simulate stable Lévy paths with independent coordinates of indices `alphas`."""
    return StableLevyModel(alphas).simulate(n, replicas, seed, workers)


@dataclass(frozen=True)
class ProbeResult:
    """
    KS comparison at one probe point and coordinate.

    Attributes:
        t: Probe point.
        coordinate (int): Value coordinate compared.
        statistic (float): Two-sample KS statistic.
        sizes: Sizes of the two samples.
    """
    t: Tuple[float, ...]
    coordinate: int
    statistic: float
    sizes: Tuple[int, int]


@dataclass(frozen=True)
class ScalingTestReport:
    """
    Outcome of a KS suite.

    Attributes:
        c (Optional[float]): Scale tested, None for increment checks.
        per_point: One result per probe and coordinate.
        max_ks (float): Largest statistic.
        threshold (float): Critical value, Bonferroni-adjusted over all comparisons.
        passed (bool): max_ks < threshold.
    """
    c: Optional[float]
    per_point: Tuple[ProbeResult, ...]
    max_ks: float
    threshold: float
    passed: bool


def ks_critical_value(n1: int, n2: int, significance: float) -> float:
    """Asymptotic two-sample KS critical value."""
    return math.sqrt(-0.5 * math.log(significance / 2.0)) * math.sqrt((n1 + n2) / (n1 * n2))


def _split_halves(paths: Sequence[FieldPath]) -> Tuple[Sequence[FieldPath], Sequence[FieldPath]]:
    if len(paths) < MIN_SCALING_REPLICAS:
        raise DomainError('need at least {} replicas, got {}'.format(MIN_SCALING_REPLICAS, len(paths)))
    half = len(paths) // 2
    return paths[:half], paths[half:2 * half]


def _ks_suite(c, probes, first_samples, second_samples, significance) -> ScalingTestReport:
    results = []
    for t, a, b in zip(probes, first_samples, second_samples):
        for j in range(a.shape[1]):
            statistic = float(scipy.stats.ks_2samp(a[:, j], b[:, j]).statistic)
            results.append(ProbeResult(t=t, coordinate=j, statistic=statistic, sizes=(a.shape[0], b.shape[0])))
    threshold = ks_critical_value(results[0].sizes[0], results[0].sizes[1], significance / len(results))
    max_ks = max(r.statistic for r in results)
    _log.debug('KS suite: max statistic %.4f, threshold %.4f', max_ks, threshold)
    return ScalingTestReport(c=c, per_point=tuple(results), max_ks=max_ks, threshold=threshold,
                             passed=max_ks < threshold)


def verify_scaling(paths: Sequence[FieldPath], c: float, D, probe_points: Sequence, significance: float = 0.01,
                   ) -> ScalingTestReport:
    """KS check of X(ct) = c^D X(t) in distribution.

    Samples of X(ct) come from the first half of the replicas and samples of
    c^D X(t) from the second half, so the two samples are independent.

    An error e in D moves the marginal scale by a factor c^e, so the power
    against nearby exponents grows as c shrinks. With 1000 replicas an error
    of 0.2 goes undetected at c = 0.5 and is reliably detected at c = 1/64.

    Args:
        paths: Replicas of one model, all on the same lattice.
        c (float): Scale in (0, 1); ct must lie on the lattice.
        D: m×m exponent under test.
        probe_points: Lattice points t.
        significance (float): Family-wise level.

    Returns:
        ScalingTestReport:
    """
    if not 0.0 < c < 1.0:
        raise DomainError('scale c must lie in (0, 1), got {!r}'.format(c))
    first, second = _split_halves(paths)
    V = matrix_power_scale(as_square_matrix(D, 'D'), c)
    if V.shape[0] != paths[0].m:
        raise DomainError('D has order {}, paths have m={}'.format(V.shape[0], paths[0].m))
    if not probe_points:
        raise DomainError('at least one probe point is needed')

    probes, scaled, reference = [], [], []
    for t in probe_points:
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        scaled_index = first[0].index_of(c * t)
        index = second[0].index_of(t)
        probes.append(tuple(t.tolist()))
        scaled.append(np.array([p.values[scaled_index] for p in first]))
        reference.append(np.array([p.values[index] for p in second]) @ V.T)
    return _ks_suite(float(c), probes, scaled, reference, significance)


def verify_stationary_increments(paths: Sequence[FieldPath], first_start, second_start, lag,
                                 significance: float = 0.01) -> ScalingTestReport:
    """KS check that X(s+h) - X(s) and X(u+h) - X(u) share one distribution."""
    first, second = _split_halves(paths)
    starts = [np.atleast_1d(np.asarray(s, dtype=np.float64)) for s in (first_start, second_start)]
    lag = np.atleast_1d(np.asarray(lag, dtype=np.float64))
    samples = []
    for group, start in zip((first, second), starts):
        lo, hi = group[0].index_of(start), group[0].index_of(start + lag)
        samples.append(np.array([p.values[hi] - p.values[lo] for p in group]))
    return _ks_suite(None, [tuple(lag.tolist())], [samples[0]], [samples[1]], significance)
