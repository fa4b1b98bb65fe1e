"""
Empirical occupation measures of sample paths and the fractal estimators
built on them: box counting, Frostman energies and their blow-up under
lattice refinement, and a kernel-density probe of the intensity condition.
"""
# SPDX-License-Identifier: Apache-2.0.

from dataclasses import dataclass
import logging
import math
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.stats

from affdim.common import map_ordered, replica_generator
from affdim.exceptions import DomainError, NumericError
from affdim.fields import FieldPath, lattice_points
from affdim.matrix import ExponentPair
from affdim.svf import Kind

_log = logging.getLogger(__name__)

DEFAULT_PAIR_BUDGET = 10 ** 7
DEFAULT_BOX_SCALES = tuple(range(1, 13))
"""Dyadic exponents j, boxes of side 2^-j."""

MIN_BOX_POINTS = 1000
DIVERGENCE_RATIO = 0.97
DEFAULT_PROBE_TIMES = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)
EDGE_OFFSET = 1e-3
"""Relative step past the inner edge of the annulus for the extra probe time."""
PROBE_WINDOW = 1.5

_LAGS_PER_TASK = 32
_STREAM_STRIDE = 2 ** 20


@dataclass(frozen=True)
class OccupationHistogram:
    """
    Lattice approximation of the occupation measure of a path.

    Each lattice point carries weight 1/n_points. Points outside the
    bounds are not binned and count towards the overflow.

    Attributes:
        kind (Kind): GRAPH bins (t, X(t)), RANGE bins X(t).
        edges: Bin edges per axis.
        counts (numpy.ndarray): Integer point counts per cell.
        n_points (int): Total lattice points, binned or not.
        overflow (int): Points outside the bounds.
    """
    kind: Kind
    edges: Tuple[np.ndarray, ...]
    counts: np.ndarray
    n_points: int
    overflow: int

    @property
    def bounds(self) -> Tuple[Tuple[float, float], ...]:
        return tuple((float(e[0]), float(e[-1])) for e in self.edges)

    @property
    def cells(self) -> Tuple[int, ...]:
        return self.counts.shape

    @property
    def mass(self) -> np.ndarray:
        return self.counts / self.n_points

    @property
    def overflow_mass(self) -> float:
        return self.overflow / self.n_points


def _default_bounds(values: np.ndarray) -> List[Tuple[float, float]]:
    bounds = []
    for lo, hi in zip(values.min(axis=0), values.max(axis=0)):
        if lo == hi:
            lo, hi = lo - 0.5, hi + 0.5
        bounds.append((float(lo), float(hi)))
    return bounds


def _histogram_axes(path: FieldPath, kind: Kind, bounds, cells):
    if kind == Kind.GRAPH:
        sample = path.graph_points()
        axes = [(0.0, 1.0)] * path.d + [tuple(b) for b in bounds]
    else:
        sample = path.range_points()
        axes = [tuple(b) for b in bounds]
    if len(axes) != sample.shape[1]:
        raise DomainError('expected {} spatial bounds, got {}'.format(path.m, len(bounds)))
    cells = [int(cells)] * len(axes) if np.isscalar(cells) else [int(c) for c in cells]
    if len(cells) != len(axes):
        raise DomainError('expected {} cell counts, got {}'.format(len(axes), len(cells)))
    if min(cells) < 2:
        raise DomainError('need at least 2 cells per axis, got {}'.format(cells))
    for lo, hi in axes:
        if not lo < hi:
            raise DomainError('bounds must satisfy lo < hi, got ({}, {})'.format(lo, hi))
    edges = tuple(np.linspace(lo, hi, c + 1) for (lo, hi), c in zip(axes, cells))
    return sample, edges


def _bin(sample: np.ndarray, edges) -> Tuple[np.ndarray, int]:
    counts, _ = np.histogramdd(sample, bins=edges)
    counts = counts.astype(np.int64)
    return counts, sample.shape[0] - int(counts.sum())


def occupation_histogram(path: FieldPath, kind: Kind = Kind.RANGE, bounds: Optional[Sequence] = None,
                         cells: Union[int, Sequence[int]] = 16) -> OccupationHistogram:
    """Bin a path's occupation measure.

    Args:
        path (FieldPath): Sample path.
        kind (Kind): GRAPH or RANGE.
        bounds: Spatial box as m pairs (lo, hi). The parameter axes of a
            graph histogram always span [0, 1]. Defaults to the path's extent.
        cells: Cells per axis, an int or one count per axis.

    Returns:
        OccupationHistogram: counts + overflow equals the number of lattice points.
    """
    if path.values.shape[0] == 0:
        raise DomainError('cannot bin an empty path')
    if bounds is None:
        bounds = _default_bounds(path.values)
    sample, edges = _histogram_axes(path, kind, bounds, cells)
    counts, overflow = _bin(sample, edges)
    if overflow:
        _log.debug('%d of %d points fall outside the histogram bounds', overflow, sample.shape[0])
    return OccupationHistogram(kind=kind, edges=edges, counts=counts, n_points=sample.shape[0], overflow=overflow)


def mean_occupation_histogram(paths: Sequence[FieldPath], kind: Kind = Kind.RANGE, bounds: Optional[Sequence] = None,
                              cells: Union[int, Sequence[int]] = 16) -> OccupationHistogram:
    """Replica average of occupation histograms on common bins, an estimate of the intensity measure."""
    if not paths:
        raise DomainError('at least one path is needed')
    if bounds is None:
        bounds = _default_bounds(np.vstack([p.values for p in paths]))
    total, overflow, n_points, edges = None, 0, 0, None
    for path in paths:
        sample, edges = _histogram_axes(path, kind, bounds, cells)
        counts, outside = _bin(sample, edges)
        total = counts if total is None else total + counts
        overflow += outside
        n_points += sample.shape[0]
    return OccupationHistogram(kind=kind, edges=edges, counts=total, n_points=n_points, overflow=overflow)


@dataclass(frozen=True)
class FitPolicy:
    """
    Which box-count scales enter the slope fit.

    Attributes:
        drop_coarse (int): Coarsest scales discarded.
        drop_fine (int): Finest scales discarded.
        saturation (float): Scales whose count exceeds this fraction of the
            number of distinct points are also discarded.
    """
    drop_coarse: int = 1
    drop_fine: int = 2
    saturation: float = 0.125

    @classmethod
    def for_kind(cls, kind: Kind) -> 'FitPolicy':
        """Default policy per cloud kind: ranges drop the three coarsest scales, graphs only the coarsest."""
        return cls(drop_coarse=3) if kind == Kind.RANGE else cls()


@dataclass(frozen=True)
class BoxCountReport:
    """
    Attributes:
        scales: Box sides ε = 2^-j, coarse to fine.
        counts: Occupied boxes N(ε).
        slope (float): Least-squares slope of log N against log 1/ε.
        fit_range: Indices into `scales` used by the fit.
        residual (float): Root-mean-square fit residual.
        degenerate (bool): All points coincide.
    """
    scales: Tuple[float, ...]
    counts: Tuple[int, ...]
    slope: float
    fit_range: Tuple[int, ...]
    residual: float
    degenerate: bool = False


def _occupied_boxes(points: np.ndarray, origin: np.ndarray, extent: np.ndarray, eps: float) -> int:
    index = np.floor((points - origin) / eps)
    # the top face belongs to the last box
    last = np.maximum(np.ceil(extent / eps) - 1.0, 0.0)
    index = np.minimum(index, last).astype(np.int64)
    return int(np.unique(index, axis=0).shape[0])


def box_count_dimension(points, scales: Sequence[int] = DEFAULT_BOX_SCALES,
                        policy: Optional[FitPolicy] = None) -> BoxCountReport:
    """Box-counting dimension of a finite point cloud.

    Boxes are anchored at the coordinate-wise minimum. The result does not
    depend on point order or on duplicated points.

    Args:
        points: Array of shape (N, k), N >= 1000.
        scales: Increasing dyadic exponents j, at least 4.
        policy (Optional[FitPolicy]): Scale selection; defaults to FitPolicy().

    Returns:
        BoxCountReport:
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points[:, None]
    if points.shape[0] < MIN_BOX_POINTS:
        raise DomainError('box counting needs at least {} points, got {}'.format(MIN_BOX_POINTS, points.shape[0]))
    scales = [int(j) for j in scales]
    if len(scales) < 4 or any(b <= a for a, b in zip(scales, scales[1:])):
        raise DomainError('need at least 4 increasing dyadic exponents, got {}'.format(scales))
    if not np.all(np.isfinite(points)):
        raise DomainError('points must be finite')
    policy = policy or FitPolicy()

    eps = [2.0 ** -j for j in scales]
    origin = points.min(axis=0)
    extent = points.max(axis=0) - origin
    if not np.any(extent > 0.0):
        return BoxCountReport(scales=tuple(eps), counts=(1,) * len(eps), slope=0.0, fit_range=(), residual=0.0,
                              degenerate=True)

    counts = [_occupied_boxes(points, origin, extent, e) for e in eps]
    distinct = np.unique(points, axis=0).shape[0]
    selected = list(range(policy.drop_coarse, len(eps) - policy.drop_fine))
    fit = [i for i in selected if counts[i] <= policy.saturation * distinct]
    if len(fit) < 2:
        raise DomainError('fewer than 2 unsaturated scales; use more points or coarser scales')
    if len(fit) < len(selected):
        _log.debug('box count fit truncated to %d of %d scales by saturation', len(fit), len(selected))

    x = np.array([-math.log(eps[i]) for i in fit])
    y = np.array([math.log(counts[i]) for i in fit])
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return BoxCountReport(scales=tuple(eps), counts=tuple(counts), slope=float(slope), fit_range=tuple(fit),
                          residual=residual)


@dataclass(frozen=True)
class EnergyEstimate:
    """
    Attributes:
        value (float): Mean of the γ-kernel over pairs of distinct lattice points.
        pairs (int): Pairs evaluated.
        duplicate_pairs (int): Pairs at distance 0, capped at spacing^-γ.
        exhaustive (bool): All pairs were evaluated.
    """
    value: float
    pairs: int
    duplicate_pairs: int
    exhaustive: bool


def _distances(points, values, i, j, kind) -> np.ndarray:
    dist = np.linalg.norm(values[i] - values[j], axis=1)
    if kind == Kind.GRAPH:
        dist = dist + np.linalg.norm(points[i] - points[j], axis=1)
    return dist


def _kernel(dist: np.ndarray, spacing: float, gammas: np.ndarray) -> Tuple[np.ndarray, int]:
    duplicate = dist == 0.0
    safe = np.where(duplicate, spacing, dist)
    return safe[:, None] ** (-gammas[None, :]), int(duplicate.sum())


def _pair_energies(points: np.ndarray, values: np.ndarray, spacing: float, gammas: np.ndarray, kind: Kind,
                   pair_budget: int, seed: int, stream: int, workers: Optional[int]):
    N = values.shape[0]
    total = N * (N - 1) // 2
    if total == 0:
        raise DomainError('energy needs at least two points')

    if pair_budget < N - 1:
        # too few pairs to visit every lag: plain uniform pairs
        rng = replica_generator(seed, stream * _STREAM_STRIDE)
        i = rng.integers(N, size=pair_budget)
        j = (i + rng.integers(1, N, size=pair_budget)) % N
        terms, dups = _kernel(_distances(points, values, i, j, kind), spacing, gammas)
        return terms.mean(axis=0), pair_budget, dups, False

    exhaustive = total <= pair_budget
    per_lag = None if exhaustive else pair_budget // (N - 1)
    lags = np.arange(1, N)
    chunks = [lags[k:k + _LAGS_PER_TASK] for k in range(0, lags.shape[0], _LAGS_PER_TASK)]

    def run(task):
        index, chunk = task
        rng = replica_generator(seed, stream * _STREAM_STRIDE + index)
        means = np.empty((chunk.shape[0], gammas.shape[0]))
        pairs = dups = 0
        for row, lag in enumerate(chunk):
            size = N - lag
            i = np.arange(size) if per_lag is None or per_lag >= size else rng.choice(size, per_lag, replace=False)
            terms, dup = _kernel(_distances(points, values, i, i + lag, kind), spacing, gammas)
            means[row] = terms.mean(axis=0)
            pairs += i.shape[0]
            dups += dup
        return means, pairs, dups

    results = map_ordered(run, list(enumerate(chunks)), workers)
    means = np.vstack([r[0] for r in results])
    weights = (N - lags).astype(np.float64)
    value = weights @ means / weights.sum()
    return value, sum(r[1] for r in results), sum(r[2] for r in results), exhaustive


def energy_integral(path: FieldPath, gamma: float, pair_budget: int = DEFAULT_PAIR_BUDGET, kind: Kind = Kind.GRAPH,
                    seed: int = 0, workers: Optional[int] = None) -> EnergyEstimate:
    """Estimate the γ-energy of the path's occupation measure.

    The kernel is (‖t_i - t_j‖ + ‖X_i - X_j‖)^-γ for the graph and
    ‖X_i - X_j‖^-γ for the range, averaged over pairs i != j. All pairs are
    used when they fit in `pair_budget`; otherwise each index lag is
    sampled evenly and weighted by its pair count.

    Args:
        path (FieldPath): Sample path with at least two points.
        gamma (float): Exponent, >= 0.
        pair_budget (int): Largest number of pairs to evaluate.
        kind (Kind): GRAPH or RANGE.
        seed (int): Seed for pair sampling.
        workers (Optional[int]): Worker threads.

    Returns:
        EnergyEstimate:
    """
    if not gamma >= 0.0:
        raise DomainError('gamma must be >= 0, got {!r}'.format(gamma))
    if pair_budget < 1:
        raise DomainError('pair budget must be positive')
    if path.values.shape[0] < 2:
        raise DomainError('energy needs at least two lattice points')
    values, pairs, dups, exhaustive = _pair_energies(path.points, path.values, path.spacing,
                                                     np.array([float(gamma)]), kind, int(pair_budget), seed, 0,
                                                     workers)
    if dups:
        _log.debug('%d duplicate pairs capped at spacing^-%g', dups, gamma)
    return EnergyEstimate(value=float(values[0]), pairs=pairs, duplicate_pairs=dups, exhaustive=exhaustive)


@dataclass(frozen=True)
class BlowupRow:
    """
    Attributes:
        gamma (float): Energy exponent.
        estimates: Replica-mean energy per lattice level, coarse to fine.
        growth (Optional[float]): Geometric mean of successive increment
            ratios, None when an increment is not positive.
        divergent (bool): Flagged as diverging under refinement.
    """
    gamma: float
    estimates: Tuple[float, ...]
    growth: Optional[float]
    divergent: bool


@dataclass(frozen=True)
class BlowupScan:
    """
    Attributes:
        spacings: Lattice spacing per level, coarse to fine.
        rows: One row per γ, ascending.
        gamma_star (Optional[float]): Smallest divergent γ.
    """
    spacings: Tuple[float, ...]
    rows: Tuple[BlowupRow, ...]
    gamma_star: Optional[float]


def _sublattice(path: FieldPath, stride: int):
    shape = (path.n,) * path.d
    grid = np.ix_(*([np.arange(0, path.n, stride)] * path.d))
    points = path.points.reshape(shape + (path.d,))[grid].reshape(-1, path.d)
    values = path.values.reshape(shape + (path.m,))[grid].reshape(-1, path.m)
    return points, values, stride * path.spacing


def _growth(estimates: Sequence[float]) -> Optional[float]:
    increments = np.diff(estimates)
    if np.any(increments <= 0.0):
        return None
    return float(np.exp(np.mean(np.log(increments[1:] / increments[:-1]))))


def energy_blowup_scan(paths: Union[FieldPath, Sequence[FieldPath]], gamma_grid: Sequence[float],
                       refinements: int = 3, kind: Kind = Kind.GRAPH, pair_budget: int = DEFAULT_PAIR_BUDGET,
                       seed: int = 0, workers: Optional[int] = None) -> BlowupScan:
    """Track γ-energies across dyadic lattice refinements.

    Levels use every 2^R-th, ..., 2nd and every lattice point. When the
    energy converges its increments shrink geometrically under refinement;
    γ is flagged divergent when successive increments shrink by less than
    a factor 0.97 on average. Flags are closed upwards in γ.

    Args:
        paths: One path or replicas of one model on a common lattice.
        gamma_grid: Exponents to scan, >= 0.
        refinements (int): Refinement steps R >= 2.

    Returns:
        BlowupScan:
    """
    if isinstance(paths, FieldPath):
        paths = [paths]
    if not paths:
        raise DomainError('at least one path is needed')
    refinements = int(refinements)
    if refinements < 2:
        raise DomainError('need at least 2 refinement steps, got {}'.format(refinements))
    n = paths[0].n
    if n // 2 ** refinements < 2:
        raise DomainError('lattice of size {} is too small for {} refinements'.format(n, refinements))
    gammas = np.array(sorted(float(g) for g in gamma_grid))
    if gammas.shape[0] == 0 or gammas[0] < 0.0:
        raise DomainError('gamma grid must be non-empty and >= 0')

    strides = [2 ** r for r in range(refinements, -1, -1)]
    levels, spacings = [], []
    for level, stride in enumerate(strides):
        per_path = []
        for index, path in enumerate(paths):
            points, values, spacing = _sublattice(path, stride)
            energies, _, _, _ = _pair_energies(points, values, spacing, gammas, kind, pair_budget, seed,
                                               index * len(strides) + level, workers)
            per_path.append(energies)
        levels.append(np.mean(per_path, axis=0))
        spacings.append(spacing)
        _log.debug('energy level %d (stride %d) done', level, stride)

    table = np.array(levels).T
    rows, flagged = [], False
    for gamma, estimates in zip(gammas, table):
        growth = _growth(estimates)
        flagged = flagged or (gamma > 0.0 and growth is not None and growth >= DIVERGENCE_RATIO)
        rows.append(BlowupRow(gamma=float(gamma), estimates=tuple(float(e) for e in estimates), growth=growth,
                              divergent=flagged))
    gamma_star = next((r.gamma for r in rows if r.divergent), None)
    return BlowupScan(spacings=tuple(spacings), rows=tuple(rows), gamma_star=gamma_star)


@dataclass(frozen=True)
class DensityProbeReport:
    """
    Heuristic check that marginal densities stay bounded on the annulus
    [-1,1]^{d+m} minus its image under c^{E⊕D}. A finite maximum suggests
    the intensity condition holds; it proves nothing.

    Attributes:
        sup (float): Largest density estimate found, inf when unbounded.
        t: Parameter point of the maximum.
        x: Value point of the maximum.
        per_t: (t, max density over the annulus section) per grid point.
        unbounded (bool): The marginal law has no density.
    """
    sup: float
    t: Optional[Tuple[float, ...]]
    x: Optional[Tuple[float, ...]]
    per_t: Tuple[Tuple[Tuple[float, ...], float], ...]
    unbounded: bool

    heuristic = True


def _value_grid(m: int) -> np.ndarray:
    if m == 1:
        return np.linspace(-1.0, 1.0, 201)[:, None]
    return lattice_points(41, m) * 2.0 - 1.0


def _in_cube(points: np.ndarray) -> np.ndarray:
    return np.all(np.abs(points) <= 1.0 + 1e-12, axis=-1)


def annulus_time_grid(pair: ExponentPair) -> List[np.ndarray]:
    """Default parameter points of :func:`density_sup_probe`, along the first axis.

    DEFAULT_PROBE_TIMES, plus the point just past the edge of U([-1,1]^d),
    the first point whose whole value section lies in the annulus.
    """
    axis = np.eye(pair.d)[0]
    edge = 1.0 / float(np.max(np.abs(np.linalg.solve(pair.U, axis))))
    times = set(DEFAULT_PROBE_TIMES)
    if edge * (1.0 + EDGE_OFFSET) <= 1.0:
        times.add(edge * (1.0 + EDGE_OFFSET))
    return [axis * t for t in sorted(times)]


def density_sup_probe(model, pair: ExponentPair, samples_per_t: int = 20000, t_grid: Optional[Sequence] = None,
                      seed: int = 0, workers: Optional[int] = None) -> DensityProbeReport:
    """Estimate sup p_t(x) over the annulus of `pair` by Gaussian kernel density estimation.

    For each t the marginal X(t) is sampled from `model.sample_marginal`,
    samples outside [-1.5, 1.5]^m are dropped and the Scott-rule estimate on
    the rest is rescaled by the kept fraction.

    Args:
        model: Any fields model with `d`, `m` and `sample_marginal`.
        pair (ExponentPair): Exponents and scale c defining the annulus.
        samples_per_t (int): Marginal samples per grid point.
        t_grid: Parameter points in [-1, 1]^d, avoiding 0. Defaults to
            :func:`annulus_time_grid`.

    Returns:
        DensityProbeReport:
    """
    if pair.d != model.d or pair.m != model.m:
        raise DomainError('pair has (d, m) = ({}, {}), model has ({}, {})'.format(pair.d, pair.m, model.d, model.m))
    if t_grid is None:
        t_grid = annulus_time_grid(pair)
    t_grid = [np.atleast_1d(np.asarray(t, dtype=np.float64)) for t in t_grid]
    for t in t_grid:
        if not np.any(t != 0.0) or not _in_cube(t):
            raise DomainError('probe times must be nonzero points of [-1, 1]^d, got {}'.format(t.tolist()))

    U_inv = np.linalg.inv(pair.U)
    V_inv = np.linalg.inv(pair.V)
    x_grid = _value_grid(model.m)
    x_outside_inner = ~_in_cube(x_grid @ V_inv.T)

    def section(t):
        if _in_cube(U_inv @ t):
            return x_outside_inner
        return np.ones(x_grid.shape[0], dtype=bool)

    if not any(section(t).any() for t in t_grid):
        raise DomainError('annulus is empty on the probe grid for c={}'.format(pair.c))

    def probe(task):
        index, t = task
        mask = section(t)
        if not mask.any():
            return None
        sample = model.sample_marginal(t, samples_per_t, replica_generator(seed, index))
        inside = np.all(np.abs(sample) <= PROBE_WINDOW, axis=1)
        kept = sample[inside]
        if kept.shape[0] <= model.m or np.any(np.ptp(kept, axis=0) == 0.0):
            return math.inf, None
        try:
            kde = scipy.stats.gaussian_kde(kept.T)
        except np.linalg.LinAlgError:
            return math.inf, None
        density = kde(x_grid[mask].T) * (kept.shape[0] / sample.shape[0])
        best = int(np.argmax(density))
        return float(density[best]), tuple(x_grid[mask][best].tolist())

    results = map_ordered(probe, list(enumerate(t_grid)), workers)
    per_t, best = [], (-math.inf, None, None)
    for t, result in zip(t_grid, results):
        if result is None:
            continue
        value, x = result
        per_t.append((tuple(t.tolist()), value))
        if value > best[0]:
            best = (value, tuple(t.tolist()), x)
    unbounded = math.isinf(best[0])
    if unbounded:
        _log.warning('marginal law has no density at t=%s', best[1])
    return DensityProbeReport(sup=best[0], t=best[1], x=best[2], per_t=tuple(per_t), unbounded=unbounded)


@dataclass(frozen=True)
class FrostmanMoment:
    """
    Attributes:
        value (float): Estimate of the integral over [0,1]^d of E[(‖t‖ + ‖X(t)‖)^-γ].
        stderr (float): Monte Carlo standard error.
    """
    value: float
    stderr: float


def frostman_moment(model, gamma: float, samples: int = 4096, t_grid: Optional[Sequence] = None, seed: int = 0,
                    workers: Optional[int] = None) -> FrostmanMoment:
    """Estimate the graph moment whose finiteness below the graph exponent gives the lower bound.

    The integral over t is a midpoint rule on `t_grid`, by default 64
    midpoints per axis (8 for d = 2).
    """
    if not gamma >= 0.0:
        raise DomainError('gamma must be >= 0, got {!r}'.format(gamma))
    if t_grid is None:
        per_axis = 64 if model.d == 1 else 8
        axis = (np.arange(per_axis) + 0.5) / per_axis
        t_grid = np.stack([g.ravel() for g in np.meshgrid(*([axis] * model.d), indexing='ij')], axis=-1)
    t_grid = [np.atleast_1d(np.asarray(t, dtype=np.float64)) for t in t_grid]

    def moment(task):
        index, t = task
        x = model.sample_marginal(t, samples, replica_generator(seed, index))
        terms = (np.linalg.norm(t) + np.linalg.norm(x, axis=1)) ** -float(gamma)
        return terms.mean(), terms.var() / samples

    results = map_ordered(moment, list(enumerate(t_grid)), workers)
    means = np.array([r[0] for r in results])
    if not np.all(np.isfinite(means)):
        raise NumericError('moment is not finite', {'gamma': gamma})
    variances = np.array([r[1] for r in results])
    return FrostmanMoment(value=float(means.mean()), stderr=float(math.sqrt(variances.sum()) / len(results)))
