"""
Dense real-matrix services: matrix powers c^E, eigenvalue real-part spectra,
spectral decomposition into invariant subspaces, generalized polar
coordinates and log-domain singular values of high matrix powers.
"""
# SPDX-License-Identifier: Apache-2.0.

from dataclasses import dataclass, field
import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from affdim.exceptions import DomainError, NumericError

_log = logging.getLogger(__name__)

Spectrum = Tuple[Tuple[float, int], ...]


def as_square_matrix(M, name: str = 'matrix') -> np.ndarray:
    """
    Returns `M` as a float64 square array, raising :class:`DomainError` if it
    is not square or has non-finite entries. Scalars become 1×1 matrices.
    """
    a = np.array(M, dtype=np.float64)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DomainError('{} must be a non-empty square matrix, got shape {}'.format(name, a.shape))
    if not np.all(np.isfinite(a)):
        raise DomainError('{} has non-finite entries'.format(name))
    return a


def default_cluster_tol(M) -> float:
    """Default eigenvalue clustering tolerance, 1e-9·(1 + ‖M‖₂)."""
    return 1e-9 * (1.0 + float(np.linalg.norm(M, 2)))


def matrix_power_scale(E, c: float) -> np.ndarray:
    """Compute c^E = exp(ln(c)·E).

    Uses scipy's scaling-and-squaring Padé exponential. Any positive `c` is
    accepted; scales in (0, 1) give the contracting powers used throughout.

    Args:
        E: Square matrix.
        c (float): Positive scale.

    Returns:
        numpy.ndarray: c^E.
    """
    E = as_square_matrix(E, 'E')
    c = float(c)
    if not (math.isfinite(c) and c > 0.0):
        raise DomainError('scale must be a positive finite real, got {!r}'.format(c))
    if c == 1.0:
        return np.eye(E.shape[0])
    return scipy.linalg.expm(math.log(c) * E)


def _eigvals(M: np.ndarray) -> np.ndarray:
    try:
        values = scipy.linalg.eigvals(M)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise NumericError('eigenvalue solver failed', {'order': M.shape[0], 'error': str(e)})
    if not np.all(np.isfinite(values)):
        raise NumericError('eigenvalue solver returned non-finite values', {'order': M.shape[0]})
    return values


def _cluster(values: np.ndarray, tol: float) -> Spectrum:
    # chains of neighbours closer than tol collapse to their mean
    groups = [[values[0]]]
    for v in values[1:]:
        if v - groups[-1][-1] <= tol:
            groups[-1].append(v)
        else:
            groups.append([v])
    return tuple((math.fsum(g) / len(g), len(g)) for g in groups)


def eig_real_spectrum(M, cluster_tol: Optional[float] = None) -> Spectrum:
    """Clustered real parts of the eigenvalues of `M`.

    Args:
        M: Square matrix.
        cluster_tol (Optional[float]): Real parts closer than this merge into
            one entry. Defaults to :func:`default_cluster_tol`.

    Returns:
        Ascending tuple of (real part, multiplicity); multiplicities sum to the order of `M`.
    """
    M = as_square_matrix(M, 'M')
    if cluster_tol is None:
        cluster_tol = default_cluster_tol(M)
    if not cluster_tol > 0:
        raise DomainError('cluster tolerance must be positive')
    return _cluster(np.sort(_eigvals(M).real), cluster_tol)


def _expand(spectrum: Spectrum) -> Tuple[float, ...]:
    return tuple(value for value, mult in spectrum for _ in range(mult))


def _normalize_spectrum(values: Sequence[float], mults: Optional[Sequence[int]], name: str) -> Spectrum:
    values = [float(v) for v in values]
    if not values:
        raise DomainError('{} spectrum is empty'.format(name))
    if mults is None:
        mults = [1] * len(values)
    if len(mults) != len(values):
        raise DomainError('{} has {} values but {} multiplicities'.format(name, len(values), len(mults)))
    merged = {}
    for value, mult in zip(values, mults):
        if int(mult) != mult or mult < 1:
            raise DomainError('{} multiplicities must be positive integers, got {!r}'.format(name, mult))
        merged[value] = merged.get(value, 0) + int(mult)
    return tuple(sorted(merged.items()))


@dataclass(frozen=True)
class SpectrumSummary:
    """
    Real-part spectra of an exponent pair.

    Args:
        a: Ascending distinct real parts of the eigenvalues of E, each with its multiplicity μ.
        lam: Ascending distinct real parts of the eigenvalues of D, each with its multiplicity.
        q (float): trace(E).

    Attributes:
        gamma: Multiplicity-expanded ascending union of `a` and `lam`, length d+m.
    """
    a: Spectrum
    lam: Spectrum
    q: float
    gamma: Tuple[float, ...] = field(init=False)

    def __post_init__(self):
        for name, spectrum in (('a', self.a), ('lambda', self.lam)):
            if not spectrum:
                raise DomainError('{} spectrum is empty'.format(name))
            previous = None
            for value, mult in spectrum:
                if not (math.isfinite(value) and value > 0):
                    raise DomainError('{} entries must be positive, got {!r}'.format(name, value))
                if int(mult) != mult or mult < 1:
                    raise DomainError('{} multiplicities must be positive integers'.format(name))
                if previous is not None and value <= previous:
                    raise DomainError('{} must be strictly ascending'.format(name))
                previous = value
        if not math.isfinite(self.q):
            raise DomainError('q must be finite')
        total = math.fsum(_expand(self.a))
        if abs(self.q - total) > 1e-8 * (1.0 + abs(self.q)):
            raise DomainError('q={!r} differs from the weighted sum of a={!r}'.format(self.q, total))
        object.__setattr__(self, 'gamma', tuple(sorted(_expand(self.a) + _expand(self.lam))))

    @classmethod
    def from_spectra(cls, a, lam, a_mult=None, lam_mult=None) -> 'SpectrumSummary':
        """Build a summary from inline real parts; q is the weighted sum of `a`."""
        a = _normalize_spectrum(a, a_mult, 'a')
        lam = _normalize_spectrum(lam, lam_mult, 'lambda')
        return cls(a=a, lam=lam, q=math.fsum(_expand(a)))

    @property
    def d(self) -> int:
        return sum(mult for _, mult in self.a)

    @property
    def m(self) -> int:
        return sum(mult for _, mult in self.lam)

    @property
    def expanded_a(self) -> Tuple[float, ...]:
        return _expand(self.a)

    @property
    def expanded_lam(self) -> Tuple[float, ...]:
        return _expand(self.lam)


class ExponentPair:
    """
    Scaling exponents E (d×d) and D (m×m) of a self-affine field, with a scale c.

    The field obeys X(Ut) = V X(t) in distribution with U = c^E and V = c^D.

    Args:
        E: Time exponent. Every eigenvalue must have positive real part.
        D: Space exponent. Every eigenvalue must have positive real part.
        c (float): Scale in the open interval (0, 1).

    Attributes:
        E (numpy.ndarray): Time exponent.
        D (numpy.ndarray): Space exponent.
        c (float): Scale.
    """

    def __init__(self, E, D, c: float = 0.5):
        self.E = as_square_matrix(E, 'E')
        self.D = as_square_matrix(D, 'D')
        c = float(c)
        if not 0.0 < c < 1.0:
            raise DomainError('scale c must lie in (0, 1), got {!r}'.format(c))
        self.c = c
        for name, M in (('E', self.E), ('D', self.D)):
            lowest = float(np.min(_eigvals(M).real))
            if lowest <= 0.0:
                raise DomainError('eigenvalues of {} must have positive real parts, found {!r}'.format(name, lowest))

    def __repr__(self):
        return 'ExponentPair(E={}, D={}, c={!r})'.format(self.E.tolist(), self.D.tolist(), self.c)

    @property
    def d(self) -> int:
        return self.E.shape[0]

    @property
    def m(self) -> int:
        return self.D.shape[0]

    @property
    def q(self) -> float:
        """trace(E), so that det U = c^q."""
        return float(np.trace(self.E))

    @property
    def U(self) -> np.ndarray:
        return matrix_power_scale(self.E, self.c)

    @property
    def V(self) -> np.ndarray:
        return matrix_power_scale(self.D, self.c)

    @property
    def W(self) -> np.ndarray:
        """The block-diagonal graph operator U ⊕ V."""
        return scipy.linalg.block_diag(self.U, self.V)

    def with_scale(self, c: float) -> 'ExponentPair':
        return ExponentPair(self.E, self.D, c)


def spectrum_summary(pair: ExponentPair, cluster_tol: Optional[float] = None) -> SpectrumSummary:
    """Clustered real-part spectra of `pair.E` and `pair.D` with q = trace(E)."""
    a = eig_real_spectrum(pair.E, cluster_tol)
    lam = eig_real_spectrum(pair.D, cluster_tol)
    for name, spectrum in (('E', a), ('D', lam)):
        if spectrum[0][0] <= 0.0:
            raise DomainError('{} has an eigenvalue with nonpositive real part {!r}'.format(name, spectrum[0][0]))
    return SpectrumSummary(a=a, lam=lam, q=pair.q)


@dataclass(frozen=True)
class SpectralBlock:
    """
    One D-invariant subspace.

    Attributes:
        basis (numpy.ndarray): m×k array whose columns span the subspace.
        real_part (float): Common real part of the eigenvalues on the subspace.
        dimension (int): k.
    """
    basis: np.ndarray
    real_part: float
    dimension: int


@dataclass(frozen=True)
class SpectralDecomposition:
    """
    Splitting of R^m into D-invariant subspaces grouped by eigenvalue real part.

    Attributes:
        blocks: Blocks in ascending real part.
        change_of_basis (numpy.ndarray): Columns are the block bases side by side.
        block_matrix (numpy.ndarray): D expressed in the adapted basis, block-diagonal.
    """
    blocks: Tuple[SpectralBlock, ...]
    change_of_basis: np.ndarray
    block_matrix: np.ndarray

    def reconstruct(self) -> np.ndarray:
        """changeOfBasis · blockMatrix · changeOfBasis⁻¹."""
        C = self.change_of_basis
        return np.linalg.solve(C.T, (C @ self.block_matrix).T).T


def spectral_decomposition(D, cluster_tol: Optional[float] = None) -> SpectralDecomposition:
    """Invariant subspaces of `D` grouped by clustered eigenvalue real part.

    Each cluster is split off with an ordered real Schur form followed by a
    Sylvester solve that removes the coupling to the remaining clusters.

    Args:
        D: Square matrix.
        cluster_tol (Optional[float]): As in :func:`eig_real_spectrum`.

    Returns:
        SpectralDecomposition:
    """
    D = as_square_matrix(D, 'D')
    if cluster_tol is None:
        cluster_tol = default_cluster_tol(D)
    clusters = eig_real_spectrum(D, cluster_tol)

    bases = []
    diagonal = []
    basis = np.eye(D.shape[0])
    remaining = D
    for index, (real_part, mult) in enumerate(clusters[:-1]):
        threshold = 0.5 * (real_part + clusters[index + 1][0])
        try:
            T, Z, sdim = scipy.linalg.schur(remaining, output='real', sort=lambda x, y: x <= threshold)
        except (np.linalg.LinAlgError, ValueError) as e:
            raise NumericError('Schur reordering failed; try a larger cluster tolerance',
                               {'real_part': real_part, 'cluster_tol': cluster_tol, 'error': str(e)})
        if sdim != mult:
            raise NumericError('Schur reordering separated {} eigenvalues instead of {}; '
                               'try a larger cluster tolerance'.format(sdim, mult),
                               {'real_part': real_part, 'cluster_tol': cluster_tol})

        T11, T12, T22 = T[:mult, :mult], T[:mult, mult:], T[mult:, mult:]
        try:
            X = scipy.linalg.solve_sylvester(T11, -T22, -T12)
        except (np.linalg.LinAlgError, ValueError) as e:
            raise NumericError('decoupling Sylvester equation failed; try a larger cluster tolerance',
                               {'real_part': real_part, 'error': str(e)})
        bases.append(basis @ Z[:, :mult])
        diagonal.append(T11)
        basis = basis @ (Z[:, :mult] @ X + Z[:, mult:])
        remaining = T22
    bases.append(basis)
    diagonal.append(remaining)

    decomposition = SpectralDecomposition(
        blocks=tuple(SpectralBlock(basis=b, real_part=rp, dimension=mult)
                     for b, (rp, mult) in zip(bases, clusters)),
        change_of_basis=np.hstack(bases),
        block_matrix=scipy.linalg.block_diag(*diagonal))

    error = np.linalg.norm(decomposition.reconstruct() - D)
    scale = np.linalg.norm(D)
    _log.debug('spectral decomposition: %d blocks, reconstruction error %.3e', len(clusters), error)
    if not error <= 1e-10 * scale:
        raise NumericError('spectral decomposition is ill-conditioned; try a larger cluster tolerance',
                           {'reconstruction_error': float(error), 'norm': float(scale)})
    return decomposition


def _adapted_gram(E: np.ndarray) -> np.ndarray:
    # Gram matrix P with E^T P + P E positive definite, so r -> ||r^-E t||_P is strictly decreasing.
    symmetric = 0.5 * (E + E.T)
    if np.min(np.linalg.eigvalsh(symmetric)) > 0.0:
        return np.eye(E.shape[0])
    P = scipy.linalg.solve_continuous_lyapunov(E.T, np.eye(E.shape[0]))
    return 0.5 * (P + P.T)


def polar_coordinates(E, t) -> Tuple[float, np.ndarray]:
    """Generalized polar coordinates t = ρ^E l.

    The radius solves ‖ρ^{-E} t‖_P = 1 by bisection in log ρ. The norm is
    Euclidean when E + Eᵀ is positive definite, otherwise it comes from the
    Lyapunov solution P of EᵀP + PE = I; either way the map is strictly
    monotone and the radius satisfies ρ(c^E t) = c·ρ(t).

    Args:
        E: d×d exponent, eigenvalues with positive real parts.
        t: Nonzero d-vector.

    Returns:
        (radius, direction) with the direction on the E-unit sphere.
    """
    E = as_square_matrix(E, 'E')
    t = np.asarray(t, dtype=np.float64).reshape(-1)
    if t.shape[0] != E.shape[0]:
        raise DomainError('t has length {}, E has order {}'.format(t.shape[0], E.shape[0]))
    if not np.all(np.isfinite(t)):
        raise DomainError('t has non-finite entries')
    if not np.any(t):
        raise DomainError('polar coordinates are undefined at t = 0')
    if float(np.min(_eigvals(E).real)) <= 0.0:
        raise DomainError('eigenvalues of E must have positive real parts')

    P = _adapted_gram(E)

    def excess(log_r):
        x = scipy.linalg.expm(-log_r * E) @ t
        return math.sqrt(float(x @ P @ x)) - 1.0

    lo = hi = 0.0
    step = 1.0
    if excess(0.0) > 0.0:
        while excess(hi) > 0.0:
            lo, hi = hi, hi + step
            step *= 2.0
            if step > 2.0 ** 12:
                raise NumericError('polar radius bracket failed', {'t': t.tolist()})
    else:
        while excess(lo) < 0.0:
            hi, lo = lo, lo - step
            step *= 2.0
            if step > 2.0 ** 12:
                raise NumericError('polar radius bracket failed', {'t': t.tolist()})

    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= 1e-15 * max(1.0, abs(mid)) or mid in (lo, hi):
            break
        if excess(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    log_radius = 0.5 * (lo + hi)
    return math.exp(log_radius), scipy.linalg.expm(-log_radius * E) @ t


def check_nonsingular(W: np.ndarray, name: str = 'W'):
    """Raise :class:`DomainError` when `W` is numerically singular."""
    sv = scipy.linalg.svdvals(W)
    if sv[-1] == 0.0 or sv[-1] <= W.shape[0] * np.finfo(np.float64).eps * sv[0]:
        raise DomainError('{} is singular'.format(name))


class LogSingularAccumulator:
    """
    Running estimate of the log singular values of W^k.

    W^k is never formed. Each step multiplies the current orthonormal frame
    by W and re-factorizes with QR; the logs of the |R| diagonals accumulate.
    Cost is O(k·n³).

    Args:
        W: Non-singular square matrix.

    Attributes:
        steps (int): Number of factors accumulated so far.
    """

    def __init__(self, W):
        self._W = as_square_matrix(W, 'W')
        check_nonsingular(self._W)
        n = self._W.shape[0]
        self._Q = np.eye(n)
        self._sums = np.zeros(n)
        self.steps = 0

    def advance(self, steps: int, record: bool = False) -> Optional[np.ndarray]:
        """Accumulate `steps` more factors of W.

        Args:
            steps (int): Number of factors.
            record (bool): If True, return the running sums after each step
                as an array of shape (steps, n).
        """
        W, Q, sums = self._W, self._Q, self._sums
        trajectory = np.empty((steps, W.shape[0])) if record else None
        for i in range(steps):
            Q, R = np.linalg.qr(W @ Q)
            diag = np.abs(np.diagonal(R))
            if np.any(diag == 0.0):
                raise DomainError('W is singular')
            sums += np.log(diag)
            if record:
                trajectory[i] = sums
        self._Q = Q
        self.steps += steps
        return trajectory

    @property
    def log_sums(self) -> np.ndarray:
        """Unsorted per-direction sums of log |R_ii| over all steps so far."""
        return self._sums.copy()


def log_singular_values_power(W, k: int) -> np.ndarray:
    """(1/k)·log singular values of W^k, ascending.

    Args:
        W: Non-singular square matrix.
        k (int): Positive power.

    Returns:
        numpy.ndarray: Length equals the order of `W`.
    """
    k = int(k)
    if k < 1:
        raise DomainError('power k must be a positive integer')
    accumulator = LogSingularAccumulator(W)
    accumulator.advance(k)
    return np.sort(accumulator.log_sums / k)
