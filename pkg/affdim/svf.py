"""
The singular value function φ_W(s), the affinity exponent s(W, x) found
numerically from the growth rate of φ_{W^k}, and its closed forms from the
real-part spectra of an exponent pair.
"""
# SPDX-License-Identifier: Apache-2.0.

from dataclasses import dataclass
from enum import IntEnum
import logging
import math
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from affdim.exceptions import DomainError, NumericError
from affdim.matrix import (
    ExponentPair,
    LogSingularAccumulator,
    SpectrumSummary,
    as_square_matrix,
    check_nonsingular,
    spectrum_summary,
)

_log = logging.getLogger(__name__)

DEFAULT_K_SCHEDULE = tuple(64 * 2 ** i for i in range(8))
"""Powers k = 64, 128, ..., 8192 at which the growth rate is estimated."""

DEFAULT_RATE_TOL = 1e-6
DEFAULT_S_TOL = 1e-6


class Kind(IntEnum):
    """Which set an exponent describes."""

    GRAPH = 0
    """Graph {(t, X(t))} in R^{d+m}."""

    RANGE = 1
    """Range {X(t)} in R^m."""


class CaseTag(IntEnum):
    INTERIOR = 0
    """Root found inside (0, n]."""

    SATURATED = 1
    """No root; the exponent is the full dimension n."""


class Method(IntEnum):
    CLOSED_FORM = 0  #:
    NUMERIC = 1  #:


@dataclass(frozen=True)
class SValResult:
    """
    An affinity exponent with its branch diagnostics.

    Args:
        s (float): The exponent.
        branch_index (int): Index r (graph) or ℓ (range) of the branch that fired.
            For numeric results, the integer n with n-1 < s <= n.
        case_tag (CaseTag): Interior or saturated.
        method (Method): Closed form or numeric.
        k_used (Optional[int]): Largest power used by the numeric path.
        residual (Optional[float]): growth_rate(W, s) - ln x for the numeric path.
    """
    s: float
    branch_index: int
    case_tag: CaseTag
    method: Method
    k_used: Optional[int] = None
    residual: Optional[float] = None


def _check_contracting(W) -> np.ndarray:
    W = as_square_matrix(W, 'W')
    check_nonsingular(W)
    radius = float(np.max(np.abs(scipy.linalg.eigvals(W))))
    if not radius < 1.0:
        raise DomainError('W is not contracting: spectral radius {!r} >= 1'.format(radius))
    return W


def _interpolated_sum(log_desc: np.ndarray, s: float) -> float:
    # log φ: full terms below ceil(s), fractional power of the next one
    m = max(1, math.ceil(s))
    return math.fsum(log_desc[:m - 1]) + (s - m + 1) * float(log_desc[m - 1])


def log_phi(W, s: float) -> float:
    """Logarithm of the singular value function φ_W(s).

    Args:
        W: Contracting non-singular square matrix.
        s (float): In (0, n].
    """
    W = _check_contracting(W)
    n = W.shape[0]
    if not 0.0 < s <= n:
        raise DomainError('s must lie in (0, {}], got {!r}'.format(n, s))
    return _interpolated_sum(np.log(scipy.linalg.svdvals(W)), s)


def phi(W, s: float) -> float:
    """Singular value function φ_W(s) = α_1⋯α_{m-1}·α_m^{s-m+1} with m-1 < s <= m."""
    return math.exp(log_phi(W, s))


def _check_schedule(k_schedule: Sequence[int]) -> Tuple[int, ...]:
    schedule = tuple(int(k) for k in k_schedule)
    if len(schedule) < 3 or schedule[0] < 2 or any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise DomainError('k schedule needs at least three strictly increasing powers >= 2')
    return schedule


def _limit_estimates(W: np.ndarray, schedule: Tuple[int, ...]) -> Iterator[Tuple[int, np.ndarray]]:
    """Yield (k, limit estimate) for every k after the first in `schedule`.

    For each k the per-direction growth is the least-squares slope of the
    accumulated QR log-diagonals over steps k..2k, weighted by a sine taper
    that vanishes just outside the window. Single directions inside a rotation
    or equal-modulus group oscillate with bounded amplitude; the taper keeps
    that oscillation out of the slope. Successive slopes are combined by a
    Richardson step that removes the 1/k term left by Jordan blocks.
    """
    accumulator = LogSingularAccumulator(W)
    history = np.empty((0, W.shape[0]))
    previous_k = previous_slopes = None
    for k in schedule:
        if accumulator.steps < 2 * k:
            steps = 2 * k - accumulator.steps
            history = np.vstack([history, accumulator.advance(steps, record=True)])
        window = history[k - 1:2 * k]
        x = np.arange(k, 2 * k + 1, dtype=np.float64)
        taper = np.sin(np.pi * np.arange(1, k + 2) / (k + 2))
        slopes = np.sort(np.polyfit(x - x.mean(), window, 1, w=taper)[0])[::-1]
        if previous_slopes is not None:
            yield k, (k * slopes - previous_k * previous_slopes) / (k - previous_k)
        previous_k, previous_slopes = k, slopes


def limit_log_spectrum(W, k_schedule: Sequence[int] = DEFAULT_K_SCHEDULE,
                       tol: float = DEFAULT_RATE_TOL) -> Tuple[np.ndarray, int]:
    """Limit of (1/k)·log singular values of W^k, descending.

    The schedule stops once the growth rates at every integer order, the
    cumulative sums of the spectrum, change by less than `tol`. Single
    entries inside a group of equal limits converge more slowly than the
    group's sum and are not compared.

    Args:
        W: Contracting non-singular square matrix.
        k_schedule: Increasing powers.
        tol (float): Convergence tolerance on the cumulative sums.

    Returns:
        (spectrum, k_used):
    """
    W = _check_contracting(W)
    previous = None
    schedule = _check_schedule(k_schedule)
    for k, limit in _limit_estimates(W, schedule):
        if previous is not None:
            change = float(np.max(np.abs(np.cumsum(limit) - np.cumsum(previous))))
            _log.debug('k=%d spectrum change %.3e', k, change)
            if change < tol:
                return limit, k
        previous = limit
    raise NumericError('growth rate did not converge within k_max={}'.format(schedule[-1]), {
        'last': [previous.tolist(), limit.tolist()],
    })


def growth_rate(W, r: float, k_schedule: Sequence[int] = DEFAULT_K_SCHEDULE,
                tol: float = DEFAULT_RATE_TOL) -> float:
    """lim (1/k)·log φ_{W^k}(r).

    Doubles k until two successive estimates of the rate at `r` differ by
    less than `tol`.

    Args:
        W: Contracting non-singular square matrix.
        r (float): In (0, n].
        k_schedule: Increasing powers at which the limit is estimated.
        tol (float): Convergence tolerance.
    """
    W = _check_contracting(W)
    n = W.shape[0]
    if not 0.0 < r <= n:
        raise DomainError('r must lie in (0, {}], got {!r}'.format(n, r))
    estimates = []
    schedule = _check_schedule(k_schedule)
    for k, limit in _limit_estimates(W, schedule):
        estimates.append(_interpolated_sum(limit, r))
        if len(estimates) > 1:
            change = abs(estimates[-1] - estimates[-2])
            _log.debug('k=%d rate change %.3e at r=%g', k, change, r)
            if change < tol:
                return estimates[-1]
    raise NumericError('growth rate did not converge within k_max={}'.format(schedule[-1]), {
        'r': r, 'last': estimates[-2:],
    })


def _root(spectrum: np.ndarray, target: float) -> Tuple[float, CaseTag]:
    n = spectrum.shape[0]

    def rate(s):
        return _interpolated_sum(spectrum, s)

    # a root at s = n up to rounding also counts as saturated
    if rate(n) - target > -1e-12 * max(1.0, abs(target)):
        return float(n), CaseTag.SATURATED
    lo, hi = 0.0, float(n)
    while hi - lo > 1e-13 * n:
        mid = 0.5 * (lo + hi)
        if rate(mid) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), CaseTag.INTERIOR


def s_numeric(W, x: float, tol: float = DEFAULT_S_TOL, k_schedule: Sequence[int] = DEFAULT_K_SCHEDULE,
              rate_tol: float = DEFAULT_RATE_TOL) -> SValResult:
    """The unique s with lim (1/k)·log φ_{W^k}(s) = ln x.

    Saturates at s = n when the rate at n does not fall below ln x. The
    schedule stops once the rate estimate at the current root moves by less
    than `rate_tol` between successive k.

    Args:
        W: Contracting non-singular square matrix.
        x (float): Target in (0, 1).
        tol (float): Bound on |residual|.
        k_schedule: Increasing powers for the rate estimate.
        rate_tol (float): Convergence tolerance of the rate estimate.

    Returns:
        SValResult:
    """
    x = float(x)
    if not 0.0 < x < 1.0:
        raise DomainError('x must lie in (0, 1), got {!r}'.format(x))
    W = _check_contracting(W)
    n = W.shape[0]
    target = math.log(x)

    previous = None
    schedule = _check_schedule(k_schedule)
    for k, spectrum in _limit_estimates(W, schedule):
        s, case = _root(spectrum, target)
        if previous is not None:
            change = abs(_interpolated_sum(spectrum, previous[1]) - _interpolated_sum(previous[0], previous[1]))
            _log.debug('k=%d rate change %.3e at root %.10f', k, change, s)
            if change < rate_tol:
                break
        previous = spectrum, s
    else:
        raise NumericError('growth rate did not converge within k_max={}'.format(schedule[-1]), {
            'last': [previous[1], s],
        })

    residual = _interpolated_sum(spectrum, s) - target
    if case == CaseTag.SATURATED:
        return SValResult(s=float(n), branch_index=n, case_tag=case, method=Method.NUMERIC, k_used=k,
                          residual=residual)
    if abs(residual) > tol:
        raise NumericError('bisection residual exceeds tolerance', {'s': s, 'residual': residual, 'tol': tol})
    return SValResult(s=s, branch_index=max(1, math.ceil(s)), case_tag=case, method=Method.NUMERIC,
                      k_used=k, residual=residual)


def s_closed_graph(summary: SpectrumSummary) -> SValResult:
    """Closed-form graph exponent s(c^{E⊕D}, c^q) from the merged spectrum γ."""
    gamma = summary.gamma
    q = summary.q
    for r in range(1, len(gamma) + 1):
        below = math.fsum(gamma[:r - 1])
        upto = math.fsum(gamma[:r])
        if below < q <= upto:
            s = float(r) if q == upto else (r - 1) + (q - below) / gamma[r - 1]
            return SValResult(s=s, branch_index=r, case_tag=CaseTag.INTERIOR, method=Method.CLOSED_FORM)

    total = math.fsum(gamma)
    if 0.0 < q and q - total <= 1e-12 * (1.0 + q):
        return SValResult(s=float(len(gamma)), branch_index=len(gamma), case_tag=CaseTag.INTERIOR,
                          method=Method.CLOSED_FORM)
    raise DomainError('malformed spectrum: q={!r} exceeds the sum of gamma {!r}'.format(q, total))


def s_closed_range(summary: SpectrumSummary) -> SValResult:
    """Closed-form range exponent s(c^D, c^q); saturates at m when q exceeds Σλ."""
    lam = summary.expanded_lam
    q = summary.q
    distinct = [value for value, _ in summary.lam]
    for l in range(1, len(lam) + 1):
        below = math.fsum(lam[:l - 1])
        upto = math.fsum(lam[:l])
        if below < q <= upto:
            top = lam[l - 1]
            if q == upto:
                s = float(l)
            else:
                s = (q + math.fsum(top - v for v in lam[:l])) / top
            return SValResult(s=s, branch_index=distinct.index(top) + 1, case_tag=CaseTag.INTERIOR,
                              method=Method.CLOSED_FORM)
    return SValResult(s=float(len(lam)), branch_index=len(distinct), case_tag=CaseTag.SATURATED,
                      method=Method.CLOSED_FORM)


def s_closed(summary: SpectrumSummary, kind: Kind) -> SValResult:
    return s_closed_graph(summary) if kind == Kind.GRAPH else s_closed_range(summary)


def s_numeric_pair(pair: ExponentPair, kind: Kind, tol: float = DEFAULT_S_TOL,
                   k_schedule: Sequence[int] = DEFAULT_K_SCHEDULE,
                   rate_tol: float = DEFAULT_RATE_TOL) -> SValResult:
    """Numeric exponent of an exponent pair: W = c^{E⊕D} (graph) or c^D (range), x = c^q."""
    W = pair.W if kind == Kind.GRAPH else pair.V
    x = math.exp(pair.q * math.log(pair.c))
    return s_numeric(W, x, tol=tol, k_schedule=k_schedule, rate_tol=rate_tol)


@dataclass(frozen=True)
class CInvarianceReport:
    """
    Numeric exponents of one pair across several scales.

    Attributes:
        kind (Kind): Graph or range.
        scales: Scales c evaluated.
        results: One SValResult per scale.
        spread (float): max s - min s.
        tol (float): Allowed spread.
        passed (bool): spread <= tol.
    """
    kind: Kind
    scales: Tuple[float, ...]
    results: Tuple[SValResult, ...]
    spread: float
    tol: float
    passed: bool


def c_invariance(pair: ExponentPair, kind: Kind, scales: Sequence[float] = (0.1, 0.5, 0.9),
                 tol: float = 1e-4, k_schedule: Sequence[int] = DEFAULT_K_SCHEDULE) -> CInvarianceReport:
    """Check that the numeric exponent does not depend on the scale c."""
    results = tuple(s_numeric_pair(pair.with_scale(c), kind, k_schedule=k_schedule) for c in scales)
    values = [r.s for r in results]
    spread = max(values) - min(values)
    if spread > tol:
        _log.warning('%s exponent varies by %.3e across scales %s', kind.name.lower(), spread, list(scales))
    return CInvarianceReport(kind=kind, scales=tuple(float(c) for c in scales), results=results,
                             spread=spread, tol=tol, passed=spread <= tol)


def closed_forms(pair: ExponentPair, cluster_tol: Optional[float] = None) -> Tuple[SValResult, SValResult]:
    """(graph, range) closed-form exponents of a pair."""
    summary = spectrum_summary(pair, cluster_tol)
    return s_closed_graph(summary), s_closed_range(summary)
