"""
Closed-form Hausdorff dimensions for operator-self-similar stable fields and
operator semistable Lévy processes, and the identity checks tying them to the
closed-form affinity exponents.
"""
# SPDX-License-Identifier: Apache-2.0.

from dataclasses import dataclass, field
from enum import IntEnum
import logging
import math
import re
from typing import Dict, Optional, Tuple, Union

from affdim.exceptions import DomainError, NotApplicableError
from affdim.matrix import ExponentPair, SpectrumSummary, spectrum_summary
from affdim.svf import CaseTag, Kind, SValResult, s_closed_graph, s_closed_range, s_numeric_pair

_log = logging.getLogger(__name__)

IDENTITY_TOL = 1e-12
NUMERIC_TOL = 1e-4


class Family(IntEnum):
    OSS_STABLE_GRAPH = 0
    """Graph of an operator-self-similar stable field."""

    OSS_STABLE_RANGE = 1
    """Range of an operator-self-similar stable field."""

    LEVY_GRAPH = 2
    """Graph of an operator semistable Lévy process."""

    LEVY_RANGE = 3
    """Range of an operator semistable Lévy process."""


@dataclass(frozen=True)
class DimensionFormulaResult:
    """
    A closed-form dimension with the branch that produced it.

    Args:
        value (float): Dimension.
        family (Family): Formula family.
        branch (str): Which case fired, including the index ℓ where one applies.
        validity: (premise, satisfied) pairs. Violations are reported, not fatal.
    """
    value: float
    family: Family
    branch: str
    validity: Tuple[Tuple[str, bool], ...] = ()

    @property
    def valid(self) -> bool:
        return all(ok for _, ok in self.validity)


def _oss_validity(summary: SpectrumSummary):
    return (('lambda_m < 1', summary.lam[-1][0] < 1.0), ('a_1 > 1', summary.a[0][0] > 1.0))


def _levy_validity(summary: SpectrumSummary):
    return (('lambda_1 >= 1/2', summary.lam[0][0] >= 0.5),)


def _lower_branch(lam: Tuple[float, ...], q: float) -> Tuple[float, int]:
    # ℓ with Σ_{i<ℓ} λ_i < q <= Σ_{i<=ℓ} λ_i over the expanded list
    for l in range(1, len(lam) + 1):
        below = math.fsum(lam[:l - 1])
        upto = math.fsum(lam[:l])
        if below < q <= upto:
            top = lam[l - 1]
            if q == upto:
                return float(l), l
            return (q + math.fsum(top - v for v in lam[:l])) / top, l
    raise DomainError('q={!r} exceeds the sum of lambda'.format(q))


def graph_dim_oss_stable(summary: SpectrumSummary) -> DimensionFormulaResult:
    """Graph dimension of an operator-self-similar stable field."""
    lam = summary.expanded_lam
    total = math.fsum(lam)
    validity = _oss_validity(summary)
    if summary.q <= total:
        value, l = _lower_branch(lam, summary.q)
        return DimensionFormulaResult(value, Family.OSS_STABLE_GRAPH, 'q <= sum(lambda), l={}'.format(l), validity)

    reversed_a = list(reversed(summary.a))
    for l in range(1, len(reversed_a) + 1):
        below = math.fsum(v for v, mult in reversed_a[:l - 1] for _ in range(mult))
        upto = math.fsum(v for v, mult in reversed_a[:l] for _ in range(mult))
        if below <= total < upto:
            pivot = reversed_a[l - 1][0]
            terms = [v / pivot for v, mult in reversed_a[:l] for _ in range(mult)]
            terms += [1.0 for _, mult in reversed_a[l:] for _ in range(mult)]
            terms += [1.0 - v / pivot for v in lam]
            return DimensionFormulaResult(math.fsum(terms), Family.OSS_STABLE_GRAPH,
                                          'q > sum(lambda), l={}'.format(l), validity)
    raise DomainError('malformed spectrum: no branch for q={!r}'.format(summary.q))


def range_dim_oss_stable(summary: SpectrumSummary) -> DimensionFormulaResult:
    """Range dimension of an operator-self-similar stable field."""
    lam = summary.expanded_lam
    validity = _oss_validity(summary)
    if math.fsum(lam) < summary.q:
        return DimensionFormulaResult(float(summary.m), Family.OSS_STABLE_RANGE, 'sum(lambda) < q, saturated', validity)
    value, l = _lower_branch(lam, summary.q)
    return DimensionFormulaResult(value, Family.OSS_STABLE_RANGE, 'q <= sum(lambda), l={}'.format(l), validity)


def _check_levy(summary: SpectrumSummary):
    if summary.d != 1:
        raise DomainError('Lévy formulas need d = 1, got d={}'.format(summary.d))
    if abs(summary.q - 1.0) > IDENTITY_TOL:
        raise DomainError('Lévy formulas need E = [1] (q = 1), got q={!r}'.format(summary.q))


def graph_dim_semistable_levy(summary: SpectrumSummary) -> DimensionFormulaResult:
    """Graph dimension of an operator semistable Lévy process.

    When D has a single distinct real part the second-case factor
    max(1/λ_2, 1) is taken as 1.
    """
    _check_levy(summary)
    lam1, m1 = summary.lam[0]
    inverse = 1.0 / lam1
    validity = _levy_validity(summary)
    if inverse <= m1:
        return DimensionFormulaResult(max(inverse, 1.0), Family.LEVY_GRAPH, '1/lambda_1 <= m_1', validity)
    factor = max(1.0 / summary.lam[1][0], 1.0) if len(summary.lam) > 1 else 1.0
    return DimensionFormulaResult(1.0 + factor * (1.0 - lam1), Family.LEVY_GRAPH, '1/lambda_1 > m_1', validity)


def range_dim_semistable_levy(summary: SpectrumSummary) -> DimensionFormulaResult:
    """Range dimension of an operator semistable Lévy process.

    Raises:
        NotApplicableError: when 1/λ_1 > m_1 >= 2.
    """
    _check_levy(summary)
    lam1, m1 = summary.lam[0]
    inverse = 1.0 / lam1
    validity = _levy_validity(summary)
    if inverse <= m1:
        return DimensionFormulaResult(inverse, Family.LEVY_RANGE, '1/lambda_1 <= m_1', validity)
    if m1 >= 2:
        raise NotApplicableError('Lévy range formula not applicable: 1/lambda_1={!r} > m_1={}'.format(inverse, m1))
    if summary.m >= 2:
        return DimensionFormulaResult(1.0 + (1.0 - lam1) / summary.lam[1][0], Family.LEVY_RANGE,
                                      '1/lambda_1 > m_1 = 1, m >= 2', validity)
    return DimensionFormulaResult(1.0, Family.LEVY_RANGE, '1/lambda_1 > m_1 = 1, m = 1', validity)


def range_lower_bound(summary: SpectrumSummary) -> float:
    """Almost-sure lower bound on the Hausdorff dimension of the range: the range exponent."""
    return s_closed_range(summary).s


def graph_equals_range(summary: SpectrumSummary) -> Tuple[bool, bool, str]:
    """Whether graph and range exponents must coincide.

    They do when λ_p <= a_1 and the range exponent is not saturated.

    Returns:
        (applies, equal, explanation):
    """
    graph = s_closed_graph(summary)
    rng = s_closed_range(summary)
    equal = _close(graph.s, rng.s, IDENTITY_TOL)
    if summary.lam[-1][0] > summary.a[0][0]:
        return False, equal, 'lambda_p > a_1'
    if rng.case_tag == CaseTag.SATURATED:
        return False, equal, 'range saturated at m={}; graph {} != range {}'.format(summary.m, graph.s, rng.s)
    return True, equal, 'lambda_p <= a_1 and range unsaturated'


def _close(x: float, y: float, tol: float) -> bool:
    return abs(x - y) <= tol * max(1.0, abs(x), abs(y))


@dataclass(frozen=True)
class IdentityCheck:
    """
    One comparison of the identity suite.

    Attributes:
        name (str): What is compared.
        lhs (float): Left value.
        rhs (float): Right value, NaN when not computable.
        holds (bool): Values agree within tolerance.
        required (bool): A failing check counts as a mismatch.
        note (str): Explanation for skipped or informational checks.
    """
    name: str
    lhs: float
    rhs: float
    holds: bool
    required: bool
    note: str = ''

    @property
    def key(self) -> str:
        """The name as a report key, e.g. 'graph_exponent_vs_levy_graph_formula'."""
        text = self.name.replace(' == ', ' vs ').replace('\u00e9', 'e').lower()
        return re.sub(r'[^a-z0-9]+', '_', text).strip('_')


@dataclass(frozen=True)
class IdentityReport:
    """
    Result of :func:`identity_suite`.

    Attributes:
        spectrum (SpectrumSummary): Spectrum checked.
        graph (SValResult): Closed-form graph exponent.
        range (SValResult): Closed-form range exponent.
        checks: Every comparison made.
        graph_equals_range (bool): The graph/range equality condition applies and holds.
        numeric_graph (Optional[SValResult]): Numeric graph exponent, when requested.
        numeric_range (Optional[SValResult]): Numeric range exponent, when requested.
    """
    spectrum: SpectrumSummary
    graph: SValResult
    range: SValResult
    checks: Tuple[IdentityCheck, ...]
    graph_equals_range: bool
    numeric_graph: Optional[SValResult] = None
    numeric_range: Optional[SValResult] = None

    @property
    def passed(self) -> bool:
        return all(c.holds for c in self.checks if c.required)

    @property
    def mismatches(self) -> Tuple[IdentityCheck, ...]:
        return tuple(c for c in self.checks if c.required and not c.holds)


def identity_suite(source: Union[ExponentPair, SpectrumSummary], numeric: bool = False,
                   cluster_tol: Optional[float] = None) -> IdentityReport:
    """Compare the closed-form exponents with the family formulas.

    Args:
        source: Exponent pair or a spectrum summary.
        numeric (bool): Also compare against the numeric exponents. Needs a pair.
        cluster_tol (Optional[float]): Eigenvalue clustering tolerance for pairs.

    Returns:
        IdentityReport: Mismatches are listed, never raised.
    """
    if isinstance(source, ExponentPair):
        summary = spectrum_summary(source, cluster_tol)
    else:
        summary = source
    graph = s_closed_graph(summary)
    rng = s_closed_range(summary)
    checks = []

    def compare(name, lhs, rhs, required=True, note='', tol=IDENTITY_TOL):
        checks.append(IdentityCheck(name, lhs, rhs, _close(lhs, rhs, tol), required, note))

    # the graph formula ranks every a above every lambda
    ordered = summary.lam[-1][0] <= summary.a[0][0]
    compare('graph exponent == oss-stable graph formula', graph.s, graph_dim_oss_stable(summary).value,
            required=ordered, note='' if ordered else 'lambda_p > a_1, informational')
    compare('range exponent == oss-stable range formula', rng.s, range_dim_oss_stable(summary).value)

    if summary.d == 1 and abs(summary.q - 1.0) <= IDENTITY_TOL:
        in_domain = summary.lam[0][0] >= 0.5
        note = '' if in_domain else 'lambda_1 < 1/2, informational'
        compare('graph exponent == Lévy graph formula', graph.s, graph_dim_semistable_levy(summary).value,
                required=in_domain, note=note)
        try:
            compare('range exponent == Lévy range formula', rng.s, range_dim_semistable_levy(summary).value,
                    required=in_domain, note=note)
        except NotApplicableError as e:
            checks.append(IdentityCheck('range exponent == Lévy range formula', rng.s, math.nan,
                                        holds=False, required=False, note=e.message))

    applies, equal, explanation = graph_equals_range(summary)
    checks.append(IdentityCheck('graph exponent == range exponent', graph.s, rng.s, equal, applies, explanation))

    numeric_graph = numeric_range = None
    if numeric:
        if not isinstance(source, ExponentPair):
            raise DomainError('numeric identity checks need an exponent pair')
        numeric_graph = s_numeric_pair(source, Kind.GRAPH)
        numeric_range = s_numeric_pair(source, Kind.RANGE)
        compare('graph exponent == numeric graph exponent', graph.s, numeric_graph.s, tol=NUMERIC_TOL)
        compare('range exponent == numeric range exponent', rng.s, numeric_range.s, tol=NUMERIC_TOL)

    report = IdentityReport(spectrum=summary, graph=graph, range=rng, checks=tuple(checks),
                            graph_equals_range=applies and equal, numeric_graph=numeric_graph,
                            numeric_range=numeric_range)
    for mismatch in report.mismatches:
        _log.warning('identity mismatch: %s (%r vs %r)', mismatch.name, mismatch.lhs, mismatch.rhs)
    return report


@dataclass
class DimensionReport:
    """
    Everything known about the dimensions of one exponent pair.

    Attributes:
        pair (ExponentPair): Exponents.
        identities (IdentityReport): Closed forms and identity checks.
        formulas: Family formula results that apply to the spectrum.
        numeric_graph (Optional[SValResult]): Numeric graph exponent.
        numeric_range (Optional[SValResult]): Numeric range exponent.
        empirical (dict): Estimates from sample paths, keyed by estimator name.
        tolerances (dict): Tolerances used for each comparison.
    """
    pair: ExponentPair
    identities: IdentityReport
    formulas: Tuple[DimensionFormulaResult, ...] = ()
    numeric_graph: Optional[SValResult] = None
    numeric_range: Optional[SValResult] = None
    empirical: Dict[str, float] = field(default_factory=dict)
    tolerances: Dict[str, float] = field(default_factory=dict)

    def to_sections(self) -> Dict[str, Dict[str, object]]:
        """Report sections for :func:`affdim.io.write_report`."""
        summary = self.identities.spectrum
        sections = {
            'input': {
                'E': self.pair.E.ravel(), 'D': self.pair.D.ravel(), 'c': self.pair.c,
                'd': summary.d, 'm': summary.m, 'q': summary.q, 'gamma': summary.gamma,
            },
            'closed': {
                'graph': self.identities.graph.s,
                'graph_branch': self.identities.graph.branch_index,
                'range': self.identities.range.s,
                'range_branch': self.identities.range.branch_index,
                'range_case': self.identities.range.case_tag,
                'graph_equals_range': self.identities.graph_equals_range,
            },
        }
        for result in self.formulas:
            sections['closed'][result.family.name.lower()] = result.value
            sections['closed'][result.family.name.lower() + '_branch'] = result.branch
        for name, result in (('numeric_graph', self.numeric_graph), ('numeric_range', self.numeric_range)):
            if result is not None:
                sections[name] = {'s': result.s, 'case': result.case_tag, 'k_used': result.k_used,
                                  'residual': result.residual}
        sections['identities'] = {c.key: c.holds for c in self.identities.checks}
        sections['identities']['passed'] = self.identities.passed
        if self.empirical:
            sections['empirical'] = dict(self.empirical)
        if self.tolerances:
            sections['tolerances'] = dict(self.tolerances)
        return sections


def applicable_formulas(summary: SpectrumSummary) -> Tuple[DimensionFormulaResult, ...]:
    """Every family formula defined for the spectrum."""
    results = [graph_dim_oss_stable(summary), range_dim_oss_stable(summary)]
    if summary.d == 1 and abs(summary.q - 1.0) <= IDENTITY_TOL:
        results.append(graph_dim_semistable_levy(summary))
        try:
            results.append(range_dim_semistable_levy(summary))
        except NotApplicableError as e:
            _log.info('%s', e.message)
    return tuple(results)


def build_dimension_report(pair: ExponentPair, numeric: bool = False, empirical: Optional[Dict[str, float]] = None,
                           cluster_tol: Optional[float] = None) -> DimensionReport:
    """Assemble closed forms, family formulas and optionally the numeric exponents of a pair.

    With `numeric` each numeric exponent is solved once and shared by the
    report and its identity checks.
    """
    identities = identity_suite(pair, numeric=numeric, cluster_tol=cluster_tol)
    report = DimensionReport(pair=pair, identities=identities,
                             formulas=applicable_formulas(identities.spectrum),
                             empirical=dict(empirical or {}),
                             tolerances={'identity': IDENTITY_TOL})
    if numeric:
        report.numeric_graph = identities.numeric_graph
        report.numeric_range = identities.numeric_range
        report.tolerances['numeric'] = NUMERIC_TOL
    return report
