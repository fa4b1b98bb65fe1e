"""
Command-line interface: `affdim {sval, dim, simulate, estimate, verify}`.

Options may also come from an INI file passed with --config. The [general]
section applies to every command, and each command reads its own section
([sval], [dim], [simulate], [estimate], [verify]). Keys are long option
names with dashes replaced by underscores, falling back to a match without case.
Flags win over the file.
"""
# SPDX-License-Identifier: Apache-2.0.

import argparse
import configparser
from dataclasses import replace
import logging
from pathlib import Path
import sys
from typing import Dict, List, Optional, Sequence

import numpy as np

from affdim import __version__, io
from affdim.exceptions import AffdimError, DomainError, ExitCode, ToleranceError
from affdim.fields import FieldPath, Model, OfbmModel, StableLevyModel, verify_scaling, verify_stationary_increments
from affdim.formulas import (
    NUMERIC_TOL,
    build_dimension_report,
    graph_dim_oss_stable,
    graph_dim_semistable_levy,
    identity_suite,
    range_dim_oss_stable,
    range_dim_semistable_levy,
)
from affdim.matrix import ExponentPair, SpectrumSummary
from affdim.occupation import (
    FitPolicy,
    box_count_dimension,
    energy_blowup_scan,
    energy_integral,
    mean_occupation_histogram,
)
from affdim.svf import DEFAULT_K_SCHEDULE, Kind, c_invariance, closed_forms, s_numeric, s_numeric_pair

_log = logging.getLogger(__name__)

_LOG_LEVELS = {
    'ERROR': io.LogLevel.Error,
    'WARN': io.LogLevel.Warn,
    'INFO': io.LogLevel.Info,
    'DEBUG': io.LogLevel.Debug,
    'TRACE': io.LogLevel.Trace,
}


def _floats(text: str) -> List[float]:
    try:
        values = io.parse_float_list(text)
    except DomainError as e:
        raise argparse.ArgumentTypeError(str(e))
    if not values:
        raise argparse.ArgumentTypeError('expected a comma-separated list of reals')
    return values


def _ints(text: str) -> List[int]:
    return [int(v) for v in _floats(text)]


def _kind(text: str) -> Kind:
    try:
        return Kind[text.upper()]
    except KeyError:
        raise argparse.ArgumentTypeError('kind must be graph or range, got {!r}'.format(text))


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='FILE: INI file with option defaults.')
    common.add_argument('-o', '--out', default='.', help='DIR: directory for reports and artifacts.')
    common.add_argument('--threads', type=int, help='INT: worker threads. Defaults to AFFDIM_THREADS or the CPU count.')
    common.add_argument('-v', '--verbose', choices=sorted(_LOG_LEVELS),
                        help='ERROR|WARN|INFO|DEBUG|TRACE: log level to configure. Default is none.')
    common.add_argument('-t', '--trace', help='FILE: dumps logs to FILE instead of stderr.')
    return common


def _path_options(parser: argparse.ArgumentParser):
    parser.add_argument('paths', nargs='+', help='Path CSV files, or directories holding them.')


def build_parser() -> argparse.ArgumentParser:
    """The argument parser; each leaf command records its config section in `section`."""
    common = _common_options()
    parser = argparse.ArgumentParser(prog='affdim', description='Dimensions of self-affine random fields.')
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    commands = parser.add_subparsers(dest='command', required=True)

    sval = commands.add_parser('sval', parents=[common], help='Affinity exponents of an exponent pair or of (W, x).')
    sval.add_argument('--E', help='FILE: time exponent matrix.')
    sval.add_argument('--D', help='FILE: space exponent matrix.')
    sval.add_argument('--W', help='FILE: contracting matrix.')
    sval.add_argument('--x', type=float, help='REAL: target in (0, 1), used with --W.')
    sval.add_argument('--c', type=float, help='REAL: scale in (0, 1). Unset runs the scale-invariance check.')
    sval.add_argument('--numeric', action='store_true', help='Also solve numerically.')
    sval.add_argument('--tol', type=float, default=1e-6, help='REAL: numeric tolerance.')
    sval.add_argument('--k-schedule', type=_ints, help='LIST: increasing powers for the numeric limit.')
    sval.add_argument('--cluster-tol', type=float, help='REAL: eigenvalue clustering tolerance.')
    sval.set_defaults(handler=cmd_sval, section='sval')

    dim = commands.add_parser('dim', parents=[common], help='Closed-form dimensions and identity checks.')
    dim.add_argument('--family', choices=['oss-stable', 'levy'], default='oss-stable')
    dim.add_argument('--a', type=_floats, help='LIST: real parts of the eigenvalues of E.')
    dim.add_argument('--a-mult', type=_ints, help='LIST: multiplicities for --a.')
    dim.add_argument('--lambda', dest='lam', type=_floats, help='LIST: real parts of the eigenvalues of D.')
    dim.add_argument('--mult', type=_ints, help='LIST: multiplicities for --lambda.')
    dim.add_argument('--E', help='FILE: time exponent matrix, instead of --a.')
    dim.add_argument('--D', help='FILE: space exponent matrix, instead of --lambda.')
    dim.add_argument('--numeric', action='store_true', help='Also compare with the numeric exponents (matrix input).')
    dim.set_defaults(handler=cmd_dim, section='dim')

    simulate = commands.add_parser('simulate', parents=[common], help='Simulate sample paths to CSV.')
    simulate.add_argument('--model', choices=['ofbm', 'stable-levy'], default='ofbm')
    simulate.add_argument('--H', type=_floats, help='LIST: Hurst indices, D = diag(H).')
    simulate.add_argument('--D', help='FILE: space exponent matrix for ofbm.')
    simulate.add_argument('--alpha', type=_floats, help='LIST: stability indices for stable-levy.')
    simulate.add_argument('--d', type=int, default=1, help='INT: parameter dimension, 1 or 2.')
    simulate.add_argument('--n', type=int, default=1024, help='INT: lattice points per axis, a power of two.')
    simulate.add_argument('--replicas', type=int, default=1)
    simulate.add_argument('--seed', type=int, default=0)
    simulate.set_defaults(handler=cmd_simulate, section='simulate')

    estimate = commands.add_parser('estimate', help='Estimators on simulated paths.')
    estimators = estimate.add_subparsers(dest='estimator', required=True)

    boxcount = estimators.add_parser('boxcount', parents=[common], help='Box-counting dimension.')
    _path_options(boxcount)
    boxcount.add_argument('--kind', type=_kind, default=Kind.GRAPH)
    boxcount.add_argument('--scales', type=_ints, default=list(range(1, 13)), help='LIST: dyadic exponents j.')
    boxcount.add_argument('--drop-coarse', type=int,
                          help='INT: coarsest scales left out of the fit (default 1, 3 for ranges).')
    boxcount.add_argument('--drop-fine', type=int, help='INT: finest scales left out of the fit (default 2).')
    boxcount.set_defaults(handler=cmd_boxcount, section='estimate')

    energy = estimators.add_parser('energy', parents=[common], help='Frostman γ-energy.')
    _path_options(energy)
    energy.add_argument('--gamma', type=float, required=True)
    energy.add_argument('--kind', type=_kind, default=Kind.GRAPH)
    energy.add_argument('--pair-budget', type=int, default=10 ** 7)
    energy.add_argument('--seed', type=int, default=0)
    energy.set_defaults(handler=cmd_energy, section='estimate')

    histogram = estimators.add_parser('histogram', parents=[common], help='Mean occupation histogram.')
    _path_options(histogram)
    histogram.add_argument('--kind', type=_kind, default=Kind.RANGE)
    histogram.add_argument('--bounds', type=_floats, help='LIST: lo,hi per spatial axis. Defaults to the data extent.')
    histogram.add_argument('--cells', type=int, default=16)
    histogram.set_defaults(handler=cmd_histogram, section='estimate')

    scan = estimators.add_parser('scan', parents=[common], help='Energy blow-up under lattice refinement.')
    _path_options(scan)
    scan.add_argument('--gammas', type=_floats, required=True)
    scan.add_argument('--refinements', type=int, default=3)
    scan.add_argument('--kind', type=_kind, default=Kind.GRAPH)
    scan.add_argument('--pair-budget', type=int, default=10 ** 7)
    scan.add_argument('--seed', type=int, default=0)
    scan.set_defaults(handler=cmd_scan, section='estimate')

    verify = commands.add_parser('verify', help='Acceptance checks on simulated paths.')
    checks = verify.add_subparsers(dest='check', required=True)

    scaling = checks.add_parser('scaling', parents=[common], help='KS check of X(ct) = c^D X(t).')
    _path_options(scaling)
    scaling.add_argument('--c', type=float, default=0.5)
    scaling.add_argument('--D', help='FILE: exponent under test. Defaults to the paths\' model.')
    scaling.add_argument('--probes', type=_floats, help='LIST: probe times; t = s(1, ..., 1) for d > 1.')
    scaling.add_argument('--significance', type=float, default=0.01)
    scaling.set_defaults(handler=cmd_verify_scaling, section='verify')

    increments = checks.add_parser('increments', parents=[common], help='KS check of stationary increments.')
    _path_options(increments)
    increments.add_argument('--first', type=float, default=0.0)
    increments.add_argument('--second', type=float, help='REAL: second start. Defaults to the lattice time below 1/2.')
    increments.add_argument('--lag', type=float, help='REAL: lag. Defaults to the lattice time below 1/4.')
    increments.add_argument('--significance', type=float, default=0.01)
    increments.set_defaults(handler=cmd_verify_increments, section='verify')

    dimension = checks.add_parser('dimension', parents=[common], help='Closed forms against box counting.')
    _path_options(dimension)
    dimension.add_argument('--E', help='FILE: time exponent. Defaults to the paths\' model.')
    dimension.add_argument('--D', help='FILE: space exponent. Defaults to the paths\' model.')
    dimension.add_argument('--kind', choices=['graph', 'range', 'both'], default='both')
    dimension.add_argument('--tol', type=float, default=0.15)
    dimension.set_defaults(handler=cmd_verify_dimension, section='verify')

    return parser


def _leaf_parsers(parser: argparse.ArgumentParser):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            for child in action.choices.values():
                yield from _leaf_parsers(child)
            return
    yield parser


def apply_config(parser: argparse.ArgumentParser, config_path):
    """Install option defaults from an INI file on every leaf command."""
    config = io.read_report(config_path)
    for leaf in _leaf_parsers(parser):
        section = leaf.get_default('section')
        exact, loose = {}, {}
        for action in leaf._actions:
            names = [o[2:] for o in action.option_strings if o.startswith('--')] or [action.dest]
            for name in names:
                exact[name.replace('-', '_')] = action
                loose.setdefault(name.replace('-', '_').lower(), action)
        for name in ('general', section):
            if not config.has_section(name):
                continue
            defaults = {}
            for key, value in config[name].items():
                action = exact.get(key) or loose.get(key.lower())
                if action is None or action.dest in ('help', 'config'):
                    continue
                if isinstance(action, argparse._StoreTrueAction):
                    defaults[action.dest] = config[name].getboolean(key)
                elif action.nargs == '+':
                    defaults[action.dest] = value.split()
                else:
                    # argparse applies `type` to string defaults
                    defaults[action.dest] = value
            leaf.set_defaults(**defaults)
            for action in leaf._actions:
                if action.dest in defaults:
                    action.required = False


def _init_logging(args):
    if args.verbose:
        io.init_logging(_LOG_LEVELS[args.verbose], args.trace or 'stderr')


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _emit(title: str, values: Dict[str, object]):
    for key, value in values.items():
        print('{}.{} = {}'.format(title, key, io.format_value(value)))


def _result_section(result) -> Dict[str, object]:
    return {'s': result.s, 'branch': result.branch_index, 'case': result.case_tag, 'method': result.method,
            'k_used': result.k_used, 'residual': result.residual}


def _numeric_options(args) -> dict:
    options = {'tol': args.tol}
    if args.k_schedule:
        options['k_schedule'] = args.k_schedule
    return options


def cmd_sval(args) -> int:
    sections = {}
    if args.W is not None:
        if args.x is None:
            raise DomainError('--W needs --x')
        W = io.read_matrix(args.W)
        result = s_numeric(W, args.x, **_numeric_options(args))
        sections['input'] = {'W': W.ravel(), 'order': W.shape[0], 'x': args.x}
        sections['numeric'] = _result_section(result)
    elif args.E is not None and args.D is not None:
        c = 0.5 if args.c is None else args.c
        pair = ExponentPair(io.read_matrix(args.E), io.read_matrix(args.D), c)
        graph, rng = closed_forms(pair, args.cluster_tol)
        sections['input'] = {'E': pair.E.ravel(), 'D': pair.D.ravel(), 'c': args.c, 'd': pair.d, 'm': pair.m}
        sections['closed_graph'] = _result_section(graph)
        sections['closed_range'] = _result_section(rng)
        if args.numeric:
            options = _numeric_options(args)
            agree = True
            for kind, closed in ((Kind.GRAPH, graph), (Kind.RANGE, rng)):
                name = kind.name.lower()
                result = s_numeric_pair(pair, kind, **options)
                section = _result_section(result)
                section['agrees_with_closed'] = abs(result.s - closed.s) <= NUMERIC_TOL
                agree = agree and section['agrees_with_closed']
                sections['numeric_' + name] = section
                if args.c is None:
                    report = c_invariance(pair, kind, k_schedule=options.get('k_schedule', DEFAULT_K_SCHEDULE))
                    sections['c_invariance_' + name] = {'scales': report.scales, 'spread': report.spread,
                                                        'passed': report.passed}
    else:
        raise DomainError('sval needs --E and --D, or --W and --x')

    for title, values in sections.items():
        if title != 'input':
            _emit(title, values)
    io.write_report(_out_dir(args) / 'sval.txt', sections)
    if args.numeric and args.W is None and not all(
            sections[k]['agrees_with_closed'] for k in ('numeric_graph', 'numeric_range')):
        raise ToleranceError('numeric exponents differ from the closed forms by more than {}'.format(NUMERIC_TOL))
    return ExitCode.SUCCESS


def _inline_spectrum(args) -> SpectrumSummary:
    if args.lam is None:
        raise DomainError('dim needs --lambda or --E/--D')
    a = args.a
    a_mult = args.a_mult
    if a is None:
        if args.family != 'levy':
            raise DomainError('oss-stable needs --a')
        a, a_mult = [1.0], None
    return SpectrumSummary.from_spectra(a, args.lam, a_mult, args.mult)


def cmd_dim(args) -> int:
    if args.E is not None or args.D is not None:
        if args.E is None or args.D is None:
            raise DomainError('matrix input needs both --E and --D')
        pair = ExponentPair(io.read_matrix(args.E), io.read_matrix(args.D))
        report = build_dimension_report(pair, numeric=args.numeric)
        identities = report.identities
        summary = identities.spectrum
        sections = report.to_sections()
    else:
        if args.numeric:
            raise DomainError('--numeric needs matrix input (--E and --D)')
        summary = _inline_spectrum(args)
        identities = identity_suite(summary)
        sections = {'input': {'a': summary.expanded_a, 'lambda': summary.expanded_lam, 'q': summary.q, 'd': summary.d,
                              'm': summary.m}}

    if args.family == 'levy':
        graph, rng = graph_dim_semistable_levy(summary), range_dim_semistable_levy(summary)
    else:
        graph, rng = graph_dim_oss_stable(summary), range_dim_oss_stable(summary)
    sections['dimension'] = {
        'family': args.family,
        'graph': graph.value, 'graph_branch': graph.branch, 'graph_valid': graph.valid,
        'range': rng.value, 'range_branch': rng.branch, 'range_valid': rng.valid,
    }
    for premise, ok in graph.validity + rng.validity:
        if not ok:
            _log.warning('premise %s does not hold; the formula is evaluated anyway', premise)
    sections['identities'] = {c.key: c.holds for c in identities.checks}
    sections['identities']['passed'] = identities.passed

    _emit('dimension', {'graph': graph.value, 'range': rng.value})
    _emit('identities', {'passed': identities.passed})
    io.write_report(_out_dir(args) / 'dim.txt', sections)
    if not identities.passed:
        names = ', '.join(c.name for c in identities.mismatches)
        raise ToleranceError('identity checks failed: {}'.format(names))
    return ExitCode.SUCCESS


def cmd_simulate(args) -> int:
    if args.model == 'ofbm':
        if args.D is not None:
            exponent = io.read_matrix(args.D)
        elif args.H is not None:
            exponent = np.diag(args.H)
        else:
            raise DomainError('ofbm needs --H or --D')
        model = OfbmModel(exponent, args.d)
    else:
        if args.alpha is None:
            raise DomainError('stable-levy needs --alpha')
        if args.d != 1:
            raise DomainError('stable-levy paths have d = 1')
        model = StableLevyModel(args.alpha)

    paths = model.simulate(args.n, args.replicas, args.seed, args.threads)
    out = _out_dir(args)
    for path in paths:
        path.to_csv(out / 'path_{:05d}.csv'.format(path.replica), replicas=len(paths))
    summary = {'model': model.model, 'd': model.d, 'm': model.m, 'n': args.n, 'replicas': len(paths),
               'seed': args.seed}
    summary.update(model.params)
    io.write_report(out / 'simulate.txt', {'simulate': summary})
    print('wrote {} paths to {}'.format(len(paths), out))
    return ExitCode.SUCCESS


def load_paths(sources: Sequence[str]) -> List[FieldPath]:
    """Read path CSV files; a directory contributes every CSV inside it, sorted by name."""
    files = []
    for source in sources:
        source = Path(source)
        if source.is_dir():
            files.extend(sorted(source.glob('*.csv')))
        else:
            files.append(source)
    if not files:
        raise DomainError('no path files found in {}'.format(list(sources)))
    paths = [FieldPath.from_csv(f) for f in files]
    shapes = {(p.d, p.m, p.n) for p in paths}
    if len(shapes) > 1:
        raise DomainError('paths do not share one lattice: {}'.format(sorted(shapes)))
    _log.info('loaded %d paths', len(paths))
    return paths


def _points(path: FieldPath, kind: Kind) -> np.ndarray:
    return path.graph_points() if kind == Kind.GRAPH else path.range_points()


def cmd_boxcount(args) -> int:
    paths = load_paths(args.paths)
    policy = FitPolicy.for_kind(args.kind)
    overrides = {'drop_coarse': args.drop_coarse, 'drop_fine': args.drop_fine}
    policy = replace(policy, **{key: value for key, value in overrides.items() if value is not None})
    reports = [box_count_dimension(_points(p, args.kind), args.scales, policy) for p in paths]
    slopes = [r.slope for r in reports]
    summary = {'kind': args.kind, 'paths': len(paths), 'slope': float(np.mean(slopes)),
               'slope_min': min(slopes), 'slope_max': max(slopes), 'residual': max(r.residual for r in reports),
               'degenerate': any(r.degenerate for r in reports)}
    out = _out_dir(args)
    io.write_table(out / 'boxcount.csv', ['path', 'epsilon', 'count', 'fitted'],
                   ([i, eps, count, j in r.fit_range]
                    for i, r in enumerate(reports) for j, (eps, count) in enumerate(zip(r.scales, r.counts))))
    io.write_report(out / 'boxcount.txt', {'boxcount': summary})
    _emit('boxcount', {'slope': summary['slope']})
    return ExitCode.SUCCESS


def cmd_energy(args) -> int:
    paths = load_paths(args.paths)
    estimates = [energy_integral(p, args.gamma, args.pair_budget, args.kind, args.seed + i, args.threads)
                 for i, p in enumerate(paths)]
    values = [e.value for e in estimates]
    summary = {'kind': args.kind, 'gamma': args.gamma, 'seed': args.seed, 'paths': len(paths),
               'energy': float(np.mean(values)), 'pairs': sum(e.pairs for e in estimates),
               'duplicate_pairs': sum(e.duplicate_pairs for e in estimates),
               'exhaustive': all(e.exhaustive for e in estimates)}
    out = _out_dir(args)
    io.write_table(out / 'energy.csv', ['path', 'energy', 'pairs', 'duplicate_pairs'],
                   ([i, e.value, e.pairs, e.duplicate_pairs] for i, e in enumerate(estimates)))
    io.write_report(out / 'energy.txt', {'energy': summary})
    _emit('energy', {'value': summary['energy']})
    return ExitCode.SUCCESS


def cmd_histogram(args) -> int:
    paths = load_paths(args.paths)
    bounds = None
    if args.bounds is not None:
        if len(args.bounds) != 2 * paths[0].m:
            raise DomainError('--bounds needs lo,hi for each of the {} spatial axes'.format(paths[0].m))
        bounds = list(zip(args.bounds[0::2], args.bounds[1::2]))
    histogram = mean_occupation_histogram(paths, args.kind, bounds, args.cells)
    centers = [0.5 * (e[1:] + e[:-1]) for e in histogram.edges]
    grids = np.meshgrid(*centers, indexing='ij')
    header = ['c{}'.format(i + 1) for i in range(len(centers))] + ['mass']
    rows = np.column_stack([g.ravel() for g in grids] + [histogram.mass.ravel()])
    out = _out_dir(args)
    io.write_table(out / 'histogram.csv', header, rows.tolist())
    io.write_report(out / 'histogram.txt', {'histogram': {
        'kind': args.kind, 'paths': len(paths), 'cells': list(histogram.cells),
        'bounds': [v for b in histogram.bounds for v in b], 'points': histogram.n_points,
        'overflow_mass': histogram.overflow_mass,
    }})
    _emit('histogram', {'overflow_mass': histogram.overflow_mass})
    return ExitCode.SUCCESS


def cmd_scan(args) -> int:
    paths = load_paths(args.paths)
    scan = energy_blowup_scan(paths, args.gammas, args.refinements, args.kind, args.pair_budget, args.seed,
                              args.threads)
    out = _out_dir(args)
    header = ['gamma'] + ['h={}'.format(io.format_float(h)) for h in scan.spacings] + ['growth', 'divergent']
    io.write_table(out / 'scan.csv', header,
                   ([r.gamma] + list(r.estimates) + [r.growth, r.divergent] for r in scan.rows))
    io.write_report(out / 'scan.txt', {'scan': {'kind': args.kind, 'paths': len(paths), 'seed': args.seed,
                                                'refinements': args.refinements, 'gamma_star': scan.gamma_star}})
    _emit('scan', {'gamma_star': scan.gamma_star})
    return ExitCode.SUCCESS


def model_exponents(path: FieldPath):
    """(E, D) of the model that generated `path`, read from its sidecar parameters."""
    if path.model == Model.OFBM and 'D' in path.params:
        return np.eye(path.d), np.reshape(path.params['D'], (path.m, path.m))
    if path.model == Model.STABLE_LEVY and 'alpha' in path.params:
        return np.eye(1), np.diag([1.0 / a for a in path.params['alpha']])
    raise DomainError('paths carry no model exponents; pass --E and --D')


def _probe_points(paths: List[FieldPath], c: float, probes: Optional[Sequence[float]]):
    path = paths[0]
    if probes is None:
        # the largest lattice times whose image under c stays on the lattice
        ks = [k for k in range(path.n - 1, 0, -1) if abs(c * k - round(c * k)) <= 1e-9][:3]
        if not ks:
            raise DomainError('no lattice time t with ct on the lattice; pass --probes')
        probes = [k / (path.n - 1) for k in ks]
    return [np.full(path.d, s) for s in probes]


def _ks_sections(report) -> Dict[str, Dict[str, object]]:
    sections = {'summary': {'c': report.c, 'max_ks': report.max_ks, 'threshold': report.threshold,
                            'passed': report.passed}}
    for i, r in enumerate(report.per_point):
        sections['probe_{}'.format(i)] = {'t': r.t, 'coordinate': r.coordinate, 'statistic': r.statistic,
                                          'sizes': r.sizes}
    return sections


def _finish_ks(args, name: str, report) -> int:
    io.write_report(_out_dir(args) / name, _ks_sections(report))
    _emit('verify', {'max_ks': report.max_ks, 'threshold': report.threshold, 'passed': report.passed})
    if not report.passed:
        raise ToleranceError('KS statistic {:.4f} exceeds {:.4f}'.format(report.max_ks, report.threshold))
    return ExitCode.SUCCESS


def cmd_verify_scaling(args) -> int:
    paths = load_paths(args.paths)
    D = io.read_matrix(args.D) if args.D is not None else model_exponents(paths[0])[1]
    report = verify_scaling(paths, args.c, D, _probe_points(paths, args.c, args.probes), args.significance)
    return _finish_ks(args, 'verify_scaling.txt', report)


def cmd_verify_increments(args) -> int:
    paths = load_paths(args.paths)
    d, n = paths[0].d, paths[0].n
    second = args.second if args.second is not None else ((n - 1) // 2) / (n - 1)
    lag = args.lag if args.lag is not None else max(1, (n - 1) // 4) / (n - 1)
    report = verify_stationary_increments(paths, np.full(d, args.first), np.full(d, second), np.full(d, lag),
                                          args.significance)
    return _finish_ks(args, 'verify_increments.txt', report)


def cmd_verify_dimension(args) -> int:
    paths = load_paths(args.paths)
    E, D = model_exponents(paths[0]) if args.E is None or args.D is None else (None, None)
    if args.E is not None:
        E = io.read_matrix(args.E)
    if args.D is not None:
        D = io.read_matrix(args.D)
    kinds = [Kind.GRAPH, Kind.RANGE] if args.kind == 'both' else [_kind(args.kind)]

    empirical = {}
    for kind in kinds:
        slopes = [box_count_dimension(_points(p, kind), policy=FitPolicy.for_kind(kind)).slope for p in paths]
        empirical['boxcount_' + kind.name.lower()] = float(np.mean(slopes))
    report = build_dimension_report(ExponentPair(E, D), empirical=empirical)
    report.tolerances['boxcount'] = args.tol

    sections, breaches = report.to_sections(), []
    for kind in kinds:
        name = kind.name.lower()
        closed = report.identities.graph if kind == Kind.GRAPH else report.identities.range
        estimate = empirical['boxcount_' + name]
        within = abs(estimate - closed.s) <= args.tol
        sections[name] = {'closed': closed.s, 'boxcount': estimate, 'difference': estimate - closed.s,
                          'tol': args.tol, 'within_tol': within}
        _emit(name, {'closed': closed.s, 'boxcount': estimate})
        if not within:
            breaches.append(name)
    io.write_report(_out_dir(args) / 'verify_dimension.txt', sections)
    if breaches:
        raise ToleranceError('box-count slope outside tolerance for {}'.format(', '.join(breaches)))
    return ExitCode.SUCCESS


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line and return the exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    pre.add_argument('--config')
    known, _ = pre.parse_known_args(argv)
    try:
        if known.config:
            apply_config(parser, known.config)
        args = parser.parse_args(argv)
        _init_logging(args)
        return int(args.handler(args))
    except AffdimError as e:
        print('affdim: {}'.format(e), file=sys.stderr)
        return int(e.code)
    except configparser.Error as e:
        print('affdim: malformed config: {}'.format(e), file=sys.stderr)
        return int(ExitCode.DOMAIN)


if __name__ == '__main__':
    sys.exit(main())
