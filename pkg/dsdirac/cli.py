"""
Command line front end: kernel tables, mode solves against the oracles, fundamental-solution actions,
H -> 0 limit studies and the verification suite.

    dsdirac <command> [--config PATH] [--set KEY=VALUE ...] [--out PATH] [--format csv|json] [--seed N] [--gate REAL]

Exit codes: 0 ok, 2 config error, 3 numerical failure, 4 gate failure, 5 verify failure.
"""
import asyncio
import csv
import hashlib
import logging
import math
import pathlib
import sys
from argparse import ArgumentParser
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence

import json_tricks
import numpy as np
import uvloop

from .settings import (ALL_ENVIRONS, AppEnviron, FundsolEnviron, KernelEnviron, LimitEnviron,
                       RunEnviron, SolveEnviron, VerifyEnviron, load_env)

load_env('app')

from . import factor  # noqa: E402
from .clifford import anticommutator_defects, corrupted_basis, diagonal_products, exact_rank, standard_basis  # noqa
from .common import (CheckError, ConfigError, DsDiracError, FourierMode, NumericalError, ODESpec,  # noqa: E402
                     OutsideCone, QuadratureSpec, SpinorValue)
from .dirac import (DiracModeProblem, dirac_fundsol_action_1d, dirac_solve_mode,  # noqa: E402
                    dirac_solve_mode_minkowski)
from .kernels import KernelParams, kernel_E, kernel_K0, kernel_K1, limit_check_E_to_I0, phi  # noqa: E402
from .kg import KGProblem, covariant_from_noncovariant, kg_solve_mode, kg_solve_mode_minkowski  # noqa: E402
from .oracle import dirac_mode_oracle, kg_mode_oracle  # noqa: E402

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_GATE, EXIT_VERIFY = 0, 2, 3, 4, 5

SOURCES: Dict[str, Optional[Callable[[float], complex]]] = {
    'none': None,
    'exp': lambda b: math.exp(-b),
    'cos': lambda b: math.cos(2 * b),
}

# where and how a run is written or scheduled does not change its numbers
UNHASHED = {'RunEnviron': ('OUT', 'WORKERS')}

SOLVE_COLUMNS = ('t', 'comp', 're_val', 'im_val', 're_oracle', 'im_oracle', 'abs_err', 'rel_err')


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument('--config', help='dotenv style file of KEY = value lines, overrides the packaged defaults')
    common.add_argument('--set', dest='assignments', action='append', default=[], metavar='KEY=VALUE',
                        help='override one setting, e.g. KERNEL_M=0.5+1i; takes precedence over --config')
    common.add_argument('--out', help='output path, - for stdout')
    common.add_argument('--format', choices=('csv', 'json'))
    common.add_argument('--seed', type=int)
    common.add_argument('--gate', type=float, help='relative error gate for the solve commands')
    common.add_argument('--workers', type=int)
    common.add_argument('-v', '--verbose', action='store_true')

    parser = ArgumentParser(AppEnviron.APP_NAME)
    commands = parser.add_subparsers(dest='command')
    commands.required = True
    commands.add_parser('kernel', parents=[common], help='tabulate E, K0 and K1 over an (r, t) grid')
    commands.add_parser('kg-solve', parents=[common], help='Klein-Gordon mode solve against the ODE oracle')
    commands.add_parser('dirac-solve', parents=[common], help='Dirac mode solve against the ODE oracle')
    commands.add_parser('fundsol', parents=[common], help='Dirac fundamental solution acting on a bump (n = 1)')
    commands.add_parser('limit-h0', parents=[common], help='defect |2E - I0| as H decreases')
    verify = commands.add_parser('verify', parents=[common], help='run the invariant suite')
    verify.add_argument('--debug-corrupt-gamma', action='store_true',
                        help='flip one entry of gamma^1 before the anticommutator check')
    return parser


parser = build_parser()


def apply_options(options):
    if options.config:
        load_env(str(pathlib.Path(options.config).resolve()), override=True)
    for assignment in options.assignments:
        key, sep, raw = assignment.partition('=')
        if not sep:
            raise ConfigError(f'--set expects KEY=VALUE, got {assignment!r}')
        _assign(key.strip().upper(), raw.strip())
    for field, value in (('OUT', options.out), ('FORMAT', options.format), ('SEED', options.seed),
                         ('GATE', options.gate), ('WORKERS', options.workers)):
        if value is not None:
            setattr(RunEnviron, field, value)
    if RunEnviron.FORMAT not in ('csv', 'json'):
        raise ConfigError(f'unknown output format {RunEnviron.FORMAT!r}')


def _assign(key: str, raw: str):
    for environ in ALL_ENVIRONS:
        if environ._prefix and key.startswith(environ._prefix):
            try:
                return environ.assign(key, raw)
            except KeyError:
                break
    raise ConfigError(f'unknown setting {key}')


def config_hash(command: str) -> str:
    snapshot = {}
    for environ in ALL_ENVIRONS:
        skip = UNHASHED.get(environ.__name__, ())
        snapshot[environ.__name__] = {k: v for k, v in environ.snapshot().items() if k not in skip}
    payload = json_tricks.dumps({'command': command, 'settings': snapshot}, sort_keys=True)
    return hashlib.sha256(payload.encode('utf-8')).hexdigest()


def run_cells(fn: Callable, cells: Sequence[tuple], workers: Optional[int] = None) -> List:
    """evaluate fn(*cell) for every cell on a thread pool; results come back in submission order"""
    loop = uvloop.new_event_loop()
    pool = ThreadPoolExecutor(max_workers=max(1, workers or RunEnviron.WORKERS))

    async def evaluate():
        return await asyncio.gather(*(loop.run_in_executor(pool, fn, *cell) for cell in cells))

    try:
        return loop.run_until_complete(evaluate())
    finally:
        pool.shutdown(wait=True)
        loop.close()


@contextmanager
def _output():
    if RunEnviron.OUT == '-':
        yield sys.stdout
    else:
        with open(RunEnviron.OUT, 'w', newline='') as fp:
            yield fp


def write_table(command: str, columns: Sequence[str], rows: Sequence[dict], units: str):
    meta = {'command': command, 'units': units, 'config_sha256': config_hash(command), 'columns': list(columns)}
    with _output() as fp:
        if RunEnviron.FORMAT == 'json':
            fp.write(json_tricks.dumps({'meta': meta, 'rows': list(rows)}, indent=2, allow_nan=True))
            fp.write('\n')
            return
        fp.write(f'# {command} | units: {units} | config sha256 {meta["config_sha256"]}\n')
        writer = csv.DictWriter(fp, fieldnames=list(columns), lineterminator='\n')
        writer.writeheader()
        for row in rows:
            writer.writerow({k: ('' if v is None else v) for k, v in row.items()})


def _split(value: complex, prefix: str) -> dict:
    value = complex(value)
    return {f're_{prefix}': value.real, f'im_{prefix}': value.imag}


# kernel table

def _kernel_cell(p: KernelParams, r: float, t: float) -> dict:
    row = {'r': r, 't': t, 'cone': 'inside'}
    try:
        row.update(_split(kernel_E(p, r, t), 'E'))
        row.update(_split(kernel_K0(p, r, t), 'K0'))
        row.update(_split(kernel_K1(p, r, t), 'K1'))
    except OutsideCone as e:
        logger.debug('kernel cell skipped: %s', e)
        row = {'r': r, 't': t, 'cone': 'outside'}
        for name in ('E', 'K0', 'K1'):
            row.update({f're_{name}': None, f'im_{name}': None})
    return row


def cmd_kernel(options) -> int:
    p = KernelParams(KernelEnviron.H, KernelEnviron.M, KernelEnviron.T0)
    if p.H <= 0:
        raise ConfigError('KERNEL_H must be positive')
    cells = [(p, float(r), float(t))
             for t in np.linspace(KernelEnviron.T_MIN, KernelEnviron.T_MAX, KernelEnviron.T_POINTS)
             for r in np.linspace(KernelEnviron.R_MIN, KernelEnviron.R_MAX, KernelEnviron.R_POINTS)]
    rows = run_cells(_kernel_cell, cells)
    columns = ('r', 't', 're_E', 'im_E', 're_K0', 'im_K0', 're_K1', 'im_K1', 'cone')
    write_table('kernel', columns, rows, 'r and t in units of 1/H')
    return EXIT_OK


# mode solves

def _rel(abs_err: float, scale: float) -> float:
    return abs_err / scale if scale > 0 else abs_err


def _gate(rows: Sequence[dict]) -> int:
    worst = max((row['rel_err'] for row in rows), default=0.0)
    if worst > RunEnviron.GATE:
        logger.error('relative error %.3e exceeds the gate %.3e', worst, RunEnviron.GATE)
        return EXIT_GATE
    return EXIT_OK


def _kg_cell(problem: KGProblem, t: float, q: QuadratureSpec, s: ODESpec, covariant: bool = False) -> dict:
    solve = kg_solve_mode_minkowski if problem.is_minkowski else kg_solve_mode
    value = solve(problem, t, q)
    reference = kg_mode_oracle(problem.H, problem.M, problem.mode.xi_norm, problem.phi0, problem.phi1,
                               problem.source, t, s)
    if covariant:
        value = covariant_from_noncovariant(problem.H, t, value)
        reference = covariant_from_noncovariant(problem.H, t, reference)
    abs_err = abs(value - reference)
    return dict(t=t, comp=0, **_split(value, 'val'), **_split(reference, 'oracle'),
                abs_err=abs_err, rel_err=_rel(abs_err, abs(reference)))


def _source(name: str):
    if name not in SOURCES:
        raise ConfigError(f'unknown source {name!r}, expected one of {sorted(SOURCES)}')
    return SOURCES[name]


def _time_grid(values: Sequence[float]) -> List[float]:
    grid = [float(t) for t in values]
    if any(t < 0 for t in grid):
        raise ConfigError('time grid must be non-negative')
    return grid


def _solve_h() -> float:
    if SolveEnviron.H < 0:
        raise ConfigError(f'SOLVE_H must be non-negative, got {SolveEnviron.H}')
    return SolveEnviron.H


def cmd_kg_solve(options) -> int:
    grid = _time_grid(SolveEnviron.T_GRID)
    problem = KGProblem(_solve_h(), SolveEnviron.M, FourierMode(SolveEnviron.XI), SolveEnviron.PHI0,
                        SolveEnviron.PHI1, _source(SolveEnviron.SOURCE), horizon=max(grid, default=0.0))
    q, s = QuadratureSpec.from_environ().validate(), ODESpec.from_environ()
    rows = run_cells(_kg_cell, [(problem, t, q, s, SolveEnviron.COVARIANT) for t in grid])
    write_table('kg-solve', SOLVE_COLUMNS, rows, 't in units of 1/H, mode amplitude')
    return _gate(rows)


def _dirac_cell(problem: DiracModeProblem, t: float, q: QuadratureSpec, s: ODESpec) -> List[dict]:
    solve = dirac_solve_mode_minkowski if problem.H == 0 else dirac_solve_mode
    value = solve(problem, t, q).as_array()
    reference = dirac_mode_oracle(problem.H, problem.m, problem.xi, problem.Phi, problem.F, t, s).as_array()
    scale = float(np.max(np.abs(reference)))
    rows = []
    for comp in range(4):
        abs_err = abs(value[comp] - reference[comp])
        rows.append(dict(t=t, comp=comp, **_split(value[comp], 'val'), **_split(reference[comp], 'oracle'),
                         abs_err=abs_err, rel_err=_rel(abs_err, scale)))
    return rows


def cmd_dirac_solve(options) -> int:
    grid = _time_grid(SolveEnviron.T_GRID)
    spinor = np.asarray(SolveEnviron.SPINOR, dtype=complex)
    if spinor.shape != (4,):
        raise ConfigError('SOLVE_SPINOR needs four components')
    scalar = _source(SolveEnviron.SOURCE)
    F = None if scalar is None else (lambda b: scalar(b) * spinor)
    problem = DiracModeProblem(_solve_h(), SolveEnviron.MASS, tuple(SolveEnviron.XI),
                               SpinorValue.from_array(spinor), F, horizon=max(grid, default=0.0))
    q, s = QuadratureSpec.from_environ().validate(), ODESpec.from_environ()
    rows = [row for cell in run_cells(_dirac_cell, [(problem, t, q, s) for t in grid]) for row in cell]
    write_table('dirac-solve', SOLVE_COLUMNS, rows, 't in units of 1/H, spinor components; rel_err per |Psi|_max')
    return _gate(rows)


# fundamental solution

def _fundsol_cell(t: float, q: QuadratureSpec) -> List[dict]:
    centre, width = FundsolEnviron.CENTER, FundsolEnviron.WIDTH
    e0 = np.array([1, 0, 0, 0], dtype=complex)

    def bump(x):
        return math.exp(-((x - centre) / width) ** 2) * e0

    def bump_dx(x):
        return -2 * (x - centre) / width ** 2 * bump(x)

    value = dirac_fundsol_action_1d(FundsolEnviron.H, FundsolEnviron.MASS, t, FundsolEnviron.T0,
                                    FundsolEnviron.X0, bump, q, bump_dx, FundsolEnviron.KIND).as_array()
    return [dict(t=t, comp=comp, **_split(value[comp], 'val')) for comp in range(4)]


def cmd_fundsol(options) -> int:
    if FundsolEnviron.KIND not in ('auto', 'retarded', 'advanced'):
        raise ConfigError(f'unknown propagator kind {FundsolEnviron.KIND!r}')
    if FundsolEnviron.WIDTH <= 0:
        raise ConfigError('FUNDSOL_WIDTH must be positive')
    q = QuadratureSpec.from_environ().validate()
    cells = [(float(t), q) for t in FundsolEnviron.T_GRID]
    rows = [row for cell in run_cells(_fundsol_cell, cells) for row in cell]
    write_table('fundsol', ('t', 'comp', 're_val', 'im_val'), rows, 't in units of 1/H, Gaussian bump in x')
    return EXIT_OK


# H -> 0

def cmd_limit_h0(options) -> int:
    h_list = [float(H) for H in LimitEnviron.H_LIST]
    if any(H <= 0 for H in h_list):
        raise ConfigError('LIMIT_H_LIST entries must be positive')
    M, t, b = LimitEnviron.M, LimitEnviron.T, LimitEnviron.B
    cells = [(H, M, t, b, float(r)) for r in LimitEnviron.R for H in h_list]
    defects = run_cells(limit_check_E_to_I0, cells)
    rows = []
    for i, (H, _, _, _, r) in enumerate(cells):
        previous = defects[i - 1] if i % len(h_list) else None
        ratio = previous / defects[i] if previous is not None and defects[i] > 0 else None
        rows.append(dict(r=r, H=H, defect=defects[i], ratio=ratio))
    write_table('limit-h0', ('r', 'H', 'defect', 'ratio'), rows, 'defect |2E - I0|, ratio against the previous H')
    return EXIT_OK


# verification suite

class CheckResult(NamedTuple):
    name: str
    max_residual: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.threshold)

    def as_dict(self) -> dict:
        return {'name': self.name, 'max_residual': self.max_residual, 'threshold': self.threshold,
                'pass': self.passed}


def _check_anticommutators(rng, corrupt: bool) -> float:
    basis = corrupted_basis() if corrupt else standard_basis()
    return float(len(anticommutator_defects(basis)))


def _check_diagonal_rank(rng, corrupt: bool) -> float:
    rows = [m.to_complex().ravel() for m in diagonal_products(standard_basis())]
    return float(4 - exact_rank(rows))


K0_MASSES = (0.5, 0.5 + 1j, 0.5 - 1j, 2.0)


def _check_k0_derivative(rng, corrupt: bool, h: float = 1e-5) -> float:
    worst = 0.0
    for M in K0_MASSES:
        for t in np.linspace(0.2, 1.0, 5):
            for frac in np.linspace(0.1, 0.8, 5):
                r = frac * phi(1.0, t)
                later, earlier = KernelParams(1.0, M, h), KernelParams(1.0, M, -h)
                numeric = -(kernel_E(later, r, t) - kernel_E(earlier, r, t)) / (2 * h)
                worst = max(worst, abs(kernel_K0(KernelParams(1.0, M), r, t) - numeric))
    return worst


def _check_massless(rng, corrupt: bool) -> float:
    worst = 0.0
    for H in (0.5, 1.0):
        for t0 in (0.0, 0.2):
            p = KernelParams(H, H / 2, t0)
            for t in (0.4, 0.7, 1.0):
                for frac in np.linspace(0.0, 1.0, 6):
                    r = frac * (phi(H, t) - phi(H, t0))
                    worst = max(worst, abs(kernel_E(p, r, t) - 0.5 * math.exp(H / 2 * (t0 + t))))
                    if t0 == 0:
                        worst = max(worst, abs(kernel_K0(p, r, t) + H / 4 * math.exp(H * t / 2)))
    return worst


AA_FREE_EXAMPLES = ('cartesian', 'cylindrical', 'spherical')


def _factor_suite(check: Callable, examples: Sequence[str] = AA_FREE_EXAMPLES):
    def run(rng, corrupt: bool) -> float:
        worst = 0.0
        for i in range(VerifyEnviron.TEST_FUNCTIONS):
            example = examples[i % len(examples)]
            coeffs = factor.EXAMPLES[example]()
            tf = factor.random_test_function(rng)
            H, m = float(rng.uniform(0.5, 1.5)), float(rng.uniform(0.0, 2.0))
            abc = tuple(float(v) for v in rng.uniform(-1.0, 3.0, size=3))
            for _ in range(VerifyEnviron.POINTS):
                point = factor.random_point(rng, example)
                worst = max(worst, check(coeffs, tf, point, H, m, abc))
        return worst
    return run


def _check_aa_examples(rng, corrupt: bool) -> float:
    worst = 0.0
    for example in factor.EXAMPLES:
        for _ in range(VerifyEnviron.POINTS):
            tf = factor.random_test_function(rng, kind='gaussian')
            point = factor.random_point(rng, 'cartesian' if example in ('variable', 'em_potential') else example)
            worst = max(worst, factor.check_condition_AA(example, point, tf))
    return worst


def _check_tetrad(rng, corrupt: bool) -> float:
    worst = 0.0
    for _ in range(VerifyEnviron.POINTS * VerifyEnviron.TEST_FUNCTIONS):
        point = (float(rng.uniform(0.1, 3)), float(rng.uniform(0.1, math.pi - 0.1)),
                 float(rng.uniform(0, 2 * math.pi)))
        worst = max(worst, factor.check_tetrad_anticommutators(point))
    return worst


def _check_limit_ratio(rng, corrupt: bool) -> float:
    """|ratio - 2| of the limit defect when H halves, over interior radii"""
    worst = 0.0
    for r in np.linspace(0.05, 0.9, 10):
        coarse = limit_check_E_to_I0(1e-2, 0.7, 1.0, 0.0, r)
        fine = limit_check_E_to_I0(5e-3, 0.7, 1.0, 0.0, r)
        worst = max(worst, abs(coarse / fine - 2))
    return worst


def _check_minkowski_bridge(rng, corrupt: bool, H: float = 1e-3) -> float:
    q = QuadratureSpec.from_environ()
    worst = 0.0
    for M in (H / 2, 2 * H):
        for k in (0.0, 1.0, 4.0):
            for phi0, phi1 in ((1, 0), (0, 1)):
                for t in (0.25, 0.5, 1.0):
                    de_sitter = kg_solve_mode(KGProblem(H, M, FourierMode((k, 0, 0)), phi0, phi1), t, q)
                    flat = kg_solve_mode_minkowski(KGProblem(0.0, M, FourierMode((k, 0, 0)), phi0, phi1), t, q)
                    worst = max(worst, abs(de_sitter - flat) / abs(flat))
    return worst


def verification_checks():
    threshold = VerifyEnviron.THRESHOLD
    return [
        ('clifford_anticommutators', _check_anticommutators, 0.0),
        ('clifford_diagonal_rank', _check_diagonal_rank, 0.0),
        ('k0_vs_derivative', _check_k0_derivative, VerifyEnviron.K0_THRESHOLD),
        ('massless_collapse', _check_massless, 1e-12),
        ('three_parameter_general', _factor_suite(
            lambda c, tf, pt, H, m, abc: factor.check_three_parameter_general(*abc, H, m, c, tf, pt)), threshold),
        ('three_parameter_case_i', _factor_suite(
            lambda c, tf, pt, H, m, abc: factor.check_three_parameter_case('i', H, m, c, tf, pt)), threshold),
        ('three_parameter_case_ii', _factor_suite(
            lambda c, tf, pt, H, m, abc: factor.check_three_parameter_case('ii', H, m, c, tf, pt)), threshold),
        ('three_parameter_case_iii', _factor_suite(
            lambda c, tf, pt, H, m, abc: factor.check_three_parameter_case('iii', H, m, c, tf, pt)), threshold),
        ('covariant_square', _factor_suite(
            lambda c, tf, pt, H, m, abc: factor.check_covariant_square(H, m, c, tf, pt)), threshold),
        ('box_g_identity', _factor_suite(
            lambda c, tf, pt, H, m, abc: factor.check_box_g_identity(H, c, tf, pt)), threshold),
        ('matrix_mass_factorization', _factor_suite(
            lambda c, tf, pt, H, m, abc: factor.check_matrix_mass_factorization(H, m, tf, pt, c)), threshold),
        ('propagator_identity', _factor_suite(
            lambda c, tf, pt, H, m, abc: factor.check_propagator_identity(H, m, tf, pt, c)), threshold),
        ('condition_AA', _check_aa_examples, threshold),
        ('tetrad_anticommutators', _check_tetrad, 1e-12),
        ('limit_h0_ratio', _check_limit_ratio, 0.3),
        ('minkowski_bridge', _check_minkowski_bridge, 5e-3),
    ]


def _run_check(index: int, name: str, check: Callable, threshold: float, corrupt: bool) -> CheckResult:
    rng = np.random.default_rng([RunEnviron.SEED, index])
    try:
        residual = check(rng, corrupt)
    except (CheckError, NumericalError) as e:
        logger.error('check %s raised %s: %s', name, type(e).__name__, e)
        residual = math.inf
    return CheckResult(name, float(residual), threshold)


def run_verification(corrupt: bool = False) -> List[CheckResult]:
    cells = [(i, name, check, threshold, corrupt)
             for i, (name, check, threshold) in enumerate(verification_checks())]
    return run_cells(_run_check, cells)


def cmd_verify(options) -> int:
    results = run_verification(options.debug_corrupt_gamma)
    with _output() as fp:
        fp.write(json_tricks.dumps([r.as_dict() for r in results], indent=2, allow_nan=True))
        fp.write('\n')
    failed = [r.name for r in results if not r.passed]
    if failed:
        logger.error('failed checks: %s', ', '.join(failed))
        return EXIT_VERIFY
    return EXIT_OK


COMMANDS = {
    'kernel': cmd_kernel,
    'kg-solve': cmd_kg_solve,
    'dirac-solve': cmd_dirac_solve,
    'fundsol': cmd_fundsol,
    'limit-h0': cmd_limit_h0,
    'verify': cmd_verify,
}


def main(*args) -> int:
    args = args or None
    options = parser.parse_args(args)
    logging.basicConfig(level=logging.DEBUG if options.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')
    try:
        apply_options(options)
        return COMMANDS[options.command](options)
    except ConfigError as e:
        logger.error('config error: %s', e)
        return EXIT_CONFIG
    except DsDiracError as e:
        logger.error('%s: %s', type(e).__name__, e)
        return EXIT_NUMERICAL
