import math
from collections import Counter

import numpy as np
import pytest

from dsdirac.clifford import GAMMA0
from dsdirac.common import DegenerateInterval, InvalidProblem, SpinorValue
from dsdirac.dirac import (DiracModeProblem, dirac_fundsol_action_1d, dirac_solve_mode, dirac_solve_mode_massless,
                           dirac_solve_mode_minkowski)
from dsdirac.kernels import phi
from dsdirac.oracle import dirac_mode_expm, dirac_mode_oracle, residual_dirac_mode

XIS = ((0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (0.0, 2.4, 3.2))


def random_spinor(rng):
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    return SpinorValue.from_array(v / np.linalg.norm(v))


SPINORS = tuple(SpinorValue.from_array(row) for row in np.eye(4, dtype=complex)) + (
    random_spinor(np.random.default_rng(5)),)


def random_problem(rng, m=None, F=None):
    return DiracModeProblem(float(rng.uniform(0.5, 1.0)), float(rng.uniform(0, 2)) if m is None else m,
                            tuple(rng.uniform(-2, 2, size=3)), random_spinor(rng), F)


def assert_close(value: SpinorValue, expected: SpinorValue, tol: float):
    scale = max(1.0, float(np.max(np.abs(expected.as_array()))))
    assert float(np.max(np.abs(value.as_array() - expected.as_array()))) <= tol * scale


@pytest.mark.parametrize('H', [0.5, 1.0])
@pytest.mark.parametrize('m', [0.0, 1.0, 2.0])
def test_mode_solve_against_oracle(H, m, q, ode):
    for xi in XIS:
        for Phi in SPINORS:
            p = DiracModeProblem(H, m, xi, Phi)
            for t in (0.25, 0.5, 1.0):
                assert_close(dirac_solve_mode(p, t, q), dirac_mode_oracle(H, m, xi, Phi, None, t, ode), 1e-5)


def test_source_against_oracle(q, ode):
    spinor = np.array([0.2, 1j, -0.5, 0.1])
    F = lambda b: math.exp(-b) * spinor
    p = DiracModeProblem(1.0, 1.0, (0.0, 1.0, 0.0), SpinorValue(0, 1, 0, 0), F)
    for t in (0.5, 1.0):
        assert_close(dirac_solve_mode(p, t, q), dirac_mode_oracle(1.0, 1.0, p.xi, p.Phi, F, t, ode), 1e-5)


def test_initial_value(rng, q):
    for _ in range(20):
        p = random_problem(rng)
        assert_close(dirac_solve_mode(p, 0.0, q), p.Phi, 1e-8)


def test_massless_path_matches(rng, q):
    F = lambda b: np.array([math.cos(b), 0, 1j * b, 0])
    for i in range(10):
        p = random_problem(rng, m=0.0, F=F if i % 2 else None)
        t = float(rng.uniform(0.2, 1.0))
        assert_close(dirac_solve_mode_massless(p, t, q), dirac_solve_mode(p, t, q), 1e-8)


def test_massless_path_needs_zero_mass(q):
    with pytest.raises(InvalidProblem):
        dirac_solve_mode_massless(DiracModeProblem(1.0, 1.0), 0.5, q)


def test_inactive_block_is_skipped(q):
    counters = Counter()
    dirac_solve_mode(DiracModeProblem(1.0, 1.0, (1.0, 0.0, 0.0), SpinorValue(1, 0, 0, 0)), 0.5, q, counters)
    assert counters == Counter({'M+': 1})


def test_minkowski_against_expm(q):
    for m in (0.0, 1.0):
        for xi in XIS[:2]:
            for Phi in SPINORS:
                p = DiracModeProblem(0.0, m, xi, Phi)
                for t in (0.25, 0.5):
                    assert_close(dirac_solve_mode_minkowski(p, t, q), dirac_mode_expm(m, xi, Phi, t), 1e-6)


def test_minkowski_source(q, ode):
    F = lambda b: np.array([0, 1, 0, math.sin(b)])
    p = DiracModeProblem(0.0, 0.7, (0.5, 0.0, 0.0), SpinorValue(1, 0, 0, 0), F)
    assert_close(dirac_solve_mode_minkowski(p, 0.6, q), dirac_mode_oracle(0.0, 0.7, p.xi, p.Phi, F, 0.6, ode), 1e-6)


def test_equation_residual_decays(q):
    p = DiracModeProblem(1.0, 1.0, (1.0, 0.0, 0.0), SpinorValue(1, 0, 0, 1j))
    residuals = []
    for h in (0.05, 0.025):
        grid = 0.3 + h * np.arange(9)
        samples = [dirac_solve_mode(p, float(t), q) for t in grid]
        scale = max(float(np.max(np.abs(s.as_array()))) for s in samples)
        residual = residual_dirac_mode(samples, grid, p.H, p.m, p.xi)
        assert residual <= 1e-4 * scale
        residuals.append(residual)
    assert residuals[0] / residuals[1] >= 12


def bump(centre, width):
    def fn(x):
        s = (x - centre) / width
        value = math.exp(-1 / (1 - s * s)) if abs(s) < 1 else 0.0
        return np.array([value, 0, 0.5 * value, 0])
    return fn


def test_fundsol_support(q):
    assert phi(1.0, 0.5) < 1.5
    value = dirac_fundsol_action_1d(1.0, 1.0, 0.5, 0.0, 0.0, bump(2.0, 0.5), q)
    assert value.norm2 <= 1e-16
    near = dirac_fundsol_action_1d(1.0, 1.0, 0.5, 0.0, 0.0, bump(0.1, 0.5), q)
    assert near.norm2 > 0


@pytest.mark.parametrize('v', [np.array([1, 0, 0.5, 0]), np.array([0.2j, 1, 0, -0.7])])
def test_fundsol_pairs_plane_wave_into_mode_solution(v, q, ode):
    H, m, xi = 1.0, 1.0, 1.3
    testfn = lambda x: np.exp(1j * xi * x) * v
    testfn_dx = lambda x: 1j * xi * np.exp(1j * xi * x) * v
    start = SpinorValue.from_array(-1j * GAMMA0 @ v)
    for t in (0.3, 0.7):
        value = dirac_fundsol_action_1d(H, m, t, 0.0, 0.0, testfn, q, testfn_dx)
        assert_close(value, dirac_mode_oracle(H, m, (-xi, 0.0, 0.0), start, None, t, ode), 1e-8)


def test_fundsol_kinds(q):
    value = dirac_fundsol_action_1d(1.0, 1.0, 0.2, 0.6, 0.0, bump(0.0, 0.5), q, kind='retarded')
    assert value == SpinorValue(0, 0, 0, 0)
    with pytest.raises(DegenerateInterval):
        dirac_fundsol_action_1d(1.0, 1.0, 0.4, 0.4, 0.0, bump(0.0, 0.5), q)
