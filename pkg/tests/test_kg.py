import math

import numpy as np
import pytest

from dsdirac.common import FourierMode, InvalidProblem
from dsdirac.kernels import KernelParams, phi, split_masses
from dsdirac.kg import (KGProblem, covariant_from_noncovariant, k0_transform, k1_transform, k1_transform_dt,
                        kg_fundsol_action_1d, kg_fundsol_action_3d, kg_fundsol_action_mode, kg_solve_diagonal,
                        kg_solve_mode, kg_solve_mode_minkowski, noncovariant_from_covariant)
from dsdirac.oracle import kg_mode_oracle

TIMES = (0.25, 0.5, 1.0)
WAVE_NUMBERS = (0.0, 1.0, 4.0)


def close(value, expected, tol):
    return abs(value - expected) <= tol * max(1.0, abs(expected))


@pytest.mark.parametrize('H', [0.5, 1.0])
@pytest.mark.parametrize('shift', [0, 1j, -1j, 'double'])
@pytest.mark.parametrize('data', [(1, 0), (0, 1)])
def test_mode_solve_against_oracle(H, shift, data, q, ode):
    M = 2 * H if shift == 'double' else H / 2 + shift
    for k in WAVE_NUMBERS:
        problem = KGProblem(H, M, FourierMode((k, 0.0, 0.0)), *data)
        for t in TIMES:
            expected = kg_mode_oracle(H, M, k, data[0], data[1], None, t, ode)
            assert close(kg_solve_mode(problem, t, q), expected, 1e-6)


def test_source_against_oracle(q, ode):
    H, M, k, t = 1.0, 0.5 + 1j, 1.0, 1.0
    source = lambda b: math.exp(-b)
    problem = KGProblem(H, M, FourierMode((0.0, k, 0.0)), 0.3, -0.2j, source)
    expected = kg_mode_oracle(H, M, k, 0.3, -0.2j, source, t, ode)
    assert close(kg_solve_mode(problem, t, q), expected, 1e-6)


def test_solution_is_linear_in_the_data(q):
    H, M, mode, t = 1.0, 0.5 + 1j, FourierMode((2.0, 0.0, 0.0)), 0.8
    first, second = (lambda b: math.exp(-b)), (lambda b: math.cos(2 * b))
    a, c = 0.7 - 0.2j, -1.1j
    u1 = kg_solve_mode(KGProblem(H, M, mode, 1, 0, first), t, q)
    u2 = kg_solve_mode(KGProblem(H, M, mode, 0, 1, second), t, q)
    combined = KGProblem(H, M, mode, a, c, lambda b: a * first(b) + c * second(b))
    assert close(kg_solve_mode(combined, t, q), a * u1 + c * u2, 1e-8)


@pytest.mark.parametrize('m', [0.5, 1.5])
def test_conjugate_masses_give_conjugate_solutions(m, q):
    H, mode = 1.0, FourierMode((1.0, 0.0, 0.0))
    plus, minus = split_masses(H, m)
    source = lambda b: math.exp(-b)
    for t in (0.5, 1.0):
        u_plus = kg_solve_mode(KGProblem(H, plus, mode, 0.4, -1.0, source), t, q)
        u_minus = kg_solve_mode(KGProblem(H, minus, mode, 0.4, -1.0, source), t, q)
        assert close(u_minus, u_plus.conjugate(), 1e-10)


def test_initial_values(q):
    assert k0_transform(1.0, 0.5 + 1j, 2.0, 0.0, q) == 1
    assert k1_transform(1.0, 0.5 + 1j, 2.0, 0.0, q) == 0
    assert k1_transform_dt(1.0, 0.5 + 1j, 2.0, 0.0, q) == 1


@pytest.mark.parametrize('M', [0.5, 1.5 + 0.5j])
def test_minkowski_against_oracle(M, q, ode):
    for k in WAVE_NUMBERS:
        for phi0, phi1 in ((1, 0), (0, 1)):
            problem = KGProblem(0.0, M, FourierMode((k, 0.0, 0.0)), phi0, phi1)
            for t in TIMES:
                expected = kg_mode_oracle(0.0, M, k, phi0, phi1, None, t, ode)
                assert close(kg_solve_mode_minkowski(problem, t, q), expected, 1e-6)


def test_minkowski_source(q, ode):
    source = lambda b: math.cos(2 * b)
    problem = KGProblem(0.0, 0.8, FourierMode((1.0, 0.0, 0.0)), source=source)
    assert close(kg_solve_mode_minkowski(problem, 0.7, q), kg_mode_oracle(0.0, 0.8, 1.0, 0, 0, source, 0.7, ode), 1e-6)


def test_small_H_bridge(q):
    H = 1e-3
    for M in (H / 2, 2 * H):
        for k in WAVE_NUMBERS:
            for data in ((1, 0), (0, 1)):
                for t in TIMES:
                    de_sitter = kg_solve_mode(KGProblem(H, M, FourierMode((k, 0, 0)), *data), t, q)
                    flat = kg_solve_mode_minkowski(KGProblem(0.0, M, FourierMode((k, 0, 0)), *data), t, q)
                    assert abs(de_sitter - flat) <= 5e-3 * abs(flat)


def test_solver_guards(q):
    with pytest.raises(InvalidProblem):
        kg_solve_mode(KGProblem(0.0, 1.0), 0.5, q)
    with pytest.raises(InvalidProblem):
        kg_solve_mode_minkowski(KGProblem(1.0, 1.0), 0.5, q)
    with pytest.raises(InvalidProblem):
        kg_solve_mode(KGProblem(1.0, 1.0, horizon=1.0), 1.5, q)


def test_diagonal_system(q):
    H, m = 1.0, 1.0
    plus, minus = split_masses(H, m)
    mode = FourierMode((1.0, 0.0, 0.0))
    problems = [KGProblem(H, M, mode, 0, 1) for M in (plus, plus, minus, minus)]
    values = kg_solve_diagonal(problems, 0.5, q, m=m)
    assert values[0] == values[1]
    assert values[2] == pytest.approx(values[0].conjugate(), abs=1e-10)
    with pytest.raises(ValueError):
        kg_solve_diagonal(problems[::-1], 0.5, q, m=m)
    with pytest.raises(ValueError):
        kg_solve_diagonal(problems[:3], 0.5, q)


def test_covariant_change_of_variable():
    u = 0.3 - 0.4j
    assert noncovariant_from_covariant(1.0, 0.7, covariant_from_noncovariant(1.0, 0.7, u)) == pytest.approx(u)
    assert covariant_from_noncovariant(1.0, 2.0, 1.0) == pytest.approx(math.exp(-3.0))


def test_mode_pairing_is_unit_velocity_solution(q, ode):
    p = KernelParams(1.0, 0.5 + 1j)
    for t0, t in ((0.0, 0.8), (0.3, 0.9)):
        # the shifted problem sees the wave number scaled by e^{-H t0}
        expected = kg_mode_oracle(1.0, p.M, 2.0 * math.exp(-t0), 0, 1, None, t - t0, ode)
        value = kg_fundsol_action_mode(p, t, t0, 2.0, q)
        assert close(value, expected, 1e-6)
    assert close(kg_fundsol_action_mode(p, 0.8, 0.0, 2.0, q), k1_transform(1.0, p.M, 2.0, 0.8, q), 1e-12)


def bump(centre, width):
    def fn(x):
        s = (x - centre) / width
        return math.exp(-1 / (1 - s * s)) if abs(s) < 1 else 0.0
    return fn


def test_support_outside_cone(q):
    p = KernelParams(1.0, 0.5 + 1j)
    far = bump(2.0, 0.5)
    assert phi(1.0, 0.5) < 1.5
    assert kg_fundsol_action_1d(p, 0.5, 0.0, far, 0.0, q) == 0
    assert kg_fundsol_action_1d(p, 0.5, 0.0, bump(0.2, 0.3), 0.0, q) != 0


def test_kinds_and_equal_times(q):
    p = KernelParams(1.0, 0.5 + 1j)
    near = bump(0.0, 0.5)
    assert kg_fundsol_action_1d(p, 0.2, 0.6, near, 0.0, q, kind='retarded') == 0
    assert kg_fundsol_action_1d(p, 0.6, 0.2, near, 0.0, q, kind='advanced') == 0
    assert kg_fundsol_action_1d(p, 0.4, 0.4, near, 0.0, q) == 0
    assert kg_fundsol_action_1d(p, 0.2, 0.6, near, 0.0, q) != 0


def test_three_dimensional_action_on_plane_wave(q):
    q3 = q._replace(sphere_order=12, abs_tol=1e-8, rel_tol=1e-8)
    p = KernelParams(1.0, 0.5 + 1j)
    k = np.array([0.6, 0.0, 0.8])
    x0 = np.array([0.2, 0.1, -0.3])
    value = kg_fundsol_action_3d(p, 0.5, 0.0, lambda x: math.cos(k @ x), x0, q3)
    expected = k1_transform(1.0, p.M, 1.0, 0.5, q) * math.cos(k @ x0)
    assert abs(value - expected) <= 1e-5
