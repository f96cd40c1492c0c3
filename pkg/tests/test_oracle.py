import math

import numpy as np
import pytest

from dsdirac.common import ConfigError, GridTooCoarse, ODESpec, SpinorValue, StepBudgetExceeded
from dsdirac.oracle import (dirac_mode_expm, dirac_mode_oracle, fixed_step_error, kg_mode_oracle, mode_generator,
                            residual_dirac_mode)


def test_kg_oracle_hyperbolic(ode):
    assert abs(kg_mode_oracle(1.0, 0.8, 0.0, 1, 0, None, 1.0, ode) - math.cosh(0.8)) <= 1e-9
    assert kg_mode_oracle(1.0, 0.8, 3.0, 0.2, 1j, None, 0.0, ode) == 0.2


def test_kg_oracle_flat_oscillation(ode):
    # M^2 = -1 and |xi| = 0 give u'' = -u
    assert abs(kg_mode_oracle(0.0, 1j, 0.0, 0, 1, None, 2.0, ode) - math.sin(2.0)) <= 1e-9


def test_dirac_norm_decays_at_three_halves_H(ode):
    Phi = SpinorValue.from_array(np.array([1, 1j, -0.5, 0.2]))
    H, t = 0.7, 1.0
    psi = dirac_mode_oracle(H, 1.5, (1.0, -2.0, 0.5), Phi, None, t, ode)
    assert abs(math.sqrt(psi.norm2) - math.exp(-1.5 * H * t) * math.sqrt(Phi.norm2)) <= 1e-9


def test_expm_agrees_with_integration(ode):
    Phi = SpinorValue(0, 1, 0, 1j)
    xi, m, t = (0.3, 0.0, -1.2), 0.9, 0.8
    value = dirac_mode_expm(m, xi, Phi, t).as_array()
    np.testing.assert_allclose(value, dirac_mode_oracle(0.0, m, xi, Phi, None, t, ode).as_array(), atol=1e-9)
    assert abs(np.linalg.norm(value) - math.sqrt(Phi.norm2)) <= 1e-12


def test_tighter_tolerances_agree(ode):
    tight = ode._replace(rel_tol=ode.rel_tol / 100, abs_tol=ode.abs_tol / 100)
    source = lambda b: math.cos(2 * b)
    coarse = kg_mode_oracle(1.0, 0.5 + 1j, 4.0, 1, 0.3j, source, 1.0, ode)
    fine = kg_mode_oracle(1.0, 0.5 + 1j, 4.0, 1, 0.3j, source, 1.0, tight)
    assert abs(coarse - fine) <= 1e-7 * abs(fine)
    Phi = SpinorValue(0.5, 0, 1j, -0.5)
    coarse = dirac_mode_oracle(0.5, 2.0, (0.0, 2.4, 3.2), Phi, None, 1.0, ode).as_array()
    fine = dirac_mode_oracle(0.5, 2.0, (0.0, 2.4, 3.2), Phi, None, 1.0, tight).as_array()
    assert np.max(np.abs(coarse - fine)) <= 1e-7 * np.max(np.abs(fine))


def test_generator_is_traceless_apart_from_damping():
    G = mode_generator(1.0, 2.0, (1.0, 0.0, 0.0), 0.3)
    assert abs(np.trace(G) + 4 * 1.5) <= 1e-14


def test_fixed_step_order():
    coarse = fixed_step_error(0.0, 1.0, 1.0, 1.0, 0.1)
    fine = fixed_step_error(0.0, 1.0, 1.0, 1.0, 0.05)
    assert coarse / fine >= 16


def test_step_budget():
    with pytest.raises(StepBudgetExceeded):
        kg_mode_oracle(1.0, 0.8, 4.0, 1, 0, None, 1.0, ODESpec(max_steps=3))


def test_low_order_is_a_config_error():
    with pytest.raises(ConfigError):
        ODESpec(order=3).method
    assert ODESpec(order=5).method == 'RK45'
    assert ODESpec().method == 'DOP853'


def test_residual_of_oracle_trajectory(ode):
    H, m, xi = 1.0, 1.0, (0.0, 1.0, 0.0)
    F = lambda s: np.array([math.exp(-s), 0, 0, 0])
    Phi = SpinorValue(1, 0, 0, 0)
    grid = 0.2 + 0.02 * np.arange(11)
    samples = [dirac_mode_oracle(H, m, xi, Phi, F, float(t), ode) for t in grid]
    assert residual_dirac_mode(samples, grid, H, m, xi, F) <= 1e-6


def test_residual_grid_checks():
    samples = [SpinorValue(1, 0, 0, 0)] * 5
    with pytest.raises(GridTooCoarse):
        residual_dirac_mode(samples[:4], [0, 0.1, 0.2, 0.3], 1.0, 1.0, (0, 0, 0))
    with pytest.raises(GridTooCoarse):
        residual_dirac_mode(samples, [0, 0.1, 0.2, 0.35, 0.4], 1.0, 1.0, (0, 0, 0))
