"""
Independent reference solutions for the mode-reduced equations

Nothing here touches the kernel or special-function code: values come from scipy's embedded Runge-Kutta
pairs on doubled real systems and from scipy's scaling-and-squaring matrix exponential.
"""
import logging
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from .clifford import GAMMA, GAMMA0, IDENTITY4
from .common import GridTooCoarse, ODESpec, SpinorValue, StepBudgetExceeded

logger = logging.getLogger(__name__)


def _as_real(y: np.ndarray) -> np.ndarray:
    return np.concatenate([y.real, y.imag])


def _as_complex(y: np.ndarray) -> np.ndarray:
    n = y.shape[0] // 2
    return y[:n] + 1j * y[n:]


def _integrate(rhs: Callable[[float, np.ndarray], np.ndarray], y0: np.ndarray, t: float, s: ODESpec) -> np.ndarray:
    """integrate a complex linear system from 0 to t, returning the complex state"""
    if t == 0:
        return np.array(y0, dtype=complex)

    def real_rhs(time, y):
        return _as_real(rhs(time, _as_complex(y)))

    options = dict(rtol=s.rel_tol, atol=s.abs_tol)
    if s.max_step is not None:
        options.update(max_step=s.max_step, first_step=s.max_step)
    sol = solve_ivp(real_rhs, (0.0, t), _as_real(np.asarray(y0, dtype=complex)), method=s.method, **options)
    if not sol.success:
        raise StepBudgetExceeded(f'integration to t={t} failed: {sol.message}')
    if sol.t.shape[0] - 1 > s.max_steps:
        raise StepBudgetExceeded.from_solution(t, sol.nfev, s.max_steps)
    return _as_complex(sol.y[:, -1])


def kg_mode_oracle(H: float, M: complex, xi_norm: float, u0: complex, u1: complex,
                   source: Optional[Callable[[float], complex]], t: float, s: ODESpec) -> complex:
    """u'' + e^{-2Hs} |xi|^2 u - M^2 u = source(s)"""
    M2, k2 = complex(M) ** 2, xi_norm ** 2

    def rhs(time, y):
        forcing = source(time) if source is not None else 0j
        return np.array([y[1], forcing - (np.exp(-2 * H * time) * k2 - M2) * y[0]])

    return complex(_integrate(rhs, np.array([u0, u1], dtype=complex), t, s)[0])


def mode_generator(H: float, m: complex, xi: Sequence[float], time: float) -> np.ndarray:
    """
    matrix G(s) with Psi' = G(s) Psi - i gamma^0 F(s) for the mode Dirac equation

        i g0 Psi' + i e^{-Hs} g^k (i xi_k) Psi + i (3H/2) g0 Psi - m Psi = F
    """
    spatial = sum(x * GAMMA0 @ GAMMA[k + 1] for k, x in enumerate(xi))
    return -1j * np.exp(-H * time) * spatial - 1.5 * H * IDENTITY4 - 1j * m * GAMMA0


def dirac_mode_oracle(H: float, m: complex, xi: Sequence[float], Psi0: SpinorValue,
                      F: Optional[Callable[[float], Sequence[complex]]], t: float, s: ODESpec) -> SpinorValue:
    def rhs(time, y):
        out = mode_generator(H, m, xi, time) @ y
        if F is not None:
            out = out - 1j * GAMMA0 @ np.asarray(F(time), dtype=complex)
        return out

    return SpinorValue.from_array(_integrate(rhs, Psi0.as_array(), t, s))


def dirac_mode_expm(m: complex, xi: Sequence[float], Psi0: SpinorValue, t: float) -> SpinorValue:
    """free Minkowski mode evolution as a matrix exponential of the constant generator"""
    return SpinorValue.from_array(expm(t * mode_generator(0.0, m, xi, 0.0)) @ Psi0.as_array())


def fixed_step_error(H: float, M: complex, u0: complex, t: float, step: float, order: int = 5) -> float:
    """error of a forced fixed-step run on u'' = M^2 u against u0 cosh(M t); used for order checks"""
    s = ODESpec(rel_tol=1e3, abs_tol=1e3, max_steps=10 ** 7, order=order, max_step=step)
    value = kg_mode_oracle(H, M, 0.0, u0, 0j, None, t, s)
    return abs(value - u0 * np.cosh(M * t))


def residual_dirac_mode(samples: Sequence[SpinorValue], t_grid: Sequence[float], H: float, m: complex,
                        xi: Sequence[float], F: Optional[Callable[[float], Sequence[complex]]] = None) -> float:
    """max over interior points of |mode Dirac operator (4th-order central differences) - F|"""
    times = np.asarray(t_grid, dtype=float)
    if times.shape[0] < 5 or len(samples) != times.shape[0]:
        raise GridTooCoarse(f'need at least 5 samples on the grid, got {times.shape[0]}')
    steps = np.diff(times)
    h = steps[0]
    if h <= 0 or not np.allclose(steps, h, rtol=1e-9, atol=0):
        raise GridTooCoarse('t-grid must be uniform and increasing')
    psi = np.array([sp.as_array() if isinstance(sp, SpinorValue) else np.asarray(sp) for sp in samples],
                   dtype=complex)
    worst = 0.0
    for i in range(2, len(times) - 2):
        d_psi = (-psi[i + 2] + 8 * psi[i + 1] - 8 * psi[i - 1] + psi[i - 2]) / (12 * h)
        spatial = sum(x * GAMMA[k + 1] for k, x in enumerate(xi))
        applied = (1j * GAMMA0 @ d_psi - np.exp(-H * times[i]) * spatial @ psi[i]
                   + 1.5j * H * GAMMA0 @ psi[i] - m * psi[i])
        if F is not None:
            applied = applied - np.asarray(F(times[i]), dtype=complex)
        worst = max(worst, float(np.max(np.abs(applied))))
    return worst
