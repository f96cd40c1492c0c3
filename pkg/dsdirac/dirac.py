"""
Dirac equation in de Sitter spacetime by diagonalisation into two Klein-Gordon blocks

    (i g0 d0 + i e^{-Ht} g^k dk + i (3H/2) g0 - m) Psi = F

The solution is Psi = e^{-Ht} (i g0 d0 + i e^{-Ht} g^k dk - i (H/2) g0 + m) X where X solves the diagonal
Klein-Gordon system with masses (M+, M+, M-, M-) = split_masses(H, m), X(0) = 0, X_t(0) = -i g0 Phi and
source -e^{Ht} F. For a plane-wave mode dk acts as i xi_k.
"""
import logging
import math
from collections import Counter
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from .clifford import GAMMA, GAMMA0
from .common import DegenerateInterval, InvalidProblem, QuadratureSpec, SpinorValue, integrate_complex
from .kernels import KernelParams, phi, split_masses
from .kg import (k1_transform, k1_transform_dt, k1_transform_minkowski, k1_transform_minkowski_dt,
                 kg_fundsol_action_1d, kg_fundsol_action_1d_dt, source_transform, source_transform_dt,
                 source_transform_minkowski, source_transform_minkowski_dt)

logger = logging.getLogger(__name__)

SpinorSource = Callable[[float], Sequence[complex]]
BLOCKS = (('M+', (0, 1)), ('M-', (2, 3)))


class DiracModeProblem(NamedTuple):
    H: float
    m: complex
    xi: Sequence[float] = (0.0, 0.0, 0.0)
    Phi: SpinorValue = SpinorValue(1, 0, 0, 0)
    F: Optional[SpinorSource] = None
    horizon: float = 1.0

    @property
    def xi_norm(self) -> float:
        return float(np.linalg.norm(np.asarray(self.xi, dtype=float)))

    @property
    def block_masses(self):
        return split_masses(self.H, self.m)


def _spatial(xi: Sequence[float]) -> np.ndarray:
    return sum(x * GAMMA[k + 1] for k, x in enumerate(xi))


def _check(p: DiracModeProblem, t: float):
    if not 0 <= t <= p.horizon:
        raise InvalidProblem(f't={t} outside [0, {p.horizon}]')


def _component_source(F: SpinorSource, j: int, weight: float):
    return lambda b: math.exp(weight * b) * complex(np.asarray(F(b), dtype=complex)[j])


def _assemble(H: float, m: complex, xi: Sequence[float], t: float, X: np.ndarray, dX: np.ndarray) -> SpinorValue:
    decay = math.exp(-H * t)
    psi = 1j * GAMMA0 @ dX - decay * _spatial(xi) @ X - 0.5j * H * GAMMA0 @ X + m * X
    return SpinorValue.from_array(decay * psi)


def dirac_solve_mode(p: DiracModeProblem, t: float, q: QuadratureSpec,
                     counters: Optional[Counter] = None) -> SpinorValue:
    if p.H <= 0:
        raise InvalidProblem('dirac_solve_mode needs H > 0')
    _check(p, t)
    counters = Counter() if counters is None else counters
    k = p.xi_norm
    datum = -1j * GAMMA0 @ p.Phi.as_array()
    X, dX = np.zeros(4, dtype=complex), np.zeros(4, dtype=complex)
    for (name, comps), mass in zip(BLOCKS, p.block_masses):
        active = any(datum[j] != 0 for j in comps)
        if not active and p.F is None:
            logger.debug('block %s has no data, skipped', name)
            continue
        if active:
            counters[name] += 1
            kappa = k1_transform(p.H, mass, k, t, q)
            d_kappa = k1_transform_dt(p.H, mass, k, t, q)
            for j in comps:
                X[j] += kappa * datum[j]
                dX[j] += d_kappa * datum[j]
        if p.F is not None:
            for j in comps:
                counters[name] += 1
                src = _component_source(p.F, j, p.H)
                X[j] -= source_transform(p.H, mass, k, src, t, q)
                dX[j] -= source_transform_dt(p.H, mass, k, src, t, q)
    return _assemble(p.H, p.m, p.xi, t, X, dX)


def _sinc_length(k: float, length: float) -> float:
    return math.sin(k * length) / k if k else length


def dirac_solve_mode_massless(p: DiracModeProblem, t: float, q: QuadratureSpec) -> SpinorValue:
    if p.m != 0:
        raise InvalidProblem('the massless path needs m = 0')
    if p.H <= 0:
        raise InvalidProblem('dirac_solve_mode_massless needs H > 0')
    _check(p, t)
    H, k = p.H, p.xi_norm
    grow, rate, upper = math.exp(H * t / 2), math.exp(-H * t), phi(H, t)
    kappa = grow * _sinc_length(k, upper)
    d_kappa = H / 2 * kappa + grow * math.cos(k * upper) * rate
    datum = -1j * GAMMA0 @ p.Phi.as_array()
    X, dX = kappa * datum, d_kappa * datum
    if p.F is not None:
        for j in range(4):
            src = _component_source(p.F, j, 1.5 * H)
            G = grow * integrate_complex(lambda b: src(b) * _sinc_length(k, upper - phi(H, b)), 0.0, t, q)
            dG = H / 2 * G + grow * rate * integrate_complex(
                lambda b: src(b) * math.cos(k * (upper - phi(H, b))), 0.0, t, q)
            X[j] -= G
            dX[j] -= dG
    return _assemble(H, 0, p.xi, t, X, dX)


def dirac_solve_mode_minkowski(p: DiracModeProblem, t: float, q: QuadratureSpec) -> SpinorValue:
    if p.H != 0:
        raise InvalidProblem('dirac_solve_mode_minkowski needs H = 0')
    _check(p, t)
    k = p.xi_norm
    datum = 1j * GAMMA0 @ p.Phi.as_array()
    Y, dY = np.zeros(4, dtype=complex), np.zeros(4, dtype=complex)
    for (name, comps), mass in zip(BLOCKS, (1j * p.m, -1j * p.m)):
        if any(datum[j] != 0 for j in comps):
            kappa = k1_transform_minkowski(mass, k, t, q)
            d_kappa = k1_transform_minkowski_dt(mass, k, t, q)
            for j in comps:
                Y[j] += kappa * datum[j]
                dY[j] += d_kappa * datum[j]
        if p.F is not None:
            for j in comps:
                src = _component_source(p.F, j, 0.0)
                Y[j] += source_transform_minkowski(mass, k, src, t, q)
                dY[j] += source_transform_minkowski_dt(mass, k, src, t, q)
    psi = 1j * GAMMA0 @ dY - _spatial(p.xi) @ Y + p.m * Y
    return SpinorValue.from_array(-psi)


def _component(fn: SpinorSource, j: int):
    return lambda x: complex(np.asarray(fn(x), dtype=complex)[j])


def _derivative(fn: Callable[[float], Sequence[complex]], h: float):
    def dfn(x):
        return (np.asarray(fn(x - 2 * h)) - 8 * np.asarray(fn(x - h))
                + 8 * np.asarray(fn(x + h)) - np.asarray(fn(x + 2 * h))) / (12 * h)
    return dfn


def dirac_fundsol_action_1d(H: float, m: complex, t: float, t0: float, x0: float, testfn: SpinorSource,
                            q: QuadratureSpec, testfn_dx: Optional[SpinorSource] = None,
                            kind: str = 'auto') -> SpinorValue:
    """
    <E^{ret/adv}(., t; x0, t0; m), testfn> on the line, with g^1 the only spatial matrix.

    the spatial derivative is moved onto the test function, d/dt acts on the Klein-Gordon actions
    """
    if t == t0:
        raise DegenerateInterval(f'the Dirac propagator is not a function at t = t0 = {t0}')
    testfn_dx = testfn_dx or _derivative(testfn, q.fd_step)
    plus, minus = split_masses(H, m)
    K, dK, K_dx = (np.zeros(4, dtype=complex) for _ in range(3))
    for j, mass in enumerate((plus, plus, minus, minus)):
        kp = KernelParams(H, mass, t0)
        K[j] = kg_fundsol_action_1d(kp, t, t0, _component(testfn, j), x0, q, kind)
        dK[j] = kg_fundsol_action_1d_dt(kp, t, t0, _component(testfn, j), x0, q, kind)
        K_dx[j] = kg_fundsol_action_1d(kp, t, t0, _component(testfn_dx, j), x0, q, kind)
    decay = math.exp(-H * t)
    inner = (1j * GAMMA0 @ dK - 1j * decay * GAMMA[1] @ K_dx - 0.5j * H * GAMMA0 @ K + m * K)
    return SpinorValue.from_array(-decay * math.exp(H * t0) * inner)
