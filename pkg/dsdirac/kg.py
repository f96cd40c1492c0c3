"""
Klein-Gordon Cauchy problem in de Sitter spacetime by integral transforms of flat wave solutions

    u_tt - e^{-2Ht} A u - M^2 u = f,   u(0) = phi0,   u_t(0) = phi1

For a plane-wave mode e^{i xi.x} the flat wave solution with datum w is w * cos(s |xi|), so every
spatial integral reduces to a one-dimensional integral along the cone radius.
"""
import logging
import math
from typing import Callable, List, NamedTuple, Optional, Sequence

import numpy as np

from .common import FourierMode, InvalidProblem, QuadratureSpec, integrate_complex, integrate_to_endpoint
from .kernels import (KernelParams, kernel_E, kernel_E_dt, kernel_K0, kernel_K1, kernel_mink_I0,
                      kernel_mink_I0_dt, kernel_mink_K0, phi, phi_dt, split_masses)
from .wave import dalembert_1d, kirchhoff_3d

logger = logging.getLogger(__name__)

SourceFn = Callable[[float], complex]


class KGProblem(NamedTuple):
    H: float
    M: complex
    mode: FourierMode = FourierMode()
    phi0: complex = 0j
    phi1: complex = 0j
    source: Optional[SourceFn] = None
    horizon: float = 1.0

    @property
    def is_minkowski(self) -> bool:
        return self.H == 0


def _check_time(p: KGProblem, t: float):
    if not 0 <= t <= p.horizon:
        raise InvalidProblem(f't={t} outside [0, {p.horizon}]')


# de Sitter scalar transforms, all for the mode with wave number k = |xi|

def k1_transform(H: float, M: complex, k: float, t: float, q: QuadratureSpec) -> complex:
    """2 int_0^{phi(t)} K1(s, t; M) cos(k s) ds: the solution with u(0) = 0, u_t(0) = 1"""
    p = KernelParams(H, M)
    return 2 * integrate_to_endpoint(lambda s: kernel_K1(p, s, t) * math.cos(k * s), phi(H, t), q)


def k1_transform_dt(H: float, M: complex, k: float, t: float, q: QuadratureSpec) -> complex:
    upper = phi(H, t)
    if upper <= 0:
        return 1 + 0j if t == 0 else 0j
    p = KernelParams(H, M)
    edge = phi_dt(H, t) * kernel_K1(p, upper, t) * math.cos(k * upper)
    body = integrate_to_endpoint(lambda s: kernel_E_dt(p, s, t) * math.cos(k * s), upper, q)
    return 2 * (edge + body)


def k0_transform(H: float, M: complex, k: float, t: float, q: QuadratureSpec) -> complex:
    """the solution with u(0) = 1, u_t(0) = 0"""
    upper = phi(H, t)
    p = KernelParams(H, M)
    lead = math.exp(H * t / 2) * math.cos(k * upper)
    return lead + 2 * integrate_to_endpoint(lambda s: kernel_K0(p, s, t) * math.cos(k * s), upper, q)


def source_transform(H: float, M: complex, k: float, source: SourceFn, t: float, q: QuadratureSpec) -> complex:
    """2 int_0^t db int_0^{phi(t)-phi(b)} E(r, t; 0, b; M) f(b) cos(k r) dr"""
    inner_q = q.inner()

    def slice_at(b):
        p = KernelParams(H, M, b)
        upper = phi(H, t) - phi(H, b)
        return source(b) * integrate_to_endpoint(lambda r: kernel_E(p, r, t) * math.cos(k * r), upper, inner_q)

    return 2 * integrate_complex(slice_at, 0.0, t, q)


def source_transform_dt(H: float, M: complex, k: float, source: SourceFn, t: float,
                        q: QuadratureSpec) -> complex:
    inner_q = q.inner()
    rate = phi_dt(H, t)

    def slice_at(b):
        p = KernelParams(H, M, b)
        upper = phi(H, t) - phi(H, b)
        if upper <= 0:
            return 0j
        edge = rate * kernel_E(p, upper, t) * math.cos(k * upper)
        body = integrate_to_endpoint(lambda r: kernel_E_dt(p, r, t) * math.cos(k * r), upper, inner_q)
        return source(b) * (edge + body)

    return 2 * integrate_complex(slice_at, 0.0, t, q)


# Minkowski scalar transforms

def k1_transform_minkowski(M: complex, k: float, t: float, q: QuadratureSpec) -> complex:
    return integrate_complex(lambda r: kernel_mink_I0(M, t, 0.0, r) * math.cos(k * r), 0.0, t, q)


def k1_transform_minkowski_dt(M: complex, k: float, t: float, q: QuadratureSpec) -> complex:
    body = integrate_complex(lambda r: kernel_mink_I0_dt(M, t, 0.0, r) * math.cos(k * r), 0.0, t, q)
    return math.cos(k * t) + body


def k0_transform_minkowski(M: complex, k: float, t: float, q: QuadratureSpec) -> complex:
    if t == 0:
        return 1 + 0j
    return math.cos(k * t) - integrate_complex(lambda r: kernel_mink_K0(M, t, r) * math.cos(k * r), 0.0, t, q)


def source_transform_minkowski(M: complex, k: float, source: SourceFn, t: float, q: QuadratureSpec) -> complex:
    inner_q = q.inner()

    def slice_at(b):
        return source(b) * integrate_complex(lambda r: kernel_mink_I0(M, t, b, r) * math.cos(k * r),
                                             0.0, t - b, inner_q)

    return integrate_complex(slice_at, 0.0, t, q)


def source_transform_minkowski_dt(M: complex, k: float, source: SourceFn, t: float,
                                  q: QuadratureSpec) -> complex:
    inner_q = q.inner()

    def slice_at(b):
        body = integrate_complex(lambda r: kernel_mink_I0_dt(M, t, b, r) * math.cos(k * r), 0.0, t - b, inner_q)
        return source(b) * (math.cos(k * (t - b)) + body)

    return integrate_complex(slice_at, 0.0, t, q)


# solvers

def kg_solve_mode(p: KGProblem, t: float, q: QuadratureSpec) -> complex:
    if p.H <= 0:
        raise InvalidProblem('kg_solve_mode needs H > 0, use kg_solve_mode_minkowski for H = 0')
    _check_time(p, t)
    k = p.mode.xi_norm
    logger.debug('kg mode solve H=%g M=%s |xi|=%g t=%g', p.H, p.M, k, t)
    u = 0j
    if p.phi0 != 0:
        u += p.phi0 * k0_transform(p.H, p.M, k, t, q)
    if p.phi1 != 0:
        u += p.phi1 * k1_transform(p.H, p.M, k, t, q)
    if p.source is not None:
        u += source_transform(p.H, p.M, k, p.source, t, q)
    return u


def kg_solve_mode_minkowski(p: KGProblem, t: float, q: QuadratureSpec) -> complex:
    if p.H != 0:
        raise InvalidProblem('kg_solve_mode_minkowski needs H = 0')
    _check_time(p, t)
    k = p.mode.xi_norm
    u = 0j
    if p.phi0 != 0:
        u += p.phi0 * k0_transform_minkowski(p.M, k, t, q)
    if p.phi1 != 0:
        u += p.phi1 * k1_transform_minkowski(p.M, k, t, q)
    if p.source is not None:
        u += source_transform_minkowski(p.M, k, p.source, t, q)
    return u


def kg_solve_diagonal(problems: Sequence[KGProblem], t: float, q: QuadratureSpec,
                      m: Optional[complex] = None) -> List[complex]:
    """
    componentwise solve of the spinorial system; components 0, 1 carry M+ and 2, 3 carry M-.

    when ``m`` is given the component masses are checked against split_masses(H, m)
    """
    if len(problems) != 4:
        raise InvalidProblem('the diagonal system has four components')
    H = problems[0].H
    if any(pr.H != H or tuple(pr.mode.xi) != tuple(problems[0].mode.xi) for pr in problems):
        raise InvalidProblem('components must share H and the Fourier mode')
    if m is not None:
        plus, minus = split_masses(H, m)
        if [pr.M for pr in problems] != [plus, plus, minus, minus]:
            raise InvalidProblem('component masses must be (M+, M+, M-, M-)')
    return [kg_solve_mode(pr, t, q) for pr in problems]


def covariant_from_noncovariant(H: float, t: float, u: complex) -> complex:
    """psi = e^{-3Ht/2} u turns the non-covariant solution into one of the covariant equation"""
    return u * math.exp(-1.5 * H * t)


def noncovariant_from_covariant(H: float, t: float, psi: complex) -> complex:
    return psi * math.exp(1.5 * H * t)


# fundamental solution actions

def _oriented_span(H: float, t: float, t0: float):
    span = phi(H, t) - phi(H, t0)
    return (1.0 if span > 0 else -1.0), abs(span)


def kg_fundsol_action_1d(p: KernelParams, t: float, t0: float, testfn: Callable[[float], complex],
                         x0: float, q: QuadratureSpec, kind: str = 'auto') -> complex:
    """
    <E_{+/-,KG}(., t; x0, t0; M), testfn> on the line; retarded for t > t0, advanced for t < t0.

    ``kind`` restricts to one of the two propagators, the other side of t0 then pairs to zero
    """
    if t == t0:
        return 0j
    sign, span = _oriented_span(p.H, t, t0)
    if (kind == 'retarded' and sign < 0) or (kind == 'advanced' and sign > 0):
        return 0j
    kp = p._replace(t0=t0)
    integral = integrate_to_endpoint(lambda r: kernel_E(kp, r, t) * 2 * dalembert_1d(testfn, x0, r), span, q)
    return sign * integral


def kg_fundsol_action_1d_dt(p: KernelParams, t: float, t0: float, testfn: Callable[[float], complex],
                            x0: float, q: QuadratureSpec, kind: str = 'auto') -> complex:
    if t == t0:
        return 0j
    sign, span = _oriented_span(p.H, t, t0)
    if (kind == 'retarded' and sign < 0) or (kind == 'advanced' and sign > 0):
        return 0j
    kp = p._replace(t0=t0)
    edge = sign * phi_dt(p.H, t) * kernel_E(kp, span, t) * 2 * dalembert_1d(testfn, x0, span)
    body = integrate_to_endpoint(lambda r: kernel_E_dt(kp, r, t) * 2 * dalembert_1d(testfn, x0, r), span, q)
    return sign * (edge + body)


def kg_fundsol_action_mode(p: KernelParams, t: float, t0: float, xi: float, q: QuadratureSpec) -> complex:
    """pairing against e^{i xi x} at x0 = 0, i.e. the mode form of the retarded propagator"""
    return kg_fundsol_action_1d(p, t, t0, lambda x: np.exp(1j * xi * x), 0.0, q)


def kg_fundsol_action_3d(p: KernelParams, t: float, t0: float, testfn: Callable, x0: Sequence[float],
                         q: QuadratureSpec) -> complex:
    """n = 3 action: the wave propagator pairs as d/dr [r * spherical mean of testfn about x0]"""
    if t == t0:
        return 0j
    sign, span = _oriented_span(p.H, t, t0)
    kp = p._replace(t0=t0)
    integral = integrate_to_endpoint(lambda r: kernel_E(kp, r, t) * 2 * kirchhoff_3d(testfn, x0, r, q), span, q)
    return sign * integral
