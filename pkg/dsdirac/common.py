"""
Shared records, exceptions and the adaptive quadrature helper used across the package
"""
import logging
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np
from scipy.integrate import quad

from .settings import AccuracyEnviron

logger = logging.getLogger(__name__)


class DsDiracError(Exception):
    pass


class ConfigError(DsDiracError):
    @classmethod
    def from_field(cls, field: str, raw: str, err: Exception):
        return cls(f'could not parse {field}={raw!r}: {err}')


class InvalidProblem(ConfigError, ValueError):
    """Problem parameters outside the domain a solver accepts"""


class NumericalError(DsDiracError):
    pass


class DivergentSeries(NumericalError):
    """Series did not reach its stagnation criterion within the term cap, or was asked to sum at a divergent point"""


class ParameterPole(NumericalError):
    pass


class OutsideCone(NumericalError):
    """Kernel evaluated outside the light cone of the source point"""

    @classmethod
    def from_coords(cls, r, t, t0, reason: str):
        return cls(f'(r={r}, t={t}) lies outside the cone from t0={t0}: {reason}')


class QuadratureBudgetExceeded(NumericalError):
    @classmethod
    def from_quad(cls, a, b, message: str):
        return cls(f'quadrature over [{a}, {b}] hit the subdivision limit: {message}')


class StepBudgetExceeded(NumericalError):
    @classmethod
    def from_solution(cls, t_end, nfev: int, max_steps: int):
        return cls(f'integration to t={t_end} used {nfev} evaluations, budget {max_steps} steps')


class GridTooCoarse(NumericalError):
    pass


class DegenerateInterval(NumericalError):
    pass


class CheckError(DsDiracError):
    pass


class NonSmoothPoint(CheckError):
    pass


class SingularCoordinatePoint(CheckError):
    @classmethod
    def from_point(cls, example: str, point):
        return cls(f'{example} coordinates are singular at {tuple(point)}')


class PreconditionFailure(CheckError):
    pass


class QuadratureSpec(NamedTuple):
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 200
    boundary_offset: float = 1e-8
    fd_step: float = 1e-4
    sphere_order: int = 32

    @classmethod
    def from_environ(cls):
        return cls(abs_tol=AccuracyEnviron.QUAD_ABS_TOL,
                   rel_tol=AccuracyEnviron.QUAD_REL_TOL,
                   max_subdivisions=AccuracyEnviron.QUAD_MAX_SUBDIVISIONS,
                   boundary_offset=AccuracyEnviron.QUAD_BOUNDARY_OFFSET,
                   fd_step=AccuracyEnviron.FD_STEP,
                   sphere_order=AccuracyEnviron.SPHERE_ORDER)

    def validate(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ConfigError('quadrature tolerances must be positive')
        if self.max_subdivisions < 1:
            raise ConfigError('max_subdivisions must be at least 1')
        if not 0 < self.boundary_offset < 1 / 3:
            raise ConfigError(f'boundary_offset must lie in (0, 1/3), got {self.boundary_offset}')
        return self

    def inner(self, pieces: int = 10) -> 'QuadratureSpec':
        """tolerances for the inner rule of an iterated integral"""
        return self._replace(abs_tol=self.abs_tol / pieces)


class ODESpec(NamedTuple):
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_steps: int = 200000
    order: int = 8
    max_step: Optional[float] = None

    @classmethod
    def from_environ(cls):
        return cls(rel_tol=AccuracyEnviron.ODE_REL_TOL,
                   abs_tol=AccuracyEnviron.ODE_ABS_TOL,
                   max_steps=AccuracyEnviron.ODE_MAX_STEPS,
                   order=AccuracyEnviron.ODE_ORDER)

    @property
    def method(self) -> str:
        if self.order < 4:
            raise ConfigError(f'ODE method order must be at least 4, got {self.order}')
        return 'DOP853' if self.order >= 8 else 'RK45'


class SpinorValue(NamedTuple):
    c0: complex
    c1: complex
    c2: complex
    c3: complex

    @classmethod
    def from_array(cls, arr: Sequence[complex]):
        arr = np.asarray(arr, dtype=complex)
        if arr.shape != (4,):
            raise ValueError(f'spinor needs 4 components, got shape {arr.shape}')
        return cls(*(complex(c) for c in arr))

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=complex)

    @property
    def norm2(self) -> float:
        return float(sum(abs(c) ** 2 for c in self))


class FourierMode(NamedTuple):
    xi: Sequence[float] = (0.0, 0.0, 0.0)
    amplitude: complex = 1.0

    @property
    def xi_norm(self) -> float:
        return float(np.linalg.norm(np.asarray(self.xi, dtype=float)))


ComplexFn = Callable[[float], complex]


def integrate_complex(fn: ComplexFn, a: float, b: float, q: QuadratureSpec) -> complex:
    """Adaptive Gauss-Kronrod integral of a complex integrand, real and imaginary parts separately"""
    if b == a:
        return 0j
    parts = []
    for take in (lambda x: fn(x).real, lambda x: fn(x).imag):
        res = quad(take, a, b, epsabs=q.abs_tol, epsrel=q.rel_tol, limit=q.max_subdivisions, full_output=1)
        if len(res) > 3:
            ier_message = res[3]
            if 'maximum number of subdivisions' in ier_message:
                raise QuadratureBudgetExceeded.from_quad(a, b, ier_message)
            logger.warning('quadrature over [%g, %g]: %s', a, b, ier_message.splitlines()[0])
        parts.append(res[0])
    return complex(parts[0], parts[1])


def integrate_to_endpoint(fn: ComplexFn, upper: float, q: QuadratureSpec) -> complex:
    """
    integral over [0, upper] for integrands that steepen at the moving endpoint.

    the rule stops at upper - offset and extrapolates the tail linearly from the last two offset slabs,
    tail = 2 S1 - S2, exact for integrands that are linear near the endpoint
    """
    if upper <= 0:
        return 0j
    delta = q.boundary_offset * upper
    body = integrate_complex(fn, 0.0, upper - delta, q)
    last = integrate_complex(fn, upper - 2 * delta, upper - delta, q)
    before = integrate_complex(fn, upper - 3 * delta, upper - 2 * delta, q)
    return body + 2 * last - before
