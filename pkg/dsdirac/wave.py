"""
Solutions of the flat wave equation with zero initial velocity: plane-wave modes, d'Alembert (n=1),
Kirchhoff spherical means (n=3)
"""
import math
from functools import lru_cache
from typing import Callable, NamedTuple, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .common import QuadratureBudgetExceeded, QuadratureSpec


class WaveSolution(NamedTuple):
    evaluate: Callable
    provenance: str

    def __call__(self, x, s):
        return self.evaluate(x, s)


def mode_wave(xi: Sequence[float], s: float) -> float:
    return math.cos(s * float(np.linalg.norm(np.asarray(xi, dtype=float))))


def dalembert_1d(phi: Callable[[float], complex], x: float, s: float):
    return (phi(x + s) + phi(x - s)) / 2


@lru_cache(maxsize=8)
def sphere_rule(order: int):
    """product rule on the unit sphere: Gauss-Legendre in cos(theta), trapezoid in the azimuth"""
    if order < 2:
        raise QuadratureBudgetExceeded(f'sphere rule order {order} too low')
    mu, w_mu = leggauss(order)
    n_az = 2 * order
    az = 2 * math.pi * np.arange(n_az) / n_az
    sin_t = np.sqrt(1 - mu ** 2)
    nodes = np.stack([np.outer(sin_t, np.cos(az)).ravel(),
                      np.outer(sin_t, np.sin(az)).ravel(),
                      np.repeat(mu, n_az)], axis=1)
    weights = np.repeat(w_mu, n_az) / (2 * n_az)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def spherical_mean(phi: Callable, x: Sequence[float], s: float, q: QuadratureSpec):
    nodes, weights = sphere_rule(q.sphere_order)
    centre = np.asarray(x, dtype=float)
    values = [phi(centre + s * node) for node in nodes]
    return sum(w * v for w, v in zip(weights, values))


def kirchhoff_3d(phi: Callable, x: Sequence[float], s: float, q: QuadratureSpec):
    """d/ds [s * spherical mean], central difference in s (one-sided above s=0 by evenness of the mean)"""
    h = q.fd_step

    def weighted(radius):
        return radius * spherical_mean(phi, x, abs(radius), q)

    return (weighted(s + h) - weighted(s - h)) / (2 * h)


def mode_wave_solution(xi: Sequence[float]) -> WaveSolution:
    return WaveSolution(lambda _, s: mode_wave(xi, s), 'mode-exact')


def dalembert_solution(phi: Callable[[float], complex]) -> WaveSolution:
    return WaveSolution(lambda x, s: dalembert_1d(phi, x, s), 'dalembert-1d')


def kirchhoff_solution(phi: Callable, q: QuadratureSpec) -> WaveSolution:
    return WaveSolution(lambda x, s: kirchhoff_3d(phi, x, s, q), 'kirchhoff-3d')
