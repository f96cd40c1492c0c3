"""
de Sitter kernel functions E, K0, K1 and their Minkowski Bessel counterparts

E(r, t; 0, t0; M) maps solutions of the flat wave equation to solutions of the de Sitter Klein-Gordon
equation with (possibly complex) mass parameter M. All functions here are pure.
"""
import cmath
import math
from typing import NamedTuple, Tuple

from .common import OutsideCone
from .specfun import Hyp2F1Params, bessel_i0, bessel_j1, hyp2f1, hyp2f1_dz

LOG4 = math.log(4.0)
SNAP = 1e-13


class KernelParams(NamedTuple):
    H: float
    M: complex
    t0: float = 0.0

    @property
    def ratio(self) -> complex:
        return complex(self.M) / self.H

    @property
    def is_massless(self) -> bool:
        return complex(self.M) == self.H / 2


class ConeCoords(NamedTuple):
    r: float
    t: float
    z: float
    base: float
    numerator: float


def phi(H: float, t: float) -> float:
    return -math.expm1(-H * t) / H


def phi_dt(H: float, t: float) -> float:
    return math.exp(-H * t)


def split_masses(H: float, m: complex) -> Tuple[complex, complex]:
    return H / 2 + 1j * m, H / 2 - 1j * m


def cone_coords(p: KernelParams, r: float, t: float) -> ConeCoords:
    x, y, hr = math.exp(-p.H * t), math.exp(-p.H * p.t0), p.H * r
    base = (x + y) ** 2 - hr ** 2
    numerator = (x - y) ** 2 - hr ** 2
    if base <= 0:
        raise OutsideCone.from_coords(r, t, p.t0, 'prefactor base is not positive')
    z = numerator / base
    if -SNAP < z < 0:
        z = 0.0
    elif 1 < z < 1 + SNAP:
        z = 1.0
    if not 0 <= z <= 1:
        raise OutsideCone.from_coords(r, t, p.t0, f'z={z} not in [0, 1]')
    return ConeCoords(r, t, z, base, numerator)


def _prefactor(p: KernelParams, c: ConeCoords) -> complex:
    ratio = p.ratio
    return cmath.exp(-ratio * LOG4 + p.M * (p.t0 + c.t) + (ratio - 0.5) * math.log(c.base))


def kernel_E(p: KernelParams, r: float, t: float) -> complex:
    c = cone_coords(p, r, t)
    if p.is_massless:
        return 0.5 * math.exp(p.H / 2 * (p.t0 + t))
    return _prefactor(p, c) * hyp2f1(Hyp2F1Params.kernel_family(p.M, p.H), c.z)


def kernel_E_dt(p: KernelParams, r: float, t: float) -> complex:
    c = cone_coords(p, r, t)
    if p.is_massless:
        return p.H / 4 * math.exp(p.H / 2 * (p.t0 + t))
    H, ratio = p.H, p.ratio
    x, y = math.exp(-H * t), math.exp(-H * p.t0)
    d_base = -2 * H * x * (x + y)
    d_num = -2 * H * x * (x - y)
    dz = (d_num * c.base - c.numerator * d_base) / c.base ** 2
    params = Hyp2F1Params.kernel_family(p.M, H)
    log_dt = p.M + (ratio - 0.5) * d_base / c.base
    return _prefactor(p, c) * (log_dt * hyp2f1(params, c.z) + hyp2f1_dz(params, c.z) * dz)


def kernel_K1(p: KernelParams, r: float, t: float) -> complex:
    return kernel_E(p._replace(t0=0.0), r, t)


def kernel_K0(p: KernelParams, r: float, t: float) -> complex:
    """
    -dE/db at b = 0, in closed form:

    -4^{-M/H} e^{Mt} D^{M/H-5/2} [ D (M x^2 - M (Hr)^2 - M + H + H x) F(a, a; 1; z)
                                   + (H - 2M)^2 / H * x (x^2 - 1 - (Hr)^2) F(a+1, a+1; 2; z) ]

    with x = e^{-Ht}, D = (1 + x)^2 - (Hr)^2 and a = 1/2 - M/H.
    """
    p0 = p._replace(t0=0.0)
    c = cone_coords(p0, r, t)
    H, M, ratio = p.H, complex(p.M), p.ratio
    x, hr2 = math.exp(-H * t), (H * r) ** 2
    params = Hyp2F1Params.kernel_family(M, H)
    lead = cmath.exp(-ratio * LOG4 + M * t + (ratio - 2.5) * math.log(c.base))
    first = c.base * (M * x * x - M * hr2 - M + H + H * x) * hyp2f1(params, c.z)
    coupling = (H - 2 * M) ** 2
    second = 0j
    if coupling != 0:
        second = coupling / H * x * (x * x - 1 - hr2) * hyp2f1(params.shifted(), c.z)
    return -lead * (first + second)


def _mink_radius(span: float, r: float) -> float:
    if r < 0 or r > span:
        raise OutsideCone(f'r={r} outside [0, {span}]')
    return math.sqrt(max(span * span - r * r, 0.0))


def kernel_mink_I0(M: complex, t: float, b: float, r: float) -> complex:
    return bessel_i0(M * _mink_radius(t - b, r))


def kernel_mink_K0(M: complex, t: float, r: float) -> complex:
    if r >= t:
        raise OutsideCone(f'r={r} must be below t={t}')
    rho = _mink_radius(t, r)
    if rho == 0:
        return -complex(M) ** 2 * t / 2
    return 1j * M * t / rho * bessel_j1(1j * M * rho)


def kernel_mink_I0_dt(M: complex, t: float, b: float, r: float) -> complex:
    """d/dt of I0(M sqrt((t-b)^2 - r^2)), equal to -kernel_mink_K0 with the interval length t - b"""
    span = t - b
    rho = _mink_radius(span, r)
    if rho == 0:
        return complex(M) ** 2 * span / 2
    return -1j * M * span / rho * bessel_j1(1j * M * rho)


def limit_check_E_to_I0(H: float, M: complex, t: float, b: float, r: float) -> float:
    return abs(2 * kernel_E(KernelParams(H, M, b), r, t) - kernel_mink_I0(M, t, b, r))
