"""
Gauss hypergeometric function on [0, 1] and entire Bessel series for complex arguments
"""
import cmath
import logging
from functools import lru_cache
from typing import NamedTuple

from scipy.special import gamma, rgamma

from .common import DivergentSeries, ParameterPole
from .settings import AccuracyEnviron

logger = logging.getLogger(__name__)


class Hyp2F1Params(NamedTuple):
    a: complex
    b: complex
    c: complex

    @classmethod
    def kernel_family(cls, M: complex, H: float) -> 'Hyp2F1Params':
        a = 0.5 - M / H
        return cls(a, a, 1.0)

    def shifted(self) -> 'Hyp2F1Params':
        return Hyp2F1Params(self.a + 1, self.b + 1, self.c + 1)

    @property
    def excess(self) -> complex:
        """c - a - b, the exponent governing behaviour at z = 1"""
        return complex(self.c - self.a - self.b)


def _near_integer(w: complex, tol: float) -> bool:
    return abs(w.imag) <= tol and abs(w.real - round(w.real)) <= tol


def _is_pole(c: complex, tol: float) -> bool:
    return _near_integer(complex(c), tol) and round(complex(c).real) <= 0


def _sum_series(next_ratio, first=1.0 + 0j):
    """sum terms t_k with t_{k+1} = t_k * next_ratio(k) until the stagnation rule or the term cap"""
    rel_tol = AccuracyEnviron.SERIES_REL_TOL
    stagnation = AccuracyEnviron.SERIES_STAGNATION
    max_terms = AccuracyEnviron.SERIES_MAX_TERMS
    term, total, quiet = complex(first), complex(first), 0
    for k in range(max_terms):
        term *= next_ratio(k)
        total += term
        if abs(term) <= rel_tol * abs(total) or term == 0:
            quiet += 1
            if quiet >= stagnation:
                return total
        else:
            quiet = 0
    raise DivergentSeries(f'series did not stagnate within {max_terms} terms')


def _hyp2f1_series(p: Hyp2F1Params, z: complex) -> complex:
    a, b, c = complex(p.a), complex(p.b), complex(p.c)
    if z == 0:
        return 1 + 0j
    return _sum_series(lambda k: (a + k) * (b + k) / ((c + k) * (k + 1)) * z)


def _hyp2f1_reflected(p: Hyp2F1Params, z: complex) -> complex:
    """linear transformation z -> 1 - z, valid when c - a - b is not an integer"""
    a, b, c = complex(p.a), complex(p.b), complex(p.c)
    s = p.excess
    w = 1 - z
    first = gamma(c) * gamma(s) * rgamma(c - a) * rgamma(c - b)
    second = gamma(c) * gamma(-s) * rgamma(a) * rgamma(b)
    out = 0j
    if first != 0:
        out += first * _hyp2f1_series(Hyp2F1Params(a, b, 1 - s), w)
    if second != 0:
        out += second * cmath.exp(s * cmath.log(w)) * _hyp2f1_series(Hyp2F1Params(c - a, c - b, 1 + s), w)
    return complex(out)


def _gauss_at_one(p: Hyp2F1Params) -> complex:
    a, b, c = complex(p.a), complex(p.b), complex(p.c)
    return complex(gamma(c) * gamma(p.excess) * rgamma(c - a) * rgamma(c - b))


@lru_cache(maxsize=64)
def _warn_degenerate(p: Hyp2F1Params):
    """logged once per parameter set"""
    logger.warning('integer c-a-b=%s for %s, summing the slow direct series near z=1', p.excess, p)


def hyp2f1(p: Hyp2F1Params, z: complex) -> complex:
    tol = AccuracyEnviron.INTEGER_TOL
    if _is_pole(p.c, tol):
        raise ParameterPole(f'c={p.c} is a nonpositive integer')
    if p.a == 0 or p.b == 0 or z == 0:
        return 1 + 0j
    z = complex(z)
    if abs(z) > 1:
        raise DivergentSeries(f'|z|={abs(z)} outside the unit disc')
    if z == 1:
        if p.excess.real <= 0:
            raise DivergentSeries(f'F diverges at z=1 with Re(c-a-b)={p.excess.real}')
        return _gauss_at_one(p)
    if abs(z) <= AccuracyEnviron.REFLECTION_SPLIT or z.imag != 0 or z.real < 0:
        return _hyp2f1_series(p, z)
    if _near_integer(p.excess, tol):
        # degenerate reflection: the direct series converges algebraically in k
        _warn_degenerate(p)
        return _hyp2f1_series(p, z)
    return _hyp2f1_reflected(p, z)


def hyp2f1_dz(p: Hyp2F1Params, z: complex) -> complex:
    if _is_pole(p.c, AccuracyEnviron.INTEGER_TOL):
        raise ParameterPole(f'c={p.c} is a nonpositive integer')
    if p.a == 0 or p.b == 0:
        return 0j
    return complex(p.a) * complex(p.b) / complex(p.c) * hyp2f1(p.shifted(), z)


def bessel_i0(w: complex) -> complex:
    quarter = complex(w) ** 2 / 4
    return _sum_series(lambda k: quarter / (k + 1) ** 2)


def bessel_j1(w: complex) -> complex:
    w = complex(w)
    if w == 0:
        return 0j
    quarter = -w * w / 4
    return _sum_series(lambda k: quarter / ((k + 1) * (k + 2)), first=w / 2)
