import logging

import mpmath
import pytest
from scipy.special import i0, j1

from dsdirac.common import DivergentSeries, ParameterPole
from dsdirac.settings import AccuracyEnviron
from dsdirac.specfun import (Hyp2F1Params, _hyp2f1_reflected, _hyp2f1_series, _warn_degenerate, bessel_i0,
                             bessel_j1, hyp2f1, hyp2f1_dz)


def reference(p: Hyp2F1Params, z):
    return complex(mpmath.hyp2f1(p.a, p.b, p.c, z))


@pytest.mark.parametrize('M', [0.5 + 1j, 0.5 - 1j, 2.0, 1.3, 0.1 + 0.4j])
@pytest.mark.parametrize('z', [0.0, 0.05, 0.3, 0.5, 0.7, 0.95])
def test_kernel_family_against_mpmath(M, z):
    p = Hyp2F1Params.kernel_family(M, 1.0)
    expected = reference(p, z)
    assert abs(hyp2f1(p, z) - expected) <= 1e-12 * max(1.0, abs(expected))


def test_series_and_reflection_agree_on_overlap():
    p = Hyp2F1Params(0.3, 0.2 + 0.5j, 1.7)
    for z in (0.45, 0.5, 0.55):
        assert abs(_hyp2f1_series(p, z) - _hyp2f1_reflected(p, z)) <= 1e-12


def test_reflection_path_against_mpmath():
    p = Hyp2F1Params(0.3, 0.2 + 0.5j, 1.7)
    assert abs(hyp2f1(p, 0.9) - reference(p, 0.9)) <= 1e-12


def test_integer_excess_uses_series():
    p = Hyp2F1Params.kernel_family(2.0, 1.0)
    assert abs(p.excess - 4) < 1e-15
    assert abs(hyp2f1(p, 0.8) - reference(p, 0.8)) <= 1e-12


def test_integer_excess_warns_once(caplog):
    _warn_degenerate.cache_clear()
    p = Hyp2F1Params.kernel_family(2.0, 1.0)
    with caplog.at_level(logging.WARNING, logger='dsdirac.specfun'):
        for z in (0.6, 0.7, 0.8):
            hyp2f1(p, z)
        hyp2f1(p, 0.3)
    warnings = [r for r in caplog.records if r.levelno == logging.WARNING and r.name == 'dsdirac.specfun']
    assert len(warnings) == 1
    assert 'integer c-a-b' in warnings[0].getMessage()


def test_gauss_formula_at_one():
    p = Hyp2F1Params(0.25, 0.5, 2.0)
    assert abs(hyp2f1(p, 1.0) - reference(p, 1.0)) <= 1e-13


def test_divergent_at_one():
    with pytest.raises(DivergentSeries):
        hyp2f1(Hyp2F1Params(1.0, 1.0, 1.5), 1.0)


def test_pole_in_c():
    with pytest.raises(ParameterPole):
        hyp2f1(Hyp2F1Params(0.5, 0.5, -2.0), 0.3)


def test_trivial_parameters():
    assert hyp2f1(Hyp2F1Params(0, 3.0, 1.0), 0.4) == 1
    assert hyp2f1(Hyp2F1Params(2.0, 3.0, 1.0), 0.0) == 1
    assert hyp2f1_dz(Hyp2F1Params(0, 1.0, 1.0), 0.4) == 0


def test_derivative_against_mpmath():
    p = Hyp2F1Params.kernel_family(0.5 + 1j, 1.0)
    expected = complex(mpmath.diff(lambda w: mpmath.hyp2f1(p.a, p.b, p.c, w), 0.3))
    assert abs(hyp2f1_dz(p, 0.3) - expected) <= 1e-10


def test_term_cap_raises():
    AccuracyEnviron.SERIES_MAX_TERMS = 5
    with pytest.raises(DivergentSeries):
        hyp2f1(Hyp2F1Params(0.3, 0.4, 1.2), 0.45)


@pytest.mark.parametrize('w', [0.0, 0.3, 2.5, 7.0])
def test_bessel_real_arguments(w):
    assert abs(bessel_i0(w) - i0(w)) <= 1e-14 * i0(w)
    assert abs(bessel_j1(w) - j1(w)) <= 1e-14


def test_bessel_complex_argument():
    w = 1.5 + 2j
    assert abs(bessel_i0(w) - complex(mpmath.besseli(0, w))) <= 1e-13
    assert abs(bessel_j1(w) - complex(mpmath.besselj(1, w))) <= 1e-13


@pytest.mark.parametrize('w', [0.4, 1.5 + 2j, 3.0 - 1j])
def test_bessel_i0_solves_its_ode(w):
    # w f'' + f' - w f = 0, holomorphic central differences
    h = 1e-3
    f, up, down = bessel_i0(w), bessel_i0(w + h), bessel_i0(w - h)
    d1 = (up - down) / (2 * h)
    d2 = (up - 2 * f + down) / h ** 2
    assert abs(w * d2 + d1 - w * f) <= 1e-5 * max(1.0, abs(f))
