import pytest

from dsdirac.common import ConfigError, QuadratureSpec
from dsdirac.settings import AccuracyEnviron, KernelEnviron, SolveEnviron, load_env


def test_defaults():
    assert KernelEnviron.H == 1.0
    assert KernelEnviron.M == 0.5 + 1j
    assert SolveEnviron.T_GRID == (0.25, 0.5, 1.0)


def test_environment_then_code(monkeypatch):
    monkeypatch.setenv('KERNEL_H', '0.5')
    monkeypatch.setenv('KERNEL_M', '2 - 1i')
    assert KernelEnviron.H == 0.5
    assert KernelEnviron.M == 2 - 1j
    KernelEnviron.H = 0.25
    assert KernelEnviron.H == 0.25
    KernelEnviron.reset()
    assert KernelEnviron.H == 0.5


def test_tuples(monkeypatch):
    monkeypatch.setenv('SOLVE_XI', '1, 2.5,3')
    monkeypatch.setenv('SOLVE_SPINOR', '1, 0, 1i, 0')
    assert SolveEnviron.XI == (1.0, 2.5, 3.0)
    assert SolveEnviron.SPINOR == (1, 0, 1j, 0)


def test_bad_value(monkeypatch):
    monkeypatch.setenv('ACCURACY_SERIES_MAX_TERMS', 'many')
    with pytest.raises(ConfigError):
        AccuracyEnviron.SERIES_MAX_TERMS


def test_assign():
    KernelEnviron.assign('KERNEL_T0', '0.3')
    KernelEnviron.assign('R_POINTS', '3')
    assert KernelEnviron.T0 == 0.3
    assert KernelEnviron.R_POINTS == 3
    with pytest.raises(KeyError):
        KernelEnviron.assign('KERNEL_NOPE', '1')
    with pytest.raises(ConfigError):
        KernelEnviron.assign('KERNEL_H', 'x')


def test_not_instantiable():
    with pytest.raises(Exception):
        KernelEnviron()


def test_snapshot():
    snap = AccuracyEnviron.snapshot()
    assert snap['SPHERE_ORDER'] == 32
    assert set(snap) == set(AccuracyEnviron._fields)


def test_load_env_file(tmp_path):
    path = tmp_path / 'run.env'
    path.write_text('KERNEL_T0 = 0.4\nACCURACY_QUAD_ABS_TOL = 1e-12\n')
    load_env(str(path), override=True)
    assert KernelEnviron.T0 == 0.4
    assert QuadratureSpec.from_environ().abs_tol == 1e-12


def test_load_env_missing(tmp_path):
    with pytest.raises(ConfigError):
        load_env(str(tmp_path / 'missing.env'))


def test_quadrature_validation():
    with pytest.raises(ConfigError):
        QuadratureSpec(abs_tol=0.0).validate()
    assert QuadratureSpec().inner().abs_tol == pytest.approx(1e-11)
