"""
Handle import of environment variables and set variables from files

also holds objects for easy access to the accuracy contracts and run parameters used by the package.
Every setting resolves as: value assigned in code (cli flags) > environment / loaded config file > class default
"""
import os
import pathlib
from typing import Tuple

from dotenv import load_dotenv

FloatTuple = Tuple[float, ...]
ComplexTuple = Tuple[complex, ...]


class StaticProperty:
    __slots__ = ('fget', 'value')

    def __init__(self, getter):
        self.fget = getter
        self.value = None

    def __get__(self, cls, owner):
        if self.value is not None:
            return self.value
        return self.fget(self)

    def __set__(self, instance, value):
        self.value = value


def _parse_bool(val: str) -> bool:
    lowered = val.strip().lower()
    if lowered in ('1', 'true', 'yes', 'on'):
        return True
    if lowered in ('0', 'false', 'no', 'off', ''):
        return False
    raise ValueError(f'not a boolean: {val!r}')


def _parse_complex(val: str) -> complex:
    return complex(val.strip().replace(' ', '').replace('i', 'j'))


def _tuple_of(parse):
    def typ(val: str):
        return tuple(parse(item) for item in val.split(',') if item.strip())
    return typ


class EnvironMeta(type):
    @classmethod
    def make_getter(mcs, field, typ, default):
        if typ is pathlib.Path:
            def typ(val):
                if val[0] in './':
                    path = pathlib.Path(val)
                else:
                    path = pathlib.Path(__file__).parent.joinpath(val)

                return path
        elif typ is bool:
            typ = _parse_bool
        elif typ is complex:
            typ = _parse_complex
        elif typ == FloatTuple:
            typ = _tuple_of(float)
        elif typ == ComplexTuple:
            typ = _tuple_of(_parse_complex)

        def getter(self):
            val = os.environ.get(field)
            if val is None:
                return default
            try:
                return typ(val)
            except ValueError as e:
                from .common import ConfigError
                raise ConfigError.from_field(field, val, e) from e

        return getter

    def __new__(mcs, name, bases, attrs, prefix='', **_):
        fields = []
        for field, typ in attrs.get('__annotations__', dict()).items():
            default = attrs.get(field, None)
            attrs[field] = StaticProperty(mcs.make_getter(prefix + field, typ, default))
            fields.append(field)

        def raise_init(*_):
            raise Exception('Should not be instantiated')

        attrs['__init__'] = raise_init
        attrs['_fields'] = tuple(fields)
        attrs['_prefix'] = prefix
        return super().__new__(mcs, name, bases, attrs)

    def __init__(cls, name, bases, attrs, prefix='', **_):
        super().__init__(name, bases, attrs)

    def __setattr__(cls, key, value):
        prop = cls.__dict__.get(key)
        if isinstance(prop, StaticProperty):
            prop.value = value
        else:
            super().__setattr__(key, value)

    def snapshot(cls) -> dict:
        return {field: getattr(cls, field) for field in cls._fields}

    def reset(cls):
        for field in cls._fields:
            cls.__dict__[field].value = None

    def assign(cls, key: str, raw: str):
        """Set a field from a ``--set KEY=VALUE`` string, key with or without the class prefix."""
        field = key[len(cls._prefix):] if key.startswith(cls._prefix) else key
        if field not in cls._fields:
            raise KeyError(key)
        prop = cls.__dict__[field]
        os_key = cls._prefix + field
        saved = os.environ.get(os_key)
        os.environ[os_key] = raw
        try:
            value = prop.fget(prop)
        finally:
            if saved is None:
                del os.environ[os_key]
            else:
                os.environ[os_key] = saved
        prop.value = value


class AppEnviron(metaclass=EnvironMeta):
    APP_NAME: str = 'dsdirac'
    ENV: str = 'app'


class AccuracyEnviron(metaclass=EnvironMeta, prefix='ACCURACY_'):
    SERIES_REL_TOL: float = 1e-16
    SERIES_STAGNATION: int = 3
    SERIES_MAX_TERMS: int = 20000
    REFLECTION_SPLIT: float = 0.5
    INTEGER_TOL: float = 1e-9
    QUAD_ABS_TOL: float = 1e-10
    QUAD_REL_TOL: float = 1e-10
    QUAD_MAX_SUBDIVISIONS: int = 200
    QUAD_BOUNDARY_OFFSET: float = 1e-8
    FD_STEP: float = 1e-4
    SPHERE_ORDER: int = 32
    ODE_REL_TOL: float = 1e-10
    ODE_ABS_TOL: float = 1e-12
    ODE_MAX_STEPS: int = 200000
    ODE_ORDER: int = 8


class RunEnviron(metaclass=EnvironMeta, prefix='RUN_'):
    FORMAT: str = 'csv'
    OUT: str = '-'
    SEED: int = 0
    GATE: float = 1e-5
    WORKERS: int = 4


class KernelEnviron(metaclass=EnvironMeta, prefix='KERNEL_'):
    H: float = 1.0
    M: complex = 0.5 + 1j
    T0: float = 0.0
    R_MIN: float = 0.0
    R_MAX: float = 0.6
    R_POINTS: int = 7
    T_MIN: float = 0.25
    T_MAX: float = 1.0
    T_POINTS: int = 4


class SolveEnviron(metaclass=EnvironMeta, prefix='SOLVE_'):
    H: float = 1.0
    M: complex = 0.5 + 1j
    MASS: complex = 1.0
    XI: FloatTuple = (1.0, 0.0, 0.0)
    PHI0: complex = 1.0
    PHI1: complex = 0.0
    SPINOR: ComplexTuple = (1.0, 0.0, 0.0, 0.0)
    SOURCE: str = 'none'
    T_GRID: FloatTuple = (0.25, 0.5, 1.0)
    COVARIANT: bool = False


class FundsolEnviron(metaclass=EnvironMeta, prefix='FUNDSOL_'):
    H: float = 1.0
    MASS: complex = 1.0
    T0: float = 0.0
    X0: float = 0.0
    KIND: str = 'auto'
    WIDTH: float = 0.2
    CENTER: float = 0.1
    T_GRID: FloatTuple = (0.25, 0.5, 0.75, 1.0)


class LimitEnviron(metaclass=EnvironMeta, prefix='LIMIT_'):
    M: complex = 0.7
    T: float = 1.0
    B: float = 0.0
    R: FloatTuple = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
    H_LIST: FloatTuple = (1e-2, 5e-3)


class VerifyEnviron(metaclass=EnvironMeta, prefix='VERIFY_'):
    TEST_FUNCTIONS: int = 20
    POINTS: int = 10
    THRESHOLD: float = 1e-8
    K0_THRESHOLD: float = 1e-5


ALL_ENVIRONS = (AppEnviron, AccuracyEnviron, RunEnviron, KernelEnviron, SolveEnviron, FundsolEnviron,
                LimitEnviron, VerifyEnviron)


def load_env(env='app', override=False):
    if env[0] in './':
        dotenv_path = pathlib.Path(env)
    else:
        dotenv_path = pathlib.Path(__file__).parent.joinpath(f'.{env}.env')
    if not dotenv_path.exists():
        from .common import ConfigError
        raise ConfigError(f'config file not found: {dotenv_path}')
    load_dotenv(dotenv_path, override=override)
    if AppEnviron.ENV == 'app':
        AppEnviron.ENV = env
