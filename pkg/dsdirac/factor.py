"""
Pointwise numerical verification of the operator factorisations behind the Dirac solvers

Test functions and operator coefficients are carried as second-order jets (value, gradient, Hessian in the
variables (t, q1, q2, q3)), so composing two first-order operators is exact up to rounding and no finite
differences enter a check. Residuals are normalised by 1 + max |second derivatives of the test function|.
"""
import math
from typing import Callable, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .clifford import ETA, GAMMA, GAMMA0, IDENTITY4
from .common import NonSmoothPoint, PreconditionFailure, SingularCoordinatePoint

NVARS = 4


def _spread(arr: np.ndarray, extra: int) -> np.ndarray:
    return arr.reshape(arr.shape + (1,) * extra)


class Jet:
    """truncated Taylor data of a scalar or spinor field at one point"""
    __slots__ = ('value', 'grad', 'hess', 'point')

    def __init__(self, value, grad=None, hess=None, point=None):
        self.value = np.asarray(value, dtype=complex)
        self.grad = None if grad is None else np.asarray(grad, dtype=complex)
        self.hess = None if (hess is None or grad is None) else np.asarray(hess, dtype=complex)
        self.point = tuple(point)

    @property
    def order(self) -> int:
        if self.grad is None:
            return 0
        return 1 if self.hess is None else 2

    @property
    def is_scalar(self) -> bool:
        return self.value.ndim == 0

    @classmethod
    def constant(cls, value, point, order: int = 2) -> 'Jet':
        value = np.asarray(value, dtype=complex)
        grad = np.zeros((NVARS,) + value.shape, dtype=complex) if order >= 1 else None
        hess = np.zeros((NVARS, NVARS) + value.shape, dtype=complex) if order >= 2 else None
        return cls(value, grad, hess, point)

    @classmethod
    def variable(cls, index: int, point, order: int = 2) -> 'Jet':
        grad = np.zeros(NVARS, dtype=complex)
        grad[index] = 1
        return cls(point[index], grad if order >= 1 else None,
                   np.zeros((NVARS, NVARS), dtype=complex) if order >= 2 else None, point)

    def variables(self) -> Tuple['Jet', ...]:
        return tuple(Jet.variable(i, self.point, self.order) for i in range(NVARS))

    def truncate(self, order: int) -> 'Jet':
        order = min(order, self.order)
        return Jet(self.value, self.grad if order >= 1 else None, self.hess if order >= 2 else None, self.point)

    def _lift(self, other) -> 'Jet':
        if isinstance(other, Jet):
            return other
        return Jet.constant(other, self.point, self.order)

    def __add__(self, other) -> 'Jet':
        other = self._lift(other)
        order = min(self.order, other.order)
        a, b = self.truncate(order), other.truncate(order)
        return Jet(a.value + b.value,
                   None if order < 1 else a.grad + b.grad,
                   None if order < 2 else a.hess + b.hess, self.point)

    __radd__ = __add__

    def __neg__(self) -> 'Jet':
        return Jet(-self.value, None if self.grad is None else -self.grad,
                   None if self.hess is None else -self.hess, self.point)

    def __sub__(self, other) -> 'Jet':
        return self + (-self._lift(other))

    def __rsub__(self, other) -> 'Jet':
        return (-self) + other

    def __mul__(self, other) -> 'Jet':
        if not isinstance(other, Jet):
            other = complex(other)
            return Jet(self.value * other, None if self.grad is None else self.grad * other,
                       None if self.hess is None else self.hess * other, self.point)
        a, b = (self, other) if self.is_scalar else (other, self)
        if not a.is_scalar:
            raise ValueError('at least one factor of a jet product must be scalar')
        order = min(a.order, b.order)
        extra = b.value.ndim
        value = a.value * b.value
        grad = hess = None
        if order >= 1:
            grad = _spread(a.grad, extra) * b.value + a.value * b.grad
        if order >= 2:
            cross = (a.grad.reshape((NVARS, 1) + (1,) * extra) * b.grad[None]
                     + a.grad.reshape((1, NVARS) + (1,) * extra) * b.grad[:, None])
            hess = _spread(a.hess, extra) * b.value + cross + a.value * b.hess
        return Jet(value, grad, hess, self.point)

    __rmul__ = __mul__

    def __truediv__(self, other) -> 'Jet':
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return self * (1 / complex(other))

    def __pow__(self, n: int) -> 'Jet':
        out = Jet.constant(1.0, self.point, self.order)
        for _ in range(n):
            out = out * self
        return out

    def apply_matrix(self, mat: np.ndarray) -> 'Jet':
        mt = np.asarray(mat, dtype=complex).T
        return Jet(self.value @ mt, None if self.grad is None else self.grad @ mt,
                   None if self.hess is None else self.hess @ mt, self.point)

    def d(self, index: int) -> 'Jet':
        if self.order == 0:
            raise ValueError('cannot differentiate a jet of order 0')
        if self.hess is None:
            return Jet(self.grad[index], None, None, self.point)
        return Jet(self.grad[index], self.hess[index], None, self.point)

    def _compose(self, f0, f1, f2) -> 'Jet':
        if not self.is_scalar:
            raise ValueError('elementary functions act on scalar jets')
        grad = None if self.grad is None else f1 * self.grad
        hess = None
        if self.hess is not None:
            hess = f2 * np.outer(self.grad, self.grad) + f1 * self.hess
        return Jet(f0, grad, hess, self.point)

    def exp(self) -> 'Jet':
        e = np.exp(self.value)
        return self._compose(e, e, e)

    def sin(self) -> 'Jet':
        s, c = np.sin(self.value), np.cos(self.value)
        return self._compose(s, c, -s)

    def cos(self) -> 'Jet':
        s, c = np.sin(self.value), np.cos(self.value)
        return self._compose(c, -s, -c)

    def reciprocal(self) -> 'Jet':
        v = self.value
        return self._compose(1 / v, -1 / v ** 2, 2 / v ** 3)


Derivation = Callable[[Jet], Jet]
CoefficientFn = Callable[[Sequence[Jet]], Jet]


class TestFunction(NamedTuple):
    """e^{lam t} times a plane wave e^{i xi.q} or a linear-polynomial Gaussian, times a constant spinor"""
    xi: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    lam: complex = 0j
    spinor: Tuple[complex, ...] = (1, 0, 0, 0)
    kind: str = 'plane'
    centre: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    width: float = 1.0
    slope: Tuple[float, float, float] = (0.0, 0.0, 0.0)

    __test__ = False

    def scalar_jet(self, point) -> Jet:
        T, *Q = (Jet.variable(i, point) for i in range(NVARS))
        phase = T * self.lam
        if self.kind == 'plane':
            for x, q in zip(self.xi, Q):
                phase = phase + q * (1j * x)
            return phase.exp()
        shifted = [q - c for q, c in zip(Q, self.centre)]
        spread = sum((s * s for s in shifted), Jet.constant(0.0, point)) * (-0.5 / self.width ** 2)
        poly = sum((s * k for s, k in zip(shifted, self.slope)), Jet.constant(1.0, point))
        return (phase + spread).exp() * poly

    def jet(self, point, spinor=None) -> Jet:
        spinor = self.spinor if spinor is None else spinor
        out = self.scalar_jet(point) * Jet.constant(np.asarray(spinor, dtype=complex), point)
        if not (np.all(np.isfinite(out.value)) and np.all(np.isfinite(out.hess))):
            raise NonSmoothPoint(f'test function is not finite at {tuple(point)}')
        return out


class GeneralizedDiracCoefficients(NamedTuple):
    """
    scalar derivations A_k and the operators of (gamma^k A_k)^2 = -Acal I + B g0 + C g1 g2 + D g3 g0 g1 g2 g3

    ``A0`` is only set for the electromagnetic example, where the square includes the time component
    """
    name: str
    A: Tuple[Derivation, Derivation, Derivation]
    laplacian: Derivation
    B: Optional[Derivation] = None
    C: Optional[Derivation] = None
    D: Optional[Derivation] = None
    A0: Optional[Derivation] = None
    domain: Callable[[Sequence[float]], None] = lambda point: None

    @property
    def satisfies_AA(self) -> bool:
        return self.B is None and self.C is None and self.D is None


def cartesian() -> GeneralizedDiracCoefficients:
    return GeneralizedDiracCoefficients(
        'cartesian',
        tuple(lambda u, k=k: u.d(k) for k in (1, 2, 3)),
        lambda u: u.d(1).d(1) + u.d(2).d(2) + u.d(3).d(3))


def _default_a(Q):
    return 1 + Q[1] * Q[1] * 0.25


def _default_b(Q):
    return 1 + Q[2] * Q[2] * 0.25


def _default_c(Q):
    return Jet.constant(1.0, Q[0].point, Q[0].order)


def variable(a: CoefficientFn = _default_a, b: CoefficientFn = _default_b,
             c: CoefficientFn = _default_c) -> GeneralizedDiracCoefficients:
    """a(x, y) dx, b(x, y) dy, c(z) dz; the coefficient functions receive the coordinate jets (t, x, y, z)"""

    def coeff(fn):
        return lambda u: fn(u.variables())

    ca, cb, cc = coeff(a), coeff(b), coeff(c)

    def laplacian(u):
        total = Jet.constant(np.zeros(u.value.shape), u.point, 0)
        for k, fn in zip((1, 2, 3), (ca, cb, cc)):
            sq = fn(u) * fn(u)
            total = total + sq * u.d(k).d(k) + sq.d(k) * u.d(k) * 0.5
        return total

    def mixing(u):
        a_, b_ = ca(u), cb(u)
        return a_ * b_.d(1) * u.d(2) - a_.d(2) * b_ * u.d(1)

    return GeneralizedDiracCoefficients(
        'variable',
        (lambda u: ca(u) * u.d(1), lambda u: cb(u) * u.d(2), lambda u: cc(u) * u.d(3)),
        laplacian, C=mixing)


def _cylindrical_domain(point):
    if point[1] <= 0:
        raise SingularCoordinatePoint.from_point('cylindrical', point)


def cylindrical() -> GeneralizedDiracCoefficients:
    """coordinates (t, rho, phi, z)"""

    def A1(u):
        _, rho, ang, _ = u.variables()
        return ang.cos() * u.d(1) - ang.sin() / rho * u.d(2)

    def A2(u):
        _, rho, ang, _ = u.variables()
        return ang.sin() * u.d(1) + ang.cos() / rho * u.d(2)

    def laplacian(u):
        _, rho, _, _ = u.variables()
        inv = rho.reciprocal()
        return u.d(1).d(1) + inv * u.d(1) + inv * inv * u.d(2).d(2) + u.d(3).d(3)

    return GeneralizedDiracCoefficients('cylindrical', (A1, A2, lambda u: u.d(3)), laplacian,
                                        domain=_cylindrical_domain)


def _spherical_domain(point):
    if point[1] <= 0 or abs(math.sin(point[2])) < 1e-12:
        raise SingularCoordinatePoint.from_point('spherical', point)


def spherical() -> GeneralizedDiracCoefficients:
    """coordinates (t, r, theta, phi)"""

    def trig(u):
        _, r, th, ph = u.variables()
        return r, th.sin(), th.cos(), ph.sin(), ph.cos()

    def A1(u):
        r, st, ct, sp, cp = trig(u)
        return st * cp * u.d(1) + ct * cp / r * u.d(2) - sp / (r * st) * u.d(3)

    def A2(u):
        r, st, ct, sp, cp = trig(u)
        return st * sp * u.d(1) + ct * sp / r * u.d(2) + cp / (r * st) * u.d(3)

    def A3(u):
        r, st, ct, _, _ = trig(u)
        return ct * u.d(1) - st / r * u.d(2)

    def laplacian(u):
        r, st, ct, _, _ = trig(u)
        inv_r = r.reciprocal()
        angular = u.d(2).d(2) + ct / st * u.d(2) + (st * st).reciprocal() * u.d(3).d(3)
        return u.d(1).d(1) + inv_r * 2 * u.d(1) + inv_r * inv_r * angular

    return GeneralizedDiracCoefficients('spherical', (A1, A2, A3), laplacian, domain=_spherical_domain)


def _zero_potential(X):
    return Jet.constant(0.0, X[0].point, X[0].order)


def em_potential(field: float = 1.0, d: CoefficientFn = _zero_potential, a: CoefficientFn = _zero_potential,
                 b: Optional[CoefficientFn] = None, c: CoefficientFn = _zero_potential) -> GeneralizedDiracCoefficients:
    """
    A_mu = d_mu + (d, a, b, c)_mu in Cartesian coordinates (t, x, y, z); default b = field * x.

    the square of g^mu A_mu is S I + (b_x - a_y) g1 g2 with S the scalar second-order operator below,
    stored as laplacian = -S
    """
    b = b or (lambda X: X[1] * field)

    def pots(u):
        X = u.variables()
        return d(X), a(X), b(X), c(X)

    def shifted(k):
        return lambda u: u.d(k) + pots(u)[k] * u

    def minus_s(u):
        pd, pa, pb, pc = pots(u)
        s = (u.d(0).d(0) - u.d(1).d(1) - u.d(2).d(2) - u.d(3).d(3)
             - (pa * u.d(1) + pb * u.d(2) + pc * u.d(3)) * 2 + pd * u.d(0) * 2
             + (pd * pd - pa * pa - pb * pb - pc * pc - pa.d(1) - pb.d(2) - pc.d(3) + pd.d(0)) * u)
        return -s

    def field_strength(u):
        _, pa, pb, _ = pots(u)
        return (pb.d(1) - pa.d(2)) * u

    def integrability(point):
        pd, pa, pb, pc = pots(Jet.constant(0.0, point))
        pairs = ((pa.grad[3], pc.grad[1]), (pb.grad[3], pc.grad[2]), (pa.grad[0], pd.grad[1]),
                 (pb.grad[0], pd.grad[2]), (pc.grad[0], pd.grad[3]))
        if any(abs(lhs - rhs) > 1e-10 for lhs, rhs in pairs):
            raise PreconditionFailure(f'potential violates the integrability conditions at {tuple(point)}')

    return GeneralizedDiracCoefficients('em_potential', (shifted(1), shifted(2), shifted(3)), minus_s,
                                        C=field_strength, A0=shifted(0), domain=integrability)


EXAMPLES = {
    'cartesian': cartesian,
    'variable': variable,
    'cylindrical': cylindrical,
    'spherical': spherical,
    'em_potential': em_potential,
}

G1G2 = GAMMA[1] @ GAMMA[2]


def _scale(u: Jet) -> float:
    return 1.0 + float(np.max(np.abs(u.hess)))


def _prepare(coeffs: GeneralizedDiracCoefficients, tf: TestFunction, point) -> Jet:
    coeffs.domain(point)
    return tf.jet(point)


def _exp_time(u: Jet, rate: float) -> Jet:
    return (u.variables()[0] * rate).exp()


def dirac_factor(u: Jet, H: float, coeffs: GeneralizedDiracCoefficients, zeta: complex, mass: complex) -> Jet:
    """i g0 d0 u + i e^{-Ht} g^k A_k u + i zeta g0 u + mass u"""
    out = u.d(0).apply_matrix(1j * GAMMA0)
    decay = _exp_time(u, -H)
    for k, A in enumerate(coeffs.A):
        out = out + decay * A(u).apply_matrix(1j * GAMMA[k + 1])
    return out + u.apply_matrix(1j * zeta * GAMMA0) + u * mass


def _mixed_first_order(u: Jet, coeffs: GeneralizedDiracCoefficients) -> np.ndarray:
    """g0 g^k A_k u at the point"""
    return sum(GAMMA0 @ GAMMA[k + 1] @ A(u).value for k, A in enumerate(coeffs.A))


def _require_AA(coeffs: GeneralizedDiracCoefficients):
    if not coeffs.satisfies_AA or coeffs.A0 is not None:
        raise PreconditionFailure(f'{coeffs.name} coefficients do not satisfy condition (AA)')


def three_parameter_lhs(a: complex, b: complex, c: complex, H: float, m: complex,
                        coeffs: GeneralizedDiracCoefficients, u: Jet) -> np.ndarray:
    inner = dirac_factor(u, H, coeffs, -(b - c) * H / 2, m)
    outer = dirac_factor(_exp_time(inner, -a * H) * inner, H, coeffs, b * H / 2, -m)
    return np.exp(a * H * u.point[0]) * outer.value


def check_three_parameter_general(a: complex, b: complex, c: complex, H: float, m: complex,
                                  coeffs: GeneralizedDiracCoefficients, tf: TestFunction, point) -> float:
    _require_AA(coeffs)
    u = _prepare(coeffs, tf, point)
    t = point[0]
    mass = m * IDENTITY4 - 0.5j * b * H * GAMMA0
    rhs = (-u.d(0).d(0).value + np.exp(-2 * H * t) * coeffs.laplacian(u).value
           - (b - a - 1 - c / 2) * H * np.exp(-H * t) * _mixed_first_order(u, coeffs)
           - mass @ mass @ u.value - 1j * (a + c / 2) * H * m * GAMMA0 @ u.value
           + (a - c / 2) * H * u.d(0).value - (b * c + 2 * a * b - 2 * a * c) * H ** 2 / 4 * u.value)
    lhs = three_parameter_lhs(a, b, c, H, m, coeffs, u)
    return float(np.max(np.abs(lhs - rhs))) / _scale(u)


THREE_PARAMETER_CASES = {'i': (0, 1, 0), 'ii': (1, 3, 2), 'iii': (-0.5, 3, 5)}


def check_three_parameter_case(case: str, H: float, m: complex, coeffs: GeneralizedDiracCoefficients,
                               tf: TestFunction, point) -> float:
    """compare the composed product with the simplified displays of the three special cases"""
    _require_AA(coeffs)
    a, b, c = THREE_PARAMETER_CASES[case]
    if case == 'i':
        m = 0
    u = _prepare(coeffs, tf, point)
    t = point[0]
    mass = m * IDENTITY4 - 0.5j * H * GAMMA0
    rhs = -u.d(0).d(0).value + np.exp(-2 * H * t) * coeffs.laplacian(u).value - mass @ mass @ u.value
    if case == 'iii':
        rhs = rhs - 3 * H * u.d(0).value - 9 * H ** 2 / 4 * u.value
    lhs = three_parameter_lhs(a, b, c, H, m, coeffs, u)
    return float(np.max(np.abs(lhs - rhs))) / _scale(u)


def _covariant_product(H: float, m: complex, coeffs: GeneralizedDiracCoefficients, u: Jet) -> np.ndarray:
    inner = dirac_factor(u, H, coeffs, 1.5 * H, m)
    return dirac_factor(inner, H, coeffs, 1.5 * H, -m).value


def _box_g(H: float, coeffs: GeneralizedDiracCoefficients, u: Jet) -> np.ndarray:
    t = u.point[0]
    return (u.d(0).d(0).value + 3 * H * u.d(0).value - np.exp(-2 * H * t) * coeffs.laplacian(u).value
            - H * np.exp(-H * t) * _mixed_first_order(u, coeffs) - 0.75 * H ** 2 * u.value)


def check_covariant_square(H: float, m: complex, coeffs: GeneralizedDiracCoefficients, tf: TestFunction,
                           point) -> float:
    _require_AA(coeffs)
    u = _prepare(coeffs, tf, point)
    t = point[0]
    # g^k g0 = -g0 g^k
    rhs = (-u.d(0).d(0).value - 3 * H * u.d(0).value + np.exp(-2 * H * t) * coeffs.laplacian(u).value
           + H * np.exp(-H * t) * _mixed_first_order(u, coeffs) - (m * m + 9 * H ** 2 / 4) * u.value)
    return float(np.max(np.abs(_covariant_product(H, m, coeffs, u) - rhs))) / _scale(u)


def de_sitter_curvature(H: float) -> float:
    return -12 * H ** 2


def check_box_g_identity(H: float, coeffs: GeneralizedDiracCoefficients, tf: TestFunction, point) -> float:
    """massless covariant square against -box_g + R/4 with R = -12 H^2"""
    _require_AA(coeffs)
    u = _prepare(coeffs, tf, point)
    rhs = -_box_g(H, coeffs, u) + de_sitter_curvature(H) / 4 * u.value
    return float(np.max(np.abs(_covariant_product(H, 0, coeffs, u) - rhs))) / _scale(u)


def _matrix_mass_kg(H: float, m: complex, coeffs: GeneralizedDiracCoefficients, u: Jet) -> np.ndarray:
    mass = m * IDENTITY4 - 0.5j * H * GAMMA0
    t = u.point[0]
    return u.d(0).d(0).value - np.exp(-2 * H * t) * coeffs.laplacian(u).value + mass @ mass @ u.value


def _split_product(H: float, m: complex, coeffs: GeneralizedDiracCoefficients, u: Jet) -> np.ndarray:
    """D_{3/2} e^{-Ht} D_{-1/2}, the factors carrying +i(3H/2) g0 - m and -i(H/2) g0 + m"""
    inner = dirac_factor(u, H, coeffs, -0.5 * H, m)
    return dirac_factor(_exp_time(inner, -H) * inner, H, coeffs, 1.5 * H, -m).value


def check_matrix_mass_factorization(H: float, m: complex, tf: TestFunction, point,
                                    coeffs: Optional[GeneralizedDiracCoefficients] = None) -> float:
    coeffs = coeffs or cartesian()
    _require_AA(coeffs)
    u = _prepare(coeffs, tf, point)
    lhs = _matrix_mass_kg(H, m, coeffs, u)
    rhs = -np.exp(H * point[0]) * _split_product(H, m, coeffs, u)
    return float(np.max(np.abs(lhs - rhs))) / _scale(u)


def check_propagator_identity(H: float, m: complex, tf: TestFunction, point,
                              coeffs: Optional[GeneralizedDiracCoefficients] = None) -> float:
    """-D_{3/2} e^{-Ht} D_{-1/2} = e^{-Ht} (d0^2 - e^{-2Ht} Acal + (m - i H g0 / 2)^2)"""
    coeffs = coeffs or cartesian()
    _require_AA(coeffs)
    u = _prepare(coeffs, tf, point)
    lhs = -_split_product(H, m, coeffs, u)
    rhs = np.exp(-H * point[0]) * _matrix_mass_kg(H, m, coeffs, u)
    return float(np.max(np.abs(lhs - rhs))) / _scale(u)


DEFAULT_AA_FUNCTION = TestFunction(kind='gaussian', lam=0.3 - 0.7j, centre=(0.2, -0.1, 0.3), width=0.9,
                                   slope=(0.4, -0.2, 0.1))


def check_condition_AA(example_id: str, point, tf: Optional[TestFunction] = None,
                       coeffs: Optional[GeneralizedDiracCoefficients] = None) -> float:
    """
    (sum g^k A_k)^2 against -Acal I + B g0 + C g1 g2 on each spinor basis direction of a scalar test function

    for the electromagnetic example the sums run over mu = 0..3
    """
    coeffs = coeffs or EXAMPLES[example_id]()
    if coeffs.D is not None:
        raise PreconditionFailure('only D = 0 is supported')
    coeffs.domain(point)
    tf = tf or DEFAULT_AA_FUNCTION
    derivations = list(enumerate(coeffs.A, start=1))
    if coeffs.A0 is not None:
        derivations.insert(0, (0, coeffs.A0))

    def slash(v: Jet) -> Jet:
        out = None
        for mu, A in derivations:
            term = A(v).apply_matrix(GAMMA[mu])
            out = term if out is None else out + term
        return out

    worst, scale = 0.0, 1.0
    for j in range(4):
        u = tf.jet(point, spinor=IDENTITY4[j])
        scale = max(scale, _scale(u))
        lhs = slash(slash(u)).value
        rhs = -coeffs.laplacian(u).value
        if coeffs.B is not None:
            rhs = rhs + GAMMA0 @ coeffs.B(u).value
        if coeffs.C is not None:
            rhs = rhs + G1G2 @ coeffs.C(u).value
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst / scale


def tetrad(theta: float, phi_: float) -> Tuple[np.ndarray, ...]:
    """(g~t, g~r, g~theta, g~phi) in spherical coordinates"""
    st, ct, sp, cp = math.sin(theta), math.cos(theta), math.sin(phi_), math.cos(phi_)
    g0, g1, g2, g3 = GAMMA
    return (g0,
            g1 * cp * st + g2 * sp * st + g3 * ct,
            g1 * ct * cp + g2 * sp * ct - g3 * st,
            -g1 * sp + g2 * cp)


def check_tetrad_anticommutators(point) -> float:
    r, theta, phi_ = point
    if r <= 0 or abs(math.sin(theta)) < 1e-12:
        raise SingularCoordinatePoint.from_point('spherical tetrad', point)
    mats = tetrad(theta, phi_)
    worst = 0.0
    for mu, a in enumerate(mats):
        for nu, b in enumerate(mats):
            defect = a @ b + b @ a - 2 * ETA[mu, nu] * IDENTITY4
            worst = max(worst, float(np.max(np.abs(defect))))
    return worst


def random_test_function(rng: np.random.Generator, kind: Optional[str] = None) -> TestFunction:
    kind = kind or ('plane' if rng.random() < 0.5 else 'gaussian')
    spinor = rng.normal(size=4) + 1j * rng.normal(size=4)
    spinor = spinor / np.linalg.norm(spinor)
    return TestFunction(xi=tuple(rng.uniform(-2, 2, size=3)),
                        lam=complex(rng.uniform(-1, 1), rng.uniform(-2, 2)),
                        spinor=tuple(spinor), kind=kind,
                        centre=tuple(rng.uniform(-0.5, 0.5, size=3)),
                        width=float(rng.uniform(0.6, 1.5)),
                        slope=tuple(rng.uniform(-1, 1, size=3)))


def random_point(rng: np.random.Generator, example_id: str = 'cartesian') -> Tuple[float, float, float, float]:
    t = float(rng.uniform(0, 1))
    if example_id == 'cylindrical':
        return t, float(rng.uniform(0.5, 2)), float(rng.uniform(0, 2 * math.pi)), float(rng.uniform(-1, 1))
    if example_id == 'spherical':
        return (t, float(rng.uniform(0.5, 2)), float(rng.uniform(0.3, math.pi - 0.3)),
                float(rng.uniform(0, 2 * math.pi)))
    return (t,) + tuple(float(v) for v in rng.uniform(-1, 1, size=3))
