"""
Dirac representation gamma matrices with exact Gaussian-integer arithmetic
"""
from typing import Iterable, List, NamedTuple, Union

import numpy as np

GaussianScalar = Union[int, complex]


def _as_gaussian(k: GaussianScalar):
    k = complex(k)
    if k.real != int(k.real) or k.imag != int(k.imag):
        raise ValueError(f'{k} is not a Gaussian integer')
    return int(k.real), int(k.imag)


class Matrix4C:
    """4x4 matrix with Gaussian-integer entries, stored as integer real and imaginary parts"""
    __slots__ = ('re', 'im')

    def __init__(self, re, im=None):
        self.re = np.asarray(re, dtype=np.int64)
        self.im = np.zeros_like(self.re) if im is None else np.asarray(im, dtype=np.int64)
        self.re.setflags(write=False)
        self.im.setflags(write=False)

    @classmethod
    def from_complex(cls, arr) -> 'Matrix4C':
        arr = np.asarray(arr, dtype=complex)
        re, im = arr.real.round(), arr.imag.round()
        if not (np.array_equal(re, arr.real) and np.array_equal(im, arr.imag)):
            raise ValueError('entries are not Gaussian integers')
        return cls(re.astype(np.int64), im.astype(np.int64))

    @classmethod
    def identity(cls, n: int = 4) -> 'Matrix4C':
        return cls(np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, n: int = 4) -> 'Matrix4C':
        return cls(np.zeros((n, n), dtype=np.int64))

    @classmethod
    def block(cls, a: 'Matrix4C', b: 'Matrix4C', c: 'Matrix4C', d: 'Matrix4C') -> 'Matrix4C':
        return cls(np.block([[a.re, b.re], [c.re, d.re]]), np.block([[a.im, b.im], [c.im, d.im]]))

    @property
    def shape(self):
        return self.re.shape

    def to_complex(self) -> np.ndarray:
        return self.re + 1j * self.im

    def __matmul__(self, other: 'Matrix4C') -> 'Matrix4C':
        return Matrix4C(self.re @ other.re - self.im @ other.im, self.re @ other.im + self.im @ other.re)

    def __add__(self, other: 'Matrix4C') -> 'Matrix4C':
        return Matrix4C(self.re + other.re, self.im + other.im)

    def __sub__(self, other: 'Matrix4C') -> 'Matrix4C':
        return Matrix4C(self.re - other.re, self.im - other.im)

    def __neg__(self) -> 'Matrix4C':
        return Matrix4C(-self.re, -self.im)

    def scale(self, k: GaussianScalar) -> 'Matrix4C':
        kr, ki = _as_gaussian(k)
        return Matrix4C(kr * self.re - ki * self.im, kr * self.im + ki * self.re)

    def conj_transpose(self) -> 'Matrix4C':
        return Matrix4C(self.re.T, -self.im.T)

    def is_diagonal(self) -> bool:
        off = ~np.eye(self.re.shape[0], dtype=bool)
        return not (self.re[off].any() or self.im[off].any())

    def diagonal(self) -> List[complex]:
        return [complex(r, i) for r, i in zip(np.diag(self.re), np.diag(self.im))]

    def __eq__(self, other):
        if not isinstance(other, Matrix4C):
            return NotImplemented
        return np.array_equal(self.re, other.re) and np.array_equal(self.im, other.im)

    def __hash__(self):
        return hash((self.re.tobytes(), self.im.tobytes()))

    def __repr__(self):
        return f'Matrix4C({self.to_complex().tolist()})'


class GammaBasis(NamedTuple):
    gamma0: Matrix4C
    gamma1: Matrix4C
    gamma2: Matrix4C
    gamma3: Matrix4C
    pauli1: Matrix4C
    pauli2: Matrix4C
    pauli3: Matrix4C

    @property
    def gammas(self):
        return self.gamma0, self.gamma1, self.gamma2, self.gamma3

    def arrays(self) -> np.ndarray:
        """gammas as a (4, 4, 4) complex array, index 0 is the time matrix"""
        return np.stack([g.to_complex() for g in self.gammas])


ETA = np.diag([1, -1, -1, -1])


def pauli_matrices():
    s1 = Matrix4C([[0, 1], [1, 0]])
    s2 = Matrix4C([[0, 0], [0, 0]], [[0, -1], [1, 0]])
    s3 = Matrix4C([[1, 0], [0, -1]])
    return s1, s2, s3


def standard_basis() -> GammaBasis:
    s1, s2, s3 = pauli_matrices()
    one, zero = Matrix4C.identity(2), Matrix4C.zeros(2)
    gamma0 = Matrix4C.block(one, zero, zero, -one)
    spatial = [Matrix4C.block(zero, s, -s, zero) for s in (s1, s2, s3)]
    return GammaBasis(gamma0, *spatial, s1, s2, s3)


def anticommutator(a: Matrix4C, b: Matrix4C) -> Matrix4C:
    return a @ b + b @ a


def diagonal_products(basis: GammaBasis) -> List[Matrix4C]:
    g0, g1, g2, g3 = basis.gammas
    return [Matrix4C.identity(), g0, g1 @ g2, (g3 @ g0 @ g1 @ g2 @ g3).scale(-1j)]


def exact_rank(rows: Iterable[Iterable[GaussianScalar]]) -> int:
    """rank over the Gaussian integers by fraction-free elimination"""
    mat = [[complex(v) for v in row] for row in rows]
    rank, ncols = 0, len(mat[0]) if mat else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(mat)) if mat[i][col] != 0), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        p = mat[rank][col]
        for i in range(rank + 1, len(mat)):
            f = mat[i][col]
            if f != 0:
                mat[i] = [p * x - f * y for x, y in zip(mat[i], mat[rank])]
        rank += 1
    return rank


def anticommutator_defects(basis: GammaBasis) -> List[tuple]:
    """(mu, nu) pairs violating {g^mu, g^nu} = 2 eta^{mu nu} I, by exact comparison"""
    defects = []
    for mu, a in enumerate(basis.gammas):
        for nu, b in enumerate(basis.gammas):
            if anticommutator(a, b) != Matrix4C.identity().scale(2 * int(ETA[mu, nu])):
                defects.append((mu, nu))
    return defects


def corrupted_basis() -> GammaBasis:
    """standard basis with one entry of gamma^1 flipped, for fault injection"""
    basis = standard_basis()
    re = basis.gamma1.re.copy()
    re[0, 3] = -re[0, 3]
    return basis._replace(gamma1=Matrix4C(re, basis.gamma1.im))


GAMMA = standard_basis().arrays()
GAMMA0 = GAMMA[0]
IDENTITY4 = np.eye(4, dtype=complex)
