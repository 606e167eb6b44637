"""Quaternion scalars, vectors and dense matrices.

Quaternion data is stored as float64 arrays whose trailing axis holds the four
real coefficients ``(a0, a1, a2, a3)`` of ``a0 + a1 p + a2 q + a3 r``. A vector
of length n is an ``(n, 4)`` array and a dense matrix is ``(n1, n2, 4)``.

The imaginary triple ``(p, q, r)`` follows the usual ``(i, j, k)`` table::

    p^2 = q^2 = r^2 = -1,  pq = -qp = r,  qr = -rq = p,  rp = -pr = q

Any orthonormal triple of pure unit quaternions obeys the same table, so
nothing is lost by fixing this one.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "Quaternion",
    "Polar",
    "as_quat",
    "qmul",
    "qconj",
    "qabs",
    "qinv",
    "qexp_axis",
    "polar",
    "inner",
    "vnorm",
    "conj_transpose",
    "matmul_dense",
    "hermitian_matvec_dense",
    "is_hermitian",
    "random_quat",
    "random_hermitian",
    "random_hpd",
]


def as_quat(x) -> np.ndarray:
    """Coerce ``x`` to a float64 quaternion array with trailing axis 4.

    Real scalars are promoted (imaginary parts zero); arrays must already
    carry the trailing axis.
    """
    if isinstance(x, Quaternion):
        return x.array
    a = np.asarray(x, dtype=np.float64)
    if a.ndim == 0:
        out = np.zeros(4)
        out[0] = a
        return out
    if a.shape[-1] != 4:
        raise ValueError(f"quaternion arrays need a trailing axis of 4, got shape {a.shape}")
    return a


def qmul(x, y) -> np.ndarray:
    """Hamilton product of broadcastable quaternion arrays."""
    x = as_quat(x)
    y = as_quat(y)
    x0, x1, x2, x3 = np.moveaxis(x, -1, 0)
    y0, y1, y2, y3 = np.moveaxis(y, -1, 0)
    return np.stack(
        [
            x0 * y0 - x1 * y1 - x2 * y2 - x3 * y3,
            x0 * y1 + x1 * y0 + x2 * y3 - x3 * y2,
            x0 * y2 - x1 * y3 + x2 * y0 + x3 * y1,
            x0 * y3 + x1 * y2 - x2 * y1 + x3 * y0,
        ],
        axis=-1,
    )


def qconj(x) -> np.ndarray:
    x = as_quat(x)
    return x * np.array([1.0, -1.0, -1.0, -1.0])


def qabs(x) -> np.ndarray:
    """Modulus ``sqrt(x . x)`` along the trailing axis."""
    return np.sqrt(np.sum(as_quat(x) ** 2, axis=-1))


def qinv(x) -> np.ndarray:
    """Inverse ``conj(x) / |x|^2``; raises ZeroDivisionError on zero entries."""
    x = as_quat(x)
    n2 = np.sum(x**2, axis=-1, keepdims=True)
    if np.any(n2 == 0.0):
        raise ZeroDivisionError("quaternion inverse of zero")
    return qconj(x) / n2


def qexp_axis(axis, angle) -> np.ndarray:
    """``cos(angle) + axis * sin(angle)`` for a pure unit ``axis``."""
    axis = as_quat(axis)
    angle = np.asarray(angle, dtype=np.float64)[..., None]
    out = axis * np.sin(angle)
    out[..., 0] = np.cos(angle[..., 0])
    return out


class Polar(NamedTuple):
    modulus: float
    axis: np.ndarray
    angle: float


_DEFAULT_AXIS = np.array([0.0, 1.0, 0.0, 0.0])


def polar(x) -> Polar:
    """Polar form ``x = |x| (cos a + m sin a)`` with ``a`` in ``[0, pi]``.

    ``m`` is the unit imaginary direction of ``x``. For real ``x`` the angle is
    0 or pi and the axis is ``p``.
    """
    x = as_quat(x)
    mod = float(np.sqrt(x @ x))
    if mod == 0.0:
        raise ValueError("polar decomposition of the zero quaternion is undefined")
    imag = x.copy()
    imag[0] = 0.0
    imag_norm = float(np.sqrt(imag @ imag))
    if imag_norm == 0.0:
        return Polar(mod, _DEFAULT_AXIS.copy(), 0.0 if x[0] > 0 else float(np.pi))
    angle = float(np.arctan2(imag_norm, x[0]))
    return Polar(mod, imag / imag_norm, angle)


def inner(x, y) -> np.ndarray:
    """Quaternion inner product ``<x, y> = y^* x = sum conj(y_s) x_s``."""
    return np.sum(qmul(qconj(y), x), axis=-2)


def vnorm(x) -> float:
    """Euclidean 2-norm of a quaternion vector."""
    return float(np.sqrt(np.sum(as_quat(x) ** 2)))


def conj_transpose(a) -> np.ndarray:
    return qconj(np.swapaxes(as_quat(a), 0, 1))


def matmul_dense(a, b) -> np.ndarray:
    """Dense quaternion product of ``(n1, n2, 4)`` and ``(n2, n3, 4)`` arrays."""
    a = as_quat(a)
    b = as_quat(b)
    if a.ndim != 3 or b.ndim != 3 or a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply shapes {a.shape} and {b.shape}")
    # Each output coefficient is a signed sum of real products of coefficients.
    out = np.empty((a.shape[0], b.shape[1], 4))
    A = [a[..., k] for k in range(4)]
    B = [b[..., k] for k in range(4)]
    out[..., 0] = A[0] @ B[0] - A[1] @ B[1] - A[2] @ B[2] - A[3] @ B[3]
    out[..., 1] = A[0] @ B[1] + A[1] @ B[0] + A[2] @ B[3] - A[3] @ B[2]
    out[..., 2] = A[0] @ B[2] - A[1] @ B[3] + A[2] @ B[0] + A[3] @ B[1]
    out[..., 3] = A[0] @ B[3] + A[1] @ B[2] - A[2] @ B[1] + A[3] @ B[0]
    return out


def hermitian_matvec_dense(a, x) -> np.ndarray:
    """Reference product ``A x`` computed entry by entry in quaternion arithmetic.

    Deliberately naive: this is the yardstick the FFT kernels are checked
    against, so it shares no code with them beyond :func:`qmul`.
    """
    a = as_quat(a)
    x = as_quat(x)
    if a.ndim != 3 or x.ndim != 2 or a.shape[1] != x.shape[0]:
        raise ValueError(f"dimension mismatch: matrix {a.shape[:2]}, vector length {x.shape[0]}")
    return np.sum(qmul(a, x[None, :, :]), axis=1)


def is_hermitian(a, tol: float = 0.0) -> bool:
    a = as_quat(a)
    if a.ndim != 3 or a.shape[0] != a.shape[1]:
        return False
    scale = max(1.0, float(np.max(np.abs(a))) if a.size else 1.0)
    return bool(np.max(np.abs(a - conj_transpose(a)), initial=0.0) <= tol * scale)


def random_quat(rng: np.random.Generator, shape=()) -> np.ndarray:
    shape = (shape,) if isinstance(shape, int) else tuple(shape)
    return rng.standard_normal(shape + (4,))


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    g = rng.standard_normal((n, n, 4))
    return 0.5 * (g + conj_transpose(g))


def random_hpd(rng: np.random.Generator, n: int, shift: float = 1.0) -> np.ndarray:
    """Random HPD matrix ``G^* G / n + shift I``."""
    g = rng.standard_normal((n, n, 4))
    a = matmul_dense(conj_transpose(g), g) / n
    a = 0.5 * (a + conj_transpose(a))
    a[np.arange(n), np.arange(n), 0] += shift
    return a


@dataclass(frozen=True)
class Quaternion:
    """Immutable quaternion scalar ``a0 + a1 p + a2 q + a3 r``."""

    a0: float = 0.0
    a1: float = 0.0
    a2: float = 0.0
    a3: float = 0.0

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        a = as_quat(a)
        return cls(*(float(v) for v in a))

    @property
    def array(self) -> np.ndarray:
        return np.array([self.a0, self.a1, self.a2, self.a3])

    def conj(self) -> "Quaternion":
        return Quaternion(self.a0, -self.a1, -self.a2, -self.a3)

    def __abs__(self) -> float:
        return float(qabs(self.array))

    def inverse(self) -> "Quaternion":
        return Quaternion.from_array(qinv(self.array))

    def dot(self, other) -> float:
        return float(self.array @ as_quat(other))

    def __mul__(self, other):
        if isinstance(other, (Quaternion, int, float, np.floating, np.integer)):
            return Quaternion.from_array(qmul(self.array, as_quat(other)))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Quaternion.from_array(qmul(as_quat(other), self.array))
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, (Quaternion, int, float, np.floating, np.integer)):
            return Quaternion.from_array(self.array + as_quat(other))
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (Quaternion, int, float, np.floating, np.integer)):
            return Quaternion.from_array(self.array - as_quat(other))
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Quaternion.from_array(as_quat(other) - self.array)
        return NotImplemented

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.a0, -self.a1, -self.a2, -self.a3)

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Quaternion.from_array(self.array / float(other))
        return NotImplemented

    def __repr__(self) -> str:
        return f"Quaternion({self.a0!r}, {self.a1!r}, {self.a2!r}, {self.a3!r})"


P = Quaternion(0.0, 1.0, 0.0, 0.0)
Q = Quaternion(0.0, 0.0, 1.0, 0.0)
R = Quaternion(0.0, 0.0, 0.0, 1.0)
