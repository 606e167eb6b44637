"""Complex split of quaternion data and the complex adjoint maps.

Every quaternion ``X`` is uniquely ``X = X1 + X2 q`` with ``X1, X2`` in the
subalgebra spanned by ``{1, p}``. That subalgebra is a copy of the complex
numbers (``p`` plays ``1j``), so ``X1`` and ``X2`` are held as numpy complex
arrays. The one rule needed to multiply split values is ``q c = conj(c) q``.

The adjoint maps are::

    M(A) = [[A1, -A2], [conj(A2), conj(A1)]]      (2n x 2n)
    V(x) = [x1; conj(x2)]                          (2n)

chosen so that ``V(A x) = M(A) V(x)`` and ``M(A B) = M(A) M(B)``.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .quat import as_quat

__all__ = [
    "CSplit",
    "split",
    "combine",
    "adjoint_matrix",
    "adjoint_vector",
    "inverse_adjoint_vector",
    "csplit_qmatvec",
]


class CSplit(NamedTuple):
    """The pair ``(X1, X2)`` with ``X = X1 + X2 q``."""

    part1: np.ndarray
    part2: np.ndarray


def split(x) -> CSplit:
    x = as_quat(x)
    return CSplit(x[..., 0] + 1j * x[..., 1], x[..., 2] + 1j * x[..., 3])


def combine(parts) -> np.ndarray:
    """Inverse of :func:`split`."""
    p1, p2 = (np.asarray(p, dtype=np.complex128) for p in parts)
    if p1.shape != p2.shape:
        raise ValueError(f"split parts differ in shape: {p1.shape} vs {p2.shape}")
    return np.stack([p1.real, p1.imag, p2.real, p2.imag], axis=-1)


def adjoint_matrix(a) -> np.ndarray:
    a = as_quat(a)
    if a.ndim != 3 or a.shape[0] != a.shape[1]:
        raise ValueError(f"adjoint_matrix needs a square quaternion matrix, got shape {a.shape[:-1]}")
    a1, a2 = split(a)
    return np.block([[a1, -a2], [a2.conj(), a1.conj()]])


def adjoint_vector(x) -> np.ndarray:
    x1, x2 = split(x)
    return np.concatenate([x1, x2.conj()], axis=0)


def inverse_adjoint_vector(z) -> np.ndarray:
    z = np.asarray(z, dtype=np.complex128)
    if z.shape[0] % 2:
        raise ValueError(f"adjoint vectors have even length, got {z.shape[0]}")
    n = z.shape[0] // 2
    return combine((z[:n], z[n:].conj()))


def csplit_qmatvec(a: CSplit, x: CSplit) -> CSplit:
    """Quaternion matrix-vector product carried out on split parts.

    ``(A1 + A2 q)(x1 + x2 q) = (A1 x1 - A2 conj(x2)) + (A1 x2 + A2 conj(x1)) q``
    """
    a1, a2 = a
    x1, x2 = x
    if a1.shape != a2.shape or x1.shape != x2.shape or a1.shape[-1] != x1.shape[0]:
        raise ValueError(f"shape mismatch: matrix {a1.shape}, vector {x1.shape}")
    return CSplit(a1 @ x1 - a2 @ x2.conj(), a1 @ x2 + a2 @ x1.conj())
