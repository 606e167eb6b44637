"""Hermitian quaternion Toeplitz operators with an O(n log n) product."""
from __future__ import annotations

import numpy as np

from .adjoint import combine, split
from .quat import as_quat, qconj
from .symbols import SymbolModel, coefficients

__all__ = ["HermitianToeplitz", "DENSE_CAP"]

DENSE_CAP = 2048


def _embedding_eigs(col: np.ndarray, row: np.ndarray) -> np.ndarray:
    """DFT of the 2n circulant embedding of the complex Toeplitz (col, row)."""
    n = col.shape[0]
    circ = np.zeros(2 * n, dtype=np.complex128)
    circ[:n] = col
    circ[n + 1 :] = row[1:][::-1]
    return np.fft.fft(circ)


def _conj_spectrum(fx: np.ndarray) -> np.ndarray:
    """DFT of ``conj(x)`` from the DFT of ``x``: ``conj(F[-k])``."""
    return np.conj(np.roll(fx[..., ::-1], 1, axis=-1))


class HermitianToeplitz:
    """Hermitian quaternion Toeplitz matrix held by its first column.

    Entry ``(s, l)`` is ``t_{s-l}`` for ``s >= l`` and ``conj(t_{l-s})``
    otherwise, with ``t_0`` real. The matrix is never formed; products go
    through the complex split ``T = T1 + T2 q`` and two 2n-point circulant
    embeddings, one for each of ``T1`` and ``T2``.

    Parameters
    ----------
    col : array_like, shape (n, 4)
        ``t_0, ..., t_{n-1}``.
    """

    def __init__(self, col):
        col = np.array(as_quat(col), dtype=np.float64)
        if col.ndim == 1:
            col = col[None, :]
        if col.ndim != 2 or col.shape[0] == 0:
            raise ValueError(f"first column must have shape (n, 4), got {col.shape}")
        scale = max(1.0, float(np.max(np.abs(col))))
        if np.max(np.abs(col[0, 1:])) > 1e-12 * scale:
            raise ValueError(f"t_0 must be real for a Hermitian Toeplitz matrix, got {col[0]}")
        col[0, 1:] = 0.0
        col.setflags(write=False)
        self.col = col
        self.n = col.shape[0]
        c1, c2 = split(col)
        # Row of T1 is conj(c1); row of T2 is -c2 (since phi2(conj t) = -phi2(t)).
        self._eig1 = _embedding_eigs(c1, c1.conj())
        self._eig2 = _embedding_eigs(c2, -c2)

    @classmethod
    def from_symbol(cls, model: SymbolModel, n: int) -> "HermitianToeplitz":
        return cls(coefficients(model, n))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n, self.n)

    def matvec(self, x) -> np.ndarray:
        """``T x`` for a quaternion vector ``x`` of shape ``(n, 4)``."""
        x = as_quat(x)
        if x.shape != (self.n, 4):
            raise ValueError(f"expected a vector of shape ({self.n}, 4), got {x.shape}")
        x1, x2 = split(x)
        f = np.fft.fft(np.stack([x1, x2]), n=2 * self.n, axis=-1)
        fc = _conj_spectrum(f)
        y = np.fft.ifft(
            np.stack([self._eig1 * f[0] - self._eig2 * fc[1], self._eig1 * f[1] + self._eig2 * fc[0]]),
            axis=-1,
        )[:, : self.n]
        return combine((y[0], y[1]))

    __call__ = matvec

    def __matmul__(self, x) -> np.ndarray:
        return self.matvec(x)

    def densify(self, cap: int = DENSE_CAP) -> np.ndarray:
        """Dense ``(n, n, 4)`` materialisation, refused above ``cap``."""
        if self.n > cap:
            raise ValueError(f"refusing to densify n={self.n} above cap {cap}")
        idx = np.arange(self.n)
        lag = idx[:, None] - idx[None, :]
        lower = self.col[np.abs(lag)]
        return np.where((lag >= 0)[..., None], lower, qconj(lower))

    def __repr__(self) -> str:
        return f"HermitianToeplitz(n={self.n})"
