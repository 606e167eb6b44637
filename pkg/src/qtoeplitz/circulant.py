"""Quaternion circulant matrices and Strang's circulant preconditioner.

A quaternion circulant ``C = C1 + C2 q`` is not diagonalised by the DFT, but
it is block diagonalised into ``n`` blocks of size 2x2. With numpy's forward
transform ``F`` (exponent ``-2 pi i jk / n``), ``d1 = F c1`` and ``d2 = F c2``,
the product ``y = C x`` reads, frequency by frequency::

    [F y1     ](k)   [d1[k]         -d2[k]        ] [F x1     ](k)
    [F conj y2](k) = [conj d2[-k]    conj d1[-k]  ] [F conj x2](k)

so frequency ``k`` couples to its conjugate partner ``-k mod n`` only through
the stored coefficients. For a Hermitian circulant every block is Hermitian
and blocks ``k`` and ``-k`` share eigenvalues.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .adjoint import combine, split
from .quat import as_quat, qconj
from .toeplitz import DENSE_CAP, HermitianToeplitz

__all__ = [
    "Circulant",
    "BlockDiagFactor",
    "SingularBlockError",
    "strang",
    "strang_column",
    "block_diagonalize",
    "solve_apply",
    "spectrum",
    "partner_index",
]

SINGULAR_RTOL = 1e-14


class SingularBlockError(np.linalg.LinAlgError):
    """A 2x2 frequency block of a circulant is numerically singular."""

    def __init__(self, frequency: int, abs_det: float):
        self.frequency = frequency
        self.abs_det = abs_det
        super().__init__(f"singular circulant block at frequency {frequency} (|det| = {abs_det:.3e})")


def partner_index(n: int) -> np.ndarray:
    """Conjugate-frequency partner ``-k mod n`` of each frequency ``k``."""
    return (-np.arange(n)) % n


class Circulant:
    """Quaternion circulant matrix given by its first column ``c_0 .. c_{n-1}``.

    Each row is the previous one rotated one place to the right, so entry
    ``(s, l)`` is ``c_{(s - l) mod n}``.
    """

    def __init__(self, col):
        col = np.array(as_quat(col), dtype=np.float64)
        if col.ndim == 1:
            col = col[None, :]
        if col.ndim != 2 or col.shape[0] == 0:
            raise ValueError(f"first column must have shape (n, 4), got {col.shape}")
        col.setflags(write=False)
        self.col = col
        self.n = col.shape[0]

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        mirrored = qconj(self.col[partner_index(self.n)])
        scale = max(1.0, float(np.max(np.abs(self.col))))
        return bool(np.max(np.abs(self.col - mirrored)) <= tol * scale)

    def densify(self, cap: int = DENSE_CAP) -> np.ndarray:
        if self.n > cap:
            raise ValueError(f"refusing to densify n={self.n} above cap {cap}")
        idx = np.arange(self.n)
        return self.col[(idx[:, None] - idx[None, :]) % self.n]

    def factor(self) -> "BlockDiagFactor":
        return block_diagonalize(self)

    def matvec(self, x) -> np.ndarray:
        return self.factor().matvec(x)

    def __repr__(self) -> str:
        return f"Circulant(n={self.n})"


@dataclass(frozen=True)
class BlockDiagFactor:
    """Frequency-domain form of a quaternion circulant.

    ``d1`` and ``d2`` are the forward DFTs of the split parts of the first
    column. Block ``k`` is ``[[d1[k], -d2[k]], [conj d2[-k], conj d1[-k]]]``.
    """

    d1: np.ndarray
    d2: np.ndarray

    @property
    def n(self) -> int:
        return self.d1.shape[0]

    @property
    def blocks(self) -> np.ndarray:
        """All ``n`` blocks as an ``(n, 2, 2)`` complex array."""
        pk = partner_index(self.n)
        h = np.empty((self.n, 2, 2), dtype=np.complex128)
        h[:, 0, 0] = self.d1
        h[:, 0, 1] = -self.d2
        h[:, 1, 0] = self.d2[pk].conj()
        h[:, 1, 1] = self.d1[pk].conj()
        return h

    def _forward(self, x) -> tuple[np.ndarray, np.ndarray]:
        x = as_quat(x)
        if x.shape != (self.n, 4):
            raise ValueError(f"expected a vector of shape ({self.n}, 4), got {x.shape}")
        x1, x2 = split(x)
        return np.fft.fft(x1), np.fft.fft(x2.conj())

    def _backward(self, u1: np.ndarray, u2: np.ndarray) -> np.ndarray:
        return combine((np.fft.ifft(u1), np.fft.ifft(u2).conj()))

    def matvec(self, x) -> np.ndarray:
        """``C x`` through the block form."""
        f1, f2 = self._forward(x)
        h = self.blocks
        return self._backward(h[:, 0, 0] * f1 + h[:, 0, 1] * f2, h[:, 1, 0] * f1 + h[:, 1, 1] * f2)

    def solve(self, r) -> np.ndarray:
        """``C^{-1} r`` with one 2x2 solve per frequency."""
        f1, f2 = self._forward(r)
        h = self.blocks
        a, b, c, d = h[:, 0, 0], h[:, 0, 1], h[:, 1, 0], h[:, 1, 1]
        det = a * d - b * c
        scale = np.sum(np.abs(h) ** 2, axis=(1, 2))
        bad = np.abs(det) <= SINGULAR_RTOL * scale
        if np.any(bad):
            k = int(np.flatnonzero(bad)[0])
            raise SingularBlockError(k, float(abs(det[k])))
        return self._backward((d * f1 - b * f2) / det, (a * f2 - c * f1) / det)

    def to_dense(self) -> np.ndarray:
        """Rebuild the ``(n, n, 4)`` circulant by applying it to unit vectors."""
        eye = np.zeros((self.n, 4))
        cols = []
        for j in range(self.n):
            eye[:] = 0.0
            eye[j, 0] = 1.0
            cols.append(self.matvec(eye))
        return np.stack(cols, axis=1)

    def spectrum(self, tol: float = 1e-10) -> np.ndarray:
        return spectrum(self, tol)


def strang_column(col) -> np.ndarray:
    """First column of Strang's circulant for a Hermitian Toeplitz column.

    Copies ``t_0 .. t_h`` with ``h = floor((n-1)/2)``, wraps ``conj(t_h) ..
    conj(t_1)`` into the tail and, for even ``n``, puts a zero at index ``n/2``.
    """
    col = as_quat(col)
    n = col.shape[0]
    h = (n - 1) // 2
    out = np.zeros((n, 4))
    out[: h + 1] = col[: h + 1]
    if h:
        out[n - h :] = qconj(col[1 : h + 1][::-1])
    return out


def strang(t: HermitianToeplitz) -> Circulant:
    return Circulant(strang_column(t.col))


def block_diagonalize(c: Circulant) -> BlockDiagFactor:
    c1, c2 = split(c.col)
    d1 = np.fft.fft(c1)
    d2 = np.fft.fft(c2)
    d1.setflags(write=False)
    d2.setflags(write=False)
    return BlockDiagFactor(d1, d2)


def solve_apply(factor: BlockDiagFactor, r) -> np.ndarray:
    return factor.solve(r)


def spectrum(factor: BlockDiagFactor, tol: float = 1e-10) -> np.ndarray:
    """Sorted right eigenvalues (n of them, with multiplicity) of a Hermitian circulant.

    Block ``k`` and its partner ``n - k`` carry the same eigenvalue pair, so
    the spectrum takes both eigenvalues of blocks ``1 <= k < n/2`` and one
    eigenvalue of the self-paired blocks ``k = 0`` and, for even ``n``,
    ``k = n/2``.
    """
    h = factor.blocks
    scale = max(1.0, float(np.max(np.abs(h))))
    asym = float(np.max(np.abs(h - np.conj(np.swapaxes(h, 1, 2)))))
    if asym > tol * scale:
        raise ValueError(f"circulant blocks are not Hermitian (asymmetry {asym:.3e})")
    n = factor.n
    a = h[:, 0, 0].real
    d = h[:, 1, 1].real
    mid = 0.5 * (a + d)
    rad = 0.5 * np.sqrt((a - d) ** 2 + 4.0 * np.abs(h[:, 0, 1]) ** 2)
    lo, hi = mid - rad, mid + rad
    paired = np.arange(1, (n + 1) // 2)
    vals = [lo[:1], lo[paired], hi[paired]]
    if n % 2 == 0 and n > 1:
        vals.append(lo[n // 2 : n // 2 + 1])
    return np.sort(np.concatenate(vals))
