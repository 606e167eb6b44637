"""Dense spectral oracles: right eigenvalues, Szego moments and clustering."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .adjoint import adjoint_matrix
from .circulant import strang
from .quat import as_quat, is_hermitian
from .symbols import SymbolModel, extremal_functions
from .toeplitz import DENSE_CAP, HermitianToeplitz

__all__ = [
    "SpectrumReport",
    "PairingError",
    "ClusteringReport",
    "dense_spectrum",
    "szego_moment_check",
    "clustering_report",
]

HERMITIAN_TOL = 1e-10
PAIR_TOL = 1e-8
SZEGO_GRID = 8192


class PairingError(np.linalg.LinAlgError):
    """Eigenvalues of the adjoint did not come in coincident pairs."""


@dataclass
class SpectrumReport:
    eigenvalues: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    def to_csv(self, path) -> None:
        np.savetxt(Path(path), self.eigenvalues, fmt="%.17g", header="eigenvalue", comments="")

    def to_json(self, path=None) -> str:
        text = json.dumps({**self.meta, "n": self.n, "eigenvalues": self.eigenvalues.tolist()}, indent=1)
        if path is not None:
            Path(path).write_text(text)
        return text


def _collapse_pairs(vals: np.ndarray) -> np.ndarray:
    lo, hi = vals[0::2], vals[1::2]
    gap = np.abs(hi - lo)
    bound = PAIR_TOL * np.maximum(1.0, np.abs(lo))
    if np.any(gap >= bound):
        k = int(np.argmax(gap / bound))
        raise PairingError(f"adjoint eigenvalues {lo[k]:.17g} and {hi[k]:.17g} do not pair (gap {gap[k]:.3e})")
    return 0.5 * (lo + hi)


def dense_spectrum(a, cap: int = DENSE_CAP, **meta) -> SpectrumReport:
    """Sorted right eigenvalues of a dense Hermitian quaternion matrix.

    Parameters
    ----------
    a : array_like, shape (n, n, 4) or HermitianToeplitz
    cap : int
        Largest ``n`` accepted.

    Raises
    ------
    ValueError
        Non-Hermitian input or ``n > cap``.
    PairingError
        The doubled spectrum of the adjoint failed to pair up.
    """
    if isinstance(a, HermitianToeplitz):
        meta.setdefault("operator", "toeplitz")
        a = a.densify(cap)
    a = as_quat(a)
    n = a.shape[0]
    if n > cap:
        raise ValueError(f"n={n} exceeds the dense cap {cap}")
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    if not is_hermitian(a, HERMITIAN_TOL * scale):
        raise ValueError("matrix is not Hermitian")
    vals = np.linalg.eigvalsh(adjoint_matrix(a))
    return SpectrumReport(_collapse_pairs(vals), meta)


def szego_moment_check(model: SymbolModel, n: int, func: Callable[[np.ndarray], np.ndarray]):
    """Compare ``(1/n) sum F(lambda_s(T_n))`` with ``(1/4pi) int F(fmax) + F(fmin)``.

    Returns
    -------
    lhs, rhs, gap : float
        ``gap = |lhs - rhs| / max(|rhs|, tiny)``.
    """
    eigs = dense_spectrum(HermitianToeplitz.from_symbol(model, n)).eigenvalues
    lhs = float(np.mean(func(eigs)))
    x = np.linspace(-np.pi, np.pi, SZEGO_GRID, endpoint=False)
    lo, hi = extremal_functions(model, x)
    rhs = float(0.5 * np.mean(func(hi) + func(lo)))
    gap = abs(lhs - rhs) / max(abs(rhs), np.finfo(float).tiny)
    return lhs, rhs, gap


@dataclass
class ClusteringReport:
    outside_count: int
    min_eig: float
    eigenvalues: np.ndarray


def clustering_report(model: SymbolModel, n: int, eps: float, t: Optional[HermitianToeplitz] = None) -> ClusteringReport:
    """Spectrum of the Strang-preconditioned ``T_n`` and its spread around 1.

    Uses the Hermitian form ``S^{-1/2} M(T) S^{-1/2}`` with ``S`` the adjoint
    of the preconditioner; the doubled eigenvalues are collapsed to ``n``.

    Raises
    ------
    ValueError
        The preconditioner is not positive definite.
    """
    if t is None:
        t = HermitianToeplitz.from_symbol(model, n)
    if t.n > DENSE_CAP:
        raise ValueError(f"n={t.n} exceeds the dense cap {DENSE_CAP}")
    mt = adjoint_matrix(t.densify())
    mc = adjoint_matrix(strang(t).densify())
    w, v = np.linalg.eigh(mc)
    if w.min() <= 0.0:
        raise ValueError(f"Strang preconditioner is not positive definite (min eigenvalue {w.min():.3e})")
    root_inv = (v / np.sqrt(w)) @ v.conj().T
    sym = root_inv @ mt @ root_inv
    vals = _collapse_pairs(np.linalg.eigvalsh(0.5 * (sym + sym.conj().T)))
    outside = int(np.count_nonzero(np.abs(vals - 1.0) > eps))
    return ClusteringReport(outside, float(vals.min()), vals)
