"""Stationary quaternion processes and linear-prediction systems.

Two processes driven by quaternion white noise ``e(t)`` (four independent
``N(0, delta^2)`` components) are supported::

    AR1:  x(t) = beta x(t-1) + e(t)      eta(s) = 4 delta^2 beta^s / (1 - |beta|^2)
    MA1:  x(t) = beta e(t-1) + e(t)      eta = (4 delta^2 (|beta|^2 + 1), 4 delta^2 beta, 0, ...)

with ``eta(s) = E[x(t) conj(x(t-s))]``. The order-n linear predictor solves the
Hermitian Toeplitz system with first column ``eta(0..n-1)`` and right-hand
side ``(conj eta(1), ..., conj eta(n))``. From samples, ``eta`` is replaced by
the correlation-windowed estimate ``(1/M) sum_l x_l conj(x_{l-s})``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .adjoint import split
from .quat import as_quat, qabs, qconj, qmul
from .symbols import SymbolModel, ar1_model, ma1_model
from .toeplitz import HermitianToeplitz

__all__ = [
    "ProcessSpec",
    "EstimatedSystem",
    "covariance",
    "process_model",
    "synthesize",
    "estimate_correlation",
    "estimate_correlation_direct",
    "prediction_system",
    "sample_count",
    "save_samples",
    "load_samples",
]

log = logging.getLogger(__name__)

KINDS = ("ar1", "ma1")


@dataclass(frozen=True)
class ProcessSpec:
    """A quaternion AR(1) or MA(1) process.

    ``|beta| < 1`` is enforced for AR1 only; MA1 covariances are finite for
    any ``beta``.
    """

    kind: str
    beta: tuple
    delta: float = 1.0
    seed: int = 0

    def __post_init__(self):
        kind = self.kind.lower()
        if kind not in KINDS:
            raise ValueError(f"unknown process kind {self.kind!r}; expected one of {KINDS}")
        object.__setattr__(self, "kind", kind)
        beta = tuple(float(v) for v in as_quat(self.beta))
        object.__setattr__(self, "beta", beta)
        if kind == "ar1" and not float(qabs(np.array(beta))) < 1.0:
            raise ValueError(f"AR1 needs |beta| < 1, got |beta| = {float(qabs(np.array(beta))):.6g}")
        if self.delta < 0:
            raise ValueError("delta must be non-negative")

    @property
    def beta_array(self) -> np.ndarray:
        return np.array(self.beta)


def process_model(spec: ProcessSpec) -> SymbolModel:
    if spec.kind == "ar1":
        return ar1_model(spec.beta_array, spec.delta)
    return ma1_model(spec.beta_array, spec.delta)


def covariance(spec: ProcessSpec, s) -> np.ndarray:
    """Exact ``eta(s)``; ``s`` may be an integer or an integer array."""
    s_arr = np.asarray(s)
    if np.any(s_arr < 0):
        raise ValueError("lags must be non-negative")
    out = as_quat(process_model(spec).eta(s_arr))
    return out


def sample_count(n: int, m: int) -> int:
    """Number of samples ``M = m n + 1`` used for an order-n estimate."""
    return m * n + 1


def synthesize(spec: ProcessSpec, count: int, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """Draw ``count`` consecutive samples as a ``(count, 4)`` array.

    AR1 starts from the zero state and discards a burn-in of
    ``max(1000, 10 / (1 - |beta|))`` steps. ``rng`` overrides ``spec.seed``.
    """
    if count < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(spec.seed) if rng is None else rng
    beta = spec.beta_array
    if spec.kind == "ma1":
        e = spec.delta * rng.standard_normal((count + 1, 4))
        return qmul(beta, e[:-1]) + e[1:]

    burn = max(1000, math.ceil(10.0 / (1.0 - float(qabs(beta)))))
    e = spec.delta * rng.standard_normal((burn + count, 4))
    b0, b1, b2, b3 = beta.tolist()
    out = np.empty((burn + count, 4))
    y0 = y1 = y2 = y3 = 0.0
    for t, (e0, e1, e2, e3) in enumerate(e.tolist()):
        y0, y1, y2, y3 = (
            b0 * y0 - b1 * y1 - b2 * y2 - b3 * y3 + e0,
            b0 * y1 + b1 * y0 + b2 * y3 - b3 * y2 + e1,
            b0 * y2 - b1 * y3 + b2 * y0 + b3 * y1 + e2,
            b0 * y3 + b1 * y2 - b2 * y1 + b3 * y0 + e3,
        )
        out[t] = (y0, y1, y2, y3)
    return out[burn:]


@dataclass(frozen=True)
class EstimatedSystem:
    """Correlation-windowed prediction system ``H v = w``.

    ``eta_hat`` holds the raw estimates for lags ``0..n``; ``col`` is the
    Toeplitz column with ``eta_hat(0)`` replaced by its real part, whose
    discarded imaginary residue is kept in ``imag_residue``.
    """

    n: int
    samples: int
    eta_hat: np.ndarray
    col: np.ndarray
    rhs: np.ndarray
    imag_residue: float

    def operator(self) -> HermitianToeplitz:
        return HermitianToeplitz(self.col)

    @property
    def degenerate(self) -> bool:
        """All samples zero: the sample matrix is rank deficient and ``H = 0``."""
        return not self.eta_hat[0, 0] > 0.0


def _xcorr(a: np.ndarray, b: np.ndarray, lags: int, size: int) -> np.ndarray:
    """``sum_l a[l] b[l - s]`` for ``s = 0..lags``."""
    fa = np.fft.fft(a, size)
    fg = np.fft.fft(b.conj(), size)
    return np.fft.ifft(fa * fg.conj())[: lags + 1]


def estimate_correlation(samples, n: int) -> EstimatedSystem:
    """Estimate ``eta(0..n)`` from ``M > n`` samples by correlation windowing.

    Uses ``x conj(y) = (x1 conj y1 + x2 conj y2) + (x2 y1 - x1 y2) q`` so each
    lag sum is a pair of FFT cross-correlations.
    """
    x = as_quat(samples)
    m = x.shape[0]
    if n < 0:
        raise ValueError("n must be non-negative")
    if m <= n:
        raise ValueError(f"need more samples than the system order (M={m}, n={n})")
    x1, x2 = split(x)
    size = 1 << int(math.ceil(math.log2(2 * m)))
    part1 = _xcorr(x1, x1.conj(), n, size) + _xcorr(x2, x2.conj(), n, size)
    part2 = _xcorr(x2, x1, n, size) - _xcorr(x1, x2, n, size)
    eta = np.stack([part1.real, part1.imag, part2.real, part2.imag], axis=-1) / m
    return _finish_estimate(eta, n, m)


def estimate_correlation_direct(samples, n: int) -> EstimatedSystem:
    """Same as :func:`estimate_correlation` by explicit lag sums (O(nM))."""
    x = as_quat(samples)
    m = x.shape[0]
    if m <= n:
        raise ValueError(f"need more samples than the system order (M={m}, n={n})")
    eta = np.stack([np.sum(qmul(x[s:], qconj(x[: m - s])), axis=0) for s in range(n + 1)]) / m
    return _finish_estimate(eta, n, m)


def _finish_estimate(eta: np.ndarray, n: int, m: int) -> EstimatedSystem:
    residue = float(np.sqrt(np.sum(eta[0, 1:] ** 2)))
    if residue > 0.0:
        log.debug("eta_hat(0) imaginary residue %.3e discarded", residue)
    col = eta[:n].copy()
    if n:
        col[0, 1:] = 0.0
    rhs = qconj(eta[1 : n + 1])
    return EstimatedSystem(n=n, samples=m, eta_hat=eta, col=col, rhs=rhs, imag_residue=residue)


def prediction_system(spec: ProcessSpec, n: int) -> tuple[HermitianToeplitz, np.ndarray]:
    """Exact-covariance system ``(T_n, w)`` with ``w = conj(eta(1..n))``."""
    if n < 1:
        raise ValueError("n must be positive")
    eta = covariance(spec, np.arange(n + 1))
    return HermitianToeplitz(eta[:n]), qconj(eta[1:])


def save_samples(path, samples, fmt: Optional[str] = None) -> None:
    """Write samples as CSV rows ``a0,a1,a2,a3`` or flat little-endian float64.

    The format defaults to CSV for a ``.csv`` suffix and binary otherwise.
    """
    path = Path(path)
    x = as_quat(samples)
    fmt = fmt or ("csv" if path.suffix.lower() == ".csv" else "binary")
    if fmt == "csv":
        np.savetxt(path, x, delimiter=",", fmt="%.17g")
    elif fmt == "binary":
        x.astype("<f8").tofile(path)
    else:
        raise ValueError(f"unknown sample format {fmt!r}")


def load_samples(path, fmt: Optional[str] = None) -> np.ndarray:
    path = Path(path)
    fmt = fmt or ("csv" if path.suffix.lower() == ".csv" else "binary")
    if fmt == "csv":
        data = np.loadtxt(path, delimiter=",", ndmin=2)
    elif fmt == "binary":
        data = np.fromfile(path, dtype="<f8")
        if data.size % 4:
            raise ValueError(f"{path}: binary sample file length is not a multiple of 4 doubles")
        data = data.reshape(-1, 4)
    else:
        raise ValueError(f"unknown sample format {fmt!r}")
    if data.shape[1] != 4:
        raise ValueError(f"{path}: expected 4 columns, got {data.shape[1]}")
    return data.astype(np.float64)
