"""Generating functions of Hermitian quaternion Toeplitz families.

A symbol ``f = phi1 + phi2 q`` on ``[-pi, pi]`` generates the Toeplitz column
``t_s = (1/2pi) int f(x) exp(-p s x) dx``. When the column comes from a
covariance sequence ``eta`` the symbol is the Fourier series::

    f(x) = eta(0) + sum_{s>=1} eta(s) exp(p s x) + conj(eta(s)) exp(-p s x)

whose split parts reduce to::

    phi1(x) = eta(0) + 2 sum Re(phi1(eta(s)) e^{isx})
    phi2(x) = -2i sum phi2(eta(s)) sin(s x)

``phi1`` is real and ``phi2`` is odd. The 2x2 block symbol::

    G(x) = [[phi1(x), phi2(x)], [conj(phi2(x)), phi1(-x)]]

is Hermitian with eigenvalues ``fmin(x) <= fmax(x)``; these bound and
asymptotically describe the spectra of the Toeplitz matrices.
"""
from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .adjoint import split
from .quat import as_quat, polar, qabs

__all__ = [
    "SymbolModel",
    "HPDVerdict",
    "ApproximateCoefficientsWarning",
    "sequence_model",
    "closed_form_model",
    "constant_model",
    "ar1_model",
    "ma1_model",
    "coefficients",
    "evaluate",
    "partial_sum",
    "g_block",
    "extremal_functions",
    "extremal_from_parts",
    "grid_extrema",
    "hpd_test",
    "check_structure",
]

DEFAULT_GRID = 4096


class ApproximateCoefficientsWarning(UserWarning):
    """Toeplitz coefficients were obtained by quadrature rather than exactly."""


class HPDVerdict(str, enum.Enum):
    DEFINITE = "definite"
    SEMIDEFINITE = "semidefinite"
    INDEFINITE = "indefinite"


EtaFn = Callable[[np.ndarray], np.ndarray]
PartFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SymbolModel:
    """A generating function given by covariances and/or closed-form parts.

    Parameters
    ----------
    eta : callable, optional
        Maps an integer array of lags ``s >= 0`` to an ``(len(s), 4)`` array of
        covariances. ``eta(0)`` must be real.
    phi1, phi2 : callable, optional
        Vectorised closed forms of the split parts of ``f`` on ``[-pi, pi]``.
    support : int, optional
        ``eta(s) == 0`` for every ``s >= support``.
    tail : callable, optional
        ``tail(m)`` bounds ``sum_{s>m} |eta(s)|``.
    """

    name: str
    eta: Optional[EtaFn] = None
    phi1: Optional[PartFn] = None
    phi2: Optional[PartFn] = None
    support: Optional[int] = None
    tail: Optional[Callable[[int], float]] = None
    params: dict = field(default_factory=dict, compare=False)

    @property
    def has_closed_form(self) -> bool:
        return self.phi1 is not None and self.phi2 is not None

    def eta_values(self, count: int) -> np.ndarray:
        if self.eta is None:
            raise ValueError(f"model {self.name!r} has no covariance sequence")
        return as_quat(self.eta(np.arange(count)))

    def truncation_order(self, tol: float = 1e-15) -> int:
        """Smallest series order whose neglected tail is below ``tol * |eta(0)|``."""
        if self.support is not None:
            return max(self.support - 1, 0)
        if self.tail is None:
            raise ValueError(
                f"model {self.name!r}: infinite series without closed form or tail bound"
            )
        scale = max(1.0, abs(float(self.eta_values(1)[0, 0])))
        m = 1
        while self.tail(m) > tol * scale:
            m *= 2
            if m > 1 << 24:
                raise ValueError(f"model {self.name!r}: tail does not decay")
        return m


def _series_parts(eta: np.ndarray, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split parts of ``eta(0) + sum_{s=1}^{m} ...`` from ``eta[0..m]``."""
    x = np.asarray(x, dtype=np.float64)
    e1, e2 = split(eta)
    s = np.arange(1, eta.shape[0])
    phase = np.multiply.outer(x, s)
    phi1 = e1[0].real + 2.0 * np.real(np.exp(1j * phase) @ e1[1:]) if s.size else np.full(x.shape, e1[0].real)
    phi1 = np.asarray(phi1, dtype=np.complex128)
    phi2 = -2j * (np.sin(phase) @ e2[1:]) if s.size else np.zeros(x.shape, dtype=np.complex128)
    return phi1, np.asarray(phi2, dtype=np.complex128)


def partial_sum(model: SymbolModel, x, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Split parts ``(phi1, phi2)`` of the order-``order`` partial sum ``f_m``."""
    if order < 0:
        raise ValueError("partial-sum order must be non-negative")
    return _series_parts(model.eta_values(order + 1), x)


def evaluate(model: SymbolModel, x, order: Optional[int] = None) -> tuple[np.ndarray, np.ndarray]:
    """Split parts of ``f`` (``order=None``) or of the partial sum ``f_order``."""
    if order is not None:
        return partial_sum(model, x, order)
    x = np.asarray(x, dtype=np.float64)
    if model.has_closed_form:
        phi1 = np.asarray(model.phi1(x), dtype=np.complex128)
        phi2 = np.asarray(model.phi2(x), dtype=np.complex128)
        return np.broadcast_to(phi1, x.shape).copy(), np.broadcast_to(phi2, x.shape).copy()
    return partial_sum(model, x, model.truncation_order())


def g_block(model: SymbolModel, x, order: Optional[int] = None) -> np.ndarray:
    """The Hermitian 2x2 block symbol at ``x``; shape ``x.shape + (2, 2)``."""
    x = np.asarray(x, dtype=np.float64)
    phi1, phi2 = evaluate(model, x, order)
    phi1_neg, _ = evaluate(model, -x, order)
    out = np.empty(x.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = phi1
    out[..., 0, 1] = phi2
    out[..., 1, 0] = phi2.conj()
    out[..., 1, 1] = phi1_neg
    return out


def extremal_from_parts(phi1_pos, phi1_neg, phi2) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues of ``[[a, b], [conj b, d]]`` from ``a = phi1(x)``, ``d = phi1(-x)``, ``b = phi2(x)``."""
    a = np.real(phi1_pos)
    d = np.real(phi1_neg)
    mid = 0.5 * (a + d)
    rad = 0.5 * np.sqrt((a - d) ** 2 + 4.0 * np.abs(phi2) ** 2)
    return mid - rad, mid + rad


def extremal_functions(model: SymbolModel, x, order: Optional[int] = None) -> tuple[np.ndarray, np.ndarray]:
    """``(fmin(x), fmax(x))``, the ordered eigenvalues of :func:`g_block`."""
    x = np.asarray(x, dtype=np.float64)
    phi1, phi2 = evaluate(model, x, order)
    phi1_neg, _ = evaluate(model, -x, order)
    return extremal_from_parts(phi1, phi1_neg, phi2)


def _grid(points: int) -> np.ndarray:
    return np.linspace(-np.pi, np.pi, points, endpoint=False)


def grid_extrema(model: SymbolModel, grid: int = DEFAULT_GRID) -> tuple[float, float]:
    """``(min fmin, max fmax)`` over a uniform grid of ``grid`` points (pi included)."""
    x = np.linspace(-np.pi, np.pi, grid + 1)
    lo, hi = extremal_functions(model, x)
    return float(lo.min()), float(hi.max())


def hpd_test(model: SymbolModel, grid: int = DEFAULT_GRID, rtol: float = 1e-12) -> HPDVerdict:
    """Check the sufficient conditions for every ``T_n`` to be HPD on a grid.

    ``DEFINITE`` when ``|phi2(x)|^2 <= phi1(x) phi1(-x)`` and ``phi1(x) >= 0``
    everywhere with the first inequality strict somewhere, ``SEMIDEFINITE``
    when it is never strict, ``INDEFINITE`` otherwise.
    """
    if grid < 64:
        raise ValueError(f"grid of {grid} points is too coarse (minimum 64)")
    x = np.linspace(-np.pi, np.pi, grid + 1)
    phi1, phi2 = evaluate(model, x)
    phi1_neg, _ = evaluate(model, -x)
    a = phi1.real
    d = phi1_neg.real
    lhs = np.abs(phi2) ** 2
    rhs = a * d
    scale = max(float(np.max(np.abs(a))), float(np.max(np.abs(phi2))), np.finfo(float).tiny)
    tol = rtol * scale**2
    cond_i = bool(np.all(lhs <= rhs + tol) and np.all(a >= -rtol * scale))
    if not cond_i:
        return HPDVerdict.INDEFINITE
    if np.any(lhs < rhs - tol):
        return HPDVerdict.DEFINITE
    return HPDVerdict.SEMIDEFINITE


def coefficients(model: SymbolModel, count: int) -> np.ndarray:
    """First Toeplitz column ``t_0 .. t_{count-1}`` as a ``(count, 4)`` array.

    Exact when the model carries a covariance sequence. Otherwise the Fourier
    integrals are evaluated by the periodic trapezoid rule on ``8 * count``
    points (at least 64) and an :class:`ApproximateCoefficientsWarning` is
    issued.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    if model.eta is not None:
        return model.eta_values(count)
    if not model.has_closed_form:
        raise ValueError(f"model {model.name!r} has neither covariances nor closed forms")
    warnings.warn(
        f"model {model.name!r}: coefficients computed by quadrature",
        ApproximateCoefficientsWarning,
        stacklevel=2,
    )
    points = max(8 * count, 64)
    x = _grid(points)
    phi1, phi2 = evaluate(model, x)
    s = np.arange(count)
    phase = np.exp(1j * np.multiply.outer(s, x))
    t1 = (phase.conj() @ phi1) / points
    t2 = (phase @ phi2) / points
    out = np.stack([t1.real, t1.imag, t2.real, t2.imag], axis=-1)
    out[0, 1:] = 0.0
    return out


def check_structure(phi1: PartFn, phi2: PartFn, grid: int = 257, rtol: float = 1e-12) -> None:
    """Raise ValueError unless ``phi1`` is real and ``phi2`` odd on a grid."""
    x = np.linspace(-np.pi, np.pi, grid)
    a = np.asarray(phi1(x), dtype=np.complex128)
    b = np.asarray(phi2(x), dtype=np.complex128)
    b_neg = np.asarray(phi2(-x), dtype=np.complex128)
    scale = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    imag = float(np.max(np.abs(a.imag)))
    odd = float(np.max(np.abs(b + b_neg)))
    if imag > rtol * scale:
        raise ValueError(f"phi1 must be real-valued; max |Im phi1| = {imag:.3e}")
    if odd > rtol * scale:
        raise ValueError(f"phi2 must be odd; max |phi2(x) + phi2(-x)| = {odd:.3e}")


def sequence_model(eta, name: str = "sequence") -> SymbolModel:
    """Model from a finitely supported covariance sequence ``eta[0..L-1]``."""
    seq = as_quat(eta).copy()
    if seq.ndim == 1:
        seq = seq[None, :]
    if seq.ndim != 2 or seq.shape[0] == 0:
        raise ValueError("eta must be a non-empty sequence of quaternions")
    scale = max(1.0, float(np.max(np.abs(seq))))
    if np.max(np.abs(seq[0, 1:])) > 1e-14 * scale:
        raise ValueError(f"eta(0) must be real, got {seq[0]}")
    seq[0, 1:] = 0.0
    length = seq.shape[0]

    def eta_fn(s):
        s = np.asarray(s)
        out = np.zeros(s.shape + (4,))
        inside = s < length
        out[inside] = seq[s[inside]]
        return out

    return SymbolModel(name=name, eta=eta_fn, support=length, params={"eta": seq})


def constant_model(value: float = 1.0) -> SymbolModel:
    """``f == value``; generates ``value * I``."""
    model = sequence_model(np.array([[value, 0.0, 0.0, 0.0]]), name="identity" if value == 1.0 else "constant")
    return SymbolModel(
        name=model.name,
        eta=model.eta,
        phi1=lambda x: np.full(np.shape(x), value, dtype=np.complex128),
        phi2=lambda x: np.zeros(np.shape(x), dtype=np.complex128),
        support=1,
        params={"value": value},
    )


def closed_form_model(phi1: PartFn, phi2: PartFn, name: str = "closed-form") -> SymbolModel:
    """Model known only through its split parts; checked for the required symmetry."""
    check_structure(phi1, phi2)
    return SymbolModel(name=name, phi1=phi1, phi2=phi2)


def ar1_model(beta, delta: float = 1.0) -> SymbolModel:
    """Symbol of ``x(t) = beta x(t-1) + e(t)``: ``eta(s) = 4 delta^2 beta^s / (1 - |beta|^2)``."""
    beta = as_quat(beta).astype(np.float64)
    rho = float(qabs(beta))
    if not 0.0 <= rho < 1.0:
        raise ValueError(f"AR(1) covariances need |beta| < 1, got |beta| = {rho:.6g}")
    c = 4.0 * delta**2 / (1.0 - rho**2)
    if rho == 0.0:
        return _scaled_identity(c, "ar1", beta, delta)
    _, axis, theta0 = polar(beta)
    m1, m2, m3 = axis[1:]

    def eta_fn(s):
        s = np.asarray(s, dtype=np.float64)
        mag = c * rho**s
        out = np.empty(s.shape + (4,))
        out[..., 0] = mag * np.cos(s * theta0)
        sn = mag * np.sin(s * theta0)
        out[..., 1] = sn * m1
        out[..., 2] = sn * m2
        out[..., 3] = sn * m3
        return out

    def kernel(u):
        # Re 1 / (1 - rho e^{iu})
        return (1.0 - rho * np.cos(u)) / (1.0 - 2.0 * rho * np.cos(u) + rho**2)

    def phi1(x):
        x = np.asarray(x, dtype=np.float64)
        val = -1.0 + (1.0 + m1) * kernel(x + theta0) + (1.0 - m1) * kernel(x - theta0)
        return (c * val).astype(np.complex128)

    def phi2(x):
        x = np.asarray(x, dtype=np.float64)
        return c * (m3 - 1j * m2) * (kernel(x - theta0) - kernel(x + theta0))

    def tail(m):
        return c * rho ** (m + 1) / (1.0 - rho)

    return SymbolModel(
        name="ar1",
        eta=eta_fn,
        phi1=phi1,
        phi2=phi2,
        tail=tail,
        params={"beta": beta, "delta": delta, "theta0": theta0, "axis": axis},
    )


def ma1_model(beta, delta: float = 1.0) -> SymbolModel:
    """Symbol of ``x(t) = beta e(t-1) + e(t)``; only ``eta(0)`` and ``eta(1)`` are non-zero."""
    beta = as_quat(beta).astype(np.float64)
    b0, b1, b2, b3 = beta
    rho2 = float(beta @ beta)
    d2 = delta**2
    seq = np.zeros((2, 4))
    seq[0, 0] = 4.0 * d2 * (rho2 + 1.0)
    seq[1] = 4.0 * d2 * beta
    base = sequence_model(seq, name="ma1")

    def phi1(x):
        x = np.asarray(x, dtype=np.float64)
        return (4.0 * d2 * (rho2 + 1.0) + 8.0 * d2 * (b0 * np.cos(x) - b1 * np.sin(x))).astype(np.complex128)

    def phi2(x):
        x = np.asarray(x, dtype=np.float64)
        return 8.0 * d2 * (b3 - 1j * b2) * np.sin(x)

    return SymbolModel(
        name="ma1",
        eta=base.eta,
        phi1=phi1,
        phi2=phi2,
        support=2,
        params={"beta": beta, "delta": delta},
    )


def _scaled_identity(c: float, name: str, beta, delta) -> SymbolModel:
    base = constant_model(c)
    return SymbolModel(
        name=name,
        eta=base.eta,
        phi1=base.phi1,
        phi2=base.phi2,
        support=1,
        params={"beta": beta, "delta": delta},
    )
