"""Preconditioned conjugate gradients for HPD quaternion systems."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .circulant import block_diagonalize, strang
from .quat import as_quat, inner, vnorm
from .symbols import HPDVerdict, SymbolModel, hpd_test
from .toeplitz import HermitianToeplitz

__all__ = [
    "SolveConfig",
    "SolveReport",
    "PCGError",
    "NonRealStepError",
    "BreakdownError",
    "MaxIterationsError",
    "pcg_solve",
    "solve_toeplitz",
    "make_preconditioner",
]

Operator = Callable[[np.ndarray], np.ndarray]

REALNESS_RTOL = 1e-10


class PCGError(ArithmeticError):
    """Base class for solver failures; carries the iterate and report so far."""

    def __init__(self, message: str, x=None, report=None):
        super().__init__(message)
        self.x = x
        self.report = report


class NonRealStepError(PCGError):
    """A step scalar had a sizeable imaginary part: the operator is not Hermitian."""


class BreakdownError(PCGError):
    """``<A p, p> <= 0`` or ``<r, z> <= 0``: operator or preconditioner not HPD."""


class MaxIterationsError(PCGError):
    """The stopping rule was not met within ``max_iter`` iterations."""


@dataclass(frozen=True)
class SolveConfig:
    """Solver settings.

    The iteration stops once ``||r_k||_2 <= tol_rel ||r_0||_2``, or, when
    ``tol_abs`` is given, once ``||r_k||_2 <= tol_abs``. The published table
    values are reproduced by the absolute rule with ``tol_abs=1e-7``.
    ``max_iter=None`` means ``10 n``. The recursively updated residual is
    replaced by ``b - A x`` every ``refresh_every`` iterations.

    ``definite_preconditioner=False`` lets the iteration continue when
    ``<r, z>`` turns negative, which happens when a Strang circulant built
    from noisy covariance estimates is indefinite. Only ``<r, z> = 0`` is then
    a breakdown.
    """

    tol_rel: float = 1e-7
    max_iter: Optional[int] = None
    record_history: bool = True
    refresh_every: int = 50
    tol_abs: Optional[float] = None
    definite_preconditioner: bool = True

    def __post_init__(self):
        if not self.tol_rel > 0:
            raise ValueError(f"tol_rel must be positive, got {self.tol_rel}")
        if self.tol_abs is not None and not self.tol_abs > 0:
            raise ValueError(f"tol_abs must be positive, got {self.tol_abs}")
        if self.max_iter is not None and self.max_iter < 0:
            raise ValueError("max_iter must be non-negative")


@dataclass
class SolveReport:
    iterations: int = 0
    residual_history: list = field(default_factory=list)
    final_error: float = float("nan")
    wall_time: float = 0.0
    converged: bool = False


def _real_step(value: np.ndarray, what: str) -> float:
    re = float(value[0])
    im = float(np.sqrt(value[1] ** 2 + value[2] ** 2 + value[3] ** 2))
    if im > REALNESS_RTOL * max(abs(re), np.finfo(float).tiny):
        raise NonRealStepError(f"{what} is not real: real part {re:.3e}, imaginary magnitude {im:.3e}")
    return re


def pcg_solve(
    apply_a: Operator,
    apply_pinv: Optional[Operator],
    b,
    cfg: SolveConfig = SolveConfig(),
    callback: Optional[Callable[[np.ndarray], None]] = None,
):
    """Solve ``A x = b`` from a zero initial guess.

    Parameters
    ----------
    apply_a, apply_pinv : callable
        ``x -> A x`` and ``r -> P^{-1} r`` on ``(n, 4)`` quaternion vectors.
        ``apply_pinv=None`` runs plain CG.
    b : array_like, shape (n, 4)
    cfg : SolveConfig
    callback : callable, optional
        Called with each new iterate.

    Returns
    -------
    x : ndarray, shape (n, 4)
    report : SolveReport

    Raises
    ------
    NonRealStepError, BreakdownError, MaxIterationsError
        Each carries ``x`` and ``report`` as of the failure.
    """
    t_start = time.perf_counter()
    b = as_quat(b)
    n = b.shape[0]
    max_iter = 10 * n if cfg.max_iter is None else cfg.max_iter
    precond = apply_pinv if apply_pinv is not None else (lambda v: v)
    report = SolveReport()

    x = np.zeros_like(b)
    r = b.copy()
    r0 = vnorm(r)
    if cfg.record_history:
        report.residual_history.append(r0)

    def finish(converged: bool):
        report.converged = converged
        report.final_error = vnorm(b - apply_a(x))
        report.wall_time = time.perf_counter() - t_start
        return x, report

    threshold = cfg.tol_abs if cfg.tol_abs is not None else cfg.tol_rel * r0
    if r0 <= threshold:
        return finish(True)

    def real(value: np.ndarray, what: str) -> float:
        try:
            return _real_step(value, what)
        except NonRealStepError as exc:
            exc.x, exc.report = x, finish(False)[1]
            raise

    def bad_rz(value: float) -> bool:
        return value <= 0.0 if cfg.definite_preconditioner else value == 0.0

    z = precond(r)
    rz = real(inner(r, z), "<r, z>")
    if bad_rz(rz):
        raise BreakdownError(f"<r, z> = {rz:.3e} at the first step: preconditioner not definite", x, finish(False)[1])
    p = z.copy()
    for k in range(1, max_iter + 1):
        ap = apply_a(p)
        pap = real(inner(ap, p), "<A p, p>")
        if pap <= 0.0:
            raise BreakdownError(f"<A p, p> = {pap:.3e} <= 0 at iteration {k}", x, finish(False)[1])
        alpha = rz / pap
        x = x + alpha * p
        if cfg.refresh_every and k % cfg.refresh_every == 0:
            r = b - apply_a(x)
        else:
            r = r - alpha * ap
        report.iterations = k
        res = vnorm(r)
        if cfg.record_history:
            report.residual_history.append(res)
        if callback is not None:
            callback(x)
        if res <= threshold:
            return finish(True)
        z = precond(r)
        rz_new = real(inner(r, z), "<r, z>")
        if bad_rz(rz_new):
            raise BreakdownError(f"<r, z> = {rz_new:.3e} at iteration {k}", x, finish(False)[1])
        beta = rz_new / rz
        rz = rz_new
        p = z + beta * p
    x, report = finish(False)
    raise MaxIterationsError(f"no convergence within {max_iter} iterations", x, report)


def make_preconditioner(t: HermitianToeplitz, kind: str) -> Optional[Operator]:
    """``None`` for ``kind='none'``; Strang's circulant inverse for ``'strang'``."""
    if kind == "none":
        return None
    if kind == "strang":
        return block_diagonalize(strang(t)).solve
    raise ValueError(f"unknown preconditioner {kind!r} (expected 'strang' or 'none')")


def solve_toeplitz(
    model_or_operator,
    n: Optional[int] = None,
    b=None,
    preconditioner: str = "strang",
    cfg: SolveConfig = SolveConfig(),
    check_hpd: bool = True,
):
    """Solve ``T_n u = b`` for a symbol-built or explicit Hermitian Toeplitz ``T_n``.

    ``model_or_operator`` is a :class:`SymbolModel` (then ``n`` is required and
    the symbol must pass :func:`hpd_test` unless ``check_hpd=False``) or a
    :class:`HermitianToeplitz`.
    """
    if isinstance(model_or_operator, SymbolModel):
        if n is None:
            raise ValueError("n is required when solving from a symbol")
        if check_hpd:
            verdict = hpd_test(model_or_operator)
            if verdict is not HPDVerdict.DEFINITE:
                raise ValueError(f"symbol {model_or_operator.name!r} is {verdict.value}, not definite")
        t = HermitianToeplitz.from_symbol(model_or_operator, n)
    else:
        t = model_or_operator
    if b is None:
        raise ValueError("right-hand side b is required")
    return pcg_solve(t.matvec, make_preconditioner(t, preconditioner), b, cfg)
