"""Linear prediction with exact and estimated covariances.

Solves the order-n prediction system of an AR(1) process with plain CG and
with Strang-preconditioned CG, first from the exact covariances and then
from covariances estimated from simulated samples.
"""
import numpy as np

from qtoeplitz import ProcessSpec, SolveConfig, estimate_correlation, pcg_solve, prediction_system, synthesize
from qtoeplitz.pcg import make_preconditioner
from qtoeplitz.signal import sample_count

spec = ProcessSpec("ar1", (0.1, -0.3, 0.4, 0.2))
stop = SolveConfig(tol_abs=1e-7)

print("exact covariances")
print("    n  strang  plain")
for n in (256, 512, 1024, 2048):
    t, w = prediction_system(spec, n)
    _, with_c = pcg_solve(t.matvec, make_preconditioner(t, "strang"), w, stop)
    _, plain = pcg_solve(t.matvec, None, w, stop)
    print(f"{n:5d}  {with_c.iterations:6d}  {plain.iterations:5d}")

# With estimated covariances the Strang matrix can lose definiteness for short
# records, so the indefinite variant of the iteration is allowed.
loose = SolveConfig(tol_rel=1e-7, definite_preconditioner=False)
n = 1024
print(f"\nestimated covariances, n={n}")
print("   m  samples  strang  plain")
for m in (4, 8, 16):
    rng = np.random.default_rng([0, n, m])
    est = estimate_correlation(synthesize(spec, sample_count(n, m), rng), n)
    t = est.operator()
    _, with_c = pcg_solve(t.matvec, make_preconditioner(t, "strang"), est.rhs, loose)
    _, plain = pcg_solve(t.matvec, None, est.rhs, loose)
    print(f"{m:4d}  {est.samples:7d}  {with_c.iterations:6d}  {plain.iterations:5d}")

# Longer records make the estimate closer to the truth
t_exact, w_exact = prediction_system(spec, 32)
for m in (10, 100, 1000):
    est = estimate_correlation(synthesize(spec, sample_count(32, m), np.random.default_rng(m)), 32)
    err = np.abs(est.col - t_exact.col).max() / abs(t_exact.col[0, 0])
    print(f"m={m:5d}  relative covariance error {err:.3f}")
