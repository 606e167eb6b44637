"""Eigenvalue distribution of quaternion Toeplitz matrices.

Compares averages over the spectrum of T_n with averages of the two extremal
symbol functions, for growing n.
"""
import numpy as np

from qtoeplitz import HermitianToeplitz, ma1_model
from qtoeplitz.spectra import dense_spectrum, szego_moment_check
from qtoeplitz.symbols import extremal_functions, grid_extrema

model = ma1_model(np.array([0.5, 0.2, -0.1, 0.3]))
t0 = model.eta_values(1)[0, 0]

for n in (64, 256, 1024):
    mean, _, _ = szego_moment_check(model, n, lambda v: v)
    lhs, rhs, gap = szego_moment_check(model, n, lambda v: v**2)
    print(f"n={n:5d}  mean eigenvalue {mean:.10f} (t0 = {t0:.10f})  second moment gap {gap:.2e}")

# A histogram of eigenvalues against samples of fmin and fmax
n = 512
eigs = dense_spectrum(HermitianToeplitz.from_symbol(model, n)).eigenvalues
x = np.linspace(-np.pi, np.pi, n, endpoint=False)
lo, hi = extremal_functions(model, x)
edges = np.linspace(*grid_extrema(model), 9)
print("\nbin           eigenvalues  symbol samples")
for a, b in zip(edges[:-1], edges[1:]):
    in_eigs = np.count_nonzero((eigs >= a) & (eigs < b))
    in_symbol = np.count_nonzero((lo >= a) & (lo < b)) + np.count_nonzero((hi >= a) & (hi < b))
    print(f"[{a:5.2f}, {b:5.2f})  {in_eigs:11d}  {in_symbol / 2:14.1f}")
