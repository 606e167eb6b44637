"""Fast Toeplitz products and the Strang circulant preconditioner.

Builds T_n from an AR(1) symbol, checks the FFT product against the dense
matrix, then looks at how the Strang circulant approximates T_n.
"""
import time

import numpy as np

from qtoeplitz import HermitianToeplitz, ar1_model, block_diagonalize, strang
from qtoeplitz.circulant import spectrum
from qtoeplitz.quat import hermitian_matvec_dense
from qtoeplitz.spectra import clustering_report, dense_spectrum
from qtoeplitz.symbols import grid_extrema

beta = np.array([0.1, -0.3, 0.4, 0.2])
model = ar1_model(beta)
lo, hi = grid_extrema(model)
print(f"symbol range: [{lo:.4f}, {hi:.4f}]")

rng = np.random.default_rng(0)
t = HermitianToeplitz.from_symbol(model, 64)
x = rng.standard_normal((64, 4))
dense = t.densify()
print("fast vs dense product:", np.abs(t.matvec(x) - hermitian_matvec_dense(dense, x)).max())

# The product costs O(n log n)
for n in (2**12, 2**14, 2**16):
    big = HermitianToeplitz.from_symbol(model, n)
    y = rng.standard_normal((n, 4))
    start = time.perf_counter()
    for _ in range(10):
        big.matvec(y)
    print(f"n={n:6d}  {1e3 * (time.perf_counter() - start) / 10:.2f} ms per product")

# Strang circulant: block diagonal after a DFT, one 2x2 complex block per frequency
c = strang(t)
factor = block_diagonalize(c)
print("blocks:", factor.blocks.shape)
fast = spectrum(factor)
slow = dense_spectrum(c.densify()).eigenvalues
print("block spectrum vs dense:", np.abs(fast - slow).max())

# Every eigenvalue of T_n sits inside the symbol range
eigs = dense_spectrum(t).eigenvalues
print(f"T_64 spectrum: [{eigs[0]:.4f}, {eigs[-1]:.4f}]")

# Preconditioned spectrum clusters at 1
for n in (64, 128, 256):
    rep = clustering_report(model, n, eps=0.1)
    print(f"n={n:4d}  outside (0.9, 1.1): {rep.outside_count:2d}  smallest: {rep.min_eig:.4f}")
