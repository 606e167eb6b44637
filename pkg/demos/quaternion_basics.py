"""Quaternion arithmetic on plain numpy arrays and the complex adjoint.

A quaternion is a float64 array whose last axis holds (a0, a1, a2, a3) for
a0 + a1 p + a2 q + a3 r. Run with ``python demos/quaternion_basics.py``.
"""
import numpy as np

from qtoeplitz.adjoint import adjoint_matrix, adjoint_vector, split
from qtoeplitz.quat import Quaternion, hermitian_matvec_dense, matmul_dense, qconj, qmul, random_hermitian

p = np.array([0.0, 1, 0, 0])
q = np.array([0.0, 0, 1, 0])
print("p q =", qmul(p, q))  # r
print("q p =", qmul(q, p))  # -r, multiplication does not commute

one_p = np.array([1.0, 1, 0, 0])
one_q = np.array([1.0, 0, 1, 0])
print("conj((1+p)(1+q)) =", qconj(qmul(one_p, one_q)))

# The small wrapper class is handy at the prompt
x = Quaternion(1, 2, -1, 0.5)
print(x, "* inverse =", x * x.inverse())

# Broadcasting works like any other ufunc-ish operation
rng = np.random.default_rng(1)
batch = rng.standard_normal((5, 4))
print("batched norms of x conj(x):", qmul(batch, qconj(batch))[:, 0])

# X = X1 + X2 q with complex X1, X2
a = random_hermitian(rng, 3)
parts = split(a)
print("complex parts shapes:", parts.part1.shape, parts.part2.shape)

# The adjoint turns quaternion products into complex products
b = rng.standard_normal((3, 3, 4))
lhs = adjoint_matrix(matmul_dense(a, b))
rhs = adjoint_matrix(a) @ adjoint_matrix(b)
print("adjoint homomorphism error:", np.abs(lhs - rhs).max())

v = rng.standard_normal((3, 4))
print("matvec through adjoint:",
      np.abs(adjoint_vector(hermitian_matvec_dense(a, v)) - adjoint_matrix(a) @ adjoint_vector(v)).max())

# Hermitian quaternion matrices have real eigenvalues, each doubled in the adjoint
print("adjoint eigenvalues:", np.round(np.linalg.eigvalsh(adjoint_matrix(a)), 6))
