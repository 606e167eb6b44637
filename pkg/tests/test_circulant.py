import numpy as np
import pytest
from hypothesis import given, strategies as st

from qtoeplitz.adjoint import adjoint_matrix
from qtoeplitz.circulant import (
    Circulant, SingularBlockError, block_diagonalize, partner_index, solve_apply, spectrum,
    strang, strang_column,
)
from qtoeplitz.quat import hermitian_matvec_dense, qconj
from qtoeplitz.symbols import ar1_model, g_block, ma1_model
from qtoeplitz.toeplitz import HermitianToeplitz

from conftest import AR_BETA, MA_BETA

MODELS = [ar1_model(AR_BETA), ma1_model(MA_BETA)]


def hermitian_circulant_column(rng, n, shift=0.0):
    col = rng.standard_normal((n, 4))
    col = 0.5 * (col + qconj(col[partner_index(n)]))
    col[0, 0] += shift
    return col


def dense_solve(c, r):
    z = np.linalg.solve(adjoint_matrix(c.densify()), np.concatenate([r[:, 0] + 1j * r[:, 1], r[:, 2] - 1j * r[:, 3]]))
    n = r.shape[0]
    return np.stack([z[:n].real, z[:n].imag, z[n:].real, -z[n:].imag], axis=-1)


def test_rows_rotate_right(rng):
    c = Circulant(rng.standard_normal((5, 4)))
    d = c.densify()
    for s in range(1, 5):
        assert np.array_equal(d[s], np.roll(d[s - 1], 1, axis=0))


def test_strang_examples(rng):
    t5 = rng.standard_normal((5, 4))
    t5[0, 1:] = 0
    expected = np.stack([t5[0], t5[1], t5[2], qconj(t5[2]), qconj(t5[1])])
    assert np.array_equal(strang_column(t5), expected)
    t4 = t5[:4]
    assert np.array_equal(strang_column(t4), np.stack([t4[0], t4[1], np.zeros(4), qconj(t4[1])]))


def test_strang_of_odd_circulant_is_itself(rng):
    col = hermitian_circulant_column(rng, 7)
    col[0, 1:] = 0
    assert np.allclose(strang(HermitianToeplitz(col)).col, col)


@given(st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_strang_is_hermitian(n, seed):
    rng = np.random.default_rng(seed)
    col = rng.standard_normal((n, 4))
    col[0, 1:] = 0
    assert strang(HermitianToeplitz(col)).is_hermitian()


@pytest.mark.parametrize("n", [2, 3, 4, 8])
def test_partner_index_regression(n, rng):
    # Frozen convention: numpy forward DFT, block k couples k and (-k) mod n.
    assert np.array_equal(partner_index(n), [(-k) % n for k in range(n)])
    c = Circulant(rng.standard_normal((n, 4)))
    f = block_diagonalize(c)
    assert np.allclose(f.to_dense(), c.densify(), atol=1e-12)
    x = rng.standard_normal((n, 4))
    assert np.allclose(f.matvec(x), hermitian_matvec_dense(c.densify(), x), atol=1e-12)
    h = f.blocks
    if n > 2:
        # Pairing each block with itself instead of its partner breaks the identity.
        h_self = h.copy()
        h_self[:, 1, 0] = f.d2.conj()
        h_self[:, 1, 1] = f.d1.conj()
        assert not np.allclose(h_self, h)


def test_identity_blocks():
    col = np.zeros((6, 4))
    col[0, 0] = 1
    h = block_diagonalize(Circulant(col)).blocks
    assert np.allclose(h, np.eye(2))


def test_real_circulant_blocks_are_classical(rng):
    col = np.zeros((6, 4))
    col[:, 0] = rng.standard_normal(6)
    h = block_diagonalize(Circulant(col)).blocks
    lam = np.fft.fft(col[:, 0])
    assert np.allclose(h[:, 0, 1], 0) and np.allclose(h[:, 1, 0], 0)
    assert np.allclose(h[:, 0, 0], lam) and np.allclose(h[:, 1, 1], lam[partner_index(6)].conj())


@pytest.mark.parametrize("n", [5, 8, 16])
def test_reconstruction_matches_densify(n, rng):
    c = Circulant(rng.standard_normal((n, 4)))
    assert np.allclose(block_diagonalize(c).to_dense(), c.densify(), atol=1e-11)


def test_reconstruction_n512(rng):
    c = Circulant(rng.standard_normal((512, 4)))
    f = block_diagonalize(c)
    for j in rng.choice(512, 8, replace=False):
        e = np.zeros((512, 4))
        e[j, 0] = 1
        assert np.allclose(f.matvec(e), c.densify()[:, j], atol=1e-11)


def test_hermitian_spectrum_matches_dense(rng):
    c = Circulant(hermitian_circulant_column(rng, 8))
    vals = np.linalg.eigvalsh(adjoint_matrix(c.densify()))[::2]
    assert np.allclose(spectrum(block_diagonalize(c)), vals, atol=1e-10)


def test_conjugate_frequency_symmetry(rng):
    n = 9
    h = block_diagonalize(Circulant(hermitian_circulant_column(rng, n))).blocks
    ev = np.linalg.eigvalsh(h)
    assert np.allclose(ev, ev[partner_index(n)], atol=1e-12)


def test_non_hermitian_spectrum_rejected(rng):
    with pytest.raises(ValueError):
        spectrum(block_diagonalize(Circulant(rng.standard_normal((6, 4)))))


def test_identity_spectrum():
    col = np.zeros((7, 4))
    col[0, 0] = 1
    assert np.allclose(block_diagonalize(Circulant(col)).spectrum(), np.ones(7))


def test_solve_scaled_identity(rng):
    col = np.zeros((5, 4))
    col[0, 0] = 2
    r = rng.standard_normal((5, 4))
    assert np.allclose(solve_apply(block_diagonalize(Circulant(col)), r), r / 2, atol=1e-15)


@pytest.mark.parametrize("n", [4, 17, 64, 256])
def test_solve_matches_dense(n, rng):
    c = Circulant(hermitian_circulant_column(rng, n, shift=3.0 * np.sqrt(n)))
    r = rng.standard_normal((n, 4))
    got = block_diagonalize(c).solve(r)
    ref = dense_solve(c, r)
    assert np.max(np.abs(got - ref)) <= 1e-10 * max(1, np.abs(ref).max())


@given(st.integers(1, 512), st.integers(0, 2**32 - 1))
def test_solve_inverts_matvec(n, seed):
    rng = np.random.default_rng(seed)
    c = Circulant(hermitian_circulant_column(rng, n, shift=4.0 * np.sqrt(n)))
    f = block_diagonalize(c)
    x = rng.standard_normal((n, 4))
    assert np.max(np.abs(f.solve(f.matvec(x)) - x)) <= 1e-9


def test_singular_block_names_frequency():
    n = 6
    col = np.zeros((n, 4))
    col[:, 0] = 1.0  # all-ones: only frequency 0 is non-zero
    with pytest.raises(SingularBlockError) as err:
        block_diagonalize(Circulant(col)).solve(np.ones((n, 4)))
    assert err.value.frequency == 1
    assert err.value.abs_det <= 1e-12


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.name)
@pytest.mark.parametrize("n", [8, 9, 16, 33])
def test_blocks_are_partial_sum_symbol(model, n):
    t = HermitianToeplitz.from_symbol(model, n)
    h = block_diagonalize(strang(t)).blocks
    x = 2 * np.pi * np.arange(n) / n
    g = g_block(model, -x, (n - 1) // 2)
    assert np.max(np.abs(h - g)) < 1e-12 * np.abs(g).max()


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.name)
@pytest.mark.parametrize("n", [8, 9, 16, 33, 64])
def test_strang_spectrum_is_symbol_union(model, n):
    t = HermitianToeplitz.from_symbol(model, n)
    vals = spectrum(block_diagonalize(strang(t)))
    g = g_block(model, 2 * np.pi * np.arange(n) / n, (n - 1) // 2)
    union = np.sort(np.linalg.eigvalsh(g).ravel())[::2]
    assert np.allclose(vals, union, atol=1e-12 * vals.max())


def test_strang_partial_sum_order_for_even_n():
    # The order floor(n/2) does not reproduce the Strang spectrum for even n.
    model = ar1_model(AR_BETA)
    n = 8
    vals = spectrum(block_diagonalize(strang(HermitianToeplitz.from_symbol(model, n))))
    g = g_block(model, 2 * np.pi * np.arange(n) / n, n // 2)
    union = np.sort(np.linalg.eigvalsh(g).ravel())[::2]
    assert np.max(np.abs(vals - union)) > 1e-3


def test_extreme_eigenvalues_approach_symbol_bounds():
    from qtoeplitz.symbols import grid_extrema

    model = ar1_model(AR_BETA)
    lo, hi = grid_extrema(model)
    gaps = []
    for k in range(6, 13):
        vals = spectrum(block_diagonalize(strang(HermitianToeplitz.from_symbol(model, 2**k))))
        gaps.append(max(vals[0] - lo, hi - vals[-1]))
    assert gaps[-1] < 1e-4 * hi
    assert all(b <= a + 1e-9 for a, b in zip(gaps, gaps[1:]))
