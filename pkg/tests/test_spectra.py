import json

import numpy as np
import pytest

from qtoeplitz.circulant import block_diagonalize, spectrum, strang
from qtoeplitz.spectra import (
    PairingError, SpectrumReport, _collapse_pairs, clustering_report, dense_spectrum, szego_moment_check,
)
from qtoeplitz.symbols import ar1_model, constant_model, grid_extrema, ma1_model
from qtoeplitz.toeplitz import HermitianToeplitz

from conftest import AR_BETA, MA_BETA

HALF = np.array([0.5, 0.0, 0.0, 0.0])
MODELS = [ar1_model(AR_BETA), ma1_model(MA_BETA)]


def test_diagonal_matrix():
    a = np.zeros((3, 3, 4))
    a[np.arange(3), np.arange(3), 0] = [3, 1, 2]
    assert np.allclose(dense_spectrum(a).eigenvalues, [1, 2, 3])


def test_off_diagonal_q():
    a = np.zeros((2, 2, 4))
    a[0, 1, 2], a[1, 0, 2] = 1.0, -1.0
    assert np.allclose(dense_spectrum(a).eigenvalues, [-1, 1])


def test_ma1_spectrum_inside_symbol_range():
    vals = dense_spectrum(HermitianToeplitz.from_symbol(ma1_model(HALF), 8)).eigenvalues
    assert vals.shape == (8,)
    assert vals.min() >= 1.0 and vals.max() <= 9.0


def test_rejects_non_hermitian(rng):
    with pytest.raises(ValueError):
        dense_spectrum(rng.standard_normal((3, 3, 4)))


def test_cap():
    with pytest.raises(ValueError):
        dense_spectrum(np.zeros((5, 5, 4)), cap=4)


def test_pairing_violation():
    with pytest.raises(PairingError):
        _collapse_pairs(np.array([1.0, 1.0, 2.0, 2.5]))


def test_report_serialisation(tmp_path):
    rep = SpectrumReport(np.array([1.0, 2.5]), {"model": "x"})
    rep.to_csv(tmp_path / "s.csv")
    assert (tmp_path / "s.csv").read_text().splitlines() == ["eigenvalue", "1", "2.5"]
    data = json.loads(rep.to_json(tmp_path / "s.json"))
    assert data == {"model": "x", "n": 2, "eigenvalues": [1.0, 2.5]}


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.name)
@pytest.mark.parametrize("n", [8, 16, 32, 64])
def test_eigenvalues_strictly_inside_symbol_range(model, n):
    lo, hi = grid_extrema(model)
    vals = dense_spectrum(HermitianToeplitz.from_symbol(model, n)).eigenvalues
    assert lo < vals[0] and vals[-1] < hi


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.name)
@pytest.mark.parametrize("n", [4, 17, 64, 128])
def test_strang_dense_vs_block_spectrum(model, n):
    c = strang(HermitianToeplitz.from_symbol(model, n))
    dense = dense_spectrum(c.densify()).eigenvalues
    assert np.allclose(dense, spectrum(block_diagonalize(c)), atol=1e-9)


def test_szego_constant_function():
    lhs, rhs, gap = szego_moment_check(ma1_model(HALF), 16, lambda x: np.ones_like(x))
    assert lhs == 1.0 and rhs == 1.0 and gap == 0.0


def test_szego_first_moment_is_diagonal():
    lhs, rhs, _ = szego_moment_check(ma1_model(HALF), 32, lambda x: x)
    assert lhs == pytest.approx(5.0, abs=1e-12) and rhs == pytest.approx(5.0, abs=1e-12)


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.name)
def test_second_moment_matches_frobenius_norm(model):
    # (1/n) sum lambda^2 = ||T||_F^2 / n, computed from the column alone.
    n = 64
    col = HermitianToeplitz.from_symbol(model, n).col
    frob = n * col[0, 0] ** 2 + 2 * np.sum((n - np.arange(1, n)) * np.sum(col[1:] ** 2, axis=1))
    lhs, _, _ = szego_moment_check(model, n, lambda x: x**2)
    assert lhs == pytest.approx(frob / n, rel=1e-12)


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.name)
def test_second_moment_gap_decreases(model):
    gaps = [szego_moment_check(model, n, lambda x: x**2)[2] for n in (64, 256, 1024)]
    assert gaps[0] > gaps[1] > gaps[2] and gaps[2] < 0.05


def test_clustering_identity():
    rep = clustering_report(constant_model(1.0), 16, 0.1)
    assert rep.outside_count == 0 and np.allclose(rep.eigenvalues, 1.0)


def test_clustering_ma1_stable_count():
    counts = [clustering_report(ma1_model(HALF), n, 0.1).outside_count for n in (64, 128, 256)]
    assert counts[2] <= counts[1] <= counts[0]


@pytest.mark.parametrize("model", MODELS + [ma1_model(HALF)], ids=lambda m: m.name)
@pytest.mark.parametrize("n", [32, 128, 256])
def test_preconditioned_lower_bound(model, n):
    lo, hi = grid_extrema(model)
    assert clustering_report(model, n, 0.1).min_eig >= 2 * lo / (3 * hi)


def test_clustering_rejects_indefinite_preconditioner():
    col = np.zeros((4, 4))
    col[:2, 0] = [1.0, 2.0]
    with pytest.raises(ValueError):
        clustering_report(None, 4, 0.1, t=HermitianToeplitz(col))
