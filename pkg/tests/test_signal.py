import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qtoeplitz.adjoint import adjoint_matrix
from qtoeplitz.quat import is_hermitian, qconj
from qtoeplitz.signal import (
    ProcessSpec, covariance, estimate_correlation, estimate_correlation_direct, load_samples, prediction_system,
    sample_count, save_samples, synthesize,
)

from conftest import AR_BETA, MA_BETA

HALF = (0.5, 0.0, 0.0, 0.0)


def test_ar1_covariance_value():
    assert covariance(ProcessSpec("ar1", HALF), 0)[0] == pytest.approx(16 / 3)


def test_ma1_covariance_vanishes_beyond_lag_one():
    spec = ProcessSpec("ma1", MA_BETA)
    assert np.array_equal(covariance(spec, 3), np.zeros(4))
    assert np.allclose(covariance(spec, 1), 4 * MA_BETA)


@pytest.mark.parametrize("kind", ["ar1", "ma1"])
def test_lag_zero_real(kind):
    assert np.all(covariance(ProcessSpec(kind, AR_BETA), 0)[1:] == 0)


def test_ar1_requires_stable_beta():
    with pytest.raises(ValueError):
        ProcessSpec("ar1", (0.9, 0.9, 0.5, 1.3))
    ProcessSpec("ma1", (0.9, 0.9, 0.5, 1.3))


def test_spec_validation():
    with pytest.raises(ValueError):
        ProcessSpec("arma", HALF)
    with pytest.raises(ValueError):
        ProcessSpec("ma1", HALF, delta=-1)
    with pytest.raises(ValueError):
        covariance(ProcessSpec("ma1", HALF), -1)


def test_prediction_system_examples():
    t, w = prediction_system(ProcessSpec("ar1", HALF), 2)
    assert np.allclose(t.col[:, 0], [16 / 3, 8 / 3]) and np.allclose(w[:, 0], [8 / 3, 4 / 3])
    t, w = prediction_system(ProcessSpec("ma1", HALF, delta=1.5), 4)
    assert np.allclose(w[:, 0], [4 * 1.5**2 * 0.5, 0, 0, 0]) and not w[:, 1:].any()
    t, w = prediction_system(ProcessSpec("ma1", MA_BETA), 5)
    assert is_hermitian(t.densify())
    assert np.allclose(w[0], qconj(4 * MA_BETA))


def test_zero_noise_path():
    assert not synthesize(ProcessSpec("ar1", AR_BETA, delta=0.0), 50).any()


def test_synthesis_deterministic():
    spec = ProcessSpec("ar1", AR_BETA, seed=11)
    assert np.array_equal(synthesize(spec, 100), synthesize(spec, 100))
    assert not np.array_equal(synthesize(spec, 100), synthesize(ProcessSpec("ar1", AR_BETA, seed=12), 100))


def test_ar1_recursion_matches_quaternion_update():
    # The unrolled scalar loop must agree with the vectorised product.
    from qtoeplitz.quat import qmul

    spec = ProcessSpec("ar1", AR_BETA, seed=3)
    x = synthesize(spec, 200)
    resid = x[1:] - qmul(np.array(AR_BETA), x[:-1])
    assert np.std(resid) == pytest.approx(1.0, abs=0.1)
    assert abs(np.mean(resid)) < 0.1


@pytest.mark.parametrize("kind, beta", [("ma1", MA_BETA), ("ar1", AR_BETA)])
def test_monte_carlo_covariances(kind, beta):
    spec = ProcessSpec(kind, beta, seed=5)
    est = estimate_correlation(synthesize(spec, 10**6), 5)
    exact = covariance(spec, np.arange(5))
    scale = exact[0, 0]
    assert abs(est.eta_hat[0, 0] - scale) <= 0.05 * scale
    assert np.max(np.abs(est.eta_hat[:5] - exact)) <= 0.05 * scale


def test_constant_signal():
    m, n = 10, 4
    est = estimate_correlation(np.tile([1.0, 0, 0, 0], (m, 1)), n)
    assert np.allclose(est.eta_hat[:, 0], (m - np.arange(n + 1)) / m)
    assert np.allclose(est.eta_hat[:, 1:], 0)


def test_single_sample():
    x = np.array([[1.0, 2.0, -1.0, 0.5]])
    est = estimate_correlation(x, 0)
    assert est.eta_hat[0, 0] == pytest.approx(np.sum(x**2))
    assert est.col.shape == (0, 4)


def test_requires_more_samples_than_order():
    with pytest.raises(ValueError):
        estimate_correlation(np.ones((4, 4)), 4)


@settings(max_examples=30)
@given(st.integers(2, 60), st.integers(0, 2**32 - 1))
def test_fft_estimate_matches_direct_sums(m, seed):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((m, 4))
    n = int(rng.integers(0, m))
    fast = estimate_correlation(x, n)
    slow = estimate_correlation_direct(x, n)
    assert np.allclose(fast.eta_hat, slow.eta_hat, atol=1e-12 * max(1, slow.eta_hat[0, 0]))
    assert fast.imag_residue < 1e-12 * max(1, slow.eta_hat[0, 0])
    assert np.allclose(slow.eta_hat[0, 1:], 0, atol=1e-13 * slow.eta_hat[0, 0])


def test_estimate_consistency_improves_with_samples():
    spec = ProcessSpec("ar1", AR_BETA, seed=9)
    n = 16
    exact = covariance(spec, np.arange(n + 1))
    errs = []
    for m in (16, 256, 4096):
        paths = [synthesize(spec, m * n, np.random.default_rng([9, m, r])) for r in range(8)]
        errs.append(np.mean([np.abs(estimate_correlation(p, n).eta_hat - exact).max() for p in paths]))
    assert errs[0] > errs[1] > errs[2]


def sample_matrix(x, n):
    # Rows (conj x_{M-k+j}) of the windowed data matrix, zero outside the record.
    m = x.shape[0]
    t = np.zeros((m + n - 1, n, 4))
    for k in range(m + n - 1):
        for j in range(n):
            idx = m - 1 - k + j
            if 0 <= idx < m:
                t[k, j] = qconj(x[idx])
    return t


@pytest.mark.parametrize("n", [1, 4, 16, 64])
def test_estimated_matrix_is_gram_and_hpd(n, rng):
    from qtoeplitz.quat import conj_transpose, matmul_dense

    x = rng.standard_normal((n + 20, 4))
    est = estimate_correlation(x, n)
    h = est.operator().densify()
    t = sample_matrix(x, n)
    gram = matmul_dense(conj_transpose(t), t) / x.shape[0]
    assert np.allclose(h, gram, atol=1e-12)
    assert np.linalg.eigvalsh(adjoint_matrix(h)).min() > 0
    assert np.allclose(est.rhs, qconj(est.eta_hat[1:]))


def test_sample_count():
    assert sample_count(512, 4) == 2049


@pytest.mark.parametrize("suffix", [".csv", ".bin"])
def test_sample_io_round_trip(tmp_path, rng, suffix):
    x = rng.standard_normal((7, 4))
    path = tmp_path / f"path{suffix}"
    save_samples(path, x)
    assert np.array_equal(load_samples(path), x)


def test_binary_layout(tmp_path):
    x = np.arange(8.0).reshape(2, 4)
    path = tmp_path / "s.bin"
    save_samples(path, x)
    raw = path.read_bytes()
    assert len(raw) == 64 and np.array_equal(np.frombuffer(raw, "<f8"), np.arange(8.0))


def test_bad_binary_length(tmp_path):
    path = tmp_path / "bad.bin"
    np.arange(5.0).astype("<f8").tofile(path)
    with pytest.raises(ValueError):
        load_samples(path)
