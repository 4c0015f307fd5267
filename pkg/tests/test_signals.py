import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reference_values import APRIORI_UPPER_DET, APRIORI_UPPER_RAND
from specfilt.basis import BasisSpec, project_quadrature
from specfilt.modeling import NoiseSpec
from specfilt.signals import (
    SpectralVec,
    combine,
    spectral_cos,
    spectral_sin,
    spectral_white_noise,
    white_noise_batch,
)

PI = math.pi


def test_sine_resonant_index_is_zero():
    F = spectral_sin(10 * PI, 1.0, 32).coeffs
    assert F[10] == 0.0
    assert F[0] == pytest.approx(0.0, abs=1e-16)


def test_sine_energy():
    F = spectral_sin(10 * PI, 1.0, 1024)
    assert abs(F.norm() ** 2 - 0.5) < 1e-3


def test_cosine_resonant_index():
    F = spectral_cos(95 * PI, 1.0, 128).coeffs
    assert F[95] == pytest.approx(math.sqrt(0.5), abs=1e-15)
    assert F[0] == pytest.approx(0.0, abs=1e-16)


def test_cosine_nonresonant_zero():
    assert spectral_cos(2 * PI, 1.0, 4).coeffs[1] == pytest.approx(0.0, abs=1e-15)


def test_resonance_with_general_T():
    T = 2.5
    F = spectral_cos(4 * PI / T, T, 8).coeffs
    assert F[4] == pytest.approx(math.sqrt(T / 2), abs=1e-14)
    assert spectral_sin(4 * PI / T, T, 8).coeffs[4] == 0.0


@pytest.mark.parametrize("fn", [spectral_sin, spectral_cos])
@pytest.mark.parametrize("k", [10, 78, 95, 112])
def test_closed_forms_match_quadrature(fn, k):
    omega = k * PI
    spec = BasisSpec(1.0, 1024)
    f = (lambda t: np.sin(omega * t)) if fn is spectral_sin else (lambda t: np.cos(omega * t))
    F = project_quadrature(spec, f, omega_max=omega)
    assert np.abs(F - fn(omega, 1.0, 1024).coeffs).max() < 1e-9


@pytest.mark.parametrize("fn", [spectral_sin, spectral_cos])
def test_invalid_frequency(fn):
    with pytest.raises(ValueError):
        fn(0.0, 1.0, 8)


def test_white_noise_zero_intensity():
    assert np.array_equal(spectral_white_noise(0.0, 64, seed=1).coeffs, np.zeros(64))


def test_white_noise_reproducible_and_prefix_stable():
    a = spectral_white_noise(0.01, 256, seed=7, index=3).coeffs
    b = spectral_white_noise(0.01, 256, seed=7, index=3).coeffs
    c = spectral_white_noise(0.01, 128, seed=7, index=3).coeffs
    assert np.array_equal(a, b)
    assert np.array_equal(a[:128], c)
    assert not np.array_equal(a, spectral_white_noise(0.01, 256, seed=7, index=4).coeffs)


def test_batch_matches_single_streams():
    Q = white_noise_batch(32, seed=5, count=4, start=10)
    for k in range(4):
        np.testing.assert_array_equal(Q[:, k], spectral_white_noise(1.0, 32, 5, 10 + k).coeffs)


def test_white_noise_negative_sigma():
    with pytest.raises(ValueError):
        spectral_white_noise(-1.0, 4, 0)


@pytest.mark.parametrize("L", [128, 512])
def test_white_noise_norm_mean(L):
    M = 10_000
    Q = white_noise_batch(L, seed=20250101, count=M)
    norms = 0.01 * np.linalg.norm(Q, axis=0)
    mean, std = APRIORI_UPPER_RAND[L]
    assert abs(norms.mean() - mean) < 3 * std / math.sqrt(M)


def test_combine_identity_weights():
    U = spectral_sin(10 * PI, 1.0, 16)
    V = spectral_cos(3 * PI, 1.0, 16)
    assert np.array_equal(combine([(1.0, U), (0.0, V)]).coeffs, U.coeffs)


@pytest.mark.parametrize("L", [128, 256, 512, 1024])
def test_deterministic_noise_norm(L):
    assert NoiseSpec().spectral(1.0, L).norm() == pytest.approx(APRIORI_UPPER_DET[L], abs=5e-7)


def test_combine_mismatch():
    with pytest.raises(ValueError):
        combine([(1.0, spectral_sin(PI, 1.0, 8)), (1.0, spectral_sin(PI, 1.0, 9))])
    with pytest.raises(ValueError):
        combine([(1.0, spectral_sin(PI, 1.0, 8)), (1.0, spectral_sin(PI, 2.0, 8))])
    with pytest.raises(ValueError):
        combine([])


def test_spectral_vec_validation():
    with pytest.raises(ValueError):
        SpectralVec(np.array([1.0, np.inf]))
    with pytest.raises(ValueError):
        SpectralVec(np.zeros(0))
    v = SpectralVec([1.0, 2.0])
    with pytest.raises(ValueError):
        v.coeffs[0] = 3.0


@settings(max_examples=40, deadline=None)
@given(k=st.integers(1, 60), T=st.sampled_from([0.5, 1.0, 2.5]))
def test_sine_and_cosine_energy_balance(k, T):
    # sin^2 + cos^2 = 1 integrates to T; resonant frequencies are band-limited
    omega = k * PI / T
    L = k + 1
    s = spectral_sin(omega, T, 4096).coeffs
    c = spectral_cos(omega, T, L).coeffs
    assert c @ c == pytest.approx(T / 2, rel=1e-12)
    assert s @ s + c @ c == pytest.approx(T, rel=2e-3)
