"""Sample loading and stage math, proven against the independent oracles."""

import io
import struct
import wave

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from marfsnmp.pipeline.dsp import (
    HAMMING,
    RECTANGULAR,
    FeatureVector,
    autocorrelation,
    fft_features,
    levinson_durbin,
    lpc_features,
    minmax_features,
    normalize,
    remove_noise,
    remove_silence,
    spectrum_magnitudes,
)
from marfsnmp.pipeline.errors import (
    DegenerateSignal,
    InvalidParams,
    MalformedWav,
    UnsupportedFormat,
)
from marfsnmp.pipeline.sample import FORMAT_WAV_PCM16_MONO, Sample, load_sample, wav_bytes

from dsp_oracle import (
    ar2_signal,
    autocorrelation_oracle,
    brute_force_minmax,
    brute_force_moving_average,
    brute_force_silence_filter,
    naive_dft_magnitudes,
    random_stable_autocorrelation,
    toeplitz_solve_oracle,
)


def sample_of(values, rate=8000):
    return Sample(FORMAT_WAV_PCM16_MONO, rate, np.asarray(values, dtype=np.float64))


def hand_built_wav(pcm_values, channels=1, width=2, rate=8000):
    """WAV bytes assembled by hand, independent of the loader's wave usage."""
    body = b"".join(struct.pack("<h", v) for v in pcm_values)
    byte_rate = rate * channels * width
    block_align = channels * width
    fmt = struct.pack("<HHIIHH", 1, channels, rate, byte_rate, block_align, 8 * width)
    chunks = b"fmt " + struct.pack("<I", len(fmt)) + fmt
    chunks += b"data" + struct.pack("<I", len(body)) + body
    return b"RIFF" + struct.pack("<I", 4 + len(chunks)) + b"WAVE" + chunks


# -- load_sample ----------------------------------------------------------------


def test_load_scales_pcm16_linearly():
    wav = hand_built_wav([0, 16384, -32768, 32767])
    sample = load_sample(wav)
    assert sample.rate_hz == 8000
    assert sample.format_code == FORMAT_WAV_PCM16_MONO
    assert sample.amplitudes.tolist() == [0.0, 0.5, -1.0, 32767 / 32768]


def test_load_rejects_truncated_header():
    with pytest.raises(MalformedWav):
        load_sample(b"RIFF\x10\x00\x00\x00WAVEfm")


def test_load_rejects_empty_and_frameless():
    with pytest.raises(MalformedWav):
        load_sample(b"")
    with pytest.raises(MalformedWav):
        load_sample(hand_built_wav([]))


def test_load_rejects_stereo_and_other_depths():
    stereo = hand_built_wav([0, 0, 1, 1], channels=2)
    with pytest.raises(UnsupportedFormat):
        load_sample(stereo)

    buffer = io.BytesIO()
    with wave.open(buffer, "wb") as writer:
        writer.setnchannels(1)
        writer.setsampwidth(1)
        writer.setframerate(8000)
        writer.writeframes(b"\x00\x01\x02\x03")
    with pytest.raises(UnsupportedFormat):
        load_sample(buffer.getvalue())


def test_load_rejects_unknown_format_code():
    with pytest.raises(UnsupportedFormat) as info:
        load_sample(hand_built_wav([1, 2]), declared_format=7)
    assert info.value.code == 7


def test_load_rejects_short_audio_body():
    wav = hand_built_wav([1, 2, 3, 4])
    with pytest.raises(MalformedWav):
        load_sample(wav[:-3])


def test_sine_fixture_round_trips_through_wav():
    t = np.arange(8000) / 8000.0
    clip = 0.8 * np.sin(2 * np.pi * 440.0 * t)
    sample = load_sample(wav_bytes(clip, 8000))
    assert len(sample) == 8000
    assert np.max(np.abs(sample.amplitudes)) <= 1.0
    assert np.allclose(sample.amplitudes, clip, atol=1.0 / 32768)


# -- normalize -------------------------------------------------------------------


def test_normalize_scales_to_unit_peak():
    out = normalize(sample_of([0.0, 0.25, -0.5]))
    assert out.amplitudes.tolist() == [0.0, 0.5, -1.0]


def test_normalize_is_idempotent():
    once = normalize(sample_of([0.3, -0.9, 0.1]))
    twice = normalize(once)
    assert np.array_equal(once.amplitudes, twice.amplitudes)
    assert np.max(np.abs(once.amplitudes)) == 1.0


def test_normalize_degenerate_cases():
    with pytest.raises(DegenerateSignal):
        normalize(sample_of([0.0, 0.0, 0.0]))
    with pytest.raises(DegenerateSignal):
        normalize(sample_of([]))


def test_normalize_start_index_picks_peak_window():
    out = normalize(sample_of([0.8, 0.1, -0.2]), start_index=1)
    assert out.amplitudes.tolist() == [4.0, 0.5, -1.0]
    with pytest.raises(InvalidParams):
        normalize(sample_of([0.1]), start_index=5)


# -- remove_silence ----------------------------------------------------------------


def test_remove_silence_examples():
    out = remove_silence(sample_of([0.0, 0.5, 0.01, -0.3]), 0.1)
    assert out.amplitudes.tolist() == [0.5, -0.3]
    unchanged = remove_silence(sample_of([0.0, -0.2]), 0.0)
    assert unchanged.amplitudes.tolist() == [0.0, -0.2]
    with pytest.raises(InvalidParams):
        remove_silence(sample_of([0.1]), -0.01)


@settings(max_examples=50, deadline=None)
@given(
    st.lists(st.floats(-1, 1, allow_nan=False), max_size=80),
    st.floats(0, 1, allow_nan=False),
)
def test_remove_silence_matches_brute_force(values, threshold):
    out = remove_silence(sample_of(values), threshold)
    assert out.amplitudes.tolist() == brute_force_silence_filter(values, threshold)


# -- remove_noise -------------------------------------------------------------------


def test_remove_noise_examples():
    const = remove_noise(sample_of([0.4] * 6))
    assert np.allclose(const.amplitudes, 0.4)
    alternating = remove_noise(sample_of([1.0, -1.0, 1.0, -1.0]))
    assert np.allclose(alternating.amplitudes, [0.0, 1 / 3, -1 / 3, 0.0])
    single = remove_noise(sample_of([0.7]))
    assert single.amplitudes.tolist() == [0.7]
    assert remove_noise(sample_of([])).amplitudes.tolist() == []


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-1, 1, allow_nan=False), min_size=2, max_size=60))
def test_remove_noise_matches_brute_force(values):
    out = remove_noise(sample_of(values))
    assert np.allclose(out.amplitudes, brute_force_moving_average(values), atol=1e-12)
    assert len(out) == len(values)


# -- LPC ------------------------------------------------------------------------


def test_autocorrelation_matches_plain_loops():
    rng = np.random.default_rng(7)
    x = rng.uniform(-1, 1, 64)
    ours = autocorrelation(x, 8)
    oracle = autocorrelation_oracle(x.tolist(), 8)
    assert np.allclose(ours, oracle, atol=1e-12)


def test_lpc_recovers_ar2_coefficients():
    rng = np.random.default_rng(20260819)
    x = ar2_signal(rng, 4096, 0.75, -0.5)
    fv = lpc_features(sample_of(x), 2, 4096, window=RECTANGULAR)
    a1, a2 = fv.features
    assert abs(a1 - 0.75) / 0.75 < 0.05
    assert abs(a2 + 0.5) / 0.5 < 0.05
    # and the oracle route lands on the same numbers
    oracle = toeplitz_solve_oracle(autocorrelation_oracle(x.tolist(), 2))
    assert np.allclose(fv.features, oracle, atol=1e-9)


def test_levinson_agrees_with_dense_solve_on_random_stable_cases():
    rng = np.random.default_rng(424242)
    for _ in range(100):
        p = int(rng.integers(1, 13))
        r = random_stable_autocorrelation(rng, p)
        ours = levinson_durbin(r)
        oracle = toeplitz_solve_oracle(r)
        assert np.allclose(ours, oracle, atol=1e-9)


def test_lpc_parameter_and_degeneracy_gates():
    with pytest.raises(DegenerateSignal):
        lpc_features(sample_of(np.zeros(512)), 8, 256)
    with pytest.raises(DegenerateSignal):
        lpc_features(sample_of([]), 8, 256)  # empty beats parameter checks
    with pytest.raises(InvalidParams):
        lpc_features(sample_of(np.ones(512)), 256, 256)
    with pytest.raises(InvalidParams):
        lpc_features(sample_of(np.ones(100)), 8, 256)
    with pytest.raises(InvalidParams):
        lpc_features(sample_of(np.ones(512)), 0, 256)


def test_lpc_window_kinds_differ():
    rng = np.random.default_rng(11)
    x = rng.standard_normal(512)
    hamming = lpc_features(sample_of(x), 4, 256, window=HAMMING)
    rect = lpc_features(sample_of(x), 4, 256, window=RECTANGULAR)
    assert hamming.features != rect.features
    with pytest.raises(InvalidParams):
        lpc_features(sample_of(x), 4, 256, window="kaiser")


# -- FFT ------------------------------------------------------------------------


def test_fft_magnitudes_match_naive_dft():
    rng = np.random.default_rng(99)
    for n in (64, 256):
        x = rng.uniform(-1, 1, n)
        ours = spectrum_magnitudes(x)
        oracle = naive_dft_magnitudes(x.tolist())
        scale = np.max(np.abs(oracle))
        assert np.max(np.abs(ours - oracle)) / scale < 1e-9


def test_fft_cosine_peaks_at_its_bin():
    n = 64
    t = np.arange(n)
    x = np.cos(2 * np.pi * 4 * t / n)
    fv = fft_features(sample_of(x), n, window=RECTANGULAR)
    assert int(np.argmax(fv.features)) == 4
    assert len(fv) == n // 2


def test_fft_zero_signal_gives_zero_vector():
    fv = fft_features(sample_of(np.zeros(128)), 64)
    assert all(v == 0.0 for v in fv.features)


def test_fft_parameter_gates():
    x = sample_of(np.ones(100))
    with pytest.raises(InvalidParams):
        fft_features(x, 48)  # not a power of two
    with pytest.raises(InvalidParams):
        fft_features(x, 128)  # longer than the signal
    with pytest.raises(InvalidParams):
        fft_features(x, 1)
    with pytest.raises(DegenerateSignal):
        fft_features(sample_of([]), 64)


def test_parseval_identity_against_fft():
    rng = np.random.default_rng(5)
    for n in (64, 256):
        x = rng.uniform(-1, 1, n)
        time_energy = float(np.sum(x * x))
        freq_energy = float(np.sum(spectrum_magnitudes(x) ** 2)) / n
        assert abs(time_energy - freq_energy) / time_energy < 1e-9


# -- MinMax -----------------------------------------------------------------------


def test_minmax_examples():
    assert minmax_features(sample_of([0, 0.5, -1])).features == (-1.0, 0.5)
    assert minmax_features(sample_of([0.25] * 4)).features == (0.25, 0.25)
    with pytest.raises(DegenerateSignal):
        minmax_features(sample_of([]))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-1, 1, allow_nan=False), min_size=1, max_size=60))
def test_minmax_matches_linear_scan(values):
    fv = minmax_features(sample_of(values))
    assert list(fv.features) == brute_force_minmax(values)
    assert fv.algorithm == "minmax"


# -- determinism ---------------------------------------------------------------------


def test_feature_extraction_is_bit_deterministic():
    rng = np.random.default_rng(123)
    x = rng.standard_normal(1024)
    first = lpc_features(sample_of(x), 8, 256)
    second = lpc_features(sample_of(x.copy()), 8, 256)
    assert first == second  # tuples compare exactly, no tolerance
    assert isinstance(first, FeatureVector)
