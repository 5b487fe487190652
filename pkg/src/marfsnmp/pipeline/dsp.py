"""Preprocessing and feature-extraction math over Sample amplitudes."""

from dataclasses import dataclass

import numpy as np

from marfsnmp.pipeline.errors import DegenerateSignal, InvalidParams

HAMMING = "hamming"
RECTANGULAR = "rectangular"

ALGORITHM_LPC = "lpc"
ALGORITHM_FFT = "fft"
ALGORITHM_MINMAX = "minmax"


@dataclass(frozen=True, slots=True)
class FeatureVector:
    algorithm: str
    params: tuple
    features: tuple

    def __len__(self):
        return len(self.features)

    @property
    def signature(self):
        """What compatibility is judged on: algorithm, params, length."""
        return (self.algorithm, self.params, len(self.features))


def _window_weights(length, kind):
    if kind == HAMMING:
        return np.hamming(length)
    if kind == RECTANGULAR:
        return np.ones(length)
    raise InvalidParams(f"unknown window kind {kind!r}")


def normalize(sample, start_index=0):
    """Scale so the largest magnitude becomes exactly 1.

    The peak is searched from start_index on, but the whole clip is
    scaled by the factor it yields.
    """
    n = len(sample)
    if n == 0:
        raise DegenerateSignal("cannot normalize an empty signal")
    if not 0 <= start_index < n:
        raise InvalidParams(f"start index {start_index} outside signal of length {n}")
    peak = float(np.max(np.abs(sample.amplitudes[start_index:])))
    if peak == 0.0:
        raise DegenerateSignal("signal is identically zero")
    return sample.with_amplitudes(sample.amplitudes / peak)


def remove_silence(sample, threshold):
    """Drop every sample with magnitude strictly below threshold."""
    if threshold < 0:
        raise InvalidParams(f"silence threshold must be >= 0, got {threshold}")
    keep = ~(np.abs(sample.amplitudes) < threshold)
    return sample.with_amplitudes(sample.amplitudes[keep])


def remove_noise(sample):
    """Window-3 moving average; the ends average what exists."""
    x = sample.amplitudes
    if len(x) <= 1:
        return sample.with_amplitudes(x.copy())
    if len(x) == 2:
        # below the kernel width "same" convolution changes the length;
        # both points just average each other
        return sample.with_amplitudes(np.full(2, (x[0] + x[1]) / 2.0))
    sums = np.convolve(x, np.ones(3), mode="same")
    counts = np.convolve(np.ones(len(x)), np.ones(3), mode="same")
    return sample.with_amplitudes(sums / counts)


def autocorrelation(x, max_lag):
    """Biased autocorrelation, lags 0..max_lag."""
    n = len(x)
    full = np.correlate(x, x, mode="full")
    return full[n - 1 : n + max_lag]


def levinson_durbin(r):
    """Solve the symmetric-Toeplitz normal equations by recursion.

    r holds autocorrelation lags 0..p; the result a (length p) predicts
    x[n] ~ sum_k a[k] x[n-k-1].
    """
    r = np.asarray(r, dtype=np.float64)
    p = len(r) - 1
    if r[0] == 0.0:
        raise DegenerateSignal("zero-energy window")
    a = np.zeros(p)
    error = r[0]
    for i in range(p):
        acc = r[i + 1] - np.dot(a[:i], r[i:0:-1])
        if error <= 0.0:
            raise DegenerateSignal("prediction error collapsed; unstable input")
        k = acc / error
        if i:
            # RHS evaluates before assignment; the reversed slice aliases a
            a[:i] = a[:i] - k * a[i - 1 :: -1]
        a[i] = k
        error *= 1.0 - k * k
    return a


def lpc_features(sample, poles, window_len, window=HAMMING):
    """Linear-prediction coefficients of the first window_len samples."""
    n = len(sample)
    if n == 0:
        # checked before the parameter gate: an empty signal is degenerate
        # no matter what parameters arrive with it
        raise DegenerateSignal("empty signal")
    if not 1 <= poles < window_len <= n:
        raise InvalidParams(
            f"need 1 <= poles < window <= signal length, got poles={poles} "
            f"window={window_len} length={n}"
        )
    x = sample.amplitudes[:window_len] * _window_weights(window_len, window)
    r = autocorrelation(x, poles)
    coefficients = levinson_durbin(r)
    if not np.all(np.isfinite(coefficients)):
        raise DegenerateSignal("prediction coefficients are not finite")
    return FeatureVector(ALGORITHM_LPC, (poles, window_len), tuple(coefficients))


def spectrum_magnitudes(x):
    """Full-length magnitude spectrum |X[k]|, k = 0..N-1."""
    return np.abs(np.fft.fft(np.asarray(x, dtype=np.float64)))


def fft_features(sample, window_len, window=HAMMING):
    """Magnitude spectrum (first half) of the first window."""
    n = len(sample)
    if n == 0:
        raise DegenerateSignal("empty signal")
    if window_len < 2 or window_len & (window_len - 1):
        raise InvalidParams(f"window length must be a power of two >= 2, got {window_len}")
    if window_len > n:
        raise InvalidParams(f"window length {window_len} exceeds signal length {n}")
    x = sample.amplitudes[:window_len] * _window_weights(window_len, window)
    magnitudes = spectrum_magnitudes(x)[: window_len // 2]
    return FeatureVector(ALGORITHM_FFT, (window_len,), tuple(magnitudes))


def minmax_features(sample):
    """The two-point envelope [min, max]."""
    if len(sample) == 0:
        raise DegenerateSignal("empty signal")
    x = sample.amplitudes
    return FeatureVector(ALGORITHM_MINMAX, (), (float(np.min(x)), float(np.max(x))))
