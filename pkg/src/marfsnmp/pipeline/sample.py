"""Audio samples and the WAV loader."""

import io
import wave
from dataclasses import dataclass, field, replace

import numpy as np

from marfsnmp.pipeline.errors import MalformedWav, UnsupportedFormat

FORMAT_WAV_PCM16_MONO = 1

_PCM16_SCALE = 1.0 / 32768.0


@dataclass(frozen=True, slots=True)
class Sample:
    """A loaded clip: real amplitudes in [-1, 1] plus its provenance."""

    format_code: int
    rate_hz: int
    amplitudes: np.ndarray = field(compare=False)

    def __len__(self):
        return len(self.amplitudes)

    def with_amplitudes(self, amplitudes):
        return replace(self, amplitudes=np.asarray(amplitudes, dtype=np.float64))


def load_sample(data, declared_format=FORMAT_WAV_PCM16_MONO):
    """Parse RIFF/WAVE PCM 16-bit mono bytes into amplitudes in [-1, 1]."""
    if declared_format != FORMAT_WAV_PCM16_MONO:
        raise UnsupportedFormat(declared_format)
    if not data:
        raise MalformedWav("empty input")
    try:
        with wave.open(io.BytesIO(data), "rb") as reader:
            channels = reader.getnchannels()
            width = reader.getsampwidth()
            compression = reader.getcomptype()
            rate = reader.getframerate()
            declared_frames = reader.getnframes()
            frames = reader.readframes(declared_frames)
    except (wave.Error, EOFError) as exc:
        raise MalformedWav(str(exc) or "truncated stream") from exc
    if compression != "NONE":
        raise UnsupportedFormat(declared_format, f"compression {compression}")
    if channels != 1:
        raise UnsupportedFormat(declared_format, f"{channels} channels")
    if width != 2:
        raise UnsupportedFormat(declared_format, f"{8 * width}-bit samples")
    if len(frames) < declared_frames * 2:
        raise MalformedWav("audio data shorter than declared frame count")
    if not frames:
        raise MalformedWav("no audio frames")
    pcm = np.frombuffer(frames, dtype="<i2")
    return Sample(
        format_code=declared_format,
        rate_hz=rate,
        amplitudes=pcm.astype(np.float64) * _PCM16_SCALE,
    )


def wav_bytes(amplitudes, rate_hz):
    """Render amplitudes in [-1, 1] as a PCM16 mono WAV blob."""
    pcm = np.clip(np.asarray(amplitudes, dtype=np.float64), -1.0, 1.0)
    ints = np.clip(np.rint(pcm / _PCM16_SCALE), -32768, 32767).astype("<i2")
    buffer = io.BytesIO()
    with wave.open(buffer, "wb") as writer:
        writer.setnchannels(1)
        writer.setsampwidth(2)
        writer.setframerate(rate_hz)
        writer.writeframes(ints.tobytes())
    return buffer.getvalue()
