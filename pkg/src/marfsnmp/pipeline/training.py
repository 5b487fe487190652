"""Per-subject feature stores, classification, and the on-disk format.

File layout (versioned, all integers little-endian):

    offset  size  field
    0       8     magic "MARFTSv1"
    8       1     algorithm code (1 = lpc, 2 = fft, 3 = minmax)
    9       4     param1 (lpc: poles; fft: window length; else 0)
    13      4     param2 (lpc: window length; else 0)
    17      4     vector length L
    21      4     subject count S
    then S subject blocks:
    +0      4     subject id (signed)
    +4      4     vector count V
    +8      8*L*V vectors, row-major 64-bit reals

Writes go to a sibling temp file and land with an atomic rename.
"""

import math
import os
import struct
from dataclasses import dataclass
from typing import NamedTuple

from marfsnmp.pipeline.dsp import (
    ALGORITHM_FFT,
    ALGORITHM_LPC,
    ALGORITHM_MINMAX,
    FeatureVector,
)
from marfsnmp.pipeline.errors import (
    EmptyTrainingSet,
    IncompatibleFeatures,
    TrainingSetFormatError,
)

MAGIC = b"MARFTSv1"
_HEADER = struct.Struct("<8sBIIII")
_SUBJECT = struct.Struct("<iI")

ALGORITHM_CODES = {ALGORITHM_LPC: 1, ALGORITHM_FFT: 2, ALGORITHM_MINMAX: 3}
_CODE_TO_ALGORITHM = {code: name for name, code in ALGORITHM_CODES.items()}


class RankedMatch(NamedTuple):
    subject_id: int
    distance: float


@dataclass(frozen=True, slots=True)
class ResultSet:
    """Ranked (subjectId, distance) pairs, ascending by distance."""

    ranked: tuple

    @property
    def top(self):
        return self.ranked[0]

    def __len__(self):
        return len(self.ranked)


class TrainingSet:
    """Feature vectors grouped by subject, all sharing one signature."""

    def __init__(self):
        self._signature = None  # (algorithm, params, length)
        self._entries = {}      # subject id -> [tuple-of-floats, ...]

    @property
    def signature(self):
        return self._signature

    @property
    def subject_ids(self):
        return tuple(sorted(self._entries))

    @property
    def record_count(self):
        return sum(len(vectors) for vectors in self._entries.values())

    def vectors_of(self, subject_id):
        return tuple(self._entries.get(subject_id, ()))

    def _require_compatible(self, fv):
        if self._signature is not None and fv.signature != self._signature:
            raise IncompatibleFeatures(self._signature, fv.signature)

    def add(self, subject_id, fv):
        """Append one vector; the first vector fixes the set's signature."""
        self._require_compatible(fv)
        if self._signature is None:
            self._signature = fv.signature
        self._entries.setdefault(int(subject_id), []).append(tuple(fv.features))

    def classify(self, fv):
        """Rank subjects by their nearest stored vector (Euclidean)."""
        if not self._entries:
            raise EmptyTrainingSet("no vectors trained")
        self._require_compatible(fv)
        query = fv.features
        ranked = []
        for subject_id in sorted(self._entries):
            best = min(
                math.dist(vector, query) for vector in self._entries[subject_id]
            )
            ranked.append(RankedMatch(subject_id, best))
        ranked.sort(key=lambda match: (match.distance, match.subject_id))
        return ResultSet(tuple(ranked))


def _params_pair(signature):
    algorithm, params, _length = signature
    padded = tuple(params) + (0, 0)
    return padded[0], padded[1]


def _params_from_pair(algorithm, p1, p2):
    if algorithm == ALGORITHM_LPC:
        return (p1, p2)
    if algorithm == ALGORITHM_FFT:
        return (p1,)
    return ()


def save_training_set(store, path):
    """Serialize and atomically replace path."""
    if store.signature is None:
        raise EmptyTrainingSet("refusing to persist an empty store")
    algorithm, _params, length = store.signature
    p1, p2 = _params_pair(store.signature)
    blob = bytearray(
        _HEADER.pack(
            MAGIC, ALGORITHM_CODES[algorithm], p1, p2, length, len(store.subject_ids)
        )
    )
    for subject_id in store.subject_ids:
        vectors = store.vectors_of(subject_id)
        blob += _SUBJECT.pack(subject_id, len(vectors))
        for vector in vectors:
            blob += struct.pack(f"<{length}d", *vector)
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as handle:
        handle.write(blob)
    os.replace(tmp, path)
    return len(blob)


def load_training_set(path):
    with open(path, "rb") as handle:
        data = handle.read()
    if len(data) < _HEADER.size:
        raise TrainingSetFormatError("file shorter than the header")
    magic, code, p1, p2, length, subjects = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise TrainingSetFormatError(f"bad magic {magic!r}")
    algorithm = _CODE_TO_ALGORITHM.get(code)
    if algorithm is None:
        raise TrainingSetFormatError(f"unknown algorithm code {code}")
    params = _params_from_pair(algorithm, p1, p2)
    store = TrainingSet()
    pos = _HEADER.size
    for _ in range(subjects):
        if pos + _SUBJECT.size > len(data):
            raise TrainingSetFormatError("truncated subject block")
        subject_id, count = _SUBJECT.unpack_from(data, pos)
        pos += _SUBJECT.size
        for _ in range(count):
            end = pos + 8 * length
            if end > len(data):
                raise TrainingSetFormatError("truncated vector data")
            features = struct.unpack_from(f"<{length}d", data, pos)
            store.add(subject_id, FeatureVector(algorithm, params, features))
            pos += 8 * length
    if pos != len(data):
        raise TrainingSetFormatError(f"{len(data) - pos} trailing bytes")
    return store
