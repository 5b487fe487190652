"""The managed audio services: shared service table, stage logic, agents.

Every service owns an embedded SNMP engine serving the common serviceTable
plus its area-specific extension table. The serviceTable rows live in one
shared ServiceDirectory so that any agent in a deployment answers for the
whole roster; counters and status flow through the directory under one lock.

Status writes are live controls: setting serviceStatus to up(1) or down(2)
starts or stops the named service and fires a serviceStatusChange trap.
"""

import threading
import time
import warnings
from functools import lru_cache
from pathlib import Path

from marfsnmp.agent import AgentEngine, ObjectRegistry
from marfsnmp.ber import Integer
from marfsnmp.messages import ErrorStatus, Varbind
from marfsnmp.pipeline import dsp
from marfsnmp.pipeline.errors import InvalidParams, ServiceDown
from marfsnmp.pipeline.sample import FORMAT_WAV_PCM16_MONO, load_sample
from marfsnmp.pipeline.training import TrainingSet, load_training_set, save_training_set
from marfsnmp.smi import LENIENT, SmiWarning, load_registry

STATUS_UP = 1
STATUS_DOWN = 2

TYPE_APPLICATION = 1
TYPE_SAMPLE_LOADING = 3
TYPE_PREPROCESSING = 4
TYPE_FEATURE_EXTRACTION = 5
TYPE_CLASSIFICATION = 6

TRUTH_TRUE = 1
TRUTH_FALSE = 2

_COUNTER_MOD = 1 << 32
_MICRO = 1_000_000


class MibContext:
    """Resolved MIB material the services bind against."""

    def __init__(self, registry):
        self.registry = registry
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SmiWarning)  # bundled set is known good
            resolved = registry.tables(LENIENT)
        self.tables = {t.table_name: t for t in resolved}
        self.status_change_oid = registry.oid_of("serviceStatusChange")
        self.service_index_oid = registry.oid_of("serviceIndex")
        self.service_status_oid = registry.oid_of("serviceStatus")


@lru_cache(maxsize=1)
def mib_context():
    return MibContext(load_registry())


class _ServiceRow:
    __slots__ = (
        "index",
        "name",
        "type_code",
        "status",
        "started_at",
        "in_requests",
        "out_errors",
        "controller",
    )

    def __init__(self, index, name, type_code, controller):
        self.index = index
        self.name = name
        self.type_code = type_code
        self.status = STATUS_DOWN
        self.started_at = None
        self.in_requests = 0
        self.out_errors = 0
        self.controller = controller


class ServiceDirectory:
    """The shared serviceTable row source and status switchboard.

    One directory backs every agent in a deployment, so each engine walks
    the full roster. Reads and counter bumps are individually atomic; a
    serviceStatus write dispatches to the owning service's controller.
    """

    def __init__(self, clock=time.monotonic):
        self._clock = clock
        self._rows = {}
        self._lock = threading.RLock()

    def add(self, index, name, type_code, controller):
        with self._lock:
            if index in self._rows:
                raise ValueError(f"service index {index} already registered")
            self._rows[index] = _ServiceRow(index, name, type_code, controller)

    # -- row source contract ----------------------------------------------

    def row_indexes(self):
        with self._lock:
            return sorted(self._rows)

    def read_cell(self, column, index):
        with self._lock:
            row = self._rows[index]
            if column == "serviceIndex":
                return row.index
            if column == "serviceName":
                return row.name
            if column == "serviceType":
                return row.type_code
            if column == "serviceStatus":
                return row.status
            if column == "serviceUptime":
                if row.status != STATUS_UP or row.started_at is None:
                    return 0
                return int((self._clock() - row.started_at) * 100) % _COUNTER_MOD
            if column == "serviceInRequests":
                return row.in_requests
            if column == "serviceOutErrors":
                return row.out_errors
            raise KeyError(column)

    def check_cell(self, column, index, value):
        if column == "serviceStatus" and value not in (STATUS_UP, STATUS_DOWN):
            # starting/stopping are observations, not commands
            return ErrorStatus.WRONG_VALUE
        return ErrorStatus.NO_ERROR

    def write_cell(self, column, index, value):
        if column != "serviceStatus":
            raise KeyError(column)
        with self._lock:
            controller = self._rows[index].controller
        if value == STATUS_UP:
            controller.start()
        else:
            controller.stop()

    # -- used by the services themselves ------------------------------------

    def status_of(self, index):
        with self._lock:
            return self._rows[index].status

    def set_status(self, index, status):
        """Record a transition; returns False when already in that state."""
        with self._lock:
            row = self._rows[index]
            if row.status == status:
                return False
            row.status = status
            row.started_at = self._clock() if status == STATUS_UP else None
            return True

    def count_request(self, index):
        with self._lock:
            row = self._rows[index]
            row.in_requests = (row.in_requests + 1) % _COUNTER_MOD

    def count_error(self, index):
        with self._lock:
            row = self._rows[index]
            row.out_errors = (row.out_errors + 1) % _COUNTER_MOD


class OwnRow:
    """Single-row source: a cell dict plus optional per-column value checks.

    Cell values may be zero-argument callables for computed columns.
    """

    def __init__(self, index, cells, checks=None):
        self.index = index
        self._cells = dict(cells)
        self._checks = dict(checks or {})
        self._lock = threading.RLock()

    def row_indexes(self):
        return (self.index,)

    def read_cell(self, column, index):
        with self._lock:
            value = self._cells[column]
        return value() if callable(value) else value

    def check_cell(self, column, index, value):
        probe = self._checks.get(column)
        return probe(value) if probe is not None else ErrorStatus.NO_ERROR

    def write_cell(self, column, index, value):
        with self._lock:
            self._cells[column] = value

    def get(self, column):
        return self.read_cell(column, self.index)

    def set(self, column, value):
        self.write_cell(column, self.index, value)

    def snapshot(self, *columns):
        """Read several cells under one lock hold."""
        with self._lock:
            values = [self._cells[c] for c in columns]
        return tuple(v() if callable(v) else v for v in values)


class PipelineService:
    """Base for one managed service: directory row, registry, embedded agent.

    Subclasses bind extension tables in _bind_extra and wrap their work in
    _run, which enforces the status gate and keeps the request/error
    counters. Work is serialized per service.
    """

    service_type = None

    def __init__(self, index, name, directory, agent_config=None, clock=time.monotonic):
        self.index = index
        self.name = name
        self.directory = directory
        self.context = mib_context()
        self._proc_lock = threading.Lock()
        registry = ObjectRegistry()
        registry.register_table(self.context.tables["serviceTable"], directory)
        self._bind_extra(registry)
        self.engine = AgentEngine(registry, agent_config, clock=clock)
        directory.add(index, name, self.service_type, self)

    def _bind_extra(self, registry):
        pass

    def start(self):
        self._transition(STATUS_UP)

    def stop(self):
        self._transition(STATUS_DOWN)

    def _transition(self, status):
        if not self.directory.set_status(self.index, status):
            return  # already there; no trap for a no-op
        context = self.context
        self.engine.emit_trap(
            self.engine.make_trap(
                context.status_change_oid,
                varbinds=(
                    Varbind(
                        context.service_index_oid.extend(self.index),
                        Integer(self.index),
                    ),
                    Varbind(
                        context.service_status_oid.extend(self.index),
                        Integer(status),
                    ),
                ),
            )
        )

    def _run(self, work):
        if self.directory.status_of(self.index) != STATUS_UP:
            raise ServiceDown(self.index)
        with self._proc_lock:
            self.directory.count_request(self.index)
            try:
                return work()
            except Exception:
                self.directory.count_error(self.index)
                raise


def _check_truth(value):
    # TableBinding already enforces enum membership; kept for direct callers
    if value not in (TRUTH_TRUE, TRUTH_FALSE):
        return ErrorStatus.WRONG_VALUE
    return ErrorStatus.NO_ERROR


class SampleLoadingService(PipelineService):
    """Decodes raw audio bytes into amplitude vectors."""

    service_type = TYPE_SAMPLE_LOADING

    def __init__(self, index, directory, name="sample-loading", **kwargs):
        self._last_length = 0
        self.row = OwnRow(
            index,
            cells={
                "iFormat": FORMAT_WAV_PCM16_MONO,
                "adSampleLength": lambda: self._last_length,
            },
            checks={"iFormat": self._check_format},
        )
        super().__init__(index, name, directory, **kwargs)

    @staticmethod
    def _check_format(value):
        if value != FORMAT_WAV_PCM16_MONO:
            return ErrorStatus.WRONG_VALUE
        return ErrorStatus.NO_ERROR

    def _bind_extra(self, registry):
        registry.register_table(
            self.context.tables["sampleLoadingServiceTable"], self.row
        )

    def load(self, data):
        def work():
            declared = self.row.get("iFormat")
            sample = load_sample(data, declared_format=declared)
            self._last_length = len(sample)
            return sample

        return self._run(work)


class PreprocessingService(PipelineService):
    """Filters and normalizes a sample under SNMP-settable knobs."""

    service_type = TYPE_PREPROCESSING

    def __init__(self, index, directory, name="preprocessing", **kwargs):
        self.row = OwnRow(
            index,
            cells={
                "dSilenceThresholdMicro": 10_000,  # 0.01 in micro units
                "bRemoveNoise": TRUTH_FALSE,
                "bRemoveSilence": TRUTH_FALSE,
            },
            checks={
                "dSilenceThresholdMicro": self._check_threshold,
                "bRemoveNoise": _check_truth,
                "bRemoveSilence": _check_truth,
            },
        )
        super().__init__(index, name, directory, **kwargs)

    @staticmethod
    def _check_threshold(value):
        if not 0 <= value < _MICRO:
            return ErrorStatus.WRONG_VALUE
        return ErrorStatus.NO_ERROR

    def _bind_extra(self, registry):
        registry.register_table(
            self.context.tables["preprocessingServiceTable"], self.row
        )

    def preprocess(self, sample):
        def work():
            # config is read once; later SETs apply to the next request
            threshold_micro, noise, silence = self.row.snapshot(
                "dSilenceThresholdMicro", "bRemoveNoise", "bRemoveSilence"
            )
            out = sample
            if noise == TRUTH_TRUE:
                out = dsp.remove_noise(out)
            if silence == TRUTH_TRUE:
                out = dsp.remove_silence(out, threshold_micro / _MICRO)
            return dsp.normalize(out)

        return self._run(work)


class FeatureExtractionService(PipelineService):
    """Turns samples into feature vectors; LPC knobs live in their own row."""

    service_type = TYPE_FEATURE_EXTRACTION

    def __init__(self, index, directory, name="feature-extraction", embed_lpc=True, **kwargs):
        self._last_length = 0
        self._sets_produced = 0
        self.row = OwnRow(
            index,
            cells={
                "adFeaturesLength": lambda: self._last_length,
                "oFeatureSetSize": lambda: self._sets_produced,
            },
        )
        self.lpc_row = OwnRow(
            index,
            cells={"iPoles": 8, "iWindowLen": 256},
            checks={
                "iPoles": self._check_positive,
                "iWindowLen": self._check_window,
            },
        )
        self._embed_lpc = embed_lpc
        super().__init__(index, name, directory, **kwargs)

    @staticmethod
    def _check_positive(value):
        if value < 1:
            return ErrorStatus.WRONG_VALUE
        return ErrorStatus.NO_ERROR

    @staticmethod
    def _check_window(value):
        if value < 2:
            return ErrorStatus.WRONG_VALUE
        return ErrorStatus.NO_ERROR

    def _bind_extra(self, registry):
        registry.register_table(
            self.context.tables["featureextractionServiceTable"], self.row
        )
        if self._embed_lpc:
            registry.register_table(self.context.tables["lpcServiceTable"], self.lpc_row)

    def build_lpc_registry(self):
        """Registry holding only the LPC knobs, for a delegated sub-agent."""
        registry = ObjectRegistry()
        registry.register_table(self.context.tables["lpcServiceTable"], self.lpc_row)
        return registry

    def extract(self, sample, algorithm=dsp.ALGORITHM_LPC):
        def work():
            if algorithm == dsp.ALGORITHM_LPC:
                poles, window_len = self.lpc_row.snapshot("iPoles", "iWindowLen")
                fv = dsp.lpc_features(sample, poles, window_len)
            elif algorithm == dsp.ALGORITHM_FFT:
                _, window_len = self.lpc_row.snapshot("iPoles", "iWindowLen")
                fv = dsp.fft_features(sample, window_len)
            elif algorithm == dsp.ALGORITHM_MINMAX:
                fv = dsp.minmax_features(sample)
            else:
                raise InvalidParams(f"unknown algorithm {algorithm!r}")
            self._last_length = len(fv)
            self._sets_produced += 1
            return fv

        return self._run(work)


class ClassificationService(PipelineService):
    """Ranks subjects against the persisted training set."""

    service_type = TYPE_CLASSIFICATION

    def __init__(self, index, directory, store_path, name="classification", **kwargs):
        self.store_path = Path(store_path)
        self.store = TrainingSet()
        self._stored_bytes = 0
        try:
            self.store = load_training_set(self.store_path)
            self._stored_bytes = self.store_path.stat().st_size
        except FileNotFoundError:
            pass
        self._last_query_length = 0
        self._last_result_size = 0
        self._last_top_id = 0
        self.row = OwnRow(
            index,
            cells={
                "adFeaturesLength": lambda: self._last_query_length,
                "oResultSetSize": lambda: self._last_result_size,
                "oResultSetTopId": lambda: self._last_top_id,
            },
        )
        self.storage_row = OwnRow(
            1,
            cells={
                "storageIndex": 1,
                "storagePath": str(store_path),
                "storageSizeBytes": lambda: self._stored_bytes,
                "storageRecordCount": lambda: self.store.record_count,
            },
        )
        super().__init__(index, name, directory, **kwargs)

    def _bind_extra(self, registry):
        registry.register_table(
            self.context.tables["classificationServiceTable"], self.row
        )
        registry.register_table(self.context.tables["storageTable"], self.storage_row)

    def train(self, subject_id, fv):
        def work():
            self.store.add(subject_id, fv)
            self._stored_bytes = save_training_set(self.store, self.store_path)

        return self._run(work)

    def classify(self, fv):
        def work():
            result = self.store.classify(fv)
            self._last_query_length = len(fv)
            self._last_result_size = len(result)
            self._last_top_id = result.top.subject_id
            return result

        return self._run(work)


class SpeakerIdentApp(PipelineService):
    """The application front: drives the four stages end to end.

    stages must answer load/preprocess/extract/classify; probe(index)
    returns a serviceStatus value obtained over SNMP, or raises. Any stage
    not up refuses the request before audio is touched.
    """

    service_type = TYPE_APPLICATION

    def __init__(self, index, directory, stages, probe, stage_indexes,
                 name="speaker-ident-app", **kwargs):
        self.stages = stages
        self.probe = probe
        self.stage_indexes = tuple(stage_indexes)
        self._requests = 0
        self._last_speaker = 0
        self._last_distance_micro = 0
        self.row = OwnRow(
            index,
            cells={
                "appRequests": lambda: self._requests,
                "appLastSpeakerId": lambda: self._last_speaker,
                "appLastDistanceMicro": lambda: self._last_distance_micro,
            },
        )
        super().__init__(index, name, directory, **kwargs)

    def _bind_extra(self, registry):
        registry.register_table(self.context.tables["appTable"], self.row)

    def identify(self, data, algorithm=dsp.ALGORITHM_LPC):
        """Run one clip through the pipeline; returns the ranked result."""

        def work():
            self._requests = (self._requests + 1) % _COUNTER_MOD
            for stage_index in self.stage_indexes:
                try:
                    status = self.probe(stage_index)
                except Exception as exc:
                    raise ServiceDown(stage_index) from exc
                if status != STATUS_UP:
                    raise ServiceDown(stage_index)
            sample = self.stages.load(data)
            cleaned = self.stages.preprocess(sample)
            fv = self.stages.extract(cleaned, algorithm)
            result = self.stages.classify(fv)
            self._last_speaker = result.top.subject_id
            self._last_distance_micro = int(round(result.top.distance * _MICRO))
            return result

        return self._run(work)

    def train(self, subject_id, data, algorithm=dsp.ALGORITHM_LPC):
        """Enroll one clip for a subject through the same stage path.

        Enrollment does not count toward appRequests; that counter tracks
        identification traffic only.
        """

        def work():
            sample = self.stages.load(data)
            cleaned = self.stages.preprocess(sample)
            fv = self.stages.extract(cleaned, algorithm)
            self.stages.train(subject_id, fv)

        return self._run(work)
