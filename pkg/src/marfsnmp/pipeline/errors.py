"""Failure vocabulary of the audio pipeline."""


class PipelineError(Exception):
    """Base class for every pipeline-stage failure."""


class UnsupportedFormat(PipelineError):
    """Format code (or encoding feature) this loader does not handle."""

    def __init__(self, code, detail=""):
        self.code = code
        suffix = f": {detail}" if detail else ""
        super().__init__(f"unsupported sample format {code}{suffix}")


class MalformedWav(PipelineError):
    def __init__(self, reason):
        self.reason = reason
        super().__init__(f"malformed WAV input: {reason}")


class DegenerateSignal(PipelineError):
    """Signal carries no usable energy (empty, or identically zero)."""


class InvalidParams(PipelineError):
    """Stage parameters violate their preconditions."""


class IncompatibleFeatures(PipelineError):
    """Vector does not match the algorithm/params/length of the store."""

    def __init__(self, expected, got):
        self.expected = expected
        self.got = got
        super().__init__(f"expected features {expected}, got {got}")


class EmptyTrainingSet(PipelineError):
    """Classification asked of a store holding no vectors."""


class TrainingSetFormatError(PipelineError):
    """Persisted training-set file failed structural validation."""


class ServiceDown(PipelineError):
    """Dispatch refused: a required service is not up."""

    def __init__(self, service_index):
        self.service_index = service_index
        super().__init__(f"service {service_index} is not up")
