"""Audio-recognition services and the plumbing that connects them."""

from marfsnmp.pipeline.channel import StageServer, TcpStages
from marfsnmp.pipeline.dsp import (
    ALGORITHM_FFT,
    ALGORITHM_LPC,
    ALGORITHM_MINMAX,
    FeatureVector,
)
from marfsnmp.pipeline.errors import (
    DegenerateSignal,
    EmptyTrainingSet,
    IncompatibleFeatures,
    InvalidParams,
    MalformedWav,
    PipelineError,
    ServiceDown,
    TrainingSetFormatError,
    UnsupportedFormat,
)
from marfsnmp.pipeline.sample import FORMAT_WAV_PCM16_MONO, Sample, load_sample, wav_bytes
from marfsnmp.pipeline.services import (
    ClassificationService,
    FeatureExtractionService,
    MibContext,
    OwnRow,
    PipelineService,
    PreprocessingService,
    SampleLoadingService,
    ServiceDirectory,
    SpeakerIdentApp,
    STATUS_DOWN,
    STATUS_UP,
    mib_context,
)
from marfsnmp.pipeline.topology import (
    DemoTopology,
    LocalStages,
    LoopbackProbe,
    UdpProbe,
    demo_clip,
    loopback_request,
)
from marfsnmp.pipeline.training import (
    RankedMatch,
    ResultSet,
    TrainingSet,
    load_training_set,
    save_training_set,
)

__all__ = [
    "ALGORITHM_FFT",
    "ALGORITHM_LPC",
    "ALGORITHM_MINMAX",
    "ClassificationService",
    "DegenerateSignal",
    "DemoTopology",
    "EmptyTrainingSet",
    "FORMAT_WAV_PCM16_MONO",
    "FeatureExtractionService",
    "FeatureVector",
    "IncompatibleFeatures",
    "InvalidParams",
    "LocalStages",
    "LoopbackProbe",
    "MalformedWav",
    "MibContext",
    "OwnRow",
    "PipelineError",
    "PipelineService",
    "PreprocessingService",
    "RankedMatch",
    "ResultSet",
    "Sample",
    "SampleLoadingService",
    "ServiceDirectory",
    "ServiceDown",
    "SpeakerIdentApp",
    "STATUS_DOWN",
    "STATUS_UP",
    "StageServer",
    "TcpStages",
    "TrainingSet",
    "TrainingSetFormatError",
    "UdpProbe",
    "UnsupportedFormat",
    "demo_clip",
    "load_sample",
    "load_training_set",
    "loopback_request",
    "mib_context",
    "save_training_set",
    "wav_bytes",
]
