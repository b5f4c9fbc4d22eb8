from .encoder import Encoding, EncodingConfig, UnrollBoundExceeded, UnsupportedForEncoding
from .localizer import (Diagnosis, NoFailingTests, Trace, concrete_trace, encode, failing_tests,
                        localize, make_diagnosis, spectrum_ranking)

__all__ = [
    "Diagnosis", "Encoding", "EncodingConfig", "NoFailingTests", "Trace", "UnrollBoundExceeded",
    "UnsupportedForEncoding", "concrete_trace", "encode", "failing_tests", "localize",
    "make_diagnosis", "spectrum_ranking",
]
