"""Speech pipeline toolkit: log-mel features, DFSMN voice activity detection
(offline, streaming, multi-label), segmentation post-processing, CTC forced
alignment, beam-search decoding with hierarchical language identification,
punctuation, the transcription pipeline, and the evaluation metrics."""

from speechpipe._core import *  # noqa: F401,F403
from speechpipe._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
