"""Network state detection in time-varying functional connectivity graphs.

Stages: ``timefreq`` (complex time-frequency phase), ``connectivity``
(PLV graphs and the node x node x time x subject tensor), ``multiway``
(HOSVD and truncation), ``states`` (similarity, spectral clustering and
contiguous segmentation), ``summarize`` (one map per state) and
``pipeline`` (file-based orchestration behind the ``netstate`` CLI).
"""
from .errors import ConfigError, DataError, DegeneracyError, NetstateError
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "ConfigError", "DataError", "DegeneracyError", "NetstateError", "__version__"]
