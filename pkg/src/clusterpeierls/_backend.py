"""Kernel backend selection.

``CLUSTERPEIERLS_BACKEND=numpy`` forces the pure-numpy kernels; the default
is numba, falling back to numpy when numba cannot be imported.
"""
import logging
import os

logger = logging.getLogger(__name__)

ENV_VAR = "CLUSTERPEIERLS_BACKEND"


def load(name=None):
    name = (name or os.environ.get(ENV_VAR, "numba")).strip().lower()
    if name == "numpy":
        from . import _kernels_numpy as mod
        return mod
    if name != "numba":
        raise ValueError(f"{ENV_VAR} must be 'numba' or 'numpy', got {name!r}")
    try:
        from . import _kernels_numba as mod
    except ImportError:  # pragma: no cover - numba is a declared dependency
        logger.warning("numba unavailable, using numpy kernels")
        from . import _kernels_numpy as mod
    return mod


kernels = load()
