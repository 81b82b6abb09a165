"""Numerov kernel selection.

The compiled extension is used when it imports; set ``PDMOSC_PURE_PYTHON=1``
to force the interpreted loops. ``BACKEND`` names the active choice.
"""
import os

from . import _numerov_py

try:
    if os.environ.get("PDMOSC_PURE_PYTHON"):
        raise ImportError("pure-Python backend requested")
    from . import _numerov as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _numerov_py
    BACKEND = "python"

numerov_nodes = _impl.numerov_nodes
numerov_fill = _impl.numerov_fill

__all__ = ["BACKEND", "numerov_nodes", "numerov_fill"]
