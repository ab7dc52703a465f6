"""DP kernel backend: compiled extension if importable, else pure Python.

Set ``SMIWARP_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _slow as slow

fast = None
if not os.environ.get("SMIWARP_PURE_PYTHON"):
    try:
        from . import _fast as fast
    except ImportError:
        fast = None

_impl = fast if fast is not None else slow
BACKEND = "cython" if fast is not None else "python"

accumulate = _impl.accumulate
backtrack = _impl.backtrack

START, DIAG, UP, LEFT = slow.START, slow.DIAG, slow.UP, slow.LEFT
