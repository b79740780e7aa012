"""Kernel backend selection: compiled extension if built, NumPy otherwise.

Set CONTACTKIT_BACKEND=pure (or =compiled) to force a backend.
"""

import os

from . import pure

_forced = os.environ.get("CONTACTKIT_BACKEND", "").lower()

if _forced == "pure":
    _impl = pure
else:
    try:
        from . import _core as _impl
    except ImportError:
        if _forced == "compiled":
            raise
        _impl = pure

BACKEND = _impl.BACKEND
objective = _impl.objective
objective_grad = _impl.objective_grad
descend_batch = _impl.descend_batch


def backends():
    """All importable backends, for the benchmark and the test suite."""
    out = {"pure": pure}
    try:
        from . import _core
        out["compiled"] = _core
    except ImportError:
        pass
    return out
