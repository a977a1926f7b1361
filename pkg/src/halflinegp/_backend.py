"""Backend selection for the hot kernels.

The compiled extension (``_fastcore``) is preferred when importable; the
numpy core (``_pycore``) is the fallback.  Set ``HALFLINEGP_BACKEND`` to
``python`` or ``compiled`` to force a choice (forcing ``compiled`` raises if
the extension was not built).
"""

from __future__ import annotations

import os

from . import _pycore

_requested = os.environ.get("HALFLINEGP_BACKEND", "").strip().lower()

if _requested == "python":
    _impl = _pycore
elif _requested == "compiled":
    from . import _fastcore as _impl  # noqa: F401  (ImportError is the contract)
elif _requested == "":
    try:
        from . import _fastcore as _impl
    except ImportError:
        _impl = _pycore
else:
    raise RuntimeError(
        f"HALFLINEGP_BACKEND must be 'python' or 'compiled', got {_requested!r}")

halfline_log_gram = _impl.halfline_log_gram
halfline_log_pairs = _impl.halfline_log_pairs


def backend_name() -> str:
    """Name of the active hot-kernel backend: 'compiled' or 'python'."""
    return _impl.BACKEND_NAME
