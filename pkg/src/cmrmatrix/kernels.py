"""Kernel backend selection.

The compiled ``_native`` extension is used when it was built; otherwise the
numpy implementation in ``_fallback`` is used.  Setting
``CMRMATRIX_BACKEND=python`` forces the fallback.
"""
import os

from . import _fallback

RATIONAL, HYPERBOLIC, TRIGONOMETRIC = (
    _fallback.RATIONAL,
    _fallback.HYPERBOLIC,
    _fallback.TRIGONOMETRIC,
)

_impl = _fallback
BACKEND = "python"
if os.environ.get("CMRMATRIX_BACKEND", "").lower() != "python":
    try:
        from . import _native as _impl  # noqa: F811

        BACKEND = "native"
    except ImportError:
        _impl = _fallback

cybe_int = _impl.cybe_int
cm_flow = _impl.cm_flow


def get_backend(name):
    """Return the kernel module called ``name`` (``"native"`` or ``"python"``)."""
    if name == "python":
        return _fallback
    if name == "native":
        from . import _native

        return _native
    raise ValueError(f"unknown backend {name!r}")
