"""Numeric kernel dispatch: compiled extension with a pure-numpy fallback.

The Cython extension ``_core`` is selected when importable; otherwise the
numpy implementation ``_pure`` is used. Setting the environment variable
``COUNTERBELIEF_PURE=1`` before import forces the fallback. Both backends
share signatures and accumulation order, so results agree bit for bit.

Library code calls through this module's attributes (``_kernels.forward_step``
etc.), which lets :func:`activate` swap the backend at runtime. That hook
exists for the backend benchmark and the equivalence tests; it is not
thread-safe and normal use never needs it.
"""

import os

from . import _pure

KERNEL_NAMES = ("forward_step", "backward_step", "dedup_layer", "oracle_enumerate")

try:
    from . import _core
except ImportError:
    _core = None

_impl = _pure
if _core is not None and os.environ.get("COUNTERBELIEF_PURE", "0") in ("", "0"):
    _impl = _core


def activate(impl):
    """Bind this module's kernel entry points to ``impl`` (a backend module)."""
    global _impl
    _impl = impl
    for name in KERNEL_NAMES:
        globals()[name] = getattr(impl, name)


def backend():
    """Name of the active backend: "compiled" or "pure"."""
    return "compiled" if _impl is _core else "pure"


activate(_impl)
