"""Backend selection for the numerical hot loops.

The compiled ``_ckernels`` extension is used when it was built; otherwise
the pure-Python ``_pykernels`` module is loaded.  Setting the environment
variable ``SIGNALPOWER_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os

from signalpower import _pykernels

OPTIMAL = _pykernels.OPTIMAL
UNBOUNDED = _pykernels.UNBOUNDED
NUMERIC = _pykernels.NUMERIC
ITERATION_LIMIT = _pykernels.ITERATION_LIMIT

_impl = _pykernels
BACKEND = "python"
if os.environ.get("SIGNALPOWER_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from signalpower import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels

support_enum_2p = _impl.support_enum_2p
simplex_iterate = _impl.simplex_iterate
fw_solve = _impl.fw_solve


def get_backend(name: str | None = None):
    """Return the kernel module called ``name`` (``"cython"`` or ``"python"``).

    ``None`` returns the active backend.  Raises ``ImportError`` when the
    compiled backend is requested but unavailable.
    """
    if name is None:
        return _impl
    if name == "python":
        return _pykernels
    if name == "cython":
        from signalpower import _ckernels

        return _ckernels
    raise ValueError(f"unknown kernel backend {name!r}")
