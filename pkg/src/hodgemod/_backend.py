"""Kernel selection.

The compiled ``_kernels`` extension is used when it imports; otherwise the
pure-Python ``_kernels_py`` module.  Setting ``HODGEMOD_PURE_PYTHON=1``
forces the fallback (used by the benchmark and the backend parity tests).
"""

import os

if os.environ.get("HODGEMOD_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels
    except ImportError:
        from . import _kernels_py as kernels

BACKEND = "compiled" if kernels.__name__.endswith("._kernels") else "python"

__all__ = ["BACKEND", "kernels"]
