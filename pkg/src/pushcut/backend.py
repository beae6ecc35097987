"""Select the kernel lane at import: compiled extension if present, else pure Python.

Set the environment variable ``PUSHCUT_PURE`` to any nonempty value to force
the pure lane even when the extension is built.
"""

import os

if os.environ.get("PUSHCUT_PURE"):
    from . import _pykernels as kernels

    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _pykernels as kernels

        BACKEND = "python"

__all__ = ["kernels", "BACKEND"]
