"""Kernel dispatch: compiled extension if built, numpy fallback otherwise.

Set the environment variable ``SCHRODLAB_NO_COMPILED=1`` to force the
fallback (the benchmark script uses this to compare the two).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("SCHRODLAB_NO_COMPILED"):
    _impl = _kernels_py
    HAVE_COMPILED = False
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        HAVE_COMPILED = True
    except ImportError:
        _impl = _kernels_py
        HAVE_COMPILED = False

accumulate_lr = _impl.accumulate_lr
accumulate_max = _impl.accumulate_max
extension_eval = _impl.extension_eval
raster_union_area = _impl.raster_union_area

__all__ = [
    "HAVE_COMPILED",
    "accumulate_lr",
    "accumulate_max",
    "extension_eval",
    "raster_union_area",
]
