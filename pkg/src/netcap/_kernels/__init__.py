"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; the pure-Python
module is the fallback and the reference for parity tests. Set
``NETCAP_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from netcap._kernels import pure

if os.environ.get("NETCAP_PURE_PYTHON", "").strip() not in ("", "0"):
    _impl = pure
    BACKEND = "pure"
else:
    try:
        from netcap._kernels import _brandes as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = pure
        BACKEND = "pure"

betweenness = _impl.betweenness
next_hop_table = _impl.next_hop_table
TIE_RTOL = pure.TIE_RTOL


def backend_name() -> str:
    return BACKEND
