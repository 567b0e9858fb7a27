"""Selects the compiled toggle kernels when available.

Set ``ZXCHECK_PURE_PYTHON=1`` to force the pure-Python versions.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
toggle_clique = _kernels_py.toggle_clique
toggle_bipartite = _kernels_py.toggle_bipartite

if os.environ.get("ZXCHECK_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        toggle_clique = _ckernels.toggle_clique
        toggle_bipartite = _ckernels.toggle_bipartite
        BACKEND = "cython"
