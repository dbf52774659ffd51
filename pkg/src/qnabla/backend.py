"""Kernel backend selection.

The compiled extension (:mod:`qnabla._kernels`) is preferred when present;
the pure-Python twin (:mod:`qnabla._kernels_py`) is the fallback and is also
forced by setting the environment variable ``QFRAC_PURE`` to a nonempty
value other than "0".  Both expose the same two functions with identical
semantics, so the choice only affects speed.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("QFRAC_PURE", "0").strip() not in ("", "0"):
    kernels = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]

        kernels = _compiled
        BACKEND = "cython"
    except ImportError:
        kernels = _kernels_py
        BACKEND = "python"

STATUS_OK = _kernels_py.STATUS_OK
STATUS_NO_CONVERGENCE = _kernels_py.STATUS_NO_CONVERGENCE
STATUS_SINGULAR = _kernels_py.STATUS_SINGULAR
