"""Kernel backend selection.

The compiled core (built from ``_core.pyx`` via ``python setup.py build_ext
--inplace``) is preferred when importable; otherwise the pure-Python mirror
is used.  Set ``OUPOP_PURE_KERNELS=1`` to force the fallback (the benchmark
and the parity tests do).
"""

import os

if os.environ.get("OUPOP_PURE_KERNELS"):
    from . import _pure as _backend
else:
    try:
        from . import _core as _backend
    except ImportError:
        from . import _pure as _backend

BACKEND = "pure" if _backend.__name__.endswith("_pure") else "core"

BLOWUP_LIMIT = _backend.BLOWUP_LIMIT
ou_recurrence = _backend.ou_recurrence
rk4_logistic_k = _backend.rk4_logistic_k
rk4_logistic_r = _backend.rk4_logistic_r
rk4_lv = _backend.rk4_lv
