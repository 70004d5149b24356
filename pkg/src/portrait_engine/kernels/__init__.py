"""Backend selection for the collapsed Gibbs sampling sweep.

The compiled extension is preferred when it imported cleanly; the pure-Python
twin implements the identical arithmetic (same splitmix64 stream, same
floating-point operation order) so both backends produce bitwise-identical
count matrices. Set ENGINE_PURE_KERNELS=1 to force the pure backend.
"""

from __future__ import annotations

import os

from portrait_engine.kernels import _gibbs_py

_FORCE_PURE = os.environ.get("ENGINE_PURE_KERNELS", "") == "1"

if _FORCE_PURE:
    _compiled = None
else:
    try:
        from portrait_engine.kernels import _gibbs as _compiled
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "pure"
gibbs_train = _compiled.gibbs_train if _compiled is not None else _gibbs_py.gibbs_train


def available_backends() -> dict:
    """Name -> gibbs_train callable for every importable backend."""
    backends = {"pure": _gibbs_py.gibbs_train}
    try:
        from portrait_engine.kernels import _gibbs

        backends["cython"] = _gibbs.gibbs_train
    except ImportError:
        pass
    return backends
