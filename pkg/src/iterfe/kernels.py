"""Backend selection for the hot loops.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
pure-Python ``_pykernels`` module is used. Setting ``ITERFE_PURE_PYTHON=1``
forces the fallback. Both expose the same functions with identical results.
"""
import os

from . import _pykernels as python_backend

compiled_backend = None
if os.environ.get("ITERFE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled_backend
    except ImportError:
        compiled_backend = None

_active = compiled_backend or python_backend

BACKEND = _active.BACKEND
mul_trunc = _active.mul_trunc
int_conv_trunc = _active.int_conv_trunc
closed_walks = _active.closed_walks
count_avoiders = _active.count_avoiders
