"""Hot kernels with a compiled core and a numpy fallback.

The compiled module is used when it was built; set ``DIGSPLIT_KERNELS=python``
to force the fallback (``=cython`` makes a missing extension an error).
"""

import os
from types import ModuleType

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

NAMES = (
    "count_into",
    "same_side_counts",
    "batch_same_side_counts",
    "recount",
    "core_peel",
    "split_scan",
)


def available():
    """Names of the importable backends, compiled first."""
    return ["cython", "python"] if _ckernels is not None else ["python"]


def get_backend(name):
    if name == "python":
        return _pykernels
    if name == "cython":
        if _ckernels is None:
            raise ImportError("digsplit._kernels._ckernels is not built")
        return _ckernels
    raise ValueError(f"unknown kernel backend {name!r}")


def _select() -> tuple[str, ModuleType]:
    wanted = os.environ.get("DIGSPLIT_KERNELS", "").strip().lower()
    if wanted:
        return wanted, get_backend(wanted)
    name = available()[0]
    return name, get_backend(name)


BACKEND, _impl = _select()

count_into = _impl.count_into
same_side_counts = _impl.same_side_counts


def batch_same_side_counts(indptr, indices, sides):
    # a dense float32 matmul beats the compiled gather loop for moderate n
    if len(indptr) - 1 <= _pykernels._DENSE_LIMIT:
        return _pykernels.batch_same_side_counts(indptr, indices, sides)
    return _impl.batch_same_side_counts(indptr, indices, sides)


recount = _impl.recount
core_peel = _impl.core_peel
split_scan = _impl.split_scan
