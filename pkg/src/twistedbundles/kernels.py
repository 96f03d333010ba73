"""Selects the compiled elimination kernels when available.

``BACKEND`` is ``"compiled"`` or ``"python"``.  Set TWISTED_PURE_PYTHON=1 to
force the fallback.
"""
import os

from . import _kernels_py as python_kernels

compiled_kernels = None
if not os.environ.get("TWISTED_PURE_PYTHON"):
    try:
        from . import _kernels as compiled_kernels
    except ImportError:  # extension not built
        compiled_kernels = None

BACKEND = "compiled" if compiled_kernels is not None else "python"


def smith_invariants(rows):
    if compiled_kernels is not None:
        try:
            return compiled_kernels.smith_invariants(rows)
        except OverflowError:
            pass
    return python_kernels.smith_invariants(rows)


def rref_mod_p(rows, p):
    if compiled_kernels is not None and p < (1 << 31):
        return compiled_kernels.rref_mod_p(rows, p)
    return python_kernels.rref_mod_p(rows, p)


def rank_mod_p(rows, p):
    return len(rref_mod_p(rows, p)[1])
