"""Kernel backend selection.

The compiled extension is preferred; the pure-Python twin is used when it
is missing.  ``use()`` switches explicitly (tests and benchmarks use it to
compare the two).
"""

from . import _purepy

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

kernels = _ckernels if _ckernels is not None else _purepy
name = "compiled" if _ckernels is not None else "python"


def available():
    return ("compiled", "python") if _ckernels is not None else ("python",)


def use(which):
    """Select ``"compiled"`` or ``"python"`` kernels for subsequent calls."""
    global kernels, name
    if which == "compiled":
        if _ckernels is None:
            raise RuntimeError("compiled kernels are not built")
        kernels = _ckernels
    elif which == "python":
        kernels = _purepy
    else:
        raise ValueError(f"unknown backend {which!r}")
    name = which
