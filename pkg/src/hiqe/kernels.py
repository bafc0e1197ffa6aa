"""Backend selection for the time-stepping kernels.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``HIQE_PURE_PYTHON`` is set to a non-empty value, the
numpy reference implementation is used.
"""

import os

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_FUNCTIONS = ("evolve_block", "rk4_block", "evolve_embedded", "rk4_embedded")


def available_backends():
    return ("compiled", "python") if _compiled is not None else ("python",)


def load_backend(name):
    """Return the kernel module for ``"compiled"`` or ``"python"``."""
    if name == "python":
        return _kernels_py
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels are not built; run `pip install -e .`")
        return _compiled
    raise ValueError(f"unknown kernel backend {name!r}")


if _compiled is not None and not os.environ.get("HIQE_PURE_PYTHON"):
    BACKEND = "compiled"
else:
    BACKEND = "python"

_active = load_backend(BACKEND)
evolve_block = _active.evolve_block
rk4_block = _active.rk4_block
evolve_embedded = _active.evolve_embedded
rk4_embedded = _active.rk4_embedded
