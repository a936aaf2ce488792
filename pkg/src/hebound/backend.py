"""Backend selection: compiled extension when present, pure Python otherwise.

The compiled module hebound._core (Cython) and hebound._pykernels expose
the same three entry points:

    hardy_kernel_grid(r, params)            -> ndarray
    supersolution_residual_x_grid(x, p, b)  -> ndarray
    shoot(p, n, lam, r0, r_stop, rtol, want_zero)
        -> (crossed, r_zero, u_end, steps)

Selection happens once at import; set HEB_BACKEND=python to force the
fallback (useful for the backend benchmark and parity tests).
"""

from __future__ import annotations

import os

from . import _pykernels

try:
    from . import _core
except ImportError:  # extension not built
    _core = None

HAVE_COMPILED = _core is not None


def get_backend(name: str):
    """Return a backend module by name ('compiled' or 'python')."""
    if name == "python":
        return _pykernels
    if name == "compiled":
        if _core is None:
            raise RuntimeError("compiled backend requested but hebound._core is not built")
        return _core
    raise ValueError(f"unknown backend {name!r}")


if os.environ.get("HEB_BACKEND") == "python" or _core is None:
    _active = _pykernels
else:
    _active = _core

NAME = _active.NAME
hardy_kernel_grid = _active.hardy_kernel_grid
supersolution_residual_x_grid = _active.supersolution_residual_x_grid
shoot = _active.shoot
