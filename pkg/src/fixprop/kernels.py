"""Kernel backend selection.

The hot inner loops of propagation (tuple filtering, pair restriction,
witness joins) live in a small compiled extension with a pure-Python
fallback.  The compiled backend is used when importable; set the
environment variable ``FIXPROP_PURE_PYTHON=1`` to force the fallback.

Callers reach the kernels through this module's attributes so a backend
swap (see :func:`use_backend`) takes effect everywhere at once.
"""

from __future__ import annotations

import os

from . import _kernels_py

_BACKENDS: dict[str, object] = {"python": _kernels_py}
try:
    from . import _ckernels  # type: ignore[attr-defined]

    _BACKENDS["compiled"] = _ckernels
except ImportError:  # pragma: no cover - build-dependent
    _ckernels = None

BACKEND = "python"
restrict_pairs = _kernels_py.restrict_pairs
project_tuples = _kernels_py.project_tuples
witness_filter = _kernels_py.witness_filter


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def use_backend(name: str) -> str:
    """Bind the named backend's kernels; returns the previously active name."""
    global BACKEND, restrict_pairs, project_tuples, witness_filter
    try:
        mod = _BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"unknown kernel backend {name!r}; available: {available_backends()}"
        ) from None
    previous = BACKEND
    BACKEND = name
    restrict_pairs = mod.restrict_pairs
    project_tuples = mod.project_tuples
    witness_filter = mod.witness_filter
    return previous


if os.environ.get("FIXPROP_PURE_PYTHON", "").lower() not in ("", "0", "false"):
    use_backend("python")
elif "compiled" in _BACKENDS:
    use_backend("compiled")
