"""Integrand kernels: compiled extension with a pure-numpy fallback.

The backend is selected once at import: the compiled Cython core when its
extension module is importable, the numpy reference otherwise. Set
``FLOQFRIC_KERNEL=numpy`` (or ``compiled``) to force a choice; forcing
``compiled`` when the extension is missing raises at first use.
"""

from __future__ import annotations

import os
import warnings

from . import _ref
from .context import PointContext, build_point_context

try:
    from . import _core
except ImportError:  # extension not built; pure-Python install
    _core = None

_BACKENDS = {"numpy": _ref}
if _core is not None:
    _BACKENDS["compiled"] = _core


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def get_backend(name: str | None = None):
    """Resolve a kernel backend module by name (None/'auto' for the default)."""
    if name is None or name == "auto":
        name = _DEFAULT
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"unknown kernel backend {name!r}; available: {available_backends()}"
        ) from None


def default_backend() -> str:
    return _DEFAULT


_env = os.environ.get("FLOQFRIC_KERNEL", "").strip().lower()
if _env and _env != "auto":
    if _env not in _BACKENDS:
        warnings.warn(
            f"FLOQFRIC_KERNEL={_env!r} not available (have {available_backends()}); "
            "falling back to automatic selection",
            RuntimeWarning,
        )
        _env = ""
if _env:
    _DEFAULT = _env
elif _core is not None:
    _DEFAULT = "compiled"
else:
    _DEFAULT = "numpy"

__all__ = [
    "PointContext",
    "build_point_context",
    "available_backends",
    "get_backend",
    "default_backend",
]
