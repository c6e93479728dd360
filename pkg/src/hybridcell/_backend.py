"""Kernel backend selection: compiled extension if present, numpy otherwise.

Set HYBRIDCELL_BACKEND=python or =cython to force a choice; forcing cython
without the built extension raises at import of the consumer module.
"""

from __future__ import annotations

import os

from . import _kernels_py


def _load_compiled():
    from . import _kernels
    return _kernels


def select_backend(name: str | None = None):
    """Return the kernel module for `name` (or the environment default)."""
    choice = name or os.environ.get("HYBRIDCELL_BACKEND")
    if choice == "python":
        return _kernels_py
    if choice == "cython":
        return _load_compiled()
    if choice is not None:
        raise ValueError(f"unknown backend {choice!r}; use 'cython' or 'python'")
    try:
        return _load_compiled()
    except ImportError:
        return _kernels_py


def available_backends() -> list:
    names = []
    try:
        _load_compiled()
        names.append("cython")
    except ImportError:
        pass
    names.append("python")
    return names


kernels = select_backend()
