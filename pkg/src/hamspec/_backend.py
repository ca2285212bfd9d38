"""Kernel backend selection.

``HAMSPEC_BACKEND`` picks the implementation: ``auto`` (default, compiled if
importable), ``cython`` (compiled or fail), ``python`` (pure fallback).
"""
import importlib
import os

_MODULES = {"cython": "hamspec._core", "python": "hamspec._core_py"}


def load(name: str):
    """Import a backend module by name (``"cython"`` or ``"python"``)."""
    return importlib.import_module(_MODULES[name])


def available() -> list[str]:
    names = []
    for name in _MODULES:
        try:
            load(name)
        except ImportError:
            continue
        names.append(name)
    return names


def _select():
    choice = os.environ.get("HAMSPEC_BACKEND", "auto").lower()
    if choice == "python":
        return load("python")
    try:
        return load("cython")
    except ImportError:
        if choice == "cython":
            raise
        return load("python")


core = _select()
BACKEND = core.NAME
