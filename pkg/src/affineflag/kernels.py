"""Backend selection for the hot loops.

The compiled extension ``_ckernels`` is used when it imports; otherwise, or
when ``AFFINEFLAG_PURE_PYTHON`` is set to a non-empty value other than ``0``,
the numpy fallback ``_pykernels`` is used.
"""

import importlib
import os

from . import _pykernels

_NAMES = (
    "pair_orbit_closure",
    "pair_orbit_labels",
    "bfs_eccentricity",
    "girth",
    "triangle_counts",
)


def load_backend(name: str):
    """Return the kernel module called ``name`` ("compiled" or "python")."""
    if name == "python":
        return _pykernels
    if name == "compiled":
        return importlib.import_module("affineflag._ckernels")
    raise ValueError(f"unknown kernel backend {name!r}")


def available_backends() -> list[str]:
    out = ["python"]
    try:
        load_backend("compiled")
    except ImportError:
        pass
    else:
        out.insert(0, "compiled")
    return out


def _select():
    if os.environ.get("AFFINEFLAG_PURE_PYTHON", "") not in ("", "0"):
        return "python", _pykernels
    try:
        return "compiled", load_backend("compiled")
    except ImportError:
        return "python", _pykernels


BACKEND, _impl = _select()

pair_orbit_closure = _impl.pair_orbit_closure
pair_orbit_labels = _impl.pair_orbit_labels
bfs_eccentricity = _impl.bfs_eccentricity
girth = _impl.girth
triangle_counts = _impl.triangle_counts

__all__ = ["BACKEND", "available_backends", "load_backend", *_NAMES]
