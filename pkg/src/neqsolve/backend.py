"""Selects the compute backend: compiled extension if built, fallback otherwise."""

try:
    from . import _ckernels as kernels

    BACKEND = "compiled"
except ImportError:  # extension not built on this machine
    from . import _pykernels as kernels

    BACKEND = "pure"

__all__ = ["kernels", "BACKEND"]
