"""Kernel selection: compiled extension when available, NumPy fallback
otherwise.  ``BACKEND`` records which one is live."""

from . import _ampcore_py as _fallback

try:
    from . import _ampcore as _impl
    BACKEND = "compiled"
except ImportError:  # extension not built on this install
    _impl = _fallback
    BACKEND = "numpy"

rician_amp = _impl.rician_amp
cascade_accum = _impl.cascade_accum

# Always importable for direct comparison in tests/benchmarks.
fallback = _fallback
