"""Propagation kernels with backend selection at import time.

The compiled extension is preferred when it built successfully; otherwise
the pure-Python kernel is used. ``BACKEND`` records the choice. Both
implementations share one contract and are interchangeable; the pure-Python
kernel stays importable under its own name for cross-checks and benchmarks.
"""

from ._rk4_py import rk4_pair as rk4_pair_python

try:
    from ._rk4_cy import rk4_pair as rk4_pair_compiled
except ImportError:
    rk4_pair_compiled = None

if rk4_pair_compiled is not None:
    BACKEND = "compiled"
    rk4_pair = rk4_pair_compiled
else:
    BACKEND = "python"
    rk4_pair = rk4_pair_python

__all__ = ["rk4_pair", "rk4_pair_python", "rk4_pair_compiled", "BACKEND"]
