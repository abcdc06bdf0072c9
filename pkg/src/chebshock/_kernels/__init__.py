"""Hot evaluation kernels with a compiled core and a numpy fallback.

The compiled Cython extension is preferred when it imported cleanly;
setting the environment variable ``CHEBSHOCK_PURE_PYTHON=1`` forces the
numpy implementation (useful for benchmarking the two against each other).
"""

import os

from . import reference

if os.environ.get("CHEBSHOCK_PURE_PYTHON", "") not in ("", "0"):
    _impl = reference
    BACKEND = "fallback"
else:
    try:
        from . import _chebcore as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = reference
        BACKEND = "fallback"

cheb_eval = _impl.cheb_eval
cheb_der_eval = _impl.cheb_der_eval
cheb_der_eval_many = _impl.cheb_der_eval_many
hermite_rho = _impl.hermite_rho

__all__ = [
    "BACKEND",
    "cheb_eval",
    "cheb_der_eval",
    "cheb_der_eval_many",
    "hermite_rho",
    "reference",
]
