"""Backend selection for the integer polynomial kernels.

The compiled module is used when it was built; setting the environment
variable ``TQLAB_PURE_PYTHON=1`` forces the pure-Python fallback.
"""

import os

if os.environ.get("TQLAB_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
trim = _impl.trim
add = _impl.add
sub = _impl.sub
mul = _impl.mul
scale = _impl.scale
content = _impl.content
divexact = _impl.divexact
primitive = _impl.primitive
gcd = _impl.gcd
eval_complex = _impl.eval_complex
