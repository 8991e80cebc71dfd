"""Double-precision kernel selection.

The compiled extension is used when it imports; set ``JANSSEN_PURE_PYTHON=1``
to force the pure-Python fallback.
"""

import os

if os.environ.get("JANSSEN_PURE_PYTHON") == "1":
    from ._fallback import box_sum, damped_abs, disc_sum

    BACKEND = "python"
else:
    try:
        from ._kernels import box_sum, damped_abs, disc_sum

        BACKEND = "compiled"
    except ImportError:
        from ._fallback import box_sum, damped_abs, disc_sum

        BACKEND = "python"

__all__ = ["BACKEND", "box_sum", "damped_abs", "disc_sum"]
