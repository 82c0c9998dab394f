"""Kernel selection.

The compiled kernels are used when the extension was built; otherwise the
pure-Python ones. Set ``TAPEMACHINE_PURE_PYTHON=1`` to force the fallback.
"""

import os

from tapemachine import _pykernels as python

try:
    from tapemachine import _ckernels as compiled
except ImportError:  # extension not built
    compiled = None

if compiled is not None and os.environ.get("TAPEMACHINE_PURE_PYTHON", "") in ("", "0"):
    active = compiled
else:
    active = python

available = {"python": python}
if compiled is not None:
    available["compiled"] = compiled


def get(name: str = "auto"):
    """Return a kernel module by name: ``auto``, ``compiled`` or ``python``."""
    if name == "auto":
        return active
    try:
        return available[name]
    except KeyError:
        raise ValueError(f"kernel {name!r} is not available (have: {', '.join(available)})") from None
