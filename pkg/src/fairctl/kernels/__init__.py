"""Fixpoint kernel backends.

The compiled Cython kernel is used when it built and the system has at most
64 states; otherwise the pure-Python kernel is used.  Set FAIRCTL_KERNEL=pure
to force the fallback, FAIRCTL_KERNEL=compiled to require the extension.
"""

from __future__ import annotations

import os
from typing import List, Optional

from . import pure

_compiled = None
_want = os.environ.get("FAIRCTL_KERNEL", "")
if _want != "pure":
    try:
        from . import _speed as _compiled  # type: ignore[no-redef]
    except ImportError:
        _compiled = None
if _want == "compiled" and _compiled is None:
    raise ImportError("FAIRCTL_KERNEL=compiled but the extension is not built")

BACKEND = "compiled" if _compiled is not None else "pure"


class Kernel:
    """Fixpoint operations bound to one successor table."""

    __slots__ = ("_mod", "_h", "backend", "n")

    def __init__(self, succ_masks: List[int], force: Optional[str] = None):
        self.n = len(succ_masks)
        use_compiled = _compiled is not None and self.n <= 64 and force != "pure"
        if force == "compiled" and not use_compiled:
            raise ValueError("compiled kernel unavailable for this system")
        self._mod = _compiled if use_compiled else pure
        self.backend = self._mod.NAME
        self._h = self._mod.make(succ_masks)

    def preimage(self, a: int) -> int:
        return self._mod.preimage(self._h, a)

    def box(self, a: int) -> int:
        return self._mod.box(self._h, a)

    def eu(self, a: int, b: int, r: int) -> int:
        return self._mod.eu(self._h, a, b, r)

    def ar(self, a: int, b: int) -> int:
        return self._mod.ar(self._h, a, b)

    def eg(self, a: int, b: int) -> int:
        return self._mod.eg(self._h, a, b)

    def af(self, a: int, b: int, r: int) -> int:
        return self._mod.af(self._h, a, b, r)
