"""Small shared helpers."""

from __future__ import annotations

import numpy as np


def readonly_array(a, dtype=None) -> np.ndarray:
    """Copy into a fresh array and lock it against writes.

    Fitted models and datasets advertise immutability; locking the buffers
    makes accidental mutation fail loudly instead of corrupting shared state.
    """
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a
