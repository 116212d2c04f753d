"""Worker-count policy.

Resolution order:
1. FRACWAVE_THREADS environment variable (explicit cap)
2. ``os.cpu_count()``

The resolved count is what ``scipy.fft`` receives as ``workers=`` and what
bounds the probe-point thread pools of the quadrature routes::

    export FRACWAVE_THREADS=4
"""

from __future__ import annotations

import os

THREADS_ENV = "FRACWAVE_THREADS"


def _env_threads() -> int | None:
    """Read the worker cap from the environment.

    Returns:
        The cap, or None when the variable is unset or empty.

    Raises:
        ValueError: If the variable is set to something other than a positive integer.
    """
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return None
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value < 1:
        raise ValueError(
            f"Invalid {THREADS_ENV}={raw!r}.\n"
            "\n"
            "The worker cap must be a positive integer, for example:\n"
            f"  export {THREADS_ENV}=4\n"
            "\n"
            "Unset it to use every available core.\n"
        )
    return value


def resolve_workers(requested: int | None = None) -> int:
    """Resolve the number of workers for a parallel section.

    Args:
        requested: Worker count asked for by the caller, or None for "as many
            as allowed".

    Returns:
        A positive worker count, never above the FRACWAVE_THREADS cap.
    """
    available = os.cpu_count() or 1
    cap = _env_threads()
    if cap is not None:
        available = min(available, cap)
    if requested is None:
        return available
    return max(1, min(requested, available))
